//! `F_p` and `F_{p^2}` for word-sized odd primes.
//!
//! `F_{p^2}` elements are pairs `(u, v)` meaning `u + v sqrt(n)`, where `n`
//! is the smallest quadratic nonsquare mod `p`.

use crate::arith::{factorize_u64, is_prime_u64, primality::mul_mod, primality::pow_mod};
use crate::error::{Error, Result};

/// Element `u + v sqrt(n)` of `F_{p^2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp2 {
    pub u: u64,
    pub v: u64,
}

impl Fp2 {
    pub const ONE: Fp2 = Fp2 { u: 1, v: 0 };

    pub fn from_fp(u: u64) -> Self {
        Fp2 { u, v: 0 }
    }

    pub fn in_base_field(self) -> bool {
        self.v == 0
    }
}

/// Arithmetic context for one prime, with the factorizations of `p - 1` and
/// `p + 1` used for element orders.
#[derive(Clone, Debug)]
pub struct Field {
    p: u64,
    nonsquare: u64,
    minus: Vec<(u64, u32)>,
    plus: Vec<(u64, u32)>,
}

impl Field {
    /// Factors `p - 1` and `p + 1` itself.
    pub fn new(p: u64) -> Result<Self> {
        Self::with_factors(p, factorize_u64(p - 1), factorize_u64(p + 1))
    }

    pub fn with_factors(p: u64, minus: Vec<(u64, u32)>, plus: Vec<(u64, u32)>) -> Result<Self> {
        if p < 3 || p >= 1 << 62 || !is_prime_u64(p) {
            return Err(Error::PreconditionViolated(format!(
                "need an odd prime below 2^62, got {p}"
            )));
        }
        let value = |fs: &[(u64, u32)]| {
            fs.iter()
                .try_fold(1u64, |acc, &(q, e)| acc.checked_mul(q.checked_pow(e)?))
        };
        if value(&minus) != Some(p - 1) || value(&plus) != Some(p + 1) {
            return Err(Error::PreconditionViolated(
                "factorizations do not match p - 1 and p + 1".into(),
            ));
        }
        let mut field = Field {
            p,
            nonsquare: 0,
            minus,
            plus,
        };
        field.nonsquare = (2..p).find(|&n| !field.is_square(n)).expect("p odd");
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn nonsquare(&self) -> u64 {
        self.nonsquare
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        (a % self.p != 0).then(|| self.pow(a, self.p - 2))
    }

    /// Euler's criterion; zero counts as a square.
    pub fn is_square(&self, a: u64) -> bool {
        let a = a % self.p;
        a == 0 || self.pow(a, (self.p - 1) / 2) == 1
    }

    /// A square root by Tonelli-Shanks, with the direct formula when
    /// `p = 3 mod 4`.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        let p = self.p;
        let a = a % p;
        if a == 0 {
            return Some(0);
        }
        if !self.is_square(a) {
            return None;
        }
        if p % 4 == 3 {
            return Some(self.pow(a, (p + 1) / 4));
        }
        let s = (p - 1).trailing_zeros();
        let q = (p - 1) >> s;
        let mut m = s;
        let mut c = self.pow(self.nonsquare, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, (q + 1) / 2);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let b = self.pow(c, 1 << (m - i - 1));
            r = self.mul(r, b);
            c = self.mul(b, b);
            t = self.mul(t, c);
            m = i;
        }
        Some(r)
    }

    pub fn mul2(&self, x: Fp2, y: Fp2) -> Fp2 {
        let vv = self.mul(self.mul(x.v, y.v), self.nonsquare);
        Fp2 {
            u: self.add(self.mul(x.u, y.u), vv),
            v: self.add(self.mul(x.u, y.v), self.mul(x.v, y.u)),
        }
    }

    pub fn add2(&self, x: Fp2, y: Fp2) -> Fp2 {
        Fp2 {
            u: self.add(x.u, y.u),
            v: self.add(x.v, y.v),
        }
    }

    pub fn sub2(&self, x: Fp2, y: Fp2) -> Fp2 {
        Fp2 {
            u: self.sub(x.u, y.u),
            v: self.sub(x.v, y.v),
        }
    }

    pub fn pow2(&self, mut x: Fp2, mut e: u64) -> Fp2 {
        let mut acc = Fp2::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul2(acc, x);
            }
            x = self.mul2(x, x);
            e >>= 1;
        }
        acc
    }

    /// `u^2 - n v^2`.
    pub fn norm(&self, x: Fp2) -> u64 {
        let vv = self.mul(self.mul(x.v, x.v), self.nonsquare);
        self.sub(self.mul(x.u, x.u), vv)
    }

    pub fn inv2(&self, x: Fp2) -> Option<Fp2> {
        let ni = self.inv(self.norm(x))?;
        Some(Fp2 {
            u: self.mul(x.u, ni),
            v: self.mul(self.neg(x.v), ni),
        })
    }

    pub fn div2(&self, x: Fp2, y: Fp2) -> Option<Fp2> {
        Some(self.mul2(x, self.inv2(y)?))
    }

    /// A square root of a base-field element inside `F_{p^2}`; always exists.
    pub fn sqrt_in_ext(&self, a: u64) -> Fp2 {
        match self.sqrt(a) {
            Some(r) => Fp2::from_fp(r),
            None => {
                // a = n w^2
                let w2 = self.mul(a, self.inv(self.nonsquare).expect("nonzero"));
                let w = self.sqrt(w2).expect("a / n is a square");
                Fp2 { u: 0, v: w }
            }
        }
    }

    /// The root `r` of `r^2 - a r + 1`, so `a = r + 1/r`. The other root is
    /// `1/r`.
    pub fn root_of_trace(&self, a: u64) -> Fp2 {
        let disc = self.sub(self.mul(a, a), 4 % self.p);
        let half = self.inv(2).expect("p odd");
        let sq = self.sqrt_in_ext(disc);
        let num = self.add2(Fp2::from_fp(a % self.p), sq);
        Fp2 {
            u: self.mul(num.u, half),
            v: self.mul(num.v, half),
        }
    }

    /// Multiplicative order of a nonzero `x`. Elements of `F_p^*` use `p - 1`,
    /// norm-one elements use `p + 1`, anything else the full `p^2 - 1`.
    pub fn order(&self, x: Fp2) -> Option<u64> {
        if x.u == 0 && x.v == 0 {
            return None;
        }
        let factors: Vec<(u64, u32)> = if x.in_base_field() {
            self.minus.clone()
        } else if self.norm(x) == 1 {
            self.plus.clone()
        } else {
            merge(&self.minus, &self.plus)
        };
        let mut ord: u64 = factors.iter().map(|&(q, e)| q.pow(e)).product();
        for (q, e) in factors {
            for _ in 0..e {
                if self.pow2(x, ord / q) == Fp2::ONE {
                    ord /= q;
                } else {
                    break;
                }
            }
        }
        Some(ord)
    }

    /// `ord_p(a)`: the order of `r` with `a = r + 1/r`.
    pub fn trace_order(&self, a: u64) -> u64 {
        self.order(self.root_of_trace(a)).expect("r is a unit")
    }
}

fn merge(a: &[(u64, u32)], b: &[(u64, u32)]) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = a.to_vec();
    for &(q, e) in b {
        match out.iter_mut().find(|(p, _)| *p == q) {
            Some(slot) => slot.1 += e,
            None => out.push((q, e)),
        }
    }
    out
}
