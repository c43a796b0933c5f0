use super::field::{Field, Fp2};
use super::graph::MarkoffTriple;
use crate::arith::Factorization;
use crate::error::{Error, Result};

/// Orders of the three coordinates of a triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleOrder {
    /// `ord_p` per coordinate; `None` for a coordinate equal to `+-2`.
    pub orders: [Option<u64>; 3],
    /// Set when some coordinate is `+-2`.
    pub special: bool,
    /// Maximum over the coordinates that have an order.
    pub ord: Option<u64>,
}

fn small_pairs(f: &Factorization) -> Result<Vec<(u64, u32)>> {
    f.small_primes()
        .ok_or_else(|| Error::PreconditionViolated("factorization exceeds u64".into()))
}

/// Builds the field for `p` from supplied factorizations of `p - 1`, `p + 1`.
pub fn field_from(p: u64, f_minus: &Factorization, f_plus: &Factorization) -> Result<Field> {
    Field::with_factors(p, small_pairs(f_minus)?, small_pairs(f_plus)?)
}

pub fn triple_order(
    p: u64,
    t: &MarkoffTriple,
    f_minus: &Factorization,
    f_plus: &Factorization,
) -> Result<TripleOrder> {
    Ok(triple_order_in(&field_from(p, f_minus, f_plus)?, t))
}

pub fn triple_order_in(field: &Field, t: &MarkoffTriple) -> TripleOrder {
    let p = field.p();
    let mut orders = [None; 3];
    for (slot, x) in orders.iter_mut().zip(t.coords()) {
        let x = x % p;
        if x != 2 && x != p - 2 {
            *slot = Some(field.trace_order(x));
        }
    }
    TripleOrder {
        orders,
        special: orders.iter().any(Option::is_none),
        ord: orders.iter().flatten().copied().max(),
    }
}

/// Result of one class count in the orbit `n -> s r^n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorvajaCount {
    /// Order of `r`.
    pub t: u64,
    pub d: u64,
    /// Classes `n mod t` whose coordinate has order dividing `d`.
    pub count: u64,
    /// Of those, classes whose coordinate is `+-2`.
    pub special: u64,
    /// `(3/2) max((6td)^(1/3), 4td/p)`.
    pub bound: f64,
}

impl CorvajaCount {
    pub fn holds(&self) -> bool {
        self.count as f64 <= self.bound
    }
}

pub fn corvaja_bound(p: u64, t: u64, d: u64) -> f64 {
    let td = t as f64 * d as f64;
    1.5 * (6.0 * td).cbrt().max(4.0 * td / p as f64)
}

/// Coordinate orders along the orbit, one per class `n mod t`, plus `t`.
///
/// The coordinate at `n` is `a (s r^n + 1/(s r^n)) / (r - 1/r)` with
/// `a = r + 1/r`. It satisfies `y_{n+1} = a y_n - y_{n-1}`, so it stays in
/// `F_p` once the first two terms do.
pub fn orbit_orders(field: &Field, r: Fp2, s: Fp2) -> Result<(u64, Vec<u64>)> {
    orbit_orders_with(field, r, s, |y| field.trace_order(y))
}

/// [`orbit_orders`] with a caller-supplied `ord_p`, e.g. a lookup table from
/// [`trace_order_table`].
pub fn orbit_orders_with(
    field: &Field,
    r: Fp2,
    s: Fp2,
    ord: impl Fn(u64) -> u64,
) -> Result<(u64, Vec<u64>)> {
    let p = field.p();
    let r_inv = field
        .inv2(r)
        .ok_or_else(|| Error::DegenerateInput("r = 0".into()))?;
    let trace = field.add2(r, r_inv);
    if !trace.in_base_field() {
        return Err(Error::PreconditionViolated(
            "r + 1/r is not in F_p".into(),
        ));
    }
    let a = trace.u;
    if a == 0 || a == 2 || a == p - 2 {
        return Err(Error::DegenerateInput(format!("r + 1/r = {a}")));
    }
    let t = field.order(r).expect("unit");
    let delta = field.sub2(r, r_inv);
    let coord = |x: Fp2| -> Option<Fp2> {
        let sum = field.add2(x, field.inv2(x)?);
        field.div2(field.mul2(trace, sum), delta)
    };
    let bad_s = || Error::DegenerateInput("s = 0".into());
    let y0 = coord(s).ok_or_else(bad_s)?;
    let y1 = coord(field.mul2(s, r)).ok_or_else(bad_s)?;
    if !y0.in_base_field() || !y1.in_base_field() {
        return Err(Error::PreconditionViolated(
            "orbit coordinates leave F_p for this s".into(),
        ));
    }
    let (mut prev, mut cur) = (y0.u, y1.u);
    let mut orders = Vec::with_capacity(t as usize);
    for _ in 0..t {
        orders.push(ord(prev));
        let next = field.sub(field.mul(a, cur), prev);
        prev = cur;
        cur = next;
    }
    Ok((t, orders))
}

/// `ord_p(x)` for every `x` in `F_p`.
pub fn trace_order_table(field: &Field) -> Vec<u64> {
    (0..field.p()).map(|x| field.trace_order(x)).collect()
}

pub fn corvaja_class_count(field: &Field, r: Fp2, s: Fp2, d: u64) -> Result<CorvajaCount> {
    let (t, orders) = orbit_orders(field, r, s)?;
    count_from_orders(field, t, &orders, d)
}

/// Counts classes for one `d`, given the output of [`orbit_orders`].
pub fn count_from_orders(field: &Field, t: u64, orders: &[u64], d: u64) -> Result<CorvajaCount> {
    let p = field.p();
    if d == 0 || ((p - 1) % d != 0 && (p + 1) % d != 0) {
        return Err(Error::PreconditionViolated(format!(
            "{d} divides neither p - 1 nor p + 1"
        )));
    }
    let hits = orders.iter().filter(|&&o| d % o == 0);
    let special = hits.clone().filter(|&&o| o <= 2).count() as u64;
    Ok(CorvajaCount {
        t,
        d,
        count: hits.count() as u64,
        special,
        bound: corvaja_bound(p, t, d),
    })
}

/// An `s` whose orbit starts at `(r + 1/r, b, c)` for some `c` in `F_p`, or
/// `None` when no such `c` exists.
pub fn orbit_seed(field: &Field, r: Fp2, b: u64) -> Option<Fp2> {
    let p = field.p();
    let r_inv = field.inv2(r)?;
    let trace = field.add2(r, r_inv);
    let a = trace.u;
    if !trace.in_base_field() || a == 0 {
        return None;
    }
    // c^2 - ab c + a^2 + b^2 needs a root in F_p
    let ab = field.mul(a, b);
    let disc = field.sub(
        field.mul(ab, ab),
        field.mul(4 % p, field.add(field.mul(a, a), field.mul(b, b))),
    );
    if !field.is_square(disc) {
        return None;
    }
    let delta = field.sub2(r, r_inv);
    let beta = field.div2(field.mul2(Fp2::from_fp(b), delta), trace)?;
    let beta_disc = field.sub2(field.mul2(beta, beta), Fp2::from_fp(4 % p));
    let sq = field.sqrt_in_ext(beta_disc.u);
    let half = field.inv(2)?;
    let s2 = field.add2(beta, sq);
    Some(Fp2 {
        u: field.mul(s2.u, half),
        v: field.mul(s2.v, half),
    })
}

/// The walk `(3, 3F_{2n-1}, 3F_{2n+1})` mod `p` over one period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibonacciOrbit {
    pub period: u64,
    /// First `n` whose triple has a coordinate of order `p - 1` or `p + 1`.
    pub first_hit: Option<u64>,
}

pub fn fibonacci_orbit(field: &Field) -> Result<FibonacciOrbit> {
    let p = field.p();
    if p <= 3 {
        return Err(Error::PreconditionViolated("need p > 3".into()));
    }
    let full = |x: u64| {
        let x = x % p;
        if x == 2 || x == p - 2 {
            return false;
        }
        let o = field.trace_order(x);
        o == p - 1 || o == p + 1
    };
    let three_full = full(3);
    let start = (1u64, 2u64);
    let (mut f1, mut f3) = start;
    let mut first_hit = None;
    let mut n = 1u64;
    loop {
        // step n is the triple (3, 3 F_{2n-1}, 3 F_{2n+1})
        if first_hit.is_none()
            && (three_full || full(field.mul(3, f1)) || full(field.mul(3, f3)))
        {
            first_hit = Some(n);
        }
        let next = field.sub(field.mul(3, f3), f1);
        f1 = f3;
        f3 = next;
        if (f1, f3) == start {
            return Ok(FibonacciOrbit {
                period: n,
                first_hit,
            });
        }
        n += 1;
    }
}

pub fn fibonacci_orbit_check(
    p: u64,
    f_minus: &Factorization,
    f_plus: &Factorization,
) -> Result<bool> {
    Ok(fibonacci_orbit(&field_from(p, f_minus, f_plus)?)?
        .first_hit
        .is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize_u64;

    fn fac(v: u64) -> Factorization {
        Factorization::from_u64_pairs(&factorize_u64(v)).unwrap()
    }

    #[test]
    fn order_examples() {
        let t = MarkoffTriple::new(3, 3, 3);
        let o = triple_order(7, &t, &fac(6), &fac(8)).unwrap();
        assert_eq!(o.ord, Some(8));
        let special = triple_order(7, &MarkoffTriple::new(2, 3, 5), &fac(6), &fac(8)).unwrap();
        assert!(special.special);
        assert_eq!(special.orders[0], None);
        let perm = triple_order(7, &MarkoffTriple::new(5, 2, 3), &fac(6), &fac(8)).unwrap();
        assert_eq!(perm.ord, special.ord);
    }

    #[test]
    fn orbit_counts_by_direct_powers() {
        let f = Field::new(31).unwrap();
        let r = f.root_of_trace(5);
        let s = (0..31).find_map(|b| orbit_seed(&f, r, b)).unwrap();
        let (t, orders) = orbit_orders(&f, r, s).unwrap();
        // recompute each coordinate from s r^n directly
        let r_inv = f.inv2(r).unwrap();
        let delta = f.sub2(r, r_inv);
        for n in 0..t {
            let x = f.mul2(s, f.pow2(r, n));
            let y = f
                .div2(f.mul2(f.add2(r, r_inv), f.add2(x, f.inv2(x).unwrap())), delta)
                .unwrap();
            assert!(y.in_base_field());
            assert_eq!(orders[n as usize], f.trace_order(y.u));
        }
        let c = count_from_orders(&f, t, &orders, 32).unwrap();
        assert_eq!(c.count, orders.iter().filter(|&&o| 32 % o == 0).count() as u64);
    }

    #[test]
    fn degenerate_trace() {
        let f = Field::new(13).unwrap();
        // r^2 = -1 gives r + 1/r = 0
        let r = f.root_of_trace(0);
        assert!(matches!(
            orbit_orders(&f, r, Fp2::ONE),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn fibonacci_small() {
        let f = Field::new(7).unwrap();
        let orbit = fibonacci_orbit(&f).unwrap();
        assert_eq!(orbit.first_hit, Some(1));
        // (3, 3, 6) is the first triple
        assert!(MarkoffTriple::new(3, 3, 6).is_solution(7));
        assert!(fibonacci_orbit(&Field::new(3).unwrap()).is_err());
    }
}
