//! Divisor maps that certify `|M_x(n)| <= |M_x(2^a m)|`.
//!
//! A map `f: D(n) -> D(m)` qualifies when, for all divisors `d, d'` of `n`:
//!
//! * (a) `f(d) <= d`;
//! * (b) `(m/f(d)) / (n/d) <= min(1, lambda(m/f(d)) / lambda(n/d))`;
//! * (c) `f(d) = 2^i f(d')` forces `d = 2^j d'`.
//!
//! Maps are stored as closed-form rules on exponent vectors and tabulated only
//! when verified.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::arith::Factorization;
use crate::divisors::tau;
use crate::error::{Error, Result};

/// Largest `tau(n)` that `verify_reducing` will tabulate.
pub const VERIFY_CAP: u64 = 1 << 20;

type Rule = Arc<dyn Fn(&[u32]) -> Vec<u32> + Send + Sync>;

/// A map from the divisors of `domain` to the divisors of `codomain`.
///
/// The rule takes the exponent vector of a divisor, aligned with
/// `domain.factors()`, and returns one aligned with `codomain.factors()`.
#[derive(Clone)]
pub struct ReducingFunctionSpec {
    pub domain: Factorization,
    pub codomain: Factorization,
    rule: Rule,
}

impl fmt::Debug for ReducingFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ReducingFunctionSpec({} -> {})", self.domain, self.codomain)
    }
}

impl ReducingFunctionSpec {
    /// Wraps an arbitrary rule. Nothing is checked until `verify_reducing`.
    pub fn from_rule(
        domain: Factorization,
        codomain: Factorization,
        rule: impl Fn(&[u32]) -> Vec<u32> + Send + Sync + 'static,
    ) -> Self {
        ReducingFunctionSpec {
            domain,
            codomain,
            rule: Arc::new(rule),
        }
    }

    pub fn identity(n: &Factorization) -> Self {
        Self::from_rule(n.clone(), n.clone(), |e| e.to_vec())
    }

    pub fn apply(&self, exponents: &[u32]) -> Vec<u32> {
        (self.rule)(exponents)
    }

    /// Image of a divisor given by value. Panics if `d` does not divide the domain.
    pub fn apply_value(&self, d: &BigUint) -> BigUint {
        let e = exponents_of(&self.domain, d).expect("argument divides the domain");
        value_of(&self.codomain, &self.apply(&e))
    }
}

fn index_of(f: &Factorization, p: &BigUint) -> Option<usize> {
    f.factors().iter().position(|(q, _)| q == p)
}

fn exponents_of(f: &Factorization, d: &BigUint) -> Option<Vec<u32>> {
    let mut rest = d.clone();
    let mut out = Vec::with_capacity(f.omega());
    for (p, a) in f.factors() {
        let mut e = 0;
        while e < *a && (&rest % p) == BigUint::ZERO {
            rest /= p;
            e += 1;
        }
        out.push(e);
    }
    rest.is_one().then_some(out)
}

pub(crate) fn value_of(f: &Factorization, exponents: &[u32]) -> BigUint {
    f.factors()
        .iter()
        .zip(exponents)
        .fold(BigUint::one(), |acc, ((p, _), e)| acc * p.pow(*e))
}

fn factorization_of(mut pairs: Vec<(BigUint, u32)>) -> Factorization {
    pairs.retain(|(_, e)| *e > 0);
    pairs.sort();
    Factorization::new(pairs).expect("primes supplied by caller")
}

/// `p^a q^b -> p^{a-c} q^{b+1}` with `c = floor((a+1)/(b+2))`, valid when `q < p^c`.
pub fn make_exponent_shift(
    p: &BigUint,
    q: &BigUint,
    a: u32,
    b: u32,
) -> Result<ReducingFunctionSpec> {
    let two = BigUint::from(2u32);
    if p == q || p == &two || q == &two {
        return Err(Error::PreconditionViolated(format!(
            "need distinct odd primes, got {p} and {q}"
        )));
    }
    let c = (a + 1) / (b + 2);
    if q >= &p.pow(c) {
        return Err(Error::PreconditionViolated(format!(
            "{q} >= {p}^{c} so the exponent shift does not apply"
        )));
    }
    let domain = factorization_of(vec![(p.clone(), a), (q.clone(), b)]);
    let codomain = factorization_of(vec![(p.clone(), a - c), (q.clone(), b + 1)]);
    let (dp, dq) = (index_of(&domain, p), index_of(&domain, q));
    let (cp, cq) = (index_of(&codomain, p), index_of(&codomain, q));
    let width = codomain.omega();
    let rule = move |e: &[u32]| {
        let i = dp.map_or(0, |k| e[k]);
        let j = dq.map_or(0, |k| e[k]);
        let (ni, nj) = if i < (b + 1 - j) * c { (i, j) } else { (i - c, j + 1) };
        let mut out = vec![0; width];
        if let Some(k) = cp {
            out[k] = ni;
        }
        if let Some(k) = cq {
            out[k] = nj;
        }
        out
    };
    Ok(ReducingFunctionSpec::from_rule(domain, codomain, rule))
}

/// `p^a -> p^b q_1 ... q_k` for primes `p < q_1 < ... < q_k`, valid when
/// `p^{a-2} > q_1 ... q_{k-1} q_k^2`. With no `q`s this is the identity.
pub fn make_two_adic(p: &BigUint, qs: &[BigUint], a: u32) -> Result<ReducingFunctionSpec> {
    let domain = factorization_of(vec![(p.clone(), a)]);
    if qs.is_empty() {
        return Ok(ReducingFunctionSpec::identity(&domain));
    }
    let mut prev = p;
    for q in qs {
        if q <= prev {
            return Err(Error::PreconditionViolated(
                "primes must increase strictly above p".into(),
            ));
        }
        prev = q;
    }
    let k = qs.len();
    let head: BigUint = qs[..k - 1].iter().product();
    let last = &qs[k - 1];
    // p^{a-2} > head * last^2, multiplied through by p^2
    if p.pow(a) <= p * p * &head * last * last {
        return Err(Error::PreconditionViolated(format!(
            "{p}^({a}-2) does not exceed {head} * {last}^2"
        )));
    }
    // largest b with p^{a-2b} >= head
    let mut b = a / 2;
    while p.pow(a - 2 * b) < head {
        b -= 1;
    }
    // c_j = min { c : p^c >= q_1...q_j } for j < k, c_k = a - b
    let mut cs = Vec::with_capacity(k + 1);
    let mut prefix = BigUint::one();
    let mut c = 0u32;
    cs.push(0);
    for q in &qs[..k - 1] {
        prefix *= q;
        while p.pow(c) < prefix {
            c += 1;
        }
        cs.push(c);
    }
    cs.push(a - b);

    let mut pairs = vec![(p.clone(), b)];
    pairs.extend(qs.iter().map(|q| (q.clone(), 1)));
    let codomain = factorization_of(pairs);
    let has_p = b > 0;
    let offset = usize::from(has_p);
    let width = codomain.omega();
    let rule = move |e: &[u32]| {
        let i = e[0];
        let j = (0..=k).rev().find(|&j| cs[j] <= a - i).expect("c_0 = 0");
        let pe = (b + cs[j] + i) as i64 - a as i64;
        debug_assert!(pe >= 0);
        let mut out = vec![0; width];
        if has_p {
            out[0] = pe as u32;
        }
        for t in j..k {
            out[offset + t] = 1;
        }
        out
    };
    Ok(ReducingFunctionSpec::from_rule(domain, codomain, rule))
}

fn coprime(a: &Factorization, b: &Factorization) -> bool {
    a.factors()
        .iter()
        .all(|(p, _)| index_of(b, p).is_none())
}

/// `d_1 d_2 -> f_1(d_1) f_2(d_2)` on coprime domains and codomains.
pub fn product_reducing(
    f1: &ReducingFunctionSpec,
    f2: &ReducingFunctionSpec,
) -> Result<ReducingFunctionSpec> {
    if !coprime(&f1.domain, &f2.domain) || !coprime(&f1.codomain, &f2.codomain) {
        return Err(Error::PreconditionViolated(
            "product of reducing maps needs coprime domains and codomains".into(),
        ));
    }
    let domain = f1.domain.mul(&f2.domain);
    let codomain = f1.codomain.mul(&f2.codomain);
    let pos = |outer: &Factorization, inner: &Factorization| -> Vec<usize> {
        inner
            .factors()
            .iter()
            .map(|(p, _)| index_of(outer, p).expect("merged"))
            .collect()
    };
    let (in1, in2) = (pos(&domain, &f1.domain), pos(&domain, &f2.domain));
    let (out1, out2) = (pos(&codomain, &f1.codomain), pos(&codomain, &f2.codomain));
    let (r1, r2) = (f1.rule.clone(), f2.rule.clone());
    let width = codomain.omega();
    let rule = move |e: &[u32]| {
        let e1: Vec<u32> = in1.iter().map(|&k| e[k]).collect();
        let e2: Vec<u32> = in2.iter().map(|&k| e[k]).collect();
        let mut out = vec![0; width];
        for (k, v) in out1.iter().zip(r1(&e1)) {
            out[*k] = v;
        }
        for (k, v) in out2.iter().zip(r2(&e2)) {
            out[*k] = v;
        }
        out
    };
    Ok(ReducingFunctionSpec::from_rule(domain, codomain, rule))
}

/// `g` after `f`.
pub fn compose_reducing(
    f: &ReducingFunctionSpec,
    g: &ReducingFunctionSpec,
) -> Result<ReducingFunctionSpec> {
    if f.codomain != g.domain {
        return Err(Error::DomainMismatch(format!(
            "codomain {} differs from domain {}",
            f.codomain, g.domain
        )));
    }
    let (rf, rg) = (f.rule.clone(), g.rule.clone());
    Ok(ReducingFunctionSpec::from_rule(
        f.domain.clone(),
        g.codomain.clone(),
        move |e| rg(&rf(e)),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    /// The image is not a divisor of the codomain.
    Range,
    A,
    B,
    C,
}

/// First failure found by `verify_reducing`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub clause: Clause,
    pub d: BigUint,
    pub other: Option<BigUint>,
}

fn odd_key(f: &Factorization, e: &[u32]) -> Vec<(BigUint, u32)> {
    f.factors()
        .iter()
        .zip(e)
        .filter(|((p, _), x)| **x > 0 && *p != BigUint::from(2u32))
        .map(|((p, _), x)| (p.clone(), *x))
        .collect()
}

/// Tabulates the map over every divisor of the domain and checks all clauses.
pub fn verify_reducing(spec: &ReducingFunctionSpec) -> Result<std::result::Result<(), Violation>> {
    let t = tau(&spec.domain);
    if t > BigUint::from(VERIFY_CAP) {
        return Err(Error::CapExceeded {
            what: "tau(domain)",
            size: t,
            cap: VERIFY_CAP,
        });
    }
    let n = spec.domain.value();
    let m = spec.codomain.value();
    let dom_exps = spec.domain.exponents();
    let cod_exps = spec.codomain.exponents();
    let mut seen: HashMap<Vec<(BigUint, u32)>, (Vec<(BigUint, u32)>, BigUint)> = HashMap::new();
    // clause (c) is reported only after (a) and (b) hold everywhere
    let mut pending_c = None;

    let mut e = vec![0u32; dom_exps.len()];
    loop {
        let d = value_of(&spec.domain, &e);
        let img = spec.apply(&e);
        let fail = |clause| Violation {
            clause,
            d: d.clone(),
            other: None,
        };
        if img.len() != cod_exps.len() || img.iter().zip(&cod_exps).any(|(x, a)| x > a) {
            return Ok(Err(fail(Clause::Range)));
        }
        let fd = value_of(&spec.codomain, &img);
        if fd > d {
            return Ok(Err(fail(Clause::A)));
        }
        // (m/fd)/(n/d) <= 1 and (m/fd)/(n/d) <= lam_m/lam_n, cross-multiplied
        let co_img = m / &fd;
        let co_dom = n / &d;
        let cofactor_exps: Vec<u32> = cod_exps.iter().zip(&img).map(|(a, x)| a - x).collect();
        let dom_cofactor: Vec<u32> = dom_exps.iter().zip(&e).map(|(a, x)| a - x).collect();
        let lam_m = least_prime_of_cofactor(&spec.codomain, &cofactor_exps);
        let lam_n = least_prime_of_cofactor(&spec.domain, &dom_cofactor);
        if co_img > co_dom || &co_img * &lam_n > &lam_m * &co_dom {
            return Ok(Err(fail(Clause::B)));
        }
        let key = odd_key(&spec.codomain, &img);
        let src = odd_key(&spec.domain, &e);
        match seen.get(&key) {
            Some((prev_src, prev_d)) if *prev_src != src => {
                if pending_c.is_none() {
                    pending_c = Some(Violation {
                        clause: Clause::C,
                        d,
                        other: Some(prev_d.clone()),
                    });
                }
            }
            Some(_) => {}
            None => {
                seen.insert(key, (src, d.clone()));
            }
        }
        // next exponent vector
        let mut i = 0;
        loop {
            if i == e.len() {
                return Ok(pending_c.map_or(Ok(()), Err));
            }
            if e[i] < dom_exps[i] {
                e[i] += 1;
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

/// Least prime with a positive exponent in `cofactor`, or 1.
fn least_prime_of_cofactor(f: &Factorization, cofactor: &[u32]) -> BigUint {
    f.factors()
        .iter()
        .zip(cofactor)
        .find(|(_, x)| **x > 0)
        .map_or_else(BigUint::one, |((p, _), _)| p.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn f(pairs: &[(u64, u32)]) -> Factorization {
        Factorization::from_u64_pairs(pairs).unwrap()
    }

    #[test]
    fn identity_is_reducing() {
        let n = f(&[(2, 3), (3, 2), (7, 1)]);
        assert_eq!(verify_reducing(&ReducingFunctionSpec::identity(&n)).unwrap(), Ok(()));
    }

    #[test]
    fn collapse_to_one_fails_clause_b() {
        let spec = ReducingFunctionSpec::from_rule(f(&[(3, 3)]), f(&[(3, 2)]), |_| vec![0]);
        let v = verify_reducing(&spec).unwrap().unwrap_err();
        assert_eq!(v.clause, Clause::B);
    }

    #[test]
    fn shift_examples() {
        let s = make_exponent_shift(&b(3), &b(5), 3, 0).unwrap();
        assert_eq!(s.codomain.value(), &b(15));
        assert_eq!(s.apply_value(&b(27)), b(15));
        assert_eq!(verify_reducing(&s).unwrap(), Ok(()));

        let s = make_exponent_shift(&b(5), &b(3), 2, 0).unwrap();
        assert_eq!(s.apply_value(&b(25)), b(15));
        assert_eq!(verify_reducing(&s).unwrap(), Ok(()));

        assert!(make_exponent_shift(&b(7), &b(3), 0, 0).is_err());
        assert!(make_exponent_shift(&b(3), &b(11), 3, 0).is_err());
        assert!(make_exponent_shift(&b(2), &b(3), 5, 0).is_err());
    }

    #[test]
    fn two_adic_examples() {
        let id = make_two_adic(&b(2), &[], 5).unwrap();
        assert_eq!(id.codomain.value(), &b(32));
        assert_eq!(verify_reducing(&id).unwrap(), Ok(()));

        let s = make_two_adic(&b(2), &[b(3)], 6).unwrap();
        assert_eq!(s.codomain, f(&[(2, 3), (3, 1)]));
        for i in 0..=3u32 {
            assert_eq!(s.apply_value(&b(1 << i)), b(1 << i));
        }
        for i in 4..=6u32 {
            assert_eq!(s.apply_value(&b(1 << i)), b(3 << (i - 3)));
        }
        assert_eq!(verify_reducing(&s).unwrap(), Ok(()));

        assert!(make_two_adic(&b(2), &[b(3), b(5)], 7).is_err());
    }

    #[test]
    fn product_and_compose() {
        let swap = ReducingFunctionSpec::from_rule(f(&[(7, 2)]), f(&[(5, 2)]), |e| e.to_vec());
        let swap2 = ReducingFunctionSpec::from_rule(f(&[(5, 2)]), f(&[(3, 2)]), |e| e.to_vec());
        let chain = compose_reducing(&swap, &swap2).unwrap();
        assert_eq!(chain.domain.value(), &b(49));
        assert_eq!(chain.codomain.value(), &b(9));
        assert_eq!(verify_reducing(&chain).unwrap(), Ok(()));
        assert!(matches!(compose_reducing(&swap2, &swap), Err(Error::DomainMismatch(_))));

        let rest = ReducingFunctionSpec::identity(&f(&[(2, 2), (3, 1)]));
        let wide = product_reducing(&swap, &rest).unwrap();
        assert_eq!(wide.domain.value(), &b(49 * 12));
        assert_eq!(wide.codomain.value(), &b(25 * 12));
        assert_eq!(verify_reducing(&wide).unwrap(), Ok(()));

        let clash = ReducingFunctionSpec::identity(&f(&[(3, 1)]));
        assert!(product_reducing(&rest, &clash).is_err());
    }
}
