//! Products of primorials and prime powers.
//!
//! ```text
//! sum  := expr (('+' | '-') expr)*
//! expr := term ('*' term)*
//! term := INT '#' | INT ('^' INT)? | INT ('e' | 'E') INT
//! ```
//!
//! Whitespace is ignored everywhere. The `e` form is decimal scientific
//! notation, so `4e532` is `4 * 10^532`. A sum that goes negative is an
//! error.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::factor::Factorization;
use super::sieve::primorial;
use crate::error::{Error, Result};

/// Primorial arguments above this are rejected rather than sieved.
const MAX_PRIMORIAL_ARG: u64 = 1 << 32;

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn int(&mut self) -> Result<BigUint> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("nonempty digit run"))
    }

    fn small_int(&mut self, what: &str) -> Result<u32> {
        let at = self.pos;
        let v = self.int()?;
        v.to_u32().ok_or(Error::Parse {
            position: at,
            message: format!("{what} {v} is too large"),
        })
    }

    fn term(&mut self) -> Result<BigUint> {
        let at = {
            self.skip_ws();
            self.pos
        };
        let base = self.int()?;
        match self.peek() {
            Some(b'#') => {
                self.pos += 1;
                let n = base
                    .to_u64()
                    .filter(|&n| n <= MAX_PRIMORIAL_ARG)
                    .ok_or(Error::Parse {
                        position: at,
                        message: format!("primorial argument {base} is too large"),
                    })?;
                Ok(primorial(n))
            }
            Some(b'^') => {
                self.pos += 1;
                let e = self.small_int("exponent")?;
                Ok(base.pow(e))
            }
            Some(b'e' | b'E') => {
                self.pos += 1;
                let e = self.small_int("decimal exponent")?;
                Ok(base * BigUint::from(10u32).pow(e))
            }
            _ => Ok(base),
        }
    }
}

impl Cursor<'_> {
    fn product(&mut self) -> Result<BigUint> {
        let mut acc = self.term()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc *= self.term()?;
        }
        Ok(acc)
    }
}

/// Exact value of an expression.
pub fn parse_primorial_expr(s: &str) -> Result<BigUint> {
    let mut cur = Cursor {
        bytes: s.as_bytes(),
        pos: 0,
    };
    let mut acc = cur.product()?;
    loop {
        match cur.peek() {
            None => return Ok(acc),
            Some(b'+') => {
                cur.pos += 1;
                acc += cur.product()?;
            }
            Some(b'-') => {
                let at = cur.pos;
                cur.pos += 1;
                let rhs = cur.product()?;
                if rhs > acc {
                    return Err(Error::Parse {
                        position: at,
                        message: "result would be negative".into(),
                    });
                }
                acc -= rhs;
            }
            Some(c) => return Err(cur.err(format!("unexpected {:?}", c as char))),
        }
    }
}

/// Canonical text form of a factorization.
///
/// When the odd part has gap-free, non-increasing exponents from 3 upward and
/// the powers of 2 and 3 are at least the exponent of 5, the value is written
/// as descending primorials followed by the leftover powers of 3 and 2, e.g.
/// `13#*7#*3^2*2`. Anything else is written as ascending prime powers.
pub fn render_primorial(f: &Factorization) -> String {
    render_as_primorials(f).unwrap_or_else(|| render_prime_powers(f))
}

fn render_prime_powers(f: &Factorization) -> String {
    if f.is_one() {
        return "1".into();
    }
    f.factors()
        .iter()
        .map(|(p, e)| power(&p.to_string(), *e))
        .collect::<Vec<_>>()
        .join("*")
}

fn power(base: &str, e: u32) -> String {
    if e == 1 {
        base.to_string()
    } else {
        format!("{base}^{e}")
    }
}

fn render_as_primorials(f: &Factorization) -> Option<String> {
    let small = f.small_primes()?;
    let primes = super::sieve::small_primes();
    let last = match small.last() {
        Some((p, _)) => primes.binary_search(p).ok()?,
        None => 0,
    };
    let mut exps = vec![0u32; last.max(2) + 1];
    for (p, e) in &small {
        exps[primes.binary_search(p).ok()?] = *e;
    }
    // exps[0] is the power of 2, exps[1] of 3, exps[2] of 5 ...
    let top = exps[2];
    if exps[1] < top || exps[0] < top {
        return None;
    }
    for w in exps[1..].windows(2) {
        if w[1] > w[0] {
            return None;
        }
    }
    let mut parts = Vec::new();
    for level in 1..=top {
        let last = exps.iter().rposition(|&e| e >= level)?;
        parts.push(format!("{}#", primes[last]));
    }
    if exps[1] > top {
        parts.push(power("3", exps[1] - top));
    }
    if exps[0] > top {
        parts.push(power("2", exps[0] - top));
    }
    if parts.is_empty() {
        return Some("1".into());
    }
    Some(parts.join("*"))
}

/// Decimal rendering that keeps only the leading and trailing digits of long
/// values, with the digit count.
pub fn abbreviate_decimal(n: &BigUint, keep: usize) -> String {
    let s = n.to_string();
    if s.len() <= 2 * keep + 3 {
        return s;
    }
    format!("{}...{} ({} digits)", &s[..keep], &s[s.len() - keep..], s.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> BigUint {
        parse_primorial_expr(s).unwrap()
    }

    #[test]
    fn simple_terms() {
        assert_eq!(v("5#*2^2"), BigUint::from(120u32));
        assert_eq!(v("3^3"), BigUint::from(27u32));
        assert_eq!(v(" 7 "), BigUint::from(7u32));
        assert_eq!(v("1#"), BigUint::from(1u32));
        assert_eq!(v("0#*4"), BigUint::from(4u32));
        assert_eq!(v("2 ^ 10 * 3"), BigUint::from(3072u32));
        assert_eq!(v("4e3"), BigUint::from(4000u32));
        assert_eq!(v("10^3+7"), BigUint::from(1007u32));
        assert_eq!(v("5#*2 - 3^2 + 1"), BigUint::from(52u32));
    }

    #[test]
    fn headline_constant_shape() {
        let n = v("863#*53#*13#*7#*5#*3^3*2^5");
        let s = n.to_string();
        assert_eq!(s.len(), 393);
        assert!(s.starts_with("3448"));
    }

    #[test]
    fn errors_carry_position() {
        for (input, at) in [("", 0), ("5#*", 3), ("5#x", 2), ("2^", 2), ("*3", 0), ("3 3", 2), ("2-3", 1), ("4+", 2)] {
            match parse_primorial_expr(input) {
                Err(Error::Parse { position, .. }) => assert_eq!(position, at, "{input:?}"),
                other => panic!("{input:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn renders_primorial_products() {
        let f = Factorization::from_exponents(&[10, 8, 5, 4, 3, 3]);
        // 2^10 3^8 5^5 7^4 11^3 13^3
        assert_eq!(render_primorial(&f), "13#*13#*13#*7#*5#*3^3*2^5");
        let f = Factorization::from_u64_pairs(&[(3, 2), (5, 1)]).unwrap();
        assert_eq!(render_primorial(&f), "3^2*5");
        assert_eq!(render_primorial(&Factorization::one()), "1");
        let f = Factorization::from_u64_pairs(&[(2, 3)]).unwrap();
        assert_eq!(render_primorial(&f), "2^3");
        let f = Factorization::from_u64_pairs(&[(7, 1)]).unwrap();
        assert_eq!(render_primorial(&f), "7");
    }

    #[test]
    fn abbreviation() {
        assert_eq!(abbreviate_decimal(&BigUint::from(12345u32), 3), "12345");
        let big = BigUint::from(10u32).pow(40);
        assert_eq!(abbreviate_decimal(&big, 4), "1000...0000 (41 digits)");
    }
}
