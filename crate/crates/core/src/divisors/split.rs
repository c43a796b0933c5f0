use num_bigint::BigUint;

use crate::arith::Factorization;

fn divisors_of(powers: &[(BigUint, u32)]) -> Vec<BigUint> {
    let mut out = vec![BigUint::from(1u32)];
    for (p, a) in powers {
        let mut next = Vec::with_capacity(out.len() * (*a as usize + 1));
        for d in &out {
            let mut v = d.clone();
            for _ in 0..=*a {
                next.push(v.clone());
                v *= p;
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// `#{d | n : d <= x}` by splitting the prime powers into two halves of
/// similar divisor count and pairing them. `None` when either half has more
/// than `cap` divisors.
pub fn split_count_up_to(f: &Factorization, x: &BigUint, cap: u64) -> Option<BigUint> {
    let mut powers: Vec<(BigUint, u32)> = f.factors().to_vec();
    powers.sort_by_key(|(_, a)| std::cmp::Reverse(*a));
    let (mut left, mut right) = (Vec::new(), Vec::new());
    let (mut tl, mut tr) = (1f64, 1f64);
    for pa in powers {
        let k = pa.1 as f64 + 1.0;
        if tl <= tr {
            tl *= k;
            left.push(pa);
        } else {
            tr *= k;
            right.push(pa);
        }
    }
    if tl > cap as f64 || tr > cap as f64 {
        return None;
    }
    let small = divisors_of(&left);
    let large = divisors_of(&right);
    // as a grows, x / a shrinks, so the cut in `large` only moves down
    let mut cut = large.len();
    let mut total = BigUint::from(0u32);
    for a in &small {
        if a > x {
            break;
        }
        let q = x / a;
        while cut > 0 && large[cut - 1] > q {
            cut -= 1;
        }
        total += cut;
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisors::count_divisors_up_to;

    #[test]
    fn agrees_with_walk() {
        let f = Factorization::from_exponents(&[5, 3, 2, 1, 1, 1, 1]);
        let n = f.value().clone();
        for x in [0u64, 1, 2, 17, 1000, 123_456, 9_999_999] {
            let x = BigUint::from(x);
            assert_eq!(
                split_count_up_to(&f, &x, 1 << 20),
                Some(count_divisors_up_to(&f, &x)),
                "x = {x}"
            );
        }
        assert_eq!(split_count_up_to(&f, &n, 1 << 20), Some(BigUint::from(1152u32)));
        assert_eq!(split_count_up_to(&f, &n, 4), None);
    }
}
