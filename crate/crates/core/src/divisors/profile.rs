use super::lattice::{DivValue, Lattice};

/// `|M_x(n)|` for every threshold, from two sorted arrays.
///
/// A divisor `d` is maximal for `x` exactly when `d <= x < d * lambda(n/d)`,
/// so the count is the number of divisors `<= x` minus the number of exit
/// values `<= x`.
#[derive(Clone, Debug)]
pub struct DivisorProfile<T> {
    divisors: Vec<T>,
    exits: Vec<T>,
}

impl<T: DivValue> DivisorProfile<T> {
    pub fn build(lattice: &Lattice<T>) -> Self {
        let pairs = lattice.divisors_with_exits();
        let mut divisors = Vec::with_capacity(pairs.len());
        let mut exits = Vec::with_capacity(pairs.len());
        for (d, e) in pairs {
            divisors.push(d);
            if let Some(e) = e {
                exits.push(e);
            }
        }
        divisors.sort_unstable();
        exits.sort_unstable();
        DivisorProfile { divisors, exits }
    }

    /// Ascending divisors of `n`.
    pub fn divisors(&self) -> &[T] {
        &self.divisors
    }

    pub fn count_at(&self, x: &T) -> u64 {
        let entered = self.divisors.partition_point(|d| d <= x);
        let left = self.exits.partition_point(|e| e <= x);
        (entered - left) as u64
    }

    /// `(d, |M_d(n)|)` for each divisor `d` in ascending order, by one merge sweep.
    pub fn entries(&self) -> Vec<(T, u64)> {
        let mut out = Vec::with_capacity(self.divisors.len());
        let mut j = 0;
        for (i, d) in self.divisors.iter().enumerate() {
            while j < self.exits.len() && &self.exits[j] <= d {
                j += 1;
            }
            out.push((d.clone(), (i + 1 - j) as u64));
        }
        out
    }
}
