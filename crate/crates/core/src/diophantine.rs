//! Nonnegative solutions of single linear Diophantine equations with positive
//! weights, enumerated in lexicographic order of the exponent vector.

use alloc::vec;
use alloc::vec::Vec;

/// Solver for `Σ α_j w_j = s`, `α ≥ 0`, for targets up to a fixed maximum.
#[derive(Clone, Debug)]
pub struct Diophantine {
    weights: Vec<i64>,
    max_target: i64,
    // reach[j][s]: s is a nonnegative combination of weights[j..].
    reach: Vec<Vec<bool>>,
}

impl Diophantine {
    /// All weights must be positive.
    pub fn new(weights: &[i64], max_target: i64) -> Self {
        assert!(weights.iter().all(|&w| w > 0), "weights must be positive");
        let m = weights.len();
        let size = (max_target.max(0) + 1) as usize;
        let mut reach = vec![vec![false; size]; m + 1];
        reach[m][0] = true;
        for j in (0..m).rev() {
            let w = weights[j] as usize;
            for s in 0..size {
                reach[j][s] = reach[j + 1][s] || (s >= w && reach[j][s - w]);
            }
        }
        Self {
            weights: weights.to_vec(),
            max_target,
            reach,
        }
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn is_representable(&self, target: i64) -> bool {
        target >= 0 && target <= self.max_target && self.reach[0][target as usize]
    }

    /// Visits the solutions of `Σ α_j w_j = target` in lexicographic order until
    /// `visit` returns true; returns whether it did.
    pub fn search(&self, target: i64, mut visit: impl FnMut(&[u32]) -> bool) -> bool {
        assert!(target <= self.max_target, "target beyond solver range");
        if !self.is_representable(target) {
            return false;
        }
        let mut alpha = vec![0u32; self.weights.len()];
        self.rec(0, target, &mut alpha, &mut visit)
    }

    fn rec(
        &self,
        j: usize,
        rem: i64,
        alpha: &mut [u32],
        visit: &mut impl FnMut(&[u32]) -> bool,
    ) -> bool {
        if j == self.weights.len() {
            return visit(alpha);
        }
        let w = self.weights[j];
        let mut a = 0;
        while a * w <= rem {
            let left = rem - a * w;
            if self.reach[j + 1][left as usize] {
                alpha[j] = a as u32;
                if self.rec(j + 1, left, alpha, visit) {
                    return true;
                }
            }
            a += 1;
        }
        alpha[j] = 0;
        false
    }
}

/// Visits every `α ≥ 0` with `Σ α_j w_j < bound` in lexicographic order,
/// together with its weighted sum.
pub fn for_each_below(weights: &[i64], bound: i64, mut visit: impl FnMut(&[u32], i64)) {
    assert!(weights.iter().all(|&w| w > 0), "weights must be positive");
    fn rec(
        weights: &[i64],
        j: usize,
        sum: i64,
        bound: i64,
        alpha: &mut [u32],
        visit: &mut impl FnMut(&[u32], i64),
    ) {
        if j == weights.len() {
            visit(alpha, sum);
            return;
        }
        let mut s = sum;
        let mut a = 0;
        while s < bound {
            alpha[j] = a;
            rec(weights, j + 1, s, bound, alpha, visit);
            a += 1;
            s += weights[j];
        }
        alpha[j] = 0;
    }
    if bound <= 0 {
        return;
    }
    let mut alpha = vec![0u32; weights.len()];
    rec(weights, 0, 0, bound, &mut alpha, &mut visit);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_solutions() {
        let d = Diophantine::new(&[2, 3], 20);
        let mut sols = Vec::new();
        d.search(12, |a| {
            sols.push(a.to_vec());
            false
        });
        assert_eq!(sols, vec![vec![0, 4], vec![3, 2], vec![6, 0]]);
        assert!(!d.search(1, |_| true));
        assert!(d.search(0, |a| a == [0, 0]));
        assert!(d.is_representable(7));
    }

    #[test]
    fn below_bound() {
        let mut n = 0;
        for_each_below(&[6, 8], 17, |a, s| {
            assert!(s < 17);
            assert_eq!(s, 6 * a[0] as i64 + 8 * a[1] as i64);
            n += 1;
        });
        // 0, 6, 12, 8, 14, 16
        assert_eq!(n, 6);
    }
}
