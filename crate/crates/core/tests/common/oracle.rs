//! Value sets computed by linear algebra alone.
//!
//! For a finite-dimensional space `V` of series tuples, `γ` is a value of `V`
//! iff `V(γ) ⊋ V(γ + e_i)` for every `i`, where `V(γ)` is the subspace with
//! `v ≥ γ`: over an infinite field a generic combination of witnesses avoids
//! all proper subspaces at once. Dimensions come from ranks of coefficient
//! matrices modulo the prime `2^61 - 1`.

use std::collections::BTreeSet;

use num_traits::ToPrimitive;
use valbasis_core::{Rational, TruncatedSeries};

const P: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn sub(a: u64, b: u64) -> u64 {
    (a + P - b) % P
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    assert!(a != 0, "division by zero modulo p");
    pow(a, P - 2)
}

fn reduce(q: &Rational) -> u64 {
    let p = num_bigint::BigInt::from(P);
    let modp = |x: &num_bigint::BigInt| {
        let m = ((x % &p) + &p) % &p;
        m.to_u64().expect("residue fits")
    };
    mul(modp(q.numer()), inv(modp(q.denom())))
}

/// Incrementally maintained row echelon form.
#[derive(Clone)]
struct Echelon {
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    fn new() -> Self {
        Self { rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, mut row: Vec<u64>) {
        for (pivot, r) in &self.rows {
            let c = row[*pivot];
            if c != 0 {
                for (x, y) in row.iter_mut().zip(r) {
                    *x = sub(*x, mul(c, *y));
                }
            }
        }
        if let Some(pivot) = row.iter().position(|&x| x != 0) {
            let s = inv(row[pivot]);
            for x in row.iter_mut() {
                *x = mul(*x, s);
            }
            self.rows.push((pivot, row));
        }
    }
}

/// All `γ` with `lo ≤ γ ≤ hi` (finite entries) that are values of the span
/// of `gens`. Every generator must be known beyond `hi` on every branch.
pub fn value_box(gens: &[Vec<TruncatedSeries>], lo: &[i64], hi: &[i64]) -> BTreeSet<Vec<i64>> {
    let r = lo.len();
    for g in gens {
        for (i, s) in g.iter().enumerate() {
            if let Some(p) = s.precision() {
                assert!(p > hi[i] + 1, "generator known only below {} on branch {}", p, i + 1);
            }
        }
    }
    let floor: Vec<i64> = (0..r)
        .map(|i| {
            gens.iter()
                .filter_map(|g| g[i].leading().map(|(e, _)| e))
                .min()
                .unwrap_or(lo[i])
                .min(lo[i])
        })
        .collect();
    // row(i, j): coefficients of t_i^j across the generators.
    let row = |i: usize, j: i64| -> Vec<u64> {
        gens.iter()
            .map(|g| g[i].coefficient(j).map_or(0, |c| reduce(&c)))
            .collect()
    };
    // rank[γ] for γ in [lo, hi + 1], last coordinate fastest.
    let dims: Vec<usize> = (0..r).map(|i| (hi[i] - lo[i] + 2) as usize).collect();
    let total: usize = dims.iter().product();
    let mut rank = vec![0usize; total];
    let index = |g: &[i64]| -> usize {
        let mut k = 0;
        for i in 0..r {
            k = k * dims[i] + (g[i] - lo[i]) as usize;
        }
        k
    };
    let last = r - 1;
    let prefixes: usize = dims[..last].iter().product();
    for n in 0..prefixes {
        let mut gamma = vec![0i64; r];
        let mut m = n;
        for i in (0..last).rev() {
            gamma[i] = lo[i] + (m % dims[i]) as i64;
            m /= dims[i];
        }
        let mut ech = Echelon::new();
        for i in 0..last {
            for j in floor[i]..gamma[i] {
                ech.insert(row(i, j));
            }
        }
        for j in floor[last]..lo[last] {
            ech.insert(row(last, j));
        }
        for x in lo[last]..=hi[last] + 1 {
            gamma[last] = x;
            rank[index(&gamma)] = ech.rank();
            ech.insert(row(last, x));
        }
    }
    let mut out = BTreeSet::new();
    for k in 0..total {
        let mut gamma = vec![0i64; r];
        let mut m = k;
        for i in (0..r).rev() {
            gamma[i] = lo[i] + (m % dims[i]) as i64;
            m /= dims[i];
        }
        if (0..r).any(|i| gamma[i] > hi[i]) {
            continue;
        }
        let here = rank[k];
        let all = (0..r).all(|i| {
            let mut up = gamma.clone();
            up[i] += 1;
            rank[index(&up)] > here
        });
        if all {
            out.insert(gamma);
        }
    }
    out
}

/// Exponent vectors of total degree at most `d` in `n` variables.
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for k in 0..=d {
        for mut rest in monomials(n - 1, d - k) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}
