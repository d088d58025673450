//! Tropical structures on value vectors: the value semiring, its semimodules,
//! membership with certificates, numerical semigroups and conductors.
//!
//! A semiring presentation lists generators `γ_1, …, γ_m`; its members are the
//! infima of finitely many `⊙`-monomials `γ^α`. Membership of `γ` is decided per
//! finite coordinate `k`: some monomial `≥ γ` must attain `γ_k` exactly. A
//! semimodule presentation adds generators `λ_j`, with monomials `γ^α ⊙ λ_j`.

mod semigroup;

pub use semigroup::NumericalSemigroup;

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::curve::{Value, ValueVector};
use crate::diophantine::Diophantine;
use crate::error::{Error, Result};

/// Entrywise `⊕`/`⊙` on value vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TropicalOp {
    Oplus,
    Odot,
}

pub fn tropical_op(a: &ValueVector, b: &ValueVector, op: TropicalOp) -> ValueVector {
    match op {
        TropicalOp::Oplus => a.oplus(b),
        TropicalOp::Odot => a.odot(b),
    }
}

/// One `⊙`-monomial of a certificate: `γ^exponents`, times the module generator
/// `module_generator` when deciding semimodule membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateTerm {
    pub module_generator: Option<usize>,
    pub exponents: Vec<u32>,
    pub value: ValueVector,
}

/// The outcome of a membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// The infimum of the listed monomials equals the queried vector.
    Member(Vec<CertificateTerm>),
    /// No monomial dominating the vector attains it at this coordinate.
    NotMember { coordinate: usize },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// Generators of a value semiring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiringPresentation {
    r: usize,
    generators: Vec<ValueVector>,
}

impl SemiringPresentation {
    /// Generators with a zero coordinate must be `0̲` (which is dropped, being
    /// the empty monomial); negative entries are rejected.
    pub fn new(r: usize, generators: Vec<ValueVector>) -> Result<Self> {
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if g.len() != r {
                return Err(Error::Arity {
                    expected: r,
                    found: g.len(),
                });
            }
            let zeros = g.iter().filter(|v| *v == Value::Finite(0)).count();
            if g.iter().any(|v| matches!(v, Value::Finite(k) if k < 0)) {
                return Err(Error::HypothesisViolation(alloc::format!(
                    "semiring generator {} has a negative entry",
                    g
                )));
            }
            if zeros == r || g.is_all_infinite() {
                continue;
            }
            if zeros > 0 {
                return Err(Error::HypothesisViolation(alloc::format!(
                    "semiring generator {} has a zero entry but is not the zero vector",
                    g
                )));
            }
            gens.push(g);
        }
        Ok(Self { r, generators: gens })
    }

    pub fn branches(&self) -> usize {
        self.r
    }

    pub fn generators(&self) -> &[ValueVector] {
        &self.generators
    }

    /// Value of the monomial `γ^alpha`.
    pub fn monomial(&self, alpha: &[u32]) -> ValueVector {
        let mut v = ValueVector::zero(self.r);
        for (g, &a) in self.generators.iter().zip(alpha) {
            if a > 0 {
                v = v.odot_pow(g, a);
            }
        }
        v
    }

    /// Generators with a finite entry at coordinate `k`, with those entries.
    fn support(&self, k: usize) -> (Vec<usize>, Vec<i64>) {
        self.generators
            .iter()
            .enumerate()
            .filter_map(|(j, g)| g.get(k).finite().map(|w| (j, w)))
            .unzip()
    }

    /// Searches a monomial `base ⊙ γ^α ≥ target` whose `k`-th entry is exactly
    /// `target_k`.
    fn attain(&self, base: &ValueVector, target: &ValueVector, k: usize) -> Option<Vec<u32>> {
        let (Some(t), Some(b)) = (target.get(k).finite(), base.get(k).finite()) else {
            return None;
        };
        if t < b {
            return None;
        }
        let (idx, weights) = self.support(k);
        let solver = Diophantine::new(&weights, t - b);
        let mut found = None;
        solver.search(t - b, |sub| {
            let mut alpha = alloc::vec![0u32; self.generators.len()];
            for (&j, &a) in idx.iter().zip(sub) {
                alpha[j] = a;
            }
            let v = base.odot(&self.monomial(&alpha));
            if target.le(&v) {
                found = Some(alpha);
                true
            } else {
                false
            }
        });
        found
    }

    /// Decides `γ ∈ Γ` with a certificate.
    pub fn member(&self, gamma: &ValueVector) -> Membership {
        assert_eq!(gamma.len(), self.r, "value vector length");
        let zero = ValueVector::zero(self.r);
        let mut terms: Vec<CertificateTerm> = Vec::new();
        for k in gamma.finite_indices() {
            if terms.iter().any(|t| t.value.get(k) == gamma.get(k)) {
                continue;
            }
            match self.attain(&zero, gamma, k) {
                Some(alpha) => {
                    let value = self.monomial(&alpha);
                    terms.push(CertificateTerm {
                        module_generator: None,
                        exponents: alpha,
                        value,
                    });
                }
                None => return Membership::NotMember { coordinate: k },
            }
        }
        Membership::Member(terms)
    }

    /// The semigroup `Γ_i ∩ ℕ` visible in the generators: finite `i`-entries of
    /// every generator.
    fn coordinate_semigroup(&self, i: usize) -> Result<NumericalSemigroup> {
        NumericalSemigroup::new(&self.support(i).1)
    }

    /// Smallest `x` such that some monomial is `∞` off coordinate `i` and `x` at
    /// `i`, bounded above by a product of generators; `None` if no such
    /// monomial exists.
    fn single_branch_base(&self, i: usize) -> Option<i64> {
        let mut total = 0;
        for j in (0..self.r).filter(|&j| j != i) {
            let best = self
                .generators
                .iter()
                .filter(|g| !g.get(j).is_finite())
                .filter_map(|g| g.get(i).finite())
                .min()?;
            total += best;
        }
        Some(total)
    }

    /// The conductor of the semiring, treated as a semimodule over itself.
    pub fn conductor(&self) -> Result<ValueVector> {
        SemimodulePresentation::new(self.clone(), alloc::vec![ValueVector::zero(self.r)])?
            .relative_conductor()
    }

    /// The minimal generating set of the semiring generated by `vals`: every
    /// value expressible by the remaining ones is discarded.
    pub fn minimal_generators(r: usize, vals: &[ValueVector]) -> Result<Vec<ValueVector>> {
        let mut kept: Vec<ValueVector> = vals.to_vec();
        kept.sort();
        kept.dedup();
        kept.retain(|v| !v.is_all_infinite() && *v != ValueVector::zero(r));
        let mut i = 0;
        while i < kept.len() {
            let others: Vec<ValueVector> = kept
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v.clone())
                .collect();
            if Self::new(r, others)?.member(&kept[i]).is_member() {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(kept)
    }
}

/// Generators `λ_1, …, λ_s` of a semimodule over a semiring presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemimodulePresentation {
    semiring: SemiringPresentation,
    generators: Vec<ValueVector>,
}

impl SemimodulePresentation {
    pub fn new(semiring: SemiringPresentation, generators: Vec<ValueVector>) -> Result<Self> {
        for g in &generators {
            if g.len() != semiring.r {
                return Err(Error::Arity {
                    expected: semiring.r,
                    found: g.len(),
                });
            }
        }
        Ok(Self {
            semiring,
            generators,
        })
    }

    pub fn semiring(&self) -> &SemiringPresentation {
        &self.semiring
    }

    pub fn generators(&self) -> &[ValueVector] {
        &self.generators
    }

    /// Decides `λ ∈ M` with a certificate.
    pub fn member(&self, lambda: &ValueVector) -> Membership {
        let r = self.semiring.r;
        assert_eq!(lambda.len(), r, "value vector length");
        let mut terms: Vec<CertificateTerm> = Vec::new();
        for k in lambda.finite_indices() {
            if terms.iter().any(|t| t.value.get(k) == lambda.get(k)) {
                continue;
            }
            let hit = self.generators.iter().enumerate().find_map(|(j, base)| {
                self.semiring
                    .attain(base, lambda, k)
                    .map(|alpha| (j, alpha))
            });
            match hit {
                Some((j, alpha)) => {
                    let value = self.generators[j].odot(&self.semiring.monomial(&alpha));
                    terms.push(CertificateTerm {
                        module_generator: Some(j),
                        exponents: alpha,
                        value,
                    });
                }
                None => return Membership::NotMember { coordinate: k },
            }
        }
        Membership::Member(terms)
    }

    /// The conductor `ϱ`: least vector with `ϱ + ℕ̄^r ⊆ M`.
    ///
    /// Coordinate `i` is the conductor of the single-branch set
    /// `{x : (∞,…,x,…,∞) ∈ M}`, found by descending from a proven upper bound.
    /// A coordinate whose single-branch set is empty is reported as `∞`.
    pub fn relative_conductor(&self) -> Result<ValueVector> {
        let r = self.semiring.r;
        if self.generators.is_empty() {
            return Err(Error::MissingData("semimodule generators".to_string()));
        }
        let mut out = Vec::with_capacity(r);
        for i in 0..r {
            let lowest = self.generators.iter().filter_map(|g| g.get(i).finite()).min();
            let (Some(lowest), Some(base)) = (lowest, self.semiring.single_branch_base(i)) else {
                out.push(Value::Infinite);
                continue;
            };
            let coordinate = self.semiring.coordinate_semigroup(i)?;
            let mut c = lowest + base + coordinate.conductor();
            while c > lowest && self.member(&ValueVector::single(r, i, c - 1)).is_member() {
                c -= 1;
            }
            out.push(Value::Finite(c));
        }
        Ok(ValueVector::new(out))
    }

    /// The minimal generating set of the semimodule generated by `vals`.
    pub fn minimal_generators(
        semiring: &SemiringPresentation,
        vals: &[ValueVector],
    ) -> Result<Vec<ValueVector>> {
        let mut kept: Vec<ValueVector> = vals.to_vec();
        kept.sort();
        kept.dedup();
        kept.retain(|v| !v.is_all_infinite());
        let mut i = 0;
        while i < kept.len() {
            let others: Vec<ValueVector> = kept
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v.clone())
                .collect();
            if Self::new(semiring.clone(), others)?.member(&kept[i]).is_member() {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(kept)
    }
}

/// Candidate generators of a value set that is known only modulo a cut.
///
/// The value set is generated by `bases` over the semiring generated by
/// `ring`, with all values computed modulo a cut at or above `bound`, and
/// `bound` dominates its conductor. Above the conductor any finite entry may be
/// replaced by `∞`, so every minimal generator either has all finite entries
/// below `bound` or a single finite entry `x` with `bound_i ≤ x < bound_i + e_i`,
/// `e_i` the multiplicity of branch `i`. The candidates are the capped
/// monomials over `bases` together with those single-entry vectors.
pub fn completion_candidates(
    ring: &[ValueVector],
    bases: &[ValueVector],
    bound: &ValueVector,
    multiplicity: &[i64],
) -> Vec<ValueVector> {
    let r = bound.len();
    let cap: Vec<i64> = bound.iter().map(|b| b.finite().unwrap_or(i64::MAX)).collect();
    let mut out: Vec<ValueVector> = bases.iter().map(|v| v.clamp_to_cut(&cap)).collect();
    for base in bases {
        for k in 0..r {
            if !base.get(k).is_finite() {
                continue;
            }
            let usable: Vec<&ValueVector> =
                ring.iter().filter(|g| matches!(g.get(k), Value::Finite(w) if w > 0)).collect();
            let mut stack: Vec<(usize, ValueVector)> = alloc::vec![(0, base.clone())];
            while let Some((from, m)) = stack.pop() {
                let capped = m.clamp_to_cut(&cap);
                if capped != m && !capped.is_all_infinite() {
                    out.push(capped);
                }
                for (j, g) in usable.iter().enumerate().skip(from) {
                    let next = m.odot(g);
                    if matches!(next.get(k), Value::Finite(x) if x < cap[k]) {
                        stack.push((j, next));
                    }
                }
            }
        }
    }
    for i in 0..r {
        if cap[i] == i64::MAX {
            continue;
        }
        for x in cap[i]..cap[i] + multiplicity[i].max(1) {
            out.push(ValueVector::single(r, i, x));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Re-evaluates a certificate: the infimum of its monomials.
pub fn certificate_value(r: usize, terms: &[CertificateTerm]) -> ValueVector {
    terms
        .iter()
        .fold(ValueVector::infinite(r), |acc, t| acc.oplus(&t.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn vv(s: &str) -> ValueVector {
        s.parse().unwrap()
    }

    fn space_gamma() -> SemiringPresentation {
        let gens = [
            "6,6", "8,8", "10,10", "17,17", "19,19", "25,inf", "27,inf", "29,inf", "32,inf",
            "34,inf", "36,inf", "inf,21", "inf,25", "inf,32", "inf,34", "inf,36",
        ];
        SemiringPresentation::new(2, gens.iter().map(|s| vv(s)).collect()).unwrap()
    }

    #[test]
    fn membership_examples() {
        let g = space_gamma();
        let m = g.member(&vv("25,26"));
        let Membership::Member(terms) = &m else {
            panic!("(25,26) must be a member")
        };
        assert_eq!(certificate_value(2, terms), vv("25,26"));
        assert_eq!(g.member(&vv("24,26")), Membership::NotMember { coordinate: 0 });
        let Membership::Member(zero) = g.member(&vv("0,0")) else {
            panic!("0 is a member")
        };
        assert!(zero.iter().all(|t| t.exponents.iter().all(|&a| a == 0)));
        assert!(g.member(&vv("inf,inf")).is_member());
    }

    #[test]
    fn conductor_of_space_example() {
        assert_eq!(space_gamma().conductor().unwrap(), vv("31,31"));
    }

    #[test]
    fn plane_example_lambda() {
        let gamma = SemiringPresentation::new(
            3,
            ["1,1,1", "inf,2,3", "2,inf,2", "3,2,inf"].iter().map(|s| vv(s)).collect(),
        )
        .unwrap();
        assert_eq!(gamma.conductor().unwrap(), vv("5,4,5"));
        let lambda = SemimodulePresentation::new(
            gamma,
            ["1,1,1", "inf,2,3", "2,inf,2", "3,2,inf", "inf,inf,4", "inf,3,inf", "4,inf,inf"]
                .iter()
                .map(|s| vv(s))
                .collect(),
        )
        .unwrap();
        let rho = lambda.relative_conductor().unwrap();
        assert_eq!(rho, vv("4,3,4"));
        assert!(lambda.member(&rho.odot(&vv("1,1,1"))).is_member());
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(SemiringPresentation::new(2, vec![vv("0,3")]).is_err());
        assert!(SemiringPresentation::new(2, vec![vv("0,0")]).unwrap().generators().is_empty());
        assert!(SemiringPresentation::new(2, vec![vv("1,2,3")]).is_err());
    }

    #[test]
    fn minimal_generators() {
        let g = SemiringPresentation::new(1, vec![vv("1")]).unwrap();
        let out = SemimodulePresentation::minimal_generators(&g, &[vv("3"), vv("4")]).unwrap();
        assert_eq!(out, vec![vv("3")]);
        let gens = SemiringPresentation::minimal_generators(
            2,
            &[vv("6,6"), vv("25,inf"), vv("31,inf"), vv("12,12")],
        )
        .unwrap();
        assert_eq!(gens, vec![vv("6,6"), vv("25,inf")]);
    }

    #[test]
    fn smooth_conductor() {
        let line = SemiringPresentation::new(1, vec![vv("1")]).unwrap();
        assert_eq!(line.conductor().unwrap(), vv("0"));
        let axes = SemiringPresentation::new(2, vec![vv("1,inf"), vv("inf,1")]).unwrap();
        assert_eq!(axes.conductor().unwrap(), vv("1,1"));
    }
}
