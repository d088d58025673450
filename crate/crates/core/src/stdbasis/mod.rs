//! Reductions, `S_k`-processes and the standard basis algorithms.
//!
//! All computations happen modulo a [`Cut`]: coordinate `i` is known modulo
//! `t_i^{cut_i}` and orders at or beyond it count as infinite. With the cut at
//! or above the relevant conductor this quotient is exact.

mod basis;
mod engine;
mod pipeline;

use alloc::vec::Vec;

pub use basis::{BasisElement, BasisRole, BasisSet};
pub use engine::{
    push_distinct, Engine, Exponents, FinalReduction, Mode, ReductionStep, Saturation, SkProcess,
    Skip, Term,
};
pub use pipeline::{
    analyze_ideal, analyze_ring, branch_semigroup, BranchData, IdealAnalysis, RingAnalysis,
    RingOptions,
};

use crate::curve::{Cut, Expr, RingElement, ValueVector};
use crate::error::{Error, Result};
use crate::values::NumericalSemigroup;

fn engine(h: Option<&BasisSet>, g: &BasisSet, cut: &Cut) -> Engine {
    match h {
        Some(h) => Engine::module(cut.clone(), g.clone(), h.clone()),
        None => Engine::ring(cut.clone(), g.clone()),
    }
}

/// A `k`-reduction of `f` modulo `(H, G)`, or modulo `G` alone when `h` is
/// `None`; the lexicographically least `(h, α)` is chosen.
pub fn try_reduce(
    f: &RingElement,
    h: Option<&BasisSet>,
    g: &BasisSet,
    k: usize,
    cut: &Cut,
) -> Option<ReductionStep> {
    let e = engine(h, g, cut);
    e.try_reduce(f, k, Mode::Full, Skip::None)
        .map(|(t, c)| ReductionStep {
            c,
            alpha: t.alpha,
            h: t.h,
            k,
        })
}

/// Reduces `f` over ascending coordinates until no reduction applies.
pub fn final_reduction(
    f: RingElement,
    h: Option<&BasisSet>,
    g: &BasisSet,
    cut: &Cut,
) -> Result<FinalReduction> {
    engine(h, g, cut).final_reduction(f, Mode::Full, Skip::None)
}

/// Every normalized `S_k`-process of `(H, G)` with a side below `ρ` somewhere.
pub fn sk_processes(
    h: Option<&BasisSet>,
    g: &BasisSet,
    k: usize,
    rho: &ValueVector,
    cut: &Cut,
) -> Result<Vec<SkProcess>> {
    engine(h, g, cut).all_processes(k, rho)
}

/// Enlarges `H₀` by nonzero final reductions of bounded `S_k`-processes until
/// every one vanishes.
pub fn algorithm1(h0: &BasisSet, g: &BasisSet, rho: &ValueVector, cut: &Cut) -> Result<BasisSet> {
    let mut e = Engine::module(cut.clone(), g.clone(), h0.clone());
    e.saturate(Mode::Full, Some(rho), "m")?;
    Ok(e.into_parts().1.expect("module mode"))
}

/// The ring version of [`algorithm1`], with `H = {1}`.
pub fn algorithm2(g0: &BasisSet, sigma: &ValueVector, cut: &Cut) -> Result<BasisSet> {
    let mut e = Engine::ring(cut.clone(), g0.clone());
    e.saturate(Mode::Full, Some(sigma), "s")?;
    Ok(e.into_parts().0)
}

/// Drops elements that reduce modulo the remaining ones.
pub fn minimalize(h: Option<&BasisSet>, g: &BasisSet, cut: &Cut) -> BasisSet {
    let mut e = engine(h, g, cut);
    e.minimalize(Mode::Full);
    let (ring, module) = e.into_parts();
    module.unwrap_or(ring)
}

/// A basis restricted to coordinate `k` together with generators of the
/// elements vanishing at `k`.
#[derive(Clone, Debug)]
pub struct RestrictedRun {
    /// Elements with finite `v_k` whose `k`-th values form a standard basis.
    pub basis: BasisSet,
    /// Generators of `{f : v_k(f) = ∞}`.
    pub kernel: Vec<RingElement>,
}

/// Standard basis of the image of the ring on branch `k`, with full tuples,
/// and generators of the ideal of elements vanishing on branch `k`.
pub fn restricted_ring_basis(g0: &BasisSet, k: usize, cut: &Cut, prefix: &str) -> Result<RestrictedRun> {
    let mut e = Engine::ring(cut.clone(), g0.clone());
    let sat = e.saturate(Mode::Coordinate(k), None, prefix)?;
    let mut kernel = sat.kernel;
    for b in e.ring_basis().iter() {
        if !b.element.value().get(k).is_finite() {
            push_distinct(&mut kernel, b.element.clone());
        }
    }
    for z in e.boundary(k)? {
        push_distinct(&mut kernel, z);
    }
    e.minimalize(Mode::Coordinate(k));
    let (ring, _) = e.into_parts();
    Ok(RestrictedRun {
        basis: finite_at(&ring, k),
        kernel,
    })
}

fn finite_at(set: &BasisSet, k: usize) -> BasisSet {
    let mut out = BasisSet::new(set.role());
    for b in set.iter() {
        if b.element.value().get(k).is_finite() {
            out.push(b.name.clone(), b.element.clone()).expect("names stay distinct");
        }
    }
    out
}

/// Generators of `{f ∈ I : v_k(f) = ∞}` for the module `I` generated by `h`.
///
/// `g` must be a standard basis of the ring image on branch `k` and
/// `ring_kernel` generators of the ring elements vanishing there. The kernel
/// collects the vanishing final reductions of `S_k`-processes (the pairings of
/// their syzygies), the generators already vanishing at `k`, products of `h`
/// with `ring_kernel`, and the minimal products reaching the cut.
pub fn vanishing_module_generators(
    h: &BasisSet,
    g: &BasisSet,
    ring_kernel: &[RingElement],
    k: usize,
    cut: &Cut,
    prefix: &str,
) -> Result<RestrictedRun> {
    let mut e = Engine::module(cut.clone(), g.clone(), h.clone());
    let sat = e.saturate(Mode::Coordinate(k), None, prefix)?;
    let mut kernel = sat.kernel;
    let module = e.module_basis().expect("module mode").clone();
    for b in module.iter() {
        if !b.element.value().get(k).is_finite() {
            push_distinct(&mut kernel, b.element.clone());
            continue;
        }
        for z in ring_kernel {
            let v = z.value().odot(b.element.value());
            if cut.clamp(&v).is_all_infinite() {
                continue;
            }
            let series = cut.mul(z.series(), b.element.series())?;
            let prov = z.provenance().mul(&Expr::atom(&b.name));
            let p = cut.element(series, prov)?;
            if !p.is_zero() {
                push_distinct(&mut kernel, p);
            }
        }
    }
    for z in e.boundary(k)? {
        push_distinct(&mut kernel, z);
    }
    e.minimalize(Mode::Coordinate(k));
    let (_, module) = e.into_parts();
    Ok(RestrictedRun {
        basis: finite_at(&module.expect("module mode"), k),
        kernel,
    })
}

/// Elements supported on branch `i` alone whose branch-`i` values form a
/// standard basis of the corresponding single-branch module, and the
/// conductor of those values over `Γ_i`.
///
/// `supported` must generate the elements of the module vanishing on every
/// other branch; `g` is a branch-`i` standard basis of the ring.
pub fn build_bi(
    supported: &[RingElement],
    g: &BasisSet,
    semigroup: &NumericalSemigroup,
    i: usize,
    cut: &Cut,
    prefix: &str,
) -> Result<(BasisSet, i64)> {
    let mut h0 = BasisSet::new(BasisRole::Ideal);
    for (n, z) in supported.iter().enumerate() {
        if z.value().get(i).is_finite() {
            h0.push_unique(alloc::format!("{}{}", prefix, n + 1), z.clone())?;
        }
    }
    if h0.is_empty() {
        return Err(Error::MissingData(alloc::format!(
            "elements supported on branch {} alone",
            i + 1
        )));
    }
    let mut e = Engine::module(cut.clone(), g.clone(), h0);
    e.saturate(Mode::Coordinate(i), None, prefix)?;
    e.minimalize(Mode::Coordinate(i));
    let (_, module) = e.into_parts();
    let bi = finite_at(&module.expect("module mode"), i);
    let values: Vec<i64> = bi
        .iter()
        .filter_map(|b| b.element.value().get(i).finite())
        .collect();
    let delta = semigroup.module_conductor(&values)?;
    Ok((bi, delta))
}
