//! End-to-end computation of standard bases for the local ring and for
//! fractional ideals of a curve.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::curve::{value_of_series, CurveModel, Cut, RingElement, Value, ValueVector};
use crate::error::{Error, Result};
use crate::curve::vanishing_polynomial;
use crate::poly::Polynomial;
use crate::series::TruncatedSeries;
use crate::stdbasis::engine::{Engine, Mode};
use crate::stdbasis::{
    build_bi, restricted_ring_basis, vanishing_module_generators, BasisRole, BasisSet,
    RestrictedRun,
};
use crate::values::{
    completion_candidates, NumericalSemigroup, SemimodulePresentation, SemiringPresentation,
};

/// Knobs for [`analyze_ring`] and [`analyze_ideal`].
#[derive(Clone, Debug)]
pub struct RingOptions {
    /// Lower bound for the working precision on every branch.
    pub precision: Option<i64>,
    /// Replaces the default bound `σ` (ring) or `max(κ, σ)` (ideal); also
    /// serves as conductor bound when no vanishing element can be found.
    pub rho: Option<ValueVector>,
    /// Degree limit when searching polynomials vanishing on other branches.
    pub max_degree: u32,
    /// Use `∏_{j≠i} f_j` for plane curves with known branch equations.
    pub plane_shortcut: bool,
}

impl Default for RingOptions {
    fn default() -> Self {
        Self {
            precision: None,
            rho: None,
            max_degree: 6,
            plane_shortcut: true,
        }
    }
}

/// Per-branch data of the ring.
#[derive(Clone, Debug)]
pub struct BranchData {
    pub semigroup: NumericalSemigroup,
    /// Elements whose values on this branch form a standard basis of the
    /// branch ring, as full tuples.
    pub basis: BasisSet,
    /// Generators of the ideal of elements vanishing on this branch.
    pub kernel: Vec<RingElement>,
    /// Elements vanishing on every other branch whose values here form a
    /// standard basis of that single-branch module.
    pub vanishing: BasisSet,
    /// Minimal generators of the values of `vanishing` over the semigroup.
    pub vanishing_values: Vec<i64>,
    /// Conductor of those values.
    pub delta: i64,
}

#[derive(Clone, Debug)]
pub struct RingAnalysis {
    pub cut: Cut,
    /// A priori bound used to choose the cut.
    pub sigma_bound: ValueVector,
    pub branches: Vec<BranchData>,
    /// Conductor from the per-branch vanishing modules.
    pub sigma: ValueVector,
    /// The starting set of the full algorithm.
    pub initial: BasisSet,
    /// The standard basis before minimalization.
    pub standard_basis: BasisSet,
    /// A minimal standard basis.
    pub basis: BasisSet,
    /// Minimal generators of the value semiring.
    pub generators: Vec<ValueVector>,
    pub semiring: SemiringPresentation,
    /// Conductor of the semiring computed from its generators.
    pub conductor: ValueVector,
}

impl RingAnalysis {
    /// Multiplicity of each branch semigroup.
    pub fn multiplicities(&self) -> Vec<i64> {
        self.branches.iter().map(|b| b.semigroup.multiplicity()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct IdealAnalysis {
    pub cut: Cut,
    /// Per-branch conductors of the single-branch parts.
    pub kappa: ValueVector,
    /// The bound used by the algorithm.
    pub rho: ValueVector,
    pub vanishing: Vec<BasisSet>,
    pub standard_basis: BasisSet,
    pub basis: BasisSet,
    pub generators: Vec<ValueVector>,
    pub presentation: SemimodulePresentation,
    pub conductor: ValueVector,
}

/// The variables and the named generators, evaluated at `cut`.
pub(crate) fn initial_generators(curve: &CurveModel, cut: &Cut) -> Result<BasisSet> {
    let n = curve.nvars();
    let mut g = BasisSet::new(BasisRole::Ring);
    let mut named: Vec<(String, Polynomial)> = curve
        .variables()
        .iter()
        .enumerate()
        .map(|(j, v)| (v.clone(), Polynomial::variable(n, j)))
        .collect();
    named.extend(curve.generators().iter().cloned());
    for (name, p) in named {
        let e = curve.evaluate_cut(&p, cut, Some(&name))?;
        if e.is_zero() {
            continue;
        }
        g.push_unique(name, e)?;
    }
    Ok(g)
}

/// The semigroup of branch `i`, found with a working precision that is
/// raised until the conductor plus the multiplicity fits below it.
pub fn branch_semigroup(curve: &CurveModel, i: usize, floor: Option<i64>) -> Result<NumericalSemigroup> {
    let branch = curve.branch_curve(i);
    let e = curve.multiplicities()[i];
    let mut n = (4 * e + 8).max(floor.unwrap_or(0));
    loop {
        let cut = Cut::uniform(1, n);
        let g0 = initial_generators(&branch, &cut)?;
        let run = restricted_ring_basis(&g0, 0, &cut, "p")?;
        let vals: Vec<i64> = run
            .basis
            .iter()
            .filter_map(|b| b.element.value().get(0).finite())
            .collect();
        let next = match NumericalSemigroup::new(&vals) {
            Ok(s) if s.conductor() + e <= n => return Ok(s),
            Ok(s) => (2 * n).max(s.conductor() + e),
            Err(Error::InfiniteConductor(_)) => 2 * n,
            Err(other) => return Err(other),
        };
        if next > 1 << 14 {
            return Err(Error::PrecisionExhausted {
                branch: i,
                needed: next,
                available: n,
            });
        }
        n = next;
    }
}

/// Least `v_i` of a known element vanishing on every other branch.
fn vanishing_order(curve: &CurveModel, i: usize, opts: &RingOptions) -> Option<i64> {
    let r = curve.branch_count();
    let n = curve.nvars();
    let mut found: Vec<i64> = Vec::new();
    if let Some(eqs) = curve.equations() {
        let mut sum = 0;
        let mut ok = true;
        for (j, f) in eqs.iter().enumerate() {
            if j == i {
                continue;
            }
            match curve.evaluate(f).ok().and_then(|v| v.value().get(i).finite()) {
                Some(x) => sum += x,
                None => ok = false,
            }
        }
        if ok {
            found.push(sum);
        }
    }
    let mut polys: Vec<Polynomial> = (0..n).map(|j| Polynomial::variable(n, j)).collect();
    polys.extend(curve.generators().iter().map(|(_, p)| p.clone()));
    if let Some(eqs) = curve.equations() {
        polys.extend(eqs.iter().cloned());
    }
    let values: Vec<ValueVector> = polys
        .iter()
        .filter_map(|p| curve.evaluate(p).ok().map(|e| e.value().clone()))
        .collect();
    for v in &values {
        if let Value::Finite(x) = v.get(i) {
            if (0..r).all(|j| j == i || !v.get(j).is_finite()) {
                found.push(x);
            }
        }
    }
    let mut sum = Some(0);
    for j in (0..r).filter(|&j| j != i) {
        let m = values
            .iter()
            .filter(|v| !v.get(j).is_finite())
            .filter_map(|v| v.get(i).finite())
            .min();
        sum = match (sum, m) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
    }
    if let Some(x) = sum {
        found.push(x);
    }
    if found.is_empty() {
        let others: Vec<usize> = (0..r).filter(|&j| j != i).collect();
        if let Ok(Some((_, x))) = vanishing_polynomial(curve, &others, i, opts.max_degree) {
            found.push(x);
        } else {
            // The product of one polynomial per other branch also vanishes there.
            let mut sum = Some(0);
            for &j in &others {
                sum = match (sum, vanishing_polynomial(curve, &[j], i, opts.max_degree)) {
                    (Some(a), Ok(Some((_, x)))) => Some(a + x),
                    _ => None,
                };
            }
            found.extend(sum);
        }
    }
    found.into_iter().min()
}

/// The bound `rho` must dominate `floor` entry-wise.
fn dominates(rho: &ValueVector, floor: &ValueVector, what: &str) -> Result<()> {
    if rho.len() != floor.len() {
        return Err(Error::Arity {
            expected: floor.len(),
            found: rho.len(),
        });
    }
    if !floor.le(rho) {
        return Err(Error::HypothesisViolation(format!(
            "the bound {} is below the {} {}",
            rho, what, floor
        )));
    }
    Ok(())
}

fn monomodule_minimal(values: &[i64], semigroup: &NumericalSemigroup) -> Vec<i64> {
    let mut v = values.to_vec();
    v.sort_unstable();
    v.dedup();
    let mut out: Vec<i64> = Vec::new();
    for x in v {
        if !out.iter().any(|&y| semigroup.contains(x - y)) {
            out.push(x);
        }
    }
    out
}

fn named_set(role: BasisRole, prefix: &str, elements: &[RingElement]) -> Result<BasisSet> {
    let mut set = BasisSet::new(role);
    for (n, e) in elements.iter().enumerate() {
        if !e.is_zero() {
            set.push_unique(format!("{}{}", prefix, n + 1), e.clone())?;
        }
    }
    Ok(set)
}

/// Generators of the elements of the module generated by `start` that vanish
/// on every branch in `others`, by successive kernels.
fn iterated_kernel(
    start: Vec<RingElement>,
    others: &[usize],
    runs: &[RestrictedRun],
    cut: &Cut,
    prefix: &str,
) -> Result<Vec<RingElement>> {
    let mut gens = start;
    for (step, &j) in others.iter().enumerate() {
        let h = named_set(BasisRole::Ideal, &format!("{}{}_", prefix, step + 1), &gens)?;
        if h.is_empty() {
            return Ok(Vec::new());
        }
        let run = vanishing_module_generators(&h, &runs[j].basis, &runs[j].kernel, j, cut, prefix)?;
        gens = run.kernel;
    }
    Ok(gens)
}

/// Standard basis, value semiring and conductor of the local ring.
pub fn analyze_ring(curve: &CurveModel, opts: &RingOptions) -> Result<RingAnalysis> {
    let r = curve.branch_count();
    let mult = curve.multiplicities();
    let semigroups = (0..r)
        .map(|i| branch_semigroup(curve, i, None))
        .collect::<Result<Vec<_>>>()?;
    let mut bound = Vec::with_capacity(r);
    for i in 0..r {
        let mu = semigroups[i].conductor();
        let b = if r == 1 {
            Some(mu)
        } else {
            vanishing_order(curve, i, opts).map(|x| x + mu)
        };
        let b = match (b, opts.rho.as_ref().map(|v| v.get(i))) {
            (Some(b), _) => b,
            (None, Some(Value::Finite(x))) => x,
            _ => {
                return Err(Error::MissingData(format!(
                    "an element vanishing on every branch but {}; supply a bound",
                    i + 1
                )))
            }
        };
        bound.push(b);
    }
    let sigma_bound = ValueVector::from_finite(&bound);
    let cut = Cut::new(
        (0..r)
            .map(|i| (bound[i] + mult[i] + 1).max(opts.precision.unwrap_or(0)))
            .collect(),
    );

    let g0 = initial_generators(curve, &cut)?;
    let runs = (0..r)
        .map(|k| restricted_ring_basis(&g0, k, &cut, &format!("p{}_", k + 1)))
        .collect::<Result<Vec<_>>>()?;
    let mut branches = Vec::with_capacity(r);
    for i in 0..r {
        let vals: Vec<i64> = runs[i]
            .basis
            .iter()
            .filter_map(|b| b.element.value().get(i).finite())
            .collect();
        let semigroup = NumericalSemigroup::new(&vals)?;
        if semigroup.conductor() != semigroups[i].conductor() {
            return Err(Error::HypothesisViolation(format!(
                "branch {} semigroup changed with the working precision",
                i + 1
            )));
        }
        let prefix = format!("q{}_", i + 1);
        let (vanishing, delta) = if r == 1 {
            (BasisSet::new(BasisRole::Ring), semigroup.conductor())
        } else if let (true, true, Some(eqs)) =
            (opts.plane_shortcut, curve.nvars() == 2, curve.equations())
        {
            let mut prod = Polynomial::one(2);
            for (j, f) in eqs.iter().enumerate() {
                if j != i {
                    prod = prod.mul(f);
                }
            }
            let fi = curve.evaluate_cut(&prod, &cut, Some(&format!("{}1", prefix)))?;
            let mut set = BasisSet::new(BasisRole::Ring);
            set.push(format!("{}1", prefix), fi.clone())?;
            for (n, b) in runs[i].basis.iter().enumerate() {
                let series = cut.mul(fi.series(), b.element.series())?;
                let e = cut.element(series, fi.provenance().mul(&crate::curve::Expr::atom(&b.name)))?;
                if !e.is_zero() {
                    set.push_unique(format!("{}{}", prefix, n + 2), e)?;
                }
            }
            let x = fi.value().get(i).finite().ok_or_else(|| {
                Error::InvalidCurve(format!("branch equations vanish on branch {}", i + 1))
            })?;
            (set, semigroup.module_conductor(&[x])?)
        } else {
            let others: Vec<usize> = (0..r).filter(|&j| j != i).collect();
            let supported = iterated_kernel(
                runs[others[0]].kernel.clone(),
                &others[1..],
                &runs,
                &cut,
                &format!("t{}_", i + 1),
            )?;
            let (set, delta) = build_bi(&supported, &runs[i].basis, &semigroup, i, &cut, &prefix)?;
            let mut ring_set = BasisSet::new(BasisRole::Ring);
            for b in set.iter() {
                ring_set.push(b.name.clone(), b.element.clone())?;
            }
            (ring_set, delta)
        };
        let vals: Vec<i64> = vanishing
            .iter()
            .filter_map(|b| b.element.value().get(i).finite())
            .collect();
        branches.push(BranchData {
            vanishing_values: monomodule_minimal(&vals, &semigroup),
            semigroup,
            basis: runs[i].basis.clone(),
            kernel: runs[i].kernel.clone(),
            vanishing,
            delta,
        });
    }
    let sigma = ValueVector::from_finite(&branches.iter().map(|b| b.delta).collect::<Vec<_>>());
    if opts.rho.is_none() && !sigma.le(&sigma_bound) {
        return Err(Error::HypothesisViolation(format!(
            "conductor {} exceeds the bound {} used for the working precision",
            sigma, sigma_bound
        )));
    }

    let mut initial = g0;
    for b in &branches {
        for x in b.basis.iter().chain(b.vanishing.iter()) {
            initial.push_unique(x.name.clone(), x.element.clone())?;
        }
    }
    let rho = opts.rho.clone().unwrap_or_else(|| sigma.clone());
    dominates(&rho, &sigma, "conductor")?;
    let mut engine = Engine::ring(cut.clone(), initial.clone());
    engine.saturate(Mode::Full, Some(&rho), "s")?;
    let standard_basis = engine.ring_basis().clone();
    engine.minimalize(Mode::Full);
    let basis = engine.into_parts().0;
    let multiplicity: Vec<i64> = branches.iter().map(|b| b.semigroup.multiplicity()).collect();
    let candidates = completion_candidates(
        &basis.values(),
        &basis.values(),
        &sigma,
        &multiplicity,
    );
    let generators = SemiringPresentation::minimal_generators(r, &candidates)?;
    let semiring = SemiringPresentation::new(r, generators.clone())?;
    let conductor = semiring.conductor()?;
    Ok(RingAnalysis {
        cut,
        sigma_bound,
        branches,
        sigma,
        initial,
        standard_basis,
        basis,
        generators,
        semiring,
        conductor,
    })
}

/// Standard basis, value semimodule and conductor of the fractional ideal
/// generated by the given tuples.
pub fn analyze_ideal(
    curve: &CurveModel,
    ring: &RingAnalysis,
    generators: &[(String, Vec<TruncatedSeries>)],
    opts: &RingOptions,
) -> Result<IdealAnalysis> {
    let r = curve.branch_count();
    let mult = curve.multiplicities();
    let mut low: Vec<Option<i64>> = vec![None; r];
    for (name, g) in generators {
        if g.len() != r {
            return Err(Error::Arity {
                expected: r,
                found: g.len(),
            });
        }
        let v = value_of_series(g).map_err(|e| match e {
            Error::UncertifiedValue { branch, precision } => Error::InvalidCurve(format!(
                "ideal generator `{}` has undetermined order on branch {} below {}",
                name,
                branch + 1,
                precision
            )),
            other => other,
        })?;
        for i in 0..r {
            if let Value::Finite(x) = v.get(i) {
                low[i] = Some(low[i].map_or(x, |m: i64| m.min(x)));
            }
        }
    }
    let mut cut_v = Vec::with_capacity(r);
    for i in 0..r {
        let m = low[i].ok_or_else(|| {
            Error::InvalidCurve(format!("the ideal vanishes on branch {}", i + 1))
        })?;
        let s = ring.sigma.get(i).finite().expect("finite conductor");
        cut_v.push((s + m + mult[i] + 1).max(opts.precision.unwrap_or(i64::MIN)));
    }
    let cut = Cut::new(cut_v);
    let mut h0 = BasisSet::new(BasisRole::Ideal);
    for (name, g) in generators {
        let e = cut.element(g.clone(), crate::curve::Expr::atom(name))?;
        if !e.is_zero() {
            h0.push_unique(name.clone(), e)?;
        }
    }
    let runs: Vec<RestrictedRun> = ring
        .branches
        .iter()
        .map(|b| RestrictedRun {
            basis: b.basis.clone(),
            kernel: b.kernel.clone(),
        })
        .collect();
    let mut kappa = Vec::with_capacity(r);
    let mut vanishing = Vec::with_capacity(r);
    let mut start = h0.clone();
    for i in 0..r {
        let others: Vec<usize> = (0..r).filter(|&j| j != i).collect();
        let supported: Vec<RingElement> = if others.is_empty() {
            h0.iter().map(|b| b.element.clone()).collect()
        } else {
            let first = vanishing_module_generators(
                &h0,
                &runs[others[0]].basis,
                &runs[others[0]].kernel,
                others[0],
                &cut,
                &format!("u{}_", i + 1),
            )?;
            iterated_kernel(first.kernel, &others[1..], &runs, &cut, &format!("u{}_", i + 1))?
        };
        let (bi, k) = build_bi(
            &supported,
            &runs[i].basis,
            &ring.branches[i].semigroup,
            i,
            &cut,
            &format!("n{}_", i + 1),
        )?;
        for b in bi.iter() {
            start.push_unique(b.name.clone(), b.element.clone())?;
        }
        kappa.push(k);
        vanishing.push(bi);
    }
    let kappa = ValueVector::from_finite(&kappa);
    let rho = match &opts.rho {
        Some(rho) => {
            dominates(rho, &kappa, "single-branch conductor bound")?;
            rho.clone()
        }
        None => {
            let mut v = Vec::with_capacity(r);
            for i in 0..r {
                v.push(kappa.get(i).max(ring.sigma.get(i)));
            }
            ValueVector::new(v)
        }
    };
    let mut engine = Engine::module(cut.clone(), ring.basis.clone(), start);
    engine.saturate(Mode::Full, Some(&rho), "m")?;
    let standard_basis = engine.module_basis().expect("module mode").clone();
    engine.minimalize(Mode::Full);
    let basis = engine.into_parts().1.expect("module mode");
    let candidates = completion_candidates(
        &ring.generators,
        &basis.values(),
        &rho,
        &ring.multiplicities(),
    );
    let generators = SemimodulePresentation::minimal_generators(&ring.semiring, &candidates)?;
    let presentation = SemimodulePresentation::new(ring.semiring.clone(), generators.clone())?;
    let conductor = presentation.relative_conductor()?;
    Ok(IdealAnalysis {
        cut,
        kappa,
        rho,
        vanishing,
        standard_basis,
        basis,
        generators,
        presentation,
        conductor,
    })
}
