//! Kähler differentials of plane curves, represented by their pullbacks
//! `t_i·(p(φ_i)·x′ + q(φ_i)·y′)` to the branches.
//!
//! Coefficients are rationals, so the characteristic is zero as the
//! construction requires.

use alloc::format;
use alloc::vec::Vec;

use crate::curve::{CurveModel, Cut, Expr, RingElement, ValueVector};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::series::{substitute, Rational, TruncatedSeries};
use crate::stdbasis::{BasisRole, BasisSet, Engine, Mode, RingAnalysis};
use crate::values::{completion_candidates, SemimodulePresentation};

/// A form `p·dx + q·dy` with its pullback. Forms built from ring elements
/// that are not polynomials carry no `(p, q)`.
#[derive(Clone, Debug)]
pub struct DifferentialForm {
    pub p: Option<Polynomial>,
    pub q: Option<Polynomial>,
    pub pullback: RingElement,
}

impl DifferentialForm {
    /// `ν(ω)`, the value of the pullback.
    pub fn value(&self) -> &ValueVector {
        self.pullback.value()
    }
}

fn check_plane(curve: &CurveModel) -> Result<()> {
    if curve.nvars() != 2 {
        return Err(Error::NotPlane(curve.nvars()));
    }
    Ok(())
}

/// `dh = h_x dx + h_y dy`.
pub fn differential(h: &Polynomial) -> Result<(Polynomial, Polynomial)> {
    if h.nvars() != 2 {
        return Err(Error::NotPlane(h.nvars()));
    }
    Ok((h.partial(0), h.partial(1)))
}

/// The pullback of `p·dx + q·dy`, exact when the parameterizations are,
/// otherwise truncated at `cut`.
pub fn pullback(p: &Polynomial, q: &Polynomial, curve: &CurveModel, cut: Option<&Cut>) -> Result<RingElement> {
    check_plane(curve)?;
    let mut series = Vec::with_capacity(curve.branch_count());
    for (i, b) in curve.branches().iter().enumerate() {
        let target = cut.map(|c| c.get(i) + 1);
        let x = &b.params()[0];
        let y = &b.params()[1];
        let pv = substitute(p, b.params(), target)?;
        let qv = substitute(q, b.params(), target)?;
        let s = pv.mul(&x.derivative()).add_scaled(&Rational::from_integer(1.into()), &qv.mul(&y.derivative()));
        series.push(s.shift(1));
    }
    let prov = Expr::from_polynomial(p, curve.variables())
        .mul(&Expr::atom("dx"))
        .add_scaled(
            &Rational::from_integer(1.into()),
            &Expr::from_polynomial(q, curve.variables()).mul(&Expr::atom("dy")),
        );
    match cut {
        Some(c) => c.element(series, prov),
        None => RingElement::exact(series, prov),
    }
}

/// The form `dh` of a polynomial, with its pullback.
pub fn form_of(h: &Polynomial, curve: &CurveModel, cut: Option<&Cut>) -> Result<DifferentialForm> {
    let (p, q) = differential(h)?;
    let pullback = pullback(&p, &q, curve, cut)?;
    Ok(DifferentialForm {
        p: Some(p),
        q: Some(q),
        pullback,
    })
}

/// The pullback of `dg` for a ring element `g`: `t_i·d/dt_i` of each branch
/// image.
pub fn differential_of_element(g: &RingElement, name: &str, cut: &Cut) -> Result<RingElement> {
    let series: Vec<TruncatedSeries> = g.series().iter().map(TruncatedSeries::euler).collect();
    cut.element(series, Expr::atom(&format!("d{}", name)))
}

/// Standard basis of the differentials, starting from `{dg : g ∈ G}` with the
/// bound `σ`. `G` must contain the branch equations.
pub fn algorithm3(g: &BasisSet, curve: &CurveModel, sigma: &ValueVector, cut: &Cut) -> Result<BasisSet> {
    check_plane(curve)?;
    let mut h0 = BasisSet::new(BasisRole::Differential);
    for b in g.iter() {
        let w = differential_of_element(&b.element, &b.name, cut)?;
        if !w.is_zero() {
            h0.push_unique(format!("d{}", b.name), w)?;
        }
    }
    let mut e = Engine::module(cut.clone(), g.clone(), h0);
    e.saturate(Mode::Full, Some(sigma), "w")?;
    Ok(e.into_parts().1.expect("module mode"))
}

#[derive(Clone, Debug)]
pub struct KahlerAnalysis {
    /// The ring basis used, with the branch equations added.
    pub ring_basis: BasisSet,
    pub standard_basis: BasisSet,
    pub basis: BasisSet,
    /// Minimal generators of the value set of the differentials.
    pub generators: Vec<ValueVector>,
    pub presentation: SemimodulePresentation,
    pub conductor: ValueVector,
}

/// Standard basis, minimal value generators and conductor of the module of
/// differentials of a plane curve with known branch equations.
pub fn analyze_kahler(curve: &CurveModel, ring: &RingAnalysis) -> Result<KahlerAnalysis> {
    check_plane(curve)?;
    let eqs = curve
        .equations()
        .ok_or_else(|| Error::MissingData("branch equations".into()))?;
    let cut = &ring.cut;
    let mut g = ring.basis.clone();
    for (i, f) in eqs.iter().enumerate() {
        let base = format!("f{}", i + 1);
        let name = if g.find(&base).is_none() {
            base
        } else {
            g.fresh_name(&format!("{}_", base), 1, &[])
        };
        let e = curve.evaluate_cut(f, cut, Some(&name))?;
        if !e.is_zero() {
            g.push_unique(name, e)?;
        }
    }
    let standard_basis = algorithm3(&g, curve, &ring.sigma, cut)?;
    let mut e = Engine::module(cut.clone(), g.clone(), standard_basis.clone());
    e.minimalize(Mode::Full);
    let basis = e.into_parts().1.expect("module mode");
    let candidates = completion_candidates(
        &ring.generators,
        &basis.values(),
        &ring.sigma,
        &ring.multiplicities(),
    );
    let generators = SemimodulePresentation::minimal_generators(&ring.semiring, &candidates)?;
    let presentation = SemimodulePresentation::new(ring.semiring.clone(), generators.clone())?;
    let conductor = presentation.relative_conductor()?;
    Ok(KahlerAnalysis {
        ring_basis: g,
        standard_basis,
        basis,
        generators,
        presentation,
        conductor,
    })
}
