//! Curve data: branch parameterizations, the evaluation map into
//! `⊕ K[[t_i]]`, elements with value vectors and conductor formulas.

mod element;
mod expr;
mod implicit;
mod vector;

pub use element::{value_of_series, Cut, RingElement};
pub use expr::{Expr, NameMonomial};
pub use implicit::vanishing_polynomial;
pub use vector::{Value, ValueVector};

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::series::{substitute, Order, TruncatedSeries};
use crate::values::NumericalSemigroup;

/// One branch, given by `n` parameter series `x_j(t_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    params: Vec<TruncatedSeries>,
}

impl Branch {
    pub fn new(params: Vec<TruncatedSeries>) -> Self {
        Self { params }
    }

    pub fn params(&self) -> &[TruncatedSeries] {
        &self.params
    }

    /// The least order among the parameters: the smallest positive element
    /// of the branch semigroup.
    pub fn multiplicity(&self) -> Option<i64> {
        self.params
            .iter()
            .filter_map(|p| match p.order() {
                Order::Exact(k) => Some(k),
                _ => None,
            })
            .min()
    }

    pub fn is_exact(&self) -> bool {
        self.params.iter().all(|p| p.is_exact())
    }
}

/// An algebroid curve given by its branches.
///
/// Branch equations are optional; they enable the plane-curve conductor
/// formula and the differential computations. Named generator polynomials are
/// optional extra elements of the local ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveModel {
    variables: Vec<String>,
    branches: Vec<Branch>,
    equations: Option<Vec<Polynomial>>,
    generators: Vec<(String, Polynomial)>,
}

impl CurveModel {
    /// Validates and builds a curve.
    ///
    /// Branches must be pairwise distinct, and every parameter must have
    /// positive order. Whether the branches really are distinct primes is not
    /// checked beyond tuple equality.
    pub fn new(variables: Vec<String>, branches: Vec<Vec<TruncatedSeries>>) -> Result<Self> {
        let n = variables.len();
        if n == 0 {
            return Err(Error::InvalidCurve("no variables".to_string()));
        }
        if branches.is_empty() {
            return Err(Error::InvalidCurve("no branches".to_string()));
        }
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].contains(v) {
                return Err(Error::InvalidCurve(format!("duplicate variable `{}`", v)));
            }
        }
        for (i, b) in branches.iter().enumerate() {
            if b.len() != n {
                return Err(Error::Arity {
                    expected: n,
                    found: b.len(),
                });
            }
            for p in b {
                if let Order::Exact(k) = p.order() {
                    if k < 1 {
                        return Err(Error::InvalidCurve(format!(
                            "branch {} has a parameter of order {} < 1",
                            i + 1,
                            k
                        )));
                    }
                }
            }
            if b.iter().all(|p| p.order() == Order::Infinite) {
                return Err(Error::InvalidCurve(format!("branch {} is constant", i + 1)));
            }
            if branches[..i].contains(b) {
                return Err(Error::InvalidCurve(format!(
                    "branch {} repeats an earlier branch",
                    i + 1
                )));
            }
        }
        Ok(Self {
            variables,
            branches: branches.into_iter().map(Branch::new).collect(),
            equations: None,
            generators: Vec::new(),
        })
    }

    /// Attaches one equation per branch; each must vanish on its branch.
    pub fn with_equations(mut self, equations: Vec<Polynomial>) -> Result<Self> {
        if equations.len() != self.branches.len() {
            return Err(Error::InvalidCurve(format!(
                "{} equations for {} branches",
                equations.len(),
                self.branches.len()
            )));
        }
        for (i, f) in equations.iter().enumerate() {
            self.check_arity(f)?;
            let s = substitute(f, self.branches[i].params(), None)?;
            if !s.is_zero() {
                return Err(Error::InvalidCurve(format!(
                    "equation {} does not vanish on branch {}",
                    i + 1,
                    i + 1
                )));
            }
        }
        self.equations = Some(equations);
        Ok(self)
    }

    /// Attaches named elements of the local ring.
    pub fn with_generators(mut self, generators: Vec<(String, Polynomial)>) -> Result<Self> {
        for (name, p) in &generators {
            self.check_arity(p)?;
            if self.variables.contains(name) {
                return Err(Error::InvalidCurve(format!(
                    "generator name `{}` shadows a variable",
                    name
                )));
            }
        }
        self.generators = generators;
        Ok(self)
    }

    fn check_arity(&self, p: &Polynomial) -> Result<()> {
        if p.nvars() != self.variables.len() {
            return Err(Error::Arity {
                expected: self.variables.len(),
                found: p.nvars(),
            });
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    /// Number of branches `r`.
    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn equations(&self) -> Option<&[Polynomial]> {
        self.equations.as_deref()
    }

    pub fn generators(&self) -> &[(String, Polynomial)] {
        &self.generators
    }

    pub fn is_exact(&self) -> bool {
        self.branches.iter().all(Branch::is_exact)
    }

    pub fn multiplicities(&self) -> Vec<i64> {
        self.branches
            .iter()
            .map(|b| b.multiplicity().unwrap_or(1))
            .collect()
    }

    /// The curve consisting of branch `i` alone, with the same generators.
    pub fn branch_curve(&self, i: usize) -> CurveModel {
        CurveModel {
            variables: self.variables.clone(),
            branches: alloc::vec![self.branches[i].clone()],
            equations: self.equations.as_ref().map(|e| alloc::vec![e[i].clone()]),
            generators: self.generators.clone(),
        }
    }

    /// Image of `p` on every branch, with orders certified by the series.
    pub fn evaluate(&self, p: &Polynomial) -> Result<RingElement> {
        self.check_arity(p)?;
        let series = self
            .branches
            .iter()
            .map(|b| substitute(p, b.params(), None))
            .collect::<Result<Vec<_>>>()?;
        RingElement::exact(series, Expr::from_polynomial(p, &self.variables))
    }

    /// Image of `p` truncated at `cut`, recorded as the atom `name` when given.
    pub fn evaluate_cut(&self, p: &Polynomial, cut: &Cut, name: Option<&str>) -> Result<RingElement> {
        self.check_arity(p)?;
        let series = self
            .branches
            .iter()
            .enumerate()
            .map(|(i, b)| {
                substitute(p, b.params(), Some(cut.get(i))).map_err(|e| match e {
                    Error::PrecisionExhausted { needed, available, .. } => {
                        Error::PrecisionExhausted {
                            branch: i,
                            needed,
                            available,
                        }
                    }
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let provenance = match name {
            Some(n) => Expr::atom(n),
            None => Expr::from_polynomial(p, &self.variables),
        };
        cut.element(series, provenance)
    }

    /// The plane-curve conductor `σ_i = Σ_{j≠i} v_i(f_j) + μ_i`.
    pub fn sigma_plane(&self, semigroups: &[NumericalSemigroup]) -> Result<ValueVector> {
        if self.nvars() != 2 {
            return Err(Error::NotPlane(self.nvars()));
        }
        let eqs = self
            .equations
            .as_ref()
            .ok_or_else(|| Error::MissingData("branch equations".to_string()))?;
        let r = self.branch_count();
        if semigroups.len() != r {
            return Err(Error::MissingData("per-branch semigroups".to_string()));
        }
        let mut sigma = Vec::with_capacity(r);
        for i in 0..r {
            let mut s = semigroups[i].conductor();
            for (j, f) in eqs.iter().enumerate() {
                if j == i {
                    continue;
                }
                let v = substitute(f, self.branches[i].params(), None)?;
                match v.order() {
                    Order::Exact(k) => s += k,
                    _ => {
                        return Err(Error::UncertifiedValue {
                            branch: i,
                            precision: v.precision().unwrap_or(0),
                        })
                    }
                }
            }
            sigma.push(Value::Finite(s));
        }
        Ok(ValueVector::new(sigma))
    }
}

/// The conductor `σ` of the value semiring.
///
/// With per-branch generators of `v_i(Q^i)` the conductor is the conductor of
/// each `Γ_i`-monomodule; for `r = 1` it is the branch conductor; otherwise the
/// plane-curve formula is used.
pub fn conductor_sigma(
    curve: &CurveModel,
    semigroups: &[NumericalSemigroup],
    per_branch_q: Option<&[Vec<i64>]>,
) -> Result<ValueVector> {
    let r = curve.branch_count();
    if semigroups.len() != r {
        return Err(Error::MissingData("per-branch semigroups".to_string()));
    }
    if r == 1 {
        return Ok(ValueVector::from_finite(&[semigroups[0].conductor()]));
    }
    if let Some(q) = per_branch_q {
        if q.len() != r {
            return Err(Error::MissingData("vanishing-ideal values".to_string()));
        }
        return semigroups
            .iter()
            .zip(q)
            .map(|(s, gens)| s.module_conductor(gens).map(Value::Finite))
            .collect::<Result<Vec<_>>>()
            .map(ValueVector::new);
    }
    if curve.nvars() == 2 && curve.equations().is_some() {
        return curve.sigma_plane(semigroups);
    }
    Err(Error::MissingData("vanishing-ideal values".to_string()))
}
