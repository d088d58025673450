use alloc::vec::Vec;

use num_traits::Zero;

use crate::curve::CurveModel;
use crate::error::{Error, Result};
use crate::linalg::kernel;
use crate::poly::Polynomial;
use crate::series::{substitute, Order, Rational, TruncatedSeries};

fn monomials(nvars: usize, max_degree: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, nvars: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == nvars {
            if prefix.iter().any(|&k| k > 0) {
                out.push(prefix.clone());
            }
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            rec(prefix, nvars, left - k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), nvars, max_degree, &mut out);
    out
}

/// Searches polynomials of total degree at most `max_degree` without constant
/// term that vanish identically on every branch listed in `on`, and returns one
/// whose order on branch `off` is least, with that order.
///
/// Requires exact parameterizations on the branches involved.
pub fn vanishing_polynomial(
    curve: &CurveModel,
    on: &[usize],
    off: usize,
    max_degree: u32,
) -> Result<Option<(Polynomial, i64)>> {
    let n = curve.nvars();
    let involved = on.iter().chain(core::iter::once(&off));
    for &b in involved {
        if !curve.branches()[b].is_exact() {
            return Err(Error::MissingData(alloc::format!(
                "exact parameterization of branch {}",
                b + 1
            )));
        }
    }
    let monos = monomials(n, max_degree);
    let mono_poly = |e: &Vec<u32>| Polynomial::monomial(n, e.clone(), Rational::from_integer(1.into()));
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for &b in on {
        let images: Vec<TruncatedSeries> = monos
            .iter()
            .map(|e| substitute(&mono_poly(e), curve.branches()[b].params(), None))
            .collect::<Result<_>>()?;
        let top = images.iter().filter_map(|s| s.degree()).max().unwrap_or(0);
        let low = images
            .iter()
            .filter_map(|s| s.leading().map(|(e, _)| e))
            .min()
            .unwrap_or(0);
        for exp in low..=top {
            let row: Vec<Rational> = images
                .iter()
                .map(|s| s.coefficient(exp).unwrap_or_else(Rational::zero))
                .collect();
            if row.iter().any(|c| !c.is_zero()) {
                rows.push(row);
            }
        }
    }
    let basis = kernel(&rows, monos.len());
    let mut best: Option<(Polynomial, i64)> = None;
    for v in basis {
        let p = Polynomial::from_terms(n, monos.iter().cloned().zip(v));
        let s = substitute(&p, curve.branches()[off].params(), None)?;
        if let Order::Exact(k) = s.order() {
            if best.as_ref().is_none_or(|(_, b)| k < *b) {
                best = Some((p, k));
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn finds_line_through_smooth_branches() {
        let t = |terms: &[(i64, i64)]| TruncatedSeries::from_integers(terms);
        let c = CurveModel::new(
            vec!["x".to_string(), "y".to_string()],
            vec![
                vec![t(&[(1, 1)]), TruncatedSeries::zero()],
                vec![t(&[(1, 1)]), t(&[(2, 1)])],
            ],
        )
        .unwrap();
        let (p, k) = vanishing_polynomial(&c, &[0], 1, 3).unwrap().unwrap();
        assert_eq!(k, 2);
        assert!(substitute(&p, c.branches()[0].params(), None).unwrap().order() == Order::Infinite);
    }
}
