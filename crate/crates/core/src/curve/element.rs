use alloc::vec::Vec;

use crate::curve::expr::Expr;
use crate::curve::vector::{Value, ValueVector};
use crate::error::{Error, Result};
use crate::series::{Order, Rational, TruncatedSeries};

/// An element of `⊕ K((t_i))`: one series per branch, its cached value vector
/// and a provenance expression.
///
/// Equality compares the series tuple only.
#[derive(Clone, Debug)]
pub struct RingElement {
    series: Vec<TruncatedSeries>,
    value: ValueVector,
    provenance: Expr,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.series == other.series
    }
}

impl Eq for RingElement {}

impl RingElement {
    /// An element whose orders must all be certified by the series themselves.
    pub fn exact(series: Vec<TruncatedSeries>, provenance: Expr) -> Result<Self> {
        let value = value_of_series(&series)?;
        Ok(Self {
            series,
            value,
            provenance,
        })
    }

    pub fn series(&self) -> &[TruncatedSeries] {
        &self.series
    }

    pub fn value(&self) -> &ValueVector {
        &self.value
    }

    pub fn provenance(&self) -> &Expr {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: Expr) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn branches(&self) -> usize {
        self.series.len()
    }

    /// True when every coordinate is zero (to the working precision).
    pub fn is_zero(&self) -> bool {
        self.value.is_all_infinite()
    }

    /// The set `I_f` of coordinates with finite value.
    pub fn finite_indices(&self) -> Vec<usize> {
        self.value.finite_indices()
    }

    /// The leading coefficient on branch `k`.
    pub fn leading(&self, k: usize) -> Option<&Rational> {
        self.series[k].leading().map(|(_, c)| c)
    }
}

/// Entrywise orders of a tuple; undetermined orders are an error.
pub fn value_of_series(series: &[TruncatedSeries]) -> Result<ValueVector> {
    series
        .iter()
        .enumerate()
        .map(|(i, s)| match s.order() {
            Order::Exact(k) => Ok(Value::Finite(k)),
            Order::Infinite => Ok(Value::Infinite),
            Order::AtLeast(p) => Err(Error::UncertifiedValue {
                branch: i,
                precision: p,
            }),
        })
        .collect::<Result<Vec<_>>>()
        .map(ValueVector::new)
}

/// Working precision: coordinate `i` is known modulo `t_i^cut[i]`.
///
/// A cut at or above the conductor of the value set in question makes the
/// truncation exact: everything of order `>= cut[i]` on a single branch lies in
/// the module, so a coordinate that vanishes below the cut may be treated as
/// zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cut(Vec<i64>);

impl Cut {
    pub fn new(cut: Vec<i64>) -> Self {
        Self(cut)
    }

    pub fn uniform(r: usize, n: i64) -> Self {
        Self(alloc::vec![n; r])
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn branches(&self) -> usize {
        self.0.len()
    }

    fn truncate(&self, series: Vec<TruncatedSeries>) -> Result<Vec<TruncatedSeries>> {
        if series.len() != self.0.len() {
            return Err(Error::Arity {
                expected: self.0.len(),
                found: series.len(),
            });
        }
        series
            .into_iter()
            .zip(&self.0)
            .enumerate()
            .map(|(i, (s, &n))| {
                let available = s.precision().unwrap_or(i64::MAX);
                if available < n {
                    return Err(Error::PrecisionExhausted {
                        branch: i,
                        needed: n,
                        available,
                    });
                }
                Ok(s.truncate(n))
            })
            .collect()
    }

    /// Truncates a tuple at the cut; orders at or beyond it count as `∞`.
    pub fn element(&self, series: Vec<TruncatedSeries>, provenance: Expr) -> Result<RingElement> {
        let series = self.truncate(series)?;
        let value = ValueVector::new(
            series
                .iter()
                .map(|s| match s.order() {
                    Order::Exact(k) => Value::Finite(k),
                    _ => Value::Infinite,
                })
                .collect(),
        );
        Ok(RingElement {
            series,
            value,
            provenance,
        })
    }

    /// Entrywise product of two tuples, truncated at the cut.
    pub fn mul(&self, a: &[TruncatedSeries], b: &[TruncatedSeries]) -> Result<Vec<TruncatedSeries>> {
        let prod = a
            .iter()
            .zip(b)
            .zip(&self.0)
            .map(|((x, y), &n)| x.mul_bounded(y, Some(n)))
            .collect();
        self.truncate(prod)
    }

    /// `f - c * g` where `g` is given by its series and provenance.
    pub fn sub_scaled(
        &self,
        f: &RingElement,
        c: &Rational,
        g: &[TruncatedSeries],
        g_provenance: &Expr,
    ) -> Result<RingElement> {
        let neg = -c;
        let series = f
            .series
            .iter()
            .zip(g)
            .map(|(a, b)| a.add_scaled(&neg, b))
            .collect();
        let provenance = f.provenance.add_scaled(&neg, g_provenance);
        self.element(series, provenance)
    }

    /// Clamps a value vector computed from generator values to the cut.
    pub fn clamp(&self, v: &ValueVector) -> ValueVector {
        v.clamp_to_cut(&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn cut_values() {
        let cut = Cut::new(vec![20, 20]);
        let e = cut
            .element(
                vec![
                    TruncatedSeries::from_integers(&[(17, 3), (18, 4)]),
                    TruncatedSeries::from_integers(&[(25, 1)]),
                ],
                Expr::atom("h"),
            )
            .unwrap();
        assert_eq!(e.value(), &ValueVector::new(vec![Value::Finite(17), Value::Infinite]));
        assert_eq!(e.finite_indices(), vec![0]);
        let short = TruncatedSeries::from_integers(&[(1, 1)]).truncate(10);
        assert!(matches!(
            cut.element(vec![short, TruncatedSeries::zero()], Expr::zero()),
            Err(Error::PrecisionExhausted { branch: 0, needed: 20, available: 10 })
        ));
    }

    #[test]
    fn exact_values() {
        let e = RingElement::exact(
            vec![TruncatedSeries::zero(), TruncatedSeries::from_integers(&[(21, 2)])],
            Expr::atom("f1"),
        )
        .unwrap();
        assert_eq!(e.value().to_string(), "(inf,21)");
        assert!(RingElement::exact(vec![TruncatedSeries::zero_to(4)], Expr::zero()).is_err());
        let z = RingElement::exact(vec![TruncatedSeries::zero(); 3], Expr::zero()).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn cancellation() {
        let cut = Cut::uniform(1, 30);
        let f = cut
            .element(vec![TruncatedSeries::from_integers(&[(6, 2), (7, 1)])], Expr::atom("f"))
            .unwrap();
        let g = [TruncatedSeries::from_integers(&[(6, 1)])];
        let r = cut
            .sub_scaled(&f, &Rational::from_integer(2.into()), &g, &Expr::atom("g"))
            .unwrap();
        assert_eq!(r.value(), &ValueVector::from_finite(&[7]));
        assert_eq!(r.provenance().to_string(), "f - 2*g");
    }
}
