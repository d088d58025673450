//! Truncated univariate Laurent series over the rationals.
//!
//! A [`TruncatedSeries`] stores finitely many nonzero coefficients together
//! with a precision `N`: coefficients at exponents `>= N` are unknown. A series
//! without a precision is known in full (a Laurent polynomial), and arithmetic
//! between such series never loses information.

use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Exact rational coefficients.
pub type Rational = BigRational;

/// The `t`-adic order of a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    /// The least exponent with a nonzero coefficient.
    Exact(i64),
    /// Every known coefficient vanishes; the order is at least the precision.
    AtLeast(i64),
    /// The series is exactly zero.
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    terms: Vec<(i64, Rational)>,
    precision: Option<i64>,
}

fn min_precision(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

fn below(e: i64, precision: Option<i64>) -> bool {
    precision.is_none_or(|p| e < p)
}

impl TruncatedSeries {
    /// The exact zero series.
    pub fn zero() -> Self {
        Self {
            terms: Vec::new(),
            precision: None,
        }
    }

    /// A series whose coefficients vanish below `precision` and are unknown above.
    pub fn zero_to(precision: i64) -> Self {
        Self {
            terms: Vec::new(),
            precision: Some(precision),
        }
    }

    pub fn one() -> Self {
        Self::monomial(0, Rational::one())
    }

    /// The exact series `c * t^exponent`.
    pub fn monomial(exponent: i64, c: Rational) -> Self {
        Self::from_terms([(exponent, c)], None)
    }

    /// Builds a series from arbitrary `(exponent, coefficient)` pairs.
    ///
    /// Repeated exponents are summed; zero coefficients and exponents at or
    /// above `precision` are dropped.
    pub fn from_terms<I>(terms: I, precision: Option<i64>) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let mut raw: Vec<(i64, Rational)> = terms
            .into_iter()
            .filter(|(e, _)| below(*e, precision))
            .collect();
        raw.sort_by_key(|(e, _)| *e);
        let mut merged: Vec<(i64, Rational)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            match merged.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Self {
            terms: merged,
            precision,
        }
    }

    /// An exact Laurent polynomial from integer coefficients.
    pub fn from_integers(terms: &[(i64, i64)]) -> Self {
        Self::from_terms(
            terms
                .iter()
                .map(|&(e, c)| (e, Rational::from_integer(c.into()))),
            None,
        )
    }

    pub fn terms(&self) -> &[(i64, Rational)] {
        &self.terms
    }

    /// `None` when the series is known exactly.
    pub fn precision(&self) -> Option<i64> {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> Order {
        match (self.terms.first(), self.precision) {
            (Some((e, _)), _) => Order::Exact(*e),
            (None, Some(p)) => Order::AtLeast(p),
            (None, None) => Order::Infinite,
        }
    }

    /// The lowest term, if any coefficient is known to be nonzero.
    pub fn leading(&self) -> Option<(i64, &Rational)> {
        self.terms.first().map(|(e, c)| (*e, c))
    }

    /// The coefficient at `exponent`, or `None` when it lies beyond the precision.
    pub fn coefficient(&self, exponent: i64) -> Option<Rational> {
        if !below(exponent, self.precision) {
            return None;
        }
        Some(
            self.terms
                .binary_search_by_key(&exponent, |(e, _)| *e)
                .map(|i| self.terms[i].1.clone())
                .unwrap_or_else(|_| Rational::zero()),
        )
    }

    /// Largest stored exponent.
    pub fn degree(&self) -> Option<i64> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// Forgets every coefficient at exponents `>= n`.
    pub fn truncate(&self, n: i64) -> Self {
        let precision = Some(self.precision.map_or(n, |p| p.min(n)));
        Self {
            terms: self.terms.iter().filter(|(e, _)| *e < n).cloned().collect(),
            precision,
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Rational, other: &Self) -> Self {
        let precision = min_precision(self.precision, other.precision);
        if c.is_zero() {
            let mut out = self.clone();
            out.precision = precision;
            out.terms.retain(|(e, _)| below(*e, precision));
            return out;
        }
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        loop {
            let next = match (a.get(i), b.get(j)) {
                (None, None) => break,
                (Some((ea, ca)), Some((eb, cb))) if ea == eb => {
                    i += 1;
                    j += 1;
                    (*ea, ca + c * cb)
                }
                (Some((ea, ca)), Some((eb, _))) if ea < eb => {
                    i += 1;
                    (*ea, ca.clone())
                }
                (Some((ea, ca)), None) => {
                    i += 1;
                    (*ea, ca.clone())
                }
                (_, Some((eb, cb))) => {
                    j += 1;
                    (*eb, c * cb)
                }
            };
            if !below(next.0, precision) {
                break;
            }
            if !next.1.is_zero() {
                terms.push(next);
            }
        }
        Self { terms, precision }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self {
                terms: Vec::new(),
                precision: self.precision,
            };
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
            precision: self.precision,
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            precision: self.precision.map(|p| p + k),
        }
    }

    fn order_lower_bound(&self) -> Option<i64> {
        self.terms.first().map(|(e, _)| *e).or(self.precision)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_bounded(other, None)
    }

    /// Product, additionally truncated at `limit` when given.
    pub fn mul_bounded(&self, other: &Self, limit: Option<i64>) -> Self {
        let (la, lb) = match (self.order_lower_bound(), other.order_lower_bound()) {
            (Some(la), Some(lb)) => (la, lb),
            _ => return Self::zero(),
        };
        let from_a = self.precision.map(|p| p + lb);
        let from_b = other.precision.map(|p| p + la);
        let precision = min_precision(min_precision(from_a, from_b), limit);
        if self.terms.is_empty() || other.terms.is_empty() {
            return Self {
                terms: Vec::new(),
                precision,
            };
        }
        let lo = self.terms[0].0 + other.terms[0].0;
        let top = self.terms.last().unwrap().0 + other.terms.last().unwrap().0 + 1;
        let hi = precision.map_or(top, |p| p.min(top));
        if hi <= lo {
            return Self {
                terms: Vec::new(),
                precision,
            };
        }
        let mut acc: Vec<Rational> = (lo..hi).map(|_| Rational::zero()).collect();
        for (ea, ca) in &self.terms {
            if ea + other.terms[0].0 >= hi {
                break;
            }
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if e >= hi {
                    break;
                }
                acc[(e - lo) as usize] += ca * cb;
            }
        }
        let terms = acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (lo + i as i64, c))
            .collect();
        Self { terms, precision }
    }

    pub fn pow(&self, n: u32) -> Self {
        self.pow_bounded(n, None)
    }

    pub fn pow_bounded(&self, mut n: u32, limit: Option<i64>) -> Self {
        let mut result = match limit {
            Some(l) => Self::one().truncate(l),
            None => Self::one(),
        };
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul_bounded(&base, limit);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_bounded(&base, limit);
            }
        }
        result
    }

    /// Term-wise `d/dt`.
    pub fn derivative(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| *e != 0)
                .map(|(e, c)| (e - 1, c * Rational::from_integer((*e).into())))
                .collect(),
            precision: self.precision.map(|p| p - 1),
        }
    }

    /// The Euler derivation `t * d/dt`, which preserves precision.
    pub fn euler(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| *e != 0)
                .map(|(e, c)| (*e, c * Rational::from_integer((*e).into())))
                .collect(),
            precision: self.precision,
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            let (neg, mag) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag.is_one();
            if !unit || *e == 0 {
                write!(f, "{}", mag)?;
            }
            if *e != 0 {
                if !unit {
                    f.write_str("*")?;
                }
                if *e == 1 {
                    f.write_str("t")?;
                } else {
                    write!(f, "t^{}", e)?;
                }
            }
        }
        match self.precision {
            Some(p) if first => write!(f, "O(t^{})", p),
            Some(p) => write!(f, " + O(t^{})", p),
            None if first => f.write_str("0"),
            None => Ok(()),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl core::ops::$tr<&TruncatedSeries> for &TruncatedSeries {
            type Output = TruncatedSeries;
            fn $m(self, rhs: &TruncatedSeries) -> TruncatedSeries {
                $body(self, rhs)
            }
        }
        impl core::ops::$tr for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $m(self, rhs: TruncatedSeries) -> TruncatedSeries {
                $body(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &TruncatedSeries, b| a
    .add_scaled(&Rational::one(), b));
forward_binop!(Sub, sub, |a: &TruncatedSeries, b| a
    .add_scaled(&-Rational::one(), b));
forward_binop!(Mul, mul, |a: &TruncatedSeries, b| TruncatedSeries::mul(a, b));

impl core::ops::Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(&-Rational::one())
    }
}

/// Evaluates `p` at `args`.
///
/// With `target = Some(n)` every intermediate result is truncated at `n`, and
/// the result must be known below `n`; otherwise precision-exhausted is
/// reported. With `target = None` the natural precision of the inputs is kept.
pub fn substitute(
    p: &Polynomial,
    args: &[TruncatedSeries],
    target: Option<i64>,
) -> Result<TruncatedSeries> {
    if p.nvars() != args.len() {
        return Err(Error::Arity {
            expected: p.nvars(),
            found: args.len(),
        });
    }
    let terms: Vec<(&[u32], &Rational)> = p.terms().map(|(e, c)| (e.as_slice(), c)).collect();
    let result = horner(&terms, 0, args, target);
    if let Some(n) = target {
        let available = result.precision().unwrap_or(i64::MAX);
        if available < n {
            return Err(Error::PrecisionExhausted {
                branch: 0,
                needed: n,
                available,
            });
        }
    }
    Ok(result)
}

/// Horner evaluation in the variable `var`, recursing into the remaining ones.
/// `terms` must be sorted lexicographically by exponent vector.
fn horner(
    terms: &[(&[u32], &Rational)],
    var: usize,
    args: &[TruncatedSeries],
    limit: Option<i64>,
) -> TruncatedSeries {
    let cut = |s: TruncatedSeries| match limit {
        Some(l) => s.truncate(l),
        None => s,
    };
    if terms.is_empty() {
        return cut(TruncatedSeries::zero());
    }
    if var == args.len() {
        let c: Rational = terms.iter().map(|(_, c)| (*c).clone()).sum();
        return cut(TruncatedSeries::monomial(0, c));
    }
    let mut groups: Vec<(u32, &[(&[u32], &Rational)])> = Vec::new();
    let mut start = 0;
    for i in 1..=terms.len() {
        if i == terms.len() || terms[i].0[var] != terms[start].0[var] {
            groups.push((terms[start].0[var], &terms[start..i]));
            start = i;
        }
    }
    let x = &args[var];
    let mut acc: Option<TruncatedSeries> = None;
    let mut prev = 0u32;
    for &(e, group) in groups.iter().rev() {
        let inner = horner(group, var + 1, args, limit);
        acc = Some(match acc {
            None => inner,
            Some(a) => {
                let step = x.pow_bounded(prev - e, limit);
                a.mul_bounded(&step, limit) + inner
            }
        });
        prev = e;
    }
    let acc = acc.unwrap();
    if prev > 0 {
        acc.mul_bounded(&x.pow_bounded(prev, limit), limit)
    } else {
        cut(acc)
    }
}
