//! Sparse multivariate polynomials with rational coefficients.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::series::Rational;

/// A polynomial in a fixed number of variables, stored as a map from exponent
/// vectors to nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The coordinate function of variable `index`.
    pub fn variable(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Self::monomial(nvars, e, Rational::one())
    }

    pub fn monomial(nvars: usize, exponents: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exponents.len(), nvars, "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponents, c);
        }
        Self { nvars, terms }
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_integer_terms(nvars: usize, terms: &[(i64, &[u32])]) -> Self {
        Self::from_terms(
            nvars,
            terms
                .iter()
                .map(|(c, e)| (e.to_vec(), Rational::from_integer((*c).into()))),
        )
    }

    fn add_term(&mut self, exponents: Vec<u32>, c: Rational) {
        assert_eq!(exponents.len(), self.nvars, "exponent vector length");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponents).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms
            .get(exponents)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(&Rational::one(), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(&-Rational::one(), other)
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Rational, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count");
        let mut out = self.clone();
        for (e, x) in &other.terms {
            out.add_term(e.clone(), c * x);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count");
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative with respect to variable `index`.
    pub fn partial(&self, index: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[index] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[index] -= 1;
            out.add_term(d, c * Rational::from_integer(e[index].into()));
        }
        out
    }

    /// Evaluation at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let mut sum = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, k) in point.iter().zip(e) {
                for _ in 0..*k {
                    term *= x;
                }
            }
            sum += term;
        }
        sum
    }

    /// Display using the given variable names.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        Named { poly: self, names }
    }
}

struct Named<'a> {
    poly: &'a Polynomial,
    names: &'a [String],
}

impl fmt::Display for Named<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.poly, |f, i| f.write_str(&self.names[i]))
    }
}

fn write_poly(
    f: &mut fmt::Formatter<'_>,
    p: &Polynomial,
    name: impl Fn(&mut fmt::Formatter<'_>, usize) -> fmt::Result,
) -> fmt::Result {
    if p.terms.is_empty() {
        return f.write_str("0");
    }
    // Highest total degree first reads most naturally.
    let mut terms: Vec<_> = p.terms.iter().collect();
    terms.sort_by(|(a, _), (b, _)| {
        let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
        db.cmp(&da).then_with(|| b.cmp(a))
    });
    for (i, (e, c)) in terms.into_iter().enumerate() {
        let (neg, mag) = (c.is_negative(), c.abs());
        match (i, neg) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        let constant = e.iter().all(|k| *k == 0);
        let mut need_star = false;
        if !mag.is_one() || constant {
            write!(f, "{}", mag)?;
            need_star = true;
        }
        for (v, k) in e.iter().enumerate() {
            if *k == 0 {
                continue;
            }
            if need_star {
                f.write_str("*")?;
            }
            name(f, v)?;
            if *k > 1 {
                write!(f, "^{}", k)?;
            }
            need_star = true;
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHORT: [&str; 3] = ["x", "y", "z"];
        let n = self.nvars;
        write_poly(f, self, |f, i| {
            if n <= 3 {
                f.write_str(SHORT[i])
            } else {
                write!(f, "x{}", i + 1)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn arithmetic() {
        let x = Polynomial::variable(2, 0);
        let y = Polynomial::variable(2, 1);
        let s = x.add(&y);
        let sq = s.mul(&s);
        assert_eq!(sq.coefficient(&[1, 1]), q(2));
        assert_eq!(sq, s.pow(2));
        assert!(s.sub(&s).is_zero());
        assert_eq!(sq.total_degree(), Some(2));
    }

    #[test]
    fn partials() {
        let x = Polynomial::variable(2, 0);
        let y = Polynomial::variable(2, 1);
        let f = y.sub(&x.pow(3));
        assert_eq!(f.partial(0), x.pow(2).scale(&q(-3)));
        assert_eq!(f.partial(1), Polynomial::one(2));
        assert!(Polynomial::constant(2, q(7)).partial(0).is_zero());
    }

    #[test]
    fn display() {
        let f = Polynomial::from_integer_terms(3, &[(1, &[0, 2, 0]), (-1, &[1, 0, 1]), (3, &[0, 0, 0])]);
        assert_eq!(f.to_string(), "-x*z + y^2 + 3");
        let names = ["X".to_string(), "Y".to_string(), "Z".to_string()];
        assert_eq!(f.display_with(&names).to_string(), "-X*Z + Y^2 + 3");
        assert_eq!(Polynomial::zero(2).to_string(), "0");
    }

    #[test]
    fn evaluation() {
        let f = Polynomial::from_integer_terms(2, &[(2, &[2, 0]), (-1, &[0, 1])]);
        assert_eq!(f.eval(&[q(3), q(4)]), q(14));
    }
}
