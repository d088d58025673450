use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::poly::Polynomial;
use crate::series::Rational;

/// A product of named factors with exponents, sorted by name.
pub type NameMonomial = Vec<(String, u32)>;

/// A rational linear combination of products of named elements.
///
/// Provenance records how an element was built from named generators, with
/// every derived element referenced by its own name rather than expanded.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Expr {
    terms: BTreeMap<NameMonomial, Rational>,
}

fn merge(a: &NameMonomial, b: &NameMonomial) -> NameMonomial {
    let mut out: BTreeMap<&str, u32> = BTreeMap::new();
    for (n, k) in a.iter().chain(b) {
        *out.entry(n.as_str()).or_insert(0) += k;
    }
    out.into_iter().map(|(n, k)| (n.to_string(), k)).collect()
}

impl Expr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut e = Self::zero();
        if !c.is_zero() {
            e.terms.insert(Vec::new(), c);
        }
        e
    }

    pub fn atom(name: &str) -> Self {
        Self::product(&[(name, 1)])
    }

    /// A single product of named factors.
    pub fn product(factors: &[(&str, u32)]) -> Self {
        let m: NameMonomial = factors
            .iter()
            .filter(|(_, k)| *k > 0)
            .map(|(n, k)| (n.to_string(), *k))
            .collect();
        let mut e = Self::zero();
        e.terms.insert(merge(&m, &Vec::new()), Rational::one());
        e
    }

    /// A polynomial written in the given variable names.
    pub fn from_polynomial(p: &Polynomial, names: &[String]) -> Self {
        let mut e = Self::zero();
        for (exps, c) in p.terms() {
            let m: NameMonomial = names
                .iter()
                .zip(exps)
                .filter(|(_, k)| **k > 0)
                .map(|(n, k)| (n.clone(), *k))
                .collect();
            e.add_term(merge(&m, &Vec::new()), c.clone());
        }
        e
    }

    fn add_term(&mut self, m: NameMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NameMonomial, &Rational)> {
        self.terms.iter()
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Rational, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, x) in &other.terms {
            out.add_term(m.clone(), c * x);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), c * x);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(merge(ma, mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = (c.is_negative(), c.abs());
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut star = false;
            if !mag.is_one() || m.is_empty() {
                write!(f, "{}", mag)?;
                star = true;
            }
            for (n, k) in m {
                if star {
                    f.write_str("*")?;
                }
                f.write_str(n)?;
                if *k > 1 {
                    write!(f, "^{}", k)?;
                }
                star = true;
            }
        }
        Ok(())
    }
}
