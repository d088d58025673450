use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Add;
use core::str::FromStr;

/// An entry of a value vector: a nonnegative (or, for fractional ideals,
/// arbitrary) integer or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Finite(i64),
    Infinite,
}

impl Value {
    pub fn is_finite(self) -> bool {
        matches!(self, Value::Finite(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Value::Finite(k) => Some(k),
            Value::Infinite => None,
        }
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, rhs: Value) -> Value {
        match (self, rhs) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a + b),
            _ => Value::Infinite,
        }
    }
}

impl From<i64> for Value {
    fn from(k: i64) -> Self {
        Value::Finite(k)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(k) => write!(f, "{}", k),
            Value::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Value {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        match s {
            "inf" | "∞" | "oo" => Ok(Value::Infinite),
            _ => s
                .parse::<i64>()
                .map(Value::Finite)
                .map_err(|_| alloc::format!("invalid value entry `{}`", s)),
        }
    }
}

/// A point of `(Z ∪ {∞})^r`.
///
/// The derived `Ord` is lexicographic and only serves canonical sorting; the
/// partial product order is [`ValueVector::le`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValueVector(Vec<Value>);

impl ValueVector {
    pub fn new(entries: Vec<Value>) -> Self {
        Self(entries)
    }

    pub fn from_finite(entries: &[i64]) -> Self {
        Self(entries.iter().map(|&k| Value::Finite(k)).collect())
    }

    /// The vector `0̲`, identity of `⊙`.
    pub fn zero(r: usize) -> Self {
        Self(alloc::vec![Value::Finite(0); r])
    }

    /// The vector of all infinities, identity of `⊕`.
    pub fn infinite(r: usize) -> Self {
        Self(alloc::vec![Value::Infinite; r])
    }

    /// The vector with `x` at coordinate `i` and `∞` elsewhere.
    pub fn single(r: usize, i: usize, x: i64) -> Self {
        let mut v = Self::infinite(r);
        v.0[i] = Value::Finite(x);
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Value {
        self.0[i]
    }

    pub fn entries(&self) -> &[Value] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Value> + '_ {
        self.0.iter().copied()
    }

    pub fn is_all_infinite(&self) -> bool {
        self.0.iter().all(|v| !v.is_finite())
    }

    /// The coordinates where the vector is finite.
    pub fn finite_indices(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i].is_finite()).collect()
    }

    /// Tropical sum: entrywise minimum.
    pub fn oplus(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "value vector length");
        Self(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// Tropical product: entrywise sum with `k + ∞ = ∞`.
    pub fn odot(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "value vector length");
        Self(self.0.iter().zip(&other.0).map(|(a, b)| *a + *b).collect())
    }

    /// `self ⊙ other^k`.
    pub fn odot_pow(&self, other: &Self, k: u32) -> Self {
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| match (*a, *b) {
                    (a, _) if k == 0 => a,
                    (Value::Finite(x), Value::Finite(y)) => Value::Finite(x + y * k as i64),
                    _ => Value::Infinite,
                })
                .collect(),
        )
    }

    /// Product order: every coordinate of `self` is at most that of `other`.
    pub fn le(&self, other: &Self) -> bool {
        assert_eq!(self.len(), other.len(), "value vector length");
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Replaces coordinate `i` by `x`.
    pub fn with(&self, i: usize, x: Value) -> Self {
        let mut v = self.clone();
        v.0[i] = x;
        v
    }

    /// Entries at or beyond `cut[i]` become `∞`.
    pub fn clamp_to_cut(&self, cut: &[i64]) -> Self {
        Self(
            self.0
                .iter()
                .zip(cut)
                .map(|(v, c)| match v {
                    Value::Finite(k) if k >= c => Value::Infinite,
                    other => *other,
                })
                .collect(),
        )
    }
}

impl fmt::Display for ValueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v)?;
        }
        f.write_str(")")
    }
}

impl FromStr for ValueVector {
    type Err = String;
    /// Accepts `25,inf` or `(25,inf)`.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(s);
        if inner.trim().is_empty() {
            return Err(String::from("empty value vector"));
        }
        inner
            .split(',')
            .map(Value::from_str)
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}
