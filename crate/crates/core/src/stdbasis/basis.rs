use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::curve::{RingElement, Value, ValueVector};
use crate::error::{Error, Result};

/// What a basis generates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisRole {
    /// Elements of the maximal ideal generating the local ring.
    Ring,
    /// Generators of a fractional ideal.
    Ideal,
    /// Pullbacks of differential forms.
    Differential,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub element: RingElement,
}

/// A named, value-cached finite set of nonzero elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisSet {
    role: BasisRole,
    elements: Vec<BasisElement>,
}

impl BasisSet {
    pub fn new(role: BasisRole) -> Self {
        Self {
            role,
            elements: Vec::new(),
        }
    }

    pub fn role(&self) -> BasisRole {
        self.role
    }

    /// Adds an element; names must be distinct, elements nonzero, and ring
    /// elements must lie in the maximal ideal.
    pub fn push(&mut self, name: String, element: RingElement) -> Result<()> {
        if self.elements.iter().any(|e| e.name == name) {
            return Err(Error::InvalidCurve(format!("duplicate basis name `{}`", name)));
        }
        if element.is_zero() {
            return Err(Error::InvalidCurve(format!("basis element `{}` is zero", name)));
        }
        if self.role == BasisRole::Ring
            && element
                .value()
                .iter()
                .any(|v| matches!(v, Value::Finite(k) if k <= 0))
        {
            return Err(Error::InvalidCurve(format!(
                "ring basis element `{}` has value {} outside the maximal ideal",
                name,
                element.value()
            )));
        }
        self.elements.push(BasisElement { name, element });
        Ok(())
    }

    /// Adds `element` unless an element with the same series is present.
    pub fn push_unique(&mut self, name: String, element: RingElement) -> Result<bool> {
        if self.elements.iter().any(|e| e.element == element) {
            return Ok(false);
        }
        self.push(name, element)?;
        Ok(true)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, i: usize) -> &BasisElement {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = &BasisElement> {
        self.elements.iter()
    }

    pub fn remove(&mut self, i: usize) -> BasisElement {
        self.elements.remove(i)
    }

    pub fn values(&self) -> Vec<ValueVector> {
        self.elements.iter().map(|e| e.element.value().clone()).collect()
    }

    pub fn names(&self) -> Vec<&str> {
        self.elements.iter().map(|e| e.name.as_str()).collect()
    }

    pub fn find(&self, name: &str) -> Option<&BasisElement> {
        self.elements.iter().find(|e| e.name == name)
    }

    /// The first name `prefix{n}` not in use, with `n >= start`.
    pub fn fresh_name(&self, prefix: &str, start: usize, taken: &[&str]) -> String {
        let mut n = start;
        loop {
            let candidate = format!("{}{}", prefix, n);
            if !self.elements.iter().any(|e| e.name == candidate)
                && !taken.contains(&candidate.as_str())
            {
                return candidate;
            }
            n += 1;
        }
    }
}
