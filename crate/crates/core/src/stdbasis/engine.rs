use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::curve::{Cut, Expr, RingElement, Value, ValueVector};
use crate::diophantine::{for_each_below, Diophantine};
use crate::error::{Error, Result};
use crate::series::{Rational, TruncatedSeries};
use crate::stdbasis::basis::BasisSet;

/// Sparse exponent vector over a ring basis: `(index, exponent)`, sorted by
/// index, exponents positive.
pub type Exponents = Vec<(usize, u32)>;

/// A product `G^α·h`, with `h = None` meaning the unit (ring mode).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub alpha: Exponents,
    pub h: Option<usize>,
}

/// Which coordinates a reduction must respect.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Reductions may not lower any coordinate.
    Full,
    /// Only coordinate `k` is looked at; used for branch bases and kernels.
    Coordinate(usize),
}

/// An element excluded from the reducers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Skip {
    None,
    Ring(usize),
    Module(usize),
}

/// One step `f ↦ f - c·G^α·h` advancing coordinate `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub c: Rational,
    pub alpha: Exponents,
    pub h: Option<usize>,
    pub k: usize,
}

#[derive(Clone, Debug)]
pub struct FinalReduction {
    pub residue: RingElement,
    pub trace: Vec<ReductionStep>,
    /// The residue vanishes on every coordinate the reduction looked at.
    pub certified_zero: bool,
}

/// `G^{α₁}h₁ + c·G^{α₂}h₂` cancelling the leading `t_k` term.
#[derive(Clone, Debug)]
pub struct SkProcess {
    pub k: usize,
    pub first: Term,
    pub second: Term,
    pub c: Rational,
    pub element: RingElement,
}

/// What one saturation pass produced.
#[derive(Clone, Debug, Default)]
pub struct Saturation {
    pub added: Vec<usize>,
    pub kernel: Vec<RingElement>,
    pub processes: usize,
}

#[derive(Clone, Debug)]
struct Side {
    term: Term,
    s: i64,
    value: ValueVector,
}

const CACHE_LIMIT: usize = 20_000;

/// Reduction state over a ring basis `G` and, in module mode, a basis `H`.
#[derive(Clone, Debug)]
pub struct Engine {
    cut: Cut,
    ring: BasisSet,
    module: Option<BasisSet>,
    // Precision kept for bare G-products; module elements of negative order
    // need more than the cut.
    limit: Vec<i64>,
    cache: BTreeMap<Exponents, Vec<TruncatedSeries>>,
    processed: BTreeSet<(usize, Term, Term)>,
    counters: BTreeMap<String, usize>,
    strict: bool,
}

fn sparse(dense: &[u32], idx: &[usize]) -> Exponents {
    dense
        .iter()
        .zip(idx)
        .filter(|(e, _)| **e > 0)
        .map(|(e, j)| (*j, *e))
        .collect()
}

fn coprime(a: &Exponents, b: &Exponents) -> bool {
    !a.iter().any(|(j, _)| b.iter().any(|(l, _)| l == j))
}

impl Engine {
    /// Reductions use `G`-products alone (`H = {1}`).
    pub fn ring(cut: Cut, ring: BasisSet) -> Self {
        Self::build(cut, ring, None)
    }

    pub fn module(cut: Cut, ring: BasisSet, module: BasisSet) -> Self {
        Self::build(cut, ring, Some(module))
    }

    fn build(cut: Cut, ring: BasisSet, module: Option<BasisSet>) -> Self {
        let limit = (0..cut.branches())
            .map(|i| {
                let low = module
                    .as_ref()
                    .and_then(|m| m.iter().filter_map(|h| h.element.value().get(i).finite()).min())
                    .unwrap_or(0);
                cut.get(i) - low.min(0)
            })
            .collect();
        Self {
            limit,
            cut,
            ring,
            module,
            cache: BTreeMap::new(),
            processed: BTreeSet::new(),
            counters: BTreeMap::new(),
            strict: true,
        }
    }

    /// When set (the default), a nonzero final reduction at or above the bound
    /// is a hypothesis violation; otherwise it is kept.
    pub fn set_strict(&mut self, strict: bool) {
        self.strict = strict;
    }

    pub fn cut(&self) -> &Cut {
        &self.cut
    }

    pub fn ring_basis(&self) -> &BasisSet {
        &self.ring
    }

    pub fn module_basis(&self) -> Option<&BasisSet> {
        self.module.as_ref()
    }

    /// The set that receives new elements.
    pub fn targets(&self) -> &BasisSet {
        self.module.as_ref().unwrap_or(&self.ring)
    }

    pub fn into_parts(self) -> (BasisSet, Option<BasisSet>) {
        (self.ring, self.module)
    }

    fn r(&self) -> usize {
        self.cut.branches()
    }

    fn ring_value(&self, j: usize, k: usize) -> Value {
        self.ring.get(j).element.value().get(k)
    }

    fn module_value(&self, a: usize, k: usize) -> Value {
        self.module.as_ref().expect("module mode").get(a).element.value().get(k)
    }

    /// Ring indices with finite `v_k`, excluding `skip`.
    fn weights(&self, k: usize, skip: Skip) -> (Vec<usize>, Vec<i64>) {
        let mut idx = Vec::new();
        let mut w = Vec::new();
        for j in 0..self.ring.len() {
            if skip == Skip::Ring(j) {
                continue;
            }
            if let Value::Finite(x) = self.ring_value(j, k) {
                idx.push(j);
                w.push(x);
            }
        }
        (idx, w)
    }

    /// `v(G^α h)` clamped to the cut.
    pub fn term_value(&self, t: &Term) -> ValueVector {
        let mut v = match t.h {
            Some(a) => self.module.as_ref().expect("module mode").get(a).element.value().clone(),
            None => ValueVector::zero(self.r()),
        };
        for &(j, e) in &t.alpha {
            v = v.odot_pow(self.ring.get(j).element.value(), e);
        }
        self.cut.clamp(&v)
    }

    fn term_value_k(&self, t: &Term, k: usize) -> Value {
        let mut v = match t.h {
            Some(a) => self.module_value(a, k),
            None => Value::Finite(0),
        };
        for &(j, e) in &t.alpha {
            v = match (v, self.ring_value(j, k)) {
                (Value::Finite(x), Value::Finite(y)) => Value::Finite(x + y * e as i64),
                _ => Value::Infinite,
            };
        }
        v
    }

    /// Leading `t_k` coefficient of `G^α h`, from the factors' leading coefficients.
    fn term_lead(&self, t: &Term, k: usize) -> Rational {
        let mut c = match t.h {
            Some(a) => self
                .module
                .as_ref()
                .expect("module mode")
                .get(a)
                .element
                .leading(k)
                .cloned()
                .unwrap_or_else(Rational::zero),
            None => Rational::one(),
        };
        for &(j, e) in &t.alpha {
            let l = self
                .ring
                .get(j)
                .element
                .leading(k)
                .cloned()
                .unwrap_or_else(Rational::zero);
            for _ in 0..e {
                c *= &l;
            }
        }
        c
    }

    fn alpha_series(&mut self, alpha: &Exponents) -> Result<Vec<TruncatedSeries>> {
        if alpha.is_empty() {
            return Ok(vec![TruncatedSeries::one(); self.r()]);
        }
        if let Some(s) = self.cache.get(alpha) {
            return Ok(s.clone());
        }
        let mut smaller = alpha.clone();
        let (j, _) = *smaller.last().expect("nonempty");
        {
            let last = smaller.last_mut().expect("nonempty");
            last.1 -= 1;
            if last.1 == 0 {
                smaller.pop();
            }
        }
        let g = self.ring.get(j).element.series().to_vec();
        let prod: Vec<TruncatedSeries> = if smaller.is_empty() {
            g.iter().zip(&self.limit).map(|(s, &l)| s.truncate(l)).collect()
        } else {
            let base = self.alpha_series(&smaller)?;
            base.iter()
                .zip(&g)
                .zip(&self.limit)
                .map(|((a, b), &l)| a.mul_bounded(b, Some(l)))
                .collect()
        };
        if self.cache.len() >= CACHE_LIMIT {
            self.cache.clear();
        }
        self.cache.insert(alpha.clone(), prod.clone());
        Ok(prod)
    }

    fn term_series(&mut self, t: &Term) -> Result<Vec<TruncatedSeries>> {
        match t.h {
            None => {
                let g = self.alpha_series(&t.alpha)?;
                Ok(g.iter().zip(self.cut.as_slice()).map(|(s, &n)| s.truncate(n)).collect())
            }
            Some(a) => {
                let h = self.module.as_ref().expect("module mode").get(a).element.series().to_vec();
                if t.alpha.is_empty() {
                    return Ok(h);
                }
                let g = self.alpha_series(&t.alpha)?;
                self.cut.mul(&g, &h)
            }
        }
    }

    /// Provenance of `G^α h` as a product of names.
    pub fn term_expr(&self, t: &Term) -> Expr {
        let mut factors: Vec<(&str, u32)> = t
            .alpha
            .iter()
            .map(|&(j, e)| (self.ring.get(j).name.as_str(), e))
            .collect();
        if let Some(a) = t.h {
            factors.push((self.module.as_ref().expect("module mode").get(a).name.as_str(), 1));
        }
        Expr::product(&factors)
    }

    /// The element `G^α h`, truncated at the cut.
    pub fn term_element(&mut self, t: &Term) -> Result<RingElement> {
        let series = self.term_series(t)?;
        let expr = self.term_expr(t);
        self.cut.element(series, expr)
    }

    /// The lexicographically least `(h, α)` giving a `k`-reduction of `f`.
    pub fn try_reduce(&self, f: &RingElement, k: usize, mode: Mode, skip: Skip) -> Option<(Term, Rational)> {
        let s = f.value().get(k).finite()?;
        let (idx, w) = self.weights(k, skip);
        let mut targets: Vec<(Option<usize>, i64)> = Vec::new();
        match &self.module {
            Some(m) => {
                for a in 0..m.len() {
                    if skip == Skip::Module(a) {
                        continue;
                    }
                    if let Value::Finite(x) = self.module_value(a, k) {
                        if x <= s {
                            targets.push((Some(a), s - x));
                        }
                    }
                }
            }
            None => {
                if s > 0 {
                    targets.push((None, s));
                }
            }
        }
        let max = targets.iter().map(|t| t.1).max()?;
        let solver = Diophantine::new(&w, max);
        let fv = f.value();
        for (h, target) in targets {
            let mut found: Option<Term> = None;
            solver.search(target, |alpha| {
                let term = Term {
                    alpha: sparse(alpha, &idx),
                    h,
                };
                if mode == Mode::Full {
                    let tv = self.term_value(&term);
                    if !(0..self.r()).all(|i| i == k || fv.get(i) <= tv.get(i)) {
                        return false;
                    }
                }
                found = Some(term);
                true
            });
            if let Some(term) = found {
                let lead = f.leading(k).expect("finite coordinate").clone();
                let c = lead / self.term_lead(&term, k);
                return Some((term, c));
            }
        }
        None
    }

    fn apply(&mut self, f: &RingElement, t: &Term, c: &Rational) -> Result<RingElement> {
        let series = self.term_series(t)?;
        let expr = self.term_expr(t);
        self.cut.sub_scaled(f, c, &series, &expr)
    }

    /// Reduces until no reduction applies or the residue vanishes.
    pub fn final_reduction(&mut self, f: RingElement, mode: Mode, skip: Skip) -> Result<FinalReduction> {
        let mut f = f;
        let mut trace = Vec::new();
        loop {
            let ks: Vec<usize> = match mode {
                Mode::Full => f.finite_indices(),
                Mode::Coordinate(k) => {
                    if f.value().get(k).is_finite() {
                        vec![k]
                    } else {
                        vec![]
                    }
                }
            };
            let mut next = None;
            for k in ks {
                if let Some((t, c)) = self.try_reduce(&f, k, mode, skip) {
                    next = Some((k, t, c));
                    break;
                }
            }
            let Some((k, t, c)) = next else { break };
            let g = self.apply(&f, &t, &c)?;
            let (old, new) = (f.value(), g.value());
            let monotone = match mode {
                Mode::Full => old.le(new),
                Mode::Coordinate(_) => true,
            };
            if !monotone || new.get(k) <= old.get(k) {
                return Err(Error::HypothesisViolation(format!(
                    "reduction at coordinate {} took {} to {}",
                    k + 1,
                    old,
                    new
                )));
            }
            trace.push(ReductionStep {
                c,
                alpha: t.alpha,
                h: t.h,
                k,
            });
            f = g;
        }
        let certified_zero = match mode {
            Mode::Full => f.is_zero(),
            Mode::Coordinate(k) => !f.value().get(k).is_finite(),
        };
        Ok(FinalReduction {
            residue: f,
            trace,
            certified_zero,
        })
    }

    fn sides(&self, k: usize) -> Vec<Side> {
        let (idx, w) = self.weights(k, Skip::None);
        let cut_k = self.cut.get(k);
        let mut out = Vec::new();
        let bases: Vec<(Option<usize>, i64)> = match &self.module {
            Some(m) => (0..m.len())
                .filter_map(|a| self.module_value(a, k).finite().map(|x| (Some(a), x)))
                .collect(),
            None => vec![(None, 0)],
        };
        for (h, x) in bases {
            if x >= cut_k {
                continue;
            }
            for_each_below(&w, cut_k - x, |alpha, sum| {
                if h.is_none() && sum == 0 {
                    return;
                }
                let term = Term {
                    alpha: sparse(alpha, &idx),
                    h,
                };
                let value = self.term_value(&term);
                out.push(Side {
                    term,
                    s: x + sum,
                    value,
                });
            });
        }
        out
    }

    fn buckets(sides: Vec<Side>) -> BTreeMap<i64, Vec<Side>> {
        let mut b: BTreeMap<i64, Vec<Side>> = BTreeMap::new();
        for s in sides {
            b.entry(s.s).or_default().push(s);
        }
        b.retain(|_, v| v.len() > 1);
        b
    }

    fn below_bound(k: usize, s: i64, a: &ValueVector, b: &ValueVector, rho: &ValueVector) -> bool {
        if Value::Finite(s + 1) < rho.get(k) {
            return true;
        }
        (0..rho.len()).any(|i| i != k && a.get(i).min(b.get(i)) < rho.get(i))
    }

    /// Every `S_k`-process with some side below `ρ`, in enumeration order.
    pub fn all_processes(&mut self, k: usize, rho: &ValueVector) -> Result<Vec<SkProcess>> {
        let mut pairs = Vec::new();
        for (s, bucket) in Self::buckets(self.sides(k)) {
            for p in 0..bucket.len() {
                for q in p + 1..bucket.len() {
                    if Self::below_bound(k, s, &bucket[p].value, &bucket[q].value, rho) {
                        pairs.push((bucket[p].term.clone(), bucket[q].term.clone()));
                    }
                }
            }
        }
        pairs
            .into_iter()
            .map(|(a, b)| self.process(k, a, b))
            .collect()
    }

    /// Pending pairs of the full algorithm: coprime exponents, below `ρ`.
    fn pending_full(&self, rho: &ValueVector) -> Vec<(usize, Term, Term)> {
        let mut out = Vec::new();
        for k in 0..self.r() {
            for (s, bucket) in Self::buckets(self.sides(k)) {
                for p in 0..bucket.len() {
                    for q in p + 1..bucket.len() {
                        let (a, b) = (&bucket[p], &bucket[q]);
                        if !coprime(&a.term.alpha, &b.term.alpha) {
                            continue;
                        }
                        if !Self::below_bound(k, s, &a.value, &b.value, rho) {
                            continue;
                        }
                        let key = (k, a.term.clone(), b.term.clone());
                        if !self.processed.contains(&key) {
                            out.push(key);
                        }
                    }
                }
            }
        }
        out
    }

    /// Pending pairs of a single-coordinate run: one pair per extra connected
    /// component of each fibre, where sides sharing a ring factor (or, for
    /// modules, the same `h`) are connected.
    fn pending_coordinate(&self, k: usize) -> Vec<(usize, Term, Term)> {
        let mut out = Vec::new();
        for (_, bucket) in Self::buckets(self.sides(k)) {
            let n = bucket.len();
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(parent: &mut [usize], mut x: usize) -> usize {
                while parent[x] != x {
                    parent[x] = parent[parent[x]];
                    x = parent[x];
                }
                x
            }
            for p in 0..n {
                for q in p + 1..n {
                    let (a, b) = (&bucket[p].term, &bucket[q].term);
                    let linked = (a.h.is_some() && a.h == b.h) || !coprime(&a.alpha, &b.alpha);
                    if linked {
                        let (x, y) = (find(&mut parent, p), find(&mut parent, q));
                        if x != y {
                            parent[x.max(y)] = x.min(y);
                        }
                    }
                }
            }
            let mut reps: Vec<usize> = (0..n).filter(|&p| find(&mut parent, p) == p).collect();
            reps.sort_unstable();
            for &q in &reps[1..] {
                let key = (k, bucket[reps[0]].term.clone(), bucket[q].term.clone());
                if !self.processed.contains(&key) {
                    out.push(key);
                }
            }
        }
        out
    }

    /// The normalized `S_k`-process of two sides with equal `v_k`.
    pub fn process(&mut self, k: usize, a: Term, b: Term) -> Result<SkProcess> {
        let c = -(self.term_lead(&a, k) / self.term_lead(&b, k));
        let first = self.term_element(&a)?;
        let second = self.term_series(&b)?;
        let expr = self.term_expr(&b);
        let element = self.cut.sub_scaled(&first, &-c.clone(), &second, &expr)?;
        let s = self.term_value_k(&a, k);
        if element.value().get(k) <= s {
            return Err(Error::HypothesisViolation(format!(
                "S-process at coordinate {} does not cancel",
                k + 1
            )));
        }
        Ok(SkProcess {
            k,
            first: a,
            second: b,
            c,
            element,
        })
    }

    /// A name `prefix{n}` unused in both bases.
    pub fn fresh_name(&mut self, prefix: &str) -> String {
        let start = *self.counters.get(prefix).unwrap_or(&1);
        let taken: Vec<&str> = match &self.module {
            Some(m) => m.names(),
            None => Vec::new(),
        };
        let name = self.ring.fresh_name(prefix, start, &taken);
        let n: usize = name[prefix.len()..].parse().unwrap_or(start);
        self.counters.insert(String::from(prefix), n + 1);
        name
    }

    fn push_target(&mut self, prefix: &str, element: RingElement) -> Result<usize> {
        let name = self.fresh_name(prefix);
        let set = match &mut self.module {
            Some(m) => m,
            None => &mut self.ring,
        };
        set.push(name, element)?;
        Ok(set.len() - 1)
    }

    /// Runs S-processes and final reductions until every pending process
    /// reduces to zero. New elements are added as soon as they appear.
    ///
    /// In [`Mode::Full`] only processes with a side below `rho` are formed; in
    /// [`Mode::Coordinate`] residues vanishing at `k` are returned as kernel
    /// elements.
    pub fn saturate(&mut self, mode: Mode, rho: Option<&ValueVector>, prefix: &str) -> Result<Saturation> {
        let mut report = Saturation::default();
        let unbounded = ValueVector::infinite(self.r());
        let rho = rho.unwrap_or(&unbounded).clone();
        loop {
            let pending = match mode {
                Mode::Full => self.pending_full(&rho),
                Mode::Coordinate(k) => self.pending_coordinate(k),
            };
            if pending.is_empty() {
                break;
            }
            for key in pending {
                self.processed.insert(key.clone());
                let (k, a, b) = key;
                let p = self.process(k, a, b)?;
                report.processes += 1;
                let fr = self.final_reduction(p.element, mode, Skip::None)?;
                if fr.residue.is_zero() {
                    continue;
                }
                match mode {
                    Mode::Full => {
                        let v = fr.residue.value();
                        let beyond = v.finite_indices().iter().all(|&i| v.get(i) >= rho.get(i));
                        if beyond && self.strict {
                            return Err(Error::HypothesisViolation(format!(
                                "nonzero final reduction with value {} at or above the bound {}",
                                v, rho
                            )));
                        }
                        let j = self.push_target(prefix, fr.residue)?;
                        report.added.push(j);
                    }
                    Mode::Coordinate(k) => {
                        if fr.certified_zero {
                            push_distinct(&mut report.kernel, fr.residue);
                        } else {
                            let j = self.push_target(prefix, fr.residue)?;
                            report.added.push(j);
                        }
                        let _ = k;
                    }
                }
            }
        }
        Ok(report)
    }

    /// Minimal products `G^α h` whose `v_k` reaches the cut and which do not
    /// vanish everywhere.
    pub fn boundary(&mut self, k: usize) -> Result<Vec<RingElement>> {
        let (idx, w) = self.weights(k, Skip::None);
        let cut_k = self.cut.get(k);
        let bases: Vec<(Option<usize>, i64)> = match &self.module {
            Some(m) => (0..m.len())
                .filter_map(|a| self.module_value(a, k).finite().map(|x| (Some(a), x)))
                .collect(),
            None => vec![(None, 0)],
        };
        let mut terms: BTreeSet<Term> = BTreeSet::new();
        for (h, x) in bases {
            let bound = cut_k - x;
            if bound <= 0 {
                continue;
            }
            let mut found = Vec::new();
            for_each_below(&w, bound, |alpha, sum| {
                for j in 0..w.len() {
                    let top = sum + w[j];
                    if top < bound {
                        continue;
                    }
                    let minimal = (0..w.len()).all(|l| (l != j && alpha[l] == 0) || top - w[l] < bound);
                    if minimal {
                        let mut beta = alpha.to_vec();
                        beta[j] += 1;
                        found.push(sparse(&beta, &idx));
                    }
                }
            });
            for alpha in found {
                let term = Term { alpha, h };
                if !self.term_value(&term).is_all_infinite() {
                    terms.insert(term);
                }
            }
        }
        let mut out = Vec::new();
        for t in terms {
            let e = self.term_element(&t)?;
            if !e.is_zero() {
                push_distinct(&mut out, e);
            }
        }
        Ok(out)
    }

    /// Removes elements that reduce modulo the others, scanning from the end
    /// until nothing changes.
    pub fn minimalize(&mut self, mode: Mode) {
        loop {
            let mut removed = false;
            let n = self.targets().len();
            for j in (0..n).rev() {
                let f = self.targets().get(j).element.clone();
                let skip = if self.module.is_some() {
                    Skip::Module(j)
                } else {
                    Skip::Ring(j)
                };
                let ks = match mode {
                    Mode::Full => f.finite_indices(),
                    Mode::Coordinate(k) => vec![k],
                };
                if ks.iter().any(|&k| self.try_reduce(&f, k, mode, skip).is_some()) {
                    match &mut self.module {
                        Some(m) => {
                            m.remove(j);
                        }
                        None => {
                            self.ring.remove(j);
                        }
                    }
                    self.cache.clear();
                    self.processed.clear();
                    removed = true;
                    break;
                }
            }
            if !removed {
                break;
            }
        }
    }
}

/// Appends `e` unless an element with the same series is already present.
pub fn push_distinct(list: &mut Vec<RingElement>, e: RingElement) {
    if !list.contains(&e) {
        list.push(e);
    }
}
