//! Finite linear and circular orders.
//!
//! A [`CircOrder`] is kept as the cyclic sequence of its points rotated so
//! that the least label comes first. Two circular orders are equal exactly
//! when their canonical sequences are equal.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{show, Error, Result};
use crate::{Bounds, Label};

fn index_labels<T: Label>(labels: &[T]) -> Result<BTreeMap<T, usize>> {
    let mut pos = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        if pos.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(show(l)));
        }
    }
    Ok(pos)
}

/// A finite linear order, stored as its ascending sequence of labels.
#[derive(Clone)]
pub struct LinOrder<T> {
    labels: Vec<T>,
    pos: BTreeMap<T, usize>,
}

impl<T: Label> LinOrder<T> {
    pub fn new(ascending: Vec<T>) -> Result<Self> {
        let pos = index_labels(&ascending)?;
        Ok(LinOrder {
            labels: ascending,
            pos,
        })
    }

    /// The order of the labels themselves.
    pub fn natural(labels: impl IntoIterator<Item = T>) -> Self {
        let set: BTreeSet<T> = labels.into_iter().collect();
        Self::new(set.into_iter().collect()).expect("set has no duplicates")
    }

    pub fn labels(&self) -> &[T] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn contains(&self, a: &T) -> bool {
        self.pos.contains_key(a)
    }

    pub fn position(&self, a: &T) -> Option<usize> {
        self.pos.get(a).copied()
    }

    /// Strict comparison; false when either label is unknown.
    pub fn lt(&self, a: &T, b: &T) -> bool {
        match (self.position(a), self.position(b)) {
            (Some(i), Some(j)) => i < j,
            _ => false,
        }
    }

    pub fn le(&self, a: &T, b: &T) -> bool {
        match (self.position(a), self.position(b)) {
            (Some(i), Some(j)) => i <= j,
            _ => false,
        }
    }

    pub fn least(&self) -> Option<&T> {
        self.labels.first()
    }

    pub fn greatest(&self) -> Option<&T> {
        self.labels.last()
    }

    pub fn label_set(&self) -> BTreeSet<T> {
        self.labels.iter().cloned().collect()
    }
}

impl<T: PartialEq> PartialEq for LinOrder<T> {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}
impl<T: Eq> Eq for LinOrder<T> {}

impl<T: Hash> Hash for LinOrder<T> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.labels.hash(state)
    }
}

impl<T: fmt::Debug> fmt::Debug for LinOrder<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinOrder{:?}", self.labels)
    }
}

/// An arbitrary ternary relation on a finite ground set, with no axioms
/// assumed. Raw input for [`verify_circular_axioms`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryRelation<T: Ord> {
    points: BTreeSet<T>,
    triples: BTreeSet<(T, T, T)>,
}

impl<T: Label> TernaryRelation<T> {
    pub fn new(
        points: impl IntoIterator<Item = T>,
        triples: impl IntoIterator<Item = (T, T, T)>,
    ) -> Result<Self> {
        let points: BTreeSet<T> = points.into_iter().collect();
        let triples: BTreeSet<(T, T, T)> = triples.into_iter().collect();
        for (a, b, c) in &triples {
            for x in [a, b, c] {
                if !points.contains(x) {
                    return Err(Error::UnknownLabel(show(x)));
                }
            }
        }
        Ok(TernaryRelation { points, triples })
    }

    /// Tabulates `pred` over all ordered triples of distinct points.
    pub fn from_predicate(
        points: impl IntoIterator<Item = T>,
        pred: impl Fn(&T, &T, &T) -> bool,
    ) -> Self {
        let points: BTreeSet<T> = points.into_iter().collect();
        let mut triples = BTreeSet::new();
        for a in &points {
            for b in &points {
                if b == a {
                    continue;
                }
                for c in &points {
                    if c == a || c == b {
                        continue;
                    }
                    if pred(a, b, c) {
                        triples.insert((a.clone(), b.clone(), c.clone()));
                    }
                }
            }
        }
        TernaryRelation { points, triples }
    }

    pub fn points(&self) -> &BTreeSet<T> {
        &self.points
    }

    pub fn triples(&self) -> &BTreeSet<(T, T, T)> {
        &self.triples
    }

    pub fn contains(&self, a: &T, b: &T, c: &T) -> bool {
        // Tuple lookup needs owned keys.
        self.triples.contains(&(a.clone(), b.clone(), c.clone()))
    }
}

/// A finite circular order in canonical form.
#[derive(Clone)]
pub struct CircOrder<T> {
    cycle: Vec<T>,
    pos: BTreeMap<T, usize>,
}

impl<T: Label> CircOrder<T> {
    /// Builds the circular order whose points occur in `cycle` in
    /// counter-clockwise order. Any rotation gives the same order.
    pub fn from_cycle(cycle: Vec<T>) -> Result<Self> {
        index_labels(&cycle)?;
        let mut cycle = cycle;
        if let Some(min_at) = cycle
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.cmp(y.1))
            .map(|(i, _)| i)
        {
            cycle.rotate_left(min_at);
        }
        let pos = index_labels(&cycle)?;
        Ok(CircOrder { cycle, pos })
    }

    /// The standard order `0, 1, ..., n-1` modulo `n`.
    pub fn standard(n: usize) -> CircOrder<usize> {
        CircOrder::from_cycle((0..n).collect()).expect("distinct")
    }

    /// Canonical cyclic sequence, least label first.
    pub fn labels(&self) -> &[T] {
        &self.cycle
    }

    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    pub fn contains(&self, a: &T) -> bool {
        self.pos.contains_key(a)
    }

    pub fn position(&self, a: &T) -> Option<usize> {
        self.pos.get(a).copied()
    }

    pub fn label_set(&self) -> BTreeSet<T> {
        self.cycle.iter().cloned().collect()
    }

    /// `[a, b, c]`: the three points are distinct and met in this order
    /// when walking counter-clockwise from `a`.
    pub fn holds(&self, a: &T, b: &T, c: &T) -> bool {
        let (Some(i), Some(j), Some(k)) = (self.position(a), self.position(b), self.position(c))
        else {
            return false;
        };
        if i == j || j == k || i == k {
            return false;
        }
        let n = self.cycle.len();
        (j + n - i) % n < (k + n - i) % n
    }

    /// The point following `a`.
    pub fn successor(&self, a: &T) -> Option<&T> {
        let i = self.position(a)?;
        Some(&self.cycle[(i + 1) % self.cycle.len()])
    }

    /// Points in cyclic order starting at `a`.
    pub fn walk_from(&self, a: &T) -> Option<impl Iterator<Item = &T> + '_> {
        let start = self.position(a)?;
        let n = self.cycle.len();
        Some((0..n).map(move |k| &self.cycle[(start + k) % n]))
    }

    /// All triples of the derived relation.
    pub fn relation(&self) -> TernaryRelation<T> {
        TernaryRelation::from_predicate(self.cycle.iter().cloned(), |a, b, c| self.holds(a, b, c))
    }

    /// The induced order on a subset of the points.
    pub fn restrict(&self, subset: &BTreeSet<T>) -> Result<CircOrder<T>> {
        for s in subset {
            if !self.contains(s) {
                return Err(Error::UnknownLabel(show(s)));
            }
        }
        CircOrder::from_cycle(
            self.cycle
                .iter()
                .filter(|x| subset.contains(*x))
                .cloned()
                .collect(),
        )
    }

    /// Relabels through an injective map.
    pub fn map_labels<U: Label>(&self, f: impl Fn(&T) -> U) -> Result<CircOrder<U>> {
        CircOrder::from_cycle(self.cycle.iter().map(f).collect())
    }
}

impl<T: PartialEq> PartialEq for CircOrder<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cycle == other.cycle
    }
}
impl<T: Eq> Eq for CircOrder<T> {}

impl<T: Hash> Hash for CircOrder<T> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.cycle.hash(state)
    }
}

impl<T: fmt::Debug> fmt::Debug for CircOrder<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CircOrder{:?}", self.cycle)
    }
}

/// The four circular-order axioms, in the order they are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Cyclicity,
    Asymmetry,
    Transitivity,
    Totality,
}

/// First failing axiom with its witness. Transitivity witnesses carry four
/// labels `a, b, c, d` with `[a,b,c]`, `[a,c,d]` but not `[a,b,d]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation<T> {
    pub axiom: Axiom,
    pub witness: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomVerdict<T> {
    Valid(CircOrder<T>),
    Violation(AxiomViolation<T>),
}

impl<T> AxiomVerdict<T> {
    pub fn is_valid(&self) -> bool {
        matches!(self, AxiomVerdict::Valid(_))
    }

    pub fn into_order(self) -> Option<CircOrder<T>> {
        match self {
            AxiomVerdict::Valid(c) => Some(c),
            AxiomVerdict::Violation(_) => None,
        }
    }
}

pub fn verify_circular_axioms<T: Label>(rel: &TernaryRelation<T>) -> Result<AxiomVerdict<T>> {
    verify_circular_axioms_bounded(rel, &Bounds::default())
}

/// Checks Cyclicity, Asymmetry, Transitivity and Totality in that order and
/// reports the first failure; on success returns the canonical order.
pub fn verify_circular_axioms_bounded<T: Label>(
    rel: &TernaryRelation<T>,
    bounds: &Bounds,
) -> Result<AxiomVerdict<T>> {
    bounds.check_size(rel.points.len())?;
    let violation = |axiom, witness: Vec<&T>| {
        Ok(AxiomVerdict::Violation(AxiomViolation {
            axiom,
            witness: witness.into_iter().cloned().collect(),
        }))
    };

    // Dense bitmap over point indices; index order is label order, so the
    // scans below meet triples in the same order as the triple set.
    let pts: Vec<&T> = rel.points.iter().collect();
    let n = pts.len();
    let index: BTreeMap<&T, usize> = pts.iter().enumerate().map(|(i, x)| (*x, i)).collect();
    let mut bits = vec![false; n * n * n];
    let at = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let triples: Vec<(usize, usize, usize)> = rel
        .triples
        .iter()
        .map(|(a, b, c)| (index[a], index[b], index[c]))
        .collect();
    for &(i, j, k) in &triples {
        bits[at(i, j, k)] = true;
    }
    let has = |i: usize, j: usize, k: usize| bits[at(i, j, k)];

    for &(i, j, k) in &triples {
        if !has(j, k, i) {
            return violation(Axiom::Cyclicity, vec![pts[i], pts[j], pts[k]]);
        }
    }
    for &(i, j, k) in &triples {
        if has(j, i, k) {
            return violation(Axiom::Asymmetry, vec![pts[i], pts[j], pts[k]]);
        }
    }
    for &(i, j, k) in &triples {
        for d in 0..n {
            if has(i, k, d) && !has(i, j, d) {
                return violation(Axiom::Transitivity, vec![pts[i], pts[j], pts[k], pts[d]]);
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i != j && j != k && i != k && !has(i, j, k) && !has(i, k, j) {
                    return violation(Axiom::Totality, vec![pts[i], pts[j], pts[k]]);
                }
            }
        }
    }

    if n == 0 {
        return Ok(AxiomVerdict::Valid(CircOrder::from_cycle(Vec::new())?));
    }
    let mut rest: Vec<usize> = (1..n).collect();
    rest.sort_by(|&a, &b| {
        if a == b {
            std::cmp::Ordering::Equal
        } else if has(0, a, b) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    let cycle: Vec<usize> = std::iter::once(0).chain(rest).collect();
    let mut pos = vec![0; n];
    for (p, &i) in cycle.iter().enumerate() {
        pos[i] = p;
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let derived = i != j && j != k && i != k && (pos[j] + n - pos[i]) % n < (pos[k] + n - pos[i]) % n;
                if derived != has(i, j, k) {
                    return Err(Error::InvariantViolation(
                        "axiom-valid relation differs from its canonical order".into(),
                    ));
                }
            }
        }
    }
    let order = CircOrder::from_cycle(cycle.into_iter().map(|i| pts[i].clone()).collect())?;
    Ok(AxiomVerdict::Valid(order))
}

/// The standard circular order of a linear order: `[x,y,z]` iff
/// `x<y<z`, `y<z<x` or `z<x<y`.
pub fn circularize<T: Label>(order: &LinOrder<T>) -> CircOrder<T> {
    CircOrder::from_cycle(order.labels().to_vec()).expect("linear order labels are distinct")
}

/// The standard cut at `z`: `z` is least and `a <_z b` iff `[z, a, b]`.
pub fn cut_order<T: Label>(order: &CircOrder<T>, z: &T) -> Result<LinOrder<T>> {
    let walk = order
        .walk_from(z)
        .ok_or_else(|| Error::UnknownLabel(show(z)))?;
    LinOrder::new(walk.cloned().collect())
}

fn same_labels<T: Label>(c: &CircOrder<T>, l: &LinOrder<T>) -> Result<()> {
    if c.len() != l.len() || l.labels().iter().any(|x| !c.contains(x)) {
        return Err(Error::LabelMismatch(format!("{c:?} vs {l:?}")));
    }
    Ok(())
}

/// True iff `a < b < c` in `order` always implies `[a, b, c]` in `base`.
pub fn verify_cut<T: Label>(base: &CircOrder<T>, order: &LinOrder<T>) -> Result<bool> {
    same_labels(base, order)?;
    Ok(first_cut_violation(base, order).is_none())
}

fn first_cut_violation<T: Label>(base: &CircOrder<T>, order: &LinOrder<T>) -> Option<(T, T, T)> {
    let l = order.labels();
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            for k in j + 1..l.len() {
                if !base.holds(&l[i], &l[j], &l[k]) {
                    return Some((l[i].clone(), l[j].clone(), l[k].clone()));
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntervalKind {
    /// `(a, b)`
    Open,
    /// `[a, b]`
    Closed,
    /// `[a, b)`
    LeftClosed,
    /// `(a, b]`
    RightClosed,
}

/// Oriented interval from `a` to `b`. `(a, b) = {x : [a, x, b]}`.
pub fn interval<T: Label>(
    order: &CircOrder<T>,
    a: &T,
    b: &T,
    kind: IntervalKind,
) -> Result<BTreeSet<T>> {
    for x in [a, b] {
        if !order.contains(x) {
            return Err(Error::UnknownLabel(show(x)));
        }
    }
    let mut out = BTreeSet::new();
    if a != b {
        let walk = order.walk_from(a).expect("checked above");
        for x in walk.skip(1) {
            if x == b {
                break;
            }
            out.insert(x.clone());
        }
    }
    if matches!(kind, IntervalKind::Closed | IntervalKind::LeftClosed) {
        out.insert(a.clone());
    }
    if matches!(kind, IntervalKind::Closed | IntervalKind::RightClosed) {
        out.insert(b.clone());
    }
    Ok(out)
}

/// A subset is convex when, for any two of its points, one of the two
/// closed intervals between them lies inside it. Labels outside the order
/// make the answer false.
pub fn is_convex<T: Label>(order: &CircOrder<T>, subset: &BTreeSet<T>) -> bool {
    if subset.iter().any(|x| !order.contains(x)) {
        return false;
    }
    for a in subset {
        for b in subset {
            if a >= b {
                continue;
            }
            let ab = interval(order, a, b, IntervalKind::Closed).expect("known labels");
            let ba = interval(order, b, a, IntervalKind::Closed).expect("known labels");
            if !ab.is_subset(subset) && !ba.is_subset(subset) {
                return false;
            }
        }
    }
    true
}

/// A linear order compatible with a circular order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut<T> {
    base: CircOrder<T>,
    order: LinOrder<T>,
}

impl<T: Label> Cut<T> {
    pub fn new(base: CircOrder<T>, order: LinOrder<T>) -> Result<Self> {
        same_labels(&base, &order)?;
        if let Some(w) = first_cut_violation(&base, &order) {
            return Err(Error::NotACut(show(&w)));
        }
        Ok(Cut { base, order })
    }

    pub fn base(&self) -> &CircOrder<T> {
        &self.base
    }

    pub fn order(&self) -> &LinOrder<T> {
        &self.order
    }

    /// A gap has neither a least nor a greatest element. Finite nonempty
    /// cuts always have both.
    pub fn is_gap(&self) -> bool {
        !self.order.is_empty() && self.order.least().is_none() && self.order.greatest().is_none()
    }
}

/// Moves the final segment `X1 = {x : a < x for all a in A}` of the cut
/// `order` in front of the remaining points, keeping relative order inside
/// both parts. The result is again a cut of `base`.
pub fn cut_from_subset<T: Label>(
    base: &CircOrder<T>,
    order: &LinOrder<T>,
    subset: &BTreeSet<T>,
) -> Result<Cut<T>> {
    same_labels(base, order)?;
    if let Some(w) = first_cut_violation(base, order) {
        return Err(Error::NotACut(show(&w)));
    }
    if let Some(x) = subset.iter().find(|x| !order.contains(x)) {
        return Err(Error::UnknownLabel(show(x)));
    }
    let (upper, lower): (Vec<T>, Vec<T>) = order
        .labels()
        .iter()
        .cloned()
        .partition(|x| subset.iter().all(|a| order.lt(a, x)));
    let mut reordered = upper;
    reordered.extend(lower);
    Cut::new(base.clone(), LinOrder::new(reordered)?)
}
