//! Enveloping semigroups at desk scale.
//!
//! Finite systems are materialized as transformation semigroups. The
//! translation cascade and the Sturmian double circle are symbolic element
//! algebras whose composition is checked against pointwise evaluation.

pub mod cascade;
pub mod quadirr;
pub mod sturmian;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{show, Error, Result};
use crate::groups::FiniteAction;
use crate::orders::{verify_circular_axioms, AxiomVerdict, CircOrder, LinOrder, TernaryRelation};
use crate::{Label, Verdict};

pub use cascade::{cascade_apply, cascade_compose, Cascade, CascadeElt, ExtInt};
pub use quadirr::{qi_sign, QuadIrr};
pub use sturmian::{
    sturmian_apply, sturmian_compose, sturmian_etriple, ta_triple, verify_minimal_ideal, verify_translation_cop, Sign,
    SturmianElt, TAPoint,
};

pub type SelfMap<X> = BTreeMap<X, X>;

/// Semigroup elements acting on ordered points, evaluated one point at a
/// time.
pub trait PointwiseSystem {
    type Elt: Label;
    type Point: Label;
    fn apply(&self, s: &Self::Elt, x: &Self::Point) -> Self::Point;
    /// `u ∘ v`, applying `v` first.
    fn compose(&self, u: &Self::Elt, v: &Self::Elt) -> Self::Elt;
    fn point_le(&self, a: &Self::Point, b: &Self::Point) -> bool;
}

/// The self-maps of a finite carrier generated under composition by a set
/// of attributed generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformationSemigroup<G: Ord, X: Ord> {
    carrier: Vec<X>,
    elements: BTreeSet<SelfMap<X>>,
    attribution: BTreeMap<G, SelfMap<X>>,
}

fn compose_maps<X: Label>(u: &SelfMap<X>, v: &SelfMap<X>) -> SelfMap<X> {
    v.iter().map(|(x, y)| (x.clone(), u[y].clone())).collect()
}

impl<G: Label, X: Label> TransformationSemigroup<G, X> {
    /// Closes the generators under composition, visiting at most
    /// `max_elements` distinct maps.
    pub fn from_maps(carrier: Vec<X>, generators: BTreeMap<G, SelfMap<X>>, max_elements: usize) -> Result<Self> {
        let set: BTreeSet<&X> = carrier.iter().collect();
        if set.len() != carrier.len() {
            let dup = carrier.iter().find(|x| carrier.iter().filter(|y| y == x).count() > 1).unwrap();
            return Err(Error::DuplicateLabel(show(dup)));
        }
        for m in generators.values() {
            for x in &carrier {
                let y = m.get(x).ok_or_else(|| Error::PartialMapping(show(x)))?;
                if !set.contains(y) {
                    return Err(Error::ImageOutsideCodomain(show(y)));
                }
            }
            if let Some(x) = m.keys().find(|x| !set.contains(x)) {
                return Err(Error::UnknownLabel(show(x)));
            }
        }
        let gens: Vec<&SelfMap<X>> = generators.values().collect();
        let mut elements: BTreeSet<SelfMap<X>> = gens.iter().map(|m| (*m).clone()).collect();
        let mut frontier: Vec<SelfMap<X>> = elements.iter().cloned().collect();
        while let Some(s) = frontier.pop() {
            for g in &gens {
                let sg = compose_maps(&s, g);
                if !elements.contains(&sg) {
                    if elements.len() >= max_elements {
                        return Err(Error::BudgetExceeded {
                            needed: elements.len() as u128 + 1,
                            budget: max_elements as u64,
                        });
                    }
                    elements.insert(sg.clone());
                    frontier.push(sg);
                }
            }
        }
        Ok(TransformationSemigroup {
            carrier,
            elements,
            attribution: generators,
        })
    }

    pub fn carrier(&self) -> &[X] {
        &self.carrier
    }

    pub fn elements(&self) -> impl Iterator<Item = &SelfMap<X>> {
        self.elements.iter()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, m: &SelfMap<X>) -> bool {
        self.elements.contains(m)
    }

    /// `j(g)`: the translation attributed to `g`.
    pub fn j(&self, g: &G) -> Option<&SelfMap<X>> {
        self.attribution.get(g)
    }

    pub fn attribution(&self) -> &BTreeMap<G, SelfMap<X>> {
        &self.attribution
    }

    pub fn j_injective(&self) -> bool {
        let images: BTreeSet<&SelfMap<X>> = self.attribution.values().collect();
        images.len() == self.attribution.len()
    }

    pub fn contains_identity(&self) -> bool {
        self.elements.iter().any(|m| m.iter().all(|(x, y)| x == y))
    }

    pub fn compose(&self, u: &SelfMap<X>, v: &SelfMap<X>) -> SelfMap<X> {
        compose_maps(u, v)
    }
}

/// `E(K)` of a finite group action: the image of the group in `K^K`, with
/// `j: g -> g̃` recorded.
pub fn finite_ellis<T: Label, X: Label>(act: &FiniteAction<T, X>) -> Result<TransformationSemigroup<T, X>> {
    let n = act.group().order();
    TransformationSemigroup::from_maps(act.space().labels().to_vec(), act.maps().clone(), n.max(1))
}

/// Self-maps of a finite chain as a pointwise system.
#[derive(Debug, Clone)]
pub struct FiniteChain<X: Ord> {
    pub order: LinOrder<X>,
}

impl<X: Label> PointwiseSystem for FiniteChain<X> {
    type Elt = SelfMap<X>;
    type Point = X;

    fn apply(&self, s: &SelfMap<X>, x: &X) -> X {
        s[x].clone()
    }

    fn compose(&self, u: &SelfMap<X>, v: &SelfMap<X>) -> SelfMap<X> {
        compose_maps(u, v)
    }

    fn point_le(&self, a: &X, b: &X) -> bool {
        self.order.le(a, b)
    }
}

/// The pointwise preorder `s1 ⪯ s2 iff s1 a <= s2 a for every a` on a
/// finite set of elements, with the checks that make it a linearly ordered
/// semigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllisOrder<E: Ord> {
    elements: Vec<E>,
    le: Vec<Vec<bool>>,
    /// The order when `⪯` is total and antisymmetric.
    pub order: Option<LinOrder<E>>,
    pub antisymmetric: Verdict<(E, E)>,
    pub total: Verdict<(E, E)>,
    /// `s1 ⪯ s2 ⇒ s1 p ⪯ s2 p`; witness `(s1, s2, p)`.
    pub right_invariant: Verdict<(E, E, E)>,
    /// `s1 ⪯ s2 ⇒ p s1 ⪯ p s2`; witness `(s1, s2, p)`.
    pub left_invariant: Verdict<(E, E, E)>,
    /// `g < h ⇒ j(g) ≺ j(h)` when a group order was supplied.
    pub j_embedding: Option<Verdict<(E, E)>>,
    pub notes: Vec<String>,
}

impl<E: Label> EllisOrder<E> {
    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn le(&self, a: &E, b: &E) -> Option<bool> {
        let i = self.elements.iter().position(|e| e == a)?;
        let j = self.elements.iter().position(|e| e == b)?;
        Some(self.le[i][j])
    }

    pub fn is_total(&self) -> bool {
        self.total.holds()
    }

    pub fn is_bi_invariant(&self) -> bool {
        self.left_invariant.holds() && self.right_invariant.holds()
    }

    /// Total, antisymmetric, bi-invariant, and `j` an order embedding when
    /// a group order was supplied.
    pub fn is_linearly_ordered_semigroup(&self) -> bool {
        self.order.is_some()
            && self.is_bi_invariant()
            && self.j_embedding.as_ref().is_none_or(Verdict::holds)
    }
}

/// Builds `⪯` on `elements` by comparison on `window`.
///
/// `group` lists `j(g)` for the acting group elements in increasing group
/// order. When present, the hypotheses are checked first: each listed
/// element must preserve the order of the window and every orbit map
/// `g -> gx` must be monotone; a failure is a `Hypothesis` error carrying
/// the witness. Composition is checked against pointwise evaluation.
pub fn ellis_linear_order<S: PointwiseSystem>(
    sys: &S,
    window: &[S::Point],
    elements: &[S::Elt],
    group: Option<&[S::Elt]>,
) -> Result<EllisOrder<S::Elt>> {
    let index: BTreeMap<&S::Elt, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    if index.len() != elements.len() {
        let dup = elements.iter().find(|e| elements.iter().filter(|f| f == e).count() > 1).unwrap();
        return Err(Error::DuplicateLabel(show(dup)));
    }
    let pointwise_le = |a: &S::Elt, b: &S::Elt| window.iter().all(|x| sys.point_le(&sys.apply(a, x), &sys.apply(b, x)));

    if let Some(gs) = group {
        for g in gs {
            if !index.contains_key(g) {
                return Err(Error::UnknownLabel(show(g)));
            }
            for x in window {
                for y in window {
                    if sys.point_le(x, y) && !sys.point_le(&sys.apply(g, x), &sys.apply(g, y)) {
                        return Err(Error::Hypothesis(format!(
                            "{} does not preserve order at {}",
                            show(g),
                            show(&(x, y))
                        )));
                    }
                }
            }
        }
        for (i, g) in gs.iter().enumerate() {
            for h in &gs[i + 1..] {
                if let Some(x) = window.iter().find(|x| !sys.point_le(&sys.apply(g, x), &sys.apply(h, x))) {
                    return Err(Error::Hypothesis(format!(
                        "orbit map of {} is not monotone: {} < {} in the group but {} > {}",
                        show(x),
                        show(g),
                        show(h),
                        show(&sys.apply(g, x)),
                        show(&sys.apply(h, x))
                    )));
                }
            }
        }
    }

    for u in elements {
        for v in elements {
            let uv = sys.compose(u, v);
            if let Some(x) = window.iter().find(|x| sys.apply(&uv, x) != sys.apply(u, &sys.apply(v, x))) {
                return Err(Error::InvariantViolation(format!(
                    "composition of {} and {} disagrees with evaluation at {}",
                    show(u),
                    show(v),
                    show(x)
                )));
            }
        }
    }

    let n = elements.len();
    let le: Vec<Vec<bool>> = elements
        .iter()
        .map(|a| elements.iter().map(|b| pointwise_le(a, b)).collect())
        .collect();
    let pairs = || (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));
    let pair = |(i, j): (usize, usize)| (elements[i].clone(), elements[j].clone());

    let antisymmetric = pairs()
        .find(|&(i, j)| i < j && le[i][j] && le[j][i])
        .map_or(Verdict::Holds, |p| Verdict::Fails(pair(p)));
    let total = pairs()
        .find(|&(i, j)| i < j && !le[i][j] && !le[j][i])
        .map_or(Verdict::Holds, |p| Verdict::Fails(pair(p)));

    let invariance = |right: bool| {
        for (i, j) in pairs().filter(|&(i, j)| i != j && le[i][j]) {
            for p in elements {
                let (a, b) = if right {
                    (sys.compose(&elements[i], p), sys.compose(&elements[j], p))
                } else {
                    (sys.compose(p, &elements[i]), sys.compose(p, &elements[j]))
                };
                if !pointwise_le(&a, &b) {
                    return Verdict::Fails((elements[i].clone(), elements[j].clone(), p.clone()));
                }
            }
        }
        Verdict::Holds
    };
    let right_invariant = invariance(true);
    let left_invariant = invariance(false);

    let j_embedding = group.map(|gs| {
        for (i, g) in gs.iter().enumerate() {
            for h in &gs[i + 1..] {
                let (a, b) = (index[g], index[h]);
                if !(le[a][b] && !le[b][a]) {
                    return Verdict::Fails((g.clone(), h.clone()));
                }
            }
        }
        Verdict::Holds
    });

    let order = if total.holds() && antisymmetric.holds() {
        let mut sorted: Vec<usize> = (0..n).collect();
        sorted.sort_by(|&a, &b| {
            if a == b {
                std::cmp::Ordering::Equal
            } else if le[a][b] {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        Some(LinOrder::new(sorted.into_iter().map(|i| elements[i].clone()).collect())?)
    } else {
        None
    };

    let mut notes = vec!["closedness of ⪯ is automatic on a finite window".to_string()];
    if !total.holds() {
        notes.push("⪯ is not total: the strong monotonicity hypothesis fails for this input".to_string());
    }
    Ok(EllisOrder {
        elements: elements.to_vec(),
        le,
        order,
        antisymmetric,
        total,
        right_invariant,
        left_invariant,
        j_embedding,
        notes,
    })
}

/// Vote of one basepoint on one triple of elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vote {
    Decided(bool),
    /// Two of the three images coincide.
    Undecided,
}

/// Evidence gathered by [`corder_probe_with`]. Whether the pointwise
/// relation is a circular order in general is open; this is never a proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeReport<E> {
    pub experimental: bool,
    pub elements: usize,
    pub basepoints: usize,
    pub decided_triples: usize,
    pub undecided_triples: usize,
    /// Triples on which basepoints vote both ways.
    pub conflicts: Vec<(E, E, E)>,
    /// Decided triples disagreeing with a supplied reference relation.
    pub disagreements: Vec<(E, E, E)>,
    /// `None` when the induced relation passes the circular-order axioms,
    /// otherwise the first violation.
    pub axiom_violation: Option<String>,
}

impl<E> ProbeReport<E> {
    pub fn consistent(&self) -> bool {
        self.conflicts.is_empty() && self.disagreements.is_empty()
    }

    pub fn is_circular_order(&self) -> bool {
        self.consistent() && self.axiom_violation.is_none()
    }
}

/// The ternary relation on `elements` in which a triple holds when some
/// basepoint votes for it and none against, checked against the
/// circular-order axioms and optionally against a reference relation.
pub fn corder_probe_with<E: Label, P>(
    elements: &[E],
    basepoints: &[P],
    vote: impl Fn(&E, &E, &E, &P) -> Vote,
    reference: Option<&dyn Fn(&E, &E, &E) -> bool>,
) -> Result<ProbeReport<E>> {
    let mut report = ProbeReport {
        experimental: true,
        elements: elements.len(),
        basepoints: basepoints.len(),
        decided_triples: 0,
        undecided_triples: 0,
        conflicts: Vec::new(),
        disagreements: Vec::new(),
        axiom_violation: None,
    };
    let mut holds = BTreeSet::new();
    for a in elements {
        for b in elements {
            for c in elements {
                if a == b || b == c || a == c {
                    continue;
                }
                let (mut yes, mut no) = (false, false);
                for p in basepoints {
                    match vote(a, b, c, p) {
                        Vote::Decided(true) => yes = true,
                        Vote::Decided(false) => no = true,
                        Vote::Undecided => {}
                    }
                }
                let t = (a.clone(), b.clone(), c.clone());
                if yes && no {
                    report.conflicts.push(t);
                    continue;
                }
                if !yes && !no {
                    report.undecided_triples += 1;
                    continue;
                }
                report.decided_triples += 1;
                if reference.is_some_and(|r| r(a, b, c) != yes) {
                    report.disagreements.push(t.clone());
                }
                if yes {
                    holds.insert(t);
                }
            }
        }
    }
    let rel = TernaryRelation::from_predicate(elements.iter().cloned(), |a, b, c| {
        holds.contains(&(a.clone(), b.clone(), c.clone()))
    });
    if let AxiomVerdict::Violation(v) = verify_circular_axioms(&rel)? {
        report.axiom_violation = Some(format!("{v:?}"));
    }
    Ok(report)
}

/// Experimental probe on a finite semigroup acting on a circular order.
pub fn ellis_corder_probe<G: Label, X: Label>(
    e: &TransformationSemigroup<G, X>,
    k: &CircOrder<X>,
    basepoints: &[X],
) -> Result<ProbeReport<SelfMap<X>>> {
    let elements: Vec<SelfMap<X>> = e.elements().cloned().collect();
    corder_probe_with(
        &elements,
        basepoints,
        |a, b, c, x| {
            let (ya, yb, yc) = (&a[x], &b[x], &c[x]);
            if ya == yb || yb == yc || ya == yc {
                Vote::Undecided
            } else {
                Vote::Decided(k.holds(ya, yb, yc))
            }
        },
        None,
    )
}

/// Experimental probe on sampled Sturmian elements, cross-checked against
/// the lexicographic order on `T × {−, 0, +}`.
pub fn sturmian_corder_probe(elements: &[SturmianElt], basepoints: &[TAPoint]) -> Result<ProbeReport<SturmianElt>> {
    let reference = |a: &SturmianElt, b: &SturmianElt, c: &SturmianElt| sturmian_etriple(a, b, c).unwrap_or(false);
    corder_probe_with(
        elements,
        basepoints,
        |a, b, c, x| {
            let (ya, yb, yc) = (sturmian_apply(a, x), sturmian_apply(b, x), sturmian_apply(c, x));
            ta_triple(&ya, &yb, &yc).map_or(Vote::Undecided, Vote::Decided)
        },
        Some(&reference),
    )
}
