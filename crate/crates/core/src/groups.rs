//! Group tables, invariant orders on groups and orderability decisions.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cop::{cop_check, lop_check};
use crate::error::{show, Error, Result};
use crate::lex::five_case;
use crate::oracle::{PairOracle, TripleOracle};
use crate::orders::{cut_order, CircOrder, LinOrder};
use crate::{Label, Verdict};

/// A finite group given by its Cayley table, validated on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable<T: Ord> {
    elements: Vec<T>,
    index: BTreeMap<T, usize>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl<T: Label> GroupTable<T> {
    /// `table[i][j]` is the product `elements[i] * elements[j]`.
    pub fn new(elements: Vec<T>, table: Vec<Vec<T>>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, x) in elements.iter().enumerate() {
            if index.insert(x.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(show(x)));
            }
        }
        let n = elements.len();
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidGroup(format!("table is not {n}x{n}")));
        }
        let mut idx = vec![vec![0; n]; n];
        for (i, row) in table.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                idx[i][j] = *index.get(x).ok_or_else(|| Error::UnknownLabel(show(x)))?;
            }
        }
        Self::from_indices(elements, index, idx)
    }

    fn from_indices(elements: Vec<T>, index: BTreeMap<T, usize>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty group".into()));
        }
        for (a, b, c) in (0..n).cartesian_product(0..n).cartesian_product(0..n).map(|((a, b), c)| (a, b, c)) {
            if table[table[a][b]][c] != table[a][table[b][c]] {
                return Err(Error::InvalidGroup(format!(
                    "associativity fails at {:?}",
                    (&elements[a], &elements[b], &elements[c])
                )));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
        let mut inverse = vec![0; n];
        for (x, inv) in inverse.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("{:?} has no inverse", elements[x])))?;
        }
        Ok(GroupTable {
            elements,
            index,
            table,
            identity,
            inverse,
        })
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &T) -> bool {
        self.index.contains_key(x)
    }

    pub fn identity(&self) -> &T {
        &self.elements[self.identity]
    }

    fn idx(&self, x: &T) -> usize {
        *self
            .index
            .get(x)
            .unwrap_or_else(|| panic!("{x:?} is not an element of this group"))
    }

    /// # Panics
    /// If either argument is not an element.
    pub fn mul(&self, a: &T, b: &T) -> &T {
        &self.elements[self.table[self.idx(a)][self.idx(b)]]
    }

    /// # Panics
    /// If the argument is not an element.
    pub fn inverse(&self, a: &T) -> &T {
        &self.elements[self.inverse[self.idx(a)]]
    }

    pub fn power(&self, a: &T, k: usize) -> T {
        let mut acc = self.identity().clone();
        for _ in 0..k {
            acc = self.mul(&acc, a).clone();
        }
        acc
    }

    pub fn element_order(&self, a: &T) -> usize {
        let mut k = 1;
        let mut acc = a.clone();
        while acc != *self.identity() {
            acc = self.mul(&acc, a).clone();
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// The Cayley table as labels, row by row.
    pub fn table_labels(&self) -> Vec<Vec<T>> {
        self.table
            .iter()
            .map(|row| row.iter().map(|&k| self.elements[k].clone()).collect())
            .collect()
    }

    /// The opposite group `a *' b = b * a` on the same elements.
    pub fn opposite(&self) -> GroupTable<T> {
        let n = self.order();
        let table = (0..n).map(|a| (0..n).map(|b| self.table[b][a]).collect()).collect();
        GroupTable {
            elements: self.elements.clone(),
            index: self.index.clone(),
            table,
            identity: self.identity,
            inverse: self.inverse.clone(),
        }
    }

    pub fn map_labels<U: Label>(&self, f: impl Fn(&T) -> U) -> Result<GroupTable<U>> {
        let elements: Vec<U> = self.elements.iter().map(f).collect();
        let mut index = BTreeMap::new();
        for (i, x) in elements.iter().enumerate() {
            if index.insert(x.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(show(x)));
            }
        }
        Ok(GroupTable {
            elements,
            index,
            table: self.table.clone(),
            identity: self.identity,
            inverse: self.inverse.clone(),
        })
    }
}

fn table_from_op<T: Label>(elements: Vec<T>, op: impl Fn(&T, &T) -> T) -> GroupTable<T> {
    let table = elements
        .iter()
        .map(|a| elements.iter().map(|b| op(a, b)).collect())
        .collect();
    GroupTable::new(elements, table).expect("built-in group table is valid")
}

/// `Z_n` on `0..n`, with `1` as the standard generator.
pub fn cyclic(n: usize) -> GroupTable<usize> {
    assert!(n > 0, "cyclic group of order 0");
    table_from_op((0..n).collect(), |a, b| (a + b) % n)
}

pub fn direct_product<A: Label, B: Label>(g: &GroupTable<A>, h: &GroupTable<B>) -> GroupTable<(A, B)> {
    let elements = g.elements().iter().cloned().cartesian_product(h.elements().iter().cloned()).collect();
    table_from_op(elements, |(a1, b1), (a2, b2)| (g.mul(a1, a2).clone(), h.mul(b1, b2).clone()))
}

/// Dihedral group of order `2n`; `(k, f)` stands for `r^k s^f`.
pub fn dihedral(n: usize) -> GroupTable<(usize, usize)> {
    assert!(n > 0, "dihedral group of order 0");
    let elements = (0..n).cartesian_product(0..2).collect();
    table_from_op(elements, |&(k1, f1), &(k2, f2)| {
        let k = if f1 == 0 { k1 + k2 } else { k1 + n - k2 };
        (k % n, (f1 + f2) % 2)
    })
}

/// Permutations of `0..n` (as image vectors) composed right to left.
pub fn symmetric(n: usize) -> GroupTable<Vec<usize>> {
    let elements = (0..n).permutations(n).collect();
    table_from_op(elements, |p: &Vec<usize>, q: &Vec<usize>| q.iter().map(|&i| p[i]).collect())
}

fn is_even(p: &[usize]) -> bool {
    (0..p.len()).tuple_combinations().filter(|&(i, j)| p[i] > p[j]).count() % 2 == 0
}

pub fn alternating(n: usize) -> GroupTable<Vec<usize>> {
    let elements = (0..n).permutations(n).filter(|p| is_even(p)).collect();
    table_from_op(elements, |p: &Vec<usize>, q: &Vec<usize>| q.iter().map(|&i| p[i]).collect())
}

/// Quaternion group on `±1, ±i, ±j, ±k`.
pub fn quaternion() -> GroupTable<String> {
    // Units 0..4 are 1, i, j, k; unit products carry a sign.
    const UNIT: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let name = |(u, neg): (usize, bool)| format!("{}{}", if neg { "-" } else { "" }, ["1", "i", "j", "k"][u]);
    let raw: Vec<(usize, bool)> = (0..4).flat_map(|u| [(u, false), (u, true)]).collect();
    let g = table_from_op(raw, |&(u1, n1), &(u2, n2)| {
        let (u, n) = UNIT[u1][u2];
        (u, n ^ n1 ^ n2)
    });
    g.map_labels(|&x| name(x)).expect("distinct names")
}

pub fn klein() -> GroupTable<(usize, usize)> {
    direct_product(&cyclic(2), &cyclic(2))
}

/// The bundled finite groups: `Z1..Z8`, `Z2xZ2`, `S3`, `D4`, `Q8`, `Z2xZ4`,
/// `A4`, with labels rendered as strings.
pub fn corpus() -> Vec<(String, GroupTable<String>)> {
    fn named<T: Label>(name: &str, g: GroupTable<T>) -> (String, GroupTable<String>) {
        (name.to_string(), g.map_labels(|x| format!("{x:?}")).expect("distinct renderings"))
    }
    let mut out: Vec<_> = (1..=8).map(|n| named(&format!("Z{n}"), cyclic(n))).collect();
    out.push(named("Z2xZ2", klein()));
    out.push(named("S3", symmetric(3)));
    out.push(named("D4", dihedral(4)));
    out.push(("Q8".to_string(), quaternion()));
    out.push(named("Z2xZ4", direct_product(&cyclic(2), &cyclic(4))));
    out.push(named("A4", alternating(4)));
    out
}

/// Groups given by their operations, finite or not.
pub trait Group {
    type Elt: Label;
    fn identity(&self) -> Self::Elt;
    fn mul(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn inverse(&self, a: &Self::Elt) -> Self::Elt;
    /// All elements, for finite groups.
    fn elements(&self) -> Option<Vec<Self::Elt>> {
        None
    }
}

impl<T: Label> Group for GroupTable<T> {
    type Elt = T;
    fn identity(&self) -> T {
        GroupTable::identity(self).clone()
    }
    fn mul(&self, a: &T, b: &T) -> T {
        GroupTable::mul(self, a, b).clone()
    }
    fn inverse(&self, a: &T) -> T {
        GroupTable::inverse(self, a).clone()
    }
    fn elements(&self) -> Option<Vec<T>> {
        Some(self.elements.clone())
    }
}

/// The additive integers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Integers;

impl Group for Integers {
    type Elt = i64;
    fn identity(&self) -> i64 {
        0
    }
    fn mul(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }
    fn inverse(&self, a: &i64) -> i64 {
        -a
    }
}

/// Direct product of two groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Product<G, H>(pub G, pub H);

impl<G: Group, H: Group> Group for Product<G, H> {
    type Elt = (G::Elt, H::Elt);
    fn identity(&self) -> Self::Elt {
        (self.0.identity(), self.1.identity())
    }
    fn mul(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        (self.0.mul(&a.0, &b.0), self.1.mul(&a.1, &b.1))
    }
    fn inverse(&self, a: &Self::Elt) -> Self::Elt {
        (self.0.inverse(&a.0), self.1.inverse(&a.1))
    }
    fn elements(&self) -> Option<Vec<Self::Elt>> {
        let (a, b) = (self.0.elements()?, self.1.elements()?);
        Some(a.into_iter().cartesian_product(b).collect())
    }
}

fn same_labels<T: Label>(g: &GroupTable<T>, labels: &[T]) -> Result<()> {
    let a: BTreeSet<&T> = g.elements().iter().collect();
    let b: BTreeSet<&T> = labels.iter().collect();
    if a != b || labels.len() != g.order() {
        return Err(Error::LabelMismatch(format!("group {:?} vs order {:?}", g.elements(), labels)));
    }
    Ok(())
}

/// `[x,y,z] <=> [gx,gy,gz]` for all `g, x, y, z`; fails with `(g, x, y, z)`.
pub fn left_invariance_check<T: Label>(g: &GroupTable<T>, c: &CircOrder<T>) -> Result<Verdict<(T, T, T, T)>> {
    same_labels(g, c.labels())?;
    let els = g.elements();
    for h in els {
        for (x, y, z) in els.iter().tuple_combinations() {
            for (a, b, d) in [(x, y, z), (x, z, y)] {
                if c.holds(a, b, d) != c.holds(g.mul(h, a), g.mul(h, b), g.mul(h, d)) {
                    return Ok(Verdict::Fails((h.clone(), a.clone(), b.clone(), d.clone())));
                }
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Right invariance, checked as left invariance for the opposite group.
pub fn right_invariance_check<T: Label>(g: &GroupTable<T>, c: &CircOrder<T>) -> Result<Verdict<(T, T, T, T)>> {
    left_invariance_check(&g.opposite(), c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

pub fn bi_invariance_check<T: Label>(g: &GroupTable<T>, c: &CircOrder<T>) -> Result<Verdict<(Side, (T, T, T, T))>> {
    if let Verdict::Fails(w) = left_invariance_check(g, c)? {
        return Ok(Verdict::Fails((Side::Left, w)));
    }
    Ok(right_invariance_check(g, c)?.map(|w| (Side::Right, w)))
}

/// `a < b <=> ga < gb` for all `g, a, b`; fails with `(g, a, b)`.
pub fn lin_left_invariance_check<T: Label>(g: &GroupTable<T>, l: &LinOrder<T>) -> Result<Verdict<(T, T, T)>> {
    same_labels(g, l.labels())?;
    for h in g.elements() {
        for (a, b) in l.labels().iter().tuple_combinations() {
            if !l.lt(g.mul(h, a), g.mul(h, b)) {
                return Ok(Verdict::Fails((h.clone(), a.clone(), b.clone())));
            }
        }
    }
    Ok(Verdict::Holds)
}

pub fn lin_right_invariance_check<T: Label>(g: &GroupTable<T>, l: &LinOrder<T>) -> Result<Verdict<(T, T, T)>> {
    lin_left_invariance_check(&g.opposite(), l)
}

pub fn lin_bi_invariance_check<T: Label>(g: &GroupTable<T>, l: &LinOrder<T>) -> Result<Verdict<(Side, (T, T, T))>> {
    if let Verdict::Fails(w) = lin_left_invariance_check(g, l)? {
        return Ok(Verdict::Fails((Side::Left, w)));
    }
    Ok(lin_right_invariance_check(g, l)?.map(|w| (Side::Right, w)))
}

/// Which invariance flags an order on a group carries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupOrderKind<T: Ord> {
    Linear(LinOrder<T>),
    Circular(CircOrder<T>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupOrder<T: Ord> {
    pub order: GroupOrderKind<T>,
    pub left: bool,
    pub right: bool,
}

impl<T: Label> GroupOrder<T> {
    /// Computes the invariance flags from scratch.
    pub fn certify(g: &GroupTable<T>, order: GroupOrderKind<T>) -> Result<Self> {
        let (left, right) = match &order {
            GroupOrderKind::Linear(l) => (
                lin_left_invariance_check(g, l)?.holds(),
                lin_right_invariance_check(g, l)?.holds(),
            ),
            GroupOrderKind::Circular(c) => (
                left_invariance_check(g, c)?.holds(),
                right_invariance_check(g, c)?.holds(),
            ),
        };
        Ok(GroupOrder { order, left, right })
    }

    pub fn is_bi(&self) -> bool {
        self.left && self.right
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LcordDecision<T: Ord> {
    /// A generator and the circular order of its powers, left invariance
    /// already verified.
    Cyclic { generator: T, certificate: CircOrder<T> },
    /// Element orders, none of which equals the group order.
    NotCyclic { element_orders: Vec<(T, usize)> },
}

impl<T: Ord> LcordDecision<T> {
    pub fn is_yes(&self) -> bool {
        matches!(self, LcordDecision::Cyclic { .. })
    }
}

/// A finite group admits a left-invariant circular order iff it is cyclic.
pub fn finite_lcord_decide<T: Label>(g: &GroupTable<T>) -> Result<LcordDecision<T>> {
    let n = g.order();
    let mut element_orders = Vec::with_capacity(n);
    for x in g.elements() {
        let k = g.element_order(x);
        if k == n {
            let powers = (0..n).map(|i| g.power(x, i)).collect();
            let certificate = CircOrder::from_cycle(powers)?;
            if let Verdict::Fails(w) = left_invariance_check(g, &certificate)? {
                return Err(Error::InvariantViolation(format!(
                    "power-cycle certificate is not left invariant: {w:?}"
                )));
            }
            return Ok(LcordDecision::Cyclic {
                generator: x.clone(),
                certificate,
            });
        }
        element_orders.push((x.clone(), k));
    }
    Ok(LcordDecision::NotCyclic { element_orders })
}

/// Result of a torsion search. At discrete scale, topological torsion of an
/// element is plain torsion, so a witness rules out left orderability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TorsionOutcome<T> {
    Witness { element: T, order: usize },
    /// The group is trivial.
    TorsionFree,
    /// No torsion within the search depth; nothing is concluded.
    Inconclusive { depth: usize },
}

/// Torsion in a finite group: the first non-identity element.
pub fn torsion_obstruction_table<T: Label>(g: &GroupTable<T>) -> TorsionOutcome<T> {
    g.elements()
        .iter()
        .find(|x| *x != g.identity())
        .map(|x| TorsionOutcome::Witness {
            element: x.clone(),
            order: g.element_order(x),
        })
        .unwrap_or(TorsionOutcome::TorsionFree)
}

/// Searches the word ball of radius `depth` for an element `g != e` with
/// `g^k = e`, `k <= depth`.
pub fn torsion_obstruction<G: Group>(group: &G, generators: &[G::Elt], depth: usize) -> TorsionOutcome<G::Elt> {
    let e = group.identity();
    let steps: Vec<G::Elt> = generators
        .iter()
        .flat_map(|s| [s.clone(), group.inverse(s)])
        .collect();
    let mut seen = BTreeSet::from([e.clone()]);
    let mut frontier = vec![e.clone()];
    let mut ball = Vec::new();
    for _ in 0..depth {
        let mut next = Vec::new();
        for x in &frontier {
            for s in &steps {
                let y = group.mul(x, s);
                if seen.insert(y.clone()) {
                    next.push(y.clone());
                    ball.push(y);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    for x in &ball {
        let mut acc = x.clone();
        for k in 1..=depth.max(ball.len() + 1) {
            if acc == e {
                return TorsionOutcome::Witness {
                    element: x.clone(),
                    order: k,
                };
            }
            acc = group.mul(&acc, x);
        }
    }
    if ball.is_empty() {
        TorsionOutcome::TorsionFree
    } else {
        TorsionOutcome::Inconclusive { depth }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DynlexOutcome<X> {
    Less { probe: X },
    Greater { probe: X },
    Equal,
    Unresolved { probes: usize },
}

/// Compares two order-preserving maps at the first enumerated point where
/// they differ. The enumeration is the well-ordering the comparison depends
/// on; different enumerations give different (valid) orders.
///
/// Monotonicity of both maps is checked on every pair of probed points.
pub fn dynlex_compare<X: Label>(
    g1: impl Fn(&X) -> X,
    g2: impl Fn(&X) -> X,
    order: &impl PairOracle<X>,
    enumeration: impl IntoIterator<Item = X>,
    budget: usize,
) -> Result<DynlexOutcome<X>> {
    let mut probed: Vec<(X, X, X)> = Vec::new();
    let mut it = enumeration.into_iter().peekable();
    while let Some(x) = it.peek().cloned() {
        if probed.len() == budget {
            return Ok(DynlexOutcome::Unresolved { probes: budget });
        }
        it.next();
        let (y1, y2) = (g1(&x), g2(&x));
        for (p, p1, p2) in &probed {
            for (which, (a, b)) in [("first", (p1, &y1)), ("second", (p2, &y2))] {
                let ok = if order.less(p, &x) {
                    order.less(a, b)
                } else {
                    order.less(b, a)
                };
                if !ok {
                    return Err(Error::NotLop(format!("{which} map at {p:?}, {x:?}")));
                }
            }
        }
        if y1 != y2 {
            return Ok(if order.less(&y1, &y2) {
                DynlexOutcome::Less { probe: x }
            } else {
                DynlexOutcome::Greater { probe: x }
            });
        }
        probed.push((x, y1, y2));
    }
    Ok(DynlexOutcome::Equal)
}

/// [`dynlex_compare`] for self-maps of a finite chain; the enumeration
/// defaults to the canonical label order.
pub fn dynlex_compare_finite<X: Label>(
    g1: &BTreeMap<X, X>,
    g2: &BTreeMap<X, X>,
    chain: &LinOrder<X>,
    enumeration: Option<&[X]>,
) -> Result<DynlexOutcome<X>> {
    for g in [g1, g2] {
        for x in chain.labels() {
            let y = g.get(x).ok_or_else(|| Error::PartialMapping(show(x)))?;
            if !chain.contains(y) {
                return Err(Error::ImageOutsideCodomain(show(y)));
            }
        }
        if let Some(w) = chain.labels().windows(2).find(|w| !chain.lt(&g[&w[0]], &g[&w[1]])) {
            return Err(Error::NotLop(format!("{:?} at {:?}", g, (&w[0], &w[1]))));
        }
    }
    let default: Vec<X> = chain.label_set().into_iter().collect();
    let enumeration = enumeration.unwrap_or(&default);
    dynlex_compare(
        |x| g1[x].clone(),
        |x| g2[x].clone(),
        chain,
        enumeration.iter().cloned(),
        enumeration.len(),
    )
}

/// The space a finite action lives on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Space<X: Ord> {
    Circ(CircOrder<X>),
    Lin(LinOrder<X>),
}

impl<X: Label> Space<X> {
    pub fn labels(&self) -> &[X] {
        match self {
            Space::Circ(c) => c.labels(),
            Space::Lin(l) => l.labels(),
        }
    }

    pub fn contains(&self, x: &X) -> bool {
        match self {
            Space::Circ(c) => c.contains(x),
            Space::Lin(l) => l.contains(x),
        }
    }
}

/// A finite group acting on a finite ordered space, validated against the
/// action law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAction<T: Ord, X: Ord> {
    group: GroupTable<T>,
    space: Space<X>,
    maps: BTreeMap<T, BTreeMap<X, X>>,
}

impl<T: Label, X: Label> FiniteAction<T, X> {
    pub fn new(group: GroupTable<T>, space: Space<X>, maps: BTreeMap<T, BTreeMap<X, X>>) -> Result<Self> {
        for g in group.elements() {
            let m = maps
                .get(g)
                .ok_or_else(|| Error::InvalidAction(format!("no map for {g:?}")))?;
            let mut image = BTreeSet::new();
            for x in space.labels() {
                let y = m.get(x).ok_or_else(|| Error::PartialMapping(show(x)))?;
                if !space.contains(y) {
                    return Err(Error::ImageOutsideCodomain(show(y)));
                }
                image.insert(y);
            }
            if m.len() != space.labels().len() || image.len() != m.len() {
                return Err(Error::InvalidAction(format!("{g:?} does not act bijectively")));
            }
        }
        if let Some(g) = maps.keys().find(|g| !group.contains(g)) {
            return Err(Error::UnknownLabel(show(g)));
        }
        let e = group.identity();
        if let Some(x) = space.labels().iter().find(|x| maps[e][*x] != **x) {
            return Err(Error::InvalidAction(format!("identity moves {x:?}")));
        }
        for g in group.elements() {
            for h in group.elements() {
                let gh = group.mul(g, h);
                for x in space.labels() {
                    if maps[g][&maps[h][x]] != maps[gh][x] {
                        return Err(Error::InvalidAction(format!("g(hx) != (gh)x at {:?}", (g, h, x))));
                    }
                }
            }
        }
        Ok(FiniteAction { group, space, maps })
    }

    pub fn group(&self) -> &GroupTable<T> {
        &self.group
    }

    pub fn space(&self) -> &Space<X> {
        &self.space
    }

    pub fn maps(&self) -> &BTreeMap<T, BTreeMap<X, X>> {
        &self.maps
    }

    pub fn apply(&self, g: &T, x: &X) -> &X {
        &self.maps[g][x]
    }

    /// Elements acting as the identity.
    pub fn kernel(&self) -> Vec<T> {
        self.group
            .elements()
            .iter()
            .filter(|g| self.space.labels().iter().all(|x| self.maps[*g][x] == *x))
            .cloned()
            .collect()
    }

    pub fn is_effective(&self) -> bool {
        self.kernel().len() == 1
    }

    pub fn stabilizer(&self, a: &X) -> Vec<T> {
        self.group
            .elements()
            .iter()
            .filter(|g| self.maps[*g][a] == *a)
            .cloned()
            .collect()
    }

    pub fn orbit(&self, a: &X) -> BTreeSet<X> {
        self.group.elements().iter().map(|g| self.maps[g][a].clone()).collect()
    }

    /// Whether every element acts COP (circular space) or LOP (linear
    /// space); fails with the first offending element.
    pub fn preserves_order(&self) -> Result<Verdict<T>> {
        for g in self.group.elements() {
            let ok = match &self.space {
                Space::Circ(c) => cop_check(&self.maps[g], c, c)?.is_cop(),
                Space::Lin(l) => lop_check(&self.maps[g], l, l)?,
            };
            if !ok {
                return Ok(Verdict::Fails(g.clone()));
            }
        }
        Ok(Verdict::Holds)
    }
}

type Action<E, X> = Arc<dyn Fn(&E, &X) -> X + Send + Sync>;
type ElementOrder<E> = Arc<dyn Fn(&E, &E) -> bool + Send + Sync>;

/// The left-invariant circular order on a group obtained by lifting the
/// orbit circular order along `g -> ga`, with cosets of the stabilizer
/// ordered by transporting an order on the stabilizer.
pub struct StabilizerLift<G: Group, X> {
    group: G,
    generators: Vec<G::Elt>,
    act: Action<G::Elt, X>,
    basepoint: X,
    orbit: CircOrder<X>,
    reps: BTreeMap<X, G::Elt>,
    h_less: ElementOrder<G::Elt>,
    checked_samples: usize,
}

impl<G: Group, X: Label> std::fmt::Debug for StabilizerLift<G, X> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StabilizerLift")
            .field("basepoint", &self.basepoint)
            .field("orbit", &self.orbit)
            .field("reps", &self.reps)
            .field("checked_samples", &self.checked_samples)
            .finish()
    }
}

/// Inputs of [`stabilizer_lift`] besides the group and the action.
pub struct LiftParams<E> {
    /// Linear order on the stabilizer. When absent the group must be finite
    /// and act effectively, and the dynamically lexicographic order on the
    /// stabilizer (enumeration = the cut at the basepoint) is used.
    pub h_order: Option<ElementOrder<E>>,
    pub samples: usize,
    pub seed: u64,
}

impl<E> Default for LiftParams<E> {
    fn default() -> Self {
        LiftParams {
            h_order: None,
            samples: 1000,
            seed: 0,
        }
    }
}

fn random_word<G: Group>(group: &G, steps: &[G::Elt], rng: &mut ChaCha8Rng) -> G::Elt {
    let mut g = group.identity();
    if steps.is_empty() {
        return g;
    }
    for _ in 0..rng.random_range(0..8) {
        g = group.mul(&g, &steps[rng.random_range(0..steps.len())]);
    }
    g
}

pub fn stabilizer_lift<G: Group, X: Label>(
    group: G,
    generators: Vec<G::Elt>,
    space: &CircOrder<X>,
    act: impl Fn(&G::Elt, &X) -> X + Send + Sync + 'static,
    basepoint: X,
    params: LiftParams<G::Elt>,
) -> Result<StabilizerLift<G, X>>
where
    G::Elt: 'static,
    X: Send + Sync + 'static,
{
    if !space.contains(&basepoint) {
        return Err(Error::UnknownLabel(show(&basepoint)));
    }
    let act: Action<G::Elt, X> = Arc::new(act);
    let steps: Vec<G::Elt> = generators
        .iter()
        .flat_map(|s| [s.clone(), group.inverse(s)])
        .collect();
    for s in &steps {
        let map: BTreeMap<X, X> = space.labels().iter().map(|x| (x.clone(), act(s, x))).collect();
        let image: BTreeSet<&X> = map.values().collect();
        if image.len() != space.len() {
            return Err(Error::InvalidAction(format!("{s:?} is not a bijection")));
        }
        let verdict = cop_check(&map, space, space)?;
        if !verdict.is_cop() {
            return Err(Error::NotCop(format!("generator {s:?}: {verdict:?}")));
        }
    }
    let e = group.identity();
    if let Some(x) = space.labels().iter().find(|x| act(&e, x) != **x) {
        return Err(Error::InvalidAction(format!("identity moves {x:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..params.samples.min(200) {
        let g = random_word(&group, &steps, &mut rng);
        let h = random_word(&group, &steps, &mut rng);
        let x = &space.labels()[rng.random_range(0..space.len())];
        if act(&g, &act(&h, x)) != act(&group.mul(&g, &h), x) {
            return Err(Error::InvalidAction(format!("g(hx) != (gh)x at {:?}", (g, h, x))));
        }
    }

    // Coset representatives by first occurrence in a breadth-first sweep.
    let mut reps = BTreeMap::from([(basepoint.clone(), e.clone())]);
    let mut queue = VecDeque::from([(basepoint.clone(), e.clone())]);
    while let Some((x, g)) = queue.pop_front() {
        for s in &steps {
            let y = act(s, &x);
            if !reps.contains_key(&y) {
                let sg = group.mul(s, &g);
                reps.insert(y.clone(), sg.clone());
                queue.push_back((y, sg));
            }
        }
    }
    let orbit = space.restrict(&reps.keys().cloned().collect())?;

    let h_less: ElementOrder<G::Elt> = match params.h_order {
        Some(h) => h,
        None => {
            let all = group.elements().ok_or_else(|| {
                Error::Hypothesis("an order on the stabilizer is required for infinite groups".into())
            })?;
            for g in &all {
                if *g != e && space.labels().iter().all(|x| act(g, x) == *x) {
                    return Err(Error::Hypothesis(format!("action is not effective: {g:?} acts trivially")));
                }
            }
            let cut = cut_order(space, &basepoint)?;
            let act2 = act.clone();
            Arc::new(move |h1: &G::Elt, h2: &G::Elt| {
                for x in cut.labels() {
                    let (y1, y2) = (act2(h1, x), act2(h2, x));
                    if y1 != y2 {
                        return cut.lt(&y1, &y2);
                    }
                }
                false
            })
        }
    };

    let lift = StabilizerLift {
        group,
        generators,
        act,
        basepoint,
        orbit,
        reps,
        h_less,
        checked_samples: params.samples,
    };
    lift.validate(&steps, &mut rng, params.samples)?;
    Ok(lift)
}

impl<G: Group, X: Label> StabilizerLift<G, X> {
    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn generators(&self) -> &[G::Elt] {
        &self.generators
    }

    pub fn basepoint(&self) -> &X {
        &self.basepoint
    }

    /// The orbit of the basepoint with the induced circular order.
    pub fn orbit(&self) -> &CircOrder<X> {
        &self.orbit
    }

    /// Coset representative `r` with `r a = x`.
    pub fn coset_rep(&self, x: &X) -> Option<&G::Elt> {
        self.reps.get(x)
    }

    pub fn project(&self, g: &G::Elt) -> X {
        (self.act)(g, &self.basepoint)
    }

    /// Sampled pairs checked at construction.
    pub fn checked_samples(&self) -> usize {
        self.checked_samples
    }

    pub fn stabilizer_less(&self, h1: &G::Elt, h2: &G::Elt) -> bool {
        (self.h_less)(h1, h2)
    }

    /// `g1 < g2` inside a common coset `rH`: `r^-1 g1 < r^-1 g2` in `H`.
    pub fn coset_less(&self, g1: &G::Elt, g2: &G::Elt) -> bool {
        let y = self.project(g1);
        if self.project(g2) != y {
            return false;
        }
        match self.reps.get(&y) {
            Some(r) => {
                let ri = self.group.inverse(r);
                (self.h_less)(&self.group.mul(&ri, g1), &self.group.mul(&ri, g2))
            }
            None => false,
        }
    }

    fn validate(&self, steps: &[G::Elt], rng: &mut ChaCha8Rng, samples: usize) -> Result<()> {
        let sample_h = |rng: &mut ChaCha8Rng| -> G::Elt {
            let g = random_word(&self.group, steps, rng);
            let r = &self.reps[&self.project(&g)];
            self.group.mul(&self.group.inverse(r), &g)
        };
        let sample_g = |rng: &mut ChaCha8Rng| random_word(&self.group, steps, rng);
        for _ in 0..samples {
            let (h, h1, h2) = (sample_h(rng), sample_h(rng), sample_h(rng));
            if self.project(&h) != self.basepoint {
                return Err(Error::InvariantViolation(format!("{h:?} is not in the stabilizer")));
            }
            let (l12, l21) = ((self.h_less)(&h1, &h2), (self.h_less)(&h2, &h1));
            if (h1 == h2 && (l12 || l21)) || (h1 != h2 && l12 == l21) {
                return Err(Error::Hypothesis(format!(
                    "stabilizer order is not a strict total order at {:?}",
                    (h1, h2)
                )));
            }
            let (hh1, hh2) = (self.group.mul(&h, &h1), self.group.mul(&h, &h2));
            if l12 && !(self.h_less)(&hh1, &hh2) {
                return Err(Error::Hypothesis(format!(
                    "stabilizer order is not left invariant at {:?}",
                    (h, h1, h2)
                )));
            }
            let h3 = sample_h(rng);
            if h1 != h2 && h2 != h3 && h1 != h3 {
                let lin = PairFnRef(&self.h_less);
                let expect = five_case((&h1, &h2, &h3), |_| (), |_, _, _| false, |a, b| lin.less(a, b));
                if self.holds(&h1, &h2, &h3) != expect {
                    return Err(Error::InvariantViolation(format!(
                        "lift disagrees with the stabilizer order at {:?}",
                        (h1, h2, h3)
                    )));
                }
            }
            let (g, x, y, z) = (sample_g(rng), sample_g(rng), sample_g(rng), sample_g(rng));
            let before = self.holds(&x, &y, &z);
            let after = self.holds(&self.group.mul(&g, &x), &self.group.mul(&g, &y), &self.group.mul(&g, &z));
            if before != after {
                return Err(Error::InvariantViolation(format!(
                    "lifted order is not left invariant at {:?}",
                    (g, x, y, z)
                )));
            }
        }
        Ok(())
    }

    /// The triple predicate of the lifted order.
    pub fn holds(&self, g1: &G::Elt, g2: &G::Elt, g3: &G::Elt) -> bool {
        five_case(
            (g1, g2, g3),
            |g| self.project(g),
            |a, b, c| self.orbit.holds(a, b, c),
            |a, b| self.coset_less(a, b),
        )
    }

    /// The lifted order as a finite circular order, for finite groups.
    pub fn to_circ_order(&self) -> Result<CircOrder<G::Elt>> {
        let all = self
            .group
            .elements()
            .ok_or_else(|| Error::Hypothesis("group is infinite".into()))?;
        let mut seq = Vec::with_capacity(all.len());
        for y in self.orbit.labels() {
            let mut coset: Vec<G::Elt> = all.iter().filter(|g| self.project(g) == *y).cloned().collect();
            coset.sort_by(|a, b| {
                if self.coset_less(a, b) {
                    std::cmp::Ordering::Less
                } else if self.coset_less(b, a) {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Equal
                }
            });
            seq.extend(coset);
        }
        if seq.len() != all.len() {
            return Err(Error::Hypothesis("generators do not reach every coset".into()));
        }
        let order = CircOrder::from_cycle(seq)?;
        for (a, b, c) in order.labels().iter().tuple_combinations() {
            for (x, y, z) in [(a, b, c), (a, c, b)] {
                if order.holds(x, y, z) != self.holds(x, y, z) {
                    return Err(Error::InvariantViolation(format!(
                        "coset sort disagrees with the lift at {:?}",
                        (x, y, z)
                    )));
                }
            }
        }
        Ok(order)
    }
}

struct PairFnRef<'a, E>(&'a ElementOrder<E>);

impl<E> PairOracle<E> for PairFnRef<'_, E> {
    fn less(&self, a: &E, b: &E) -> bool {
        (self.0)(a, b)
    }
}

impl<G: Group, X: Label> TripleOracle<G::Elt> for StabilizerLift<G, X> {
    fn holds(&self, a: &G::Elt, b: &G::Elt, c: &G::Elt) -> bool {
        StabilizerLift::holds(self, a, b, c)
    }
}

/// Outcome of checking whether the stabilizer route to a left-invariant
/// circular order applies to a finite action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BsReport<T> {
    pub order_preserving: bool,
    pub effective: bool,
    pub stabilizer: Vec<T>,
    pub applies: bool,
    /// Whether `g -> ga` is COP from the constructed order onto the orbit.
    pub orbit_map_cop: Option<bool>,
    pub notes: Vec<String>,
}

pub fn bs_condition_check<T: Label + Send + Sync + 'static, X: Label + Send + Sync + 'static>(
    act: &FiniteAction<T, X>,
    a: &X,
) -> Result<BsReport<T>> {
    if !act.space().contains(a) {
        return Err(Error::UnknownLabel(show(a)));
    }
    let mut notes = Vec::new();
    let circ = match act.space() {
        Space::Circ(c) => c.clone(),
        Space::Lin(_) => {
            notes.push("hypothesis failure: the space carries no circular order".into());
            return Ok(BsReport {
                order_preserving: false,
                effective: act.is_effective(),
                stabilizer: act.stabilizer(a),
                applies: false,
                orbit_map_cop: None,
                notes,
            });
        }
    };
    let preserving = act.preserves_order()?;
    let effective = act.is_effective();
    let stabilizer = act.stabilizer(a);
    if let Verdict::Fails(g) = &preserving {
        notes.push(format!("hypothesis failure: {g:?} is not c-order preserving"));
    }
    if !effective {
        notes.push(format!("hypothesis failure: kernel {:?} is not trivial", act.kernel()));
    }
    if (!preserving.holds() || !effective) && !finite_lcord_decide(act.group())?.is_yes() {
        notes.push(
            "the automorphism group of a finite circular order is cyclic, so this non-cyclic group has no effective COP action on it"
                .into(),
        );
    }
    if !preserving.holds() || !effective {
        return Ok(BsReport {
            order_preserving: preserving.holds(),
            effective,
            stabilizer,
            applies: false,
            orbit_map_cop: None,
            notes,
        });
    }
    if stabilizer.len() != 1 {
        notes.push(format!(
            "hypothesis failure: finite stabilizer {stabilizer:?} is nontrivial, hence not left orderable"
        ));
        return Ok(BsReport {
            order_preserving: true,
            effective,
            stabilizer,
            applies: false,
            orbit_map_cop: None,
            notes,
        });
    }
    notes.push("stabilizer is trivial; the lift is the pullback along g -> ga".into());
    let maps = act.maps().clone();
    let group = act.group().clone();
    let generators = group.elements().to_vec();
    let lift = stabilizer_lift(
        group,
        generators,
        &circ,
        move |g: &T, x: &X| maps[g][x].clone(),
        a.clone(),
        LiftParams::default(),
    )?;
    let order = lift.to_circ_order()?;
    let orbit_map: BTreeMap<T, X> = order.labels().iter().map(|g| (g.clone(), act.apply(g, a).clone())).collect();
    let cop = cop_check(&orbit_map, &order, lift.orbit())?.is_cop();
    Ok(BsReport {
        order_preserving: true,
        effective,
        stabilizer,
        applies: true,
        orbit_map_cop: Some(cop),
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{integer_enumeration, IntegerOrder};

    fn c(n: usize) -> CircOrder<usize> {
        CircOrder::<usize>::standard(n)
    }

    // Independent cyclicity oracle: some element's powers, computed from the
    // raw table, sweep the whole group.
    fn naive_cyclic(g: &GroupTable<String>) -> bool {
        let table = g.table_labels();
        let pos = |x: &String| g.elements().iter().position(|y| y == x).unwrap();
        g.elements().iter().any(|x| {
            let mut seen = BTreeSet::new();
            let mut acc = x.clone();
            for _ in 0..g.order() {
                seen.insert(acc.clone());
                acc = table[pos(&acc)][pos(x)].clone();
            }
            seen.len() == g.order()
        })
    }

    #[test]
    fn corpus_tables_are_groups_of_expected_orders() {
        let orders: BTreeMap<String, usize> = corpus().into_iter().map(|(n, g)| (n, g.order())).collect();
        for n in 1..=8 {
            assert_eq!(orders[&format!("Z{n}")], n);
        }
        assert_eq!(orders["Z2xZ2"], 4);
        assert_eq!(orders["S3"], 6);
        assert_eq!(orders["D4"], 8);
        assert_eq!(orders["Q8"], 8);
        assert_eq!(orders["Z2xZ4"], 8);
        assert_eq!(orders["A4"], 12);
        assert!(!symmetric(3).is_abelian());
        assert!(!quaternion().is_abelian());
    }

    #[test]
    fn invalid_tables_are_rejected() {
        assert!(matches!(
            GroupTable::new(vec![0, 1], vec![vec![0, 1], vec![1, 1]]),
            Err(Error::InvalidGroup(_))
        ));
        assert!(matches!(GroupTable::new(vec![0, 1], vec![vec![0, 1]]), Err(Error::InvalidGroup(_))));
        assert!(matches!(
            GroupTable::new(vec![0, 1], vec![vec![0, 1], vec![1, 7]]),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn finite_lcord_agrees_with_cyclicity() {
        for (name, g) in corpus() {
            let decision = finite_lcord_decide(&g).unwrap();
            assert_eq!(decision.is_yes(), naive_cyclic(&g), "{name}");
            if let LcordDecision::Cyclic { certificate, .. } = decision {
                assert!(left_invariance_check(&g, &certificate).unwrap().holds());
            }
        }
        assert!(finite_lcord_decide(&cyclic(1)).unwrap().is_yes());
        assert!(!finite_lcord_decide(&klein()).unwrap().is_yes());
    }

    #[test]
    fn invariance_examples() {
        for n in 1..=7 {
            assert!(left_invariance_check(&cyclic(n), &c(n)).unwrap().holds());
            assert!(bi_invariance_check(&cyclic(n), &c(n)).unwrap().holds());
        }
        let odd = CircOrder::from_cycle(vec![0, 2, 1, 3]).unwrap();
        let w = left_invariance_check(&cyclic(4), &odd).unwrap();
        let (g, x, y, z) = w.witness().cloned().expect("not invariant");
        assert_ne!(odd.holds(&x, &y, &z), odd.holds(&((g + x) % 4), &((g + y) % 4), &((g + z) % 4)));
        assert!(matches!(left_invariance_check(&cyclic(3), &c(4)), Err(Error::LabelMismatch(_))));
    }

    #[test]
    fn right_check_is_left_check_of_opposite() {
        let s3 = symmetric(3);
        for order in s3.elements().iter().cloned().permutations(6).take(120) {
            let circ = CircOrder::from_cycle(order).unwrap();
            assert_eq!(
                right_invariance_check(&s3, &circ).unwrap().holds(),
                left_invariance_check(&s3.opposite(), &circ).unwrap().holds()
            );
            assert!(!left_invariance_check(&s3, &circ).unwrap().holds());
        }
    }

    #[test]
    fn linear_invariance() {
        let z1 = cyclic(1);
        assert!(lin_bi_invariance_check(&z1, &LinOrder::new(vec![0]).unwrap()).unwrap().holds());
        let z2 = cyclic(2);
        let w = lin_left_invariance_check(&z2, &LinOrder::new(vec![0, 1]).unwrap()).unwrap();
        assert_eq!(w, Verdict::Fails((1, 0, 1)));
        let cert = GroupOrder::certify(&cyclic(5), GroupOrderKind::Circular(c(5))).unwrap();
        assert!(cert.is_bi());
    }

    #[test]
    fn torsion_examples() {
        assert_eq!(
            torsion_obstruction_table(&cyclic(2)),
            TorsionOutcome::Witness { element: 1, order: 2 }
        );
        assert_eq!(torsion_obstruction_table(&cyclic(1)), TorsionOutcome::TorsionFree);
        match torsion_obstruction_table(&symmetric(3)) {
            TorsionOutcome::Witness { order, .. } => assert!(order == 2 || order == 3),
            other => panic!("{other:?}"),
        }
        assert_eq!(torsion_obstruction(&Integers, &[1], 50), TorsionOutcome::Inconclusive { depth: 50 });
        let s3 = symmetric(3);
        let transposition = vec![1, 0, 2];
        assert_eq!(
            torsion_obstruction(&s3, &[transposition.clone()], 5),
            TorsionOutcome::Witness { element: transposition, order: 2 }
        );
        for (_, g) in corpus() {
            let gens = g.elements().to_vec();
            let out = torsion_obstruction(&g, &gens, 12);
            assert_eq!(matches!(out, TorsionOutcome::Witness { .. }), g.order() > 1);
        }
    }

    #[test]
    fn dynlex_examples() {
        let out = dynlex_compare(|x: &i64| x + 1, |x: &i64| x + 2, &IntegerOrder, integer_enumeration(), 10).unwrap();
        assert_eq!(out, DynlexOutcome::Less { probe: 0 });
        let chain = LinOrder::new(vec![0, 1, 2]).unwrap();
        let id: BTreeMap<i32, i32> = [(0, 0), (1, 1), (2, 2)].into();
        assert_eq!(dynlex_compare_finite(&id, &id, &chain, None).unwrap(), DynlexOutcome::Equal);
        let out = dynlex_compare(|x: &i64| *x, |x: &i64| if *x > 100 { x + 1 } else { *x }, &IntegerOrder, integer_enumeration(), 20)
            .unwrap();
        assert_eq!(out, DynlexOutcome::Unresolved { probes: 20 });
        let rev: BTreeMap<i32, i32> = [(0, 2), (1, 1), (2, 0)].into();
        assert!(matches!(dynlex_compare_finite(&rev, &id, &chain, None), Err(Error::NotLop(_))));
    }

    #[test]
    fn dynlex_is_a_left_invariant_strict_order_on_affine_maps() {
        let maps: Vec<(i64, i64)> = (1..=3).cartesian_product(-3..=3).collect();
        let cmp = |f: (i64, i64), g: (i64, i64)| {
            dynlex_compare(move |x: &i64| f.0 * x + f.1, move |x: &i64| g.0 * x + g.1, &IntegerOrder, integer_enumeration(), 8)
                .unwrap()
        };
        let less = |f, g| matches!(cmp(f, g), DynlexOutcome::Less { .. });
        for &f in &maps {
            assert_eq!(cmp(f, f), DynlexOutcome::Unresolved { probes: 8 });
            for &g in &maps {
                if f != g {
                    assert!(less(f, g) ^ less(g, f));
                }
                for &k in &maps {
                    if less(f, g) && less(g, k) {
                        assert!(less(f, k));
                    }
                }
                // h o f vs h o g for an increasing affine h.
                let h = (2i64, -1i64);
                let hf = (h.0 * f.0, h.0 * f.1 + h.1);
                let hg = (h.0 * g.0, h.0 * g.1 + h.1);
                if f != g {
                    assert_eq!(less(f, g), less(hf, hg));
                }
            }
        }
    }

    fn rotation_action(n: usize) -> FiniteAction<usize, usize> {
        let maps = (0..n).map(|g| (g, (0..n).map(|x| (x, (x + g) % n)).collect())).collect();
        FiniteAction::new(cyclic(n), Space::Circ(c(n)), maps).unwrap()
    }

    #[test]
    fn finite_action_validation() {
        let act = rotation_action(4);
        assert!(act.is_effective());
        assert_eq!(act.stabilizer(&0), vec![0]);
        assert!(act.preserves_order().unwrap().holds());
        let bad: BTreeMap<usize, BTreeMap<usize, usize>> =
            (0..2).map(|g| (g, (0..3).map(|x| (x, (x + g) % 3)).collect())).collect();
        assert!(matches!(
            FiniteAction::new(cyclic(2), Space::Circ(c(3)), bad),
            Err(Error::InvalidAction(_))
        ));
    }

    #[test]
    fn stabilizer_lift_on_integers_times_zn() {
        let n = 4;
        let group = Product(Integers, cyclic(n));
        let lift = stabilizer_lift(
            group,
            vec![(1, 0), (0, 1)],
            &c(n),
            move |g: &(i64, usize), x: &usize| (x + g.1) % n,
            0,
            LiftParams {
                h_order: Some(Arc::new(|a: &(i64, usize), b: &(i64, usize)| a.0 < b.0)),
                samples: 1000,
                seed: 11,
            },
        )
        .unwrap();
        assert_eq!(lift.orbit(), &c(n));
        // Independent left-invariance sampling with a different seed.
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut pick = || (rng.random_range(-20..20i64), rng.random_range(0..n));
        for _ in 0..1000 {
            let (g, x, y, z) = (pick(), pick(), pick(), pick());
            let m = |a: (i64, usize)| (g.0 + a.0, (g.1 + a.1) % n);
            assert_eq!(lift.holds(&x, &y, &z), lift.holds(&m(x), &m(y), &m(z)));
        }
        // On H the lift is the circularized order of the first coordinate.
        assert!(lift.holds(&(0, 0), &(1, 0), &(2, 0)));
        assert!(!lift.holds(&(2, 0), &(1, 0), &(0, 0)));
    }

    #[test]
    fn stabilizer_lift_finite_is_pullback() {
        for n in 1..=6 {
            let lift = stabilizer_lift(
                cyclic(n),
                vec![1 % n],
                &c(n),
                move |g: &usize, x: &usize| (x + g) % n,
                0,
                LiftParams::default(),
            )
            .unwrap();
            assert_eq!(lift.to_circ_order().unwrap(), c(n));
        }
    }

    #[test]
    fn stabilizer_lift_rejects_bad_orders_and_actions() {
        let n = 3;
        let bad = stabilizer_lift(
            Product(Integers, cyclic(n)),
            vec![(1, 0), (0, 1)],
            &c(n),
            move |g: &(i64, usize), x: &usize| (x + g.1) % n,
            0,
            LiftParams {
                h_order: Some(Arc::new(|a: &(i64, usize), b: &(i64, usize)| a.0.abs() < b.0.abs())),
                samples: 500,
                seed: 1,
            },
        );
        assert!(matches!(bad, Err(Error::Hypothesis(_))));
        let ineffective = stabilizer_lift(
            cyclic(6),
            vec![1],
            &c(3),
            |g: &usize, x: &usize| (x + g) % 3,
            0,
            LiftParams::default(),
        );
        assert!(matches!(ineffective, Err(Error::Hypothesis(_))));
        let reflection = stabilizer_lift(
            cyclic(2),
            vec![1],
            &c(4),
            |g: &usize, x: &usize| if *g == 1 { (4 - x) % 4 } else { *x },
            0,
            LiftParams::default(),
        );
        assert!(matches!(reflection, Err(Error::NotCop(_))));
        let trivial = stabilizer_lift(cyclic(1), vec![], &c(1), |_: &usize, x: &usize| *x, 0, LiftParams::default())
            .unwrap();
        assert_eq!(trivial.to_circ_order().unwrap().len(), 1);
    }

    #[test]
    fn bs_condition_examples() {
        for n in 1..=5 {
            let report = bs_condition_check(&rotation_action(n), &0).unwrap();
            assert!(report.applies, "{report:?}");
            assert_eq!(report.stabilizer, vec![0]);
            assert_eq!(report.orbit_map_cop, Some(true));
        }
        // Klein group on C4: rotation by 2 and a reflection.
        let k = klein();
        let maps = k
            .elements()
            .iter()
            .map(|&(a, b)| {
                let m = (0..4)
                    .map(|x| {
                        let y = if b == 1 { (4 - x) % 4 } else { x };
                        (x, (y + 2 * a) % 4)
                    })
                    .collect();
                ((a, b), m)
            })
            .collect();
        let act = FiniteAction::new(k, Space::Circ(c(4)), maps).unwrap();
        let report = bs_condition_check(&act, &0).unwrap();
        assert!(!report.applies);
        assert!(report.notes.iter().any(|s| s.starts_with("hypothesis failure")));
        assert_eq!(crate::cop::automorphism_group(&c(4), &crate::Bounds::default()).unwrap().order(), 4);
    }
}
