//! Lexicographic products and the fibered circular-order lift.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cop::{cop_check, lop_check, CopVerdict};
use crate::error::{show, Error, Result};
use crate::oracle::{PairOracle, TripleOracle};
use crate::orders::{CircOrder, LinOrder};
use crate::{Label, Verdict};

/// The five-case rule shared by `C ⊗ L` and the fibered lift.
///
/// `q` sends a point to its base point, `base` decides triples of base
/// points and `lt` compares two points of one fiber. The result is
/// false whenever two of the points coincide.
pub fn five_case<P, Y: PartialEq>(
    (p1, p2, p3): (&P, &P, &P),
    q: impl Fn(&P) -> Y,
    base: impl Fn(&Y, &Y, &Y) -> bool,
    lt: impl Fn(&P, &P) -> bool,
) -> bool {
    let (a, b, c) = (q(p1), q(p2), q(p3));
    if a != b && b != c && a != c {
        return base(&a, &b, &c);
    }
    if a == b && b == c {
        return (lt(p1, p2) && lt(p2, p3)) || (lt(p2, p3) && lt(p3, p1)) || (lt(p3, p1) && lt(p1, p2));
    }
    if a == b {
        lt(p1, p2)
    } else if b == c {
        lt(p2, p3)
    } else {
        lt(p3, p1)
    }
}

/// `L1 ⊗ L2`: pairs ordered by the first coordinate, then the second.
pub fn lex_lin_lin<A: Label, B: Label>(l1: &LinOrder<A>, l2: &LinOrder<B>) -> LinOrder<(A, B)> {
    let labels = l1
        .labels()
        .iter()
        .flat_map(|a| l2.labels().iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    LinOrder::new(labels).expect("product of distinct labels is distinct")
}

/// `C ⊗ L` evaluated lazily from a circular oracle on the base and a linear
/// oracle on the fiber. Each query costs at most one base query and two
/// fiber queries.
#[derive(Debug, Clone)]
pub struct LexCircProduct<B, F> {
    pub base: B,
    pub fiber: F,
}

impl<A: PartialEq + Clone, X, B: TripleOracle<A>, F: PairOracle<X>> TripleOracle<(A, X)>
    for LexCircProduct<B, F>
{
    fn holds(&self, u: &(A, X), v: &(A, X), w: &(A, X)) -> bool {
        five_case(
            (u, v, w),
            |p| p.0.clone(),
            |a, b, c| self.base.holds(a, b, c),
            |p, q| self.fiber.less(&p.1, &q.1),
        )
    }
}

/// Cross-checks a constructed order against a triple predicate on all
/// triples of distinct labels.
fn confirm<T: Label>(order: &CircOrder<T>, pred: impl Fn(&T, &T, &T) -> bool) -> Result<()> {
    let pts = order.labels();
    for a in pts {
        for b in pts {
            for c in pts {
                if a != b && b != c && a != c && order.holds(a, b, c) != pred(a, b, c) {
                    return Err(Error::InvariantViolation(format!(
                        "constructed order disagrees with the defining rule at {:?}",
                        (a, b, c)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// `C ⊗ L` as a finite circular order on pairs.
pub fn lex_circ_lin<A: Label, X: Label>(c: &CircOrder<A>, l: &LinOrder<X>) -> Result<CircOrder<(A, X)>> {
    let seq: Vec<(A, X)> = c
        .labels()
        .iter()
        .flat_map(|a| l.labels().iter().map(move |x| (a.clone(), x.clone())))
        .collect();
    let order = CircOrder::from_cycle(seq)?;
    let prod = LexCircProduct { base: c, fiber: l };
    confirm(&order, |u, v, w| prod.holds(u, v, w))?;
    Ok(order)
}

/// A finite instance of the fibered lift: a quotient map `q: X -> Y`, a
/// circular order on `Y` and a linear order on every fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberedLift<X: Ord, Y: Ord> {
    q: BTreeMap<X, Y>,
    base: CircOrder<Y>,
    fibers: BTreeMap<Y, LinOrder<X>>,
}

impl<X: Label, Y: Label> FiberedLift<X, Y> {
    pub fn new(q: BTreeMap<X, Y>, base: CircOrder<Y>, fibers: BTreeMap<Y, LinOrder<X>>) -> Result<Self> {
        for y in q.values() {
            if !base.contains(y) {
                return Err(Error::ImageOutsideCodomain(show(y)));
            }
        }
        let image: BTreeSet<&Y> = q.values().collect();
        if let Some(y) = base.labels().iter().find(|y| !image.contains(y)) {
            return Err(Error::NonSurjective(show(y)));
        }
        if let Some(y) = fibers.keys().find(|y| !base.contains(y)) {
            return Err(Error::UnknownLabel(show(y)));
        }
        for y in base.labels() {
            let fiber = fibers
                .get(y)
                .ok_or_else(|| Error::OverlappingFibers(format!("no fiber order for {y:?}")))?;
            for x in fiber.labels() {
                match q.get(x) {
                    Some(qx) if qx == y => {}
                    _ => return Err(Error::OverlappingFibers(show(x))),
                }
            }
            let preimage = q.values().filter(|v| *v == y).count();
            if preimage != fiber.len() {
                let missing = q
                    .iter()
                    .find(|(x, v)| *v == y && !fiber.contains(x))
                    .map(|(x, _)| x)
                    .expect("count mismatch implies a missing label");
                return Err(Error::OverlappingFibers(show(missing)));
            }
        }
        Ok(FiberedLift { q, base, fibers })
    }

    /// Builds the lift from the fiber orders alone; `q` sends each fiber to
    /// its key.
    pub fn from_fibers(base: CircOrder<Y>, fibers: BTreeMap<Y, LinOrder<X>>) -> Result<Self> {
        let mut q = BTreeMap::new();
        for (y, fiber) in &fibers {
            if fiber.is_empty() {
                return Err(Error::NonSurjective(show(y)));
            }
            for x in fiber.labels() {
                if q.insert(x.clone(), y.clone()).is_some() {
                    return Err(Error::OverlappingFibers(show(x)));
                }
            }
        }
        Self::new(q, base, fibers)
    }

    pub fn quotient(&self) -> &BTreeMap<X, Y> {
        &self.q
    }

    pub fn base(&self) -> &CircOrder<Y> {
        &self.base
    }

    pub fn fibers(&self) -> &BTreeMap<Y, LinOrder<X>> {
        &self.fibers
    }

    fn fiber_lt(&self, a: &X, b: &X) -> bool {
        let y = &self.q[a];
        self.q[b] == *y && self.fibers[y].lt(a, b)
    }

    /// The lifted triple predicate `R_X`. Unknown labels never satisfy it.
    pub fn holds(&self, x1: &X, x2: &X, x3: &X) -> bool {
        if !(self.q.contains_key(x1) && self.q.contains_key(x2) && self.q.contains_key(x3)) {
            return false;
        }
        five_case(
            (x1, x2, x3),
            |x| self.q[x].clone(),
            |a, b, c| self.base.holds(a, b, c),
            |a, b| self.fiber_lt(a, b),
        )
    }

    /// The lift as a canonical circular order: fibers in base order, each
    /// fiber in its own order.
    pub fn to_circ_order(&self) -> Result<CircOrder<X>> {
        let seq: Vec<X> = self
            .base
            .labels()
            .iter()
            .flat_map(|y| self.fibers[y].labels().iter().cloned())
            .collect();
        let order = CircOrder::from_cycle(seq)?;
        confirm(&order, |a, b, c| self.holds(a, b, c))?;
        Ok(order)
    }

    /// Whether the lift restricted to each fiber is the circularization of
    /// that fiber's linear order; fails with the first disagreeing triple.
    pub fn fiber_compatibility(&self) -> Verdict<(X, X, X)> {
        for fiber in self.fibers.values() {
            let circ = crate::orders::circularize(fiber);
            let pts = fiber.labels();
            for a in pts {
                for b in pts {
                    for c in pts {
                        if a != b && b != c && a != c && self.holds(a, b, c) != circ.holds(a, b, c) {
                            return Verdict::Fails((a.clone(), b.clone(), c.clone()));
                        }
                    }
                }
            }
        }
        Verdict::Holds
    }

    /// COP verdict of `q` from the lifted order onto the base.
    pub fn quotient_verdict(&self) -> Result<CopVerdict<X>> {
        cop_check(&self.q, &self.to_circ_order()?, &self.base)
    }
}

/// Convenience wrapper around [`FiberedLift::new`] and
/// [`FiberedLift::to_circ_order`].
pub fn fibered_lift<X: Label, Y: Label>(
    q: BTreeMap<X, Y>,
    base: CircOrder<Y>,
    fibers: BTreeMap<Y, LinOrder<X>>,
) -> Result<CircOrder<X>> {
    FiberedLift::new(q, base, fibers)?.to_circ_order()
}

/// Lift evaluated lazily: `q` computes the base point, `base` is a circular
/// oracle on the base and `fiber` a linear oracle consulted only on pairs
/// from a common fiber.
pub struct LiftOracle<Q, B, F> {
    pub q: Q,
    pub base: B,
    pub fiber: F,
}

impl<X, Y: PartialEq, Q: Fn(&X) -> Y, B: TripleOracle<Y>, F: PairOracle<X>> TripleOracle<X>
    for LiftOracle<Q, B, F>
{
    fn holds(&self, a: &X, b: &X, c: &X) -> bool {
        five_case(
            (a, b, c),
            &self.q,
            |u, v, w| self.base.holds(u, v, w),
            |u, v| self.fiber.less(u, v),
        )
    }
}

/// A finite group action given on the total space and on the base, one
/// pair of maps per group element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedAction<X: Ord, Y: Ord> {
    pub on_total: Vec<BTreeMap<X, X>>,
    pub on_base: Vec<BTreeMap<Y, Y>>,
}

/// How many `(g, triple)` pairs an equivariance check visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivarianceOutcome<X> {
    Preserved,
    /// Group element index and a lifted triple whose image is not a triple.
    OrderFailure { element: usize, triple: (X, X, X) },
    /// `q(gx) != g q(x)`: the quotient map is not a G-map.
    NotEquivariant { element: usize, point: X },
}

impl<X> EquivarianceOutcome<X> {
    pub fn is_preserved(&self) -> bool {
        matches!(self, EquivarianceOutcome::Preserved)
    }
}

/// Checks that the action on the total space preserves the lifted order.
/// Equivariance of `q` is checked first and reported separately.
pub fn lift_equivariance_check<X: Label, Y: Label>(
    lift: &FiberedLift<X, Y>,
    action: &LiftedAction<X, Y>,
    mode: CheckMode,
) -> Result<EquivarianceOutcome<X>> {
    if action.on_total.len() != action.on_base.len() {
        return Err(Error::InvalidAction(format!(
            "{} total maps but {} base maps",
            action.on_total.len(),
            action.on_base.len()
        )));
    }
    let pts: Vec<&X> = lift.q.keys().collect();
    for (i, (gx, gy)) in action.on_total.iter().zip(&action.on_base).enumerate() {
        for x in &pts {
            let image = gx.get(*x).ok_or_else(|| Error::PartialMapping(show(x)))?;
            let qx = &lift.q[*x];
            let base_image = gy.get(qx).ok_or_else(|| Error::PartialMapping(show(qx)))?;
            match lift.q.get(image) {
                Some(q_image) if q_image == base_image => {}
                Some(_) => {
                    return Ok(EquivarianceOutcome::NotEquivariant {
                        element: i,
                        point: (*x).clone(),
                    })
                }
                None => return Err(Error::ImageOutsideCodomain(show(image))),
            }
        }
    }
    let check = |i: usize, a: &X, b: &X, c: &X| {
        let g = &action.on_total[i];
        !lift.holds(a, b, c) || lift.holds(&g[a], &g[b], &g[c])
    };
    let n = pts.len();
    match mode {
        CheckMode::Exhaustive => {
            for i in 0..action.on_total.len() {
                for a in &pts {
                    for b in &pts {
                        for c in &pts {
                            if !check(i, a, b, c) {
                                return Ok(EquivarianceOutcome::OrderFailure {
                                    element: i,
                                    triple: ((*a).clone(), (*b).clone(), (*c).clone()),
                                });
                            }
                        }
                    }
                }
            }
        }
        CheckMode::Sampled { samples, seed } => {
            if n < 3 || action.on_total.is_empty() {
                return Ok(EquivarianceOutcome::Preserved);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let i = rng.random_range(0..action.on_total.len());
                let (a, b, c) = (
                    pts[rng.random_range(0..n)],
                    pts[rng.random_range(0..n)],
                    pts[rng.random_range(0..n)],
                );
                if !check(i, a, b, c) {
                    return Ok(EquivarianceOutcome::OrderFailure {
                        element: i,
                        triple: (a.clone(), b.clone(), c.clone()),
                    });
                }
            }
        }
    }
    Ok(EquivarianceOutcome::Preserved)
}

/// Disjoint-union label for the ordered sum `K1 ∪ K2`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SumLabel<A, B> {
    First(A),
    Second(B),
}

/// The ordered sum with the product group acting componentwise; element
/// `i * |G2| + j` of `action` is `(g1_i, g2_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedSum<A: Ord, B: Ord> {
    pub order: LinOrder<SumLabel<A, B>>,
    pub action: Vec<BTreeMap<SumLabel<A, B>, SumLabel<A, B>>>,
}

fn identity_count<T: Label>(order: &LinOrder<T>, maps: &[BTreeMap<T, T>]) -> usize {
    maps.iter()
        .filter(|m| order.labels().iter().all(|x| m.get(x) == Some(x)))
        .count()
}

fn check_system<T: Label>(order: &LinOrder<T>, maps: &[BTreeMap<T, T>]) -> Result<()> {
    for m in maps {
        if !lop_check(m, order, order)? {
            return Err(Error::NotLop(show(m)));
        }
    }
    if identity_count(order, maps) != 1 {
        return Err(Error::Hypothesis(format!(
            "action on {:?} is not effective (identity acts {} times)",
            order.labels(),
            identity_count(order, maps)
        )));
    }
    Ok(())
}

/// `K = K1 ∪ K2` with every point of `K1` below every point of `K2`, and
/// `(g1, g2)` acting by `g1` on `K1` and `g2` on `K2`. Each input action is
/// the list of its group's maps.
pub fn ordered_sum_action<A: Label, B: Label>(
    k1: &LinOrder<A>,
    g1: &[BTreeMap<A, A>],
    k2: &LinOrder<B>,
    g2: &[BTreeMap<B, B>],
) -> Result<OrderedSum<A, B>> {
    check_system(k1, g1)?;
    check_system(k2, g2)?;
    let labels = k1
        .labels()
        .iter()
        .cloned()
        .map(SumLabel::First)
        .chain(k2.labels().iter().cloned().map(SumLabel::Second))
        .collect();
    let order = LinOrder::new(labels)?;
    let mut action = Vec::with_capacity(g1.len() * g2.len());
    for m1 in g1 {
        for m2 in g2 {
            let map = m1
                .iter()
                .map(|(x, y)| (SumLabel::First(x.clone()), SumLabel::First(y.clone())))
                .chain(
                    m2.iter()
                        .map(|(x, y)| (SumLabel::Second(x.clone()), SumLabel::Second(y.clone()))),
                )
                .collect();
            action.push(map);
        }
    }
    check_system(&order, &action)
        .map_err(|e| Error::InvariantViolation(format!("ordered sum action: {e}")))?;
    Ok(OrderedSum { order, action })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::{circularize, verify_circular_axioms, TernaryRelation};
    use itertools::Itertools;

    fn lin<T: Label>(v: &[T]) -> LinOrder<T> {
        LinOrder::new(v.to_vec()).unwrap()
    }

    fn c(n: usize) -> CircOrder<usize> {
        CircOrder::<usize>::standard(n)
    }

    // Brute-force isomorphism search between two finite circular orders.
    fn isomorphic<A: Label, B: Label>(x: &CircOrder<A>, y: &CircOrder<B>) -> bool {
        if x.len() != y.len() {
            return false;
        }
        let (xs, ys) = (x.labels(), y.labels());
        (0..ys.len()).permutations(ys.len()).any(|perm| {
            let f = |a: &A| &ys[perm[xs.iter().position(|v| v == a).unwrap()]];
            xs.iter().all(|a| {
                xs.iter().all(|b| {
                    xs.iter().all(|c| a == b || b == c || a == c || x.holds(a, b, c) == y.holds(f(a), f(b), f(c)))
                })
            })
        })
    }

    fn relation_of<T: Label>(pts: &[T], pred: impl Fn(&T, &T, &T) -> bool) -> TernaryRelation<T> {
        TernaryRelation::from_predicate(pts.iter().cloned(), pred)
    }

    #[test]
    fn lex_lin_lin_examples() {
        assert_eq!(lex_lin_lin(&lin(&[0, 1]), &lin(&[0, 1])).len(), 4);
        assert_eq!(
            lex_lin_lin(&lin(&[0, 1, 2]), &lin(&["x"])).labels(),
            &[(0, "x"), (1, "x"), (2, "x")]
        );
        assert_eq!(
            lex_lin_lin(&lin(&[0, 1]), &lin(&['a', 'b', 'c'])).labels(),
            &[(0, 'a'), (0, 'b'), (0, 'c'), (1, 'a'), (1, 'b'), (1, 'c')]
        );
    }

    #[test]
    fn lex_circ_lin_examples() {
        let l = lin(&['a', 'b']);
        let prod = lex_circ_lin(&c(3), &l).unwrap();
        assert_eq!(
            prod.labels(),
            &[(0, 'a'), (0, 'b'), (1, 'a'), (1, 'b'), (2, 'a'), (2, 'b')]
        );
        assert!(isomorphic(&prod, &c(6)));
        assert!(prod.holds(&(0, 'a'), &(0, 'b'), &(1, 'a')));

        let one = CircOrder::from_cycle(vec![7usize]).unwrap();
        let l3 = lin(&[2, 0, 1]);
        let p1 = lex_circ_lin(&one, &l3).unwrap();
        assert_eq!(p1.map_labels(|(_, x)| *x).unwrap(), circularize(&l3));
    }

    #[test]
    fn lex_circ_lin_passes_axioms_and_projects_cop() {
        for n in 0..=4 {
            for m in 1..=3 {
                let l = lin(&(0..m).collect::<Vec<_>>());
                let prod = LexCircProduct { base: c(n), fiber: l.clone() };
                let pts: Vec<(usize, usize)> = (0..n).cartesian_product(0..m).collect();
                let rel = relation_of(&pts, |u, v, w| prod.holds(u, v, w));
                let verified = verify_circular_axioms(&rel).unwrap().into_order().expect("valid");
                assert_eq!(verified, lex_circ_lin(&c(n), &l).unwrap());
                let proj: BTreeMap<_, _> = pts.iter().map(|p| (*p, p.0)).collect();
                assert!(cop_check(&proj, &verified, &c(n)).unwrap().is_cop());
            }
        }
    }

    fn paired_c6() -> FiberedLift<usize, usize> {
        let fibers = [(0, lin(&[0, 1])), (1, lin(&[2, 3])), (2, lin(&[4, 5]))].into();
        FiberedLift::from_fibers(c(3), fibers).unwrap()
    }

    #[test]
    fn fibered_lift_examples() {
        let lift = paired_c6();
        let order = lift.to_circ_order().unwrap();
        assert_eq!(order, c(6));
        assert!(lift.fiber_compatibility().holds());
        assert!(lift.quotient_verdict().unwrap().is_cop());

        // Singleton fibers: the pullback of the base along a bijection.
        let fibers = [(0, lin(&['z'])), (1, lin(&['y'])), (2, lin(&['x']))].into();
        let single = FiberedLift::from_fibers(c(3), fibers).unwrap();
        let expect = CircOrder::from_cycle(vec!['z', 'y', 'x']).unwrap();
        assert_eq!(single.to_circ_order().unwrap(), expect);

        let one = CircOrder::from_cycle(vec![0usize]).unwrap();
        let l = lin(&[3, 1, 2]);
        let lifted = fibered_lift([(3, 0), (1, 0), (2, 0)].into(), one.clone(), [(0, l.clone())].into()).unwrap();
        let lex = lex_circ_lin(&one, &l).unwrap().map_labels(|(_, x)| *x).unwrap();
        assert_eq!(lifted, lex);
    }

    #[test]
    fn fibered_lift_rejects_bad_input() {
        let q: BTreeMap<usize, usize> = [(0, 0), (1, 0), (2, 1)].into();
        let fibers: BTreeMap<usize, LinOrder<usize>> = [(0, lin(&[0, 1])), (1, lin(&[2]))].into();
        assert!(matches!(
            FiberedLift::new(q.clone(), c(3), fibers.clone()),
            Err(Error::NonSurjective(_))
        ));
        let bad: BTreeMap<usize, LinOrder<usize>> = [(0, lin(&[0, 1, 2])), (1, lin(&[2]))].into();
        assert!(matches!(FiberedLift::new(q.clone(), c(2), bad), Err(Error::OverlappingFibers(_))));
        let dup = [(0, lin(&[0, 1])), (1, lin(&[1, 2]))].into();
        assert!(matches!(FiberedLift::from_fibers(c(2), dup), Err(Error::OverlappingFibers(_))));
        assert!(FiberedLift::new(q, c(2), fibers).is_ok());
    }

    #[test]
    fn lex_product_equals_lift_along_projection() {
        for n in 1..=4 {
            for m in 1..=3 {
                let l = lin(&(0..m).collect::<Vec<_>>());
                let pts: Vec<(usize, usize)> = (0..n).cartesian_product(0..m).collect();
                let q = pts.iter().map(|p| (*p, p.0)).collect();
                let fibers = (0..n)
                    .map(|a| (a, LinOrder::new((0..m).map(|x| (a, x)).collect()).unwrap()))
                    .collect();
                assert_eq!(fibered_lift(q, c(n), fibers).unwrap(), lex_circ_lin(&c(n), &l).unwrap());
            }
        }
    }

    #[test]
    fn lift_oracle_matches_finite_lift() {
        let lift = paired_c6();
        let oracle = LiftOracle {
            q: |x: &usize| x / 2,
            base: c(3),
            fiber: crate::oracle::PairFn(|a: &usize, b: &usize| a < b),
        };
        for (a, b, d) in (0..6).tuple_combinations() {
            assert_eq!(oracle.holds(&a, &b, &d), lift.holds(&a, &b, &d));
            assert_eq!(oracle.holds(&d, &b, &a), lift.holds(&d, &b, &a));
        }
    }

    fn rotation_action(k: usize) -> (BTreeMap<usize, usize>, BTreeMap<usize, usize>) {
        ((0..6).map(|x| (x, (x + 2 * k) % 6)).collect(), (0..3).map(|y| (y, (y + k) % 3)).collect())
    }

    #[test]
    fn equivariance_examples() {
        let lift = paired_c6();
        let (t, b): (Vec<_>, Vec<_>) = (0..3).map(rotation_action).unzip();
        let z3 = LiftedAction { on_total: t, on_base: b };
        assert!(lift_equivariance_check(&lift, &z3, CheckMode::Exhaustive).unwrap().is_preserved());

        let (t0, b0) = rotation_action(0);
        let trivial = LiftedAction { on_total: vec![t0.clone()], on_base: vec![b0.clone()] };
        assert!(lift_equivariance_check(&lift, &trivial, CheckMode::Exhaustive).unwrap().is_preserved());

        // Swaps inside the fiber over 0: decreasing on that fiber.
        let mut swap = t0.clone();
        swap.insert(0, 1);
        swap.insert(1, 0);
        let bad = LiftedAction { on_total: vec![swap], on_base: vec![b0.clone()] };
        match lift_equivariance_check(&lift, &bad, CheckMode::Exhaustive).unwrap() {
            EquivarianceOutcome::OrderFailure { element, triple } => {
                assert_eq!(element, 0);
                assert!(lift.holds(&triple.0, &triple.1, &triple.2));
            }
            other => panic!("expected order failure, got {other:?}"),
        }

        let (t1, _) = rotation_action(1);
        let skew = LiftedAction { on_total: vec![t1], on_base: vec![b0] };
        assert!(matches!(
            lift_equivariance_check(&lift, &skew, CheckMode::Exhaustive).unwrap(),
            EquivarianceOutcome::NotEquivariant { .. }
        ));
        assert!(lift_equivariance_check(&lift, &z3, CheckMode::Sampled { samples: 500, seed: 3 })
            .unwrap()
            .is_preserved());
    }

    fn id_map<T: Label>(l: &LinOrder<T>) -> BTreeMap<T, T> {
        l.labels().iter().map(|x| (x.clone(), x.clone())).collect()
    }

    #[test]
    fn ordered_sum_examples() {
        let k1 = lin(&[0, 1]);
        let k2 = lin(&[0, 1]);
        let sum = ordered_sum_action(&k1, &[id_map(&k1)], &k2, &[id_map(&k2)]).unwrap();
        assert_eq!(
            sum.order.labels(),
            &[SumLabel::First(0), SumLabel::First(1), SumLabel::Second(0), SumLabel::Second(1)]
        );
        assert_eq!(sum.action.len(), 1);

        let a = lin(&['a']);
        let b = lin(&['b']);
        let two = ordered_sum_action(&a, &[id_map(&a)], &b, &[id_map(&b)]).unwrap();
        assert_eq!(two.order.len(), 2);

        let rev: BTreeMap<i32, i32> = [(0, 1), (1, 0)].into();
        assert!(matches!(
            ordered_sum_action(&k1, &[id_map(&k1), rev], &k2, &[id_map(&k2)]),
            Err(Error::NotLop(_))
        ));
        assert!(matches!(
            ordered_sum_action(&k1, &[id_map(&k1), id_map(&k1)], &k2, &[id_map(&k2)]),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn ordered_sum_respects_given_orders() {
        // A finite chain only carries the trivial LOP group.
        let k1 = lin(&[5, 3, 1]);
        let k2 = lin(&[5, 4]);
        let sum = ordered_sum_action(&k1, &[id_map(&k1)], &k2, &[id_map(&k2)]).unwrap();
        assert!(sum.order.lt(&SumLabel::First(1), &SumLabel::Second(5)));
        assert!(lop_check(&sum.action[0], &sum.order, &sum.order).unwrap());
    }
}
