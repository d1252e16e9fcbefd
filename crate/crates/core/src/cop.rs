//! Cycles, c-order-preserving (COP) maps and automorphism groups.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::error::{show, Error, Result};
use crate::orders::{CircOrder, LinOrder};
use crate::{Bounds, Label};

/// Whether `points` is a cycle of `host`: distinct entries sitting at
/// cyclically ascending indices form host triples, and equal entries occupy
/// one cyclic block of consecutive indices.
pub fn is_cycle<T: Label>(host: &CircOrder<T>, points: &[T]) -> Result<bool> {
    if let Some(x) = points.iter().find(|x| !host.contains(x)) {
        return Err(Error::UnknownLabel(show(x)));
    }
    let n = points.len();
    for (i, j, k) in (0..n).tuple_combinations() {
        let (a, b, c) = (&points[i], &points[j], &points[k]);
        if a != b && b != c && a != c && !host.holds(a, b, c) {
            return Ok(false);
        }
    }
    for i in 0..n {
        for k in 0..n {
            if i != k && points[i] == points[k] {
                let constant = |from: usize, to: usize| {
                    let mut t = from;
                    loop {
                        if points[t] != points[i] {
                            return false;
                        }
                        if t == to {
                            return true;
                        }
                        t = (t + 1) % n;
                    }
                };
                if !constant(i, k) && !constant(k, i) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// A validated cycle in a host circular order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle<T> {
    host: CircOrder<T>,
    points: Vec<T>,
}

impl<T: Label> Cycle<T> {
    pub fn new(host: CircOrder<T>, points: Vec<T>) -> Result<Self> {
        if !is_cycle(&host, &points)? {
            return Err(Error::NotACycle(show(&points)));
        }
        Ok(Cycle { host, points })
    }

    pub fn host(&self) -> &CircOrder<T> {
        &self.host
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn is_injective(&self) -> bool {
        self.points.iter().collect::<BTreeSet<_>>().len() == self.points.len()
    }
}

/// COP verdict with a witness that is lexicographically least in canonical
/// positions of the domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CopVerdict<A> {
    Cop,
    /// `[a, b, c]` holds, the images are distinct, but do not form a triple.
    ViolatesTriple(A, A, A),
    /// `f(a) = f(c)` but `f` is constant on neither `[a, c]` nor `[c, a]`.
    ViolatesFiber(A, A),
}

impl<A> CopVerdict<A> {
    pub fn is_cop(&self) -> bool {
        matches!(self, CopVerdict::Cop)
    }
}

fn check_total<A: Label, B: Label>(
    f: &BTreeMap<A, B>,
    domain: &[A],
    codomain_has: impl Fn(&B) -> bool,
) -> Result<()> {
    for a in domain {
        let b = f.get(a).ok_or_else(|| Error::PartialMapping(show(a)))?;
        if !codomain_has(b) {
            return Err(Error::ImageOutsideCodomain(show(b)));
        }
    }
    if f.len() != domain.len() {
        let extra = f.keys().find(|k| !domain.contains(k)).expect("extra key");
        return Err(Error::UnknownLabel(show(extra)));
    }
    Ok(())
}

/// Witnesses for the two COP conditions, checked independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopConditions<A> {
    pub triple_failure: Option<(A, A, A)>,
    pub fiber_failure: Option<(A, A)>,
}

pub fn cop_conditions<A: Label, B: Label>(
    f: &BTreeMap<A, B>,
    domain: &CircOrder<A>,
    codomain: &CircOrder<B>,
) -> Result<CopConditions<A>> {
    check_total(f, domain.labels(), |b| codomain.contains(b))?;
    let pts = domain.labels();
    let n = pts.len();
    // Images as codomain positions, so the triple scan never compares labels.
    let img: Vec<usize> = pts
        .iter()
        .map(|a| codomain.position(&f[a]).expect("checked total"))
        .collect();
    let m = codomain.len();

    let mut triple_failure = None;
    for (i, j, k) in (0..n).tuple_combinations() {
        let (x, y, z) = (img[i], img[j], img[k]);
        if x != y && y != z && x != z && (y + m - x) % m >= (z + m - x) % m {
            triple_failure = Some((pts[i].clone(), pts[j].clone(), pts[k].clone()));
            break;
        }
    }

    let constant_on = |from: usize, to: usize| {
        let mut t = from;
        while t != to {
            t = (t + 1) % n;
            if img[t] != img[from] {
                return false;
            }
        }
        true
    };
    let mut fiber_failure = None;
    'outer: for i in 0..n {
        for k in i + 1..n {
            if img[i] == img[k] && !constant_on(i, k) && !constant_on(k, i) {
                fiber_failure = Some((pts[i].clone(), pts[k].clone()));
                break 'outer;
            }
        }
    }
    Ok(CopConditions {
        triple_failure,
        fiber_failure,
    })
}

/// Checks both COP conditions; a triple failure is reported before a fiber
/// failure.
pub fn cop_check<A: Label, B: Label>(
    f: &BTreeMap<A, B>,
    domain: &CircOrder<A>,
    codomain: &CircOrder<B>,
) -> Result<CopVerdict<A>> {
    let conds = cop_conditions(f, domain, codomain)?;
    Ok(match (conds.triple_failure, conds.fiber_failure) {
        (Some((a, b, c)), _) => CopVerdict::ViolatesTriple(a, b, c),
        (None, Some((a, c))) => CopVerdict::ViolatesFiber(a, c),
        (None, None) => CopVerdict::Cop,
    })
}

/// Linear-order preservation: `a <= b` implies `f(a) <= f(b)`.
pub fn lop_check<A: Label, B: Label>(
    f: &BTreeMap<A, B>,
    domain: &LinOrder<A>,
    codomain: &LinOrder<B>,
) -> Result<bool> {
    check_total(f, domain.labels(), |b| codomain.contains(b))?;
    Ok(domain
        .labels()
        .windows(2)
        .all(|w| codomain.le(&f[&w[0]], &f[&w[1]])))
}

/// A total map between circular orders together with its COP verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopMap<A, B> {
    domain: CircOrder<A>,
    codomain: CircOrder<B>,
    table: BTreeMap<A, B>,
    verdict: CopVerdict<A>,
}

impl<A: Label, B: Label> CopMap<A, B> {
    pub fn new(domain: CircOrder<A>, codomain: CircOrder<B>, table: BTreeMap<A, B>) -> Result<Self> {
        let verdict = cop_check(&table, &domain, &codomain)?;
        Ok(CopMap {
            domain,
            codomain,
            table,
            verdict,
        })
    }

    pub fn domain(&self) -> &CircOrder<A> {
        &self.domain
    }

    pub fn codomain(&self) -> &CircOrder<B> {
        &self.codomain
    }

    pub fn table(&self) -> &BTreeMap<A, B> {
        &self.table
    }

    pub fn verdict(&self) -> &CopVerdict<A> {
        &self.verdict
    }

    pub fn is_cop(&self) -> bool {
        self.verdict.is_cop()
    }

    pub fn apply(&self, a: &A) -> Option<&B> {
        self.table.get(a)
    }

    pub fn is_onto(&self) -> bool {
        let image: BTreeSet<&B> = self.table.values().collect();
        image.len() == self.codomain.len()
    }

    pub fn is_bijective(&self) -> bool {
        self.is_onto() && self.domain.len() == self.codomain.len()
    }
}

/// `f ∘ g`. The composite's verdict is recomputed; a COP composite of COP
/// maps that fails re-verification is reported as an invariant violation.
pub fn compose<A: Label, B: Label, C: Label>(
    f: &CopMap<B, C>,
    g: &CopMap<A, B>,
) -> Result<CopMap<A, C>> {
    if g.codomain != f.domain {
        return Err(Error::DomainMismatch(format!(
            "{:?} vs {:?}",
            g.codomain, f.domain
        )));
    }
    let table = g
        .table
        .iter()
        .map(|(a, b)| (a.clone(), f.table[b].clone()))
        .collect();
    let out = CopMap::new(g.domain.clone(), f.codomain.clone(), table)?;
    if f.is_cop() && g.is_cop() && !out.is_cop() {
        return Err(Error::InvariantViolation(format!(
            "composite of COP maps fails: {:?}",
            out.verdict
        )));
    }
    Ok(out)
}

/// A finite group of permutations of a ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup<T: Ord> {
    ground: Vec<T>,
    elements: Vec<BTreeMap<T, T>>,
}

impl<T: Label> PermGroup<T> {
    pub fn ground(&self) -> &[T] {
        &self.ground
    }

    pub fn elements(&self) -> &[BTreeMap<T, T>] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> BTreeMap<T, T> {
        self.ground.iter().map(|x| (x.clone(), x.clone())).collect()
    }

    pub fn contains(&self, p: &BTreeMap<T, T>) -> bool {
        self.elements.contains(p)
    }

    pub fn compose(p: &BTreeMap<T, T>, q: &BTreeMap<T, T>) -> BTreeMap<T, T> {
        q.iter().map(|(x, y)| (x.clone(), p[y].clone())).collect()
    }

    pub fn inverse(p: &BTreeMap<T, T>) -> BTreeMap<T, T> {
        p.iter().map(|(x, y)| (y.clone(), x.clone())).collect()
    }

    /// Closure under composition and inverses, identity included.
    pub fn is_closed(&self) -> bool {
        self.contains(&self.identity())
            && self.elements.iter().all(|p| {
                self.contains(&Self::inverse(p))
                    && self.elements.iter().all(|q| self.contains(&Self::compose(p, q)))
            })
    }

    pub fn element_order(&self, p: &BTreeMap<T, T>) -> usize {
        let id = self.identity();
        let mut k = 1;
        let mut acc = p.clone();
        while acc != id {
            acc = Self::compose(p, &acc);
            k += 1;
        }
        k
    }

    /// A generator when the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<&BTreeMap<T, T>> {
        self.elements
            .iter()
            .find(|p| self.element_order(p) == self.order())
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k)).unwrap_or(u128::MAX)
}

fn bijections<T: Label>(labels: &[T]) -> impl Iterator<Item = BTreeMap<T, T>> + '_ {
    let n = labels.len();
    (0..n).permutations(n).map(move |perm| {
        labels
            .iter()
            .zip(perm)
            .map(|(x, i)| (x.clone(), labels[i].clone()))
            .collect()
    })
}

/// All COP bijections of `order`, in lexicographic order of their image
/// sequences.
pub fn automorphism_group<T: Label>(order: &CircOrder<T>, bounds: &Bounds) -> Result<PermGroup<T>> {
    bounds.check_size(order.len())?;
    bounds.check_budget(factorial(order.len()))?;
    let mut elements = Vec::new();
    for p in bijections(order.labels()) {
        if cop_check(&p, order, order)?.is_cop() {
            elements.push(p);
        }
    }
    Ok(PermGroup {
        ground: order.labels().to_vec(),
        elements,
    })
}

/// All order-preserving bijections of a chain.
pub fn linear_automorphism_group<T: Label>(
    order: &LinOrder<T>,
    bounds: &Bounds,
) -> Result<PermGroup<T>> {
    bounds.check_size(order.len())?;
    bounds.check_budget(factorial(order.len()))?;
    let mut elements = Vec::new();
    for p in bijections(order.labels()) {
        if lop_check(&p, order, order)? {
            elements.push(p);
        }
    }
    Ok(PermGroup {
        ground: order.labels().to_vec(),
        elements,
    })
}

/// Every COP map `X1 -> X2`, in lexicographic order of image sequences over
/// the canonical domain sequence. Refuses rather than samples when
/// `|X2|^|X1|` exceeds the budget.
pub fn enumerate_cop_maps<A: Label, B: Label>(
    x1: &CircOrder<A>,
    x2: &CircOrder<B>,
    bounds: &Bounds,
) -> Result<Vec<CopMap<A, B>>> {
    let needed = (x2.len() as u128)
        .checked_pow(x1.len() as u32)
        .unwrap_or(u128::MAX);
    bounds.check_budget(needed)?;
    let mut out = Vec::new();
    for table in all_maps(x1.labels(), x2.labels()) {
        let map = CopMap::new(x1.clone(), x2.clone(), table)?;
        if map.is_cop() {
            out.push(map);
        }
    }
    Ok(out)
}

/// Every total map between two label lists, lexicographic in image indices.
pub fn all_maps<'a, A: Label, B: Label>(
    domain: &'a [A],
    codomain: &'a [B],
) -> Box<dyn Iterator<Item = BTreeMap<A, B>> + 'a> {
    if domain.is_empty() {
        return Box::new(std::iter::once(BTreeMap::new()));
    }
    Box::new(
        (0..domain.len())
            .map(|_| 0..codomain.len())
            .multi_cartesian_product()
            .map(move |imgs| {
                domain
                    .iter()
                    .zip(imgs)
                    .map(|(a, i)| (a.clone(), codomain[i].clone()))
                    .collect()
            }),
    )
}
