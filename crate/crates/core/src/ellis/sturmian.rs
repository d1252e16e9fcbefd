//! The enveloping semigroup of the golden rotation on the double circle
//! `T_A`, where each point of `A = Z + Zα` is split into `β⁻ < β⁺`.
//!
//! Elements are kept symbolic: `Sigma(n)` is the `n`-th power of the
//! rotation and `P(γ, ±)` sends every `β^±` to `(β + γ)^±`. Composition
//! laws are checked against pointwise evaluation before they are used.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::quadirr::QuadIrr;
use crate::cop::{cop_check, CopVerdict};
use crate::error::{show, Error, Result};
use crate::lex::five_case;
use crate::orders::CircOrder;
use crate::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }
}

/// A point of the double circle. Off `A` the side carries no information
/// and is normalized to `Plus`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TAPoint {
    beta: QuadIrr,
    side: Sign,
}

impl TAPoint {
    pub fn new(beta: QuadIrr, side: Sign) -> Self {
        let beta = beta.fract();
        let side = if beta.in_a() { side } else { Sign::Plus };
        TAPoint { beta, side }
    }

    pub fn beta(&self) -> &QuadIrr {
        &self.beta
    }

    pub fn side(&self) -> Sign {
        self.side
    }
}

impl fmt::Display for TAPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.beta.in_a() {
            write!(f, "({}){}", self.beta, self.side.symbol())
        } else {
            write!(f, "({})", self.beta)
        }
    }
}

/// Circular order of three distinct points of `[0, 1)`.
fn circle_triple(a: &QuadIrr, b: &QuadIrr, c: &QuadIrr) -> bool {
    (a < b && b < c) || (b < c && c < a) || (c < a && a < b)
}

/// Triple of the lexicographic product of the circle with `− < +`.
pub fn ta_triple(u: &TAPoint, v: &TAPoint, w: &TAPoint) -> Result<bool> {
    if u == v || v == w || u == w {
        return Err(Error::NotDistinct(format!("{u}, {v}, {w}")));
    }
    Ok(five_case((u, v, w), |x| x.beta.clone(), circle_triple, |x, y| x.side < y.side))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SturmianElt {
    Sigma(i64),
    P { gamma: QuadIrr, sign: Sign },
}

impl SturmianElt {
    /// `P(γ mod 1, sign)`.
    pub fn p(gamma: QuadIrr, sign: Sign) -> Self {
        SturmianElt::P {
            gamma: gamma.fract(),
            sign,
        }
    }

    pub fn is_ideal(&self) -> bool {
        matches!(self, SturmianElt::P { .. })
    }

    /// Position on `T × {−, 0, +}`: `Sigma(n)` sits at `(nα, 0)` between
    /// the two `P` elements at the same angle.
    pub fn embed(&self) -> (QuadIrr, i8) {
        match self {
            SturmianElt::Sigma(n) => (QuadIrr::from_ints(0, *n).fract(), 0),
            SturmianElt::P { gamma, sign } => (gamma.clone(), if *sign == Sign::Minus { -1 } else { 1 }),
        }
    }
}

impl fmt::Display for SturmianElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SturmianElt::Sigma(n) => write!(f, "Sigma({n})"),
            SturmianElt::P { gamma, sign } => write!(f, "P({gamma}, {})", sign.symbol()),
        }
    }
}

pub fn sturmian_apply(e: &SturmianElt, x: &TAPoint) -> TAPoint {
    match e {
        SturmianElt::Sigma(n) => TAPoint::new(&x.beta + &QuadIrr::from_ints(0, *n), x.side),
        SturmianElt::P { gamma, sign } => TAPoint::new(&x.beta + gamma, *sign),
    }
}

/// `u ∘ v` (apply `v` first). Panics on `i64` overflow of exponents.
pub fn sturmian_compose(u: &SturmianElt, v: &SturmianElt) -> SturmianElt {
    use SturmianElt::*;
    match (u, v) {
        (Sigma(m), Sigma(n)) => Sigma(m.checked_add(*n).expect("exponent overflows i64")),
        (P { gamma, sign }, Sigma(n)) | (Sigma(n), P { gamma, sign }) => {
            SturmianElt::p(gamma + &QuadIrr::from_ints(0, *n), *sign)
        }
        (P { gamma, sign }, P { gamma: delta, .. }) => SturmianElt::p(gamma + delta, *sign),
    }
}

/// Triple of the lexicographic circular order on `T × {−, 0, +}` through
/// [`SturmianElt::embed`].
pub fn sturmian_etriple(u: &SturmianElt, v: &SturmianElt, w: &SturmianElt) -> Result<bool> {
    if u == v || v == w || u == w {
        return Err(Error::NotDistinct(format!("{u}, {v}, {w}")));
    }
    let (eu, ev, ew) = (u.embed(), v.embed(), w.embed());
    Ok(five_case((&eu, &ev, &ew), |x| x.0.clone(), circle_triple, |x, y| x.1 < y.1))
}

/// The circular order on a finite set of elements, by sorting embedded
/// positions.
pub fn sturmian_corder(elements: impl IntoIterator<Item = SturmianElt>) -> Result<CircOrder<SturmianElt>> {
    let set: BTreeSet<SturmianElt> = elements.into_iter().collect();
    let mut seq: Vec<SturmianElt> = set.into_iter().collect();
    seq.sort_by_cached_key(|e| e.embed());
    CircOrder::from_cycle(seq)
}

/// Seeded generators for sample points and elements.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Half the draws land in `A`, the rest have small denominators.
    pub fn quad(&mut self) -> QuadIrr {
        if self.rng.random_bool(0.5) {
            QuadIrr::from_ints(self.rng.random_range(-20..=20), self.rng.random_range(-20..=20))
        } else {
            QuadIrr::from_fracs(
                self.rng.random_range(-40..=40),
                self.rng.random_range(1..=12),
                self.rng.random_range(-40..=40),
                self.rng.random_range(1..=12),
            )
        }
        .fract()
    }

    pub fn sign(&mut self) -> Sign {
        if self.rng.random_bool(0.5) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn point(&mut self) -> TAPoint {
        let beta = self.quad();
        let side = self.sign();
        TAPoint::new(beta, side)
    }

    pub fn sigma(&mut self) -> SturmianElt {
        SturmianElt::Sigma(self.rng.random_range(-30..=30))
    }

    pub fn ideal(&mut self) -> SturmianElt {
        let gamma = self.quad();
        let sign = self.sign();
        SturmianElt::p(gamma, sign)
    }

    pub fn element(&mut self) -> SturmianElt {
        if self.rng.random_bool(0.5) {
            self.sigma()
        } else {
            self.ideal()
        }
    }

    /// `n` pairwise distinct elements.
    pub fn distinct_elements(&mut self, n: usize) -> Vec<SturmianElt> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let e = self.element();
            if seen.insert(e.clone()) {
                out.push(e);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub law: &'static str,
    pub samples: usize,
    pub seed: u64,
    /// `(u, v, x)` with `(u ∘ v)(x) != u(v(x))`, rendered.
    pub witness: Option<String>,
}

impl LawReport {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// The four composition laws, each checked pointwise at `samples` random
/// points.
pub fn verify_composition_laws(samples: usize, seed: u64) -> Vec<LawReport> {
    verify_composition_laws_with(samples, seed, sturmian_compose)
}

/// As [`verify_composition_laws`] with a substitute composition.
pub fn verify_composition_laws_with(
    samples: usize,
    seed: u64,
    compose: impl Fn(&SturmianElt, &SturmianElt) -> SturmianElt,
) -> Vec<LawReport> {
    type Draw = fn(&mut Sampler) -> (SturmianElt, SturmianElt);
    let laws: [(&'static str, Draw); 4] = [
        ("Sigma(m) o Sigma(n) = Sigma(m+n)", |s| (s.sigma(), s.sigma())),
        ("P(g,e) o Sigma(n) = P(g+na,e)", |s| (s.ideal(), s.sigma())),
        ("Sigma(n) o P(g,e) = P(g+na,e)", |s| (s.sigma(), s.ideal())),
        ("P(g,e) o P(d,h) = P(g+d,e)", |s| (s.ideal(), s.ideal())),
    ];
    let mut sampler = Sampler::new(seed);
    laws.iter()
        .map(|(law, draw)| {
            let mut witness = None;
            for _ in 0..samples {
                let (u, v) = draw(&mut sampler);
                let x = sampler.point();
                let lhs = sturmian_apply(&compose(&u, &v), &x);
                let rhs = sturmian_apply(&u, &sturmian_apply(&v, &x));
                if lhs != rhs && witness.is_none() {
                    witness = Some(format!("u = {u}, v = {v}, x = {x}: {lhs} != {rhs}"));
                }
            }
            LawReport {
                law,
                samples,
                seed,
                witness,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealReport {
    pub sampled: usize,
    pub ideal_sampled: usize,
    /// Set when no `P` element was sampled; every verdict is then vacuous.
    pub note: Option<String>,
    /// `s ∘ i` stays in the `P` part; witness `(s, i)`.
    pub left_closed: Verdict<(SturmianElt, SturmianElt)>,
    /// `i ∘ s` stays in the `P` part; witness `(i, s)`.
    pub right_closed: Verdict<(SturmianElt, SturmianElt)>,
    /// Every sampled `j` is some `w ∘ i`; witness `(i, j)`.
    pub left_minimal: Verdict<(SturmianElt, SturmianElt)>,
    /// Every sampled `j` is some `i ∘ w`; witness `(i, j)`.
    pub right_minimal: Verdict<(SturmianElt, SturmianElt)>,
}

impl IdealReport {
    /// Closure on both sides and left minimality.
    pub fn minimal_left_ideal_confirmed(&self) -> bool {
        self.ideal_sampled > 0 && self.left_closed.holds() && self.right_closed.holds() && self.left_minimal.holds()
    }
}

pub fn verify_minimal_ideal(samples: &[SturmianElt]) -> IdealReport {
    verify_minimal_ideal_with(samples, sturmian_compose)
}

/// As [`verify_minimal_ideal`] with a substitute composition.
pub fn verify_minimal_ideal_with(
    samples: &[SturmianElt],
    compose: impl Fn(&SturmianElt, &SturmianElt) -> SturmianElt,
) -> IdealReport {
    let ideal: Vec<&SturmianElt> = samples.iter().filter(|e| e.is_ideal()).collect();
    let note = ideal.is_empty().then(|| "no ideal elements sampled".to_string());
    let left_closed = first_failure(
        samples.iter().flat_map(|s| ideal.iter().map(move |i| (s, *i))),
        |s, i| compose(s, i).is_ideal(),
    );
    let right_closed = first_failure(
        ideal.iter().flat_map(|i| samples.iter().map(move |s| (*i, s))),
        |i, s| compose(i, s).is_ideal(),
    );
    let candidates = |i: &SturmianElt, j: &SturmianElt| -> Vec<SturmianElt> {
        let mut c: Vec<SturmianElt> = samples.to_vec();
        if let (SturmianElt::P { gamma: gi, .. }, SturmianElt::P { gamma: gj, .. }) = (i, j) {
            for sign in [Sign::Minus, Sign::Plus] {
                c.push(SturmianElt::p(gj - gi, sign));
            }
        }
        c
    };
    let pairs = || ideal.iter().flat_map(|i| ideal.iter().map(move |j| (*i, *j)));
    let left_minimal = first_failure(pairs(), |i, j| candidates(i, j).iter().any(|w| compose(w, i) == *j));
    let right_minimal = first_failure(pairs(), |i, j| candidates(i, j).iter().any(|w| compose(i, w) == *j));
    IdealReport {
        sampled: samples.len(),
        ideal_sampled: ideal.len(),
        note,
        left_closed,
        right_closed,
        left_minimal,
        right_minimal,
    }
}

fn first_failure<'a>(
    mut pairs: impl Iterator<Item = (&'a SturmianElt, &'a SturmianElt)>,
    ok: impl Fn(&SturmianElt, &SturmianElt) -> bool,
) -> Verdict<(SturmianElt, SturmianElt)> {
    pairs
        .find(|(a, b)| !ok(a, b))
        .map_or(Verdict::Holds, |(a, b)| Verdict::Fails((a.clone(), b.clone())))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationCopReport {
    pub left: CopVerdict<SturmianElt>,
    pub right: CopVerdict<SturmianElt>,
}

impl TranslationCopReport {
    pub fn holds(&self) -> bool {
        self.left.is_cop() && self.right.is_cop()
    }
}

/// COP verdicts for `s -> u ∘ s` and `s -> s ∘ u` on the points of the
/// sampled triples, each triple checked to be an E-triple first.
pub fn translation_cop_report(
    u: &SturmianElt,
    triples: &[(SturmianElt, SturmianElt, SturmianElt)],
) -> Result<TranslationCopReport> {
    let mut points = BTreeSet::new();
    for (a, b, c) in triples {
        if !sturmian_etriple(a, b, c)? {
            return Err(Error::Hypothesis(format!("not an E-triple: {}", show(&(a, b, c)))));
        }
        points.extend([a.clone(), b.clone(), c.clone()]);
    }
    if points.is_empty() {
        return Ok(TranslationCopReport {
            left: CopVerdict::Cop,
            right: CopVerdict::Cop,
        });
    }
    let domain = sturmian_corder(points.iter().cloned())?;
    let check = |f: &dyn Fn(&SturmianElt) -> SturmianElt| -> Result<CopVerdict<SturmianElt>> {
        let table = points.iter().map(|s| (s.clone(), f(s))).collect();
        let codomain = sturmian_corder(points.iter().map(f))?;
        cop_check(&table, &domain, &codomain)
    };
    Ok(TranslationCopReport {
        left: check(&|s| sturmian_compose(u, s))?,
        right: check(&|s| sturmian_compose(s, u))?,
    })
}

pub fn verify_translation_cop(u: &SturmianElt, triples: &[(SturmianElt, SturmianElt, SturmianElt)]) -> Result<bool> {
    Ok(translation_cop_report(u, triples)?.holds())
}

/// `count` E-triples drawn from `pool`, each reoriented to hold.
pub fn sample_etriples(
    pool: &[SturmianElt],
    count: usize,
    seed: u64,
) -> Result<Vec<(SturmianElt, SturmianElt, SturmianElt)>> {
    if pool.len() < 3 {
        return Err(Error::NotDistinct("need at least three elements".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let i = rng.random_range(0..pool.len());
        let j = rng.random_range(0..pool.len());
        let k = rng.random_range(0..pool.len());
        if i == j || j == k || i == k {
            continue;
        }
        let (a, b, c) = (&pool[i], &pool[j], &pool[k]);
        if sturmian_etriple(a, b, c)? {
            out.push((a.clone(), b.clone(), c.clone()));
        } else {
            out.push((a.clone(), c.clone(), b.clone()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use SturmianElt::*;

    fn pt(p: i64, q: i64, side: Sign) -> TAPoint {
        TAPoint::new(QuadIrr::from_ints(p, q), side)
    }

    fn pe(q: i64, sign: Sign) -> SturmianElt {
        SturmianElt::p(QuadIrr::from_ints(0, q), sign)
    }

    #[test]
    fn points_identify_sides_off_a() {
        let half = QuadIrr::from_fracs(1, 2, 0, 1);
        assert_eq!(TAPoint::new(half.clone(), Sign::Minus), TAPoint::new(half, Sign::Plus));
        assert_ne!(pt(0, 0, Sign::Minus), pt(0, 0, Sign::Plus));
        assert_eq!(pt(1, 0, Sign::Minus), pt(0, 0, Sign::Minus));
    }

    #[test]
    fn ta_triple_examples() {
        let zm = pt(0, 0, Sign::Minus);
        let zp = pt(0, 0, Sign::Plus);
        let ap = pt(0, 1, Sign::Plus);
        assert!(ta_triple(&zm, &zp, &ap).unwrap());
        assert!(!ta_triple(&zp, &zm, &ap).unwrap());
        assert!(matches!(ta_triple(&zm, &zm, &ap), Err(Error::NotDistinct(_))));
        // α ≈ 0.618, 2α mod 1 ≈ 0.236, 0: the circle order is 0 < 2α < α.
        let a2 = pt(0, 2, Sign::Plus);
        assert!(!ta_triple(&ap, &a2, &zm).unwrap());
        assert!(ta_triple(&a2, &ap, &zm).unwrap());
    }

    #[test]
    fn apply_examples() {
        assert_eq!(sturmian_apply(&Sigma(1), &pt(0, 0, Sign::Plus)), pt(0, 1, Sign::Plus));
        let beta = pt(2, -3, Sign::Plus);
        assert_eq!(sturmian_apply(&pe(0, Sign::Minus), &beta), pt(2, -3, Sign::Minus));
        let gamma = SturmianElt::p(QuadIrr::from_fracs(1, 3, 0, 1), Sign::Minus);
        let image = sturmian_apply(&gamma, &beta);
        assert_eq!(image.side(), Sign::Plus);
        assert!(!image.beta().in_a());
    }

    #[test]
    fn compose_examples() {
        assert_eq!(sturmian_compose(&Sigma(2), &Sigma(3)), Sigma(5));
        let g = QuadIrr::from_fracs(1, 5, 0, 1);
        let d = QuadIrr::from_fracs(0, 1, 2, 7);
        let lhs = sturmian_compose(&SturmianElt::p(g.clone(), Sign::Plus), &SturmianElt::p(d.clone(), Sign::Minus));
        assert_eq!(lhs, SturmianElt::p(&g + &d, Sign::Plus));
        assert_eq!(
            sturmian_compose(&Sigma(4), &SturmianElt::p(g.clone(), Sign::Minus)),
            SturmianElt::p(&g + &QuadIrr::from_ints(0, 4), Sign::Minus)
        );
    }

    #[test]
    fn golden_laws_hold() {
        for r in verify_composition_laws(500, 42) {
            assert!(r.holds(), "{}: {:?}", r.law, r.witness);
            assert_eq!(r.samples, 500);
        }
    }

    #[test]
    fn fake_law_is_caught() {
        let fake = |u: &SturmianElt, v: &SturmianElt| match (u, v) {
            (P { gamma, sign }, P { .. }) => P {
                gamma: gamma.clone(),
                sign: *sign,
            },
            _ => sturmian_compose(u, v),
        };
        let reports = verify_composition_laws_with(200, 7, fake);
        assert!(reports[..3].iter().all(LawReport::holds));
        assert!(reports[3].witness.is_some());
    }

    #[test]
    fn sigma_is_isolated_between_its_p_neighbours() {
        for n in -50..=50 {
            let (lo, hi) = (pe(n, Sign::Minus), pe(n, Sign::Plus));
            assert!(sturmian_etriple(&lo, &Sigma(n), &hi).unwrap(), "n = {n}");
        }
        let mut sampler = Sampler::new(3);
        let pool = sampler.distinct_elements(60);
        let (lo, hi) = (pe(3, Sign::Minus), pe(3, Sign::Plus));
        for e in pool.iter().filter(|e| ![&lo, &hi, &Sigma(3)].contains(e)) {
            assert!(!sturmian_etriple(&lo, e, &hi).unwrap(), "{e}");
        }
        assert!(matches!(sturmian_etriple(&lo, &lo, &hi), Err(Error::NotDistinct(_))));
    }

    #[test]
    fn corder_matches_etriple() {
        let pool = Sampler::new(11).distinct_elements(14);
        let c = sturmian_corder(pool.clone()).unwrap();
        for a in &pool {
            for b in &pool {
                for d in &pool {
                    if a != b && b != d && a != d {
                        assert_eq!(c.holds(a, b, d), sturmian_etriple(a, b, d).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn ideal_examples() {
        let mut samples = vec![pe(0, Sign::Minus), pe(0, Sign::Plus), pe(1, Sign::Minus), pe(1, Sign::Plus)];
        samples.extend((0..=3).map(Sigma));
        let r = verify_minimal_ideal(&samples);
        assert!(r.minimal_left_ideal_confirmed());
        assert!(r.note.is_none());
        // Right multiplication keeps the left factor's sign.
        assert!(!r.right_minimal.holds());

        let sigmas: Vec<SturmianElt> = (0..4).map(Sigma).collect();
        let r = verify_minimal_ideal(&sigmas);
        assert_eq!(r.note.as_deref(), Some("no ideal elements sampled"));
        assert!(!r.minimal_left_ideal_confirmed());

        let fake = |u: &SturmianElt, v: &SturmianElt| match (u, v) {
            (Sigma(_), P { .. }) => Sigma(0),
            _ => sturmian_compose(u, v),
        };
        let r = verify_minimal_ideal_with(&samples, fake);
        assert!(matches!(r.left_closed, Verdict::Fails((Sigma(_), P { .. }))));
    }

    #[test]
    fn translations_are_cop() {
        let mut sampler = Sampler::new(5);
        let pool = sampler.distinct_elements(30);
        let triples = sample_etriples(&pool, 100, 9).unwrap();
        let gamma = QuadIrr::from_fracs(1, 7, 3, 4);
        for u in [Sigma(1), Sigma(0), Sigma(-5), SturmianElt::p(gamma.clone(), Sign::Plus), SturmianElt::p(gamma, Sign::Minus)] {
            let r = translation_cop_report(&u, &triples).unwrap();
            assert!(r.holds(), "{u}: {r:?}");
        }
        let bad = vec![(pe(3, Sign::Plus), Sigma(3), pe(3, Sign::Minus))];
        assert!(matches!(verify_translation_cop(&Sigma(1), &bad), Err(Error::Hypothesis(_))));
    }
}
