//! Self-test battery: each suite re-derives a family of facts at desk scale
//! and reports one result per check.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::cop::{all_maps, cop_check, cop_conditions};
use crate::ellis::cascade::{cascade_elements, cascade_window};
use crate::ellis::sturmian::{
    sample_etriples, translation_cop_report, verify_composition_laws, Sampler,
};
use crate::ellis::{
    cascade_apply, cascade_compose, ellis_linear_order, qi_sign, sturmian_etriple, verify_minimal_ideal, Cascade,
    CascadeElt, EllisOrder, FiniteChain, QuadIrr, SelfMap, Sign, SturmianElt,
};
use crate::io::{Document, Family, Resolver};
use crate::error::{Error, Result};
use crate::groups::{corpus, finite_lcord_decide, left_invariance_check, GroupTable, LcordDecision};
use crate::inverse_limit::{bonding_map, build_cycle_cover, build_tower, induced_quotient_action, CycleCover};
use crate::io::{parse_document, to_json, CheckResult, Lbl, Report, ScenarioDoc};
use crate::lex::FiberedLift;
use crate::orders::{circularize, cut_order, verify_circular_axioms, verify_cut, CircOrder, LinOrder, TernaryRelation};
use crate::{Bounds, Label};

pub const SUITES: &[&str] = &[
    "axioms", "cuts", "cop", "lift", "lcord", "limits", "ellis", "sturmian", "qisign", "fixtures",
];

pub const DEFAULT_SEED: u64 = 42;

/// Bundled fixtures with whether `verify` should accept them.
pub const FIXTURES: &[(&str, &str, bool)] = &[
    ("asymmetry.ternary.json", include_str!("../fixtures/asymmetry.ternary.json"), false),
    ("bad.group.json", include_str!("../fixtures/bad.group.json"), false),
    ("broken.scenario.json", include_str!("../fixtures/broken.scenario.json"), false),
    ("c3.corder.json", include_str!("../fixtures/c3.corder.json"), true),
    ("c3_doubled.lift.json", include_str!("../fixtures/c3_doubled.lift.json"), true),
    ("c5.ternary.json", include_str!("../fixtures/c5.ternary.json"), true),
    ("c5_at_2.cut.json", include_str!("../fixtures/c5_at_2.cut.json"), true),
    ("c5_bad.cut.json", include_str!("../fixtures/c5_bad.cut.json"), false),
    ("c6.corder.json", include_str!("../fixtures/c6.corder.json"), true),
    ("cascade.scenario.json", include_str!("../fixtures/cascade.scenario.json"), true),
    ("chain4.linorder.json", include_str!("../fixtures/chain4.linorder.json"), true),
    ("d4.group.json", include_str!("../fixtures/d4.group.json"), true),
    ("fold.map.json", include_str!("../fixtures/fold.map.json"), false),
    ("halving.map.json", include_str!("../fixtures/halving.map.json"), true),
    ("saturating.scenario.json", include_str!("../fixtures/saturating.scenario.json"), true),
    ("sturmian.scenario.json", include_str!("../fixtures/sturmian.scenario.json"), true),
    ("trivial.group.json", include_str!("../fixtures/trivial.group.json"), true),
    ("trivial.scenario.json", include_str!("../fixtures/trivial.scenario.json"), true),
    ("z3.group.json", include_str!("../fixtures/z3.group.json"), true),
    ("z3_rotation.action.json", include_str!("../fixtures/z3_rotation.action.json"), true),
    ("z6.group.json", include_str!("../fixtures/z6.group.json"), true),
    ("z6_generator.grouporder.json", include_str!("../fixtures/z6_generator.grouporder.json"), true),
    ("z6_on_c3.action.json", include_str!("../fixtures/z6_on_c3.action.json"), true),
    ("z6_scrambled.grouporder.json", include_str!("../fixtures/z6_scrambled.grouporder.json"), false),
    ("z8.group.json", include_str!("../fixtures/z8.group.json"), true),
];

/// Runs one suite, or every suite for `"all"`, with per-suite timing.
pub fn run(suite: &str, seed: u64, bounds: &Bounds) -> Result<Report> {
    let names: Vec<&'static str> = if suite == "all" {
        SUITES.to_vec()
    } else if let Some(&name) = SUITES.iter().find(|&&s| s == suite) {
        vec![name]
    } else {
        return Err(Error::Input(format!("unknown suite {suite}; expected one of {} or all", SUITES.join(", "))));
    };
    let mut report = Report::new(format!("selftest {suite}"));
    report.seed = Some(seed);
    let timed = |name: &'static str| {
        let start = Instant::now();
        let r = run_suite(name, seed, bounds);
        (name, r, start.elapsed().as_millis() as u64)
    };
    // With spare cores the suites run concurrently; results keep suite order.
    let parallel = std::thread::available_parallelism().is_ok_and(|n| n.get() > 1);
    let outcomes: Vec<(&str, Result<Vec<CheckResult>>, u64)> = if parallel {
        std::thread::scope(|scope| {
            let handles: Vec<_> = names.iter().map(|&name| scope.spawn(move || timed(name))).collect();
            handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
        })
    } else {
        names.iter().map(|&name| timed(name)).collect()
    };
    for (name, results, ms) in outcomes {
        report.timing_ms.insert(name.to_string(), ms);
        report.extend(results?.into_iter().map(|mut r| {
            r.name = format!("{name}: {}", r.name);
            r
        }));
    }
    Ok(report)
}

pub fn run_suite(name: &str, seed: u64, bounds: &Bounds) -> Result<Vec<CheckResult>> {
    match name {
        "axioms" => axioms_suite(),
        "cuts" => cuts_suite(),
        "cop" => cop_suite(),
        "lift" => lift_suite(),
        "lcord" => lcord_suite(),
        "limits" => limits_suite(seed, 10, 200),
        "ellis" => ellis_suite(),
        "sturmian" => sturmian_suite(500, seed, 50, 40, 100),
        "qisign" => qisign_suite(seed, 100_000),
        "fixtures" => fixtures_suite(bounds),
        other => Err(Error::Input(format!("unknown suite {other}"))),
    }
}

/// Every cyclic arrangement of `0..n`, as a sequence starting at 0.
fn canonical_sequences(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    (1..n)
        .permutations(n - 1)
        .map(|p| std::iter::once(0).chain(p).collect())
        .collect()
}

/// Ternary relations on `0..n` whose triples have distinct entries and are
/// closed under rotation: per 3-subset, one of four choices.
fn rotation_closed_relations(n: usize) -> impl Iterator<Item = TernaryRelation<usize>> {
    let subsets: Vec<Vec<usize>> = (0..n).combinations(3).collect();
    let total = 4usize.pow(subsets.len() as u32);
    (0..total).map(move |code| {
        let mut triples = Vec::new();
        let mut c = code;
        for s in &subsets {
            let (a, b, d) = (s[0], s[1], s[2]);
            let choice = c % 4;
            c /= 4;
            if choice & 1 != 0 {
                triples.extend([(a, b, d), (b, d, a), (d, a, b)]);
            }
            if choice & 2 != 0 {
                triples.extend([(a, d, b), (d, b, a), (b, a, d)]);
            }
        }
        TernaryRelation::new(0..n, triples).expect("labels in range")
    })
}

fn axioms_suite() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for n in 1..=5 {
        let mut bad = None;
        for seq in canonical_sequences(n) {
            let c = CircOrder::from_cycle(seq.clone())?;
            match verify_circular_axioms(&c.relation())?.into_order() {
                Some(back) if back == c => {}
                _ => {
                    bad = Some(format!("{seq:?}"));
                    break;
                }
            }
        }
        out.push(CheckResult::from_bool(format!("canonical sequences on {n} labels are valid"), bad.is_none(), || {
            bad.unwrap()
        }));
    }
    for n in 1..=5 {
        let seqs = canonical_sequences(n);
        let expected: BTreeSet<BTreeSet<(usize, usize, usize)>> = seqs
            .iter()
            .map(|s| CircOrder::from_cycle(s.clone()).map(|c| c.relation().triples().clone()))
            .collect::<Result<_>>()?;
        let mut valid = BTreeSet::new();
        for rel in rotation_closed_relations(n) {
            if verify_circular_axioms(&rel)?.is_valid() {
                valid.insert(rel.triples().clone());
            }
        }
        out.push(CheckResult::from_bool(
            format!("valid relations on {n} labels are exactly the (n-1)! orders"),
            valid == expected && expected.len() == seqs.len() && seqs.len() == (1..n).product::<usize>().max(1),
            || format!("found {}, expected {}", valid.len(), expected.len()),
        ));
    }
    Ok(out)
}

fn cuts_suite() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for n in 1..=6 {
        let mut bad = None;
        'outer: for seq in canonical_sequences(n) {
            let c = CircOrder::from_cycle(seq)?;
            for z in c.labels() {
                let l = cut_order(&c, z)?;
                if circularize(&l) != c || !verify_cut(&c, &l)? {
                    bad = Some(format!("{c:?} at {z}"));
                    break 'outer;
                }
            }
        }
        out.push(CheckResult::from_bool(format!("cut round trip on {n} labels"), bad.is_none(), || bad.unwrap()));
    }
    Ok(out)
}

fn cop_suite() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for m in 1..=5 {
        for n in 1..=5 {
            let (cm, cn) = (CircOrder::<usize>::standard(m), CircOrder::<usize>::standard(n));
            let mut bad = None;
            let mut checked = 0usize;
            for f in all_maps(cm.labels(), cn.labels()) {
                let image: BTreeSet<&usize> = f.values().collect();
                if image.len() < 3 {
                    continue;
                }
                checked += 1;
                let c = cop_conditions(&f, &cm, &cn)?;
                if c.triple_failure.is_none() && c.fiber_failure.is_some() {
                    bad = Some(format!("{f:?}"));
                    break;
                }
            }
            if checked > 0 {
                out.push(
                    CheckResult::from_bool(format!("C{m} -> C{n}: condition (1) implies (2)"), bad.is_none(), || {
                        bad.unwrap()
                    })
                    .with_detail(json!({ "maps_with_image_ge_3": checked })),
                );
            }
        }
    }
    Ok(out)
}

/// Every surjection `0..nx -> 0..ny` with every choice of fiber orders.
pub fn all_lift_inputs(nx: usize, ny: usize) -> Vec<(BTreeMap<usize, usize>, BTreeMap<usize, LinOrder<usize>>)> {
    let xs: Vec<usize> = (0..nx).collect();
    let ys: Vec<usize> = (0..ny).collect();
    let mut out = Vec::new();
    for q in all_maps(&xs, &ys) {
        let image: BTreeSet<&usize> = q.values().collect();
        if image.len() != ny {
            continue;
        }
        let fibers: Vec<Vec<usize>> = ys
            .iter()
            .map(|y| q.iter().filter(|(_, v)| *v == y).map(|(x, _)| *x).collect())
            .collect();
        let choices: Vec<Vec<Vec<usize>>> = fibers.iter().map(|f| f.iter().copied().permutations(f.len()).collect()).collect();
        for pick in choices.iter().map(|c| c.iter()).multi_cartesian_product() {
            let orders = ys
                .iter()
                .zip(pick)
                .map(|(y, l)| (*y, LinOrder::new(l.clone()).expect("distinct")))
                .collect();
            out.push((q.clone(), orders));
        }
    }
    out
}

fn lift_suite() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for ny in 1..=3 {
        for nx in ny..=5 {
            let base = CircOrder::<usize>::standard(ny);
            let mut bad = None;
            let inputs = all_lift_inputs(nx, ny);
            for (q, fibers) in &inputs {
                let lift = FiberedLift::new(q.clone(), base.clone(), fibers.clone())?;
                let rel = TernaryRelation::from_predicate(0..nx, |a, b, c| lift.holds(a, b, c));
                let ok = verify_circular_axioms(&rel)?.is_valid()
                    && lift.fiber_compatibility().holds()
                    && lift.quotient_verdict()?.is_cop();
                if !ok {
                    bad = Some(format!("q = {q:?}, fibers = {fibers:?}"));
                    break;
                }
            }
            out.push(
                CheckResult::from_bool(format!("lifts of {nx} points over C{ny}"), bad.is_none(), || bad.unwrap())
                    .with_detail(json!({ "inputs": inputs.len() })),
            );
        }
    }
    Ok(out)
}

/// Cyclic iff the powers of some element exhaust the group.
fn is_cyclic_by_powers<T: Label>(g: &GroupTable<T>) -> bool {
    g.elements().iter().any(|x| {
        let mut seen = BTreeSet::new();
        let mut p = g.identity().clone();
        while seen.insert(p.clone()) {
            p = g.mul(&p, x).clone();
        }
        seen.len() == g.order()
    })
}

fn lcord_suite() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for (name, g) in corpus() {
        let decision = finite_lcord_decide(&g)?;
        let oracle = is_cyclic_by_powers(&g);
        let certified = match &decision {
            LcordDecision::Cyclic { certificate, .. } => left_invariance_check(&g, certificate)?.holds(),
            LcordDecision::NotCyclic { .. } => true,
        };
        out.push(CheckResult::from_bool(
            format!("{name}: decision matches cyclicity"),
            decision.is_yes() == oracle && certified,
            || format!("decided {}, cyclic {oracle}, certificate ok {certified}", decision.is_yes()),
        ));
    }
    Ok(out)
}

/// Host circular order on `0..n` in a seeded random arrangement.
fn random_host(n: usize, rng: &mut ChaCha8Rng) -> CircOrder<usize> {
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    CircOrder::from_cycle(labels).expect("distinct")
}

/// A random nonempty subset of `pool`.
fn random_subset(pool: &[usize], rng: &mut ChaCha8Rng) -> Vec<usize> {
    loop {
        let s: Vec<usize> = pool.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

/// Rotations of a host, as maps.
pub fn rotations<T: Label>(host: &CircOrder<T>) -> Vec<BTreeMap<T, T>> {
    let l = host.labels();
    (0..l.len())
        .map(|k| (0..l.len()).map(|i| (l[i].clone(), l[(i + k) % l.len()].clone())).collect())
        .collect()
}

/// In host order.
fn host_sorted(host: &CircOrder<usize>, s: &[usize]) -> Vec<usize> {
    host.labels().iter().copied().filter(|x| s.contains(x)).collect()
}

/// Checks on one chain `F0 <= F1 <= F2`: coherence, COP verdicts, block
/// counts, composition and equivariance over every rotation.
fn limits_instance(host: &CircOrder<usize>, fs: [&[usize]; 3]) -> Result<Option<String>> {
    let covers: Vec<CycleCover<usize>> = fs.iter().map(|f| build_cycle_cover(host, &host_sorted(host, f))).collect::<Result<_>>()?;
    for (c, f) in covers.iter().zip(fs) {
        if c.quotient().len() > 2 * f.len() {
            return Ok(Some(format!("|X_F| > 2m for {f:?}")));
        }
        if !cop_check(c.projection(), host, c.quotient())?.is_cop() {
            return Ok(Some(format!("projection for {f:?} not COP")));
        }
    }
    let f21 = bonding_map(&covers[2], &covers[1])?;
    let f10 = bonding_map(&covers[1], &covers[0])?;
    let f20 = bonding_map(&covers[2], &covers[0])?;
    for f in [&f21, &f10, &f20] {
        if !f.is_cop() || !f.is_onto() {
            return Ok(Some("bonding map not COP onto".into()));
        }
    }
    for x in host.labels() {
        if f21.table()[&covers[2].projection()[x]] != covers[1].projection()[x] {
            return Ok(Some(format!("f o pi != pi at {x}")));
        }
    }
    for b in covers[2].blocks() {
        if f20.table()[b] != f10.table()[&f21.table()[b]] {
            return Ok(Some(format!("composition fails at {b:?}")));
        }
    }
    for g in rotations(host) {
        let (g2c, g2) = induced_quotient_action(&g, &covers[2])?;
        let (g1c, g1) = induced_quotient_action(&g, &covers[1])?;
        let fg = bonding_map(&g2c, &g1c)?;
        if let Some(b) = covers[2]
            .blocks()
            .iter()
            .find(|b| fg.table()[&g2.table()[*b]] != g1.table()[&f21.table()[*b]])
        {
            return Ok(Some(format!("equivariance fails for {g:?} at {b:?}")));
        }
    }
    Ok(None)
}

/// `pairs` random chains of cycles per host size `1..=max_n`.
pub fn limits_suite(seed: u64, max_n: usize, pairs: usize) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for n in 1..=max_n {
        let host = random_host(n, &mut rng);
        let all: Vec<usize> = (0..n).collect();
        let mut bad = None;
        for _ in 0..pairs {
            let f2 = random_subset(&all, &mut rng);
            let f1 = random_subset(&f2, &mut rng);
            let f0 = random_subset(&f1, &mut rng);
            if let Some(w) = limits_instance(&host, [&f0, &f1, &f2])? {
                bad = Some(w);
                break;
            }
        }
        let tower = build_tower(&host, &[vec![host.labels()[0]], host.labels().to_vec()], 16)?;
        let threads_ok = tower.verify().is_ok() && tower.coherent_threads().len() == n;
        out.push(CheckResult::from_bool(format!("host of {n} points, {pairs} cycle chains"), bad.is_none(), || {
            bad.unwrap()
        }));
        out.push(CheckResult::from_bool(format!("host of {n} points: threads of the full tower"), threads_ok, || {
            "thread count differs from host size".into()
        }));
    }
    Ok(out)
}

/// Enveloping-semigroup order checks shared by the suites and scenario verification.
pub fn ellis_order_results<E: Label>(name: &str, o: &EllisOrder<E>) -> Vec<CheckResult> {
    let w = |v: Option<String>| v.unwrap_or_default();
    vec![
        CheckResult::from_bool(format!("{name}: total"), o.is_total(), || w(o.total.witness().map(|p| format!("{p:?}")))),
        CheckResult::from_bool(format!("{name}: antisymmetric"), o.antisymmetric.holds(), || {
            w(o.antisymmetric.witness().map(|p| format!("{p:?}")))
        }),
        CheckResult::from_bool(format!("{name}: right invariant"), o.right_invariant.holds(), || {
            w(o.right_invariant.witness().map(|p| format!("{p:?}")))
        }),
        CheckResult::from_bool(format!("{name}: left invariant"), o.left_invariant.holds(), || {
            w(o.left_invariant.witness().map(|p| format!("{p:?}")))
        }),
        CheckResult::from_bool(
            format!("{name}: j is an order embedding"),
            o.j_embedding.as_ref().is_none_or(|v| v.holds()),
            || w(o.j_embedding.as_ref().and_then(|v| v.witness()).map(|p| format!("{p:?}"))),
        ),
    ]
}

/// The cascade instance: translations `|n| <= radius` and both limits on
/// `[-window, window]` with endpoints.
pub fn cascade_results(radius: i64, window: i64) -> Result<Vec<CheckResult>> {
    let elts = cascade_elements(radius);
    let pts = cascade_window(window);
    let mut bad = None;
    'outer: for &u in &elts {
        for &v in &elts {
            let uv = cascade_compose(u, v);
            if let Some(x) = pts.iter().find(|&&x| cascade_apply(uv, x) != cascade_apply(u, cascade_apply(v, x))) {
                bad = Some(format!("{u} o {v} at {x}"));
                break 'outer;
            }
        }
    }
    let mut out = vec![CheckResult::from_bool("cascade table matches evaluation", bad.is_none(), || bad.unwrap())];
    let group: Vec<CascadeElt> = (-radius..=radius).map(CascadeElt::Trans).collect();
    let o = ellis_linear_order(&Cascade, &pts, &elts, Some(&group))?;
    let expected_chain = o.order.as_ref().is_some_and(|l| l.labels() == elts.as_slice());
    out.push(CheckResult::from_bool("cascade: LimMinus < Trans(n) < LimPlus", expected_chain, || {
        format!("{:?}", o.order)
    }));
    out.extend(ellis_order_results("cascade", &o));
    Ok(out)
}

/// A finite scenario: named self-maps of a chain and optional group list.
/// A rejected hypothesis yields a failed check with the witness.
pub fn finite_scenario_results(name: &str, s: &ScenarioDoc) -> Result<Vec<CheckResult>> {
    let chain = s.chain.clone().ok_or_else(|| Error::Input("finite scenario needs a chain".into()))?;
    let named = s.elements.clone().ok_or_else(|| Error::Input("finite scenario needs elements".into()))?;
    let order = LinOrder::new(chain.clone())?;
    let mut maps: BTreeMap<String, SelfMap<Lbl>> = BTreeMap::new();
    for (k, images) in &named {
        if images.len() != chain.len() {
            return Err(Error::Input(format!("map {k} has {} images for {} points", images.len(), chain.len())));
        }
        for y in images {
            if !order.contains(y) {
                return Err(Error::ImageOutsideCodomain(format!("{y:?}")));
            }
        }
        maps.insert(k.clone(), chain.iter().cloned().zip(images.iter().cloned()).collect());
    }
    let group: Option<Vec<SelfMap<Lbl>>> = s
        .group
        .as_ref()
        .map(|g| {
            g.iter()
                .map(|k| maps.get(k).cloned().ok_or_else(|| Error::UnknownLabel(k.clone())))
                .collect::<Result<_>>()
        })
        .transpose()?;
    let elements: Vec<SelfMap<Lbl>> = maps.values().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let sys = FiniteChain { order };
    match ellis_linear_order(&sys, &chain, &elements, group.as_deref()) {
        Ok(o) => Ok(ellis_order_results(name, &o)),
        Err(Error::Hypothesis(w)) => Ok(vec![CheckResult::fail(format!("{name}: strong monotonicity"), w)]),
        Err(e) => Err(e),
    }
}

fn ellis_suite() -> Result<Vec<CheckResult>> {
    let mut out = cascade_results(10, 100)?;
    for (name, text, expected) in FIXTURES.iter().filter(|f| f.0.ends_with(".scenario.json")) {
        let doc = parse_document(text)?;
        let Document::Scenario(s) = doc.body else { continue };
        if s.family != Family::Finite {
            continue;
        }
        let rs = finite_scenario_results(name, &s)?;
        let accepted = rs.iter().all(|r| r.passed);
        let witness = rs.iter().find_map(|r| r.witness.clone());
        out.push(CheckResult::from_bool(
            format!("{name}: {}", if *expected { "accepted" } else { "rejected with a witness" }),
            accepted == *expected && (accepted || witness.is_some()),
            || format!("accepted = {accepted}, witness = {witness:?}"),
        ));
    }
    Ok(out)
}

fn p_at(n: i64, sign: Sign) -> SturmianElt {
    SturmianElt::p(QuadIrr::from_ints(0, n), sign)
}

/// The Sturmian checks: composition laws, isolation of `Sigma(n)`, minimal
/// ideal closure and translation COP.
pub fn sturmian_suite(
    samples: usize,
    seed: u64,
    range: i64,
    ideal_sample: usize,
    triples: usize,
) -> Result<Vec<CheckResult>> {
    let mut out: Vec<CheckResult> = verify_composition_laws(samples, seed)
        .into_iter()
        .map(|r| {
            CheckResult::from_bool(r.law, r.holds(), || r.witness.clone().unwrap_or_default())
                .with_detail(json!({ "samples": r.samples, "seed": r.seed }))
        })
        .collect();

    let mut sampler = Sampler::new(seed ^ 0x5eed);
    let pool = sampler.distinct_elements(60);
    let mut bad = None;
    for n in -range..=range {
        let (lo, hi) = (p_at(n, Sign::Minus), p_at(n, Sign::Plus));
        if !sturmian_etriple(&lo, &SturmianElt::Sigma(n), &hi)? {
            bad = Some(format!("[P(na,-), Sigma({n}), P(na,+)] fails"));
            break;
        }
        let intruder = pool
            .iter()
            .filter(|e| **e != lo && **e != hi && **e != SturmianElt::Sigma(n))
            .find(|e| sturmian_etriple(&lo, e, &hi).unwrap_or(true));
        if let Some(e) = intruder {
            bad = Some(format!("{e} lies between the neighbours of Sigma({n})"));
            break;
        }
    }
    out.push(CheckResult::from_bool(format!("Sigma(n) isolated for |n| <= {range}"), bad.is_none(), || bad.unwrap()));

    let mut ideal_pool = Vec::with_capacity(ideal_sample);
    while ideal_pool.len() < ideal_sample {
        let e = if ideal_pool.len() % 2 == 0 { sampler.ideal() } else { sampler.sigma() };
        if !ideal_pool.contains(&e) {
            ideal_pool.push(e);
        }
    }
    let r = verify_minimal_ideal(&ideal_pool);
    out.push(
        CheckResult::from_bool(
            format!("minimal left ideal on {ideal_sample} elements"),
            r.minimal_left_ideal_confirmed(),
            || format!("{r:?}"),
        )
        .with_detail(json!({
            "left_closed": r.left_closed.holds(),
            "right_closed": r.right_closed.holds(),
            "left_minimal": r.left_minimal.holds(),
            "right_minimal": r.right_minimal.holds(),
        })),
    );

    let triple_pool = sampler.distinct_elements(40);
    let gamma = sampler.quad();
    let translations = [
        SturmianElt::Sigma(0),
        SturmianElt::Sigma(1),
        SturmianElt::Sigma(-3),
        SturmianElt::p(gamma.clone(), Sign::Plus),
        SturmianElt::p(gamma, Sign::Minus),
    ];
    for (k, u) in translations.iter().enumerate() {
        let ts = sample_etriples(&triple_pool, triples, seed.wrapping_add(k as u64))?;
        let r = translation_cop_report(u, &ts)?;
        out.push(CheckResult::from_bool(format!("translations by {u} are COP on {triples} triples"), r.holds(), || {
            format!("{r:?}")
        }));
    }
    Ok(out)
}

/// `floor(α · 10^30)`; the test suite re-derives it from `x² + x − 1`.
pub const ALPHA_E30: i128 = 618_033_988_749_894_848_204_586_834_365;
pub const E30: i128 = 1_000_000_000_000_000_000_000_000_000_000;

/// Sign of `p + qα` by fixed-point interval arithmetic, `None` when the
/// interval straddles zero.
pub fn interval_sign(p: i64, q: i64) -> Option<i8> {
    let (p, q) = (p as i128, q as i128);
    let a = q * ALPHA_E30;
    let b = q * (ALPHA_E30 + 1);
    let lo = p * E30 + a.min(b);
    let hi = p * E30 + a.max(b);
    if lo > 0 {
        Some(1)
    } else if hi < 0 {
        Some(-1)
    } else {
        None
    }
}

pub fn qisign_suite(seed: u64, samples: usize) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = None;
    let mut ambiguous = 0usize;
    for _ in 0..samples {
        let p: i64 = rng.random_range(-1_000_000..=1_000_000);
        let q: i64 = rng.random_range(-1_000_000..=1_000_000);
        let exact = qi_sign(&QuadIrr::from_ints(p, q));
        let agree = match interval_sign(p, q) {
            Some(s) => s == exact,
            None => {
                ambiguous += 1;
                (exact == 0) == (p == 0 && q == 0)
            }
        };
        if !agree {
            bad = Some(format!("p = {p}, q = {q}: exact {exact}"));
            break;
        }
    }
    let zero_ok = qi_sign(&QuadIrr::zero()) == 0
        && [(1, 0), (0, 1), (-1, 0), (0, -1), (-34, 55), (21, -34)]
            .iter()
            .all(|&(p, q)| qi_sign(&QuadIrr::from_ints(p, q)) != 0);
    Ok(vec![
        CheckResult::from_bool(format!("agreement with interval arithmetic on {samples} inputs"), bad.is_none(), || {
            bad.unwrap()
        })
        .with_detail(json!({ "ambiguous": ambiguous })),
        CheckResult::from_bool("zero exactly at p = q = 0", zero_ok, || "nonzero input with sign 0".into()),
    ])
}

fn fixtures_suite(bounds: &Bounds) -> Result<Vec<CheckResult>> {
    let resolver = Resolver::bundled(FIXTURES.iter().map(|(n, t, _)| (*n, *t)));
    let mut out = Vec::new();
    for (name, text, expected) in FIXTURES {
        let doc = parse_document(text)?;
        let again = parse_document(&to_json(&doc))?;
        out.push(CheckResult::from_bool(format!("{name}: parse/serialize round trip"), again == doc, || {
            "documents differ".into()
        }));
        let verdict = match crate::cli::verify_document(&doc, &resolver, bounds) {
            Ok(r) => r.ok,
            Err(e) if e.is_input_error() => {
                out.push(CheckResult::fail(format!("{name}: verify"), format!("input error: {e}")));
                continue;
            }
            Err(_) => false,
        };
        out.push(CheckResult::from_bool(
            format!("{name}: verify {}", if *expected { "accepts" } else { "rejects" }),
            verdict == *expected,
            || format!("verify returned ok = {verdict}"),
        ));
    }
    Ok(out)
}
