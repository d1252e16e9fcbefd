use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use cyclord::cop::{cop_check, cop_conditions, CopMap};
use cyclord::ellis::sturmian::Sampler;
use cyclord::ellis::{cascade_compose, qi_sign, sturmian_compose, CascadeElt, QuadIrr};
use cyclord::groups::{cyclic, direct_product, finite_lcord_decide, left_invariance_check, LcordDecision};
use cyclord::inverse_limit::{build_cycle_cover, build_tower, join_cycles};
use cyclord::io::{parse_document, to_json, CorderDoc, Document, InputDocument, Lbl};
use cyclord::lex::{fibered_lift, lex_circ_lin, FiberedLift};
use cyclord::orders::{
    circularize, cut_from_subset, cut_order, interval, is_convex, verify_circular_axioms, verify_cut, IntervalKind,
};
use cyclord::{CircOrder, LinOrder};

fn circ(max: usize) -> impl Strategy<Value = CircOrder<usize>> {
    (1..=max)
        .prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| CircOrder::from_cycle(v).unwrap())
}

fn lin(max: usize) -> impl Strategy<Value = LinOrder<usize>> {
    (1..=max)
        .prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| LinOrder::new(v).unwrap())
}

/// A total map `C_m -> C_n` as an image vector.
fn map_between(max: usize) -> impl Strategy<Value = (usize, usize, Vec<usize>)> {
    (1..=max, 1..=max).prop_flat_map(|(m, n)| (Just(m), Just(n), proptest::collection::vec(0..n, m)))
}

fn quad() -> impl Strategy<Value = QuadIrr> {
    (-10_000i64..10_000, 1i64..50, -10_000i64..10_000, 1i64..50)
        .prop_map(|(a, b, c, d)| QuadIrr::from_fracs(a, b, c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cut_round_trip_and_finite_completeness(c in circ(9)) {
        for z in c.labels() {
            let cut = cut_order(&c, z).unwrap();
            prop_assert_eq!(circularize(&cut), c.clone());
            prop_assert!(verify_cut(&c, &cut).unwrap());
            prop_assert_eq!(cut.least(), Some(z));
            prop_assert!(cut.greatest().is_some());
        }
    }

    #[test]
    fn canonical_orders_pass_the_axioms(c in circ(9)) {
        let back = verify_circular_axioms(&c.relation()).unwrap().into_order();
        prop_assert_eq!(back, Some(c.clone()));
        prop_assert_eq!(c.labels()[0], *c.labels().iter().min().unwrap());
    }

    #[test]
    fn interval_complements(c in circ(8), i in 0usize..8, j in 0usize..8) {
        let l = c.labels();
        let (a, b) = (&l[i % l.len()], &l[j % l.len()]);
        prop_assume!(a != b);
        let all = c.label_set();
        let open = interval(&c, a, b, IntervalKind::Open).unwrap();
        let closed_back = interval(&c, b, a, IntervalKind::Closed).unwrap();
        prop_assert!(open.is_disjoint(&closed_back));
        prop_assert_eq!(open.union(&closed_back).cloned().collect::<BTreeSet<_>>(), all.clone());
        let lc = interval(&c, a, b, IntervalKind::LeftClosed).unwrap();
        let lc_back = interval(&c, b, a, IntervalKind::LeftClosed).unwrap();
        prop_assert!(lc.is_disjoint(&lc_back));
        prop_assert_eq!(lc.len() + lc_back.len(), all.len());
        for x in &open {
            prop_assert!(c.holds(a, x, b));
        }
        prop_assert!(is_convex(&c, &open) && is_convex(&c, &closed_back));
    }

    #[test]
    fn cut_from_subset_gives_cuts(c in circ(8), k in 0usize..8, mask in any::<u8>()) {
        let z = &c.labels()[k % c.len()];
        let order = cut_order(&c, z).unwrap();
        let subset: BTreeSet<usize> = c.labels().iter().copied().filter(|x| mask >> (x % 8) & 1 == 1).collect();
        let cut = cut_from_subset(&c, &order, &subset).unwrap();
        prop_assert!(verify_cut(&c, cut.order()).unwrap());
        prop_assert!(!cut.is_gap());
    }

    #[test]
    fn fiber_condition_is_convexity((m, n, img) in map_between(6)) {
        let (cm, cn) = (CircOrder::<usize>::standard(m), CircOrder::<usize>::standard(n));
        let f: BTreeMap<usize, usize> = img.iter().copied().enumerate().collect();
        let conds = cop_conditions(&f, &cm, &cn).unwrap();
        let convex = (0..n).all(|y| {
            let fiber: BTreeSet<usize> = (0..m).filter(|&x| img[x] == y).collect();
            is_convex(&cm, &fiber)
        });
        prop_assert_eq!(conds.fiber_failure.is_none(), convex);
        if img.iter().collect::<BTreeSet<_>>().len() >= 3 && conds.triple_failure.is_none() {
            prop_assert!(conds.fiber_failure.is_none());
        }
    }

    #[test]
    fn cop_maps_compose((m, n, img) in map_between(5), k in 1usize..5, img2 in proptest::collection::vec(0usize..5, 5)) {
        let (cm, cn, ck) = (CircOrder::<usize>::standard(m), CircOrder::<usize>::standard(n), CircOrder::<usize>::standard(k));
        let g: BTreeMap<usize, usize> = img.iter().copied().enumerate().collect();
        let f: BTreeMap<usize, usize> = (0..n).map(|y| (y, img2[y % img2.len()] % k)).collect();
        let g = CopMap::new(cm.clone(), cn.clone(), g).unwrap();
        let f = CopMap::new(cn, ck.clone(), f).unwrap();
        prop_assume!(g.is_cop() && f.is_cop());
        let fg = cyclord::cop::compose(&f, &g).unwrap();
        let direct: BTreeMap<usize, usize> = (0..m).map(|x| (x, f.table()[&g.table()[&x]])).collect();
        prop_assert_eq!(fg.table(), &direct);
        prop_assert!(cop_check(&direct, &cm, &ck).unwrap().is_cop());
    }

    #[test]
    fn lex_product_is_the_constant_fiber_lift(c in circ(5), l in lin(4)) {
        let prod = lex_circ_lin(&c, &l).unwrap();
        prop_assert!(verify_circular_axioms(&prod.relation()).unwrap().is_valid());
        let proj: BTreeMap<(usize, usize), usize> = prod.labels().iter().map(|p| (*p, p.0)).collect();
        prop_assert!(cop_check(&proj, &prod, &c).unwrap().is_cop());
        let fibers = c
            .labels()
            .iter()
            .map(|a| (*a, LinOrder::new(l.labels().iter().map(|x| (*a, *x)).collect()).unwrap()))
            .collect();
        prop_assert_eq!(fibered_lift(proj, c.clone(), fibers).unwrap(), prod);
    }

    #[test]
    fn lifts_are_circular_orders(base in circ(4), assign in proptest::collection::vec(0usize..4, 1..9)) {
        let ny = base.len();
        let mut fibers: BTreeMap<usize, Vec<usize>> = (0..ny).map(|y| (y, vec![])).collect();
        for (x, y) in assign.iter().enumerate() {
            fibers.get_mut(&(y % ny)).unwrap().push(x);
        }
        prop_assume!(fibers.values().all(|f| !f.is_empty()));
        let fibers = fibers.into_iter().map(|(y, f)| (y, LinOrder::new(f).unwrap())).collect();
        let lift = FiberedLift::from_fibers(base, fibers).unwrap();
        let order = lift.to_circ_order().unwrap();
        prop_assert!(verify_circular_axioms(&order.relation()).unwrap().is_valid());
        prop_assert!(lift.fiber_compatibility().holds());
        prop_assert!(lift.quotient_verdict().unwrap().is_cop());
    }

    #[test]
    fn cyclic_groups_and_products(a in 1usize..7, b in 1usize..7) {
        let g = direct_product(&cyclic(a), &cyclic(b));
        let coprime = (1..=a.min(b)).filter(|d| a % d == 0 && b % d == 0).count() == 1;
        let d = finite_lcord_decide(&g).unwrap();
        prop_assert_eq!(d.is_yes(), coprime);
        if let LcordDecision::Cyclic { certificate, .. } = d {
            prop_assert!(left_invariance_check(&g, &certificate).unwrap().holds());
        }
    }

    #[test]
    fn covers_and_towers(host in circ(10), m1 in any::<u16>(), m2 in any::<u16>()) {
        let pick = |mask: u16| -> Vec<usize> {
            let v: Vec<usize> = host.labels().iter().copied().filter(|x| mask >> x & 1 == 1).collect();
            if v.is_empty() { vec![host.labels()[0]] } else { v }
        };
        let (f1, f2) = (pick(m1), pick(m2));
        for f in [&f1, &f2] {
            let c = build_cycle_cover(&host, f).unwrap();
            prop_assert!(c.quotient().len() <= 2 * f.len());
            prop_assert!(cop_check(c.projection(), &host, c.quotient()).unwrap().is_cop());
            prop_assert!(verify_circular_axioms(&c.quotient().relation()).unwrap().is_valid());
        }
        let j = join_cycles(&f1, &f2, &host).unwrap();
        let support: BTreeSet<usize> = f1.iter().chain(&f2).copied().collect();
        prop_assert_eq!(j.iter().copied().collect::<BTreeSet<_>>(), support);
        let full = host.labels().to_vec();
        let t = build_tower(&host, &[f1, f2, full], 64).unwrap();
        prop_assert!(t.verify().is_ok());
        prop_assert_eq!(t.coherent_threads().len(), host.len());
        let n = host.len();
        let rot: BTreeMap<usize, usize> =
            (0..n).map(|i| (host.labels()[i], host.labels()[(i + 1) % n])).collect();
        prop_assert!(t.equivariance_check(&rot).unwrap().holds());
    }

    #[test]
    fn qi_sign_is_consistent(x in quad(), y in quad()) {
        prop_assert_eq!(qi_sign(&-&x), -qi_sign(&x));
        prop_assert_eq!(qi_sign(&x) == 0, x.is_zero());
        let d = &y - &x;
        prop_assert_eq!(x < y, qi_sign(&d) == 1);
        let approx = x.to_f64();
        if approx.abs() > 1e-6 {
            prop_assert_eq!(qi_sign(&x), if approx > 0.0 { 1 } else { -1 });
        }
    }

    #[test]
    fn cascade_composition_is_associative(a in -50i64..50, b in -50i64..50, c in -50i64..50, k in 0u8..27) {
        let pick = |n: i64, sel: u8| match sel % 3 { 0 => CascadeElt::LimMinus, 1 => CascadeElt::Trans(n), _ => CascadeElt::LimPlus };
        let (u, v, w) = (pick(a, k), pick(b, k / 3), pick(c, k / 9));
        prop_assert_eq!(cascade_compose(u, cascade_compose(v, w)), cascade_compose(cascade_compose(u, v), w));
    }

    #[test]
    fn sturmian_composition_is_associative(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let (u, v, w) = (s.element(), s.element(), s.element());
        prop_assert_eq!(
            sturmian_compose(&u, &sturmian_compose(&v, &w)),
            sturmian_compose(&sturmian_compose(&u, &v), &w)
        );
    }

    #[test]
    fn corder_documents_round_trip(c in circ(8), strings in any::<bool>()) {
        let labels: Vec<Lbl> = c.labels().iter().map(|x| if strings { Lbl::Str(format!("p{x}")) } else { Lbl::Int(*x as i64) }).collect();
        let doc: InputDocument = Document::Corder(CorderDoc { cycle: labels }).into();
        let back = parse_document(&to_json(&doc)).unwrap();
        prop_assert_eq!(&back, &doc);
        let Document::Corder(d) = back.body else { unreachable!() };
        prop_assert_eq!(d.to_order().unwrap().len(), c.len());
    }
}
