//! Command-line front end. Exit codes: 0 success, 1 semantic failure,
//! 2 input error.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::cop::cop_check;
use crate::error::{Error, Result};
use crate::groups::{
    bi_invariance_check, finite_lcord_decide, left_invariance_check, lin_bi_invariance_check,
    lin_left_invariance_check, lin_right_invariance_check, right_invariance_check, torsion_obstruction_table,
    FiniteAction, LcordDecision, TorsionOutcome,
};
use crate::inverse_limit::{build_cycle_cover, build_tower, induced_quotient_action, Block, CycleCover, Tower};
use crate::io::{
    digest, find_label, parse_document, read_text, to_json, CheckResult, CorderDoc, Document, Family, InputDocument,
    Lbl, MapDoc, Ref, Report, Resolver,
};
use crate::lex::{lex_circ_lin, FiberedLift};
use crate::orders::{verify_circular_axioms_bounded, verify_cut, AxiomVerdict, CircOrder, LinOrder, TernaryRelation};
use crate::selftest;
use crate::{Bounds, DEFAULT_ENUMERATION_BUDGET, DEFAULT_MAX_SIZE, MAX_SIZE_ENV};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cyclord", version, about = "Finite circular orders and order-preserving dynamics")]
struct Cli {
    /// Pretty text instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    /// Enumeration budget for exhaustive checks and tower closure.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Largest structure a verifier accepts.
    #[arg(long, global = true, env = MAX_SIZE_ENV, default_value_t = DEFAULT_MAX_SIZE)]
    max_size: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Verify a document with the checker matching its kind.
    Verify {
        path: PathBuf,
        /// Reject documents of any other kind.
        #[arg(long)]
        kind: Option<String>,
    },
    /// Construct an object and emit it as JSON.
    Build {
        #[command(subcommand)]
        what: Build,
    },
    /// Decide left circular orderability of a finite group.
    Orderable { group: PathBuf },
    /// Run the self-test battery.
    Selftest {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct Output {
    /// Write the artifact here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CoverArgs {
    /// Host corder document.
    #[arg(long)]
    host: PathBuf,
    /// Comma-separated labels of the cycle.
    #[arg(long)]
    cycle: String,
}

#[derive(Debug, Subcommand)]
enum Build {
    /// Lexicographic product of a circular and a linear order.
    Lex {
        #[arg(long)]
        circ: PathBuf,
        #[arg(long)]
        lin: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Circular order of a fibered lift document.
    Lift {
        path: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Cycle cover of a host by a finite cycle.
    Cover {
        #[command(flatten)]
        cover: CoverArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Join-closed tower of cycle covers.
    Tower {
        #[arg(long)]
        host: PathBuf,
        /// Repeatable; comma-separated labels.
        #[arg(long, required = true)]
        cycle: Vec<String>,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Map between quotients induced by a host automorphism.
    Quotient {
        #[command(flatten)]
        cover: CoverArgs,
        /// Map document from the host to itself.
        #[arg(long)]
        map: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let bounds = Bounds {
        max_size: cli.max_size,
        enumeration_budget: cli.budget.unwrap_or(DEFAULT_ENUMERATION_BUDGET),
    };
    match dispatch(&cli, &bounds, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_input_error() {
                EXIT_INPUT
            } else {
                EXIT_FAIL
            }
        }
    }
}

fn dispatch(cli: &Cli, bounds: &Bounds, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Verify { path, kind } => {
            let text = read_text(path)?;
            let doc = parse_document(&text)?;
            if let Some(k) = kind {
                if k != doc.body.kind() {
                    return Err(Error::Input(format!("expected kind {k}, found {}", doc.body.kind())));
                }
            }
            let mut report = verify_document(&doc, &Resolver::for_file(path), bounds)?;
            report.input_digest = Some(digest(&text));
            emit_report(&report, cli.human, out)
        }
        Command::Orderable { group } => {
            let text = read_text(group)?;
            let g = Resolver::for_file(group).group(&Ref::Inline(Box::new(parse_document(&text)?)))?;
            bounds.check_size(g.order())?;
            let mut report = Report::new("orderable");
            report.input_digest = Some(digest(&text));
            report.push(orderable_result(&g)?);
            emit_report(&report, cli.human, out)
        }
        Command::Selftest { suite, seed } => {
            let report = selftest::run(suite, *seed, bounds)?;
            emit_report(&report, cli.human, out)
        }
        Command::Build { what } => {
            build(what, bounds, out)?;
            Ok(EXIT_OK)
        }
    }
}

fn emit_report(report: &Report, human: bool, out: &mut dyn Write) -> Result<i32> {
    let text = if human { report.human() } else { report.to_json() + "\n" };
    out.write_all(text.as_bytes()).map_err(|e| Error::Input(format!("cannot write output: {e}")))?;
    Ok(if report.ok { EXIT_OK } else { EXIT_FAIL })
}

fn write_artifact(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Input(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Error::Input(format!("cannot write output: {e}"))),
    }
}

fn orderable_result(g: &crate::groups::GroupTable<Lbl>) -> Result<CheckResult> {
    Ok(match finite_lcord_decide(g)? {
        LcordDecision::Cyclic { generator, certificate } => CheckResult::pass("left circular order")
            .with_detail(json!({ "generator": generator, "certificate": CorderDoc::from_order(&certificate) })),
        LcordDecision::NotCyclic { element_orders } => {
            let torsion = match torsion_obstruction_table(g) {
                TorsionOutcome::Witness { element, order } => json!({ "element": element, "order": order }),
                _ => Value::Null,
            };
            CheckResult::fail("left circular order", format!("not cyclic: no element of order {}", g.order()))
                .with_detail(json!({
                    "obstruction": "not cyclic",
                    "element_orders": element_orders.iter().map(|(x, k)| json!([x, k])).collect::<Vec<_>>(),
                    "torsion": torsion,
                }))
        }
    })
}

/// Runs the verifier matching the document kind. Failures of well-formed
/// input become failed checks; malformed input is an error.
pub fn verify_document(doc: &InputDocument, resolver: &Resolver, bounds: &Bounds) -> Result<Report> {
    let kind = doc.body.kind();
    let mut report = Report::new(format!("verify {kind}"));
    match verify_body(&doc.body, resolver, bounds) {
        Ok(results) => report.extend(results),
        Err(e) if e.is_input_error() => return Err(e),
        Err(e) => report.push(CheckResult::fail(kind, e.to_string())),
    }
    Ok(report)
}

fn verify_body(body: &Document, resolver: &Resolver, bounds: &Bounds) -> Result<Vec<CheckResult>> {
    match body {
        Document::Corder(d) => {
            bounds.check_size(d.cycle.len())?;
            let c = d.to_order()?;
            Ok(vec![axioms_result(&c.relation(), bounds)?])
        }
        Document::Linorder(d) => {
            bounds.check_size(d.order.len())?;
            d.to_order()?;
            Ok(vec![CheckResult::pass("linear order")])
        }
        Document::Ternary(d) => {
            bounds.check_size(d.points.len())?;
            let rel = TernaryRelation::new(d.points.iter().cloned(), d.triples.iter().cloned())?;
            Ok(vec![axioms_result(&rel, bounds)?])
        }
        Document::Group(d) => {
            bounds.check_size(d.elements.len())?;
            let g = d.to_table()?;
            Ok(vec![CheckResult::pass("group axioms").with_detail(json!({
                "order": g.order(),
                "abelian": g.is_abelian(),
            }))])
        }
        Document::Action(d) => {
            let g = resolver.group(&d.group)?;
            let (space, listing) = resolver.space(&d.space)?;
            bounds.check_size(listing.len().max(g.order()))?;
            let mut maps = BTreeMap::new();
            for (key, images) in &d.maps {
                let gl = find_label(g.elements(), key)?.clone();
                if images.len() != listing.len() {
                    return Err(Error::Input(format!(
                        "map {key} lists {} images for {} points",
                        images.len(),
                        listing.len()
                    )));
                }
                maps.insert(gl, listing.iter().cloned().zip(images.iter().cloned()).collect());
            }
            let act = FiniteAction::new(g, space, maps)?;
            let v = act.preserves_order()?;
            Ok(vec![CheckResult::from_bool("every element preserves the order", v.holds(), || {
                format!("{:?}", v.witness())
            })
            .with_detail(json!({ "effective": act.is_effective(), "kernel": act.kernel() }))])
        }
        Document::Cut(d) => {
            let base = resolver.corder(&d.base)?;
            bounds.check_size(base.len())?;
            let order = LinOrder::new(d.order.clone())?;
            let ok = verify_cut(&base, &order)?;
            Ok(vec![CheckResult::from_bool("linear order is a cut", ok, || {
                format!("{:?} is not a rotation of {:?}", d.order, base.labels())
            })])
        }
        Document::Map(d) => {
            let dom = resolver.corder(&d.domain)?;
            let cod = resolver.corder(&d.codomain)?;
            bounds.check_size(dom.len().max(cod.len()))?;
            let table = map_table(d)?;
            let v = cop_check(&table, &dom, &cod)?;
            Ok(vec![CheckResult::from_bool("c-order preserving", v.is_cop(), || format!("{v:?}"))])
        }
        Document::Grouporder(d) => {
            let g = resolver.group(&d.group)?;
            bounds.check_size(g.order())?;
            let side = d.side.as_deref().unwrap_or("left");
            let name = format!("{side} invariance");
            let result = match (&d.cycle, &d.linear) {
                (Some(cycle), None) => {
                    let c = CircOrder::from_cycle(cycle.clone())?;
                    match side {
                        "left" => verdict_result(name, left_invariance_check(&g, &c)?),
                        "right" => verdict_result(name, right_invariance_check(&g, &c)?),
                        "bi" => verdict_result(name, bi_invariance_check(&g, &c)?),
                        other => return Err(bad_side(other)),
                    }
                }
                (None, Some(order)) => {
                    let l = LinOrder::new(order.clone())?;
                    match side {
                        "left" => verdict_result(name, lin_left_invariance_check(&g, &l)?),
                        "right" => verdict_result(name, lin_right_invariance_check(&g, &l)?),
                        "bi" => verdict_result(name, lin_bi_invariance_check(&g, &l)?),
                        other => return Err(bad_side(other)),
                    }
                }
                _ => return Err(Error::Input("grouporder needs exactly one of cycle or linear".into())),
            };
            Ok(vec![result])
        }
        Document::Lift(d) => {
            let lift = lift_of(d, resolver, bounds)?;
            let rel = TernaryRelation::from_predicate(lift.quotient().keys().cloned(), |a, b, c| lift.holds(a, b, c));
            let fc = lift.fiber_compatibility();
            let q = lift.quotient_verdict()?;
            Ok(vec![
                axioms_result(&rel, bounds)?,
                CheckResult::from_bool("fiber compatibility", fc.holds(), || format!("{:?}", fc.witness())),
                CheckResult::from_bool("quotient map is c-order preserving", q.is_cop(), || format!("{q:?}")),
            ])
        }
        Document::Scenario(s) => match s.family {
            Family::Finite => selftest::finite_scenario_results("finite", s),
            Family::Cascade => selftest::cascade_results(s.radius.unwrap_or(10), s.window.unwrap_or(100)),
            Family::Sturmian => selftest::sturmian_suite(
                s.samples.unwrap_or(500),
                s.seed.unwrap_or(selftest::DEFAULT_SEED),
                s.range.unwrap_or(50),
                s.ideal_sample.unwrap_or(40),
                s.triples.unwrap_or(100),
            ),
        },
    }
}

fn bad_side(s: &str) -> Error {
    Error::Input(format!("side must be left, right or bi, not {s}"))
}

fn verdict_result<W: std::fmt::Debug>(name: String, v: crate::Verdict<W>) -> CheckResult {
    CheckResult::from_bool(name, v.holds(), || format!("{:?}", v.witness()))
}

fn axioms_result(rel: &TernaryRelation<Lbl>, bounds: &Bounds) -> Result<CheckResult> {
    Ok(match verify_circular_axioms_bounded(rel, bounds)? {
        AxiomVerdict::Valid(c) => {
            CheckResult::pass("circular order axioms").with_detail(json!({ "canonical": c.labels() }))
        }
        AxiomVerdict::Violation(v) => {
            CheckResult::fail("circular order axioms", format!("{:?} fails at {:?}", v.axiom, v.witness))
        }
    })
}

fn map_table(d: &MapDoc) -> Result<BTreeMap<Lbl, Lbl>> {
    let mut table = BTreeMap::new();
    for (a, b) in &d.table {
        if table.insert(a.clone(), b.clone()).is_some() {
            return Err(Error::DuplicateLabel(format!("{a:?}")));
        }
    }
    Ok(table)
}

fn lift_of(d: &crate::io::LiftDoc, resolver: &Resolver, bounds: &Bounds) -> Result<FiberedLift<Lbl, Lbl>> {
    let base = resolver.corder(&d.base)?;
    let mut fibers = BTreeMap::new();
    let mut total = 0;
    for (y, xs) in &d.fibers {
        total += xs.len();
        if fibers.insert(y.clone(), LinOrder::new(xs.clone())?).is_some() {
            return Err(Error::DuplicateLabel(format!("{y:?}")));
        }
    }
    bounds.check_size(total)?;
    FiberedLift::from_fibers(base, fibers)
}

fn load_corder(path: &Path) -> Result<CircOrder<Lbl>> {
    let doc = parse_document(&read_text(path)?)?;
    Resolver::for_file(path).corder(&Ref::Inline(Box::new(doc)))
}

fn parse_cycle(host: &CircOrder<Lbl>, spec: &str) -> Result<Vec<Lbl>> {
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| find_label(host.labels(), s.trim()).cloned())
        .collect()
}

/// A block as a document label.
pub fn block_label(b: &Block<Lbl>) -> Lbl {
    match b {
        Block::Point(t) => Lbl::Str(t.to_string()),
        Block::Interval(a, c) => Lbl::Str(format!("({a},{c})")),
    }
}

pub fn cover_json(c: &CycleCover<Lbl>) -> Value {
    let quotient = CorderDoc {
        cycle: c.quotient().labels().iter().map(block_label).collect(),
    };
    json!({
        "kind": "cover",
        "host": CorderDoc::from_order(c.host()),
        "cycle": c.cycle(),
        "blocks": c.blocks().iter().map(|b| json!({
            "block": block_label(b),
            "members": c.members(b).unwrap_or(&[]),
        })).collect::<Vec<_>>(),
        "quotient": quotient,
    })
}

pub fn tower_json(t: &Tower<Lbl>) -> Value {
    let bondings: Vec<Value> = t
        .comparable_pairs()
        .filter_map(|(j, i)| {
            t.bonding(j, i).map(|f| {
                json!({
                    "from": j,
                    "to": i,
                    "table": f.table().iter().map(|(a, b)| json!([block_label(a), block_label(b)])).collect::<Vec<_>>(),
                })
            })
        })
        .collect();
    json!({
        "kind": "tower",
        "levels": t.covers().iter().map(cover_json).collect::<Vec<_>>(),
        "bondings": bondings,
    })
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("artifacts serialize") + "\n"
}

fn build(what: &Build, bounds: &Bounds, out: &mut dyn Write) -> Result<()> {
    match what {
        Build::Lex { circ, lin, out: o } => {
            let c = load_corder(circ)?;
            let l = match parse_document(&read_text(lin)?)?.body {
                Document::Linorder(d) => d.to_order()?,
                other => return Err(Error::Input(format!("expected a linorder document, found {}", other.kind()))),
            };
            bounds.check_size(c.len() * l.len())?;
            let prod = lex_circ_lin(&c, &l)?;
            let doc: InputDocument = Document::Corder(CorderDoc {
                cycle: prod.labels().iter().map(|(a, x)| Lbl::Str(format!("({a},{x})"))).collect(),
            })
            .into();
            write_artifact(&(to_json(&doc) + "\n"), o.output.as_deref(), out)
        }
        Build::Lift { path, out: o } => {
            let d = match parse_document(&read_text(path)?)?.body {
                Document::Lift(d) => d,
                other => return Err(Error::Input(format!("expected a lift document, found {}", other.kind()))),
            };
            let lift = lift_of(&d, &Resolver::for_file(path), bounds)?;
            let doc: InputDocument = Document::Corder(CorderDoc::from_order(&lift.to_circ_order()?)).into();
            write_artifact(&(to_json(&doc) + "\n"), o.output.as_deref(), out)
        }
        Build::Cover { cover, out: o } => {
            let host = load_corder(&cover.host)?;
            bounds.check_size(host.len())?;
            let c = build_cycle_cover(&host, &parse_cycle(&host, &cover.cycle)?)?;
            write_artifact(&pretty(&cover_json(&c)), o.output.as_deref(), out)
        }
        Build::Tower { host, cycle, dot, out: o } => {
            let host = load_corder(host)?;
            bounds.check_size(host.len())?;
            let cycles = cycle.iter().map(|s| parse_cycle(&host, s)).collect::<Result<Vec<_>>>()?;
            let budget = usize::try_from(bounds.enumeration_budget).unwrap_or(usize::MAX).min(4096);
            let t = build_tower(&host, &cycles, budget)?;
            t.verify()?;
            if let Some(p) = dot {
                std::fs::write(p, t.to_dot()).map_err(|e| Error::Input(format!("cannot write {}: {e}", p.display())))?;
            }
            write_artifact(&pretty(&tower_json(&t)), o.output.as_deref(), out)
        }
        Build::Quotient { cover, map, out: o } => {
            let host = load_corder(&cover.host)?;
            bounds.check_size(host.len())?;
            let c = build_cycle_cover(&host, &parse_cycle(&host, &cover.cycle)?)?;
            let g = match parse_document(&read_text(map)?)?.body {
                Document::Map(d) => map_table(&d)?,
                other => return Err(Error::Input(format!("expected a map document, found {}", other.kind()))),
            };
            let (target, f) = induced_quotient_action(&g, &c)?;
            let inline = |c: &CircOrder<Block<Lbl>>| {
                Ref::Inline(Box::new(
                    Document::Corder(CorderDoc { cycle: c.labels().iter().map(block_label).collect() }).into(),
                ))
            };
            let doc: InputDocument = Document::Map(MapDoc {
                domain: inline(c.quotient()),
                codomain: inline(target.quotient()),
                table: f.table().iter().map(|(a, b)| (block_label(a), block_label(b))).collect(),
            })
            .into();
            write_artifact(&(to_json(&doc) + "\n"), o.output.as_deref(), out)
        }
    }
}
