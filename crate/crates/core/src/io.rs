//! JSON documents read and written by the command-line tool, and the
//! report format.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::groups::{GroupTable, Space};
use crate::orders::{CircOrder, LinOrder};

/// A label as it appears in a document: an integer or a string.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Lbl {
    Int(i64),
    Str(String),
}

impl fmt::Display for Lbl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lbl::Int(n) => write!(f, "{n}"),
            Lbl::Str(s) => write!(f, "{s}"),
        }
    }
}

impl fmt::Debug for Lbl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lbl::Int(n) => write!(f, "{n}"),
            Lbl::Str(s) => write!(f, "{s:?}"),
        }
    }
}

/// Integers parse as [`Lbl::Int`], anything else as a string.
impl FromStr for Lbl {
    type Err = std::convert::Infallible;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(s.trim().parse().map(Lbl::Int).unwrap_or_else(|_| Lbl::Str(s.trim().to_string())))
    }
}

impl From<i64> for Lbl {
    fn from(n: i64) -> Self {
        Lbl::Int(n)
    }
}

impl From<&str> for Lbl {
    fn from(s: &str) -> Self {
        Lbl::Str(s.to_string())
    }
}

/// Either a path relative to the referring document or an inline document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ref {
    Path(String),
    Inline(Box<InputDocument>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<u32>,
    #[serde(flatten)]
    pub body: Document,
}

impl From<Document> for InputDocument {
    fn from(body: Document) -> Self {
        InputDocument { version: None, body }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Document {
    Corder(CorderDoc),
    Linorder(LinorderDoc),
    Ternary(TernaryDoc),
    Group(GroupDoc),
    Action(ActionDoc),
    Cut(CutDoc),
    Map(MapDoc),
    Grouporder(GroupOrderDoc),
    Lift(LiftDoc),
    Scenario(ScenarioDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Corder(_) => "corder",
            Document::Linorder(_) => "linorder",
            Document::Ternary(_) => "ternary",
            Document::Group(_) => "group",
            Document::Action(_) => "action",
            Document::Cut(_) => "cut",
            Document::Map(_) => "map",
            Document::Grouporder(_) => "grouporder",
            Document::Lift(_) => "lift",
            Document::Scenario(_) => "scenario",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorderDoc {
    pub cycle: Vec<Lbl>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinorderDoc {
    pub order: Vec<Lbl>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TernaryDoc {
    pub points: Vec<Lbl>,
    pub triples: Vec<(Lbl, Lbl, Lbl)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub elements: Vec<Lbl>,
    /// `table[i][j]` is `elements[i] * elements[j]`.
    pub table: Vec<Vec<Lbl>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionDoc {
    pub group: Ref,
    /// A corder or linorder document.
    pub space: Ref,
    /// For each group element, the images of the space's labels in the
    /// order the space document lists them.
    pub maps: BTreeMap<String, Vec<Lbl>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutDoc {
    pub base: Ref,
    pub order: Vec<Lbl>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapDoc {
    pub domain: Ref,
    pub codomain: Ref,
    pub table: Vec<(Lbl, Lbl)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupOrderDoc {
    pub group: Ref,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<Lbl>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<Vec<Lbl>>,
    /// `left` (default), `right` or `bi`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftDoc {
    pub base: Ref,
    /// Base point and the increasing list of its fiber.
    pub fibers: Vec<(Lbl, Vec<Lbl>)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Finite,
    Cascade,
    Sturmian,
}

/// Parameters of an enveloping-semigroup scenario. Unused fields are
/// ignored by the other families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioDoc {
    pub family: Family,
    /// finite: the chain the maps act on, increasing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<Lbl>>,
    /// finite: named self-maps, images listed along `chain`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<BTreeMap<String, Vec<Lbl>>>,
    /// finite: names of the group translations in increasing group order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<Vec<String>>,
    /// cascade: translations `|n| <= radius`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<i64>,
    /// cascade: evaluation window `[-window, window]` plus endpoints.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<i64>,
    /// sturmian: samples per composition law.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// sturmian: isolation checked for `|n| <= range`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<i64>,
    /// sturmian: size of the minimal-ideal sample.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal_sample: Option<usize>,
    /// sturmian: sampled triples per translation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triples: Option<usize>,
}

pub fn parse_document(text: &str) -> Result<InputDocument> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed document: {e}")))
}

pub fn to_json(doc: &InputDocument) -> String {
    serde_json::to_string_pretty(doc).expect("documents always serialize")
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

/// Hex SHA-256 of the input bytes.
pub fn digest(text: &str) -> String {
    format!("{:x}", Sha256::digest(text.as_bytes()))
}

/// Resolves references relative to a base directory, or against an
/// in-memory bundle of named documents.
#[derive(Debug, Clone)]
pub struct Resolver {
    base: PathBuf,
    bundle: BTreeMap<String, String>,
}

impl Resolver {
    pub fn new(base: impl Into<PathBuf>) -> Self {
        Resolver {
            base: base.into(),
            bundle: BTreeMap::new(),
        }
    }

    /// Path references are looked up by name in `docs` only.
    pub fn bundled<'a>(docs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        Resolver {
            base: PathBuf::new(),
            bundle: docs.into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        }
    }

    /// Resolver for references inside the document at `path`.
    pub fn for_file(path: &Path) -> Self {
        Resolver::new(path.parent().map(Path::to_path_buf).unwrap_or_default())
    }

    pub fn load(&self, r: &Ref) -> Result<InputDocument> {
        match r {
            Ref::Inline(d) => Ok((**d).clone()),
            Ref::Path(p) if !self.bundle.is_empty() => parse_document(
                self.bundle
                    .get(p)
                    .ok_or_else(|| Error::Input(format!("no bundled document {p}")))?,
            ),
            Ref::Path(p) => parse_document(&read_text(&self.base.join(p))?),
        }
    }

    pub fn corder(&self, r: &Ref) -> Result<CircOrder<Lbl>> {
        match self.load(r)?.body {
            Document::Corder(d) => d.to_order(),
            other => Err(wrong_kind("corder", other.kind())),
        }
    }

    pub fn group(&self, r: &Ref) -> Result<GroupTable<Lbl>> {
        match self.load(r)?.body {
            Document::Group(d) => d.to_table(),
            other => Err(wrong_kind("group", other.kind())),
        }
    }

    /// The space together with its labels in document order.
    pub fn space(&self, r: &Ref) -> Result<(Space<Lbl>, Vec<Lbl>)> {
        match self.load(r)?.body {
            Document::Corder(d) => Ok((Space::Circ(d.to_order()?), d.cycle)),
            Document::Linorder(d) => Ok((Space::Lin(d.to_order()?), d.order)),
            other => Err(wrong_kind("corder or linorder", other.kind())),
        }
    }
}

fn wrong_kind(expected: &str, found: &str) -> Error {
    Error::Input(format!("expected a {expected} document, found {found}"))
}

impl CorderDoc {
    pub fn to_order(&self) -> Result<CircOrder<Lbl>> {
        CircOrder::from_cycle(self.cycle.clone())
    }

    pub fn from_order(c: &CircOrder<Lbl>) -> Self {
        CorderDoc {
            cycle: c.labels().to_vec(),
        }
    }
}

impl LinorderDoc {
    pub fn to_order(&self) -> Result<LinOrder<Lbl>> {
        LinOrder::new(self.order.clone())
    }
}

impl GroupDoc {
    pub fn to_table(&self) -> Result<GroupTable<Lbl>> {
        GroupTable::new(self.elements.clone(), self.table.clone())
    }

    pub fn from_table(name: Option<String>, g: &GroupTable<Lbl>) -> Self {
        GroupDoc {
            name,
            elements: g.elements().to_vec(),
            table: g.table_labels(),
        }
    }
}

/// Looks up a label by its rendering.
pub fn find_label<'a>(labels: impl IntoIterator<Item = &'a Lbl>, key: &str) -> Result<&'a Lbl> {
    labels
        .into_iter()
        .find(|l| l.to_string() == key)
        .ok_or_else(|| Error::UnknownLabel(key.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub detail: serde_json::Value,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed: true,
            witness: None,
            detail: serde_json::Value::Null,
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed: false,
            witness: Some(witness.into()),
            detail: serde_json::Value::Null,
        }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            CheckResult::pass(name)
        } else {
            CheckResult::fail(name, witness())
        }
    }

    pub fn with_detail(mut self, detail: serde_json::Value) -> Self {
        self.detail = detail;
        self
    }
}

/// Output of every command. `results` depends only on inputs and seed;
/// `timing_ms` is kept apart so reruns compare equal elsewhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub ok: bool,
    pub results: Vec<CheckResult>,
    #[serde(default)]
    pub timing_ms: BTreeMap<String, u64>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            input_digest: None,
            seed: None,
            ok: true,
            results: Vec::new(),
            timing_ms: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, r: CheckResult) {
        self.ok &= r.passed;
        self.results.push(r);
    }

    pub fn extend(&mut self, rs: impl IntoIterator<Item = CheckResult>) {
        for r in rs {
            self.push(r);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn human(&self) -> String {
        let mut s = format!("{}: {}\n", self.command, if self.ok { "ok" } else { "FAILED" });
        for r in &self.results {
            s.push_str(&format!("  {} {}", if r.passed { "PASS" } else { "FAIL" }, r.name));
            if let Some(w) = &r.witness {
                s.push_str(&format!(": {w}"));
            }
            s.push('\n');
        }
        for (k, v) in &self.timing_ms {
            s.push_str(&format!("  time {k}: {v} ms\n"));
        }
        s
    }
}
