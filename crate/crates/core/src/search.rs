//! The 64-quadruple grid, per-variety searches, and comparison with the
//! published tables.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{absorb_raws, condition_holds, Classifier, ConditionExpr, Stage, WitnessBattery};
use crate::engine::collect_identities;
use crate::term::{builtin, LoopIdentity};
use crate::theta::{MultQuadruple, ThetaElem, BETA_OPTIONS, GAMMA_OPTIONS};
use crate::word::{GroupIdentity, IdentitySet};

/// The fifteen varieties with published tables, in table order.
pub const VARIETIES: &[&str] = &[
    "assoc", "extra", "moufang", "c", "lbol", "rbol", "lc", "rc", "flexible", "lalt", "ralt", "lns", "mns", "rns",
    "rif",
];

const STANDARD_GOLDEN: &str = include_str!("../data/golden.toml");

/// `α = xy`, then `β`, `γ` and `δ ∈ θ_{g0}Θ` in nested option order.
pub fn enumerate_quadruples() -> Vec<MultQuadruple> {
    let mut out = Vec::with_capacity(64);
    for beta in BETA_OPTIONS {
        for gamma in GAMMA_OPTIONS {
            for delta in ThetaElem::all_parts() {
                out.push(MultQuadruple::triple(beta, gamma, delta.with_g0(1)));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietyResult {
    pub variety: String,
    /// In [`enumerate_quadruples`] order.
    pub cells: Vec<(MultQuadruple, ConditionExpr)>,
}

impl VarietyResult {
    pub fn get(&self, q: &MultQuadruple) -> Option<&ConditionExpr> {
        self.cells.iter().find(|(p, _)| p == q).map(|(_, c)| c)
    }
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("unknown variety `{0}`")]
    UnknownVariety(String),
    #[error(transparent)]
    Engine(#[from] crate::engine::EngineError),
}

/// Classifies every grid cell of every named variety. Each distinct group
/// identity is classified once.
pub fn run_search(names: &[&str], classifier: &Classifier) -> Result<Vec<VarietyResult>, SearchError> {
    let named = names
        .iter()
        .map(|&name| {
            builtin(name).map(|psi| (name.to_string(), psi)).ok_or_else(|| SearchError::UnknownVariety(name.into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    search_identities(&named, classifier)
}

/// [`run_search`] for arbitrary labelled identities.
pub fn search_identities(
    named: &[(String, LoopIdentity)],
    classifier: &Classifier,
) -> Result<Vec<VarietyResult>, SearchError> {
    let grid = enumerate_quadruples();
    let mut sets: Vec<Vec<IdentitySet>> = Vec::new();
    for (_, psi) in named {
        let row = grid.iter().map(|q| collect_identities(psi, q)).collect::<Result<Vec<_>, _>>()?;
        sets.push(row);
    }
    let unique: BTreeSet<&GroupIdentity> = sets.iter().flatten().flat_map(|s| s.iter()).collect();
    let unique: Vec<&GroupIdentity> = unique.into_iter().collect();
    let classified: HashMap<&GroupIdentity, ConditionExpr> =
        unique.par_iter().map(|id| (*id, classifier.classify(id).condition)).collect();
    Ok(named
        .iter()
        .zip(&sets)
        .map(|((name, _), row)| VarietyResult {
            variety: name.clone(),
            cells: grid
                .iter()
                .zip(row)
                .map(|(q, set)| {
                    let c = set.iter().fold(ConditionExpr::always(), |acc, id| acc.and(&classified[id]));
                    (*q, absorb_raws(&c))
                })
                .collect(),
        })
        .collect())
}

pub fn run_variety_search(variety: &str, classifier: &Classifier) -> Result<VarietyResult, SearchError> {
    Ok(run_search(&[variety], classifier)?.remove(0))
}

/// Identities that the battery contradicted during classification, over
/// the whole grid of the named varieties.
pub fn vetoed_identities(names: &[&str], classifier: &Classifier) -> Result<Vec<GroupIdentity>, SearchError> {
    let grid = enumerate_quadruples();
    let mut unique = BTreeSet::new();
    for &name in names {
        let psi = builtin(name).ok_or_else(|| SearchError::UnknownVariety(name.into()))?;
        for q in &grid {
            unique.extend(collect_identities(&psi, q)?.iter().cloned());
        }
    }
    let unique: Vec<GroupIdentity> = unique.into_iter().collect();
    Ok(unique.into_par_iter().filter(|id| classifier.classify(id).stage == Stage::Vetoed).collect())
}

#[derive(Debug, Error)]
pub enum GoldenError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed golden data: {0}")]
    Malformed(String),
    #[error("golden data is empty")]
    Empty,
    #[error("variety `{variety}` inherits missing table `{missing}`")]
    MissingInherited { variety: String, missing: String },
    #[error("variety `{0}` appears twice")]
    Duplicate(String),
    #[error("inheritance cycle through `{0}`")]
    Cycle(String),
    #[error("no golden table for `{0}`")]
    MissingTable(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenBlock {
    pub condition: ConditionExpr,
    pub triples: Vec<MultQuadruple>,
}

impl GoldenBlock {
    pub fn is_commutative(&self) -> bool {
        self.condition.atoms().contains(&crate::classify::Atom::PC)
    }

    /// The condition under which `q` is covered by this block. A listed
    /// triple covers itself; in a commutative group every map equals its
    /// normalized form, so a triple also covers quadruples with the same
    /// normal form, under the extra assumption PC.
    pub fn condition_for(&self, q: &MultQuadruple) -> Option<ConditionExpr> {
        if self.triples.contains(q) {
            return Some(self.condition.clone());
        }
        let nq = pc_normalize(q);
        self.triples
            .iter()
            .any(|t| pc_normalize(t) == nq)
            .then(|| self.condition.and(&ConditionExpr::atom(crate::classify::Atom::PC)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenTable {
    pub variety: String,
    pub inherits: Vec<String>,
    pub blocks: Vec<GoldenBlock>,
}

#[derive(Debug, Deserialize)]
struct GoldenFile {
    #[serde(default)]
    variety: Vec<VarietyRecord>,
}

#[derive(Debug, Deserialize)]
struct VarietyRecord {
    name: String,
    #[serde(default)]
    inherits: Vec<String>,
    #[serde(default)]
    block: Vec<BlockRecord>,
}

#[derive(Debug, Deserialize)]
struct BlockRecord {
    condition: String,
    triples: Vec<String>,
}

/// A set of golden tables closed under inheritance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenSet {
    tables: Vec<GoldenTable>,
}

/// Replaces each swapping map by the non-swapping one with the same value
/// in a commutative group: `yx → xy`, `yx* → x*y`, `y*x → xy*`, `y*x* → x*y*`.
pub fn pc_normalize(q: &MultQuadruple) -> MultQuadruple {
    q.map_each(|t| if t.swap { ThetaElem::YX.compose(t) } else { t })
}

impl GoldenSet {
    pub fn standard() -> GoldenSet {
        GoldenSet::parse(STANDARD_GOLDEN).expect("checked-in golden data is valid")
    }

    pub fn standard_source() -> &'static str {
        STANDARD_GOLDEN
    }

    pub fn load(path: &Path) -> Result<GoldenSet, GoldenError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GoldenError::Io { path: path.display().to_string(), message: e.to_string() })?;
        GoldenSet::parse(&text)
    }

    pub fn parse(text: &str) -> Result<GoldenSet, GoldenError> {
        let file: GoldenFile = toml::from_str(text).map_err(|e| GoldenError::Malformed(e.to_string()))?;
        if file.variety.is_empty() {
            return Err(GoldenError::Empty);
        }
        let mut tables = Vec::new();
        for rec in file.variety {
            let blocks = rec
                .block
                .into_iter()
                .map(|b| {
                    let condition =
                        b.condition.parse().map_err(|e| GoldenError::Malformed(format!("{}: {e}", rec.name)))?;
                    let triples = b
                        .triples
                        .iter()
                        .map(|t| t.parse().map_err(|e| GoldenError::Malformed(format!("{}: {e}", rec.name))))
                        .collect::<Result<Vec<MultQuadruple>, _>>()?;
                    Ok(GoldenBlock { condition, triples })
                })
                .collect::<Result<Vec<_>, GoldenError>>()?;
            tables.push(GoldenTable { variety: rec.name, inherits: rec.inherits, blocks });
        }
        let set = GoldenSet { tables };
        set.validate()?;
        Ok(set)
    }

    fn validate(&self) -> Result<(), GoldenError> {
        let mut seen = BTreeSet::new();
        for t in &self.tables {
            if !seen.insert(t.variety.as_str()) {
                return Err(GoldenError::Duplicate(t.variety.clone()));
            }
        }
        for t in &self.tables {
            for parent in &t.inherits {
                if !seen.contains(parent.as_str()) {
                    return Err(GoldenError::MissingInherited { variety: t.variety.clone(), missing: parent.clone() });
                }
            }
        }
        for t in &self.tables {
            let mut stack = vec![(t.variety.as_str(), 0usize)];
            while let Some((name, depth)) = stack.pop() {
                if depth > self.tables.len() {
                    return Err(GoldenError::Cycle(t.variety.clone()));
                }
                for p in &self.table(name).expect("validated").inherits {
                    stack.push((p, depth + 1));
                }
            }
        }
        Ok(())
    }

    pub fn tables(&self) -> &[GoldenTable] {
        &self.tables
    }

    pub fn table(&self, variety: &str) -> Option<&GoldenTable> {
        self.tables.iter().find(|t| t.variety == variety)
    }

    /// Mutable access, for building corrupted copies in tests.
    pub fn table_mut(&mut self, variety: &str) -> Option<&mut GoldenTable> {
        self.tables.iter_mut().find(|t| t.variety == variety)
    }
}

/// A published condition: the disjunction of `alternatives` (empty means
/// `never`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoldenCondition {
    #[serde(serialize_with = "display_all")]
    pub alternatives: Vec<ConditionExpr>,
    /// The quadruple is listed in more than one block of one table.
    pub overlap: bool,
}

fn display_all<S: serde::Serializer>(v: &[ConditionExpr], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

impl GoldenCondition {
    pub fn holds(&self, sg: &crate::star::StarredGroup) -> bool {
        self.alternatives.iter().any(|c| condition_holds(c, sg))
    }

    /// Drops alternatives implied by others.
    fn prune(mut self) -> Self {
        let all = self.alternatives.clone();
        // Of equivalent alternatives the least one is kept.
        self.alternatives.retain(|a| !all.iter().any(|b| b != a && a.implies(b) && (!b.implies(a) || b < a)));
        self
    }

    /// The single alternative implied by all others, if there is one.
    pub fn simplified(&self) -> Option<&ConditionExpr> {
        if self.alternatives.is_empty() {
            return None;
        }
        self.alternatives.iter().find(|a| self.alternatives.iter().all(|b| b.implies(a)))
    }
}

impl std::fmt::Display for GoldenCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.simplified(), self.alternatives.is_empty()) {
            (_, true) => f.write_str("never"),
            (Some(c), _) => write!(f, "{c}"),
            (None, _) => {
                let parts: Vec<String> = self.alternatives.iter().map(|c| c.to_string()).collect();
                write!(f, "{}", parts.join(" | "))
            }
        }
    }
}

/// Inherited tables' conditions or the condition of a block listing `q`.
pub fn golden_condition(golden: &GoldenSet, variety: &str, q: &MultQuadruple) -> Result<GoldenCondition, GoldenError> {
    let mut alternatives = BTreeSet::new();
    let mut overlap = false;
    let mut pending = vec![variety];
    let mut visited = BTreeSet::new();
    while let Some(name) = pending.pop() {
        if !visited.insert(name) {
            continue;
        }
        let table = golden.table(name).ok_or_else(|| match name == variety {
            true => GoldenError::MissingTable(name.into()),
            false => GoldenError::MissingInherited { variety: variety.into(), missing: name.into() },
        })?;
        let hits: Vec<ConditionExpr> = table.blocks.iter().filter_map(|b| b.condition_for(q)).collect();
        overlap |= name == variety && table.blocks.iter().filter(|b| b.triples.contains(q)).count() > 1;
        alternatives.extend(hits);
        pending.extend(table.inherits.iter().map(String::as_str));
    }
    Ok(GoldenCondition { alternatives: alternatives.into_iter().collect(), overlap }.prune())
}

#[derive(Debug, Clone, Serialize)]
pub struct DiffRow {
    pub variety: String,
    #[serde(serialize_with = "display_one")]
    pub quadruple: MultQuadruple,
    #[serde(serialize_with = "display_one")]
    pub computed: ConditionExpr,
    pub golden: GoldenCondition,
    pub semantic_match: bool,
    /// Only filled in structural mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structural_match: Option<bool>,
}

fn display_one<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl DiffRow {
    pub fn is_match(&self) -> bool {
        self.semantic_match && self.structural_match != Some(false)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DiffReport {
    pub rows: Vec<DiffRow>,
    pub battery_size: usize,
}

impl DiffReport {
    pub fn mismatches(&self) -> impl Iterator<Item = &DiffRow> {
        self.rows.iter().filter(|r| !r.is_match())
    }

    pub fn mismatch_count(&self) -> usize {
        self.mismatches().count()
    }

    pub fn overlaps(&self) -> impl Iterator<Item = &DiffRow> {
        self.rows.iter().filter(|r| r.golden.overlap)
    }
}

/// Compares computed tables with the golden ones. Semantic agreement means
/// equal truth values on every battery member; structural mode also
/// requires syntactic equality with the simplified golden condition.
pub fn diff_against_golden(
    results: &[VarietyResult],
    golden: &GoldenSet,
    battery: &WitnessBattery,
    structural: bool,
) -> Result<DiffReport, GoldenError> {
    let mut truth: HashMap<ConditionExpr, Vec<bool>> = HashMap::new();
    let mut eval = |c: &ConditionExpr| -> Vec<bool> {
        truth
            .entry(c.clone())
            .or_insert_with(|| battery.members().iter().map(|m| condition_holds(c, &m.starred)).collect())
            .clone()
    };
    let mut rows = Vec::new();
    for res in results {
        for (q, computed) in &res.cells {
            let g = golden_condition(golden, &res.variety, q)?;
            let mine = eval(computed);
            let mut theirs = vec![false; battery.len()];
            for alt in &g.alternatives {
                for (t, v) in theirs.iter_mut().zip(eval(alt)) {
                    *t |= v;
                }
            }
            let structural_match = structural.then(|| match g.simplified() {
                Some(c) => c == computed,
                None => g.alternatives.is_empty() && computed.is_never(),
            });
            rows.push(DiffRow {
                variety: res.variety.clone(),
                quadruple: *q,
                computed: computed.clone(),
                golden: g,
                semantic_match: mine == theirs,
                structural_match,
            });
        }
    }
    Ok(DiffReport { rows, battery_size: battery.len() })
}

/// A fixed-width grid, one line per cell, mismatches marked.
pub fn render_text(report: &DiffReport) -> String {
    let mut out = String::new();
    let mut current = "";
    for row in &report.rows {
        if row.variety != current {
            current = &row.variety;
            let _ = writeln!(out, "== {current}");
        }
        let mark = if row.is_match() { "ok      " } else { "MISMATCH" };
        let flag = if row.golden.overlap { "  [overlap]" } else { "" };
        let _ = writeln!(
            out,
            "{mark} {:<22} computed={:<28} golden={}{flag}",
            row.quadruple.triple_string(),
            row.computed.to_string(),
            row.golden
        );
    }
    let _ = writeln!(
        out,
        "{} cells, {} mismatches, {} overlapping, battery of {}",
        report.rows.len(),
        report.mismatch_count(),
        report.overlaps().count(),
        report.battery_size
    );
    out
}

pub fn render_json(report: &DiffReport) -> String {
    #[derive(Serialize)]
    struct Doc<'a> {
        cells: usize,
        mismatches: usize,
        battery_size: usize,
        rows: &'a [DiffRow],
    }
    let doc = Doc {
        cells: report.rows.len(),
        mismatches: report.mismatch_count(),
        battery_size: report.battery_size,
        rows: &report.rows,
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

/// Tables laid out like the published results: the inherited varieties,
/// then one block per condition with the quadruples that need it. Cells
/// already covered by an inherited table and `never` cells are omitted;
/// commutative blocks keep one representative per normalized quadruple.
pub fn render_publication(results: &[VarietyResult], golden: &GoldenSet, battery: &WitnessBattery) -> String {
    let by_name: BTreeMap<&str, &VarietyResult> = results.iter().map(|r| (r.variety.as_str(), r)).collect();
    let truth =
        |c: &ConditionExpr| -> Vec<bool> { battery.members().iter().map(|m| condition_holds(c, &m.starred)).collect() };
    let mut out = String::new();
    for res in results {
        let inherits: Vec<&str> =
            golden.table(&res.variety).map(|t| t.inherits.iter().map(String::as_str).collect()).unwrap_or_default();
        let head = if inherits.is_empty() {
            format!("{} holds iff", res.variety)
        } else {
            format!("{} holds iff it is {} or", res.variety, inherits.join(" or "))
        };
        let _ = writeln!(out, "{head}");
        let mut blocks: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (q, c) in &res.cells {
            if c.is_never() {
                continue;
            }
            let mine = truth(c);
            let inherited = inherits.iter().filter_map(|p| by_name.get(p)).filter_map(|r| r.get(q)).fold(
                vec![false; battery.len()],
                |mut acc, pc| {
                    for (a, v) in acc.iter_mut().zip(truth(pc)) {
                        *a |= v;
                    }
                    acc
                },
            );
            if mine.iter().zip(&inherited).all(|(m, i)| !m || *i) {
                continue;
            }
            let commutative = c.atoms().contains(&crate::classify::Atom::PC);
            let shown = if commutative { pc_normalize(q) } else { *q };
            if shown != *q {
                // Covered by the representative's own entry once PC holds.
                let rep = res.get(&shown).map(|r| truth(&r.and(&ConditionExpr::atom(crate::classify::Atom::PC))));
                if rep.is_some_and(|r| mine.iter().zip(&r).all(|(m, r)| !m || *r)) {
                    continue;
                }
            }
            let list = blocks.entry(c.to_string()).or_default();
            let s = format!("({})", shown.triple_string().replace(',', ", "));
            if !list.contains(&s) {
                list.push(s);
            }
        }
        for (cond, qs) in blocks {
            let _ = writeln!(out, "  {cond}:");
            for chunk in qs.chunks(4) {
                let _ = writeln!(out, "    {}", chunk.join(", "));
            }
        }
        out.push('\n');
    }
    out
}
