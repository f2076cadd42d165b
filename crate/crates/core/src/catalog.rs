//! The bundled table of essential 2-string tangles up to seven crossings and
//! the classification driver.
//!
//! Each entry is a diagram plus, where known, an algebraic expression. An
//! entry is classified along up to three routes: the expression calculus,
//! the diagram route (quandle colorings, candidate closures checked by
//! Jones polynomial, determinant and linking number) and, for entries that
//! name another entry as a subtangle, the subtangle rules. The routes are
//! merged and any disagreement is reported.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bracket::{jones_default, jones_loop_factor, knotted_strand, not_split_witness};
use crate::diagram::{parse_diagram, twist_crossings, LinkDiagram, TangleDiagram};
use crate::expr::{evaluate, parse_expr, EmbedVerdict, Hints, NamedHint, Status, TangleExpr};
use crate::fraction::Fraction;
use crate::poly::{LaurentPoly, Var};
use crate::quandle::{
    coloring_fraction, determinant, has_nontrivial_c_coloring, monochromatic_report,
    ColoringFraction, MonochromaticReport, Offending,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Closures tried on the diagram route have at most this many crossings.
pub const CANDIDATE_CROSSINGS: u32 = 3;

/// Unknottable entries and their unknotting closures.
pub const REFERENCE_UNKNOTTABLE: [(&str, i64); 6] = [
    ("5_1", -1),
    ("6_1", -1),
    ("7_2", -1),
    ("7_5", 0),
    ("7_7", 0),
    ("7_14", -1),
];

/// Unlinkable entries and their unlinking closures; the splittable set is
/// the same.
pub const REFERENCE_UNLINKABLE: [(&str, i64); 1] = [("6_3", 0)];

const MANIFEST: &str = include_str!("../data/catalog/manifest.toml");

macro_rules! bundled_files {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../data/catalog/", $name)))),*]
    };
}

const FILES: &[(&str, &str)] = bundled_files!(
    "5_1.tangle",
    "6_1.tangle",
    "6_2.tangle",
    "6_3.tangle",
    "6_4.tangle",
    "7_1.tangle",
    "7_2.tangle",
    "7_3.tangle",
    "7_4.tangle",
    "7_5.tangle",
    "7_6.tangle",
    "7_7.tangle",
    "7_8.tangle",
    "7_9.tangle",
    "7_10.tangle",
    "7_11.tangle",
    "7_12.tangle",
    "7_13.tangle",
    "7_14.tangle",
    "7_15.tangle",
    "7_16.tangle",
    "7_17.tangle",
    "7_18.tangle",
);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("entry {name}: {message}")]
    Entry { name: String, message: String },
    #[error("entry {name}: consistency gate failed: {message}")]
    Gate { name: String, message: String },
    #[error("no catalog entry named {0}")]
    Missing(String),
}

/// An expected answer for one property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expected {
    No,
    Yes(Fraction),
}

impl Expected {
    pub fn matches(&self, status: &Status) -> bool {
        match self {
            Expected::No => status.is_no(),
            Expected::Yes(f) => status.closure() == Some(f),
        }
    }
}

impl std::str::FromStr for Expected {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "no" => Ok(Expected::No),
            t => t
                .parse()
                .map(Expected::Yes)
                .map_err(|e| format!("expected `no` or a closure fraction: {e}")),
        }
    }
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::No => write!(f, "no"),
            Expected::Yes(c) => write!(f, "yes, closure [{c}]"),
        }
    }
}

impl Serialize for Expected {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Expected::No => s.serialize_str("no"),
            Expected::Yes(c) => s.collect_str(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedVerdict {
    pub unknottable: Expected,
    pub unlinkable: Expected,
    pub splittable: Expected,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub diagram: TangleDiagram,
    pub expression: Option<TangleExpr>,
    /// Expression drawn in place of `expression` when the latter does not
    /// give a valid diagram as written.
    pub realization: Option<TangleExpr>,
    /// Expression in terms of other entries (`@name`).
    pub subtangle: Option<TangleExpr>,
    pub essential: bool,
    pub expected: Option<ExpectedVerdict>,
    pub notes: Option<String>,
}

impl CatalogEntry {
    /// An ad hoc entry for a diagram outside the catalog.
    pub fn from_diagram(
        name: &str,
        diagram: TangleDiagram,
        expression: Option<TangleExpr>,
        essential: bool,
    ) -> Self {
        CatalogEntry {
            name: name.to_string(),
            diagram,
            expression,
            realization: None,
            subtangle: None,
            essential,
            expected: None,
            notes: None,
        }
    }

    pub fn crossings(&self) -> usize {
        self.diagram.crossing_count()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    entry: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    name: String,
    diagram: String,
    expression: Option<String>,
    realization: Option<String>,
    subtangle: Option<String>,
    #[serde(default = "yes")]
    essential: bool,
    notes: Option<String>,
    expected: Option<RawExpected>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExpected {
    unknottable: String,
    unlinkable: String,
    splittable: String,
}

fn yes() -> bool {
    true
}

/// The catalog compiled into the library.
pub fn bundled_catalog() -> Result<Vec<CatalogEntry>, CatalogError> {
    load_from(MANIFEST, &|file| {
        FILES
            .iter()
            .find(|(name, _)| *name == file)
            .map(|(_, text)| text.to_string())
            .ok_or_else(|| CatalogError::Io {
                path: file.to_string(),
                message: "not bundled".into(),
            })
    })
}

/// Reads `manifest.toml` and the diagram files it names from `dir`.
pub fn load_catalog(dir: &Path) -> Result<Vec<CatalogEntry>, CatalogError> {
    let read = |file: &str| {
        let path = dir.join(file);
        std::fs::read_to_string(&path).map_err(|e| CatalogError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    };
    let manifest = read("manifest.toml")?;
    load_from(&manifest, &read)
}

pub fn load_from(
    manifest: &str,
    read: &dyn Fn(&str) -> Result<String, CatalogError>,
) -> Result<Vec<CatalogEntry>, CatalogError> {
    let raw: RawManifest =
        toml::from_str(manifest).map_err(|e| CatalogError::Manifest(e.to_string()))?;
    let mut out: Vec<CatalogEntry> = Vec::new();
    for r in raw.entry {
        let name = r.name.clone();
        let bad = |message: String| CatalogError::Entry {
            name: name.clone(),
            message,
        };
        if out.iter().any(|e| e.name == name) {
            return Err(bad("duplicate name".into()));
        }
        let text = read(&r.diagram)?;
        let diagram = parse_diagram(&text)
            .and_then(|d| d.into_tangle())
            .map_err(|e| bad(format!("{}: {e}", r.diagram)))?;
        diagram
            .validate()
            .map_err(|e| bad(format!("{}: {e}", r.diagram)))?;
        let parse = |field: &str, s: &Option<String>| -> Result<Option<TangleExpr>, CatalogError> {
            s.as_deref()
                .map(parse_expr)
                .transpose()
                .map_err(|e| bad(format!("{field}: {e}")))
        };
        let expression = parse("expression", &r.expression)?;
        let realization = parse("realization", &r.realization)?;
        let subtangle = parse("subtangle", &r.subtangle)?;
        if let Some(s) = &subtangle {
            for reference in s.references() {
                if !out.iter().any(|e| e.name == reference) {
                    return Err(bad(format!(
                        "subtangle refers to @{reference}, which is not an earlier entry"
                    )));
                }
            }
        }
        let expected = r
            .expected
            .map(|x| -> Result<ExpectedVerdict, String> {
                Ok(ExpectedVerdict {
                    unknottable: x.unknottable.parse()?,
                    unlinkable: x.unlinkable.parse()?,
                    splittable: x.splittable.parse()?,
                })
            })
            .transpose()
            .map_err(bad)?;
        let entry = CatalogEntry {
            name: r.name,
            diagram,
            expression,
            realization,
            subtangle,
            essential: r.essential,
            expected,
            notes: r.notes,
        };
        consistency_gate(&entry)?;
        out.push(entry);
    }
    Ok(out)
}

/// The diagram drawn from the expression must agree with the stored diagram
/// on the determinants of both closures and on the monochromatic report.
pub fn consistency_gate(entry: &CatalogEntry) -> Result<(), CatalogError> {
    let Some(expr) = entry.realization.as_ref().or(entry.expression.as_ref()) else {
        return Ok(());
    };
    let fail = |message: String| CatalogError::Gate {
        name: entry.name.clone(),
        message,
    };
    let built = TangleDiagram::from_expression(expr, &|_| None)
        .map_err(|e| fail(format!("{expr}: {e}")))?;
    built.validate().map_err(|e| fail(format!("{expr}: {e}")))?;
    let (d, b) = (&entry.diagram, &built);
    let dn = (
        determinant(&d.close_numerator()),
        determinant(&b.close_numerator()),
    );
    if dn.0 != dn.1 {
        return Err(fail(format!(
            "det N: diagram {} vs expression {}",
            dn.0, dn.1
        )));
    }
    let dd = (
        determinant(&d.close_denominator()),
        determinant(&b.close_denominator()),
    );
    if dd.0 != dd.1 {
        return Err(fail(format!(
            "det D: diagram {} vs expression {}",
            dd.0, dd.1
        )));
    }
    let (rd, rb) = (monochromatic_report(d), monochromatic_report(b));
    if rd != rb {
        return Err(fail(format!(
            "monochromatic report: diagram {rd:?} vs expression {rb:?}"
        )));
    }
    Ok(())
}

pub fn find<'a>(catalog: &'a [CatalogEntry], name: &str) -> Result<&'a CatalogEntry, CatalogError> {
    let name = name.strip_prefix('@').unwrap_or(name);
    catalog
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CatalogError::Missing(name.to_string()))
}

// ---------------------------------------------------------------------------
// Classification

/// The verdict of each route separately.
#[derive(Debug, Clone, Serialize)]
pub struct Routes {
    pub expression: Option<EmbedVerdict>,
    pub subtangle: Option<EmbedVerdict>,
    pub diagram: EmbedVerdict,
}

/// Rational closures with at most `max` crossings, fewest crossings first.
pub fn candidate_closures(max: u32) -> Vec<Fraction> {
    let bound = i64::from(max) + 1;
    let mut out = vec![Fraction::infinity()];
    for q in 1..=bound {
        for p in -bound * q..=bound * q {
            if p.gcd(&q) != 1 {
                continue;
            }
            let f = Fraction::of(p, q);
            if twist_crossings(&f) <= BigInt::from(max) {
                out.push(f);
            }
        }
    }
    out.sort_by_key(|f| (twist_crossings(f), f.den().clone(), f.num().clone()));
    out
}

fn is_unknot(l: &LinkDiagram) -> Option<bool> {
    if l.component_count() != 1 || !determinant(l).is_one() {
        return Some(false);
    }
    Some(jones_default(l).ok()? == LaurentPoly::one(Var::SqrtT))
}

fn is_unlink(l: &LinkDiagram) -> Option<bool> {
    if l.component_count() != 2 || !determinant(l).is_zero() {
        return Some(false);
    }
    Some(jones_default(l).ok()? == jones_loop_factor())
}

fn polychromatic_witness(d: &TangleDiagram, report: &MonochromaticReport) -> Option<u64> {
    let primes: Vec<u64> = match &report.offending_moduli {
        Offending::All => vec![2, 3, 5, 7],
        Offending::Primes(ps) => ps.iter().filter_map(|p| u64::try_from(p).ok()).collect(),
    };
    primes
        .into_iter()
        .find(|&p| has_nontrivial_c_coloring(d, p))
}

/// The diagram route on its own.
pub fn diagram_route(entry: &CatalogEntry) -> EmbedVerdict {
    let d = &entry.diagram;
    let mut evidence = Vec::new();
    let report = monochromatic_report(d);

    let mut extra: Vec<Fraction> = Vec::new();
    if let Some(x) = &entry.expected {
        for e in [&x.unknottable, &x.unlinkable, &x.splittable] {
            if let Expected::Yes(f) = e {
                extra.push(f.clone());
            }
        }
    }
    let mut candidates = candidate_closures(CANDIDATE_CROSSINGS);
    for f in extra {
        if !candidates.contains(&f) {
            candidates.push(f);
        }
    }

    let unknottable = if let Some(n) = polychromatic_witness(d, &report) {
        evidence.push(format!("nontrivial c-coloring by R_{n}"));
        Status::no(format!(
            "polychromatic R_{n} coloring; an unknotted closure admits none"
        ))
    } else {
        evidence.push(format!(
            "monochromatic for dihedral quandles (offending moduli: {})",
            report.offending_moduli
        ));
        let mut found = Vec::new();
        let mut inconclusive = false;
        for c in &candidates {
            match is_unknot(&d.plus(c).close_numerator()) {
                Some(true) => found.push(c.clone()),
                Some(false) => {}
                None => inconclusive = true,
            }
        }
        match found.first() {
            Some(c) => {
                evidence.push(format!(
                    "N(T + [{c}]) is a knot with Jones polynomial 1 and determinant 1 (invariant-certified)"
                ));
                if found.len() > 1 {
                    let list: Vec<String> = found.iter().map(|f| format!("[{f}]")).collect();
                    evidence.push(format!("unknot invariants for several closures: {}", list.join(", ")));
                }
                Status::Yes { closure: Some(c.clone()) }
            }
            None if inconclusive => Status::unknown("a candidate closure exceeded the crossing budget"),
            None => Status::unknown(format!(
                "no rational closure with at most {CANDIDATE_CROSSINGS} crossings gives unknot invariants"
            )),
        }
    };

    let knotted: Vec<usize> = (0..2)
        .filter(|&i| knotted_strand(d, i).unwrap_or(false))
        .collect();
    if !knotted.is_empty() {
        evidence.push(format!("knotted strings: {knotted:?}"));
    }

    let (mut unlinkable, mut splittable) = if report.r0_monochromatic {
        match coloring_fraction(d) {
            ColoringFraction::Fraction(f) => {
                let c = f.mirror();
                evidence.push(format!("R_0-monochromatic with coloring fraction {f}; the only candidate closure is [{c}]"));
                let l = d.plus(&c).close_numerator();
                evidence.push(format!("det N(T + [{c}]) = {}", determinant(&l)));
                match not_split_witness(&l) {
                    Ok(Some(w)) => {
                        let reason = format!("the candidate [{c}] does not split: {w}");
                        (Status::no(reason.clone()), Status::no(reason))
                    }
                    Ok(None) => {
                        match is_unlink(&l) {
                            Some(true) => {
                                evidence.push(format!(
                                "N(T + [{c}]) has two components, Jones polynomial -t^(1/2) - t^(-1/2) and determinant 0 (invariant-certified)"
                            ));
                                (Status::yes(c.clone()), Status::yes(c))
                            }
                            _ => {
                                let r = format!("N(T + [{c}]) has split-consistent invariants but is not certified");
                                (Status::unknown(r.clone()), Status::unknown(r))
                            }
                        }
                    }
                    Err(e) => (
                        Status::unknown(e.to_string()),
                        Status::unknown(e.to_string()),
                    ),
                }
            }
            other => {
                let r = format!("R_0-monochromatic but the coloring fraction is {other}");
                (Status::unknown(r.clone()), Status::unknown(r))
            }
        }
    } else {
        let r = "not R_0-monochromatic; no unique candidate closure";
        (Status::unknown(r), Status::unknown(r))
    };

    if !knotted.is_empty() && !unlinkable.is_no() {
        unlinkable = Status::no("a string is knotted, so every closure has a knotted component");
    }
    if entry.essential && unknottable.is_yes() {
        let r = "essential and unknottable, so neither unlinkable nor splittable";
        for s in [&mut unlinkable, &mut splittable] {
            if !s.is_no() {
                if s.is_yes() {
                    evidence.push(format!("conflict: {r}, yet {s}"));
                    *s = Status::unknown("conflicting certificates");
                } else {
                    *s = Status::no(r);
                }
            }
        }
    }
    EmbedVerdict {
        unknottable,
        unlinkable,
        splittable,
        evidence,
    }
}

/// Verdicts of the entries named in `expr`, classified recursively.
pub fn hints_for(expr: &TangleExpr, catalog: &[CatalogEntry]) -> Result<Hints, CatalogError> {
    let mut hints = Hints::default();
    for name in expr.references() {
        let entry = find(catalog, &name)?;
        let verdict = classify(entry, catalog);
        hints.named.insert(
            name,
            NamedHint {
                verdict,
                essential: entry.essential,
            },
        );
    }
    Ok(hints)
}

pub fn routes(entry: &CatalogEntry, catalog: &[CatalogEntry]) -> Routes {
    let expression = entry.expression.as_ref().map(|e| {
        evaluate(e, &Hints::default()).unwrap_or_else(|err| EmbedVerdict::unknown(&err.to_string()))
    });
    let subtangle = entry.subtangle.as_ref().map(|e| {
        hints_for(e, catalog)
            .map_err(|err| err.to_string())
            .and_then(|h| evaluate(e, &h).map_err(|err| err.to_string()))
            .unwrap_or_else(|err| EmbedVerdict::unknown(&err))
    });
    Routes {
        expression,
        subtangle,
        diagram: diagram_route(entry),
    }
}

fn merge(label: &str, a: Status, b: &Status, conflicts: &mut Vec<String>) -> Status {
    match (&a, b) {
        (_, Status::Unknown { .. }) => a,
        (Status::Unknown { .. }, _) => b.clone(),
        (Status::Yes { closure: x }, Status::Yes { closure: y }) if x == y => a,
        (Status::No { .. }, Status::No { .. }) => a,
        _ => {
            conflicts.push(format!("{label}: {a} vs {b}"));
            Status::unknown(format!("routes disagree: {a} vs {b}"))
        }
    }
}

/// Classifies an entry; references in its subtangle expression are looked up
/// in `catalog`.
pub fn classify(entry: &CatalogEntry, catalog: &[CatalogEntry]) -> EmbedVerdict {
    merge_routes(&routes(entry, catalog))
}

pub fn merge_routes(r: &Routes) -> EmbedVerdict {
    let mut all: Vec<(&str, &EmbedVerdict)> = Vec::new();
    if let Some(v) = &r.expression {
        all.push(("expression", v));
    }
    if let Some(v) = &r.subtangle {
        all.push(("subtangle", v));
    }
    all.push(("diagram", &r.diagram));
    let mut out = EmbedVerdict::unknown("no route applies");
    let mut conflicts = Vec::new();
    for (label, v) in &all {
        out.unknottable = merge(
            "unknottable",
            out.unknottable,
            &v.unknottable,
            &mut conflicts,
        );
        out.unlinkable = merge("unlinkable", out.unlinkable, &v.unlinkable, &mut conflicts);
        out.splittable = merge("splittable", out.splittable, &v.splittable, &mut conflicts);
        out.evidence.push(format!(
            "{label} route: unknottable {}; unlinkable {}; splittable {}",
            v.unknottable, v.unlinkable, v.splittable
        ));
        out.evidence
            .extend(v.evidence.iter().map(|e| format!("  {label}: {e}")));
    }
    out.evidence
        .extend(conflicts.into_iter().map(|c| format!("conflict: {c}")));
    out
}

// ---------------------------------------------------------------------------
// Report

#[derive(Debug, Clone, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub crossings: usize,
    pub verdict: EmbedVerdict,
    pub routes: Routes,
    pub coloring_fraction: ColoringFraction,
    pub monochromatic: MonochromaticReport,
    /// Polychromatic moduli shared with a named subtangle.
    pub shared_colorings: Vec<String>,
    pub expected: Option<ExpectedVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetMember {
    pub name: String,
    pub closure: Fraction,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub entries: Vec<EntryReport>,
    pub unknottable: Vec<SetMember>,
    pub unlinkable: Vec<SetMember>,
    pub splittable: Vec<SetMember>,
    pub diff: Vec<String>,
    pub matches: bool,
}

fn members(entries: &[EntryReport], pick: impl Fn(&EmbedVerdict) -> &Status) -> Vec<SetMember> {
    entries
        .iter()
        .filter_map(|e| match pick(&e.verdict) {
            Status::Yes { closure: Some(c) } => Some(SetMember {
                name: e.name.clone(),
                closure: c.clone(),
            }),
            _ => None,
        })
        .collect()
}

fn reference(list: &[(&str, i64)]) -> Vec<SetMember> {
    list.iter()
        .map(|&(n, c)| SetMember {
            name: n.to_string(),
            closure: Fraction::integer(c),
        })
        .collect()
}

fn set_diff(label: &str, got: &[SetMember], want: &[SetMember], diff: &mut Vec<String>) {
    for w in want {
        match got.iter().find(|g| g.name == w.name) {
            None => diff.push(format!("{label}: missing {} [{}]", w.name, w.closure)),
            Some(g) if g.closure != w.closure => diff.push(format!(
                "{label}: {} closure [{}], expected [{}]",
                w.name, g.closure, w.closure
            )),
            Some(_) => {}
        }
    }
    for g in got {
        if !want.iter().any(|w| w.name == g.name) {
            diff.push(format!("{label}: unexpected {} [{}]", g.name, g.closure));
        }
    }
}

pub fn report_entry(entry: &CatalogEntry, catalog: &[CatalogEntry]) -> EntryReport {
    let routes = routes(entry, catalog);
    let verdict = merge_routes(&routes);
    let monochromatic = monochromatic_report(&entry.diagram);
    let mut shared_colorings = Vec::new();
    if let Some(s) = &entry.subtangle {
        for name in s.references() {
            let Ok(base) = find(catalog, &name) else {
                continue;
            };
            if let Some(n) =
                polychromatic_witness(&base.diagram, &monochromatic_report(&base.diagram))
            {
                let here = has_nontrivial_c_coloring(&entry.diagram, n);
                shared_colorings.push(format!(
                    "{name} has a polychromatic R_{n} coloring; {} {}",
                    entry.name,
                    if here { "has one too" } else { "has none" }
                ));
            }
        }
    }
    EntryReport {
        name: entry.name.clone(),
        crossings: entry.crossings(),
        verdict,
        routes,
        coloring_fraction: coloring_fraction(&entry.diagram),
        monochromatic,
        shared_colorings,
        expected: entry.expected.clone(),
    }
}

/// Classifies every entry and compares the positive sets with the reference
/// sets and each entry with its manifest expectations.
pub fn reproduce_tables(catalog: &[CatalogEntry]) -> Report {
    let entries: Vec<EntryReport> = catalog.iter().map(|e| report_entry(e, catalog)).collect();
    let unknottable = members(&entries, |v| &v.unknottable);
    let unlinkable = members(&entries, |v| &v.unlinkable);
    let splittable = members(&entries, |v| &v.splittable);
    let mut diff = Vec::new();
    set_diff(
        "unknottable",
        &unknottable,
        &reference(&REFERENCE_UNKNOTTABLE),
        &mut diff,
    );
    set_diff(
        "unlinkable",
        &unlinkable,
        &reference(&REFERENCE_UNLINKABLE),
        &mut diff,
    );
    set_diff(
        "splittable",
        &splittable,
        &reference(&REFERENCE_UNLINKABLE),
        &mut diff,
    );
    for e in &entries {
        if let Some(x) = &e.expected {
            for (label, want, got) in [
                ("unknottable", &x.unknottable, &e.verdict.unknottable),
                ("unlinkable", &x.unlinkable, &e.verdict.unlinkable),
                ("splittable", &x.splittable, &e.verdict.splittable),
            ] {
                if !want.matches(got) {
                    diff.push(format!("{} {label}: got {got}, expected {want}", e.name));
                }
            }
        }
        if e.verdict.evidence.iter().any(|l| l.starts_with("conflict")) {
            diff.push(format!("{}: routes disagree", e.name));
        }
    }
    Report {
        schema: SCHEMA_VERSION,
        matches: diff.is_empty(),
        entries,
        unknottable,
        unlinkable,
        splittable,
        diff,
    }
}

fn short(s: &Status) -> String {
    match s {
        Status::Yes { closure: Some(c) } => format!("yes [{c}]"),
        Status::Yes { closure: None } => "yes".into(),
        Status::No { .. } => "no".into(),
        Status::Unknown { .. } => "unknown".into(),
    }
}

impl Report {
    pub fn to_text(&self, verbose: bool) -> String {
        let mut out = String::new();
        let line = |out: &mut String, s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(
            &mut out,
            format!(
                "{:<6} {:>3}  {:<12} {:<12} {:<12} {:<18} {}",
                "tangle",
                "cr",
                "unknottable",
                "unlinkable",
                "splittable",
                "coloring fraction",
                "offending moduli"
            ),
        );
        for e in &self.entries {
            line(
                &mut out,
                format!(
                    "{:<6} {:>3}  {:<12} {:<12} {:<12} {:<18} {}",
                    e.name,
                    e.crossings,
                    short(&e.verdict.unknottable),
                    short(&e.verdict.unlinkable),
                    short(&e.verdict.splittable),
                    e.coloring_fraction.to_string(),
                    e.monochromatic.offending_moduli
                ),
            );
            for s in &e.shared_colorings {
                line(&mut out, format!("       {s}"));
            }
            if verbose {
                for ev in &e.verdict.evidence {
                    line(&mut out, format!("       {ev}"));
                }
            }
        }
        let list = |set: &[SetMember]| {
            set.iter()
                .map(|m| format!("{} [{}]", m.name, m.closure))
                .collect::<Vec<_>>()
                .join(", ")
        };
        line(&mut out, String::new());
        line(
            &mut out,
            format!("unknottable: {}", list(&self.unknottable)),
        );
        line(&mut out, format!("unlinkable:  {}", list(&self.unlinkable)));
        line(&mut out, format!("splittable:  {}", list(&self.splittable)));
        if self.matches {
            line(&mut out, "all sets and entries match the reference".into());
        } else {
            line(&mut out, "MISMATCH".into());
            for d in &self.diff {
                line(&mut out, format!("  {d}"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog() -> Vec<CatalogEntry> {
        bundled_catalog().unwrap()
    }

    #[test]
    fn loads_every_entry() {
        let c = catalog();
        assert_eq!(c.len(), 23);
        assert!(c.iter().all(|e| e.crossings() <= 8));
        assert_eq!(
            find(&c, "7_1")
                .unwrap()
                .expression
                .as_ref()
                .unwrap()
                .to_string(),
            "[1/2] + [1/5]"
        );
    }

    #[test]
    fn candidate_list() {
        let c = candidate_closures(1);
        assert_eq!(
            c,
            vec![
                Fraction::infinity(),
                Fraction::zero(),
                Fraction::of(-1, 1),
                Fraction::of(1, 1)
            ]
        );
        assert!(candidate_closures(3).contains(&Fraction::of(-2, 3)));
    }

    #[test]
    fn gate_rejects_wrong_diagram() {
        let c = catalog();
        let mut e = find(&c, "7_1").unwrap().clone();
        e.diagram = find(&c, "7_3").unwrap().diagram.clone();
        assert!(matches!(
            consistency_gate(&e),
            Err(CatalogError::Gate { .. })
        ));
    }

    #[test]
    fn bad_manifest_names_the_entry() {
        let manifest = "[[entry]]\nname = \"x\"\ndiagram = \"x.tangle\"\nexpression = \"1/2 +\"\n";
        let err =
            load_from(manifest, &|_| Ok("tangle\nB NW=1 NE=1 SW=2 SE=2\n".into())).unwrap_err();
        assert!(
            matches!(err, CatalogError::Entry { ref name, .. } if name == "x"),
            "{err}"
        );
    }

    #[test]
    fn six_three_unlinks() {
        let c = catalog();
        let v = classify(find(&c, "6_3").unwrap(), &c);
        assert_eq!(v.unlinkable.closure(), Some(&Fraction::zero()));
        assert_eq!(v.splittable.closure(), Some(&Fraction::zero()));
        assert!(v.unknottable.is_no());
    }
}
