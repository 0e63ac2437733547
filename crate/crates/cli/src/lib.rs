//! Rendering and command bodies for the `pin4` binary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use pin4::corpus::{self, CorpusSummary, ManifoldRecord, RecordResult, TallyBucket};
use pin4::obstruction::{analyze, AnalysisReport, Geometry, LiftVerdict, PinC, SpinField};
use pin4::quatspin::lemma::lemma_table;

pub const CORPUS_ENV: &str = "PIN4_CORPUS_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
}

/// What a command printed and whether every check it ran passed.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub ok: bool,
}

/// One analyzed record, the unit of `analyze` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzedRecord {
    pub name: String,
    pub geometry: Geometry,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holonomy: Option<String>,
    pub report: AnalysisReport,
}

pub fn corpus_dir() -> PathBuf {
    match std::env::var_os(CORPUS_ENV) {
        Some(d) => PathBuf::from(d),
        None => PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/corpus")),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "YES"
    } else {
        "NO"
    }
}

fn verdict_line(out: &mut String, label: &str, v: &LiftVerdict) {
    if v.exists {
        let count = v.structure_count_log2.map_or(String::new(), |k| format!(" (2^{k} structures)"));
        let _ = writeln!(out, "{label}: YES{count}");
        if let Some(w) = &v.witness {
            let signs: Vec<String> =
                w.iter().map(|(g, s)| format!("{g}={}", if *s < 0 { "-1" } else { "+1" })).collect();
            let _ = writeln!(out, "  witness: {}", signs.join(" "));
        }
        return;
    }
    match &v.certificate {
        Some(c) => {
            let how = if c.assignments_checked > 0 { "exhaustive" } else { "linear solve" };
            let _ = writeln!(out, "{label}: NO ({how})");
            let _ = writeln!(out, "  certificate: {}; F2 rank {} < augmented rank {}", c.search, c.rank, c.augmented_rank);
        }
        None => {
            let _ = writeln!(out, "{label}: NO");
        }
    }
}

fn pin_c_str(p: PinC) -> &'static str {
    match p {
        PinC::Yes => "YES",
        PinC::Unknown => "UNKNOWN",
    }
}

pub fn render_report(rec: &AnalyzedRecord) -> String {
    let r = &rec.report;
    let mut out = String::new();
    let _ = writeln!(out, "name: {}", rec.name);
    let _ = writeln!(out, "geometry: {}", rec.geometry);
    let _ = writeln!(out, "holonomy: {}", rec.holonomy.as_deref().unwrap_or("infinite or too large"));
    let _ = writeln!(out, "orientable: {}", yes_no(r.orientable));
    let _ = writeln!(out, "beta1: {}", r.beta1);
    let _ = writeln!(out, "abelianization: {}", r.abelianization);
    let _ = writeln!(out, "w1^2=0: {}", yes_no(r.w1_square_zero));
    match &r.spin {
        SpinField::Verdict(v) => verdict_line(&mut out, "spin", v),
        SpinField::NotApplicable(_) => out.push_str("spin: N/A\n"),
    }
    verdict_line(&mut out, "pin+", &r.pin_plus);
    verdict_line(&mut out, "pin-", &r.pin_minus);
    let _ = writeln!(out, "parallelizable: {}", yes_no(r.parallelizable));
    let _ = writeln!(out, "pin^c: {}", pin_c_str(r.pin_c));
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

pub fn render_reports(recs: &[AnalyzedRecord]) -> String {
    recs.iter().map(render_report).collect::<Vec<_>>().join("\n")
}

fn short(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "yes",
        Some(false) => "no",
        None => "n/a",
    }
}

/// Left-aligned columns separated by two spaces.
fn grid<const N: usize>(header: &[&str; N], rows: &[[String; N]]) -> String {
    let mut widths = header.map(str::len);
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

/// Corpus results as one row per record, then mismatches, then the tally.
pub fn render_summary(s: &CorpusSummary) -> String {
    let header = ["name", "geometry", "orient", "w1^2=0", "spin", "pin+", "pin-", "parall", "holonomy", "status"];
    let rows: Vec<[String; 10]> = s
        .results
        .iter()
        .map(|r| {
            let rep = r.report.as_ref();
            let f = |g: fn(&AnalysisReport) -> Option<bool>| short(rep.and_then(g)).to_string();
            [
                r.name.clone(),
                r.geometry.to_string(),
                f(|x| Some(x.orientable)),
                f(|x| Some(x.w1_square_zero)),
                f(|x| x.spin.exists()),
                f(|x| Some(x.pin_plus.exists)),
                f(|x| Some(x.pin_minus.exists)),
                f(|x| Some(x.parallelizable)),
                r.holonomy.clone().unwrap_or_else(|| "-".into()),
                status(r).into(),
            ]
        })
        .collect();
    let mut out = grid(&header, &rows);
    for r in s.failures() {
        if let Some(e) = &r.error {
            let _ = writeln!(out, "error {}: {e}", r.name);
        }
        for m in &r.mismatches {
            let _ = writeln!(out, "mismatch {}: {} expected {}, got {}", r.name, m.field, m.expected, m.actual);
        }
    }
    if !s.tally.is_empty() {
        out.push_str("non-orientable tally:\n");
        for b in TallyBucket::ALL {
            let _ = writeln!(out, "  {b}: {}", s.tally.get(&b).copied().unwrap_or(0));
        }
    }
    let passed = s.results.iter().filter(|r| r.passed()).count();
    let _ = writeln!(out, "{passed}/{} records match", s.results.len());
    out
}

fn status(r: &RecordResult) -> &'static str {
    if r.error.is_some() {
        "ERROR"
    } else if r.mismatches.is_empty() {
        "ok"
    } else {
        "MISMATCH"
    }
}

pub fn analyze_records(records: &[ManifoldRecord]) -> Result<Vec<AnalyzedRecord>> {
    let mut out = records
        .iter()
        .map(|r| {
            let report = analyze(&r.holonomy).with_context(|| format!("record `{}`", r.name))?;
            Ok(AnalyzedRecord {
                name: r.name.clone(),
                geometry: r.geometry(),
                holonomy: corpus::holonomy_name(&r.holonomy),
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

pub fn cmd_analyze(path: &Path, format: Format) -> Result<Outcome> {
    let records = corpus::load_file(path)?;
    let analyzed = analyze_records(&records)?;
    let output = match format {
        Format::Table => render_reports(&analyzed),
        Format::Json => serde_json::to_string_pretty(&analyzed)? + "\n",
    };
    Ok(Outcome { output, ok: true })
}

/// Conjunctive `key=value` record filter; `name` accepts a trailing `*` for prefixes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Filter {
    geometry: Option<Geometry>,
    names: Vec<String>,
}

impl Filter {
    pub fn parse(exprs: &[String]) -> Result<Filter> {
        let mut f = Filter::default();
        for e in exprs {
            let Some((k, v)) = e.split_once('=') else {
                bail!("filter `{e}` is not of the form key=value");
            };
            match k {
                "geometry" => {
                    let g = Geometry::parse(v).with_context(|| {
                        let known: Vec<_> = Geometry::ALL.iter().map(|g| g.as_str()).collect();
                        format!("unknown geometry `{v}`; expected one of {}", known.join(", "))
                    })?;
                    if f.geometry.is_some_and(|h| h != g) {
                        bail!("conflicting geometry filters");
                    }
                    f.geometry = Some(g);
                }
                "name" => f.names.push(v.to_string()),
                _ => bail!("unknown filter key `{k}`; expected geometry or name"),
            }
        }
        Ok(f)
    }

    pub fn matches(&self, r: &ManifoldRecord) -> bool {
        self.geometry.is_none_or(|g| r.geometry() == g)
            && self.names.iter().all(|n| match n.strip_suffix('*') {
                Some(prefix) => r.name.starts_with(prefix),
                None => r.name == *n,
            })
    }
}

fn load_corpus(dir: &Path) -> Result<Vec<ManifoldRecord>> {
    corpus::load(dir).context("loading corpus")
}

pub fn cmd_corpus_run(dir: &Path, filters: &[String], format: Format) -> Result<Outcome> {
    let filter = Filter::parse(filters)?;
    let records: Vec<_> = load_corpus(dir)?.into_iter().filter(|r| filter.matches(r)).collect();
    let summary = corpus::run_all(&records);
    let output = match format {
        Format::Table => render_summary(&summary),
        Format::Json => serde_json::to_string_pretty(&summary)? + "\n",
    };
    Ok(Outcome { output, ok: summary.all_passed() })
}

pub fn cmd_corpus_verify(dir: &Path) -> Result<Outcome> {
    let summary = corpus::run_all(&load_corpus(dir)?);
    let mut output = String::new();
    for r in summary.failures() {
        if let Some(e) = &r.error {
            let _ = writeln!(output, "{}: analysis failed: {e}", r.name);
        }
        for m in &r.mismatches {
            let _ = writeln!(output, "{}: {}\n  - expected: {}\n  + computed: {}", r.name, m.field, m.expected, m.actual);
        }
    }
    let bad = summary.failures().count();
    let _ = writeln!(output, "{} records, {} mismatched", summary.results.len(), bad);
    Ok(Outcome { output, ok: bad == 0 })
}

pub fn cmd_lemma_tables() -> Outcome {
    let rows = lemma_table();
    let header = ["part", "subgroup", "ambient", "order", "computed", "claimed", "match"];
    let cells: Vec<[String; 7]> = rows
        .iter()
        .map(|r| {
            [
                r.part.clone(),
                r.subgroup.clone(),
                r.ambient.to_string(),
                r.fingerprint.order.to_string(),
                r.identified.clone().unwrap_or_else(|| "?".into()),
                r.claimed.clone(),
                yes_no(r.matches).to_string(),
            ]
        })
        .collect();
    let mut output = grid(&header, &cells);
    let ok = rows.iter().all(|r| r.matches);
    if !ok {
        output.push_str("some preimages do not match the claimed groups\n");
    }
    Outcome { output, ok }
}
