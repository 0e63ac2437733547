//! Bundled manifold records: loading, validation, and regression against expected verdicts.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fpgroup::FpGroup;
use crate::obstruction::{analyze, AnalysisReport, Geometry, HolonomyData, PinC};
use crate::quatspin::{identify_small_group, CayleyTable, GroupFingerprint, OrthMatrix4, PinElement};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {err}")]
    Io { path: PathBuf, err: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    #[error("{path}: record `{record}`: {message}")]
    Validation { path: PathBuf, record: String, message: String },
    #[error("{0}: no corpus files found")]
    Empty(PathBuf),
}

/// Fields the source states about a record; absent fields are not checked.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientable: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abelianization: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w1_square_zero: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spin: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pin_plus: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pin_minus: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parallelizable: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pin_c: Option<PinC>,
    /// Name of the image of the lifts in O(4), as printed by `identify_small_group`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holonomy: Option<String>,
}

/// On-disk form of a record.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordFile {
    pub name: String,
    pub source: String,
    pub geometry: Geometry,
    pub infrasolv: bool,
    pub generators: Vec<String>,
    pub relations: Vec<String>,
    /// Generators that pairwise commute; expands to their commutators.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub commuting: Vec<String>,
    pub lifts: BTreeMap<String, PinElement>,
    #[serde(default)]
    pub expected: Expected,
    #[serde(default)]
    pub notes: String,
}

#[derive(Debug, Clone)]
pub struct ManifoldRecord {
    pub name: String,
    pub source: String,
    pub holonomy: HolonomyData,
    pub expected: Expected,
    pub notes: String,
    pub relations: Vec<String>,
}

impl ManifoldRecord {
    pub fn geometry(&self) -> Geometry {
        self.holonomy.geometry
    }

    pub fn from_file(file: RecordFile) -> Result<Self, String> {
        let group = FpGroup::parse(&file.generators, &file.relations)
            .and_then(|g| g.with_commuting(&file.commuting))
            .map_err(|e| e.to_string())?;
        if let Some(extra) = file.lifts.keys().find(|k| !file.generators.contains(k)) {
            return Err(format!("lift given for unknown generator `{extra}`"));
        }
        let lifts = file
            .generators
            .iter()
            .map(|g| file.lifts.get(g).copied().ok_or_else(|| format!("no lift for generator `{g}`")))
            .collect::<Result<Vec<_>, _>>()?;
        let holonomy =
            HolonomyData::new(group, lifts, file.geometry, file.infrasolv).map_err(|e| e.to_string())?;
        Ok(ManifoldRecord {
            name: file.name,
            source: file.source,
            holonomy,
            expected: file.expected,
            notes: file.notes,
            relations: file.relations,
        })
    }
}

fn parse_error(path: &Path, e: serde_json::Error) -> CorpusError {
    CorpusError::Parse { path: path.to_path_buf(), line: e.line(), column: e.column(), message: e.to_string() }
}

/// Records from one file holding a record or an array of records.
pub fn load_file(path: &Path) -> Result<Vec<ManifoldRecord>, CorpusError> {
    let text = fs::read_to_string(path).map_err(|err| CorpusError::Io { path: path.to_path_buf(), err })?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| parse_error(path, e))?;
    let files: Vec<RecordFile> = match value {
        serde_json::Value::Array(_) => serde_json::from_value(value),
        _ => serde_json::from_value(value).map(|r| vec![r]),
    }
    .map_err(|e| CorpusError::Parse { path: path.to_path_buf(), line: 0, column: 0, message: e.to_string() })?;
    files
        .into_iter()
        .map(|f| {
            let record = f.name.clone();
            ManifoldRecord::from_file(f)
                .map_err(|message| CorpusError::Validation { path: path.to_path_buf(), record, message })
        })
        .collect()
}

/// A file, or every `*.json` file in a directory (sorted by file name).
pub fn load(path: &Path) -> Result<Vec<ManifoldRecord>, CorpusError> {
    let meta = fs::metadata(path).map_err(|err| CorpusError::Io { path: path.to_path_buf(), err })?;
    if meta.is_file() {
        return load_file(path);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)
        .map_err(|err| CorpusError::Io { path: path.to_path_buf(), err })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    if files.is_empty() {
        return Err(CorpusError::Empty(path.to_path_buf()));
    }
    files.sort();
    let mut out = Vec::new();
    for f in files {
        out.extend(load_file(&f)?);
    }
    let mut seen = HashSet::new();
    for r in &out {
        if !seen.insert(r.name.as_str()) {
            return Err(CorpusError::Validation {
                path: path.to_path_buf(),
                record: r.name.clone(),
                message: "duplicate record name".into(),
            });
        }
    }
    Ok(out)
}

/// The image of the lifts in O(4), as a finite group.
pub fn holonomy_image(h: &HolonomyData) -> Option<GroupFingerprint> {
    let gens: Vec<OrthMatrix4> = h.lifts().iter().map(|l| l.project()).collect();
    CayleyTable::generate(&gens, OrthMatrix4::identity(), |a, b| *a * *b, 1024).map(|t| t.fingerprint())
}

pub fn holonomy_name(h: &HolonomyData) -> Option<String> {
    holonomy_image(h).map(|fp| identify_small_group(&fp).map_or_else(|| format!("order {}", fp.order), |n| n.to_string()))
}

/// Where a non-orientable record falls by `w₁²` and Pin± verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TallyBucket {
    /// `w₁² = w₂ = 0`: both structures.
    Both,
    PinPlusOnly,
    PinMinusOnly,
    /// `w₁² = 0`, neither structure.
    NeitherW1SquareZero,
    /// `w₁² ≠ 0`, neither structure.
    NeitherW1SquareNonzero,
}

impl TallyBucket {
    pub const ALL: [TallyBucket; 5] = [
        TallyBucket::Both,
        TallyBucket::PinPlusOnly,
        TallyBucket::PinMinusOnly,
        TallyBucket::NeitherW1SquareZero,
        TallyBucket::NeitherW1SquareNonzero,
    ];

    /// Counts over all 47 non-orientable flat 4-manifolds.
    pub fn flat_total(self) -> usize {
        match self {
            TallyBucket::Both => 23,
            TallyBucket::PinPlusOnly => 7,
            TallyBucket::PinMinusOnly => 9,
            TallyBucket::NeitherW1SquareZero => 5,
            TallyBucket::NeitherW1SquareNonzero => 3,
        }
    }

    pub fn of(report: &AnalysisReport) -> Option<TallyBucket> {
        if report.orientable {
            return None;
        }
        Some(match (report.pin_plus.exists, report.pin_minus.exists, report.w1_square_zero) {
            (true, true, _) => TallyBucket::Both,
            (true, false, _) => TallyBucket::PinPlusOnly,
            (false, true, _) => TallyBucket::PinMinusOnly,
            (false, false, true) => TallyBucket::NeitherW1SquareZero,
            (false, false, false) => TallyBucket::NeitherW1SquareNonzero,
        })
    }
}

impl fmt::Display for TallyBucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TallyBucket::Both => "w1^2=0, both",
            TallyBucket::PinPlusOnly => "w1^2!=0, Pin+ only",
            TallyBucket::PinMinusOnly => "w1^2!=0, Pin- only",
            TallyBucket::NeitherW1SquareZero => "w1^2=0, neither",
            TallyBucket::NeitherW1SquareNonzero => "w1^2!=0, neither",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub field: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecordResult {
    pub name: String,
    pub geometry: Geometry,
    /// Absent when analysis itself failed; see `error`.
    pub report: Option<AnalysisReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holonomy: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub mismatches: Vec<Mismatch>,
}

impl RecordResult {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.mismatches.is_empty()
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub results: Vec<RecordResult>,
    pub tally: BTreeMap<TallyBucket, usize>,
}

impl CorpusSummary {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(RecordResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RecordResult> {
        self.results.iter().filter(|r| !r.passed())
    }
}

fn compare(expected: &Expected, report: &AnalysisReport, holonomy: Option<&str>) -> Vec<Mismatch> {
    let mut out = Vec::new();
    let mut check = |field: &str, want: Option<String>, got: String| {
        if let Some(want) = want {
            if want != got {
                out.push(Mismatch { field: field.into(), expected: want, actual: got });
            }
        }
    };
    let s = |x: Option<bool>| x.map(|b| b.to_string());
    check("orientable", s(expected.orientable), report.orientable.to_string());
    check("beta1", expected.beta1.map(|b| b.to_string()), report.beta1.to_string());
    check("abelianization", expected.abelianization.clone(), report.abelianization.clone());
    check("w1_square_zero", s(expected.w1_square_zero), report.w1_square_zero.to_string());
    let spin = report.spin.exists().map_or("N/A".to_string(), |b| b.to_string());
    check("spin", s(expected.spin), spin);
    check("pin_plus", s(expected.pin_plus), report.pin_plus.exists.to_string());
    check("pin_minus", s(expected.pin_minus), report.pin_minus.exists.to_string());
    check("parallelizable", s(expected.parallelizable), report.parallelizable.to_string());
    let pc = |p: PinC| serde_json::to_value(p).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    check("pin_c", expected.pin_c.map(pc), pc(report.pin_c));
    check("holonomy", expected.holonomy.clone(), holonomy.unwrap_or("infinite or too large").to_string());
    out
}

pub fn run_record(r: &ManifoldRecord) -> RecordResult {
    let holonomy = holonomy_name(&r.holonomy);
    let (report, error, mismatches) = match analyze(&r.holonomy) {
        Ok(rep) => {
            let m = compare(&r.expected, &rep, holonomy.as_deref());
            (Some(rep), None, m)
        }
        Err(e) => (None, Some(e.to_string()), Vec::new()),
    };
    RecordResult { name: r.name.clone(), geometry: r.geometry(), report, holonomy, error, mismatches }
}

/// Analyze every record and compare against its expected fields; results are name-sorted.
pub fn run_all(records: &[ManifoldRecord]) -> CorpusSummary {
    let mut results: Vec<RecordResult> = std::thread::scope(|s| {
        let handles: Vec<_> = records.iter().map(|r| s.spawn(move || run_record(r))).collect();
        handles.into_iter().map(|h| h.join().expect("analysis thread panicked")).collect()
    });
    results.sort_by(|a, b| a.name.cmp(&b.name));
    let mut tally = BTreeMap::new();
    for b in results.iter().filter_map(|r| r.report.as_ref().and_then(TallyBucket::of)) {
        *tally.entry(b).or_insert(0) += 1;
    }
    CorpusSummary { results, tally }
}

#[cfg(test)]
mod tests {
    use super::*;

    const KB: &str = r#"{
        "name": "kb-x-t2", "source": "test", "geometry": "E4", "infrasolv": true,
        "generators": ["x", "y", "z", "w"],
        "relations": ["x y x^-1 = y^-1", "x z = z x", "x w = w x"],
        "commuting": ["y", "z", "w"],
        "lifts": {
            "x": {"u": [[0,1,0,1],[0,1,0,1],[1,1,0,1],[0,1,0,1]], "v": [[0,1,0,1],[0,1,0,1],[-1,1,0,1],[0,1,0,1]], "c": 1},
            "y": {"u": [[1,1,0,1],[0,1,0,1],[0,1,0,1],[0,1,0,1]], "v": [[1,1,0,1],[0,1,0,1],[0,1,0,1],[0,1,0,1]], "c": 0},
            "z": {"u": [[1,1,0,1],[0,1,0,1],[0,1,0,1],[0,1,0,1]], "v": [[1,1,0,1],[0,1,0,1],[0,1,0,1],[0,1,0,1]], "c": 0},
            "w": {"u": [[1,1,0,1],[0,1,0,1],[0,1,0,1],[0,1,0,1]], "v": [[1,1,0,1],[0,1,0,1],[0,1,0,1],[0,1,0,1]], "c": 0}
        },
        "expected": {"orientable": false, "pin_plus": true, "pin_minus": true, "holonomy": "Z/2"},
        "notes": ""
    }"#;

    fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
        let p = dir.join(name);
        fs::write(&p, text).unwrap();
        p
    }

    fn tempdir(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("pin4-corpus-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&d);
        fs::create_dir_all(&d).unwrap();
        d
    }

    #[test]
    fn load_and_run() {
        let d = tempdir("ok");
        write(&d, "kb.json", KB);
        let recs = load(&d).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].holonomy.group().relators().len(), 6);
        let s = run_all(&recs);
        assert!(s.all_passed(), "{:?}", s.results);
        assert_eq!(s.tally.get(&TallyBucket::Both), Some(&1));
    }

    #[test]
    fn bad_relator_is_a_validation_error() {
        let d = tempdir("bad");
        let p = write(&d, "kb.json", &KB.replace("\"x z = z x\"", "\"x\""));
        match load(&p) {
            Err(CorpusError::Validation { record, message, .. }) => {
                assert_eq!(record, "kb-x-t2");
                assert!(message.contains("`x`"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_errors_have_locations() {
        let d = tempdir("parse");
        let p = write(&d, "broken.json", "{\n  \"name\": ");
        assert!(matches!(load(&p), Err(CorpusError::Parse { line: 2, .. })));
        let p = write(&d, "unknown.json", &KB.replace("\"notes\"", "\"nots\""));
        assert!(matches!(load_file(&p), Err(CorpusError::Parse { .. })));
    }

    #[test]
    fn mismatches_are_reported() {
        let d = tempdir("flip");
        write(&d, "kb.json", &KB.replace("\"pin_minus\": true", "\"pin_minus\": false"));
        let s = run_all(&load(&d).unwrap());
        assert!(!s.all_passed());
        let f: Vec<_> = s.failures().collect();
        assert_eq!(f[0].mismatches[0].field, "pin_minus");
    }

    #[test]
    fn empty_inputs() {
        let s = run_all(&[]);
        assert!(s.results.is_empty() && s.tally.is_empty());
        let d = tempdir("empty");
        assert!(matches!(load(&d), Err(CorpusError::Empty(_))));
        assert!(matches!(load(&d.join("missing")), Err(CorpusError::Io { .. })));
    }
}
