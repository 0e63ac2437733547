//! Orientation character, Spin/Pin± lift existence, and the assembled report.

pub mod gf2;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::QSqrt2;
use crate::fpgroup::{self, FpError, FpGroup, Word};
use crate::quatspin::{Ambient, OrthMatrix4, PinElement, QuatSpinError};

/// Brute force is skipped (and reported as such) above this many generators.
pub const BRUTE_FORCE_MAX_GENS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObstructionError {
    #[error("expected {expected} lifts, got {got}")]
    LiftCount { expected: usize, got: usize },
    #[error("relator `{relator}` does not project to the identity")]
    InvalidHolonomy { relator: String },
    #[error("lift of `{generator}` projects to I but is not (1,1) or (-1,-1)")]
    BadTranslationLift { generator: String },
    #[error("lift of `{generator}` is orientation-reversing; Spin needs orientable data")]
    NotOrientable { generator: String },
    #[error("relator `{relator}` evaluates outside the kernel {{(1,1),(-1,-1)}}")]
    BaselineNotInKernel { relator: String },
    #[error("brute force and the linear solve disagree in {0}")]
    OracleDisagreement(Ambient),
    #[error("eh - fg must be -1, got {0}")]
    ConstraintViolation(i64),
    #[error(transparent)]
    Group(#[from] FpError),
    #[error(transparent)]
    Pin(#[from] QuatSpinError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Geometry {
    E4,
    #[serde(rename = "NIL4")]
    Nil4,
    #[serde(rename = "NIL3xE1")]
    Nil3xE1,
    #[serde(rename = "SOL4_1")]
    Sol4_1,
    #[serde(rename = "SOL3xE1")]
    Sol3xE1,
    #[serde(rename = "SOL4_MN")]
    Sol4Mn,
    #[serde(rename = "SOL4_0")]
    Sol4_0,
    #[serde(rename = "OTHER")]
    Other,
}

impl Geometry {
    pub const ALL: [Geometry; 8] = [
        Geometry::E4,
        Geometry::Nil4,
        Geometry::Nil3xE1,
        Geometry::Sol4_1,
        Geometry::Sol3xE1,
        Geometry::Sol4Mn,
        Geometry::Sol4_0,
        Geometry::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Geometry::E4 => "E4",
            Geometry::Nil4 => "NIL4",
            Geometry::Nil3xE1 => "NIL3xE1",
            Geometry::Sol4_1 => "SOL4_1",
            Geometry::Sol3xE1 => "SOL3xE1",
            Geometry::Sol4Mn => "SOL4_MN",
            Geometry::Sol4_0 => "SOL4_0",
            Geometry::Other => "OTHER",
        }
    }

    pub fn parse(s: &str) -> Option<Geometry> {
        Geometry::ALL.into_iter().find(|g| g.as_str() == s)
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A presentation with one baseline Pin lift per generator.
///
/// Lifts are stored tagged `Pin⁺`; evaluation retags them for the requested ambient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolonomyData {
    group: FpGroup,
    lifts: Vec<PinElement>,
    pub geometry: Geometry,
    pub infrasolv: bool,
}

fn eval(word: &Word, lifts: &[PinElement], ambient: Ambient) -> PinElement {
    word.letters().iter().fold(PinElement::identity(ambient), |acc, &(g, e)| {
        acc.mul(&lifts[g].pow(e)).expect("lifts share the ambient")
    })
}

fn project_word(word: &Word, mats: &[OrthMatrix4], inverses: &[OrthMatrix4]) -> OrthMatrix4 {
    word.letters().iter().fold(OrthMatrix4::identity(), |acc, &(g, e)| {
        let m = if e > 0 { mats[g] } else { inverses[g] };
        (0..e.unsigned_abs()).fold(acc, |a, _| a * m)
    })
}

impl HolonomyData {
    pub fn new(group: FpGroup, lifts: Vec<PinElement>, geometry: Geometry, infrasolv: bool) -> Result<Self, ObstructionError> {
        if lifts.len() != group.ngens() {
            return Err(ObstructionError::LiftCount { expected: group.ngens(), got: lifts.len() });
        }
        let lifts = lifts.iter().map(|l| l.retag(Ambient::PinPlus)).collect::<Result<Vec<_>, _>>()?;
        let mats: Vec<OrthMatrix4> = lifts.iter().map(|l| l.project()).collect();
        let inverses: Vec<OrthMatrix4> = mats.iter().map(|m| m.transpose()).collect();
        for (name, (l, m)) in group.generator_names().iter().zip(lifts.iter().zip(&mats)) {
            if m.is_identity() && !(l.is_identity() || l.negated().is_identity()) {
                return Err(ObstructionError::BadTranslationLift { generator: name.clone() });
            }
        }
        for r in group.relators() {
            if !project_word(r, &mats, &inverses).is_identity() {
                let relator = r.display(group.generator_names()).to_string();
                return Err(ObstructionError::InvalidHolonomy { relator });
            }
        }
        Ok(HolonomyData { group, lifts, geometry, infrasolv })
    }

    pub fn group(&self) -> &FpGroup {
        &self.group
    }

    pub fn lifts(&self) -> &[PinElement] {
        &self.lifts
    }

    pub fn ngens(&self) -> usize {
        self.group.ngens()
    }

    /// The same data with the baseline lifts of the generators in `mask` negated.
    pub fn with_flipped_lifts(&self, mask: &[bool]) -> Self {
        let lifts = self.lifts.iter().zip(mask).map(|(l, &f)| if f { l.negated() } else { *l }).collect();
        HolonomyData { lifts, ..self.clone() }
    }

    /// The same data with every lift conjugated by `x`.
    pub fn conjugated(&self, x: &PinElement) -> Result<Self, ObstructionError> {
        let x = x.retag(Ambient::PinPlus)?;
        let lifts = self
            .lifts
            .iter()
            .map(|l| x.mul(l).and_then(|y| y.mul(&x.inv())))
            .collect::<Result<Vec<_>, _>>()?;
        HolonomyData::new(self.group.clone(), lifts, self.geometry, self.infrasolv)
    }

    fn lifts_in(&self, ambient: Ambient) -> Result<Vec<PinElement>, ObstructionError> {
        self.lifts
            .iter()
            .zip(self.group.generator_names())
            .map(|(l, name)| match l.retag(ambient) {
                Err(QuatSpinError::ReflectionInSpin) => {
                    Err(ObstructionError::NotOrientable { generator: name.clone() })
                }
                other => other.map_err(ObstructionError::from),
            })
            .collect()
    }

    fn relator_text(&self, r: &Word) -> String {
        r.display(self.group.generator_names()).to_string()
    }
}

/// Generator ↦ 1 when its holonomy reverses orientation.
pub fn orientation_character(h: &HolonomyData) -> Vec<bool> {
    h.lifts.iter().map(|l| l.project().det() == QSqrt2::int(-1)).collect()
}

/// Evidence accompanying a negative verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub search: String,
    pub assignments_checked: u64,
    /// Rank of the exponent matrix mod 2.
    pub rank: usize,
    /// Rank of the matrix augmented by the baseline signs; larger means no solution.
    pub augmented_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftVerdict {
    pub exists: bool,
    /// Signs applied to the baseline lifts, present iff `exists`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<BTreeMap<String, i8>>,
    /// `log₂` of the number of structures, present iff `exists`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub structure_count_log2: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<Certificate>,
}

/// Baseline: which relators evaluate to `(-1,-1)` with the unsigned lifts.
fn baseline(h: &HolonomyData, lifts: &[PinElement], ambient: Ambient) -> Result<Vec<u8>, ObstructionError> {
    h.group
        .relators()
        .iter()
        .map(|r| {
            let v = eval(r, lifts, ambient);
            if v.is_identity() {
                Ok(0)
            } else if v.negated().is_identity() {
                Ok(1)
            } else {
                Err(ObstructionError::BaselineNotInKernel { relator: h.relator_text(r) })
            }
        })
        .collect()
}

fn signed(lifts: &[PinElement], mask: u64) -> Vec<PinElement> {
    lifts.iter().enumerate().map(|(i, l)| if mask >> i & 1 == 1 { l.negated() } else { *l }).collect()
}

/// Method (a): try every sign assignment, evaluating relators directly.
///
/// Returns `None` when there are too many generators to enumerate.
pub fn lift_exists_brute_force(h: &HolonomyData, ambient: Ambient) -> Result<Option<bool>, ObstructionError> {
    let lifts = h.lifts_in(ambient)?;
    baseline(h, &lifts, ambient)?;
    let n = h.ngens();
    if n > BRUTE_FORCE_MAX_GENS {
        return Ok(None);
    }
    Ok(Some((0..1u64 << n).any(|mask| {
        let s = signed(&lifts, mask);
        h.group.relators().iter().all(|r| eval(r, &s, ambient).is_identity())
    })))
}

/// Method (b): solve `A·ε = b` over 𝔽₂.
pub fn lift_exists_linear(h: &HolonomyData, ambient: Ambient) -> Result<gf2::Gf2Solution, ObstructionError> {
    let lifts = h.lifts_in(ambient)?;
    let b = baseline(h, &lifts, ambient)?;
    Ok(gf2::solve(&fpgroup::exponent_matrix_mod2(&h.group), &b, h.ngens()))
}

pub fn lift_exists(h: &HolonomyData, ambient: Ambient) -> Result<LiftVerdict, ObstructionError> {
    let lin = lift_exists_linear(h, ambient)?;
    let brute = lift_exists_brute_force(h, ambient)?;
    if brute.is_some_and(|b| b != lin.solution.is_some()) {
        return Err(ObstructionError::OracleDisagreement(ambient));
    }
    let n = h.ngens();
    Ok(match &lin.solution {
        Some(eps) => {
            let names = h.group.generator_names();
            let witness = names.iter().zip(eps).map(|(g, &e)| (g.clone(), if e == 1 { -1 } else { 1 })).collect();
            LiftVerdict {
                exists: true,
                witness: Some(witness),
                structure_count_log2: Some(lin.nullity(n)),
                certificate: None,
            }
        }
        None => LiftVerdict {
            exists: false,
            witness: None,
            structure_count_log2: None,
            certificate: Some(Certificate {
                search: match brute {
                    Some(_) => format!("exhaustive search over 2^{n} assignments"),
                    None => "linear solve only".to_string(),
                },
                assignments_checked: if brute.is_some() { 1 << n } else { 0 },
                rank: lin.rank,
                augmented_rank: lin.augmented_rank,
            }),
        },
    })
}

/// Spin verdict, or `N/A` for non-orientable data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpinField {
    Verdict(LiftVerdict),
    NotApplicable(NotApplicable),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NotApplicable {
    #[serde(rename = "N/A")]
    NA,
}

impl SpinField {
    pub fn exists(&self) -> Option<bool> {
        match self {
            SpinField::Verdict(v) => Some(v.exists),
            SpinField::NotApplicable(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PinC {
    #[serde(rename = "YES")]
    Yes,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub orientable: bool,
    pub beta1: usize,
    pub abelianization: String,
    pub w1_square_zero: bool,
    pub spin: SpinField,
    pub pin_plus: LiftVerdict,
    pub pin_minus: LiftVerdict,
    pub parallelizable: bool,
    pub pin_c: PinC,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub fn analyze(h: &HolonomyData) -> Result<AnalysisReport, ObstructionError> {
    let w1 = orientation_character(h);
    let orientable = w1.iter().all(|&b| !b);
    let ab = fpgroup::abelianize(&h.group);
    let w1_square_zero = fpgroup::w1_square_zero(&h.group, &w1)?;
    let spin = if orientable {
        SpinField::Verdict(lift_exists(h, Ambient::Spin)?)
    } else {
        SpinField::NotApplicable(NotApplicable::NA)
    };
    let pin_plus = lift_exists(h, Ambient::PinPlus)?;
    let pin_minus = lift_exists(h, Ambient::PinMinus)?;
    let spin_ok = spin.exists() == Some(true);
    let mut notes = Vec::new();
    if orientable && spin_ok && !h.infrasolv {
        notes.push("not infrasolv: chi = sigma = 0 not assumed, parallelizable reported false".to_string());
    }
    let pin_c = if orientable || pin_plus.exists || pin_minus.exists { PinC::Yes } else { PinC::Unknown };
    Ok(AnalysisReport {
        orientable,
        beta1: ab.rank,
        abelianization: ab.describe(),
        w1_square_zero,
        spin,
        pin_plus,
        pin_minus,
        parallelizable: orientable && spin_ok && h.infrasolv,
        pin_c,
        notes,
    })
}

/// Parallelizability of the Sol³×E¹ Klein-bottle/torus bundles with fibre
/// monodromy `[[e, f], [g, h]]` and twist `(m, n)`: true iff `(m, n)` mod 2 is
/// not in the 𝔽₂ image of `[[e-1, f], [g, h-1]]` acting on row vectors.
pub fn kb_bundle_criterion(e: i64, f: i64, g: i64, h: i64, m: i64, n: i64) -> Result<bool, ObstructionError> {
    let det = e * h - f * g;
    if det != -1 {
        return Err(ObstructionError::ConstraintViolation(det));
    }
    let bit = |x: i64| x.rem_euclid(2) as u8;
    // exponent vectors are rows, so the image is the row space
    let (c1, c2) = ((bit(e - 1), bit(f)), (bit(g), bit(h - 1)));
    let target = (bit(m), bit(n));
    let image = [(0, 0), c1, c2, (c1.0 ^ c2.0, c1.1 ^ c2.1)];
    Ok(!image.contains(&target))
}
