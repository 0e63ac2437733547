//! Preimages in Pin± of the elementary abelian subgroups of O(4) used by the
//! Pin± search, checked against independent models of the stated groups.

use serde::Serialize;

use super::group::{direct_product, metacyclic, CayleyTable, GroupFingerprint, GroupName};
use super::{closure, fingerprint, identify_small_group, Ambient, PinElement, Quat, DEFAULT_CLOSURE_CAP};

/// One preimage `ρ±⁻¹(A)` next to the group it is claimed to be.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaRow {
    pub part: String,
    pub subgroup: String,
    pub ambient: Ambient,
    pub fingerprint: GroupFingerprint,
    pub identified: Option<String>,
    pub claimed: String,
    pub claimed_fingerprint: GroupFingerprint,
    pub matches: bool,
}

/// Generators of `A` as projections of Pin elements.
#[derive(Clone, Copy)]
enum Gen {
    R1,
    MinusR1,
    R2,
    R3,
    R1R2,
    R2R3,
    R2R4,
}

impl Gen {
    fn lift(self, amb: Ambient) -> PinElement {
        let (i, j, k, one) = (Quat::i(), Quat::j(), Quat::k(), Quat::ONE);
        let (u, v, c) = match self {
            Gen::R1 => (one, one, true),
            Gen::MinusR1 => (one, -one, true),
            Gen::R2 => (i, -i, true),
            Gen::R3 => (j, -j, true),
            Gen::R1R2 => (i, -i, false),
            Gen::R2R3 => (k, k, false),
            Gen::R2R4 => (j, j, false),
        };
        PinElement::new(u, v, c, amb).expect("unit lift")
    }

    fn label(self) -> &'static str {
        match self {
            Gen::R1 => "R1",
            Gen::MinusR1 => "-R1",
            Gen::R2 => "R2",
            Gen::R3 => "R3",
            Gen::R1R2 => "R1R2",
            Gen::R2R3 => "R2R3",
            Gen::R2R4 => "R2R4",
        }
    }
}

/// `⟨τ, ξ, η | ξ² = (ξη)² = η², τ² = ξᵏ, τξτ⁻¹ = ξ^±1, τη = ητ⟩`, realised as
/// pairs (element of Q(8), power of τ). `invert` selects `τξτ⁻¹ = ξ⁻¹`.
fn q8_extension(invert: bool, k: u64) -> CayleyTable {
    // Q(8) as a^p b^e with a⁴ = 1, b² = a², bab⁻¹ = a⁻¹
    let q8 = |x: (u64, u64), y: (u64, u64)| {
        let l = if x.1 == 1 { (4 - y.0) % 4 } else { y.0 };
        let (mut p, mut e) = ((x.0 + l) % 4, x.1 + y.1);
        if e == 2 {
            e = 0;
            p = (p + 2) % 4;
        }
        (p, e)
    };
    let alpha = |y: (u64, u64)| if invert { ((4 - y.0) % 4, y.1) } else { y };
    let mul = |x: &((u64, u64), u8), y: &((u64, u64), u8)| {
        let twisted = if x.1 == 1 { alpha(y.0) } else { y.0 };
        let mut q = q8(x.0, twisted);
        if x.1 == 1 && y.1 == 1 {
            q = q8(q, (k % 4, 0));
        }
        (q, x.1 ^ y.1)
    };
    let gens = [((0, 0), 1u8), ((1, 0), 0), ((0, 1), 0)];
    CayleyTable::generate(&gens, ((0, 0), 0), mul, 64).expect("finite model")
}

type Claim = (&'static str, fn() -> CayleyTable);

struct Case {
    part: &'static str,
    gens: &'static [Gen],
    claims: [Claim; 2],
}

fn z2() -> CayleyTable {
    metacyclic(2, 1, 0, 1)
}

fn cases() -> Vec<Case> {
    vec![
        Case {
            part: "R1",
            gens: &[Gen::R1],
            claims: [("Z/2^2", || metacyclic(2, 2, 0, 1)), ("Z/4", || metacyclic(4, 1, 0, 1))],
        },
        Case {
            part: "(1)",
            gens: &[Gen::R1, Gen::R2R3],
            claims: [("Z/4+Z/2", || metacyclic(4, 2, 0, 1)), ("Z/4+Z/2", || metacyclic(4, 2, 0, 1))],
        },
        Case {
            part: "(2)",
            gens: &[Gen::R1, Gen::R1R2],
            claims: [("D8", || metacyclic(4, 2, 0, 3)), ("Q(8)", || metacyclic(4, 2, 2, 3))],
        },
        Case {
            part: "(3)",
            gens: &[Gen::MinusR1, Gen::R1R2],
            claims: [("Q(8)", || metacyclic(4, 2, 2, 3)), ("D8", || metacyclic(4, 2, 0, 3))],
        },
        Case {
            part: "(4)",
            gens: &[Gen::R1, Gen::R2, Gen::R3],
            claims: [("<t,x,y> with t^2=1", || q8_extension(true, 0)), ("<t,x,y> with t^2=x^2", || q8_extension(true, 2))],
        },
        Case {
            part: "(5)",
            gens: &[Gen::R1, Gen::R2R3, Gen::R2R4],
            claims: [
                ("Z/2xQ(8)", || direct_product(&z2(), &metacyclic(4, 2, 2, 3))),
                ("<t,x,y> with t central, t^2=x^2", || q8_extension(false, 2)),
            ],
        },
    ]
}

/// Rows for the extension-inequivalence check (`⟨R₁⟩`) and Lemma parts (1)–(5),
/// Pin⁺ before Pin⁻ in each case.
pub fn lemma_table() -> Vec<LemmaRow> {
    let mut rows = Vec::new();
    for case in cases() {
        let subgroup = format!("<{}>", case.gens.iter().map(|g| g.label()).collect::<Vec<_>>().join(","));
        for (amb, (claimed, model)) in [Ambient::PinPlus, Ambient::PinMinus].into_iter().zip(case.claims) {
            let mut gens: Vec<PinElement> = case.gens.iter().map(|g| g.lift(amb)).collect();
            gens.push(PinElement::minus_one(amb));
            let elems = closure(&gens, DEFAULT_CLOSURE_CAP).expect("finite preimage");
            let fp = fingerprint(&elems).expect("closed");
            let claimed_fingerprint = model().fingerprint();
            rows.push(LemmaRow {
                part: case.part.to_string(),
                subgroup: subgroup.clone(),
                ambient: amb,
                identified: identify_small_group(&fp).map(|n| n.to_string()),
                matches: fp == claimed_fingerprint,
                fingerprint: fp,
                claimed: claimed.to_string(),
                claimed_fingerprint,
            });
        }
    }
    rows
}

/// Name of the group a presentation model of part (4) or (5) realises, when known.
pub fn model_name(invert: bool, k: u64) -> Option<GroupName> {
    identify_small_group(&q8_extension(invert, k).fingerprint())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_row_matches() {
        let rows = lemma_table();
        assert_eq!(rows.len(), 12);
        for r in &rows {
            assert!(r.matches, "part {} in {}: got {:?}", r.part, r.ambient, r.identified);
        }
    }

    #[test]
    fn models_of_the_order_16_presentations() {
        assert_eq!(model_name(true, 0), Some(GroupName::CentralProduct16));
        assert_eq!(model_name(true, 2), Some(GroupName::Z2TimesQ8));
        assert_eq!(model_name(false, 2), Some(GroupName::CentralProduct16));
    }

    #[test]
    fn preimages_have_twice_the_order() {
        for r in lemma_table() {
            let k = r.subgroup.matches(',').count() as u64 + 1;
            assert_eq!(r.fingerprint.order, 1 << (k + 1));
        }
    }
}
