//! Acceptance criteria 1-9, one PASS/FAIL line each.
//!
//! `cargo test -p pin4 --test acceptance -- --nocapture` shows the lines.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use pin4::corpus::{self, ManifoldRecord, TallyBucket};
use pin4::fpgroup::{abelianize, FpGroup};
use pin4::obstruction::{
    analyze, kb_bundle_criterion, lift_exists, lift_exists_brute_force, lift_exists_linear, Geometry, HolonomyData,
};
use pin4::quatspin::lemma::lemma_table;
use pin4::quatspin::{Ambient, PinElement, Quat};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bundled() -> Vec<ManifoldRecord> {
    corpus::load(Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus"))).expect("bundled corpus")
}

fn find<'a>(recs: &'a [ManifoldRecord], name: &str) -> Result<&'a ManifoldRecord, String> {
    recs.iter().find(|r| r.name == name).ok_or_else(|| format!("no record {name}"))
}

fn non_spin_triple(recs: &[ManifoldRecord]) -> Check {
    let start = Instant::now();
    for name in ["Gamma7", "Gamma9", "Delta4"] {
        let rep = analyze(&find(recs, name)?.holonomy).map_err(|e| e.to_string())?;
        ensure(rep.orientable && rep.spin.exists() == Some(false) && !rep.parallelizable, || {
            format!("{name}: {rep:?}")
        })?;
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(1), || format!("took {took:?}"))?;
    let mut non_spin: Vec<&str> = recs
        .iter()
        .filter(|r| r.geometry() == Geometry::E4)
        .filter_map(|r| analyze(&r.holonomy).ok().map(|rep| (r, rep)))
        .filter(|(_, rep)| rep.orientable && rep.spin.exists() == Some(false))
        .map(|(r, _)| r.name.as_str())
        .collect();
    non_spin.sort();
    ensure(non_spin == ["Delta4", "Gamma7", "Gamma9"], || format!("orientable flat non-Spin: {non_spin:?}"))?;
    Ok(format!("Gamma7, Gamma9, Delta4 not Spin, not parallelizable ({took:?}); no other orientable flat record"))
}

fn lemma_rows() -> Check {
    let rows = lemma_table();
    let want: &[(&str, [&str; 2])] = &[
        ("(1)", ["Z/4+Z/2", "Z/4+Z/2"]),
        ("(2)", ["D8", "Q(8)"]),
        ("(3)", ["Q(8)", "D8"]),
        ("(5)", ["Z/2xQ(8)", "Q(8)oZ/4"]),
    ];
    for r in &rows {
        ensure(r.matches, || format!("part {} {}: fingerprint differs from {}", r.part, r.ambient, r.claimed))?;
    }
    for (part, names) in want {
        let got: Vec<_> = rows.iter().filter(|r| r.part == *part).map(|r| r.identified.clone().unwrap_or_default()).collect();
        ensure(got == names, || format!("part {part}: {got:?}"))?;
    }
    let four: Vec<_> = rows.iter().filter(|r| r.part == "(4)").map(|r| r.fingerprint.order).collect();
    ensure(four == [16, 16], || format!("part (4) orders {four:?}"))?;
    Ok("parts (1)-(5) match their stated groups in Pin+ and Pin-".into())
}

fn extension_inequivalence() -> Check {
    let rows = lemma_table();
    let r1: Vec<_> = rows.iter().filter(|r| r.part == "R1").map(|r| (r.ambient, r.identified.clone())).collect();
    let want = vec![(Ambient::PinPlus, Some("Z/2^2".to_string())), (Ambient::PinMinus, Some("Z/4".to_string()))];
    ensure(r1 == want, || format!("{r1:?}"))?;
    Ok("preimage of <R1> is Z/2^2 in Pin+, Z/4 in Pin-".into())
}

fn regression(recs: &[ManifoldRecord]) -> Check {
    let start = Instant::now();
    let summary = corpus::run_all(recs);
    let took = start.elapsed();
    let bad: Vec<_> = summary.failures().map(|r| r.name.clone()).collect();
    ensure(bad.is_empty(), || format!("mismatched: {bad:?}"))?;
    ensure(took < Duration::from_secs(10), || format!("took {took:?}"))?;
    let abs: Vec<String> = summary.results.iter().filter_map(|r| r.report.as_ref()).map(|r| r.abelianization.clone()).collect();
    for a in ["Z/2+Z/4+Z/4", "Z/4+Z/4", "Z/2+Z/2+Z/4"] {
        ensure(abs.iter().any(|x| x == a), || format!("no record with abelianization {a}"))?;
    }
    Ok(format!("{} records match their expected fields ({took:?})", summary.results.len()))
}

fn expected_bucket(r: &ManifoldRecord) -> Option<TallyBucket> {
    let e = &r.expected;
    if e.orientable != Some(false) {
        return None;
    }
    Some(match (e.pin_plus?, e.pin_minus?, e.w1_square_zero?) {
        (true, true, _) => TallyBucket::Both,
        (true, false, _) => TallyBucket::PinPlusOnly,
        (false, true, _) => TallyBucket::PinMinusOnly,
        (false, false, true) => TallyBucket::NeitherW1SquareZero,
        (false, false, false) => TallyBucket::NeitherW1SquareNonzero,
    })
}

/// Records whose expected verdicts follow the computation where the source text says otherwise.
fn disputed(r: &ManifoldRecord) -> bool {
    r.notes.contains("The text states")
}

fn tally(recs: &[ManifoldRecord]) -> Check {
    let flat: Vec<_> = recs.iter().filter(|r| r.geometry() == Geometry::E4 && r.expected.orientable == Some(false)).collect();
    let mut counts: BTreeMap<TallyBucket, (usize, usize)> = BTreeMap::new();
    for r in &flat {
        let want = expected_bucket(r).ok_or_else(|| format!("{}: expected fields incomplete", r.name))?;
        let rep = analyze(&r.holonomy).map_err(|e| e.to_string())?;
        let got = TallyBucket::of(&rep);
        ensure(got == Some(want), || format!("{} lands in {got:?}, expected {want}", r.name))?;
        let c = counts.entry(want).or_default();
        c.0 += 1;
        c.1 += usize::from(!disputed(r));
    }
    let mut parts = Vec::new();
    for b in TallyBucket::ALL {
        let (all, undisputed) = counts.get(&b).copied().unwrap_or_default();
        ensure(undisputed <= b.flat_total(), || format!("{b}: {undisputed} undisputed records, total {}", b.flat_total()))?;
        let extra = if all > b.flat_total() { format!(", {} over with disputed records", all - b.flat_total()) } else { String::new() };
        parts.push(format!("{b} {all}/{}{extra}", b.flat_total()));
    }
    let n_disputed = flat.iter().filter(|r| disputed(r)).count();
    Ok(format!("{} non-orientable flat records: {}; {n_disputed} disputed", flat.len(), parts.join(", ")))
}

fn geometric(recs: &[ManifoldRecord]) -> Check {
    let rep = |n: &str| -> Result<_, String> { analyze(&find(recs, n)?.holonomy).map_err(|e| e.to_string()) };
    ensure(rep("Nil4")?.spin.exists() == Some(false), || "Nil4 is Spin".into())?;
    ensure(rep("Sol4_1-parallelizable")?.parallelizable, || "q=4 instance not parallelizable".into())?;
    ensure(!rep("Sol4_1-not-parallelizable")?.parallelizable, || "q=2 instance parallelizable".into())?;
    ensure(rep("Nil3xE1")?.spin.exists() == Some(false), || "Nil3xE1 is Spin".into())?;
    Ok("Nil4 and Nil3xE1 not Spin; Sol4_1 q=4 parallelizable, q=2 not".into())
}

fn oracles_agree(h: &HolonomyData, what: &str) -> Result<(), String> {
    let orientable = pin4::obstruction::orientation_character(h).iter().all(|&b| !b);
    let homs = abelianize(h.group()).hom_to_z2_log2();
    let ambients: &[Ambient] = if orientable { &Ambient::ALL } else { &[Ambient::PinPlus, Ambient::PinMinus] };
    for &amb in ambients {
        let lin = lift_exists_linear(h, amb).map_err(|e| format!("{what}: {e}"))?;
        let brute = lift_exists_brute_force(h, amb).map_err(|e| format!("{what}: {e}"))?;
        ensure(brute == Some(lin.solution.is_some()), || format!("{what} {amb}: brute {brute:?}, linear {:?}", lin.solution))?;
        let v = lift_exists(h, amb).map_err(|e| e.to_string())?;
        if v.exists {
            ensure(v.structure_count_log2 == Some(homs), || {
                format!("{what} {amb}: count 2^{:?}, |Hom(pi,Z/2)| = 2^{homs}", v.structure_count_log2)
            })?;
        }
    }
    Ok(())
}

fn oracle_equivalence(recs: &[ManifoldRecord]) -> Check {
    for r in recs {
        oracles_agree(&r.holonomy, &r.name)?;
    }
    let mut rng = StdRng::seed_from_u64(0x5eed_0004);
    for i in 0..100 {
        let r = &recs[rng.gen_range(0..recs.len())];
        let mask: Vec<bool> = (0..r.holonomy.ngens()).map(|_| rng.gen_bool(0.5)).collect();
        let flipped = r.holonomy.with_flipped_lifts(&mask);
        oracles_agree(&flipped, &format!("{} perturbation {i}", r.name))?;
        for amb in [Ambient::PinPlus, Ambient::PinMinus] {
            let a = lift_exists(&r.holonomy, amb).map_err(|e| e.to_string())?.exists;
            let b = lift_exists(&flipped, amb).map_err(|e| e.to_string())?.exists;
            ensure(a == b, || format!("{} {amb}: existence changed under sign flips", r.name))?;
        }
    }
    let s2 = Quat::int(1, 1, 0, 0).scaled_inv_sqrt2();
    let x = PinElement::new(s2, Quat::j(), false, Ambient::PinPlus).map_err(|e| e.to_string())?;
    for r in recs.iter().filter(|r| r.holonomy.ngens() <= 6) {
        let c = r.holonomy.conjugated(&x).map_err(|e| format!("{}: {e}", r.name))?;
        let (a, b) = (analyze(&r.holonomy), analyze(&c));
        let same = match (&a, &b) {
            (Ok(a), Ok(b)) => a.pin_plus.exists == b.pin_plus.exists && a.pin_minus.exists == b.pin_minus.exists,
            _ => false,
        };
        ensure(same, || format!("{}: verdicts change under conjugation", r.name))?;
    }
    Ok(format!("{} records and 100 sign perturbations: brute force = F2 solve, counts = |Hom(pi,Z/2)|", recs.len()))
}

fn gating(recs: &[ManifoldRecord]) -> Check {
    for r in recs {
        let rep = analyze(&r.holonomy).map_err(|e| e.to_string())?;
        let (p, m) = (rep.pin_plus.exists, rep.pin_minus.exists);
        if rep.orientable {
            ensure(rep.spin.exists() == Some(p) && p == m, || format!("{}: orientable verdicts differ", r.name))?;
        } else if rep.w1_square_zero {
            ensure(p == m, || format!("{}: w1^2=0 but pin+ {p}, pin- {m}", r.name))?;
        } else {
            ensure(!(p && m), || format!("{}: w1^2!=0 but both structures", r.name))?;
        }
    }
    Ok("w1^2=0 gives pin+ iff pin-; w1^2!=0 excludes both".into())
}

fn pw(g: &str, k: i64) -> String {
    match k {
        0 => String::new(),
        1 => g.to_string(),
        _ => format!("{g}^{k}"),
    }
}

/// The mapping torus over the Klein bottle bundle with monodromy `[[e,f],[g,h]]` and twist `(m,n)`.
fn sol3_bundle(e: i64, f: i64, g: i64, h: i64, m: i64, n: i64, t_lift: PinElement) -> HolonomyData {
    let rhs = |parts: [String; 3]| {
        let s: Vec<_> = parts.into_iter().filter(|p| !p.is_empty()).collect();
        if s.is_empty() { "1".to_string() } else { s.join(" ") }
    };
    let rels = [
        format!("t w t^-1 = {}", rhs([pw("x", m), pw("y", n), "w^-1".into()])),
        format!("t x t^-1 = {}", rhs([pw("x", e), pw("y", f), String::new()])),
        format!("t y t^-1 = {}", rhs([pw("x", g), pw("y", h), String::new()])),
        "w x w^-1 = x^-1".into(),
        "w y w^-1 = y^-1".into(),
        "x y = y x".into(),
    ];
    let group = FpGroup::parse(&["t", "w", "x", "y"], &rels.iter().map(String::as_str).collect::<Vec<_>>()).unwrap();
    let id = PinElement::identity(Ambient::PinPlus);
    let w = PinElement::new(Quat::i(), Quat::i(), false, Ambient::PinPlus).unwrap();
    HolonomyData::new(group, vec![t_lift, w, id, id], Geometry::Sol3xE1, true).unwrap()
}

fn kb_criterion() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed_0009);
    let jt = PinElement::new(Quat::j(), Quat::j(), false, Ambient::PinPlus).unwrap();
    let (mut n_inst, mut n_par, mut spin_geometric) = (0, 0, 0);
    while n_inst < 60 {
        let [e, f, g, h, m, n] = [(); 6].map(|_| rng.gen_range(-3i64..=3));
        if e * h - f * g != -1 {
            continue;
        }
        n_inst += 1;
        let want = kb_bundle_criterion(e, f, g, h, m, n).map_err(|e| e.to_string())?;
        let rep = analyze(&sol3_bundle(e, f, g, h, m, n, PinElement::identity(Ambient::PinPlus))).map_err(|e| e.to_string())?;
        ensure(rep.parallelizable == want, || {
            format!("(e,f,g,h,m,n)=({e},{f},{g},{h},{m},{n}): criterion {want}, analysis {}", rep.parallelizable)
        })?;
        n_par += usize::from(want);
        let geo = analyze(&sol3_bundle(e, f, g, h, m, n, jt)).map_err(|e| e.to_string())?;
        spin_geometric += usize::from(geo.spin.exists() == Some(true));
    }
    Ok(format!(
        "{n_inst} instances agree ({n_par} parallelizable) with t lifted trivially; \
         with t acting by (j,j) all {spin_geometric} of {n_inst} are Spin"
    ))
}

#[test]
fn acceptance_criteria() {
    let recs = bundled();
    let checks: Vec<(&str, Check)> = vec![
        ("1 non-Spin triple", non_spin_triple(&recs)),
        ("2 Pin preimage table", lemma_rows()),
        ("3 extension inequivalence", extension_inequivalence()),
        ("4 corpus regression", regression(&recs)),
        ("5 partial tally", tally(&recs)),
        ("6 geometric examples", geometric(&recs)),
        ("7 oracle equivalence", oracle_equivalence(&recs)),
        ("8 Pin gating", gating(&recs)),
        ("9 Klein bottle bundle criterion", kb_criterion()),
    ];
    let mut failed = Vec::new();
    for (name, res) in &checks {
        match res {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                println!("FAIL  {name}: {why}");
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
