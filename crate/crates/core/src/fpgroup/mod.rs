//! Finite presentations, abelianization, and homomorphisms to small cyclic groups.

pub mod snf;
mod word;

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use word::Word;

use snf::smith_normal_form;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FpError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed token `{0}`")]
    BadToken(String),
    #[error("malformed relation `{0}`")]
    BadRelation(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("relator {relator} uses generator index {index} but there are {count} generators")]
    IndexOutOfRange { relator: usize, index: usize, count: usize },
    #[error("expected {expected} generator values, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("map to Z/2 does not kill relator {0}")]
    NotACharacter(usize),
    #[error("map to Z/{modulus} is not a surjective homomorphism")]
    NotAHomomorphism { modulus: u64 },
}

/// `⟨generators | relators⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpGroup {
    names: Vec<String>,
    relators: Vec<Word>,
}

impl FpGroup {
    pub fn new(names: Vec<String>, relators: Vec<Word>) -> Result<Self, FpError> {
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(FpError::DuplicateGenerator(n.clone()));
            }
        }
        for (r, w) in relators.iter().enumerate() {
            if let Some(index) = w.max_index().filter(|&i| i >= names.len()) {
                return Err(FpError::IndexOutOfRange { relator: r, index, count: names.len() });
            }
        }
        let relators = relators.iter().map(Word::free_reduce).collect();
        Ok(FpGroup { names, relators })
    }

    /// Parse relations given as relators or `lhs = rhs` (stored as `lhs·rhs⁻¹`).
    pub fn parse<S: AsRef<str>>(names: &[S], relations: &[S]) -> Result<Self, FpError> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let relators = relations
            .iter()
            .map(|r| parse_relation(r.as_ref(), &names))
            .collect::<Result<Vec<_>, _>>()?;
        FpGroup::new(names, relators)
    }

    /// Append the commutators `[a, b]` for every pair of the named generators.
    pub fn with_commuting<S: AsRef<str>>(mut self, commuting: &[S]) -> Result<Self, FpError> {
        let idx = commuting
            .iter()
            .map(|n| self.index_of(n.as_ref()).ok_or_else(|| FpError::UnknownGenerator(n.as_ref().to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        for (p, &a) in idx.iter().enumerate() {
            for &b in &idx[p + 1..] {
                self.relators.push(Word::new(vec![(a, 1), (b, 1), (a, -1), (b, -1)]));
            }
        }
        Ok(self)
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn ngens(&self) -> usize {
        self.names.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, FpError> {
        Word::parse(text, &self.names).map(|w| w.free_reduce())
    }

    fn relation_matrix(&self) -> Vec<Vec<i128>> {
        self.relators
            .iter()
            .map(|w| w.exponent_sums(self.ngens()).into_iter().map(i128::from).collect())
            .collect()
    }
}

fn parse_relation(text: &str, names: &[String]) -> Result<Word, FpError> {
    let sides: Vec<&str> = text.split('=').collect();
    match sides.as_slice() {
        [w] => Word::parse(w, names),
        [l, r] if !l.trim().is_empty() && !r.trim().is_empty() => {
            Ok(Word::parse(l, names)?.concat(&Word::parse(r, names)?.inverse()))
        }
        _ => Err(FpError::BadRelation(text.to_string())),
    }
}

/// `π^ab ≅ ℤ^rank ⊕ ⊕ ℤ/dᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianizationData {
    pub rank: usize,
    /// Invariant factors `d₁ | d₂ | …`, each at least 2.
    pub torsion_invariants: Vec<u64>,
    /// Per generator: torsion coordinates (reduced mod `dᵢ`) followed by free coordinates.
    pub generator_images: Vec<Vec<i128>>,
    /// Per coordinate: exponent vector of an element generating that cyclic factor.
    #[serde(skip)]
    basis_in_generators: Vec<Vec<i128>>,
}

impl AbelianizationData {
    fn ncoords(&self) -> usize {
        self.torsion_invariants.len() + self.rank
    }

    /// Order of each coordinate's cyclic factor; `None` for `ℤ`.
    fn factor_orders(&self) -> impl Iterator<Item = Option<u64>> + '_ {
        self.torsion_invariants.iter().map(|&d| Some(d)).chain(std::iter::repeat_n(None, self.rank))
    }

    /// Image of an exponent-sum vector in the coordinates.
    pub fn image(&self, sums: &[i64]) -> Vec<i128> {
        let mut out = vec![0i128; self.ncoords()];
        for (g, &e) in sums.iter().enumerate() {
            for (o, x) in out.iter_mut().zip(&self.generator_images[g]) {
                *o += i128::from(e) * x;
            }
        }
        for (o, d) in out.iter_mut().zip(&self.torsion_invariants) {
            *o = o.rem_euclid(*d as i128);
        }
        out
    }

    /// `log₂ |Hom(π, ℤ/2)|`.
    pub fn hom_to_z2_log2(&self) -> usize {
        self.rank + self.torsion_invariants.iter().filter(|&&d| d % 2 == 0).count()
    }

    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.torsion_invariants.iter().map(|d| format!("Z/{d}")).collect();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

pub fn abelianize(g: &FpGroup) -> AbelianizationData {
    let n = g.ngens();
    let snf = smith_normal_form(&g.relation_matrix(), n);
    // coordinate columns of V: nontrivial torsion first, then free
    let keep: Vec<usize> = (0..n).filter(|&i| snf.diagonal.get(i).is_none_or(|&d| d > 1)).collect();
    let torsion_invariants: Vec<u64> = snf.torsion().into_iter().map(|d| d as u64).collect();
    let generator_images = (0..n)
        .map(|j| {
            keep.iter()
                .map(|&i| match snf.diagonal.get(i) {
                    Some(&d) => snf.col_transform[j][i].rem_euclid(d),
                    None => snf.col_transform[j][i],
                })
                .collect()
        })
        .collect();
    let basis_in_generators = keep.iter().map(|&i| snf.col_inverse[i].clone()).collect();
    AbelianizationData { rank: snf.rank(), torsion_invariants, generator_images, basis_in_generators }
}

pub fn beta1(g: &FpGroup) -> usize {
    abelianize(g).rank
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AbOrder {
    Finite(u64),
    Infinite,
}

impl fmt::Display for AbOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbOrder::Finite(n) => write!(f, "{n}"),
            AbOrder::Infinite => f.write_str("infinite"),
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn element_order_in_ab(g: &FpGroup, w: &Word) -> AbOrder {
    let ab = abelianize(g);
    let img = ab.image(&w.exponent_sums(g.ngens()));
    let mut order = 1u64;
    for (x, d) in img.iter().zip(ab.factor_orders()) {
        match d {
            None if *x != 0 => return AbOrder::Infinite,
            None => {}
            Some(d) => {
                let o = d / gcd(d, *x as u64);
                order = order / gcd(order, o) * o;
            }
        }
    }
    AbOrder::Finite(order)
}

fn check_arity(g: &FpGroup, got: usize) -> Result<(), FpError> {
    if got != g.ngens() {
        return Err(FpError::WrongArity { expected: g.ngens(), got });
    }
    Ok(())
}

/// Whether the character `w1` (one bit per generator) lifts to a homomorphism to `ℤ/4`.
pub fn w1_square_zero(g: &FpGroup, w1: &[bool]) -> Result<bool, FpError> {
    check_arity(g, w1.len())?;
    for (r, w) in g.relators().iter().enumerate() {
        let s: i64 = w.exponent_sums(g.ngens()).iter().zip(w1).filter(|(_, &b)| b).map(|(e, _)| e).sum();
        if s.rem_euclid(2) != 0 {
            return Err(FpError::NotACharacter(r));
        }
    }
    let ab = abelianize(g);
    // values on each cyclic factor that define homomorphisms to ℤ/4
    let choices: Vec<Vec<i128>> = ab
        .factor_orders()
        .map(|d| {
            let step = match d {
                None => 1,
                Some(d) => 4 / gcd(d, 4),
            };
            (0..4).step_by(step as usize).map(|x| x as i128).collect()
        })
        .collect();
    let mut values = vec![0i128; choices.len()];
    Ok(search_lifts(&ab, w1, &choices, &mut values, 0))
}

fn search_lifts(ab: &AbelianizationData, w1: &[bool], choices: &[Vec<i128>], values: &mut Vec<i128>, i: usize) -> bool {
    if i == choices.len() {
        return ab.generator_images.iter().zip(w1).all(|(img, &bit)| {
            let v: i128 = img.iter().zip(values.iter()).map(|(a, b)| a * b).sum();
            v.rem_euclid(2) == bit as i128
        });
    }
    for &c in &choices[i] {
        values[i] = c;
        if search_lifts(ab, w1, choices, values, i + 1) {
            return true;
        }
    }
    false
}

/// Relators × generators, exponent sums mod 2.
pub fn exponent_matrix_mod2(g: &FpGroup) -> Vec<Vec<u8>> {
    g.relators()
        .iter()
        .map(|w| w.exponent_sums(g.ngens()).iter().map(|e| e.rem_euclid(2) as u8).collect())
        .collect()
}

/// Whether the surjection `q: π → ℤ/modulus` (values per generator) factors
/// through a homomorphism `π → ℤ`.
pub fn factors_through_infinite_cyclic(g: &FpGroup, q: &[u64], modulus: u64) -> Result<bool, FpError> {
    check_arity(g, q.len())?;
    let bad = FpError::NotAHomomorphism { modulus };
    if modulus == 0 {
        return Err(bad);
    }
    let m = modulus as i128;
    for w in g.relators() {
        let s: i128 = w.exponent_sums(g.ngens()).iter().zip(q).map(|(&e, &v)| i128::from(e) * v as i128).sum();
        if s.rem_euclid(m) != 0 {
            return Err(bad);
        }
    }
    if q.iter().fold(modulus, |acc, &v| gcd(acc, v % modulus)) != 1 {
        return Err(bad);
    }
    // q must vanish on every torsion factor
    let ab = abelianize(g);
    Ok(ab.basis_in_generators[..ab.torsion_invariants.len()].iter().all(|b| {
        let v: i128 = b.iter().zip(q).map(|(&x, &v)| x * v as i128).sum();
        v.rem_euclid(m) == 0
    }))
}
