//! Finite subgroup closure, fingerprints, and identification of small groups.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::sync::OnceLock;

use serde::Serialize;

use super::pin::PinElement;
use super::QuatSpinError;
use crate::fpgroup::snf::smith_normal_form;

pub const DEFAULT_CLOSURE_CAP: usize = 1024;

/// Breadth-first closure of `gens` under multiplication.
///
/// The identity comes first, then elements in discovery order.
pub fn closure(gens: &[PinElement], cap: usize) -> Result<Vec<PinElement>, QuatSpinError> {
    let Some(first) = gens.first() else {
        return Err(QuatSpinError::EmptyGenerators);
    };
    let ambient = first.ambient();
    if let Some(g) = gens.iter().find(|g| g.ambient() != ambient) {
        return Err(QuatSpinError::AmbientMismatch(ambient, g.ambient()));
    }
    generic_closure(gens, PinElement::identity(ambient), |a, b| a.mul(b).expect("shared ambient"), cap)
        .ok_or(QuatSpinError::CapExceeded(cap))
}

fn generic_closure<T, F>(gens: &[T], identity: T, mul: F, cap: usize) -> Option<Vec<T>>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let mut seen: HashMap<T, usize> = HashMap::new();
    let mut elems = vec![identity.clone()];
    seen.insert(identity, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let p = mul(&elems[i], g);
            if !seen.contains_key(&p) {
                if elems.len() >= cap {
                    return None;
                }
                seen.insert(p.clone(), elems.len());
                queue.push_back(elems.len());
                elems.push(p);
            }
        }
    }
    Some(elems)
}

/// Multiplication table of a finite group on indices `0..n`, identity at 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    mul: Vec<Vec<usize>>,
}

impl CayleyTable {
    /// Build the table of a closed list of elements; fails if a product leaves the list
    /// or the first element is not an identity.
    pub fn from_elements<T, F>(elems: &[T], mul: F) -> Result<Self, QuatSpinError>
    where
        T: Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let index: HashMap<&T, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut table = Vec::with_capacity(elems.len());
        for a in elems {
            let mut row = Vec::with_capacity(elems.len());
            for b in elems {
                let p = mul(a, b);
                row.push(*index.get(&p).ok_or(QuatSpinError::NotClosed)?);
            }
            table.push(row);
        }
        if elems.is_empty() || (0..elems.len()).any(|i| table[0][i] != i || table[i][0] != i) {
            return Err(QuatSpinError::NotClosed);
        }
        Ok(CayleyTable { mul: table })
    }

    /// Closure of generators given in any concrete model, returned as a table.
    pub fn generate<T, F>(gens: &[T], identity: T, mul: F, cap: usize) -> Option<Self>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let elems = generic_closure(gens, identity, &mul, cap)?;
        CayleyTable::from_elements(&elems, mul).ok()
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul[x][a];
            n += 1;
        }
        n
    }

    pub fn fingerprint(&self) -> GroupFingerprint {
        let n = self.order();
        let mut hist = BTreeMap::new();
        let mut exponent = 1u64;
        for a in 0..n {
            let o = self.element_order(a) as u64;
            *hist.entry(o).or_insert(0usize) += 1;
            exponent = lcm(exponent, o);
        }
        let commutes = |a: usize, b: usize| self.mul[a][b] == self.mul[b][a];
        let center_order = (0..n).filter(|&a| (0..n).all(|b| commutes(a, b))).count();
        let abelian = center_order == n;

        // relations e_a + e_b - e_ab over the free abelian group on all elements
        let mut rows = Vec::with_capacity(n * n + 1);
        let mut id = vec![0i128; n];
        id[0] = 1;
        rows.push(id);
        for a in 0..n {
            for b in a..n {
                let mut r = vec![0i128; n];
                r[a] += 1;
                r[b] += 1;
                r[self.mul[a][b]] -= 1;
                if r.iter().any(|&x| x != 0) {
                    rows.push(r);
                }
            }
        }
        let snf = smith_normal_form(&rows, n);
        let abelianization_invariants = snf.torsion().into_iter().map(|d| d as u64).collect();

        GroupFingerprint {
            order: n as u64,
            abelian,
            exponent,
            order_histogram: hist,
            abelianization_invariants,
            center_order: center_order as u64,
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

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Isomorphism invariants of a finite group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GroupFingerprint {
    pub order: u64,
    pub abelian: bool,
    pub exponent: u64,
    /// element order → number of elements of that order
    pub order_histogram: BTreeMap<u64, usize>,
    pub abelianization_invariants: Vec<u64>,
    pub center_order: u64,
}

impl GroupFingerprint {
    pub fn involutions(&self) -> usize {
        self.order_histogram.get(&2).copied().unwrap_or(0)
    }
}

/// Fingerprint of a list of Pin elements that is closed under multiplication.
pub fn fingerprint(elements: &[PinElement]) -> Result<GroupFingerprint, QuatSpinError> {
    let ident = elements.iter().position(|g| g.is_identity()).ok_or(QuatSpinError::NotClosed)?;
    let mut ordered = elements.to_vec();
    ordered.swap(0, ident);
    let mul = |a: &PinElement, b: &PinElement| a.mul(b).unwrap_or(*a);
    if elements.iter().any(|g| g.ambient() != ordered[0].ambient()) {
        return Err(QuatSpinError::NotClosed);
    }
    Ok(CayleyTable::from_elements(&ordered, mul)?.fingerprint())
}

/// Names for the groups this crate can recognise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum GroupName {
    /// `⊕ ℤ/dᵢ` with invariant factors `d₁ | d₂ | …` (empty for the trivial group).
    Abelian(Vec<u64>),
    Dihedral(u64),
    Quaternion(u64),
    SemiDihedral16,
    Modular16,
    Z4SemiZ4,
    Z2SqSemiZ4,
    Z2TimesD8,
    Z2TimesQ8,
    /// `Q(8) ∘ ℤ/4`, the central product of order 16 (also `D₈ ∘ ℤ/4`).
    CentralProduct16,
    Alternating4,
    Dicyclic12,
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupName::Abelian(inv) => {
                if inv.is_empty() {
                    return write!(f, "1");
                }
                let mut parts: Vec<(u64, usize)> = Vec::new();
                for &d in inv.iter().rev() {
                    match parts.last_mut() {
                        Some((x, c)) if *x == d => *c += 1,
                        _ => parts.push((d, 1)),
                    }
                }
                let s: Vec<String> = parts
                    .iter()
                    .map(|&(d, c)| if c == 1 { format!("Z/{d}") } else { format!("Z/{d}^{c}") })
                    .collect();
                write!(f, "{}", s.join("+"))
            }
            GroupName::Dihedral(n) => write!(f, "D{n}"),
            GroupName::Quaternion(n) => write!(f, "Q({n})"),
            GroupName::SemiDihedral16 => write!(f, "SD16"),
            GroupName::Modular16 => write!(f, "M16"),
            GroupName::Z4SemiZ4 => write!(f, "Z/4:Z/4"),
            GroupName::Z2SqSemiZ4 => write!(f, "Z/2^2:Z/4"),
            GroupName::Z2TimesD8 => write!(f, "Z/2xD8"),
            GroupName::Z2TimesQ8 => write!(f, "Z/2xQ(8)"),
            GroupName::CentralProduct16 => write!(f, "Q(8)oZ/4"),
            GroupName::Alternating4 => write!(f, "A4"),
            GroupName::Dicyclic12 => write!(f, "Dic12"),
        }
    }
}

/// `⟨a, b | aⁿ = 1, bᵐ = aˢ, b a b⁻¹ = aʳ⟩`, elements as normal forms `aᵏbᵉ`.
pub(crate) fn metacyclic(n: u64, m: u64, s: u64, r: u64) -> CayleyTable {
    let pow_mod = |base: u64, e: u64| (0..e).fold(1u64, |acc, _| acc * base % n);
    let mul = |x: &(u64, u64), y: &(u64, u64)| {
        let (k, e) = *x;
        let (l, f) = *y;
        let mut a = (k + l * pow_mod(r, e)) % n;
        let mut b = e + f;
        if b >= m {
            b -= m;
            a = (a + s) % n;
        }
        (a, b)
    };
    CayleyTable::generate(&[(1 % n, 0), (0, 1 % m)], (0, 0), mul, 64).expect("metacyclic table")
}

pub(crate) fn direct_product(a: &CayleyTable, b: &CayleyTable) -> CayleyTable {
    let elems: Vec<(usize, usize)> =
        (0..a.order()).flat_map(|i| (0..b.order()).map(move |j| (i, j))).collect();
    CayleyTable::from_elements(&elems, |x, y| (a.mul(x.0, y.0), b.mul(x.1, y.1))).expect("product table")
}

fn permutation_group(gens: &[Vec<usize>]) -> CayleyTable {
    let id: Vec<usize> = (0..gens[0].len()).collect();
    let compose = |p: &Vec<usize>, q: &Vec<usize>| q.iter().map(|&i| p[i]).collect::<Vec<_>>();
    CayleyTable::generate(gens, id, compose, 64).expect("permutation table")
}

/// `ℤ/2² ⋊ ℤ/4`, the generator of `ℤ/4` swapping the two `ℤ/2` factors.
fn swap_semidirect() -> CayleyTable {
    let mul = |x: &(u8, u8, u8), y: &(u8, u8, u8)| {
        let (p, q) = if x.2 % 2 == 1 { (y.1, y.0) } else { (y.0, y.1) };
        (x.0 ^ p, x.1 ^ q, (x.2 + y.2) % 4)
    };
    CayleyTable::generate(&[(1, 0, 0), (0, 0, 1)], (0, 0, 0), mul, 64).expect("semidirect table")
}

/// 2×2 matrices over ℤ/5.
fn matrix_group_mod5(gens: &[[u8; 4]]) -> CayleyTable {
    let mul = |a: &[u8; 4], b: &[u8; 4]| {
        let f = |x: u8, y: u8, z: u8, w: u8| ((x as u16 * y as u16 + z as u16 * w as u16) % 5) as u8;
        [f(a[0], b[0], a[1], b[2]), f(a[0], b[1], a[1], b[3]), f(a[2], b[0], a[3], b[2]), f(a[2], b[1], a[3], b[3])]
    };
    CayleyTable::generate(gens, [1, 0, 0, 1], mul, 64).expect("matrix table")
}

/// Orders for which the catalogue lists every non-abelian group.
const COMPLETE_ORDERS: std::ops::RangeInclusive<u64> = 1..=16;

fn catalogue() -> &'static Vec<(GroupName, GroupFingerprint)> {
    static CAT: OnceLock<Vec<(GroupName, GroupFingerprint)>> = OnceLock::new();
    CAT.get_or_init(|| {
        let m4 = 4u64;
        let q8 = metacyclic(4, 2, 2, 3);
        let d8 = metacyclic(4, 2, 0, 3);
        let z2 = metacyclic(2, 1, 0, 1);
        let entries: Vec<(GroupName, CayleyTable)> = vec![
            (GroupName::Dihedral(6), metacyclic(3, 2, 0, 2)),
            (GroupName::Dihedral(8), d8.clone()),
            (GroupName::Quaternion(8), q8.clone()),
            (GroupName::Dihedral(10), metacyclic(5, 2, 0, 4)),
            (GroupName::Dihedral(12), metacyclic(6, 2, 0, 5)),
            (GroupName::Dicyclic12, metacyclic(6, 2, 3, 5)),
            (GroupName::Alternating4, permutation_group(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])),
            (GroupName::Dihedral(14), metacyclic(7, 2, 0, 6)),
            (GroupName::Dihedral(16), metacyclic(8, 2, 0, 7)),
            (GroupName::Quaternion(16), metacyclic(8, 2, 4, 7)),
            (GroupName::SemiDihedral16, metacyclic(8, 2, 0, 3)),
            (GroupName::Modular16, metacyclic(8, 2, 0, 5)),
            (GroupName::Z4SemiZ4, metacyclic(m4, 4, 0, 3)),
            // Z/2² ⋊ Z/4 with the generator swapping the two factors
            (GroupName::Z2SqSemiZ4, swap_semidirect()),
            (GroupName::Z2TimesD8, direct_product(&z2, &d8)),
            (GroupName::Z2TimesQ8, direct_product(&z2, &q8)),
            // Pauli matrices X, Z and the scalar i = 2 over ℤ/5
            (GroupName::CentralProduct16, matrix_group_mod5(&[[0, 1, 1, 0], [1, 0, 0, 4], [2, 0, 0, 2]])),
        ];
        entries.into_iter().map(|(n, t)| (n, t.fingerprint())).collect()
    })
}

/// Name a group from its fingerprint when that is unambiguous; `None` otherwise.
///
/// Abelian groups are named by their invariant factors. Non-abelian groups are
/// named only for orders where the catalogue is complete and exactly one entry
/// matches.
pub fn identify_small_group(fp: &GroupFingerprint) -> Option<GroupName> {
    if fp.order > 32 {
        return None;
    }
    if fp.abelian {
        return Some(GroupName::Abelian(fp.abelianization_invariants.clone()));
    }
    if !COMPLETE_ORDERS.contains(&fp.order) {
        return None;
    }
    let mut hits = catalogue().iter().filter(|(_, c)| c == fp);
    match (hits.next(), hits.next()) {
        (Some((name, _)), None) => Some(name.clone()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quatspin::pin::Ambient;
    use crate::quatspin::quat::Quat;

    #[test]
    fn catalogue_fingerprints_are_distinct() {
        let cat = catalogue();
        for (i, (na, a)) in cat.iter().enumerate() {
            for (nb, b) in cat.iter().skip(i + 1) {
                assert_ne!(a, b, "{na} and {nb} collide");
            }
        }
        let orders: Vec<u64> = cat.iter().map(|(_, f)| f.order).collect();
        assert_eq!(orders.iter().filter(|&&o| o == 16).count(), 9);
        assert!(cat.iter().all(|(_, f)| !f.abelian));
    }

    #[test]
    fn known_invariants() {
        let q16 = metacyclic(8, 2, 4, 7).fingerprint();
        assert_eq!((q16.order, q16.involutions(), q16.center_order), (16, 1, 2));
        assert_eq!(q16.abelianization_invariants, vec![2, 2]);
        let pauli = &catalogue().iter().find(|(n, _)| *n == GroupName::CentralProduct16).unwrap().1;
        assert_eq!((pauli.order, pauli.center_order, pauli.exponent), (16, 4, 4));
        let z2q8 = &catalogue().iter().find(|(n, _)| *n == GroupName::Z2TimesQ8).unwrap().1;
        assert_eq!(z2q8.involutions(), 3);
    }

    #[test]
    fn quaternion_closure() {
        let amb = Ambient::Spin;
        let i = PinElement::spin(Quat::i(), Quat::i(), amb).unwrap();
        let j = PinElement::spin(Quat::j(), Quat::j(), amb).unwrap();
        let g = closure(&[i, j], DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(g.len(), 8);
        let fp = fingerprint(&g).unwrap();
        assert!(!fp.abelian);
        assert_eq!(fp.involutions(), 1);
        assert_eq!(identify_small_group(&fp), Some(GroupName::Quaternion(8)));
    }

    #[test]
    fn reflector_closures() {
        let cp = PinElement::reflector(Ambient::PinPlus).unwrap();
        assert_eq!(closure(&[cp], 1024).unwrap().len(), 2);
        let cm = PinElement::reflector(Ambient::PinMinus).unwrap();
        let g = closure(&[cm], 1024).unwrap();
        assert_eq!(g.len(), 4);
        assert!(g.contains(&PinElement::minus_one(Ambient::PinMinus)));
        assert_eq!(identify_small_group(&fingerprint(&g).unwrap()), Some(GroupName::Abelian(vec![4])));
    }

    #[test]
    fn cap_is_enforced() {
        let t = Quat::int(1, 0, 0, -1).scaled_inv_sqrt2();
        let g = PinElement::spin(t, t, Ambient::Spin).unwrap();
        assert!(matches!(closure(&[g], 4), Err(QuatSpinError::CapExceeded(4))));
        assert_eq!(closure(&[g], 8).unwrap().len(), 8);
    }

    #[test]
    fn non_closed_lists_are_rejected() {
        let i = PinElement::spin(Quat::i(), Quat::i(), Ambient::Spin).unwrap();
        let id = PinElement::identity(Ambient::Spin);
        assert!(matches!(fingerprint(&[id, i]), Err(QuatSpinError::NotClosed)));
        assert!(matches!(fingerprint(&[i]), Err(QuatSpinError::NotClosed)));
    }

    #[test]
    fn ambiguous_or_large_orders_are_unknown() {
        let fp = GroupFingerprint {
            order: 32,
            abelian: false,
            exponent: 4,
            order_histogram: BTreeMap::from([(1, 1), (2, 3), (4, 28)]),
            abelianization_invariants: vec![2, 2, 2],
            center_order: 4,
        };
        assert_eq!(identify_small_group(&fp), None);
        let weird = GroupFingerprint { order: 16, ..fp };
        assert_eq!(identify_small_group(&weird), None);
    }
}
