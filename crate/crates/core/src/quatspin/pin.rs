use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::OrthMatrix4;
use super::quat::Quat;
use super::QuatSpinError;

/// Which double cover an element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ambient {
    #[serde(rename = "spin")]
    Spin,
    #[serde(rename = "pin+")]
    PinPlus,
    #[serde(rename = "pin-")]
    PinMinus,
}

impl Ambient {
    pub const ALL: [Ambient; 3] = [Ambient::Spin, Ambient::PinPlus, Ambient::PinMinus];

    /// Sign of `c²`: `+1` in Pin⁺, `-1` in Pin⁻.
    fn c_square_sign(self) -> bool {
        matches!(self, Ambient::PinMinus)
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ambient::Spin => "Spin",
            Ambient::PinPlus => "Pin+",
            Ambient::PinMinus => "Pin-",
        })
    }
}

/// An element `(u, v)·cᶠ` of Spin(4) = S³×S³, extended by the reflective coset.
///
/// `c` conjugates `(u, v)` to `(v, u)`, and `c² = ±(1, 1)` depending on the ambient.
/// Equality is structural: `(u, v, c)` and `(-u, -v, c)` are different elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PinElement {
    u: Quat,
    v: Quat,
    c: bool,
    ambient: Ambient,
}

#[derive(Serialize, Deserialize)]
struct PinRepr {
    u: Quat,
    v: Quat,
    c: u8,
}

impl Serialize for PinElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PinRepr { u: self.u, v: self.v, c: self.c as u8 }.serialize(s)
    }
}

/// Deserialized lifts are tagged `Pin⁺` until the caller retags them.
impl<'de> Deserialize<'de> for PinElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = PinRepr::deserialize(d)?;
        let c = match r.c {
            0 => false,
            1 => true,
            other => return Err(D::Error::custom(format!("c must be 0 or 1, got {other}"))),
        };
        PinElement::new(r.u, r.v, c, Ambient::PinPlus).map_err(D::Error::custom)
    }
}

impl PinElement {
    pub fn new(u: Quat, v: Quat, c: bool, ambient: Ambient) -> Result<Self, QuatSpinError> {
        if !u.is_unit() || !v.is_unit() {
            return Err(QuatSpinError::NotUnit);
        }
        if c && ambient == Ambient::Spin {
            return Err(QuatSpinError::ReflectionInSpin);
        }
        Ok(PinElement { u, v, c, ambient })
    }

    /// `(u, v)` in Spin(4) viewed inside `ambient`.
    pub fn spin(u: Quat, v: Quat, ambient: Ambient) -> Result<Self, QuatSpinError> {
        PinElement::new(u, v, false, ambient)
    }

    pub fn identity(ambient: Ambient) -> Self {
        PinElement { u: Quat::ONE, v: Quat::ONE, c: false, ambient }
    }

    /// The central element `(-1, -1)`, the nontrivial kernel element of the projection.
    pub fn minus_one(ambient: Ambient) -> Self {
        PinElement { u: -Quat::ONE, v: -Quat::ONE, c: false, ambient }
    }

    /// The reflective generator `c₊` or `c₋`, projecting to `q ↦ -q̄`.
    pub fn reflector(ambient: Ambient) -> Result<Self, QuatSpinError> {
        PinElement::new(Quat::ONE, Quat::ONE, true, ambient)
    }

    pub fn u(&self) -> Quat {
        self.u
    }

    pub fn v(&self) -> Quat {
        self.v
    }

    pub fn c(&self) -> bool {
        self.c
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn retag(&self, ambient: Ambient) -> Result<Self, QuatSpinError> {
        PinElement::new(self.u, self.v, self.c, ambient)
    }

    /// `(-u, -v, c)`: the other preimage of the same orthogonal map.
    pub fn negated(&self) -> Self {
        PinElement { u: -self.u, v: -self.v, ..*self }
    }

    pub fn is_identity(&self) -> bool {
        *self == PinElement::identity(self.ambient)
    }

    pub fn mul(&self, h: &PinElement) -> Result<PinElement, QuatSpinError> {
        if self.ambient != h.ambient {
            return Err(QuatSpinError::AmbientMismatch(self.ambient, h.ambient));
        }
        let (hu, hv) = if self.c { (h.v, h.u) } else { (h.u, h.v) };
        let (mut u, mut v) = (self.u * hu, self.v * hv);
        if self.c && h.c && self.ambient.c_square_sign() {
            u = -u;
            v = -v;
        }
        Ok(PinElement { u, v, c: self.c ^ h.c, ambient: self.ambient })
    }

    pub fn inv(&self) -> PinElement {
        let (ui, vi) = (self.u.conj(), self.v.conj());
        if !self.c {
            return PinElement { u: ui, v: vi, ..*self };
        }
        // ((u,v)c)⁻¹ = c⁻¹(u⁻¹,v⁻¹) = (c²)(v⁻¹,u⁻¹)c
        let (u, v) = if self.ambient.c_square_sign() { (-vi, -ui) } else { (vi, ui) };
        PinElement { u, v, c: true, ambient: self.ambient }
    }

    pub fn pow(&self, e: i64) -> PinElement {
        let base = if e < 0 { self.inv() } else { *self };
        let mut acc = PinElement::identity(self.ambient);
        let mut sq = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&sq).expect("same ambient");
            }
            sq = sq.mul(&sq).expect("same ambient");
            n >>= 1;
        }
        acc
    }

    /// The orthogonal map `q ↦ v q u⁻¹` (or `q ↦ v(-q̄)u⁻¹` on the reflective coset),
    /// as a matrix on coordinates `(1, i, j, k)`.
    pub fn project(&self) -> OrthMatrix4 {
        let uinv = self.u.conj();
        let cols = Quat::basis().map(|b| {
            let q = if self.c { -b.conj() } else { b };
            (self.v * q * uinv).coords()
        });
        OrthMatrix4::from_columns(cols)
    }
}

impl fmt::Debug for PinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}) in {}", self.u, self.v, self.c as u8, self.ambient)
    }
}

impl fmt::Display for PinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.u, self.v, self.c as u8)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(u: Quat, v: Quat, amb: Ambient) -> PinElement {
        PinElement::spin(u, v, amb).unwrap()
    }

    #[test]
    fn c_squares() {
        let cm = PinElement::reflector(Ambient::PinMinus).unwrap();
        assert_eq!(cm.mul(&cm).unwrap(), PinElement::minus_one(Ambient::PinMinus));
        let cp = PinElement::reflector(Ambient::PinPlus).unwrap();
        assert_eq!(cp.mul(&cp).unwrap(), PinElement::identity(Ambient::PinPlus));
        // c₋·(i,i) has order 2
        let ct = cm.mul(&el(Quat::i(), Quat::i(), Ambient::PinMinus)).unwrap();
        assert_eq!(ct.mul(&ct).unwrap(), PinElement::identity(Ambient::PinMinus));
    }

    #[test]
    fn ambient_mismatch_is_rejected() {
        let a = PinElement::identity(Ambient::PinPlus);
        let b = PinElement::identity(Ambient::PinMinus);
        assert!(matches!(a.mul(&b), Err(QuatSpinError::AmbientMismatch(..))));
        assert!(matches!(
            PinElement::reflector(Ambient::Spin),
            Err(QuatSpinError::ReflectionInSpin)
        ));
        assert!(matches!(
            PinElement::spin(Quat::int(1, 1, 0, 0), Quat::ONE, Ambient::Spin),
            Err(QuatSpinError::NotUnit)
        ));
    }

    #[test]
    fn inverses() {
        let g = el(Quat::i(), Quat::j(), Ambient::Spin);
        assert_eq!(g.inv(), el(-Quat::i(), -Quat::j(), Ambient::Spin));
        let cp = PinElement::reflector(Ambient::PinPlus).unwrap();
        assert_eq!(cp.inv(), cp);
        let cm = PinElement::reflector(Ambient::PinMinus).unwrap();
        let expected = cm.mul(&PinElement::minus_one(Ambient::PinMinus)).unwrap();
        assert_eq!(cm.inv(), expected);
        assert!(cm.mul(&cm.inv()).unwrap().is_identity());
        assert!(cm.inv().mul(&cm).unwrap().is_identity());
    }

    #[test]
    fn powers() {
        let t = Quat::int(1, 0, 0, -1).scaled_inv_sqrt2();
        let g = el(t, t, Ambient::Spin);
        assert_eq!(g.pow(4), PinElement::minus_one(Ambient::Spin));
        assert!(g.pow(8).is_identity());
        assert_eq!(g.pow(-3).mul(&g.pow(3)).unwrap(), PinElement::identity(Ambient::Spin));
    }

    #[test]
    fn projections() {
        let amb = Ambient::PinPlus;
        let k = Quat::k();
        assert_eq!(el(k, k, amb).project(), OrthMatrix4::diag([1, -1, -1, 1]));
        assert_eq!(PinElement::identity(amb).project(), OrthMatrix4::identity());
        assert_eq!(el(Quat::i(), -Quat::i(), amb).project(), OrthMatrix4::diag([-1, -1, 1, 1]));
        assert_eq!(PinElement::reflector(amb).unwrap().project(), OrthMatrix4::diag([-1, 1, 1, 1]));
        assert_eq!(PinElement::minus_one(amb).project(), OrthMatrix4::identity());
    }

    #[test]
    fn json_shape() {
        let g = el(Quat::i(), Quat::j(), Ambient::PinPlus);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(
            s,
            r#"{"u":[[0,1,0,1],[1,1,0,1],[0,1,0,1],[0,1,0,1]],"v":[[0,1,0,1],[0,1,0,1],[1,1,0,1],[0,1,0,1]],"c":0}"#
        );
        let back: PinElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<PinElement>(&s.replace("\"c\":0", "\"c\":2")).is_err());
    }
}
