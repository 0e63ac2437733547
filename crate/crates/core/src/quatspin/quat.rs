use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::exactnum::{ExactError, QSqrt2};

/// A quaternion `w + x·i + y·j + z·k` with coefficients in Q(√2).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[QSqrt2; 4]", into = "[QSqrt2; 4]")]
pub struct Quat {
    pub w: QSqrt2,
    pub x: QSqrt2,
    pub y: QSqrt2,
    pub z: QSqrt2,
}

impl From<[QSqrt2; 4]> for Quat {
    fn from(c: [QSqrt2; 4]) -> Self {
        Quat { w: c[0], x: c[1], y: c[2], z: c[3] }
    }
}

impl From<Quat> for [QSqrt2; 4] {
    fn from(q: Quat) -> Self {
        q.coords()
    }
}

impl Quat {
    pub const ONE: Quat = Quat { w: QSqrt2::ONE, x: QSqrt2::ZERO, y: QSqrt2::ZERO, z: QSqrt2::ZERO };

    pub fn new(w: QSqrt2, x: QSqrt2, y: QSqrt2, z: QSqrt2) -> Self {
        Quat { w, x, y, z }
    }

    /// Quaternion with integer coordinates.
    pub fn int(w: i64, x: i64, y: i64, z: i64) -> Self {
        Quat::new(w.into(), x.into(), y.into(), z.into())
    }

    pub fn i() -> Self {
        Quat::int(0, 1, 0, 0)
    }

    pub fn j() -> Self {
        Quat::int(0, 0, 1, 0)
    }

    pub fn k() -> Self {
        Quat::int(0, 0, 0, 1)
    }

    /// The basis `(1, i, j, k)` in coordinate order.
    pub fn basis() -> [Quat; 4] {
        [Quat::ONE, Quat::i(), Quat::j(), Quat::k()]
    }

    /// `(1/√2)·q`, used for the order-8 elements such as `(1+k)/√2`.
    pub fn scaled_inv_sqrt2(self) -> Self {
        let s = QSqrt2::inv_sqrt2();
        Quat::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn coords(&self) -> [QSqrt2; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn conj(&self) -> Self {
        Quat::new(self.w, -self.x, -self.y, -self.z)
    }

    /// `w² + x² + y² + z²`.
    pub fn norm(&self) -> QSqrt2 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == QSqrt2::ONE
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        let n = self.norm().inv()?;
        let c = self.conj();
        Ok(Quat::new(c.w * n, c.x * n, c.y * n, c.z * n))
    }
}

impl Mul for Quat {
    type Output = Quat;
    fn mul(self, q: Quat) -> Quat {
        let (a1, b1, c1, d1) = (self.w, self.x, self.y, self.z);
        let (a2, b2, c2, d2) = (q.w, q.x, q.y, q.z);
        Quat::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        Quat::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl fmt::Debug for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (c, unit) in self.coords().iter().zip(["", "i", "j", "k"]) {
            if !c.is_zero() {
                terms.push(if unit.is_empty() { format!("{c}") } else { format!("({c}){unit}") });
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamilton_relations() {
        let (i, j, k) = (Quat::i(), Quat::j(), Quat::k());
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(i * i, -Quat::ONE);
        assert_eq!(j * i, -k);
    }

    #[test]
    fn eighth_roots() {
        let r = Quat::int(1, 0, 0, 1).scaled_inv_sqrt2();
        assert!(r.is_unit());
        assert_eq!(r * r, Quat::k());
        let t = Quat::int(1, 0, 0, -1).scaled_inv_sqrt2();
        assert_eq!(t * t, -Quat::k());
        let s = Quat::int(0, 1, -1, 0).scaled_inv_sqrt2();
        assert_eq!(Quat::i() * r, s);
    }

    #[test]
    fn conjugate_gives_norm() {
        let q = Quat::int(1, 2, -3, 4);
        assert_eq!(q * q.conj(), Quat::new(q.norm(), 0.into(), 0.into(), 0.into()));
        assert_eq!(q * q.inv().unwrap(), Quat::ONE);
    }
}
