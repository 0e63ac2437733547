//! Exact arithmetic in the quadratic field Q(√2).
//!
//! Every coefficient that shows up in the holonomy lifts handled by this
//! crate lies in Q(√2), so all group arithmetic is carried out exactly.
//! Rationals are backed by `i128` with checked operations: an overflow is
//! a hard failure rather than a silent wrap.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero denominator in rational literal")]
    ZeroDenominator,
    #[error("integer overflow in exact arithmetic")]
    Overflow,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

#[track_caller]
fn ck(v: Option<i128>) -> i128 {
    v.expect("integer overflow in exact rational arithmetic")
}

/// A rational number kept in lowest terms with a positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i128,
    den: i128,
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i128, den: i128) -> Result<Self, ExactError> {
        if den == 0 {
            return Err(ExactError::ZeroDenominator);
        }
        let g = gcd(num, den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = n.checked_neg().ok_or(ExactError::Overflow)?;
            d = d.checked_neg().ok_or(ExactError::Overflow)?;
        }
        Ok(Rational { num: n, den: d })
    }

    pub fn from_int(n: i128) -> Self {
        Rational { num: n, den: 1 }
    }

    pub fn numer(&self) -> i128 {
        self.num
    }

    pub fn denom(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        if self.num == 0 {
            return Err(ExactError::DivisionByZero);
        }
        Rational::new(self.den, self.num)
    }

    #[track_caller]
    fn normalized(num: i128, den: i128) -> Self {
        Rational::new(num, den).expect("integer overflow in exact rational arithmetic")
    }
}

impl Add for Rational {
    type Output = Rational;
    #[track_caller]
    fn add(self, o: Rational) -> Rational {
        let g = gcd(self.den, o.den);
        let lhs = ck(self.num.checked_mul(o.den / g));
        let rhs = ck(o.num.checked_mul(self.den / g));
        let den = ck((self.den / g).checked_mul(o.den));
        Rational::normalized(ck(lhs.checked_add(rhs)), den)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational { num: ck(self.num.checked_neg()), den: self.den }
    }
}

impl Sub for Rational {
    type Output = Rational;
    #[track_caller]
    fn sub(self, o: Rational) -> Rational {
        self + (-o)
    }
}

impl Mul for Rational {
    type Output = Rational;
    #[track_caller]
    fn mul(self, o: Rational) -> Rational {
        // cross-cancel first to keep intermediates small
        let g1 = gcd(self.num, o.den).max(1);
        let g2 = gcd(o.num, self.den).max(1);
        let num = ck((self.num / g1).checked_mul(o.num / g2));
        let den = ck((self.den / g2).checked_mul(o.den / g1));
        Rational::normalized(num, den)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        ck(self.num.checked_mul(other.den)).cmp(&ck(other.num.checked_mul(self.den)))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n as i128)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// An element `a + b√2` of Q(√2).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct QSqrt2 {
    pub a: Rational,
    pub b: Rational,
}

impl QSqrt2 {
    pub const ZERO: QSqrt2 = QSqrt2 { a: Rational::ZERO, b: Rational::ZERO };
    pub const ONE: QSqrt2 = QSqrt2 { a: Rational::ONE, b: Rational::ZERO };

    pub fn new(a: Rational, b: Rational) -> Self {
        QSqrt2 { a, b }
    }

    pub fn int(n: i64) -> Self {
        QSqrt2 { a: n.into(), b: Rational::ZERO }
    }

    pub fn rational(a: Rational) -> Self {
        QSqrt2 { a, b: Rational::ZERO }
    }

    /// `1/√2 = (1/2)√2`.
    pub fn inv_sqrt2() -> Self {
        QSqrt2 { a: Rational::ZERO, b: Rational::normalized(1, 2) }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Galois conjugate `a - b√2`.
    pub fn conjugate(&self) -> Self {
        QSqrt2 { a: self.a, b: -self.b }
    }

    /// Field norm `a² - 2b²`.
    pub fn norm(&self) -> Rational {
        self.a * self.a - Rational::from_int(2) * self.b * self.b
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        // a² - 2b² never vanishes for nonzero rationals since √2 is irrational
        let n = self.norm().recip()?;
        Ok(QSqrt2 { a: self.a * n, b: -self.b * n })
    }

    pub fn to_f64(&self) -> f64 {
        let r = |q: Rational| q.numer() as f64 / q.denom() as f64;
        r(self.a) + r(self.b) * std::f64::consts::SQRT_2
    }

    /// `[a_num, a_den, b_num, b_den]`.
    pub fn to_array(&self) -> [i128; 4] {
        [self.a.numer(), self.a.denom(), self.b.numer(), self.b.denom()]
    }

    pub fn from_array(v: [i128; 4]) -> Result<Self, ExactError> {
        if v[1] <= 0 || v[3] <= 0 {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(QSqrt2 { a: Rational::new(v[0], v[1])?, b: Rational::new(v[2], v[3])? })
    }
}

impl Add for QSqrt2 {
    type Output = QSqrt2;
    #[track_caller]
    fn add(self, o: QSqrt2) -> QSqrt2 {
        QSqrt2 { a: self.a + o.a, b: self.b + o.b }
    }
}

impl Sub for QSqrt2 {
    type Output = QSqrt2;
    #[track_caller]
    fn sub(self, o: QSqrt2) -> QSqrt2 {
        QSqrt2 { a: self.a - o.a, b: self.b - o.b }
    }
}

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 { a: -self.a, b: -self.b }
    }
}

impl Mul for QSqrt2 {
    type Output = QSqrt2;
    #[track_caller]
    fn mul(self, o: QSqrt2) -> QSqrt2 {
        let two = Rational::from_int(2);
        QSqrt2 {
            a: self.a * o.a + two * self.b * o.b,
            b: self.a * o.b + self.b * o.a,
        }
    }
}

impl From<i64> for QSqrt2 {
    fn from(n: i64) -> Self {
        QSqrt2::int(n)
    }
}

impl fmt::Debug for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}√2", self.b),
            (false, false) => write!(f, "{}+{}√2", self.a, self.b),
        }
    }
}

impl Serialize for QSqrt2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = self.to_array();
        let mut out = [0i64; 4];
        for (o, x) in out.iter_mut().zip(v) {
            *o = i64::try_from(x).map_err(|_| serde::ser::Error::custom("coefficient exceeds i64"))?;
        }
        out.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSqrt2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = <[i64; 4]>::deserialize(d)?;
        if v[1] <= 0 || v[3] <= 0 {
            return Err(D::Error::custom("QSqrt2 denominators must be positive"));
        }
        QSqrt2::from_array(v.map(i128::from)).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn q(an: i128, ad: i128, bn: i128, bd: i128) -> QSqrt2 {
        QSqrt2::new(r(an, ad), r(bn, bd))
    }

    #[test]
    fn rational_is_canonical() {
        let x = r(6, -8);
        assert_eq!((x.numer(), x.denom()), (-3, 4));
        assert_eq!(r(0, -5), Rational::ZERO);
        assert_eq!(Rational::new(1, 0), Err(ExactError::ZeroDenominator));
    }

    #[test]
    fn addition_examples() {
        assert_eq!(QSqrt2::int(1) + q(0, 1, 1, 1), q(1, 1, 1, 1));
        assert_eq!(q(1, 2, 1, 2) + q(1, 2, -1, 2), QSqrt2::ONE);
    }

    #[test]
    fn multiplication_examples() {
        let h = QSqrt2::inv_sqrt2();
        assert_eq!(h * h, q(1, 2, 0, 1));
        assert_eq!(q(1, 1, 1, 1) * q(-1, 1, 1, 1), QSqrt2::ONE);
        assert_eq!(q(1, 1, 1, 1) * q(1, 1, -1, 1), QSqrt2::int(-1));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(q(1, 1, 1, 1).inv().unwrap(), q(-1, 1, 1, 1));
        assert_eq!(QSqrt2::int(2).inv().unwrap(), q(1, 2, 0, 1));
        assert_eq!(q(0, 1, 1, 1).inv().unwrap(), q(0, 1, 1, 2));
        assert_eq!(QSqrt2::ZERO.inv(), Err(ExactError::DivisionByZero));
    }

    #[test]
    fn serde_layout() {
        let x = q(-3, 4, 1, 2);
        assert_eq!(serde_json::to_string(&x).unwrap(), "[-3,4,1,2]");
        let y: QSqrt2 = serde_json::from_str("[-3,4,1,2]").unwrap();
        assert_eq!(y, x);
        assert!(serde_json::from_str::<QSqrt2>("[1,0,0,1]").is_err());
        assert!(serde_json::from_str::<QSqrt2>("[1,-2,0,1]").is_err());
        assert_eq!(serde_json::from_str::<QSqrt2>("[2,4,0,3]").unwrap(), q(1, 2, 0, 1));
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn overflow_is_checked() {
        let big = Rational::from_int(i128::MAX / 2 + 1);
        let _ = big + big;
    }

    fn small() -> impl Strategy<Value = QSqrt2> {
        (-40i128..40, 1i128..12, -40i128..40, 1i128..12).prop_map(|(a, b, c, d)| q(a, b, c, d))
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(x in small(), y in small()) {
            prop_assert_eq!((x * y).norm(), x.norm() * y.norm());
        }

        #[test]
        fn inverse_is_involutive(x in small()) {
            prop_assume!(!x.is_zero());
            let xi = x.inv().unwrap();
            prop_assert_eq!(x * xi, QSqrt2::ONE);
            prop_assert_eq!(xi.inv().unwrap(), x);
        }

        #[test]
        fn additive_identity(x in small()) {
            prop_assert_eq!(x + QSqrt2::ZERO, x);
            prop_assert_eq!(x - x, QSqrt2::ZERO);
        }
    }
}
