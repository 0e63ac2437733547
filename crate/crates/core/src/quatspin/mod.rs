//! Unit quaternions, the Pin± groups of ℝ⁴, and their finite subgroups.

mod group;
pub mod lemma;
mod matrix;
mod pin;
mod quat;

use thiserror::Error;

pub use group::{
    closure, fingerprint, identify_small_group, CayleyTable, GroupFingerprint, GroupName, DEFAULT_CLOSURE_CAP,
};
pub use matrix::OrthMatrix4;
pub use pin::{Ambient, PinElement};
pub use quat::Quat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuatSpinError {
    #[error("quaternion is not a unit")]
    NotUnit,
    #[error("reflective element requested in Spin(4)")]
    ReflectionInSpin,
    #[error("cannot combine elements of {0} and {1}")]
    AmbientMismatch(Ambient, Ambient),
    #[error("closure exceeded {0} elements")]
    CapExceeded(usize),
    #[error("element list is not a group")]
    NotClosed,
    #[error("no generators given")]
    EmptyGenerators,
}
