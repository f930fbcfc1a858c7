//! Exact decision procedures for unramified, smooth and étale affine
//! schemes over `Q` and `F_p`, with checkable certificates, together with
//! the infinitesimal toolkit they rest on: tangent and cotangent fibers,
//! Kähler differentials, first-order neighborhoods, square-zero extensions,
//! standard charts and Hensel lifts. A brute-force lifting oracle over small
//! finite fields cross-checks the verdicts.

pub mod classify;
pub mod corering;
pub mod error;
pub mod groebner;
pub mod liftlab;
pub mod linalg;
pub mod scheme;
pub mod tangent;

pub use error::{Error, Result};
