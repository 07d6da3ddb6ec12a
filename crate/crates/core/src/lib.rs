//! Zeros of polynomial sequences satisfying
//! `W_n = (az+b)W_{n-1} + (cz+d)W_{n-2}`, `W_0 = 1`, `W_1 = z`.
//!
//! Polynomials carry MPFR coefficients at a chosen precision. The crate builds
//! the sequence, locates zeros with a simultaneous iteration, describes the
//! set the zeros accumulate on, and checks real-rootedness, interlacing and
//! bound statements numerically.

pub mod error;
pub mod geometry;
pub mod poly;
pub mod recurrence;
pub mod roots;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{classify, lollipop_junction, LimitKind, LimitSet};
pub use num_complex::Complex64;
pub use poly::{Division, Polynomial};
pub use recurrence::{CriticalScalars, DerivedPolys, RecurrenceParams, Sign, SignCase, UvCase};
pub use roots::{
    default_tolerance, find_roots, find_roots_with, is_real_rooted, snap_real, strictly_interlaces,
    RootSet, SolverConfig,
};
pub use scalar::{principal_sqrt, ComplexScalar};
