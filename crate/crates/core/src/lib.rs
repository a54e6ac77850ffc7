//! Coded massive-MIMO link components: systematic random linear codes over
//! GF(2), Gray-labeled square QAM with per-symbol error-string neighborhoods,
//! Rayleigh channel sampling with zero-forcing detection, an analytical model
//! for the structure of post-detection error patterns, and a family of
//! noise-guessing decoders (bit-level and symbol-level, with optional
//! CSI-driven antenna sorting).
//!
//! Floating-point math is generic over [`Scalar`] (`f32` or `f64`); the
//! [`Real`] alias at the crate root pins the precision used by binaries and
//! golden tests.

pub mod bits;
pub mod channel;
pub mod code;
pub mod error_model;
pub mod grand;
pub mod lattice;
pub mod linalg;
pub mod modulation;
pub mod scalar;

pub use bits::BitWord;
pub use scalar::Scalar;

/// Default scalar type for simulation binaries and golden tests.
pub type Real = f64;

/// Complex sample in the default precision.
pub type Cplx = num_complex::Complex<Real>;
