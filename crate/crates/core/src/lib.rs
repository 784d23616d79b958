//! Obstructions to Einstein metrics on blown-up surfaces of general type.
//!
//! The crate is organized by layer:
//!
//! * [`char_numbers`]: exact integer arithmetic on (χ, τ), blow-ups, the
//!   Hitchin–Thorpe trichotomy, the Seiberg–Witten bound `32π²·n` and the
//!   `3k ≥ 2c₁²` non-existence criterion.
//! * [`geography`]: hypersurfaces in CP³, the Fermat family catalog and
//!   general-type screens (complex and symplectic).
//! * [`lattice`]: the real intersection form of `X # k·CP̄²`, polarizations,
//!   orthogonal projection and the inequality chain behind the curvature
//!   estimate for every sign choice `c₁(X) ± E₁ ± … ± E_k`.
//! * [`curvature_lab`]: finite-difference scalar curvature and quadrature
//!   for the glued family `δ + φ(ϱ/t)·t⁴·h₂` around one blow-up point.

// Index loops mirror tensor notation, and `!(x > 0.0)` is used on purpose
// because it also rejects NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod char_numbers;
pub mod curvature_lab;
pub mod error;
pub mod geography;
pub mod lattice;

pub use error::{Error, Result};
