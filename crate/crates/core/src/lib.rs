//! Exact Donaldson series and Seiberg–Witten basic classes of regular
//! algebraic surfaces with `p_g > 0`, with their numerical consequences for
//! moduli spaces of sheaves.
//!
//! Layers, bottom up:
//! - [`series`]: truncated multivariate power series over `Q`;
//! - [`surface`]: surface invariants and the rational intersection lattice;
//! - [`sw`]: Seiberg–Witten basic classes and Kronheimer–Mrowka multiplicities;
//! - [`donaldson`]: structured Donaldson series, blow-ups, expansion, evaluation;
//! - [`analysis`]: existence bounds, wall check, generic rank of the two-form;
//! - [`export`]: JSON formats for series and reports.

pub mod analysis;
pub mod donaldson;
pub mod error;
pub mod export;
pub mod rational;
pub mod series;
pub mod surface;
pub mod sw;

pub use error::{Error, ErrorFamily, Result};
pub use rational::Rational;
