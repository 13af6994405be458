//! Spectra of the three-dimensional oscillator in flat space and in spaces
//! of constant negative (H3) and positive (S3) curvature.
//!
//! * [`quantize`] holds the closed-form spectra and the two-term WKB rule.
//! * [`contour`] evaluates the WKB term integrals numerically.
//! * [`oracle`] solves the radial equations directly by shooting.

pub mod coefficients;
pub mod contour;
pub mod error;
pub mod model;
pub mod oracle;
pub mod quantize;
mod series;

pub use coefficients::{build, CoefficientSet, MomentumField, Scheme};
pub use contour::{
    analytic_residue_sum, higher_order_vanishing, integrate_term, q_term, riccati_residual, BranchState, Circle,
    ContourSpec, VanishingEntry, WkbTermValue,
};
pub use error::{Error, Radicand, Result};
pub use model::{
    flat_limit_energy, from_dimensionless, to_dimensionless, Geometry, HalfInt, Method, ModelParams, PhysicalScales,
    QuantumNumbers, SpectrumEntry,
};
pub use num_complex::Complex64;
pub use oracle::{effective_equation, solve, EigenResult, OracleConfig};
pub use quantize::{
    bound_state_count, exact_epsilon, naive_wkb_epsilon, solve_epsilon, two_term_sum, BranchConvention,
};
