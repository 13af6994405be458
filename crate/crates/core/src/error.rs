use num_complex::Complex64;
use std::fmt;

/// Which square-root argument of the two-term condition went negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Radicand {
    /// `-C`, the centrifugal term.
    MinusC,
    /// `-A`, the quartic coefficient.
    MinusA,
    /// `-A - B - C` (hyperbolic) or `-A + B - C` (spherical).
    Combined,
}

impl fmt::Display for Radicand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Radicand::MinusC => "-C",
            Radicand::MinusA => "-A",
            Radicand::Combined => "-A∓B-C",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("evaluation at a pole of the momentum field (z = {location})")]
    PoleEvaluation { location: Complex64 },

    #[error("no classical region: radicand {radicand} = {value:e} is negative")]
    NoClassicalRegion { radicand: Radicand, value: f64 },

    #[error("no bound state: {0}")]
    NoBoundState(String),

    #[error("branch tracking step too large: arg(Π²) jumps by {phase_jump:.3} rad between {from} and {to}")]
    RefinementRequired {
        from: Complex64,
        to: Complex64,
        phase_jump: f64,
    },

    #[error("invalid contour: {0}")]
    InvalidContour(String),

    #[error("quadrature did not converge on circle {circle} after {samples} samples (last change {last_change:e})")]
    QuadratureFailure {
        circle: usize,
        samples: usize,
        last_change: f64,
    },

    #[error("r = {r} lies outside the open radial domain")]
    Domain { r: f64 },

    #[error("oracle resolution error: {0}")]
    Resolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
