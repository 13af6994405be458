//! Closed-form spectra and the two-term WKB quantization condition.
//!
//! Sign ledger: all radicals are nonnegative reals. The two-term sum for the
//! hyperbolic model is printed in the literature as
//! `−√(−C) + √(−A−B−C) + √(−A) − ħ`; on the bound branch the middle root
//! enters with a minus sign, `√(μ−2ε+1) = √(1+4μ)/2 − N`. [`two_term_sum`]
//! exposes both forms; [`solve_epsilon`] always uses the bound branch.

use crate::coefficients::{build, CoefficientSet, Scheme};
use crate::error::{Error, Radicand, Result};
use crate::model::{require_mu, Geometry, Method, QuantumNumbers, SpectrumEntry};

/// Residual tolerance of the quantization root search.
pub const ROOT_TOLERANCE: f64 = 1e-12;
const MAX_ITERATIONS: usize = 200;

/// Sign pattern used when assembling the two-term sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchConvention {
    /// The sign pattern exactly as printed.
    AsPrinted,
    /// Bound-branch normalization (differs from `AsPrinted` only for H3).
    BoundBranch,
}

/// `√(1 + 4μ)`.
fn shifted_root(mu: f64) -> f64 {
    (1.0 + 4.0 * mu).sqrt()
}

/// Exact dimensionless energy of level (n, l).
///
/// Hyperbolic levels above the continuum edge are returned with
/// `bound = false`. A hyperbolic level is bound iff `N < √(1+4μ)/2`, which is
/// where its wavefunction decays like `exp(−(√(1+4μ)/2 − N)·r)`.
pub fn exact_epsilon(geometry: Geometry, mu: f64, qn: QuantumNumbers) -> Result<SpectrumEntry> {
    require_mu(geometry, mu)?;
    let n_p = qn.principal().to_f64();
    let (epsilon, bound) = match geometry {
        Geometry::Flat => (n_p, true),
        Geometry::Hyperbolic => {
            let s = shifted_root(mu);
            (0.5 * (-n_p * n_p + s * n_p + 0.75), n_p < 0.5 * s)
        }
        Geometry::Spherical => {
            let s = shifted_root(mu);
            (0.5 * (n_p * n_p + s * n_p - 0.75), true)
        }
    };
    Ok(SpectrumEntry {
        geometry,
        quantum_numbers: qn,
        epsilon,
        method: Method::Exact,
        bound,
    })
}

/// Closed-form root of the two-term rule with the uncorrected coefficients.
///
/// Hyperbolic: `2ε = −N² + 2√μ·N + 1`, valid while `N < √μ`.
/// Spherical: `2ε = N² + 2√μ·N − 1`. Flat: coincides with the exact level.
pub fn naive_wkb_epsilon(geometry: Geometry, mu: f64, qn: QuantumNumbers) -> Result<SpectrumEntry> {
    require_mu(geometry, mu)?;
    let n_p = qn.principal().to_f64();
    let (epsilon, bound) = match geometry {
        Geometry::Flat => (n_p, true),
        Geometry::Hyperbolic => {
            let r = mu.sqrt();
            (0.5 * (-n_p * n_p + 2.0 * r * n_p + 1.0), n_p < r)
        }
        Geometry::Spherical => (0.5 * (n_p * n_p + 2.0 * mu.sqrt() * n_p - 1.0), true),
    };
    Ok(SpectrumEntry {
        geometry,
        quantum_numbers: qn,
        epsilon,
        method: Method::WkbNaive,
        bound,
    })
}

/// Square root of a radicand; negatives within `slack` of zero are
/// rounding noise and count as zero.
fn checked_sqrt(value: f64, radicand: Radicand, slack: f64) -> Result<f64> {
    if value.is_nan() || value < -slack {
        return Err(Error::NoClassicalRegion { radicand, value });
    }
    Ok(value.max(0.0).sqrt())
}

/// The residue part of the two-term sum, without the `−ħ` from the
/// first-order term: `∮Q₀ dt / 2π`.
pub(crate) fn order_zero_sum(coeffs: &CoefficientSet, convention: BranchConvention) -> Result<f64> {
    let CoefficientSet { a, b, c, .. } = *coeffs;
    let slack = 1e-13 * (a.abs() + b.abs() + c.abs());
    let root_c = checked_sqrt(-c, Radicand::MinusC, 0.0)?;
    let root_a = checked_sqrt(-a, Radicand::MinusA, 0.0)?;
    Ok(match coeffs.geometry {
        Geometry::Flat => {
            if root_a == 0.0 {
                return Err(Error::NoClassicalRegion {
                    radicand: Radicand::MinusA,
                    value: -a,
                });
            }
            -root_c + b / (2.0 * root_a)
        }
        Geometry::Hyperbolic => {
            let mid = checked_sqrt(-a - b - c, Radicand::Combined, slack)?;
            match convention {
                BranchConvention::AsPrinted => -root_c + mid + root_a,
                BranchConvention::BoundBranch => -root_c - mid + root_a,
            }
        }
        Geometry::Spherical => {
            let mid = checked_sqrt(-a + b - c, Radicand::Combined, slack)?;
            -root_c + mid - root_a
        }
    })
}

/// Left side of the two-term rule in units of ħ (ħ = 1):
///
/// * flat: `−√(−C) + B/(2√(−A)) − ħ`
/// * hyperbolic: `−√(−C) ± √(−A−B−C) + √(−A) − ħ`
/// * spherical: `−√(−C) + √(−A+B−C) − √(−A) − ħ`
///
/// The rule is satisfied when the sum equals `2n`.
pub fn two_term_sum(coeffs: &CoefficientSet, convention: BranchConvention) -> Result<f64> {
    Ok(order_zero_sum(coeffs, convention)? - 1.0)
}

/// Bisection on a bracket `[lo, hi]` with `f(lo) < 0 < f(hi)`.
fn bisect(f: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<f64> {
    for _ in 0..MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let value = f(mid)?;
        if value.abs() <= ROOT_TOLERANCE {
            return Ok(mid);
        }
        if value < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Solves the bound-branch two-term condition `sum(ε) = 2n` for ε.
///
/// The condition is monotone increasing in ε on the bound branch, so a
/// bracket is grown outward from the edge of the classical region and then
/// bisected to a residual of [`ROOT_TOLERANCE`].
pub fn solve_epsilon(geometry: Geometry, mu: f64, qn: QuantumNumbers, scheme: Scheme) -> Result<SpectrumEntry> {
    require_mu(geometry, mu)?;
    let target = 2.0 * f64::from(qn.n);
    let residual = |eps: f64| -> Result<f64> {
        let coeffs = build(geometry, mu, qn.l, eps, scheme)?;
        Ok(two_term_sum(&coeffs, BranchConvention::BoundBranch)? - target)
    };

    let (lo, hi) = match geometry {
        Geometry::Hyperbolic => {
            // −A−B−C = μ + 1 − 2ε in both schemes.
            let hi = 0.5 * (mu + 1.0);
            if residual(hi)? < 0.0 {
                return Err(Error::NoBoundState(format!(
                    "two-term condition has no root below the continuum edge for n={}, l={}, mu={mu}",
                    qn.n, qn.l
                )));
            }
            let mut step = 1.0;
            let mut lo = hi - step;
            let mut tries = 0;
            while residual(lo)? >= 0.0 {
                step *= 2.0;
                lo = hi - step;
                tries += 1;
                if tries > MAX_ITERATIONS {
                    return Err(Error::NoBoundState("could not bracket the root from below".into()));
                }
            }
            (lo, hi)
        }
        Geometry::Spherical | Geometry::Flat => {
            let lo = if geometry == Geometry::Spherical {
                -0.5 * (mu + 1.0)
            } else {
                0.0
            };
            if residual(lo)? >= 0.0 {
                return Err(Error::NoBoundState(
                    "condition is already satisfied at the bottom of the range".into(),
                ));
            }
            let mut step = 1.0;
            let mut hi = lo + step;
            let mut tries = 0;
            while residual(hi)? < 0.0 {
                step *= 2.0;
                hi = lo + step;
                tries += 1;
                if tries > MAX_ITERATIONS {
                    return Err(Error::NoBoundState("could not bracket the root from above".into()));
                }
            }
            (lo, hi)
        }
    };
    let epsilon = bisect(residual, lo, hi)?;

    let n_p = qn.principal().to_f64();
    let bound = match (geometry, scheme) {
        (Geometry::Hyperbolic, Scheme::Corrected) => n_p < 0.5 * shifted_root(mu),
        (Geometry::Hyperbolic, Scheme::Naive) => n_p < mu.sqrt(),
        _ => true,
    };
    Ok(SpectrumEntry {
        geometry,
        quantum_numbers: qn,
        epsilon,
        method: match scheme {
            Scheme::Naive => Method::WkbNaive,
            Scheme::Corrected => Method::WkbCorrected,
        },
        bound,
    })
}

/// Number of bound hyperbolic levels with orbital number `l`, i.e. the
/// count of n ≥ 0 with `2n + l + 3/2 < √(1+4μ)/2`.
pub fn bound_state_count(mu: f64, l: u32) -> Result<u32> {
    require_mu(Geometry::Hyperbolic, mu)?;
    let mut count = 0;
    while exact_epsilon(Geometry::Hyperbolic, mu, QuantumNumbers::new(count, l))?.bound {
        count += 1;
    }
    Ok(count)
}
