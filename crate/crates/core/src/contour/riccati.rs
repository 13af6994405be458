//! The Qₙ recursion of the Riccati equation
//! `(ħ/i)·Q′ + Q² − Π² + (ħ/i)²·Δ = 0`, ′ = d/dt, with `Q = Σ (ħ/i)ⁿ Qₙ`.
//!
//! Orders 0 to 2 use the exact jet of Π². Higher orders expand Π² and Δ in
//! Taylor series by a discrete Cauchy integral and run the recursion on
//! truncated series.

use num_complex::Complex64;

use crate::coefficients::MomentumField;
use crate::error::Result;
use crate::series::Series;

/// Samples on the Cauchy differentiation circle.
const CAUCHY_SAMPLES: usize = 48;
/// Upper bound on the Cauchy differentiation radius.
const CAUCHY_MAX_RADIUS: f64 = 0.1;

/// Distance from `z` to the nearest turning point or pole of Π².
pub(crate) fn distance_to_critical(field: &MomentumField, z: Complex64) -> f64 {
    let mut d = f64::INFINITY;
    if let Some([ta, tb]) = field.turning_points() {
        for t in [ta, -ta, tb, -tb] {
            d = d.min((z - t).norm());
        }
    }
    for p in field.poles() {
        d = d.min((z - p).norm());
    }
    d
}

/// Q₁ = −Π²′/(4Π²).
pub(crate) fn q1(field: &MomentumField, z: Complex64) -> Result<Complex64> {
    let [p, pt, _] = field.pi_squared_jet(z)?;
    Ok(-pt / (4.0 * p))
}

/// Q₂ = −(Q₁′ + Q₁² + Δ)/(2Q₀).
pub(crate) fn q2(field: &MomentumField, z: Complex64, q0: Complex64) -> Result<Complex64> {
    let [p, pt, ptt] = field.pi_squared_jet(z)?;
    let delta = field.delta(z)?;
    let inner = -ptt / (4.0 * p) + 5.0 * pt * pt / (16.0 * p * p) + delta;
    Ok(-inner / (2.0 * q0))
}

/// Series of Q₀ … Q_max_order around `z0`, each as a truncated series.
/// `Qₖ` carries `extra + max_order − k + 1` terms.
pub(crate) fn q_series(
    field: &MomentumField,
    z0: Complex64,
    q0: Complex64,
    max_order: usize,
    extra: usize,
) -> Result<Vec<Series>> {
    let len = max_order + 1 + extra;
    let radius = CAUCHY_MAX_RADIUS.min(0.5 * distance_to_critical(field, z0));
    let p = Series::cauchy(|z| field.pi_squared(z), z0, radius, CAUCHY_SAMPLES, len)?;
    let delta = Series::cauchy(|z| field.delta(z), z0, radius, CAUCHY_SAMPLES, len)?;

    let q0s = p.sqrt_with(q0);
    let inv_two_q0 = q0s.scale(Complex64::new(2.0, 0.0)).recip();
    let mut qs = vec![q0s];
    for k in 1..=max_order {
        let prev = qs[k - 1].d_dt(z0);
        let mut acc = prev;
        for i in 1..k {
            acc = acc.add(&qs[i].mul(&qs[k - i]));
        }
        if k == 2 {
            acc = acc.add(&delta);
        }
        let next = acc.mul(&inv_two_q0).scale(Complex64::new(-1.0, 0.0));
        qs.push(next);
    }
    Ok(qs)
}

/// Qₙ(z) given the branch value of Q₀ at `z`.
pub(crate) fn q_value(field: &MomentumField, order: usize, z: Complex64, q0: Complex64) -> Result<Complex64> {
    match order {
        0 => Ok(q0),
        1 => q1(field, z),
        2 => q2(field, z, q0),
        _ => Ok(q_series(field, z, q0, order, 0)?[order].constant_term()),
    }
}

/// Residual of the Riccati equation at `z` with Q truncated after
/// `truncation`, ħ = 1.
pub(crate) fn residual_at(field: &MomentumField, z: Complex64, q0: Complex64, truncation: usize) -> Result<f64> {
    let qs = q_series(field, z, q0, truncation, 1)?;
    let minus_i = Complex64::new(0.0, -1.0);
    let mut q = Complex64::default();
    let mut dq = Complex64::default();
    let mut weight = Complex64::new(1.0, 0.0);
    for s in &qs {
        q += weight * s.constant_term();
        dq += weight * s.d_dt(z).constant_term();
        weight *= minus_i;
    }
    let p = field.pi_squared(z)?;
    let delta = field.delta(z)?;
    Ok((minus_i * dq + q * q - p + minus_i * minus_i * delta).norm())
}
