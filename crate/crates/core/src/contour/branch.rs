//! Analytic continuation of Q₀ = √Π² along polylines.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::riccati::distance_to_critical;
use crate::coefficients::MomentumField;
use crate::error::{Error, Result};

/// Depth below the real axis of the horizontal leg used to reach circles.
pub(crate) const HUB_DEPTH: f64 = 0.5;
const MIN_STEP: f64 = 1e-12;

/// Continuation token: the last point visited and the branch value of
/// Q₀ there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchState {
    pub z: Complex64,
    pub q0: Complex64,
    p: Complex64,
}

impl BranchState {
    /// Anchor on the positive real axis midway (in z²) between the turning
    /// points, with Q₀ = +√Π². The value is the one on the lower lip of the
    /// cut joining the turning points; paths leave the anchor downward.
    pub fn anchor(field: &MomentumField) -> Result<Self> {
        let [ta, tb] = field
            .turning_points()
            .ok_or_else(|| Error::InvalidContour("no classically allowed interval on the positive real axis".into()))?;
        let z = Complex64::new((0.5 * (ta * ta + tb * tb)).sqrt(), 0.0);
        let p = field.pi_squared(z)?;
        if p.re <= 0.0 {
            return Err(Error::InvalidContour(format!(
                "Π² = {p} is not positive at the anchor {z}"
            )));
        }
        Ok(BranchState { z, q0: p.sqrt(), p })
    }

    /// One continuation step. Fails with a refinement request when the
    /// phase of Π² moves by more than π/2.
    pub fn step_to(&mut self, field: &MomentumField, z: Complex64) -> Result<Complex64> {
        let p = field.pi_squared(z)?;
        let jump = (p / self.p).arg();
        if jump.abs() > FRAC_PI_2 || !jump.is_finite() {
            return Err(Error::RefinementRequired {
                from: self.z,
                to: z,
                phase_jump: jump.abs(),
            });
        }
        let guess = self.q0 * (p / self.p).sqrt();
        let root = p.sqrt();
        let q0 = if (root - guess).norm() <= (root + guess).norm() {
            root
        } else {
            -root
        };
        *self = BranchState { z, q0, p };
        Ok(q0)
    }

    /// Continues along a straight segment to `target`, subdividing so that
    /// each step stays within a quarter of the distance to the nearest
    /// turning point or pole, and halving on refinement requests.
    pub fn walk_to(&mut self, field: &MomentumField, target: Complex64) -> Result<Complex64> {
        while (target - self.z).norm() > 0.0 {
            let remaining = (target - self.z).norm();
            let mut step = remaining.min(0.25 * distance_to_critical(field, self.z));
            loop {
                let next = if step >= remaining {
                    target
                } else {
                    self.z + (target - self.z) * (step / remaining)
                };
                let saved = *self;
                match self.step_to(field, next) {
                    Ok(_) => break,
                    Err(Error::RefinementRequired { .. }) if step > MIN_STEP => {
                        *self = saved;
                        step *= 0.5;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(self.q0)
    }

    /// Continues from the anchor to `target`: down to the hub depth, along
    /// the horizontal leg, then straight to the target.
    pub fn reach(field: &MomentumField, target: Complex64) -> Result<Self> {
        let mut state = BranchState::anchor(field)?;
        let below = Complex64::new(state.z.re, -HUB_DEPTH);
        state.walk_to(field, below)?;
        state.walk_to(field, Complex64::new(target.re, -HUB_DEPTH))?;
        state.walk_to(field, target)?;
        Ok(state)
    }
}
