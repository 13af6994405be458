//! Contour integrals ∮ Qₙ dt of the WKB terms.
//!
//! With `dt = dz/z` the closed contour around the classical cuts is
//! deformed into circles: one large counterclockwise circle (the point at
//! infinity) minus small counterclockwise circles around the excluded
//! points, `{0}` in flat space, `{0, ±1}` for the hyperbolic model and
//! `{0, ±i}` for the spherical one. Each circle is integrated by the
//! trapezoidal rule with adaptive doubling.

mod branch;
mod riccati;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use branch::BranchState;

use crate::coefficients::{CoefficientSet, MomentumField, Scheme};
use crate::error::{Error, Result};
use crate::model::Geometry;
use crate::quantize::{order_zero_sum, BranchConvention};

/// Minimum number of trapezoid samples per circle.
pub const MIN_SAMPLES: usize = 64;
/// Hard cap on samples per circle during adaptive doubling.
pub const MAX_SAMPLES: usize = 1 << 20;
pub const RELATIVE_TOLERANCE: f64 = 1e-8;
pub const ABSOLUTE_TOLERANCE: f64 = 1e-10;
/// Closest a circle may pass to a turning point or pole.
const CLEARANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
    /// +1 counterclockwise, −1 clockwise.
    pub orientation: i8,
}

impl Circle {
    /// Where the sweep starts: the rightmost point for circles centred on
    /// the real axis, otherwise the point nearest the real axis.
    fn start_angle(&self) -> f64 {
        if self.center.im > 0.0 {
            -0.5 * PI
        } else if self.center.im < 0.0 {
            0.5 * PI
        } else {
            0.0
        }
    }

    fn point(&self, theta: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, theta)
    }
}

/// Small circles around the excluded points plus the large outer circle.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourSpec {
    /// Circles around finite excluded points, normally with orientation −1.
    pub circles: Vec<Circle>,
    pub large_circle_radius: f64,
    pub samples_per_circle: usize,
}

impl ContourSpec {
    /// Default contour for a field: radius a quarter of the distance from
    /// each excluded point to the nearest turning point (0.25 around ±i),
    /// and an outer radius `2·max(√b, 1) + 1`.
    pub fn for_field(field: &MomentumField, samples_per_circle: usize) -> Result<Self> {
        let [ta, tb] = field
            .turning_points()
            .ok_or_else(|| Error::InvalidContour("no classically allowed interval on the positive real axis".into()))?;
        let mut circles = vec![Circle {
            center: Complex64::default(),
            radius: 0.25 * ta,
            orientation: -1,
        }];
        match field.geometry() {
            Geometry::Flat => {}
            Geometry::Hyperbolic => {
                let radius = 0.25 * (1.0 - tb);
                for c in [1.0, -1.0] {
                    circles.push(Circle {
                        center: Complex64::new(c, 0.0),
                        radius,
                        orientation: -1,
                    });
                }
            }
            Geometry::Spherical => {
                for c in [1.0, -1.0] {
                    circles.push(Circle {
                        center: Complex64::new(0.0, c),
                        radius: 0.25,
                        orientation: -1,
                    });
                }
            }
        }
        let spec = ContourSpec {
            circles,
            large_circle_radius: 2.0 * tb.max(1.0) + 1.0,
            samples_per_circle,
        };
        spec.validate(field)?;
        Ok(spec)
    }

    /// Same contour with every radius multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        ContourSpec {
            circles: self
                .circles
                .iter()
                .map(|c| Circle {
                    radius: c.radius * factor,
                    ..*c
                })
                .collect(),
            large_circle_radius: self.large_circle_radius * factor,
            samples_per_circle: self.samples_per_circle,
        }
    }

    /// Checks the contour against a field: enough samples, clearance from
    /// turning points and poles, no turning point inside a small circle,
    /// and an outer circle enclosing every finite critical point.
    pub fn validate(&self, field: &MomentumField) -> Result<()> {
        if self.samples_per_circle < MIN_SAMPLES {
            return Err(Error::InvalidContour(format!(
                "samples_per_circle = {} is below {MIN_SAMPLES}",
                self.samples_per_circle
            )));
        }
        let turning: Vec<Complex64> = match field.turning_points() {
            Some([ta, tb]) => [ta, -ta, tb, -tb].iter().map(|&t| Complex64::new(t, 0.0)).collect(),
            None => return Err(Error::InvalidContour("no turning points".into())),
        };
        let poles = field.poles();
        let critical: Vec<Complex64> = turning.iter().chain(poles.iter()).copied().collect();
        for circle in &self.circles {
            if !circle.radius.is_finite() || circle.radius <= 0.0 || circle.orientation.abs() != 1 {
                return Err(Error::InvalidContour(format!("malformed circle {circle:?}")));
            }
            for p in &critical {
                if ((p - circle.center).norm() - circle.radius).abs() < CLEARANCE {
                    return Err(Error::InvalidContour(format!("circle {circle:?} passes through {p}")));
                }
            }
            if turning.iter().any(|t| (t - circle.center).norm() < circle.radius) {
                return Err(Error::InvalidContour(format!(
                    "circle {circle:?} encloses a turning point"
                )));
            }
        }
        let reach = critical.iter().map(|p| p.norm()).fold(0.0, f64::max);
        if self.large_circle_radius.is_nan() || self.large_circle_radius <= reach + CLEARANCE {
            return Err(Error::InvalidContour(format!(
                "outer radius {} does not exceed every critical point (max modulus {reach})",
                self.large_circle_radius
            )));
        }
        Ok(())
    }

    fn all_circles(&self) -> Vec<Circle> {
        let mut all = vec![Circle {
            center: Complex64::default(),
            radius: self.large_circle_radius,
            orientation: 1,
        }];
        all.extend(self.circles.iter().copied());
        all
    }
}

/// Value of one contour integral ∮ Qₙ dt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WkbTermValue {
    pub order: usize,
    /// The raw integral ∮ Qₙ dt.
    pub integral: Complex64,
    pub scheme: Scheme,
    pub geometry: Geometry,
    /// Largest sample count used on any circle.
    pub samples: usize,
}

impl WkbTermValue {
    /// The term's share of the quantization condition, `(ħ/i)ⁿ·∮Qₙ dt`
    /// with ħ = 1.
    pub fn contribution(&self) -> Complex64 {
        Complex64::new(0.0, -1.0).powu(self.order as u32) * self.integral
    }
}

/// Qₙ at `z`, continuing the branch of Q₀ from `state`.
pub fn q_term(order: usize, field: &MomentumField, z: Complex64, state: &mut BranchState) -> Result<Complex64> {
    state.step_to(field, z)?;
    riccati::q_value(field, order, z, state.q0)
}

/// Trapezoidal sum of ∮ f(z)/z dz counterclockwise, with f sampled by
/// continuing Q₀ from `start` around the circle.
fn sweep(
    field: &MomentumField,
    circle: &Circle,
    start: &BranchState,
    samples: usize,
    mut f: impl FnMut(Complex64, Complex64) -> Result<Complex64>,
) -> Result<Complex64> {
    let theta0 = circle.start_angle();
    let mut state = *start;
    let mut sum = Complex64::default();
    for j in 0..samples {
        let theta = theta0 + 2.0 * PI * j as f64 / samples as f64;
        let z = circle.point(theta);
        state.walk_to(field, z)?;
        let w = Complex64::new(0.0, 1.0) * (z - circle.center) / z;
        sum += f(z, state.q0)? * w;
    }
    state.walk_to(field, circle.point(theta0))?;
    if (state.q0 - start.q0).norm() > 1e-6 * (1.0 + start.q0.norm()) {
        return Err(Error::InvalidContour(format!(
            "Q₀ does not return to its starting value around {circle:?}; the circle encloses a branch point"
        )));
    }
    Ok(sum * (2.0 * PI / samples as f64))
}

fn circle_integral(
    field: &MomentumField,
    circle: &Circle,
    index: usize,
    initial_samples: usize,
    mut f: impl FnMut(Complex64, Complex64) -> Result<Complex64>,
) -> Result<(Complex64, usize)> {
    let start = BranchState::reach(field, circle.point(circle.start_angle()))?;
    let mut samples = initial_samples;
    let mut previous = sweep(field, circle, &start, samples, &mut f)?;
    loop {
        if samples * 2 > MAX_SAMPLES {
            return Err(Error::QuadratureFailure {
                circle: index,
                samples,
                last_change: f64::NAN,
            });
        }
        samples *= 2;
        let current = sweep(field, circle, &start, samples, &mut f)?;
        let change = (current - previous).norm();
        if change <= RELATIVE_TOLERANCE * current.norm() || change <= ABSOLUTE_TOLERANCE {
            return Ok((current, samples));
        }
        if samples * 2 > MAX_SAMPLES {
            return Err(Error::QuadratureFailure {
                circle: index,
                samples,
                last_change: change,
            });
        }
        previous = current;
    }
}

/// ∮_L Qₙ dt = (outer circle) − Σ (small circles), each counterclockwise.
pub fn integrate_term(order: usize, field: &MomentumField, contour: &ContourSpec) -> Result<WkbTermValue> {
    contour.validate(field)?;
    let mut total = Complex64::default();
    let mut max_samples = 0;
    for (index, circle) in contour.all_circles().iter().enumerate() {
        let (value, samples) = circle_integral(field, circle, index, contour.samples_per_circle, |z, q0| {
            riccati::q_value(field, order, z, q0)
        })?;
        total += f64::from(circle.orientation) * value;
        max_samples = max_samples.max(samples);
    }
    Ok(WkbTermValue {
        order,
        integral: total,
        scheme: field.coefficients.scheme,
        geometry: field.geometry(),
        samples: max_samples,
    })
}

/// Closed-form value of the order-0 and order-1 contributions,
/// `(ħ/i)ⁿ·∮Qₙ dt`: order 0 is 2π times the bound-branch residue sum,
/// order 1 is −2πħ for every field.
pub fn analytic_residue_sum(order: usize, coeffs: &CoefficientSet) -> Result<Complex64> {
    match order {
        0 => Ok(Complex64::new(
            2.0 * PI * order_zero_sum(coeffs, BranchConvention::BoundBranch)?,
            0.0,
        )),
        1 => Ok(Complex64::new(-2.0 * PI, 0.0)),
        _ => Err(Error::InvalidInput(format!(
            "closed-form residue sums exist for orders 0 and 1 only, got {order}"
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VanishingEntry {
    pub order: usize,
    pub value: WkbTermValue,
    /// |(ħ/i)ⁿ·∮Qₙ dt|
    pub magnitude: f64,
}

/// Measures |∮Qₙ dt| for each requested order. Never asserts.
pub fn higher_order_vanishing(
    field: &MomentumField,
    orders: &[usize],
    contour: &ContourSpec,
) -> Result<Vec<VanishingEntry>> {
    orders
        .iter()
        .map(|&order| {
            let value = integrate_term(order, field, contour)?;
            Ok(VanishingEntry {
                order,
                magnitude: value.integral.norm(),
                value,
            })
        })
        .collect()
}

/// Largest Riccati residual `|(ħ/i)Q′ + Q² − Π² + (ħ/i)²Δ|` over `samples`
/// points of `probe`, with Q truncated after order `truncation`.
pub fn riccati_residual(field: &MomentumField, probe: &Circle, samples: usize, truncation: usize) -> Result<f64> {
    let start_z = probe.point(probe.start_angle());
    let mut state = BranchState::reach(field, start_z)?;
    let mut worst = 0.0f64;
    for j in 0..samples {
        let z = probe.point(probe.start_angle() + 2.0 * PI * j as f64 / samples as f64);
        state.walk_to(field, z)?;
        worst = worst.max(riccati::residual_at(field, z, state.q0, truncation)?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::build;
    use approx::assert_abs_diff_eq;

    fn field(g: Geometry, mu: f64, l: u32, eps: f64, scheme: Scheme) -> MomentumField {
        MomentumField::at(g, mu, l, eps, scheme).unwrap()
    }

    fn integral(order: usize, f: &MomentumField) -> WkbTermValue {
        let spec = ContourSpec::for_field(f, 256).unwrap();
        integrate_term(order, f, &spec).unwrap()
    }

    #[test]
    fn order_zero_examples() {
        let flat = integral(0, &field(Geometry::Flat, 0.0, 0, 1.5, Scheme::Naive));
        assert_abs_diff_eq!(flat.integral.re, 2.0 * PI, epsilon = 1e-8);
        assert_abs_diff_eq!(flat.integral.im, 0.0, epsilon = 1e-8);
        let h = integral(0, &field(Geometry::Hyperbolic, 30.0, 0, 7.5, Scheme::Corrected));
        assert_abs_diff_eq!(h.integral.re, 2.0 * PI, epsilon = 1e-7);
        assert_abs_diff_eq!(h.integral.im, 0.0, epsilon = 1e-7);
    }

    #[test]
    fn order_one_is_universal() {
        for (g, mu, eps) in [
            (Geometry::Flat, 0.0, 2.5),
            (Geometry::Hyperbolic, 30.0, 11.0),
            (Geometry::Spherical, 5.0, 8.0),
        ] {
            for scheme in [Scheme::Naive, Scheme::Corrected] {
                let v = integral(1, &field(g, mu, 1, eps, scheme));
                assert_abs_diff_eq!(v.integral.re, 0.0, epsilon = 1e-8);
                assert_abs_diff_eq!(v.integral.im, -2.0 * PI, epsilon = 1e-8);
                assert_abs_diff_eq!(v.contribution().re, -2.0 * PI, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn analytic_sums() {
        let c = build(Geometry::Hyperbolic, 30.0, 0, 7.5, Scheme::Corrected).unwrap();
        assert_abs_diff_eq!(analytic_residue_sum(0, &c).unwrap().re, 2.0 * PI, epsilon = 1e-12);
        assert_eq!(analytic_residue_sum(1, &c).unwrap(), Complex64::new(-2.0 * PI, 0.0));
        assert!(analytic_residue_sum(2, &c).is_err());
    }

    #[test]
    fn contour_independence() {
        let f = field(Geometry::Spherical, 30.0, 1, 16.5, Scheme::Corrected);
        let spec = ContourSpec::for_field(&f, 256).unwrap();
        for order in 0..=2 {
            let a = integrate_term(order, &f, &spec).unwrap().integral;
            let b = integrate_term(order, &f, &spec.scaled(2.0)).unwrap().integral;
            assert!((a - b).norm() <= 1e-8 * (1.0 + a.norm()), "order {order}: {a} vs {b}");
        }
    }

    #[test]
    fn second_order_scheme_dependence() {
        let corrected = integral(2, &field(Geometry::Hyperbolic, 30.0, 0, 7.5, Scheme::Corrected));
        assert!(corrected.integral.norm() < 1e-6, "{corrected:?}");
        let naive = integral(2, &field(Geometry::Hyperbolic, 30.0, 0, 7.5, Scheme::Naive));
        assert!(naive.integral.norm() > 1e-2, "{naive:?}");
    }

    #[test]
    fn validation_rejects_bad_contours() {
        let f = field(Geometry::Hyperbolic, 30.0, 0, 7.5, Scheme::Corrected);
        let spec = ContourSpec::for_field(&f, 256).unwrap();
        let few = ContourSpec {
            samples_per_circle: 32,
            ..spec.clone()
        };
        assert!(matches!(few.validate(&f), Err(Error::InvalidContour(_))));
        let small_outer = ContourSpec {
            large_circle_radius: 0.9,
            ..spec.clone()
        };
        assert!(matches!(small_outer.validate(&f), Err(Error::InvalidContour(_))));
        assert!(matches!(spec.scaled(4.0).validate(&f), Err(Error::InvalidContour(_))));
    }

    #[test]
    fn q_term_follows_branch() {
        let f = field(Geometry::Flat, 0.0, 0, 1.5, Scheme::Naive);
        let mut state = BranchState::anchor(&f).unwrap();
        let q = q_term(0, &f, Complex64::new(1.0, 0.0), &mut state).unwrap();
        assert_abs_diff_eq!(q.re, 1.3228756555, epsilon = 1e-9);
    }

    #[test]
    fn riccati_residual_is_small_far_out() {
        let f = field(Geometry::Flat, 0.0, 0, 1.5, Scheme::Naive);
        let probe = Circle {
            center: Complex64::default(),
            radius: 20.0,
            orientation: 1,
        };
        let r = riccati_residual(&f, &probe, 256, 4).unwrap();
        assert!(r < 1e-4, "residual {r}");
    }
}
