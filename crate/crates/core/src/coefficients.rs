//! Coefficient triples (A, B, C) and the momentum field Π²(z), Δ(z).
//!
//! After the substitution `z = eᵗ` (with `z = r`, `tanh r` or `tan r`) and
//! removal of the first-derivative term, each radial equation reads
//! `S'' + [Π²(t)/ħ² + Δ(t)]·S = 0` with
//!
//! ```text
//! Π²(z) = (A z⁴ + B z² + C) / D(z),   D = 1, (1 − z²)², (1 + z²)².
//! ```
//!
//! The naive scheme keeps the triple that falls out of the substitution.
//! The corrected scheme shifts A by −ħ²/4 and B by ±ħ²/4 and moves the
//! difference into Δ, so that Π² + Δ is unchanged.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{require_mu, Geometry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Naive,
    Corrected,
}

impl Scheme {
    pub fn label(self) -> &'static str {
        match self {
            Scheme::Naive => "naive",
            Scheme::Corrected => "corrected",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Scheme::Naive),
            "corrected" => Ok(Scheme::Corrected),
            other => Err(Error::InvalidInput(format!("unknown scheme '{other}'"))),
        }
    }
}

/// The (A, B, C) triple at a trial energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    pub geometry: Geometry,
    pub scheme: Scheme,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Stiffness the triple was built with (unused for flat).
    pub mu: f64,
    /// Trial energy baked into B.
    pub epsilon: f64,
    pub l: u32,
    /// Shift of A relative to the naive triple, in units of ħ².
    pub alpha: f64,
    /// Shift of B relative to the naive triple, in units of ħ².
    pub beta: f64,
}

impl CoefficientSet {
    /// True when a corrected triple was requested but the geometry needs no
    /// correction (flat space), so the naive triple was returned.
    pub fn is_noop_correction(&self) -> bool {
        self.scheme == Scheme::Corrected && self.geometry == Geometry::Flat
    }

    /// Roots of `A w² + B w + C = 0` in `w = z²`, i.e. the squared turning
    /// points, when both are real and positive. Sorted ascending.
    pub fn turning_points_squared(&self) -> Option<(f64, f64)> {
        let disc = self.b * self.b - 4.0 * self.a * self.c;
        if disc < 0.0 || self.a == 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        // Stable quadratic roots.
        let q = -0.5 * (self.b + self.b.signum() * sq);
        if q == 0.0 {
            return None;
        }
        let (w1, w2) = (q / self.a, self.c / q);
        let (lo, hi) = if w1 <= w2 { (w1, w2) } else { (w2, w1) };
        (lo > 0.0 && hi > lo).then_some((lo, hi))
    }
}

/// Builds the coefficient triple for one geometry, scheme and trial energy.
///
/// Flat space uses units with M = k = 1, so A = −1 and B = 2ε. A corrected
/// request for flat space returns the naive triple
/// (see [`CoefficientSet::is_noop_correction`]).
pub fn build(geometry: Geometry, mu: f64, l: u32, epsilon: f64, scheme: Scheme) -> Result<CoefficientSet> {
    require_mu(geometry, mu)?;
    if !epsilon.is_finite() {
        return Err(Error::InvalidInput(format!("epsilon must be finite, got {epsilon}")));
    }
    let l2 = (f64::from(l) + 0.5).powi(2);
    let c = -l2;
    let (a_naive, b_naive) = match geometry {
        Geometry::Flat => (-1.0, 2.0 * epsilon),
        Geometry::Hyperbolic => (-mu, 2.0 * epsilon - 1.0 + l2),
        Geometry::Spherical => (-mu, 2.0 * epsilon + 1.0 - l2),
    };
    let (alpha, beta) = match (geometry, scheme) {
        (Geometry::Flat, _) | (_, Scheme::Naive) => (0.0, 0.0),
        (Geometry::Hyperbolic, Scheme::Corrected) => (-0.25, 0.25),
        (Geometry::Spherical, Scheme::Corrected) => (-0.25, -0.25),
    };
    Ok(CoefficientSet {
        geometry,
        scheme,
        a: a_naive + alpha,
        b: b_naive + beta,
        c,
        mu: if geometry.is_curved() { mu } else { 1.0 },
        epsilon,
        l,
        alpha,
        beta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenominatorKind {
    One,
    /// `(1 − z²)²`
    OneMinusZSquared,
    /// `(1 + z²)²`
    OnePlusZSquared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaKind {
    None,
    HyperbolicNaive,
    HyperbolicCorrected,
    SphericalNaive,
    SphericalCorrected,
}

/// Π² and Δ for one coefficient set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumField {
    pub coefficients: CoefficientSet,
    pub denominator: DenominatorKind,
    pub delta_kind: DeltaKind,
}

impl MomentumField {
    pub fn new(coefficients: CoefficientSet) -> Self {
        let (denominator, delta_kind) = match (coefficients.geometry, coefficients.scheme) {
            (Geometry::Flat, _) => (DenominatorKind::One, DeltaKind::None),
            (Geometry::Hyperbolic, Scheme::Naive) => (DenominatorKind::OneMinusZSquared, DeltaKind::HyperbolicNaive),
            (Geometry::Hyperbolic, Scheme::Corrected) => {
                (DenominatorKind::OneMinusZSquared, DeltaKind::HyperbolicCorrected)
            }
            (Geometry::Spherical, Scheme::Naive) => (DenominatorKind::OnePlusZSquared, DeltaKind::SphericalNaive),
            (Geometry::Spherical, Scheme::Corrected) => {
                (DenominatorKind::OnePlusZSquared, DeltaKind::SphericalCorrected)
            }
        };
        MomentumField {
            coefficients,
            denominator,
            delta_kind,
        }
    }

    /// Shorthand for `MomentumField::new(build(..)?)`.
    pub fn at(geometry: Geometry, mu: f64, l: u32, epsilon: f64, scheme: Scheme) -> Result<Self> {
        Ok(MomentumField::new(build(geometry, mu, l, epsilon, scheme)?))
    }

    pub fn geometry(&self) -> Geometry {
        self.coefficients.geometry
    }

    /// Finite poles of the denominator.
    pub fn poles(&self) -> Vec<Complex64> {
        match self.denominator {
            DenominatorKind::One => vec![],
            DenominatorKind::OneMinusZSquared => vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
            DenominatorKind::OnePlusZSquared => vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)],
        }
    }

    /// Real turning points `±√a, ±√b` (zeros of the numerator), when they
    /// exist. Returned as `[√a, √b]`.
    pub fn turning_points(&self) -> Option<[f64; 2]> {
        self.coefficients
            .turning_points_squared()
            .map(|(a, b)| [a.sqrt(), b.sqrt()])
    }

    fn check_pole(&self, z: Complex64) -> Result<()> {
        let z2 = z * z;
        let near = match self.denominator {
            DenominatorKind::One => false,
            DenominatorKind::OneMinusZSquared => (Complex64::new(1.0, 0.0) - z2).norm() < 1e-13,
            DenominatorKind::OnePlusZSquared => (Complex64::new(1.0, 0.0) + z2).norm() < 1e-13,
        };
        if near {
            let location = self
                .poles()
                .into_iter()
                .min_by(|p, q| (p - z).norm().total_cmp(&(q - z).norm()))
                .unwrap_or(z);
            return Err(Error::PoleEvaluation { location });
        }
        Ok(())
    }

    fn numerator(&self, z: Complex64) -> [Complex64; 3] {
        let CoefficientSet { a, b, c, .. } = self.coefficients;
        let z2 = z * z;
        [
            (z2 * a + b) * z2 + c,
            z * (z2 * (4.0 * a) + 2.0 * b),
            z2 * (12.0 * a) + 2.0 * b,
        ]
    }

    fn denominator_jet(&self, z: Complex64) -> [Complex64; 3] {
        let one = Complex64::new(1.0, 0.0);
        let z2 = z * z;
        match self.denominator {
            DenominatorKind::One => [one, Complex64::default(), Complex64::default()],
            DenominatorKind::OneMinusZSquared => {
                let s = one - z2;
                [s * s, -4.0 * z * s, z2 * 12.0 - 4.0]
            }
            DenominatorKind::OnePlusZSquared => {
                let s = one + z2;
                [s * s, 4.0 * z * s, z2 * 12.0 + 4.0]
            }
        }
    }

    /// Π²(z).
    pub fn pi_squared(&self, z: Complex64) -> Result<Complex64> {
        self.check_pole(z)?;
        Ok(self.numerator(z)[0] / self.denominator_jet(z)[0])
    }

    /// Π² together with its first and second derivatives in t = ln z.
    pub fn pi_squared_jet(&self, z: Complex64) -> Result<[Complex64; 3]> {
        self.check_pole(z)?;
        let [n0, n1, n2] = self.numerator(z);
        let [d0, d1, d2] = self.denominator_jet(z);
        let p = n0 / d0;
        let pz = (n1 * d0 - n0 * d1) / (d0 * d0);
        let pzz = (n2 * d0 * d0 - n0 * d2 * d0 - 2.0 * n1 * d1 * d0 + 2.0 * n0 * d1 * d1) / (d0 * d0 * d0);
        Ok([p, z * pz, z * pz + z * z * pzz])
    }

    /// The correction term Δ(z) of the active scheme.
    pub fn delta(&self, z: Complex64) -> Result<Complex64> {
        self.check_pole(z)?;
        let one = Complex64::new(1.0, 0.0);
        let z2 = z * z;
        Ok(match self.delta_kind {
            DeltaKind::None => Complex64::default(),
            DeltaKind::HyperbolicNaive => {
                let s = one - z2;
                (5.0 - z2) * z2 / (4.0 * s * s)
            }
            DeltaKind::HyperbolicCorrected => {
                let s = one - z2;
                z2 / (s * s)
            }
            DeltaKind::SphericalNaive => {
                let s = one + z2;
                -(5.0 + z2) * z2 / (4.0 * s * s)
            }
            DeltaKind::SphericalCorrected => {
                let s = one + z2;
                -z2 / (s * s)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hyperbolic_naive_triple() {
        let s = build(Geometry::Hyperbolic, 30.0, 0, 7.5, Scheme::Naive).unwrap();
        assert_eq!((s.a, s.b, s.c), (-30.0, 14.25, -0.25));
        assert_eq!((s.alpha, s.beta), (0.0, 0.0));
    }

    #[test]
    fn hyperbolic_corrected_triple() {
        let s = build(Geometry::Hyperbolic, 30.0, 0, 7.5, Scheme::Corrected).unwrap();
        assert_eq!((s.a, s.b, s.c), (-30.25, 14.5, -0.25));
    }

    #[test]
    fn spherical_naive_triple() {
        let s = build(Geometry::Spherical, 30.0, 1, 16.5, Scheme::Naive).unwrap();
        assert_eq!((s.a, s.b, s.c), (-30.0, 31.75, -2.25));
    }

    #[test]
    fn flat_correction_is_a_noop() {
        let naive = build(Geometry::Flat, 0.0, 2, 3.5, Scheme::Naive).unwrap();
        let corrected = build(Geometry::Flat, 0.0, 2, 3.5, Scheme::Corrected).unwrap();
        assert_eq!((naive.a, naive.b, naive.c), (corrected.a, corrected.b, corrected.c));
        assert!(corrected.is_noop_correction());
        assert!(!naive.is_noop_correction());
        assert_eq!(MomentumField::new(corrected).delta_kind, DeltaKind::None);
    }

    #[test]
    fn curved_geometry_requires_mu() {
        assert!(build(Geometry::Spherical, 0.0, 0, 1.0, Scheme::Naive).is_err());
        assert!(build(Geometry::Hyperbolic, -1.0, 0, 1.0, Scheme::Naive).is_err());
    }

    #[test]
    fn pi_squared_at_origin_is_c() {
        for g in Geometry::ALL {
            let f = MomentumField::at(g, 12.0, 3, 9.0, Scheme::Corrected).unwrap();
            assert_eq!(f.pi_squared(c(0.0, 0.0)).unwrap(), c(f.coefficients.c, 0.0));
        }
    }

    #[test]
    fn flat_turning_points_are_zeros() {
        let f = MomentumField::at(Geometry::Flat, 0.0, 0, 1.5, Scheme::Naive).unwrap();
        for w in [(3.0 + 8f64.sqrt()) / 2.0, (3.0 - 8f64.sqrt()) / 2.0] {
            let z = c(w.sqrt(), 0.0);
            assert!(f.pi_squared(z).unwrap().norm() < 1e-14);
        }
        let [za, zb] = f.turning_points().unwrap();
        assert_relative_eq!(za * za, (3.0 - 8f64.sqrt()) / 2.0, epsilon = 1e-14);
        assert_relative_eq!(zb * zb, (3.0 + 8f64.sqrt()) / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn hyperbolic_pi_squared_hand_value() {
        let f = MomentumField::at(Geometry::Hyperbolic, 30.0, 0, 7.5, Scheme::Naive).unwrap();
        // (1 - 0.25)² = 0.5625
        let expected = (-30.0 * 0.0625 + 14.25 * 0.25 - 0.25) / 0.5625;
        let got = f.pi_squared(c(0.5, 0.0)).unwrap();
        assert_relative_eq!(got.re, expected, epsilon = 1e-14);
        assert_relative_eq!(got.re, 23.0 / 9.0, epsilon = 1e-14);
    }

    #[test]
    fn delta_values() {
        let hn = MomentumField::at(Geometry::Hyperbolic, 30.0, 0, 7.5, Scheme::Naive).unwrap();
        assert_eq!(hn.delta(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let sn = MomentumField::at(Geometry::Spherical, 30.0, 0, 9.0, Scheme::Naive).unwrap();
        assert_relative_eq!(sn.delta(c(0.5, 0.0)).unwrap().re, -0.21, epsilon = 1e-15);
        let hc = MomentumField::at(Geometry::Hyperbolic, 30.0, 0, 7.5, Scheme::Corrected).unwrap();
        assert_eq!(hc.delta(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let flat = MomentumField::at(Geometry::Flat, 0.0, 0, 1.5, Scheme::Corrected).unwrap();
        assert_eq!(flat.delta(c(0.3, 0.2)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn pole_evaluation_reports_location() {
        let f = MomentumField::at(Geometry::Hyperbolic, 30.0, 0, 7.5, Scheme::Naive).unwrap();
        match f.pi_squared(c(-1.0, 0.0)) {
            Err(Error::PoleEvaluation { location }) => assert_eq!(location, c(-1.0, 0.0)),
            other => panic!("expected pole error, got {other:?}"),
        }
        let s = MomentumField::at(Geometry::Spherical, 30.0, 0, 9.0, Scheme::Corrected).unwrap();
        assert!(matches!(s.delta(c(0.0, 1.0)), Err(Error::PoleEvaluation { .. })));
    }

    #[test]
    fn jet_matches_finite_differences() {
        let f = MomentumField::at(Geometry::Spherical, 7.0, 2, 11.0, Scheme::Corrected).unwrap();
        let t0 = c(-0.3, 0.4);
        let h = 1e-4;
        let p = |t: Complex64| f.pi_squared(t.exp()).unwrap();
        let [_, pt, ptt] = f.pi_squared_jet(t0.exp()).unwrap();
        let fd1 = (p(t0 + h) - p(t0 - h)) / (2.0 * h);
        let fd2 = (p(t0 + h) - 2.0 * p(t0) + p(t0 - h)) / (h * h);
        assert!((pt - fd1).norm() < 1e-6 * pt.norm().max(1.0));
        assert!((ptt - fd2).norm() < 1e-4 * ptt.norm().max(1.0));
    }

    fn off_pole(re: f64, im: f64) -> bool {
        let z2 = c(re, im) * c(re, im);
        (c(1.0, 0.0) - z2).norm() > 1e-2 && (c(1.0, 0.0) + z2).norm() > 1e-2
    }

    proptest! {
        #[test]
        fn rearrangement_keeps_the_equation(
            mu in 0.5f64..200.0,
            l in 0u32..6,
            eps in -20.0f64..60.0,
            re in -3.0f64..3.0,
            im in -3.0f64..3.0,
        ) {
            prop_assume!(off_pole(re, im));
            let z = c(re, im);
            for g in [Geometry::Hyperbolic, Geometry::Spherical] {
                let naive = MomentumField::at(g, mu, l, eps, Scheme::Naive).unwrap();
                let corr = MomentumField::at(g, mu, l, eps, Scheme::Corrected).unwrap();
                let lhs = naive.pi_squared(z).unwrap() + naive.delta(z).unwrap();
                let rhs = corr.pi_squared(z).unwrap() + corr.delta(z).unwrap();
                let scale = lhs.norm().max(naive.pi_squared(z).unwrap().norm()).max(1.0);
                prop_assert!((lhs - rhs).norm() <= 1e-12 * scale, "{g}: {lhs} vs {rhs}");
            }
        }

        #[test]
        fn scheme_shifts(mu in 0.5f64..200.0, l in 0u32..6, eps in -20.0f64..60.0) {
            for (g, sign) in [(Geometry::Hyperbolic, 1.0), (Geometry::Spherical, -1.0)] {
                let n = build(g, mu, l, eps, Scheme::Naive).unwrap();
                let k = build(g, mu, l, eps, Scheme::Corrected).unwrap();
                prop_assert!((k.a - n.a + 0.25).abs() < 1e-12);
                prop_assert!((k.b - n.b - sign * 0.25).abs() < 1e-12);
                prop_assert_eq!(k.c, n.c);
                prop_assert_eq!(k.c, -(f64::from(l) + 0.5).powi(2));
                prop_assert!(k.a < 0.0 && n.a < 0.0);
            }
        }

        #[test]
        fn fields_are_even(
            mu in 0.5f64..50.0,
            l in 0u32..4,
            eps in 0.0f64..30.0,
            re in -2.0f64..2.0,
            im in -2.0f64..2.0,
        ) {
            prop_assume!(off_pole(re, im));
            let z = c(re, im);
            for g in Geometry::ALL {
                for s in [Scheme::Naive, Scheme::Corrected] {
                    let f = MomentumField::at(g, mu, l, eps, s).unwrap();
                    let p = f.pi_squared(z).unwrap();
                    prop_assert!((p - f.pi_squared(-z).unwrap()).norm() <= 1e-12 * p.norm().max(1.0));
                    let d = f.delta(z).unwrap();
                    prop_assert!((d - f.delta(-z).unwrap()).norm() <= 1e-12 * d.norm().max(1.0));
                }
            }
        }
    }
}
