//! Domain types shared by every solver: the three curvature models, the
//! dimensionless stiffness, quantum numbers and spectrum entries.
//!
//! Everything inside the crate works in units where ħ = 1 and lengths are
//! measured in curvature radii (curved models) or oscillator lengths (flat
//! model). Physical units only appear in [`to_dimensionless`] and
//! [`from_dimensionless`].

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

/// The three constant-curvature models of 3-space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Geometry {
    /// Euclidean space E3, zero curvature.
    Flat,
    /// Lobachevsky space H3, potential `(kρ²/2)·tanh²(r/ρ)`.
    Hyperbolic,
    /// Riemann space S3, potential `(kρ²/2)·tan²(r/ρ)`.
    Spherical,
}

impl Geometry {
    pub const ALL: [Geometry; 3] = [Geometry::Flat, Geometry::Hyperbolic, Geometry::Spherical];

    /// 0 for flat, -1 for hyperbolic, +1 for spherical.
    pub fn curvature_sign(self) -> i8 {
        match self {
            Geometry::Flat => 0,
            Geometry::Hyperbolic => -1,
            Geometry::Spherical => 1,
        }
    }

    pub fn is_curved(self) -> bool {
        self != Geometry::Flat
    }

    /// Short label used on the command line and in output files.
    pub fn label(self) -> &'static str {
        match self {
            Geometry::Flat => "e3",
            Geometry::Hyperbolic => "h3",
            Geometry::Spherical => "s3",
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "e3" | "flat" | "euclidean" => Ok(Geometry::Flat),
            "h3" | "hyperbolic" | "lobachevsky" => Ok(Geometry::Hyperbolic),
            "s3" | "spherical" | "riemann" => Ok(Geometry::Spherical),
            other => Err(Error::InvalidInput(format!("unknown geometry '{other}'"))),
        }
    }
}

/// An exact half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(value: i64) -> Self {
        HalfInt { twice: 2 * value }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// The square, returned as an integer count of quarters.
    pub const fn squared_quarters(self) -> i64 {
        self.twice * self.twice
    }
}

impl Add for HalfInt {
    type Output = HalfInt;

    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice + rhs.twice)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;

    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice - rhs.twice)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Radial and orbital quantum numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantumNumbers {
    pub n: u32,
    pub l: u32,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32) -> Self {
        QuantumNumbers { n, l }
    }

    /// `N = 2n + l + 3/2`; every spectrum depends on (n, l) only through it.
    pub fn principal(self) -> HalfInt {
        HalfInt::from_twice(4 * i64::from(self.n) + 2 * i64::from(self.l) + 3)
    }

    /// `L = l + 1/2`.
    pub fn angular(self) -> HalfInt {
        HalfInt::from_twice(2 * i64::from(self.l) + 1)
    }

    /// `L² = (l + 1/2)²` as a float. Exact for every realistic l.
    pub fn l_squared(self) -> f64 {
        self.angular().squared_quarters() as f64 / 4.0
    }
}

/// Physical constants needed to convert energies to and from the
/// dimensionless scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalScales {
    pub mass: f64,
    pub stiffness: f64,
    pub radius: f64,
}

/// Dimensionless stiffness μ = M·k·ρ⁴/ħ² plus the action scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    mu: f64,
    hbar: f64,
    physical: Option<PhysicalScales>,
}

impl ModelParams {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::Config(format!("mu must be positive and finite, got {mu}")));
        }
        Ok(ModelParams {
            mu,
            hbar: 1.0,
            physical: None,
        })
    }

    /// Builds the parameters from physical constants; μ is derived.
    pub fn from_physical(mass: f64, stiffness: f64, radius: f64, hbar: f64) -> Result<Self> {
        for (name, value) in [
            ("mass", mass),
            ("stiffness", stiffness),
            ("radius", radius),
            ("hbar", hbar),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Config(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        let mu = mass * stiffness * radius.powi(4) / (hbar * hbar);
        Ok(ModelParams {
            mu,
            hbar,
            physical: Some(PhysicalScales {
                mass,
                stiffness,
                radius,
            }),
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn physical(&self) -> Option<&PhysicalScales> {
        self.physical.as_ref()
    }

    fn scales(&self) -> Result<&PhysicalScales> {
        self.physical
            .as_ref()
            .ok_or_else(|| Error::Config("unit conversion needs mass, stiffness and radius".into()))
    }
}

/// Which procedure produced a spectrum entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    WkbNaive,
    WkbCorrected,
    OdeOracle,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::WkbNaive => "wkb-naive",
            Method::WkbCorrected => "wkb-corrected",
            Method::OdeOracle => "ode",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "wkb-naive" => Ok(Method::WkbNaive),
            "wkb-corrected" => Ok(Method::WkbCorrected),
            "ode" => Ok(Method::OdeOracle),
            other => Err(Error::InvalidInput(format!("unknown method '{other}'"))),
        }
    }
}

/// One energy level.
///
/// `epsilon` is `M·E·ρ²/ħ²` for the curved models and `E/(ħ√(k/M))` for the
/// flat one. `bound` is false only for hyperbolic levels above the
/// continuum edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub geometry: Geometry,
    pub quantum_numbers: QuantumNumbers,
    pub epsilon: f64,
    pub method: Method,
    pub bound: bool,
}

/// Converts a physical energy to the dimensionless ε of `geometry`.
pub fn to_dimensionless(energy: f64, params: &ModelParams, geometry: Geometry) -> Result<f64> {
    let s = params.scales()?;
    let hbar = params.hbar;
    Ok(match geometry {
        Geometry::Flat => energy / (hbar * (s.stiffness / s.mass).sqrt()),
        Geometry::Hyperbolic | Geometry::Spherical => s.mass * energy * s.radius * s.radius / (hbar * hbar),
    })
}

/// Inverse of [`to_dimensionless`].
pub fn from_dimensionless(epsilon: f64, params: &ModelParams, geometry: Geometry) -> Result<f64> {
    let s = params.scales()?;
    let hbar = params.hbar;
    Ok(match geometry {
        Geometry::Flat => epsilon * hbar * (s.stiffness / s.mass).sqrt(),
        Geometry::Hyperbolic | Geometry::Spherical => epsilon * hbar * hbar / (s.mass * s.radius * s.radius),
    })
}

/// A curved-space ε expressed in flat oscillator units ħ√(k/M), i.e. ε/√μ.
pub fn flat_limit_energy(epsilon: f64, mu: f64) -> Result<f64> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidInput(format!("mu must be positive, got {mu}")));
    }
    Ok(epsilon / mu.sqrt())
}

pub(crate) fn require_mu(geometry: Geometry, mu: f64) -> Result<()> {
    if geometry.is_curved() && !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidInput(format!(
            "{geometry} needs a positive stiffness mu, got {mu}"
        )));
    }
    Ok(())
}
