//! Python bindings.
//!
//! Geometries are passed as strings (`"e3"`, `"h3"`, `"s3"` or their long
//! names) and WKB schemes as `"naive"` or `"corrected"`. Every library error
//! is raised as `oscspec.OscspecError`, a subclass of `ValueError`.

use num_complex::Complex64;
use oscspec_core as core;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(oscspec, OscspecError, PyValueError);

fn err(e: core::Error) -> PyErr {
    OscspecError::new_err(e.to_string())
}

fn geometry(name: &str) -> PyResult<core::Geometry> {
    name.parse().map_err(err)
}

fn scheme(name: &str) -> PyResult<core::Scheme> {
    match name.to_ascii_lowercase().as_str() {
        "naive" => Ok(core::Scheme::Naive),
        "corrected" => Ok(core::Scheme::Corrected),
        other => Err(OscspecError::new_err(format!("unknown scheme '{other}'"))),
    }
}

/// One level of a spectrum.
#[pyclass(frozen, get_all, module = "oscspec")]
struct SpectrumEntry {
    geometry: String,
    n: u32,
    l: u32,
    /// N = 2n + l + 3/2.
    principal: f64,
    epsilon: f64,
    method: String,
    bound: bool,
}

#[pymethods]
impl SpectrumEntry {
    fn __repr__(&self) -> String {
        format!(
            "SpectrumEntry(geometry='{}', n={}, l={}, epsilon={}, method='{}', bound={})",
            self.geometry,
            self.n,
            self.l,
            self.epsilon,
            self.method,
            if self.bound { "True" } else { "False" }
        )
    }
}

impl From<core::SpectrumEntry> for SpectrumEntry {
    fn from(e: core::SpectrumEntry) -> Self {
        SpectrumEntry {
            geometry: e.geometry.label().to_owned(),
            n: e.quantum_numbers.n,
            l: e.quantum_numbers.l,
            principal: e.quantum_numbers.principal().to_f64(),
            epsilon: e.epsilon,
            method: e.method.label().to_owned(),
            bound: e.bound,
        }
    }
}

/// Value of one WKB term integrated around the standard contour.
#[pyclass(frozen, get_all, module = "oscspec")]
struct WkbTerm {
    order: usize,
    /// Raw contour integral of Q_order.
    integral: Complex64,
    /// (−i)^order · integral, the term's share of 2π·2n.
    contribution: Complex64,
    samples: usize,
}

#[pymethods]
impl WkbTerm {
    fn __repr__(&self) -> String {
        format!(
            "WkbTerm(order={}, contribution={}, samples={})",
            self.order, self.contribution, self.samples
        )
    }
}

/// Π²(z) and its quadrature for one (geometry, μ, l, ε, scheme).
#[pyclass(frozen, module = "oscspec")]
struct MomentumField {
    inner: core::MomentumField,
}

#[pymethods]
impl MomentumField {
    #[new]
    #[pyo3(signature = (geometry, mu, l, epsilon, scheme = "corrected"))]
    fn new(geometry: &str, mu: f64, l: u32, epsilon: f64, scheme: &str) -> PyResult<Self> {
        let inner =
            core::MomentumField::at(self::geometry(geometry)?, mu, l, epsilon, self::scheme(scheme)?).map_err(err)?;
        Ok(MomentumField { inner })
    }

    /// (A, B, C) in Π² = (A z⁴ + B z² + C) / D(z).
    #[getter]
    fn coefficients(&self) -> (f64, f64, f64) {
        let c = &self.inner.coefficients;
        (c.a, c.b, c.c)
    }

    /// Positive real turning points, or None without a classical region.
    #[getter]
    fn turning_points(&self) -> Option<(f64, f64)> {
        self.inner.turning_points().map(|[a, b]| (a, b))
    }

    #[getter]
    fn poles(&self) -> Vec<Complex64> {
        self.inner.poles()
    }

    fn pi_squared(&self, z: Complex64) -> PyResult<Complex64> {
        self.inner.pi_squared(z).map_err(err)
    }

    fn delta(&self, z: Complex64) -> PyResult<Complex64> {
        self.inner.delta(z).map_err(err)
    }

    #[pyo3(signature = (order, samples = 4096))]
    fn integrate_term(&self, py: Python<'_>, order: usize, samples: usize) -> PyResult<WkbTerm> {
        let value = py
            .detach(|| {
                let spec = core::ContourSpec::for_field(&self.inner, samples)?;
                core::integrate_term(order, &self.inner, &spec)
            })
            .map_err(err)?;
        Ok(WkbTerm {
            order: value.order,
            integral: value.integral,
            contribution: value.contribution(),
            samples: value.samples,
        })
    }

    /// Residue-theorem value of the order-0 or order-1 contribution.
    fn analytic_residue_sum(&self, order: usize) -> PyResult<Complex64> {
        core::analytic_residue_sum(order, &self.inner.coefficients).map_err(err)
    }

    /// Closed-form order-0 + order-1 sum; equals 2n on an eigenvalue.
    fn two_term_sum(&self) -> PyResult<f64> {
        core::two_term_sum(&self.inner.coefficients, core::BranchConvention::BoundBranch).map_err(err)
    }
}

/// Result of the shooting solver.
#[pyclass(frozen, get_all, module = "oscspec")]
struct EigenResult {
    epsilon: f64,
    node_count: u32,
    converged: bool,
    continuum: bool,
    r_max: f64,
    iterations: usize,
    diagnostics: String,
    /// (r, u) samples normalized to ∫u² dr = 1.
    wavefunction: Vec<(f64, f64)>,
}

#[pymethods]
impl EigenResult {
    fn __repr__(&self) -> String {
        format!(
            "EigenResult(epsilon={}, node_count={}, converged={}, continuum={})",
            self.epsilon,
            self.node_count,
            if self.converged { "True" } else { "False" },
            if self.continuum { "True" } else { "False" }
        )
    }
}

#[pyfunction]
fn exact_epsilon(geometry: &str, mu: f64, n: u32, l: u32) -> PyResult<SpectrumEntry> {
    core::exact_epsilon(self::geometry(geometry)?, mu, core::QuantumNumbers::new(n, l))
        .map(Into::into)
        .map_err(err)
}

/// Closed-form level of the uncorrected WKB rule.
#[pyfunction]
fn naive_wkb_epsilon(geometry: &str, mu: f64, n: u32, l: u32) -> PyResult<SpectrumEntry> {
    core::naive_wkb_epsilon(self::geometry(geometry)?, mu, core::QuantumNumbers::new(n, l))
        .map(Into::into)
        .map_err(err)
}

/// Root of the two-term quantization rule, found numerically.
#[pyfunction]
#[pyo3(signature = (geometry, mu, n, l, scheme = "corrected"))]
fn solve_epsilon(geometry: &str, mu: f64, n: u32, l: u32, scheme: &str) -> PyResult<SpectrumEntry> {
    core::solve_epsilon(
        self::geometry(geometry)?,
        mu,
        core::QuantumNumbers::new(n, l),
        self::scheme(scheme)?,
    )
    .map(Into::into)
    .map_err(err)
}

/// Number of bound hyperbolic levels with angular momentum l.
#[pyfunction]
fn bound_state_count(mu: f64, l: u32) -> PyResult<u32> {
    core::bound_state_count(mu, l).map_err(err)
}

/// W(r) in u″ + W u = 0.
#[pyfunction]
fn effective_equation(geometry: &str, mu: f64, l: u32, epsilon: f64, r: f64) -> PyResult<f64> {
    core::effective_equation(self::geometry(geometry)?, mu, l, epsilon, r).map_err(err)
}

/// Level with n radial nodes from direct integration of the radial equation.
#[pyfunction]
#[pyo3(signature = (geometry, mu, l, n, r_max = None, grid_points = 20_000))]
fn solve_ode(
    py: Python<'_>,
    geometry: &str,
    mu: f64,
    l: u32,
    n: u32,
    r_max: Option<f64>,
    grid_points: usize,
) -> PyResult<EigenResult> {
    let g = self::geometry(geometry)?;
    let config = core::OracleConfig {
        r_max,
        grid_points,
        ..core::OracleConfig::default()
    };
    let r = py.detach(|| core::solve(g, mu, l, n, &config)).map_err(err)?;
    Ok(EigenResult {
        epsilon: r.epsilon,
        node_count: r.node_count,
        converged: r.converged,
        continuum: r.continuum,
        r_max: r.r_max,
        iterations: r.iterations,
        diagnostics: r.diagnostics,
        wavefunction: r.wavefunction,
    })
}

/// A curved-space ε in flat oscillator units, ε/√μ.
#[pyfunction]
fn flat_limit_energy(epsilon: f64, mu: f64) -> PyResult<f64> {
    core::flat_limit_energy(epsilon, mu).map_err(err)
}

#[pymodule]
fn oscspec(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("OscspecError", m.py().get_type::<OscspecError>())?;
    m.add_class::<SpectrumEntry>()?;
    m.add_class::<WkbTerm>()?;
    m.add_class::<MomentumField>()?;
    m.add_class::<EigenResult>()?;
    m.add_function(wrap_pyfunction!(exact_epsilon, m)?)?;
    m.add_function(wrap_pyfunction!(naive_wkb_epsilon, m)?)?;
    m.add_function(wrap_pyfunction!(solve_epsilon, m)?)?;
    m.add_function(wrap_pyfunction!(bound_state_count, m)?)?;
    m.add_function(wrap_pyfunction!(effective_equation, m)?)?;
    m.add_function(wrap_pyfunction!(solve_ode, m)?)?;
    m.add_function(wrap_pyfunction!(flat_limit_energy, m)?)?;
    Ok(())
}
