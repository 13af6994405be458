//! Direct numerical solution of the radial equations.
//!
//! With `u = r·f`, `sinh(r)·f` or `sin(r)·f` each radial equation becomes
//! `u″ + W(r)·u = 0`. The solver integrates it with Numerov's method from
//! both ends, matches the two solutions at the outermost classical turning
//! point and bisects on ε using the node count and the jump in the
//! logarithmic derivative. It shares no code with the WKB pipeline.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::model::{require_mu, Geometry};

/// Margin kept from the singular endpoints of the spherical domain.
pub const SPHERICAL_MARGIN: f64 = 1e-6;
const MIN_GRID_POINTS: usize = 2000;
/// Largest hyperbolic domain the automatic truncation will use.
const MAX_HYPERBOLIC_RANGE: f64 = 60.0;
/// Domain used for the first, coarse pass before the tail length is known.
const FIRST_PASS_RANGE_FLAT: f64 = 15.0;
const FIRST_PASS_RANGE_HYPERBOLIC: f64 = 25.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Outer truncation radius for flat and hyperbolic space. `None` picks
    /// it from the decay length of the converged state.
    pub r_max: Option<f64>,
    pub grid_points: usize,
    /// Target width of the final ε bracket.
    pub bisection_tol: f64,
    pub max_iterations: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            r_max: None,
            grid_points: 20_000,
            bisection_tol: 1e-11,
            max_iterations: 200,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < MIN_GRID_POINTS {
            return Err(Error::Config(format!(
                "grid_points = {} is below {MIN_GRID_POINTS}",
                self.grid_points
            )));
        }
        if !(self.bisection_tol > 0.0 && self.bisection_tol <= 1e-8) {
            return Err(Error::Config(format!(
                "bisection_tol = {:e} must lie in (0, 1e-8]",
                self.bisection_tol
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be positive".into()));
        }
        if let Some(r) = self.r_max {
            if !(r.is_finite() && r > 1.0) {
                return Err(Error::Config(format!("r_max = {r} must be finite and above 1")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub epsilon: f64,
    pub node_count: u32,
    /// Samples (r, u(r)), normalized to ∫u² dr = 1 and positive near r = 0.
    pub wavefunction: Vec<(f64, f64)>,
    pub converged: bool,
    /// The search ran into the hyperbolic continuum edge: no bound level
    /// with this node count exists.
    pub continuum: bool,
    /// Outer end of the integration domain.
    pub r_max: f64,
    pub iterations: usize,
    pub diagnostics: String,
}

/// W(r) in `u″ + W·u = 0`:
///
/// * flat: `2ε − r² − l(l+1)/r²`
/// * hyperbolic: `2ε − 1 − μ·tanh²r − l(l+1)/sinh²r`
/// * spherical: `2ε + 1 − μ·tan²r − l(l+1)/sin²r`
pub fn effective_equation(geometry: Geometry, mu: f64, l: u32, epsilon: f64, r: f64) -> Result<f64> {
    require_mu(geometry, mu)?;
    let upper = match geometry {
        Geometry::Spherical => FRAC_PI_2,
        _ => f64::INFINITY,
    };
    if r.is_nan() || r <= 0.0 || r >= upper {
        return Err(Error::Domain { r });
    }
    Ok(2.0 * epsilon + base_term(geometry, mu, l, r))
}

/// `W − 2ε`.
fn base_term(geometry: Geometry, mu: f64, l: u32, r: f64) -> f64 {
    let ll = f64::from(l) * (f64::from(l) + 1.0);
    match geometry {
        Geometry::Flat => -r * r - ll / (r * r),
        Geometry::Hyperbolic => {
            let s = r.sinh();
            let centrifugal = if ll == 0.0 { 0.0 } else { ll / (s * s) };
            -1.0 - mu * r.tanh().powi(2) - centrifugal
        }
        Geometry::Spherical => {
            let s = r.sin();
            1.0 - mu * r.tan().powi(2) - ll / (s * s)
        }
    }
}

/// Value of W − 2ε at r = 0 after removing the centrifugal pole; fixes the
/// r² coefficient of the regular solution `r^{l+1}(1 + c·r²)`.
fn origin_term(geometry: Geometry, l: u32) -> f64 {
    let ll = f64::from(l) * (f64::from(l) + 1.0);
    match geometry {
        Geometry::Flat => 0.0,
        Geometry::Hyperbolic => -1.0 + ll / 3.0,
        Geometry::Spherical => 1.0 - ll / 3.0,
    }
}

struct Grid {
    h: f64,
    r: Vec<f64>,
    base: Vec<f64>,
}

impl Grid {
    fn new(geometry: Geometry, mu: f64, l: u32, r_end: f64, points: usize) -> Self {
        let h = r_end / points as f64;
        let mut r: Vec<f64> = (0..=points).map(|i| i as f64 * h).collect();
        r[points] = r_end;
        let base = r
            .iter()
            .map(|&x| if x == 0.0 { 0.0 } else { base_term(geometry, mu, l, x) })
            .collect();
        Grid { h, r, base }
    }

    fn last(&self) -> usize {
        self.r.len() - 1
    }
}

enum Trial {
    /// No classically allowed point: ε is below the spectrum.
    TooLow,
    /// Turning point at or beyond the domain end: ε is far too high.
    TooHigh,
    Shot {
        nodes: u32,
        /// Outward minus inward logarithmic derivative at the match point.
        jump: f64,
        u: Vec<f64>,
    },
}

struct Shooter<'a> {
    geometry: Geometry,
    l: u32,
    grid: &'a Grid,
}

impl Shooter<'_> {
    fn shoot(&self, epsilon: f64, keep: bool) -> Trial {
        let grid = self.grid;
        let h2 = grid.h * grid.h / 12.0;
        let last = grid.last();
        let w: Vec<f64> = grid.base.iter().map(|b| 2.0 * epsilon + b).collect();
        let f: Vec<f64> = w.iter().map(|wi| 1.0 + h2 * wi).collect();

        // Inward start: first point from the right where the Numerov weight
        // is still well conditioned.
        let mut end = last;
        while end > 4 && f[end] <= 0.5 {
            end -= 1;
        }
        let Some(turn) = (1..=end).rev().find(|&i| w[i] > 0.0) else {
            return Trial::TooLow;
        };
        if turn + 3 >= end {
            return Trial::TooHigh;
        }
        let c = turn.max(3);

        // Outward from the regular series.
        let mut u = vec![0.0; last + 1];
        let l1 = f64::from(self.l) + 1.0;
        let coef = -(2.0 * epsilon + origin_term(self.geometry, self.l)) / (4.0 * f64::from(self.l) + 6.0);
        for (ui, &x) in u[1..=2].iter_mut().zip(&grid.r[1..=2]) {
            *ui = x.powf(l1) * (1.0 + coef * x * x);
        }
        for i in 2..=c {
            u[i + 1] = ((12.0 - 10.0 * f[i]) * u[i] - f[i - 1] * u[i - 1]) / f[i + 1];
        }
        let nodes = (1..c).filter(|&i| u[i] * u[i + 1] < 0.0).count() as u32;
        let out_log = (u[c + 1] - u[c - 1]) / (2.0 * grid.h * u[c]);
        let out_at_c = u[c];

        // Inward from the outer end.
        let mut v = vec![0.0; last + 1];
        v[end - 1] = 1e-20;
        for i in (c..end).rev() {
            v[i - 1] = ((12.0 - 10.0 * f[i]) * v[i] - f[i + 1] * v[i + 1]) / f[i - 1];
            if v[i - 1].abs() > 1e200 {
                for x in &mut v[i - 1..end] {
                    *x *= 1e-200;
                }
            }
        }
        let in_log = (v[c + 1] - v[c - 1]) / (2.0 * grid.h * v[c]);
        let jump = out_log - in_log;
        if !jump.is_finite() {
            return Trial::TooHigh;
        }

        if keep {
            let scale = out_at_c / v[c];
            for i in c + 1..=last {
                u[i] = v[i] * scale;
            }
        } else {
            u.clear();
        }
        Trial::Shot { nodes, jump, u }
    }
}

struct Pass {
    epsilon: f64,
    nodes: u32,
    converged: bool,
    continuum: bool,
    iterations: usize,
    u: Vec<f64>,
    note: String,
}

fn bisect_pass(geometry: Geometry, mu: f64, l: u32, n: u32, grid: &Grid, config: &OracleConfig) -> Result<Pass> {
    let shooter = Shooter { geometry, l, grid };
    let continuum = match geometry {
        Geometry::Hyperbolic => Some(0.5 * (mu + 1.0)),
        _ => None,
    };
    let mut lo = match geometry {
        Geometry::Spherical => -0.5,
        _ => 0.0,
    };
    let mut lo_nodes = 0u32;

    // Upper end of the bracket: above level n.
    let mut hi = match continuum {
        Some(edge) => edge,
        None => {
            let mut width = 4.0;
            loop {
                let trial = lo + width;
                match shooter.shoot(trial, false) {
                    Trial::TooHigh => break trial,
                    Trial::Shot { nodes, .. } if nodes > n => break trial,
                    _ => {}
                }
                width *= 2.0;
                if width > 1e8 {
                    return Err(Error::NoBoundState(format!("no upper bracket found for n={n}, l={l}")));
                }
            }
        }
    };
    let mut hi_nodes = u32::MAX;

    let mut iterations = 0;
    while hi - lo > config.bisection_tol && iterations < config.max_iterations {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        match shooter.shoot(mid, false) {
            Trial::TooLow => lo = mid,
            Trial::TooHigh => hi = mid,
            Trial::Shot { nodes, jump, .. } => {
                if nodes < lo_nodes || nodes > hi_nodes {
                    return Err(Error::Resolution(format!(
                        "node count {nodes} at eps={mid} is outside [{lo_nodes}, {hi_nodes}]; refine the grid"
                    )));
                }
                if nodes > n || (nodes == n && jump <= 0.0) {
                    hi = mid;
                    hi_nodes = nodes;
                } else {
                    lo = mid;
                    lo_nodes = nodes;
                }
            }
        }
    }
    let epsilon = 0.5 * (lo + hi);
    let mut note = String::new();
    let mut converged = hi - lo <= config.bisection_tol;
    let mut in_continuum = false;
    if !converged {
        note = format!("bracket width {:e} after {iterations} iterations", hi - lo);
    }
    if let Some(edge) = continuum {
        if edge - epsilon <= 1e3 * config.bisection_tol {
            converged = false;
            in_continuum = true;
            note = format!("no bound state below the continuum edge 2eps = mu + 1 = {}", 2.0 * edge);
        }
    }
    let (nodes, u) = match shooter.shoot(epsilon, true) {
        Trial::Shot { u, .. } => {
            let c = (1..grid.last()).filter(|&i| u[i] * u[i + 1] < 0.0).count() as u32;
            (c, u)
        }
        _ => {
            converged = false;
            note = "final shot has no classical region inside the domain".into();
            (0, vec![0.0; grid.last() + 1])
        }
    };
    if converged && nodes != n {
        converged = false;
        note = format!("converged to a state with {nodes} nodes instead of {n}");
    }
    Ok(Pass {
        epsilon,
        nodes,
        converged,
        continuum: in_continuum,
        iterations,
        u,
        note,
    })
}

fn auto_range(geometry: Geometry, mu: f64, epsilon: f64) -> f64 {
    match geometry {
        Geometry::Flat => (2.0 * epsilon).max(0.0).sqrt() + 7.0,
        Geometry::Hyperbolic => {
            let kappa2 = mu + 1.0 - 2.0 * epsilon;
            if kappa2 <= 0.0 {
                MAX_HYPERBOLIC_RANGE
            } else {
                (3.0 + 15.0 / kappa2.sqrt()).min(MAX_HYPERBOLIC_RANGE)
            }
        }
        Geometry::Spherical => FRAC_PI_2 - SPHERICAL_MARGIN,
    }
}

/// Finds the level with `n` radial nodes for orbital number `l`.
///
/// Hyperbolic levels at or above the continuum edge come back with
/// `converged = false` and a note in `diagnostics`.
pub fn solve(geometry: Geometry, mu: f64, l: u32, n: u32, config: &OracleConfig) -> Result<EigenResult> {
    require_mu(geometry, mu)?;
    config.validate()?;

    let run = |r_end: f64| -> Result<(Grid, Pass)> {
        let grid = Grid::new(geometry, mu, l, r_end, config.grid_points);
        let pass = bisect_pass(geometry, mu, l, n, &grid, config)?;
        Ok((grid, pass))
    };

    let (grid, pass) = match (geometry, config.r_max) {
        (Geometry::Spherical, _) => run(FRAC_PI_2 - SPHERICAL_MARGIN)?,
        (_, Some(r)) => run(r)?,
        (_, None) => {
            let first = match geometry {
                Geometry::Flat => FIRST_PASS_RANGE_FLAT,
                _ => FIRST_PASS_RANGE_HYPERBOLIC,
            };
            let (grid, pass) = run(first)?;
            if pass.converged {
                run(auto_range(geometry, mu, pass.epsilon))?
            } else {
                (grid, pass)
            }
        }
    };

    let norm: f64 = {
        let sq: Vec<f64> = pass.u.iter().map(|x| x * x).collect();
        let interior: f64 = sq[1..sq.len() - 1].iter().sum();
        (grid.h * (interior + 0.5 * (sq[0] + sq[sq.len() - 1]))).sqrt()
    };
    let sign = if pass.u.get(1).copied().unwrap_or(1.0) < 0.0 {
        -1.0
    } else {
        1.0
    };
    let scale = if norm > 0.0 { sign / norm } else { 0.0 };
    let wavefunction = grid.r.iter().zip(&pass.u).map(|(&r, &u)| (r, u * scale)).collect();

    let diagnostics = if pass.note.is_empty() {
        format!(
            "{} bisection steps on a {}-point grid",
            pass.iterations, config.grid_points
        )
    } else {
        pass.note
    };
    Ok(EigenResult {
        epsilon: pass.epsilon,
        node_count: pass.nodes,
        wavefunction,
        converged: pass.converged,
        continuum: pass.continuum,
        r_max: grid.r[grid.last()],
        iterations: pass.iterations,
        diagnostics,
    })
}
