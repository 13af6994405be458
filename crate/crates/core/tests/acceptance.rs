//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use oscspec_core::{
    analytic_residue_sum, bound_state_count, exact_epsilon, flat_limit_energy, integrate_term, naive_wkb_epsilon,
    solve, solve_epsilon, ContourSpec, Geometry, MomentumField, OracleConfig, QuantumNumbers, Result, Scheme,
};

const CONTOUR_SAMPLES: usize = 512;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn qn(n: u32, l: u32) -> QuantumNumbers {
    QuantumNumbers::new(n, l)
}

fn contour_term(order: usize, g: Geometry, mu: f64, q: QuantumNumbers, eps: f64, scheme: Scheme) -> Result<(f64, f64)> {
    let field = MomentumField::at(g, mu, q.l, eps, scheme)?;
    let spec = ContourSpec::for_field(&field, CONTOUR_SAMPLES)?;
    let value = integrate_term(order, &field, &spec)?;
    let c = value.contribution();
    Ok((c.re, c.im))
}

fn flat_spectrum() -> Result<Outcome> {
    let start = Instant::now();
    let mut closed_form_ok = true;
    for n in 0..=5 {
        for l in 0..=5 {
            let e = exact_epsilon(Geometry::Flat, 0.0, qn(n, l))?;
            let principal = qn(n, l).principal();
            closed_form_ok &= principal.twice() == i64::from(4 * n + 2 * l + 3) && e.epsilon == principal.to_f64();
        }
    }
    let mut worst: f64 = 0.0;
    for n in 0..=3 {
        for l in 0..=3 {
            let r = solve(Geometry::Flat, 0.0, l, n, &OracleConfig::default())?;
            let exact = exact_epsilon(Geometry::Flat, 0.0, qn(n, l))?.epsilon;
            worst = worst.max(if r.converged {
                (r.epsilon - exact).abs()
            } else {
                f64::INFINITY
            });
        }
    }
    let elapsed = start.elapsed();
    Ok(Outcome::new(
        closed_form_ok && worst <= 1e-6 && elapsed < Duration::from_secs(10),
        format!(
            "closed form exact for n,l<=5: {closed_form_ok}; max |oracle - exact| = {worst:.2e} (tol 1e-6); {:.2}s (limit 10s)",
            elapsed.as_secs_f64()
        ),
    ))
}

fn curved_spectrum(g: Geometry, expected: [(u32, u32, f64); 3]) -> Result<(bool, String)> {
    let mu = 30.0;
    let mut exact_ok = true;
    let mut worst_wkb: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    for (n, l, value) in expected {
        let exact = exact_epsilon(g, mu, qn(n, l))?;
        exact_ok &= exact.epsilon == value && exact.bound;
        let wkb = solve_epsilon(g, mu, qn(n, l), Scheme::Corrected)?;
        worst_wkb = worst_wkb.max((wkb.epsilon - value).abs());
        let r = solve(g, mu, l, n, &OracleConfig::default())?;
        let rel = if r.converged {
            (r.epsilon - value).abs() / value
        } else {
            f64::INFINITY
        };
        worst_oracle = worst_oracle.max(rel);
    }
    Ok((
        exact_ok && worst_wkb <= 1e-10 && worst_oracle <= 1e-5,
        format!(
            "closed form matches: {exact_ok}; max |wkb - exact| = {worst_wkb:.2e} (tol 1e-10); max oracle rel err = {worst_oracle:.2e} (tol 1e-5)"
        ),
    ))
}

fn hyperbolic_spectrum() -> Result<Outcome> {
    let (ok, detail) = curved_spectrum(Geometry::Hyperbolic, [(0, 0, 7.5), (0, 1, 11.0), (1, 0, 13.5)])?;
    let count = bound_state_count(30.0, 0)?;
    let third = exact_epsilon(Geometry::Hyperbolic, 30.0, qn(2, 0))?;
    let oracle_third = solve(Geometry::Hyperbolic, 30.0, 0, 2, &OracleConfig::default())?;
    let edge_ok = count == 2 && !third.bound && !oracle_third.converged;
    Ok(Outcome::new(
        ok && edge_ok,
        format!(
            "{detail}; bound_state_count(30,0) = {count}; n=2 bound flag {} / oracle converged {}",
            third.bound, oracle_third.converged
        ),
    ))
}

fn spherical_spectrum() -> Result<Outcome> {
    let (ok, detail) = curved_spectrum(Geometry::Spherical, [(0, 0, 9.0), (0, 1, 16.5), (1, 0, 25.0)])?;
    Ok(Outcome::new(ok, detail))
}

fn cross_geometry() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for mu in [5.0, 30.0, 100.0] {
        for n in 0..=6 {
            for l in 0..=6 {
                let q = qn(n, l);
                let h = exact_epsilon(Geometry::Hyperbolic, mu, q)?;
                if !h.bound {
                    continue;
                }
                let s = exact_epsilon(Geometry::Spherical, mu, q)?;
                let big_n = q.principal().to_f64();
                worst = worst
                    .max((s.epsilon - h.epsilon - (big_n * big_n - 0.75)).abs())
                    .max((s.epsilon + h.epsilon - (1.0 + 4.0 * mu).sqrt() * big_n).abs());
                checked += 1;
            }
        }
    }
    Ok(Outcome::new(
        worst <= 1e-12 && checked > 0,
        format!("{checked} bound states, max identity defect {worst:.2e} (tol 1e-12)"),
    ))
}

fn bound_states(g: Geometry, mu: f64, max: u32) -> Result<Vec<(QuantumNumbers, f64)>> {
    let mut out = Vec::new();
    for n in 0..=max {
        for l in 0..=max {
            let e = exact_epsilon(g, mu, qn(n, l))?;
            if e.bound {
                out.push((qn(n, l), e.epsilon));
            }
        }
    }
    Ok(out)
}

fn curved_matrix() -> Vec<(Geometry, f64)> {
    vec![
        (Geometry::Flat, 0.0),
        (Geometry::Hyperbolic, 5.0),
        (Geometry::Hyperbolic, 30.0),
        (Geometry::Spherical, 5.0),
        (Geometry::Spherical, 30.0),
    ]
}

fn order_one_universality() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for (g, mu) in curved_matrix() {
        for (q, eps) in bound_states(g, mu, 1)? {
            for scheme in [Scheme::Naive, Scheme::Corrected] {
                let (re, im) = contour_term(1, g, mu, q, eps, scheme)?;
                worst = worst.max((re + 2.0 * PI).abs()).max(im.abs());
                cases += 1;
            }
        }
    }
    Ok(Outcome::new(
        worst <= 1e-6,
        format!("{cases} cases, max |(1/i)∮Q1 dt + 2π| = {worst:.2e} (tol 1e-6)"),
    ))
}

fn residue_agreement() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for (g, mu) in curved_matrix() {
        for (q, eps) in bound_states(g, mu, 2)? {
            for scheme in [Scheme::Naive, Scheme::Corrected] {
                let field = MomentumField::at(g, mu, q.l, eps, scheme)?;
                let analytic = analytic_residue_sum(0, &field.coefficients)?;
                let (re, im) = contour_term(0, g, mu, q, eps, scheme)?;
                let err = ((re - analytic.re).powi(2) + im.powi(2)).sqrt() / (1.0 + analytic.norm());
                worst = worst.max(err);
                cases += 1;
            }
        }
    }
    Ok(Outcome::new(
        worst <= 1e-6,
        format!("{cases} cases, max relative deviation {worst:.2e} (tol 1e-6)"),
    ))
}

fn higher_order_vanishing() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut naive = Vec::new();
    for (g, mu) in [
        (Geometry::Flat, 0.0),
        (Geometry::Hyperbolic, 30.0),
        (Geometry::Spherical, 30.0),
    ] {
        for (q, eps) in bound_states(g, mu, 1)? {
            let (re, im) = contour_term(2, g, mu, q, eps, Scheme::Corrected)?;
            worst = worst.max(re.hypot(im));
        }
        if g.is_curved() {
            let q = qn(0, 0);
            let root = naive_wkb_epsilon(g, mu, q)?.epsilon;
            let (re, im) = contour_term(2, g, mu, q, root, Scheme::Naive)?;
            naive.push(format!("{} naive {:+.6e}", g.label(), re.hypot(im) * re.signum()));
        }
    }
    Ok(Outcome::new(
        worst <= 1e-6,
        format!(
            "corrected max |∮Q2 dt| = {worst:.2e} (tol 1e-6); measured at naive roots (0,0), mu=30: {}",
            naive.join(", ")
        ),
    ))
}

fn naive_gap() -> Result<Outcome> {
    let q = qn(0, 0);
    let gap = |g| -> Result<f64> { Ok(naive_wkb_epsilon(g, 30.0, q)?.epsilon - exact_epsilon(g, 30.0, q)?.epsilon) };
    let h = gap(Geometry::Hyperbolic)?;
    let s = gap(Geometry::Spherical)?;
    Ok(Outcome::new(
        (h - 0.09083).abs() <= 1e-4 && (s + 0.15913).abs() <= 1e-4,
        format!("h3 gap {h:+.6} (want +0.09083), s3 gap {s:+.6} (want -0.15913), tol 1e-4"),
    ))
}

fn flat_limit() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for g in [Geometry::Hyperbolic, Geometry::Spherical] {
        let err = |mu: f64| -> Result<f64> {
            let e = exact_epsilon(g, mu, qn(0, 0))?.epsilon;
            Ok((flat_limit_energy(e, mu)? - 1.5).abs())
        };
        let ratio = err(1e4)? / err(1e6)?;
        pass &= (80.0..=120.0).contains(&ratio);
        parts.push(format!("{} shrink factor {ratio:.3}", g.label()));
    }
    Ok(Outcome::new(
        pass,
        format!(
            "{} (required within [80, 120]; a 1/sqrt(mu) error gives 10)",
            parts.join(", ")
        ),
    ))
}

fn node_theorem() -> Result<Outcome> {
    let config = OracleConfig::default();
    let fine = OracleConfig {
        grid_points: 2 * config.grid_points,
        ..config
    };
    let mut bad_nodes = Vec::new();
    let mut worst_shift: f64 = 0.0;
    let mut converged = 0;
    for (g, mus) in [
        (Geometry::Flat, vec![0.0]),
        (Geometry::Hyperbolic, vec![5.0, 30.0, 100.0]),
        (Geometry::Spherical, vec![5.0, 30.0, 100.0]),
    ] {
        for mu in mus {
            for n in 0..=2 {
                for l in 0..=2 {
                    if !exact_epsilon(g, mu, qn(n, l))?.bound {
                        continue;
                    }
                    let r = solve(g, mu, l, n, &config)?;
                    if !r.converged || r.node_count != n {
                        bad_nodes.push(format!(
                            "{} mu={mu} ({n},{l}): nodes {} converged {}",
                            g.label(),
                            r.node_count,
                            r.converged
                        ));
                        continue;
                    }
                    converged += 1;
                    let r2 = solve(g, mu, l, n, &fine)?;
                    worst_shift = worst_shift.max((r2.epsilon - r.epsilon).abs());
                }
            }
        }
    }
    Ok(Outcome::new(
        bad_nodes.is_empty() && worst_shift <= 1e-7,
        format!(
            "{converged} converged states with n nodes; max grid-doubling shift {worst_shift:.2e} (tol 1e-7){}",
            if bad_nodes.is_empty() {
                String::new()
            } else {
                format!("; mismatches: {}", bad_nodes.join("; "))
            }
        ),
    ))
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("flat spectrum", flat_spectrum),
        ("hyperbolic spectrum at mu=30", hyperbolic_spectrum),
        ("spherical spectrum at mu=30", spherical_spectrum),
        ("cross-geometry identities", cross_geometry),
        ("order-1 universality", order_one_universality),
        ("residue/quadrature agreement", residue_agreement),
        ("higher-order vanishing", higher_order_vanishing),
        ("naive gap", naive_gap),
        ("flat limit", flat_limit),
        ("oracle node theorem", node_theorem),
    ];
    let start = Instant::now();
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        if !outcome.pass {
            failures += 1;
        }
        println!(
            "criterion {:>2} {} {name} [{:.2}s]: {}",
            i + 1,
            if outcome.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            outcome.detail
        );
    }
    println!(
        "acceptance: {} passed, {failures} failed in {:.1}s",
        criteria.len() - failures,
        start.elapsed().as_secs_f64()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
