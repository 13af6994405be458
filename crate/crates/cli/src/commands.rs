use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use oscspec_core::{
    analytic_residue_sum, exact_epsilon, integrate_term, naive_wkb_epsilon, solve, solve_epsilon, Complex64,
    ContourSpec, Error, Geometry, Method, MomentumField, OracleConfig, QuantumNumbers, Scheme,
};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::format::{canonical, fixed, float, sci};
use crate::{
    exit, ContourArgs, Failure, FormatArg, GeometryArg, ModelArgs, OracleArgs, SpectrumArgs, SweepArgs, VerifyArgs,
    TOL_ENV,
};

pub const DEFAULT_TOL: f64 = 1e-5;
pub const CSV_HEADER: &str = "geometry,mu,n,l,N,epsilon,method,bound";

pub struct Output {
    pub stdout: String,
    pub stderr: Option<String>,
    pub code: u8,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            stdout,
            stderr: None,
            code: exit::OK,
        }
    }
}

type CmdResult = Result<Output, Failure>;

/// μ is required for curved geometries and rejected for flat space.
fn resolve_mu(model: &ModelArgs) -> Result<f64, Failure> {
    match (model.geometry, model.mu) {
        (GeometryArg::E3, Some(_)) => Err(Failure::usage("--mu is not accepted for --geometry e3")),
        (GeometryArg::E3, None) => Ok(0.0),
        (_, None) => Err(Failure::usage("--mu is required for --geometry h3 and s3")),
        (_, Some(mu)) if !(mu.is_finite() && mu > 0.0) => Err(Failure::usage(format!(
            "--mu must be a positive finite number, got {mu}"
        ))),
        (_, Some(mu)) => Ok(mu),
    }
}

fn oracle_config(args: &OracleArgs) -> Result<OracleConfig, Failure> {
    let config = OracleConfig {
        grid_points: args.grid_points,
        ..OracleConfig::default()
    };
    config.validate()?;
    Ok(config)
}

fn mu_json(geometry: Geometry, mu: f64) -> Value {
    if geometry.is_curved() {
        float(mu)
    } else {
        Value::Null
    }
}

fn mu_text(geometry: Geometry, mu: f64) -> String {
    if geometry.is_curved() {
        sci(mu)
    } else {
        String::new()
    }
}

fn states(n_max: u32, l_max: u32) -> Vec<QuantumNumbers> {
    (0..=n_max)
        .flat_map(|n| (0..=l_max).map(move |l| QuantumNumbers::new(n, l)))
        .collect()
}

struct Row {
    qn: QuantumNumbers,
    epsilon: f64,
    bound: bool,
    /// `Some(false)` when the oracle did not converge for a reason other
    /// than the continuum edge.
    converged: Option<bool>,
    wavefunction: Option<Vec<(f64, f64)>>,
}

fn wkb_row(geometry: Geometry, mu: f64, qn: QuantumNumbers, scheme: Scheme) -> Result<Row, Error> {
    match solve_epsilon(geometry, mu, qn, scheme) {
        Ok(entry) => Ok(Row {
            qn,
            epsilon: entry.epsilon,
            bound: entry.bound,
            converged: None,
            wavefunction: None,
        }),
        Err(Error::NoBoundState(_)) => Ok(Row {
            qn,
            epsilon: f64::NAN,
            bound: false,
            converged: None,
            wavefunction: None,
        }),
        Err(e) => Err(e),
    }
}

fn compute_row(
    geometry: Geometry,
    mu: f64,
    qn: QuantumNumbers,
    method: Method,
    config: &OracleConfig,
    keep: bool,
) -> Result<Row, Error> {
    match method {
        Method::Exact => {
            let e = exact_epsilon(geometry, mu, qn)?;
            Ok(Row {
                qn,
                epsilon: e.epsilon,
                bound: e.bound,
                converged: None,
                wavefunction: None,
            })
        }
        Method::WkbNaive => wkb_row(geometry, mu, qn, Scheme::Naive),
        Method::WkbCorrected => wkb_row(geometry, mu, qn, Scheme::Corrected),
        Method::OdeOracle => {
            let r = solve(geometry, mu, qn.l, qn.n, config)?;
            let epsilon = if r.converged || !r.continuum {
                r.epsilon
            } else {
                f64::NAN
            };
            Ok(Row {
                qn,
                epsilon,
                bound: r.converged,
                converged: Some(r.converged || r.continuum),
                wavefunction: (keep && r.converged).then_some(r.wavefunction),
            })
        }
    }
}

fn dump_path(base: &Path, qn: QuantumNumbers, multiple: bool) -> PathBuf {
    if !multiple {
        return base.to_path_buf();
    }
    let tag = format!("n{}.l{}", qn.n, qn.l);
    match (base.file_stem(), base.extension()) {
        (Some(stem), Some(ext)) => {
            base.with_file_name(format!("{}.{tag}.{}", stem.to_string_lossy(), ext.to_string_lossy()))
        }
        _ => PathBuf::from(format!("{}.{tag}", base.display())),
    }
}

fn write_wavefunction(
    path: &Path,
    geometry: Geometry,
    mu: f64,
    row: &Row,
    samples: &[(f64, f64)],
) -> Result<(), Failure> {
    let mut text = String::new();
    let _ = writeln!(text, "# geometry={}", geometry.label());
    if geometry.is_curved() {
        let _ = writeln!(text, "# mu={}", sci(mu));
    }
    let _ = writeln!(text, "# n={}", row.qn.n);
    let _ = writeln!(text, "# l={}", row.qn.l);
    let _ = writeln!(text, "# epsilon={}", sci(row.epsilon));
    text.push_str("r,u\n");
    for (r, u) in samples {
        let _ = writeln!(text, "{},{}", sci(*r), sci(*u));
    }
    fs::write(path, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

pub fn spectrum(args: &SpectrumArgs) -> CmdResult {
    let mu = resolve_mu(&args.model)?;
    let geometry: Geometry = args.model.geometry.into();
    let method: Method = args.method.into();
    if args.dump_wavefunction.is_some() && method != Method::OdeOracle {
        return Err(Failure::usage("--dump-wavefunction requires --method ode"));
    }
    let config = oracle_config(&args.oracle)?;
    let keep = args.dump_wavefunction.is_some();
    let rows = states(args.n_max, args.l_max)
        .into_par_iter()
        .map(|qn| compute_row(geometry, mu, qn, method, &config, keep))
        .collect::<Result<Vec<_>, _>>()?;

    if let Some(base) = &args.dump_wavefunction {
        let multiple = rows.len() > 1;
        for row in &rows {
            if let Some(samples) = &row.wavefunction {
                write_wavefunction(&dump_path(base, row.qn, multiple), geometry, mu, row, samples)?;
            }
        }
    }

    let stdout = match args.format {
        FormatArg::Csv => {
            let mut out = format!("{CSV_HEADER}\n");
            for row in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    geometry.label(),
                    mu_text(geometry, mu),
                    row.qn.n,
                    row.qn.l,
                    sci(row.qn.principal().to_f64()),
                    sci(row.epsilon),
                    method.label(),
                    row.bound
                );
            }
            out
        }
        FormatArg::Json => {
            let entries: Vec<Value> = rows
                .iter()
                .map(|row| {
                    let mut entry = Map::new();
                    entry.insert("n".into(), json!(row.qn.n));
                    entry.insert("l".into(), json!(row.qn.l));
                    entry.insert("N".into(), float(row.qn.principal().to_f64()));
                    entry.insert("epsilon".into(), float(row.epsilon));
                    entry.insert("bound".into(), json!(row.bound));
                    if let Some(c) = row.converged {
                        entry.insert("converged".into(), json!(c));
                    }
                    Value::Object(entry)
                })
                .collect();
            canonical(&json!({
                "geometry": geometry.label(),
                "mu": mu_json(geometry, mu),
                "method": method.label(),
                "entries": entries,
            }))
        }
        FormatArg::Table => {
            let mut out = String::new();
            let _ = write!(out, "geometry {}", geometry.label());
            if geometry.is_curved() {
                let _ = write!(out, "  mu {}", fixed(mu));
            }
            let _ = writeln!(out, "  method {}", method.label());
            let _ = writeln!(out, "{:>3} {:>3} {:>6} {:>14}  status", "n", "l", "N", "epsilon");
            for row in &rows {
                let status = match (row.bound, row.converged) {
                    (_, Some(false)) => "NOT CONVERGED",
                    (true, _) => "bound",
                    (false, _) => "unbound",
                };
                let _ = writeln!(
                    out,
                    "{:>3} {:>3} {:>6} {:>14}  {status}",
                    row.qn.n,
                    row.qn.l,
                    row.qn.principal().to_string(),
                    fixed(row.epsilon)
                );
            }
            out
        }
    };

    let failed: Vec<String> = rows
        .iter()
        .filter(|r| r.converged == Some(false))
        .map(|r| format!("(n={}, l={})", r.qn.n, r.qn.l))
        .collect();
    if failed.is_empty() {
        Ok(Output::ok(stdout))
    } else {
        Ok(Output {
            stdout,
            stderr: Some(format!("error: oracle did not converge for {}", failed.join(", "))),
            code: exit::ORACLE,
        })
    }
}

pub fn contour(args: &ContourArgs) -> CmdResult {
    let mu = resolve_mu(&args.model)?;
    let geometry: Geometry = args.model.geometry.into();
    let scheme: Scheme = args.scheme.into();
    if args.samples < oscspec_core::contour::MIN_SAMPLES {
        return Err(Failure::usage(format!(
            "--samples must be at least {}",
            oscspec_core::contour::MIN_SAMPLES
        )));
    }
    let field = MomentumField::at(geometry, mu, args.l, args.epsilon, scheme)?;
    let spec = ContourSpec::for_field(&field, args.samples)?;
    let value = integrate_term(args.order, &field, &spec)?;
    let contribution = value.contribution();
    let analytic = if args.order <= 1 {
        Some(analytic_residue_sum(args.order, &field.coefficients)?)
    } else {
        None
    };
    let difference = analytic.map(|a| (contribution - a).norm());

    let stdout = match args.format {
        FormatArg::Json => {
            let complex = |c: Complex64| json!({"re": float(c.re), "im": float(c.im)});
            canonical(&json!({
                "geometry": geometry.label(),
                "mu": mu_json(geometry, mu),
                "l": args.l,
                "epsilon": float(args.epsilon),
                "order": args.order,
                "scheme": scheme.label(),
                "integral": complex(value.integral),
                "contribution": complex(contribution),
                "analytic": analytic.map_or(Value::Null, complex),
                "difference": difference.map_or(Value::Null, float),
                "samples": value.samples,
            }))
        }
        FormatArg::Table | FormatArg::Csv => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "geometry {} order {} scheme {} l {} epsilon {}",
                geometry.label(),
                args.order,
                scheme.label(),
                args.l,
                sci(args.epsilon)
            );
            let _ = writeln!(
                out,
                "integral      {} {}i",
                sci(value.integral.re),
                sci(value.integral.im)
            );
            let _ = writeln!(out, "contribution  {} {}i", sci(contribution.re), sci(contribution.im));
            match (analytic, difference) {
                (Some(a), Some(d)) => {
                    let _ = writeln!(out, "analytic      {} {}i", sci(a.re), sci(a.im));
                    let _ = writeln!(out, "difference    {}", sci(d));
                }
                _ => {
                    let _ = writeln!(out, "analytic      none (order > 1)");
                    let _ = writeln!(out, "magnitude     {}", sci(contribution.norm()));
                }
            }
            let _ = writeln!(out, "samples       {}", value.samples);
            out
        }
    };
    Ok(Output::ok(stdout))
}

fn resolve_tol(arg: Option<f64>) -> Result<f64, Failure> {
    let tol = match arg {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(text) => text
                .trim()
                .parse::<f64>()
                .map_err(|_| Failure::usage(format!("{TOL_ENV}='{text}' is not a decimal number")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(Failure::usage(format!("tolerance must be positive, got {tol}")))
    }
}

struct Comparison {
    qn: QuantumNumbers,
    exact: f64,
    corrected: f64,
    naive: f64,
    ode: f64,
}

impl Comparison {
    fn deviation(&self, other: f64) -> f64 {
        let d = (other - self.exact).abs();
        if d.is_nan() {
            f64::INFINITY
        } else {
            d
        }
    }
}

pub fn verify(args: &VerifyArgs) -> CmdResult {
    let mu = resolve_mu(&args.model)?;
    let tol = resolve_tol(args.tol)?;
    let geometry: Geometry = args.model.geometry.into();
    let config = oracle_config(&args.oracle)?;

    let bound: Vec<QuantumNumbers> = states(args.n_max, args.l_max)
        .into_iter()
        .map(|qn| exact_epsilon(geometry, mu, qn).map(|e| (qn, e.bound)))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter_map(|(qn, b)| b.then_some(qn))
        .collect();

    let rows = bound
        .into_par_iter()
        .map(|qn| -> Result<Comparison, Error> {
            let exact = exact_epsilon(geometry, mu, qn)?.epsilon;
            let corrected = wkb_row(geometry, mu, qn, Scheme::Corrected)?.epsilon;
            let naive = match naive_wkb_epsilon(geometry, mu, qn)? {
                e if e.bound => wkb_row(geometry, mu, qn, Scheme::Naive)?.epsilon,
                _ => f64::NAN,
            };
            let r = solve(geometry, mu, qn.l, qn.n, &config)?;
            let ode = if r.converged { r.epsilon } else { f64::NAN };
            Ok(Comparison {
                qn,
                exact,
                corrected,
                naive,
                ode,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let max = |f: &dyn Fn(&Comparison) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let max_corrected = max(&|c| c.deviation(c.corrected));
    let max_ode = max(&|c| c.deviation(c.ode));
    let max_naive = rows
        .iter()
        .map(|c| (c.naive - c.exact).abs())
        .filter(|d| d.is_finite())
        .fold(0.0, f64::max);
    let offending: Vec<String> = rows
        .iter()
        .filter(|c| c.deviation(c.corrected) > tol || c.deviation(c.ode) > tol)
        .map(|c| {
            format!(
                "(n={}, l={}): |exact-corrected|={} |exact-ode|={}",
                c.qn.n,
                c.qn.l,
                sci(c.deviation(c.corrected)),
                sci(c.deviation(c.ode))
            )
        })
        .collect();
    let pass = offending.is_empty();

    let stdout = match args.format {
        FormatArg::Json => {
            let states: Vec<Value> = rows
                .iter()
                .map(|c| {
                    json!({
                        "n": c.qn.n,
                        "l": c.qn.l,
                        "N": float(c.qn.principal().to_f64()),
                        "exact": float(c.exact),
                        "wkb_corrected": float(c.corrected),
                        "wkb_naive": float(c.naive),
                        "ode": float(c.ode),
                    })
                })
                .collect();
            canonical(&json!({
                "geometry": geometry.label(),
                "mu": mu_json(geometry, mu),
                "tol": float(tol),
                "states": states,
                "max_dev_corrected": float(max_corrected),
                "max_dev_ode": float(max_ode),
                "max_dev_naive": float(max_naive),
                "pass": pass,
            }))
        }
        FormatArg::Csv => {
            let mut out = String::from("geometry,mu,n,l,N,exact,wkb_corrected,wkb_naive,ode\n");
            for c in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    geometry.label(),
                    mu_text(geometry, mu),
                    c.qn.n,
                    c.qn.l,
                    sci(c.qn.principal().to_f64()),
                    sci(c.exact),
                    sci(c.corrected),
                    sci(c.naive),
                    sci(c.ode)
                );
            }
            out
        }
        FormatArg::Table => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{:>3} {:>3} {:>14} {:>14} {:>14} {:>14}",
                "n", "l", "exact", "wkb-corrected", "wkb-naive", "ode"
            );
            for c in &rows {
                let _ = writeln!(
                    out,
                    "{:>3} {:>3} {:>14} {:>14} {:>14} {:>14}",
                    c.qn.n,
                    c.qn.l,
                    fixed(c.exact),
                    fixed(c.corrected),
                    fixed(c.naive),
                    fixed(c.ode)
                );
            }
            let _ = writeln!(out, "max |exact - wkb-corrected| = {}", sci(max_corrected));
            let _ = writeln!(out, "max |exact - ode|           = {}", sci(max_ode));
            let _ = writeln!(out, "max |exact - wkb-naive|     = {} (reported only)", sci(max_naive));
            let _ = writeln!(out, "{} at tol {}", if pass { "PASS" } else { "FAIL" }, sci(tol));
            out
        }
    };
    if pass {
        Ok(Output::ok(stdout))
    } else {
        Ok(Output {
            stdout,
            stderr: Some(format!("error: tolerance exceeded for {}", offending.join("; "))),
            code: exit::VERIFY,
        })
    }
}

pub fn sweep(args: &SweepArgs) -> CmdResult {
    let geometry: Geometry = args.geometry.into();
    if !geometry.is_curved() {
        return Err(Failure::usage("sweep needs --geometry h3 or s3"));
    }
    if !(args.mu_min.is_finite() && args.mu_min > 0.0 && args.mu_max.is_finite() && args.mu_max >= args.mu_min) {
        return Err(Failure::usage("need 0 < --mu-min <= --mu-max"));
    }
    if args.points == 0 {
        return Err(Failure::usage("--points must be positive"));
    }
    if args.columns.is_empty() {
        return Err(Failure::usage("--columns must name at least one column"));
    }
    let qn = QuantumNumbers::new(args.n, args.l);
    let ratio = args.mu_max / args.mu_min;
    let mus: Vec<f64> = (0..args.points)
        .map(|i| {
            if args.points == 1 {
                args.mu_min
            } else {
                args.mu_min * ratio.powf(i as f64 / (args.points - 1) as f64)
            }
        })
        .collect();

    let lines = mus
        .into_par_iter()
        .map(|mu| -> Result<String, Error> {
            let exact = exact_epsilon(geometry, mu, qn)?.epsilon;
            let mut line = sci(mu);
            for column in &args.columns {
                let value = match column {
                    crate::Column::Epsilon => exact,
                    crate::Column::EpsilonOverSqrtMu => exact / mu.sqrt(),
                    crate::Column::NaiveGap => naive_wkb_epsilon(geometry, mu, qn)?.epsilon - exact,
                };
                line.push(',');
                line.push_str(&sci(value));
            }
            Ok(line)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut out = String::from("mu");
    for column in &args.columns {
        out.push(',');
        out.push_str(column.name());
    }
    out.push('\n');
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    Ok(Output::ok(out))
}
