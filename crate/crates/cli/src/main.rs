mod commands;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use oscspec_core::{Error, Geometry, Method, Scheme};

/// Exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 2;
    pub const ORACLE: u8 = 3;
    pub const QUADRATURE: u8 = 4;
    pub const VERIFY: u8 = 5;
}

/// Environment variable overriding the default `verify --tol`.
pub const TOL_ENV: &str = "OSCSPEC_TOL";

#[derive(Parser, Debug)]
#[command(
    name = "oscspec",
    version,
    about = "Oscillator spectra in flat, hyperbolic and spherical 3-space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the (n, l) spectrum table for one method.
    Spectrum(SpectrumArgs),
    /// Evaluate one WKB term integral on the standard contour.
    Contour(ContourArgs),
    /// Compare exact, WKB and ODE levels for every bound state.
    Verify(VerifyArgs),
    /// Sweep μ logarithmically for one level.
    Sweep(SweepArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeometryArg {
    E3,
    H3,
    S3,
}

impl From<GeometryArg> for Geometry {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::E3 => Geometry::Flat,
            GeometryArg::H3 => Geometry::Hyperbolic,
            GeometryArg::S3 => Geometry::Spherical,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodArg {
    Exact,
    WkbNaive,
    WkbCorrected,
    Ode,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Exact => Method::Exact,
            MethodArg::WkbNaive => Method::WkbNaive,
            MethodArg::WkbCorrected => Method::WkbCorrected,
            MethodArg::Ode => Method::OdeOracle,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeArg {
    Naive,
    Corrected,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Naive => Scheme::Naive,
            SchemeArg::Corrected => Scheme::Corrected,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormatArg {
    Table,
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Column {
    #[value(name = "epsilon")]
    Epsilon,
    #[value(name = "epsilon_over_sqrt_mu")]
    EpsilonOverSqrtMu,
    #[value(name = "naive_gap")]
    NaiveGap,
}

impl Column {
    pub fn name(self) -> &'static str {
        match self {
            Column::Epsilon => "epsilon",
            Column::EpsilonOverSqrtMu => "epsilon_over_sqrt_mu",
            Column::NaiveGap => "naive_gap",
        }
    }
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub geometry: GeometryArg,
    /// Dimensionless stiffness μ = Mkρ⁴/ħ²; required for h3/s3, rejected for e3.
    #[arg(long)]
    pub mu: Option<f64>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// Grid points for the ODE oracle.
    #[arg(long, default_value_t = 20_000)]
    pub grid_points: usize,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub n_max: u32,
    #[arg(long)]
    pub l_max: u32,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value = "table")]
    pub format: FormatArg,
    /// Write each ODE wavefunction as (r, u) CSV; needs --method ode.
    #[arg(long)]
    pub dump_wavefunction: Option<PathBuf>,
    #[command(flatten)]
    pub oracle: OracleArgs,
}

#[derive(Args, Debug)]
pub struct ContourArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub l: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: f64,
    #[arg(long)]
    pub order: usize,
    #[arg(long, value_enum, default_value = "corrected")]
    pub scheme: SchemeArg,
    /// Initial trapezoid samples per circle (doubled until converged).
    #[arg(long, default_value_t = 4096)]
    pub samples: usize,
    #[arg(long, value_enum, default_value = "table")]
    pub format: FormatArg,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub n_max: u32,
    #[arg(long)]
    pub l_max: u32,
    /// Absolute tolerance on |exact − wkb-corrected| and |exact − ode|
    /// [default: 1e-5, or $OSCSPEC_TOL].
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: FormatArg,
    #[command(flatten)]
    pub oracle: OracleArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub geometry: GeometryArg,
    #[arg(long)]
    pub mu_min: f64,
    #[arg(long)]
    pub mu_max: f64,
    #[arg(long)]
    pub points: usize,
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub l: u32,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "epsilon,epsilon_over_sqrt_mu,naive_gap"
    )]
    pub columns: Vec<Column>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: exit::USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_) | Error::InvalidInput(_) | Error::NoClassicalRegion { .. } | Error::Domain { .. } => {
                exit::USAGE
            }
            Error::NoBoundState(_) | Error::Resolution(_) => exit::ORACLE,
            Error::PoleEvaluation { .. }
            | Error::RefinementRequired { .. }
            | Error::InvalidContour(_)
            | Error::QuadratureFailure { .. } => exit::QUADRATURE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spectrum(args) => commands::spectrum(args),
        Command::Contour(args) => commands::contour(args),
        Command::Verify(args) => commands::verify(args),
        Command::Sweep(args) => commands::sweep(args),
    };
    match result {
        Ok(output) => {
            print!("{}", output.stdout);
            if let Some(message) = output.stderr {
                eprintln!("{message}");
            }
            ExitCode::from(output.code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
