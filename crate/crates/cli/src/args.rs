use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use normalens::Complex64;

#[derive(Debug, Parser)]
#[command(
    name = "normalens",
    version,
    about = "Correlation kernels of normal matrix ensembles with potential |z|^alpha"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the exact kernel K_n(z, w) over a grid of w for fixed z.
    KernelGrid(KernelGridArgs),
    /// Largest exact-vs-asymptotic kernel difference for each (alpha, n).
    ErrorTable(ErrorTableArgs),
    /// Check the conformal identities on the default point sets.
    Verify(VerifyArgs),
    /// Monte Carlo mean eigenvalue count in the disk of radius g(s).
    SpacingCheck(SpacingArgs),
    /// Draw one set of eigenvalue moduli.
    Sample(SampleArgs),
    /// Tabulate the limiting density along a ray.
    Density(DensityArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct EnsembleArgs {
    /// Potential exponent, at least 2.
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Matrix size.
    #[arg(long, default_value_t = 50)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct KernelGridArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Fixed point z, written `a+bi`.
    #[arg(long, default_value = "0.3+0.4i", allow_hyphen_values = true, value_parser = parse_complex)]
    pub z: Complex64,
    /// Real-axis range `lo:hi`; defaults to the support square [-R, R].
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub bounds: Option<(f64, f64)>,
    /// Imaginary-axis range `lo:hi`; defaults to --bounds.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub im_bounds: Option<(f64, f64)>,
    /// Nodes per axis.
    #[arg(long, default_value_t = 181)]
    pub steps: usize,
    #[arg(long, default_value = "kernel_grid.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ErrorTableArgs {
    /// Comma-separated alpha values.
    #[arg(long, allow_hyphen_values = true)]
    pub alphas: String,
    /// Comma-separated matrix sizes.
    #[arg(long, allow_hyphen_values = true)]
    pub ns: String,
    #[arg(long, default_value_t = 24)]
    pub radii: usize,
    #[arg(long, default_value_t = 48)]
    pub angles: usize,
    /// Outermost sample radius as a fraction of the support radius.
    #[arg(long, default_value_t = 1.0)]
    pub extent: f64,
    #[arg(long, default_value = "error_table.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IdentityChoice {
    Phi,
    U,
    G,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long, value_enum, default_value_t = IdentityChoice::All)]
    pub identity: IdentityChoice,
}

#[derive(Debug, Args)]
pub struct SpacingArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Disk size in units of the local mean spacing.
    #[arg(long, allow_hyphen_values = true)]
    pub s: f64,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Attach independent uniform angles.
    #[arg(long)]
    pub with_angles: bool,
    #[arg(long, default_value = "sample.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Number of radii, evenly spaced from 0.
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Largest radius as a multiple of the support radius.
    #[arg(long, default_value_t = 1.25)]
    pub extent: f64,
    #[arg(long, default_value = "density.csv")]
    pub out: PathBuf,
}

/// Parses `a+bi`, `a-bi`, `a`, or `bi`. Exponents such as `1e-3` are allowed in either part.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let bad = || format!("expected a complex number like 0.3+0.4i, got {text:?}");
    let s = text.trim();
    if s.is_empty() || s.contains(char::is_whitespace) {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return parse_real(s).map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (
            parse_real(&body[..k]).map_err(|_| bad())?,
            parse_imag(&body[k..]).ok_or_else(bad)?,
        ),
        None => (0.0, parse_imag(body).ok_or_else(bad)?),
    };
    Ok(Complex64::new(re, im))
}

fn parse_imag(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => parse_real(s).ok(),
    }
}

fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not finite: {s:?}"))
    }
}

/// Parses `lo:hi` with `lo < hi`.
pub fn parse_range(text: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got {text:?}"))?;
    let (lo, hi) = (parse_real(lo.trim())?, parse_real(hi.trim())?);
    if lo < hi {
        Ok((lo, hi))
    } else {
        Err(format!("empty range {text:?}"))
    }
}

pub fn parse_list<T: std::str::FromStr>(flag: &str, text: &str) -> Result<Vec<T>, String> {
    let items: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        return Err(format!("--{flag} needs at least one value"));
    }
    items
        .iter()
        .map(|s| s.parse().map_err(|_| format!("--{flag}: cannot parse {s:?}")))
        .collect()
}
