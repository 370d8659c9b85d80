use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use normalens::conformal::{default_pairs, default_radii};
use normalens::{
    attach_uniform_angles, density_at, error_sup, fraction_in_disk, kernel_grid, sample_moduli,
    spacing_check, spacing_oracle, verify_g_composition, verify_phi_identity, verify_u_identity,
    write_error_table_csv, Complex64, GridSpec, Params64, PolarSample, IDENTITY_TOLERANCE,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{
    parse_list, DensityArgs, EnsembleArgs, ErrorTableArgs, IdentityChoice, KernelGridArgs, SampleArgs,
    SpacingArgs, VerifyArgs,
};

pub const SCHEMA_VERSION: u32 = 1;

const MAX_N: usize = 1_000_000;
const MAX_STEPS: usize = 10_001;
const MAX_TRIALS: usize = 1_000_000;
const MIN_TRIALS: usize = 30;

/// Failure that maps to exit code 2.
#[derive(Debug)]
pub struct InputError {
    pub kind: &'static str,
    pub message: String,
}

impl InputError {
    pub fn new(kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
        }
    }
}

impl From<normalens::Error> for InputError {
    fn from(e: normalens::Error) -> Self {
        use normalens::Error as E;
        let kind = match e {
            E::InvalidParams(_) => "invalid_params",
            E::NonFinite(_) => "non_finite",
            E::Domain(_) => "domain",
            E::InvalidArgument(_) | E::AnglesPresent => "invalid_argument",
            E::EmptySample => "empty_sample",
            E::OutsideBulk { .. } => "outside_bulk",
            E::Io(_) => "io",
            E::Json(_) => "json",
        };
        Self::new(kind, e.to_string())
    }
}

impl From<std::io::Error> for InputError {
    fn from(e: std::io::Error) -> Self {
        Self::new("io", e.to_string())
    }
}

/// JSON report plus whether the command's check passed.
pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

type Run = Result<Outcome, InputError>;

fn params(e: EnsembleArgs) -> Result<Params64, InputError> {
    if e.n > MAX_N {
        return Err(InputError::new(
            "invalid_params",
            format!("n = {} exceeds the limit {MAX_N}", e.n),
        ));
    }
    Ok(Params64::new(e.alpha, e.n)?)
}

fn header(command: &str, p: &Params64) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m.insert("alpha".into(), json!(p.alpha()));
    m.insert("n".into(), json!(p.n()));
    m
}

fn write_file(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<File>) -> Result<(), InputError>,
) -> Result<(), InputError> {
    let file = File::create(path).map_err(|e| InputError::new("io", format!("{}: {e}", path.display())))?;
    let mut out = BufWriter::new(file);
    body(&mut out)?;
    out.flush()?;
    Ok(())
}

pub fn kernel_grid_cmd(a: &KernelGridArgs) -> Run {
    let p = params(a.ensemble)?;
    if !(2..=MAX_STEPS).contains(&a.steps) {
        return Err(InputError::new(
            "invalid_argument",
            format!("--steps must lie in 2..={MAX_STEPS}"),
        ));
    }
    let r = p.support_radius();
    let (re_min, re_max) = a.bounds.unwrap_or((-r, r));
    let (im_min, im_max) = a.im_bounds.unwrap_or((re_min, re_max));
    let spec = GridSpec {
        re_min,
        re_max,
        im_min,
        im_max,
        steps_re: a.steps,
        steps_im: a.steps,
    };
    let grid = kernel_grid(&p, a.z, spec)?;
    write_file(&a.out, |out| Ok(grid.write_csv(out)?))?;
    let peak = grid.peak();
    let mut m = header("kernel-grid", &p);
    m.insert("z".into(), json!(a.z));
    m.insert("grid".into(), json!(spec));
    m.insert("rows".into(), json!(spec.len()));
    m.insert("csv".into(), json!(a.out.display().to_string()));
    m.insert("peak".into(), json!(peak));
    Ok(Outcome {
        report: Value::Object(m),
        passed: true,
    })
}

pub fn error_table_cmd(a: &ErrorTableArgs) -> Run {
    let alphas: Vec<f64> =
        parse_list("alphas", &a.alphas).map_err(|e| InputError::new("invalid_argument", e))?;
    let ns: Vec<usize> = parse_list("ns", &a.ns).map_err(|e| InputError::new("invalid_argument", e))?;
    let sample = PolarSample {
        radii: a.radii,
        angles: a.angles,
        extent: a.extent,
    };
    let mut configs = Vec::with_capacity(alphas.len() * ns.len());
    for &alpha in &alphas {
        for &n in &ns {
            configs.push(params(EnsembleArgs { alpha, n })?);
        }
    }
    let rows = configs
        .par_iter()
        .map(|p| error_sup(p, &sample))
        .collect::<Result<Vec<_>, _>>()?;
    write_file(&a.out, |out| Ok(write_error_table_csv(&rows, out)?))?;
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "error-table",
        "sample": sample,
        "csv": a.out.display().to_string(),
        "rows": rows,
    });
    Ok(Outcome { report, passed: true })
}

pub fn verify_cmd(a: &VerifyArgs) -> Run {
    let p = params(a.ensemble)?;
    let pick = |c| a.identity == c || a.identity == IdentityChoice::All;
    let pairs = default_pairs(&p);
    let mut residuals = Vec::new();
    if pick(IdentityChoice::Phi) {
        residuals.push(verify_phi_identity(&p, &pairs)?);
    }
    if pick(IdentityChoice::U) {
        residuals.push(verify_u_identity(&p, &pairs)?);
    }
    if pick(IdentityChoice::G) {
        residuals.push(verify_g_composition(&p, &default_radii())?);
    }
    let passed = residuals.iter().all(|r| r.passes(IDENTITY_TOLERANCE));
    let mut m = header("verify", &p);
    m.insert("tolerance".into(), json!(IDENTITY_TOLERANCE));
    m.insert("passed".into(), json!(passed));
    m.insert("residuals".into(), json!(residuals));
    Ok(Outcome {
        report: Value::Object(m),
        passed,
    })
}

pub fn spacing_cmd(a: &SpacingArgs) -> Run {
    let p = params(a.ensemble)?;
    if !(MIN_TRIALS..=MAX_TRIALS).contains(&a.trials) {
        return Err(InputError::new(
            "invalid_argument",
            format!("--trials must lie in {MIN_TRIALS}..={MAX_TRIALS}"),
        ));
    }
    let result = spacing_check(&p, a.s, a.trials, a.seed)?;
    let oracle = spacing_oracle(&p, a.s)?;
    let within_target = result.within(result.target, 3.0);
    let within_oracle = result.within(oracle, 3.0);
    let passed = within_target || within_oracle;
    let mut m = header("spacing-check", &p);
    m.insert("seed".into(), json!(a.seed));
    m.insert("result".into(), json!(result));
    m.insert("oracle".into(), json!(oracle));
    m.insert("within_target".into(), json!(within_target));
    m.insert("within_oracle".into(), json!(within_oracle));
    m.insert("passed".into(), json!(passed));
    Ok(Outcome {
        report: Value::Object(m),
        passed,
    })
}

pub fn sample_cmd(a: &SampleArgs) -> Run {
    let p = params(a.ensemble)?;
    let mut sample = sample_moduli(&p, a.seed);
    if a.with_angles {
        sample = attach_uniform_angles(sample, a.seed)?;
    }
    write_file(&a.out, |out| Ok(sample.write_csv(out)?))?;
    let max_modulus = sample.moduli.iter().copied().fold(0.0, f64::max);
    let mut m = header("sample", &p);
    m.insert("seed".into(), json!(a.seed));
    m.insert("csv".into(), json!(a.out.display().to_string()));
    m.insert("count".into(), json!(sample.moduli.len()));
    m.insert("support_radius".into(), json!(p.support_radius()));
    m.insert("max_modulus".into(), json!(max_modulus));
    m.insert(
        "fraction_in_support".into(),
        json!(fraction_in_disk(&sample, p.support_radius())?),
    );
    Ok(Outcome {
        report: Value::Object(m),
        passed: true,
    })
}

pub fn density_cmd(a: &DensityArgs) -> Run {
    let p = params(a.ensemble)?;
    if !(2..=1_000_000).contains(&a.points) {
        return Err(InputError::new(
            "invalid_argument",
            "--points must lie in 2..=1000000",
        ));
    }
    if !(a.extent.is_finite() && a.extent > 0.0) {
        return Err(InputError::new(
            "invalid_argument",
            "--extent must be positive and finite",
        ));
    }
    let r_max = a.extent * p.support_radius();
    let table = (0..a.points)
        .map(|k| {
            let r = r_max * k as f64 / (a.points - 1) as f64;
            density_at(&p, Complex64::new(r, 0.0)).map(|rho| (r, rho))
        })
        .collect::<Result<Vec<_>, _>>()?;
    write_file(&a.out, |out| {
        writeln!(out, "r,rho")?;
        for (r, rho) in &table {
            writeln!(out, "{r:.16e},{rho:.16e}")?;
        }
        Ok(())
    })?;
    let mut m = header("density", &p);
    m.insert("support_radius".into(), json!(p.support_radius()));
    m.insert(
        "rho_at_support".into(),
        json!(density_at(&p, Complex64::new(p.support_radius(), 0.0))?),
    );
    m.insert("csv".into(), json!(a.out.display().to_string()));
    m.insert("rows".into(), json!(table.len()));
    Ok(Outcome {
        report: Value::Object(m),
        passed: true,
    })
}
