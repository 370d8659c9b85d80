//! Eigenvalue moduli of the radial ensemble and the disk-count statistic.
//!
//! For a rotation-invariant weight `e^{-n|z|^alpha}` the orthogonal polynomials
//! are monomials, and the multiset of eigenvalue moduli has the law of
//! independent `M_j = (G_j / n)^(1/alpha)` with `G_j ~ Gamma(2j/alpha, 1)`,
//! `j = 1..n`. Every statistic here depends on moduli only, so it is exact
//! in law. Angles can be attached for scatter plots but carry no joint
//! correlation.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::conformal::scale_g;
use crate::special::gamma_p;
use crate::{EnsembleParams, Error, Result, Scalar};

const ANGLE_STREAM: u64 = u64::MAX;

/// Generator for trial `trial` of a run seeded with `seed`. Streams are
/// independent, so results do not depend on how trials are scheduled.
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialSample<T> {
    pub params: EnsembleParams<T>,
    pub moduli: Vec<T>,
    pub angles: Option<Vec<T>>,
    pub seed: u64,
}

impl<T: Scalar> RadialSample<T> {
    /// Writes `index,modulus` or `index,modulus,angle` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        match &self.angles {
            None => {
                writeln!(out, "index,modulus")?;
                for (i, m) in self.moduli.iter().enumerate() {
                    writeln!(out, "{i},{m:.16e}")?;
                }
            }
            Some(angles) => {
                writeln!(out, "index,modulus,angle")?;
                for (i, (m, a)) in self.moduli.iter().zip(angles).enumerate() {
                    writeln!(out, "{i},{m:.16e},{a:.16e}")?;
                }
            }
        }
        Ok(())
    }
}

fn draw_moduli<T: Scalar>(params: &EnsembleParams<T>, rng: &mut ChaCha8Rng) -> Vec<T> {
    let alpha = params.alpha();
    let n = params.n_scalar();
    let inv_alpha = alpha.recip();
    (1..=params.n())
        .map(|j| {
            let shape = T::lit(2.0) * T::from_usize(j).unwrap() / alpha;
            (T::sample_gamma(shape, rng) / n).powf(inv_alpha)
        })
        .collect()
}

/// One draw of the `n` eigenvalue moduli; deterministic in `seed`.
pub fn sample_moduli<T: Scalar>(params: &EnsembleParams<T>, seed: u64) -> RadialSample<T> {
    sample_trial(params, seed, 0)
}

/// Draw number `trial` of a run seeded with `seed`. Trial 0 equals [`sample_moduli`].
pub fn sample_trial<T: Scalar>(params: &EnsembleParams<T>, seed: u64, trial: u64) -> RadialSample<T> {
    let mut rng = trial_rng(seed, trial);
    RadialSample {
        params: *params,
        moduli: draw_moduli(params, &mut rng),
        angles: None,
        seed,
    }
}

/// Attaches independent uniform angles in `(-π, π]`.
pub fn attach_uniform_angles<T: Scalar>(sample: RadialSample<T>, seed: u64) -> Result<RadialSample<T>> {
    if sample.angles.is_some() {
        return Err(Error::AnglesPresent);
    }
    let mut rng = trial_rng(seed, ANGLE_STREAM);
    let angles = (0..sample.moduli.len())
        .map(|_| T::PI() - T::TAU() * T::sample_unit(&mut rng))
        .collect();
    Ok(RadialSample {
        angles: Some(angles),
        ..sample
    })
}

/// `(1/n) #{i : |λ_i| <= radius}`.
pub fn fraction_in_disk<T: Scalar>(sample: &RadialSample<T>, radius: T) -> Result<T> {
    if !(radius >= T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "disk radius must be >= 0, got {radius}"
        )));
    }
    if sample.moduli.is_empty() {
        return Err(Error::EmptySample);
    }
    let inside = sample.moduli.iter().filter(|&&m| m <= radius).count();
    Ok(T::from_usize(inside).unwrap() / T::from_usize(sample.moduli.len()).unwrap())
}

/// Monte Carlo estimate of `<n f_n(D_g(s))>` against the target `π s^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpacingCheckResult<T> {
    pub s: T,
    pub mean_count: T,
    pub std_error: T,
    pub trials: usize,
    pub target: T,
}

impl<T: Scalar> SpacingCheckResult<T> {
    /// Whether `value` lies within `k` standard errors of the mean.
    pub fn within(&self, value: T, k: T) -> bool {
        (self.mean_count - value).abs() <= k * self.std_error
    }
}

fn bulk_radius<T: Scalar>(params: &EnsembleParams<T>, s: T) -> Result<T> {
    let radius = scale_g(params, s)?;
    let support = params.support_radius();
    if radius >= support {
        return Err(Error::OutsideBulk {
            radius: radius.to_f64().unwrap_or(f64::NAN),
            support: support.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(radius)
}

/// Runs `trials` independent draws and averages the count of moduli inside
/// the disk of radius `g(s)`.
pub fn spacing_check<T: Scalar>(
    params: &EnsembleParams<T>,
    s: T,
    trials: usize,
    seed: u64,
) -> Result<SpacingCheckResult<T>> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    let radius = bulk_radius(params, s)?;
    let n = params.n_scalar();
    let counts = (0..trials as u64)
        .into_par_iter()
        .map(|t| Ok(n * fraction_in_disk(&sample_trial(params, seed, t), radius)?))
        .collect::<Result<Vec<T>>>()?;

    let tf = T::from_usize(trials).unwrap();
    let mean = counts.iter().fold(T::zero(), |a, &c| a + c) / tf;
    let std_error = if trials > 1 {
        let ss = counts.iter().fold(T::zero(), |a, &c| a + (c - mean) * (c - mean));
        (ss / (tf - T::one()) / tf).sqrt()
    } else {
        T::zero()
    };
    Ok(SpacingCheckResult {
        s,
        mean_count: mean,
        std_error,
        trials,
        target: T::PI() * s * s,
    })
}

/// Exact finite-`n` expectation `sum_j P(2j/alpha, n g(s)^alpha)` of the count
/// estimated by [`spacing_check`].
pub fn spacing_oracle<T: Scalar>(params: &EnsembleParams<T>, s: T) -> Result<T> {
    let radius = bulk_radius(params, s)?;
    let alpha = params.alpha();
    let x = params.n_scalar() * radius.powf(alpha);
    let mut total = T::zero();
    for j in 1..=params.n() {
        total = total + gamma_p(T::lit(2.0) * T::from_usize(j).unwrap() / alpha, x)?;
    }
    Ok(total)
}
