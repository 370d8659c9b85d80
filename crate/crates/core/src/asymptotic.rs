//! Leading-order asymptotic kernel, its piecewise form on the diagonal
//! sector, the sup-error against the exact kernel, and the secondary-peak
//! structure of the cross term.

use std::io::Write;

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::ensemble::{abs_pow, ensure_finite, ensure_nonzero, wrap_angle};
use crate::logcomplex::LogComplex;
use crate::{in_delta_region, EnsembleParams, Error, ExactKernel, Result, Scalar};

/// `(1/n) K̂_n(z, w) = (alpha^2/4π) (z w̄)^(alpha/2 - 1)
/// exp{n[(z w̄)^(alpha/2) - |z|^alpha/2 - |w|^alpha/2]}`, principal branch.
pub fn kernel_asymptotic<T: Scalar>(
    params: &EnsembleParams<T>,
    z: Complex<T>,
    w: Complex<T>,
) -> Result<Complex<T>> {
    Ok(kernel_asymptotic_log(params, z, w)?.to_complex())
}

pub(crate) fn kernel_asymptotic_log<T: Scalar>(
    params: &EnsembleParams<T>,
    z: Complex<T>,
    w: Complex<T>,
) -> Result<LogComplex<T>> {
    ensure_finite(z, "z")?;
    ensure_finite(w, "w")?;
    let alpha = params.alpha();
    let n = params.n_scalar();
    let half = alpha * T::lit(0.5);
    let log_amp = (alpha * alpha / (T::lit(4.0) * T::PI())).ln();
    let log_weight = -n * T::lit(0.5) * (abs_pow(z, alpha) + abs_pow(w, alpha));

    let zw = z * w.conj();
    if zw.re == T::zero() && zw.im == T::zero() {
        let power = half - T::one();
        if power == T::zero() {
            return Ok(LogComplex::new(log_amp + log_weight, T::zero()));
        }
        if power.fract() == T::zero() {
            return Ok(LogComplex::zero());
        }
        return Err(Error::Domain(format!(
            "(z w̄)^{power} at the origin has no principal value"
        )));
    }

    let ln_rho = T::lit(0.5) * (z.norm_sqr().ln() + w.norm_sqr().ln());
    let theta = zw.arg();
    let rho_pow = (half * ln_rho).exp();
    let (sin, cos) = (half * theta).sin_cos();
    let log_mag = log_amp + (half - T::one()) * ln_rho + n * rho_pow * cos + log_weight;
    let phase = (half - T::one()) * theta + n * rho_pow * sin;
    Ok(LogComplex::new(log_mag, phase))
}

/// The asymptotic kernel inside the diagonal sector and exactly zero outside.
pub fn kernel_piecewise<T: Scalar>(
    params: &EnsembleParams<T>,
    z: Complex<T>,
    w: Complex<T>,
) -> Result<Complex<T>> {
    if in_delta_region(params, z, w)? {
        kernel_asymptotic(params, z, w)
    } else {
        Ok(Complex::new(T::zero(), T::zero()))
    }
}

/// Deterministic polar sample of the diagonal sector.
///
/// Both kernels depend on `(z, w)` only through `|z|`, `|w|` and `z w̄`, and
/// swapping the sign of the relative angle conjugates both, so it suffices to
/// take `z = r` real and `w = r e^{iψ}` with `ψ ∈ [0, 2π/alpha)`. Radii are
/// `r_i = extent R i / (radii + 1)` for `i = 1..=radii`, strictly inside the
/// support of radius `R`; angles are `ψ_m = (2π/alpha) m / angles`, so `m = 0` is the
/// diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarSample {
    pub radii: usize,
    pub angles: usize,
    /// Outermost radius as a fraction of the support radius, in `(0, 1]`.
    pub extent: f64,
}

impl Default for PolarSample {
    fn default() -> Self {
        Self {
            radii: 24,
            angles: 48,
            extent: 1.0,
        }
    }
}

impl PolarSample {
    pub fn pairs<T: Scalar>(&self, params: &EnsembleParams<T>) -> Vec<(Complex<T>, Complex<T>)> {
        let big_r = params.support_radius() * T::lit(self.extent);
        let width = params.sector_half_width();
        let mut out = Vec::with_capacity(self.radii * self.angles);
        for i in 1..=self.radii {
            let r = big_r * T::from_usize(i).unwrap() / T::from_usize(self.radii + 1).unwrap();
            for m in 0..self.angles {
                let psi = width * T::from_usize(m).unwrap() / T::from_usize(self.angles).unwrap();
                out.push((Complex::new(r, T::zero()), Complex::from_polar(r, psi)));
            }
        }
        out
    }

    pub fn describe(&self) -> String {
        format!(
            "polar: z=r_i, w=r_i*exp(i*psi_m); r_i={}*R*i/{} for i=1..{}; psi_m=(2pi/alpha)*m/{} for m=0..{}",
            self.extent,
            self.radii + 1,
            self.radii,
            self.angles,
            self.angles.saturating_sub(1)
        )
    }
}

/// One row of the `R_n` table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorTableRow<T> {
    pub alpha: T,
    pub n: usize,
    pub r_sup: T,
    /// Pair where the maximum was attained (first in sample order on ties).
    pub argmax: (Complex<T>, Complex<T>),
    pub grid_spec: String,
}

/// Largest `|(1/n)K_n - (1/n)K̂_n|` over the sample.
pub fn error_sup<T: Scalar>(params: &EnsembleParams<T>, sample: &PolarSample) -> Result<ErrorTableRow<T>> {
    if !(sample.extent > 0.0 && sample.extent <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "sample extent must lie in (0, 1], got {}",
            sample.extent
        )));
    }
    let pairs = sample.pairs(params);
    if pairs.is_empty() {
        return Err(Error::EmptySample);
    }
    let exact = ExactKernel::new(*params);
    let diffs = pairs
        .par_iter()
        .map(|&(z, w)| Ok((exact.eval(z, w)? - kernel_asymptotic(params, z, w)?).norm()))
        .collect::<Result<Vec<T>>>()?;
    let mut best = 0;
    for (i, d) in diffs.iter().enumerate() {
        if *d > diffs[best] {
            best = i;
        }
    }
    Ok(ErrorTableRow {
        alpha: params.alpha(),
        n: params.n(),
        r_sup: diffs[best],
        argmax: pairs[best],
        grid_spec: sample.describe(),
    })
}

/// Writes `alpha,n,r_sup` rows.
pub fn write_error_table_csv<T: Scalar, W: Write>(rows: &[ErrorTableRow<T>], mut out: W) -> Result<()> {
    writeln!(out, "alpha,n,r_sup")?;
    for row in rows {
        writeln!(out, "{},{},{:.16e}", row.alpha, row.n, row.r_sup)?;
    }
    Ok(())
}

/// `ln |exp{n (z w̄)^(alpha/2)}| = n (rs)^(alpha/2) cos(alpha(θ - ξ)/2)`, with
/// the angle difference taken on the principal branch.
pub fn cross_term_magnitude<T: Scalar>(
    params: &EnsembleParams<T>,
    z: Complex<T>,
    w: Complex<T>,
) -> Result<T> {
    ensure_finite(z, "z")?;
    ensure_finite(w, "w")?;
    ensure_nonzero(z, "z")?;
    ensure_nonzero(w, "w")?;
    let half = params.alpha() * T::lit(0.5);
    let rs_pow = abs_pow(z, half) * abs_pow(w, half);
    let gap = wrap_angle(z.arg() - w.arg());
    Ok(params.n_scalar() * rs_pow * (half * gap).cos())
}

/// Angles `k 4π/alpha`, `k != 0`, that fall in `(-π, π]`, ascending.
pub fn secondary_peak_angles<T: Scalar>(params: &EnsembleParams<T>) -> Vec<T> {
    let period = T::lit(4.0) * T::PI() / params.alpha();
    let pi = T::PI();
    let slack = pi * T::lit(16.0) * T::epsilon();
    let mut out = Vec::new();
    let kmax = (pi / period).floor().to_i64().unwrap_or(0) + 1;
    for k in -kmax..=kmax {
        if k == 0 {
            continue;
        }
        let angle = T::from_i64(k).unwrap() * period;
        if angle > -pi + slack && angle <= pi + slack {
            out.push(angle.min(pi));
        }
    }
    out
}
