//! Exact finite-`n` kernel `(1/n) K_n(z, w)` of the radial ensemble.
//!
//! With monomial orthogonal polynomials the kernel is the finite series
//!
//! ```text
//! (1/n) K_n(z, w) = (alpha / 2π) exp{-n(|z|^a + |w|^a)/2}
//!                   * sum_{j=1..n} n^(2j/a - 1) (z w̄)^(j-1) / Γ(2j/a)
//! ```
//!
//! (one factor of `z w̄` cancelled against the prefactor, so the origin is
//! regular). Individual terms overflow long before `n = 200`, so every term is
//! formed as a log-magnitude and phase, rescaled by the largest term, and
//! accumulated with compensated summation.

use num_complex::Complex;

use crate::ensemble::{abs_pow, ensure_finite};
use crate::logcomplex::{CompensatedSum, LogComplex};
use crate::special::ln_power_over_gamma;
use crate::{EnsembleParams, Result, Scalar};

/// Terms this far (in log-magnitude) below the largest one are below the
/// rounding floor of the sum and are skipped.
const NEGLIGIBLE_LOG: f64 = -80.0;

/// Exact kernel with the `z`-independent coefficients precomputed.
#[derive(Debug, Clone)]
pub struct ExactKernel<T> {
    params: EnsembleParams<T>,
    /// `ln(alpha/2π) + (2j/alpha - 1) ln n - ln Γ(2j/alpha)` for `j = 1..=n`.
    log_coeffs: Vec<T>,
}

impl<T: Scalar> ExactKernel<T> {
    pub fn new(params: EnsembleParams<T>) -> Self {
        let alpha = params.alpha();
        let n = params.n_scalar();
        let log_prefactor = (alpha / T::TAU()).ln();
        let log_coeffs = (1..=params.n())
            .map(|j| {
                let a = T::lit(2.0) * T::from_usize(j).unwrap() / alpha;
                log_prefactor + ln_power_over_gamma(a, n)
            })
            .collect();
        Self { params, log_coeffs }
    }

    pub fn params(&self) -> &EnsembleParams<T> {
        &self.params
    }

    pub fn eval(&self, z: Complex<T>, w: Complex<T>) -> Result<Complex<T>> {
        Ok(self.eval_log(z, w)?.to_complex())
    }

    /// The kernel as a [`LogComplex`], finite even where the value itself
    /// would under- or overflow.
    pub fn eval_log(&self, z: Complex<T>, w: Complex<T>) -> Result<LogComplex<T>> {
        ensure_finite(z, "z")?;
        ensure_finite(w, "w")?;
        let alpha = self.params.alpha();
        let half_n = self.params.n_scalar() * T::lit(0.5);
        let log_weight = -half_n * (abs_pow(z, alpha) + abs_pow(w, alpha));

        let zw = z * w.conj();
        if zw.re == T::zero() && zw.im == T::zero() {
            // Only the j = 1 term survives.
            return Ok(LogComplex::new(self.log_coeffs[0] + log_weight, T::zero()));
        }
        let ln_rho = T::lit(0.5) * (z.norm_sqr().ln() + w.norm_sqr().ln());
        let theta = zw.arg();

        let log_terms: Vec<T> = self
            .log_coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c + T::from_usize(k).unwrap() * ln_rho)
            .collect();
        let max = log_terms.iter().copied().fold(T::neg_infinity(), T::max);

        let cutoff = T::lit(NEGLIGIBLE_LOG);
        let mut acc = CompensatedSum::new();
        for (k, &lt) in log_terms.iter().enumerate() {
            let rel = lt - max;
            if rel < cutoff {
                continue;
            }
            let phase = T::from_usize(k).unwrap() * theta;
            acc.add(Complex::from_polar(rel.exp(), phase));
        }
        let total = LogComplex::from_complex(acc.total());
        Ok(total.scale_log(max + log_weight))
    }
}

/// `(1/n) K_n(z, w)` for the given ensemble.
///
/// Builds the coefficient table on every call; use [`ExactKernel`] when
/// evaluating many points at the same parameters.
pub fn kernel_exact<T: Scalar>(
    params: &EnsembleParams<T>,
    z: Complex<T>,
    w: Complex<T>,
) -> Result<Complex<T>> {
    ExactKernel::new(*params).eval(z, w)
}

/// The `alpha = 2` kernel in its truncated-exponential form
/// `(1/π) e^{-n(|z|^2+|w|^2)/2} sum_{k<n} (n z w̄)^k / k!`,
/// same normalization as [`kernel_exact`].
///
/// Terms come from the recurrence `t_k = t_{k-1} x / k` with exact power-of-two
/// rescaling, which shares no arithmetic with the log-gamma route.
pub fn ginibre_closed_form<T: Scalar>(n: usize, z: Complex<T>, w: Complex<T>) -> Result<Complex<T>> {
    ensure_finite(z, "z")?;
    ensure_finite(w, "w")?;
    if n == 0 {
        return Err(crate::Error::InvalidParams("n must be >= 1".into()));
    }
    let nf = T::from_usize(n).unwrap();
    let x = z * w.conj() * nf;

    let big_exp = (T::max_value().log2() / T::lit(4.0)).floor();
    let big = T::lit(2.0).powf(big_exp);
    let shrink = big.recip();

    let mut term = Complex::new(T::one(), T::zero());
    let mut sum = term;
    let mut rescales = 0i32;
    for k in 1..n {
        term = term * x / T::from_usize(k).unwrap();
        sum = sum + term;
        if term.norm() > big || sum.norm() > big {
            term = term * shrink;
            sum = sum * shrink;
            rescales += 1;
        }
    }

    let ln_scale = T::from_i32(rescales).unwrap() * big_exp * T::LN_2();
    let log_weight = -nf * T::lit(0.5) * (z.norm_sqr() + w.norm_sqr());
    let out = LogComplex::from_complex(sum).scale_log(ln_scale + log_weight - T::PI().ln());
    Ok(out.to_complex())
}
