//! Unit-spacing rescaling `g`, the conformal maps `φ`, `φ⁻¹`, `u`, the
//! rescaled and universal kernels, and residual checks of the identities
//! that connect them.
//!
//! Every fractional power uses the principal branch. The identity checks
//! therefore only accept points on which principal powers compose, i.e.
//! pairs whose raw argument difference stays inside the diagonal sector.

use num_complex::Complex;
use serde::Serialize;

use crate::asymptotic::kernel_asymptotic;
use crate::ensemble::{ensure_finite, ensure_nonzero};
use crate::{EnsembleParams, Error, Result, Scalar};

/// Relative tolerance for the algebraic identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-10;

fn principal_pow<T: Scalar>(w: Complex<T>, p: T) -> Complex<T> {
    Complex::from_polar(w.norm().powf(p), w.arg() * p)
}

/// Value of `0^p` for the principal branch, or a domain error when `p` is not
/// a non-negative integer.
fn origin_pow<T: Scalar>(p: T, what: &str) -> Result<Complex<T>> {
    if p == T::zero() {
        Ok(Complex::new(T::one(), T::zero()))
    } else if p > T::zero() && p.fract() == T::zero() {
        Ok(Complex::new(T::zero(), T::zero()))
    } else {
        Err(Error::Domain(format!(
            "{what}: origin raised to non-integer power {p}"
        )))
    }
}

fn pow_or_origin<T: Scalar>(w: Complex<T>, p: T, what: &str) -> Result<Complex<T>> {
    ensure_finite(w, "w")?;
    if w.re == T::zero() && w.im == T::zero() {
        origin_pow(p, what)
    } else {
        Ok(principal_pow(w, p))
    }
}

/// `g(s) = (2π s^2 / (n alpha))^(1/alpha)`: the disk radius holding on average
/// `π s^2` eigenvalues.
pub fn scale_g<T: Scalar>(params: &EnsembleParams<T>, s: T) -> Result<T> {
    if !s.is_finite() {
        return Err(Error::NonFinite("s"));
    }
    if s < T::zero() {
        return Err(Error::InvalidArgument(format!("scale_g needs s >= 0, got {s}")));
    }
    let alpha = params.alpha();
    Ok((T::TAU() * s * s / (params.n_scalar() * alpha)).powf(alpha.recip()))
}

/// `φ(w) = √n w^(alpha/2)`.
pub fn map_phi<T: Scalar>(params: &EnsembleParams<T>, w: Complex<T>) -> Result<Complex<T>> {
    let half = params.alpha() * T::lit(0.5);
    Ok(pow_or_origin(w, half, "phi")? * params.n_scalar().sqrt())
}

/// `φ'(w) = √n (alpha/2) w^(alpha/2 - 1)`.
pub fn map_phi_derivative<T: Scalar>(params: &EnsembleParams<T>, w: Complex<T>) -> Result<Complex<T>> {
    let half = params.alpha() * T::lit(0.5);
    Ok(pow_or_origin(w, half - T::one(), "phi'")? * (params.n_scalar().sqrt() * half))
}

/// `φ⁻¹(w) = (w/√n)^(2/alpha)`, the inverse of [`map_phi`] on the principal sector.
pub fn map_phi_inverse<T: Scalar>(params: &EnsembleParams<T>, w: Complex<T>) -> Result<Complex<T>> {
    let scaled = w / params.n_scalar().sqrt();
    pow_or_origin(scaled, T::lit(2.0) / params.alpha(), "phi^-1")
}

fn u_scale<T: Scalar>(params: &EnsembleParams<T>) -> T {
    (params.alpha() / T::TAU()).sqrt()
}

/// `u(w) = √(alpha/2π) w`.
pub fn map_u<T: Scalar>(params: &EnsembleParams<T>, w: Complex<T>) -> Complex<T> {
    w * u_scale(params)
}

pub fn map_u_inverse<T: Scalar>(params: &EnsembleParams<T>, w: Complex<T>) -> Complex<T> {
    w / u_scale(params)
}

/// `K(z, w) = (1/π) exp{z w̄ - |z|^2/2 - |w|^2/2}`; independent of the ensemble.
pub fn universal_kernel<T: Scalar>(z: Complex<T>, w: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    let exponent = z * w.conj() - (z.norm_sqr() + w.norm_sqr()) * half;
    exponent.exp() / T::PI()
}

/// `K̃(z, w) = (2/alpha) exp{(2π/alpha)(z w̄ - |z|^2/2 - |w|^2/2)}`.
pub fn rescaled_kernel<T: Scalar>(params: &EnsembleParams<T>, z: Complex<T>, w: Complex<T>) -> Complex<T> {
    let alpha = params.alpha();
    let half = T::lit(0.5);
    let exponent = (z * w.conj() - (z.norm_sqr() + w.norm_sqr()) * half) * (T::TAU() / alpha);
    exponent.exp() * (T::lit(2.0) / alpha)
}

/// `sin π(x - y) / π(x - y)`, equal to 1 at `x = y`.
pub fn sine_kernel<T: Scalar>(x: T, y: T) -> T {
    let t = T::PI() * (x - y);
    if t == T::zero() {
        T::one()
    } else {
        t.sin() / t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityName {
    PhiIdentity,
    UIdentity,
    GComposition,
    PhiRoundtrip,
}

impl IdentityName {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::PhiIdentity => "phi_identity",
            Self::UIdentity => "u_identity",
            Self::GComposition => "g_composition",
            Self::PhiRoundtrip => "phi_roundtrip",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityResidual<T> {
    #[serde(rename = "identity")]
    pub identity_name: IdentityName,
    pub max_abs_residual: T,
    /// `|lhs - rhs| / max(|lhs|, |rhs|)`, maximized over the point set.
    pub max_rel_residual: T,
    pub points_checked: usize,
}

impl<T: Scalar> IdentityResidual<T> {
    pub fn passes(&self, rel_tol: f64) -> bool {
        self.max_rel_residual.to_f64().is_some_and(|r| r <= rel_tol)
    }
}

#[derive(Debug)]
struct ResidualAcc<T> {
    abs: T,
    rel: T,
    count: usize,
}

impl<T: Scalar> ResidualAcc<T> {
    fn new() -> Self {
        Self {
            abs: T::zero(),
            rel: T::zero(),
            count: 0,
        }
    }

    fn push(&mut self, lhs: Complex<T>, rhs: Complex<T>) {
        let diff = (lhs - rhs).norm();
        let scale = lhs.norm().max(rhs.norm());
        let rel = if scale > T::zero() { diff / scale } else { diff };
        self.abs = self.abs.max(diff);
        self.rel = self.rel.max(rel);
        self.count += 1;
    }

    fn finish(self, identity_name: IdentityName) -> Result<IdentityResidual<T>> {
        if self.count == 0 {
            return Err(Error::EmptySample);
        }
        Ok(IdentityResidual {
            identity_name,
            max_abs_residual: self.abs,
            max_rel_residual: self.rel,
            points_checked: self.count,
        })
    }
}

fn check_principal_pair<T: Scalar>(params: &EnsembleParams<T>, z: Complex<T>, w: Complex<T>) -> Result<()> {
    ensure_finite(z, "z")?;
    ensure_finite(w, "w")?;
    ensure_nonzero(z, "z")?;
    ensure_nonzero(w, "w")?;
    if (z.arg() - w.arg()).abs() >= params.sector_half_width() {
        return Err(Error::InvalidArgument(format!(
            "pair ({z}, {w}) is not in the principal diagonal sector"
        )));
    }
    Ok(())
}

/// `K̂_n(z, w) = φ'(z) K(φ(z), φ(w)) conj(φ'(w))`, with `K̂_n` taken as
/// `n` times [`kernel_asymptotic`].
pub fn verify_phi_identity<T: Scalar>(
    params: &EnsembleParams<T>,
    pairs: &[(Complex<T>, Complex<T>)],
) -> Result<IdentityResidual<T>> {
    let mut acc = ResidualAcc::new();
    for &(z, w) in pairs {
        check_principal_pair(params, z, w)?;
        let lhs = kernel_asymptotic(params, z, w)? * params.n_scalar();
        let rhs = map_phi_derivative(params, z)?
            * universal_kernel(map_phi(params, z)?, map_phi(params, w)?)
            * map_phi_derivative(params, w)?.conj();
        acc.push(lhs, rhs);
    }
    acc.finish(IdentityName::PhiIdentity)
}

/// `K̃(z, w) = v'(z) K(v(z), v(w)) conj(v'(w))` with `v = u⁻¹`, the linear
/// rescaling of the plane that `g = φ⁻¹ ∘ u⁻¹` composes with `φ`.
pub fn verify_u_identity<T: Scalar>(
    params: &EnsembleParams<T>,
    pairs: &[(Complex<T>, Complex<T>)],
) -> Result<IdentityResidual<T>> {
    let mut acc = ResidualAcc::new();
    let dv = u_scale(params).recip();
    for &(z, w) in pairs {
        ensure_finite(z, "z")?;
        ensure_finite(w, "w")?;
        let lhs = rescaled_kernel(params, z, w);
        let rhs = universal_kernel(map_u_inverse(params, z), map_u_inverse(params, w)) * (dv * dv);
        acc.push(lhs, rhs);
    }
    acc.finish(IdentityName::UIdentity)
}

/// `g(s) = φ⁻¹(u⁻¹(s))` for real `s > 0`.
pub fn verify_g_composition<T: Scalar>(
    params: &EnsembleParams<T>,
    radii: &[T],
) -> Result<IdentityResidual<T>> {
    let mut acc = ResidualAcc::new();
    for &s in radii {
        if !(s > T::zero()) || !s.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "g composition needs finite s > 0, got {s}"
            )));
        }
        let lhs = Complex::new(scale_g(params, s)?, T::zero());
        let rhs = map_phi_inverse(params, map_u_inverse(params, Complex::new(s, T::zero())))?;
        acc.push(lhs, rhs);
    }
    acc.finish(IdentityName::GComposition)
}

/// `φ⁻¹(φ(w)) = w` for `|arg w| < 2π/alpha`.
pub fn verify_phi_roundtrip<T: Scalar>(
    params: &EnsembleParams<T>,
    points: &[Complex<T>],
) -> Result<IdentityResidual<T>> {
    let mut acc = ResidualAcc::new();
    for &w in points {
        ensure_finite(w, "w")?;
        if w.arg().abs() >= params.sector_half_width() {
            return Err(Error::InvalidArgument(format!(
                "{w} is outside the principal sector"
            )));
        }
        let back = map_phi_inverse(params, map_phi(params, w)?)?;
        acc.push(back, w);
    }
    acc.finish(IdentityName::PhiRoundtrip)
}

/// 5 x 5 polar lattice in the support with `|arg| < π/alpha`, all ordered pairs.
pub fn default_pairs<T: Scalar>(params: &EnsembleParams<T>) -> Vec<(Complex<T>, Complex<T>)> {
    let pts = lattice(params, T::PI() / params.alpha());
    let mut out = Vec::with_capacity(pts.len() * pts.len());
    for &z in &pts {
        for &w in &pts {
            out.push((z, w));
        }
    }
    out
}

/// 5 x 5 polar lattice with `|arg| < 2π/alpha`.
pub fn default_roundtrip_points<T: Scalar>(params: &EnsembleParams<T>) -> Vec<Complex<T>> {
    lattice(params, params.sector_half_width())
}

pub fn default_radii<T: Scalar>() -> Vec<T> {
    [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|&s| T::lit(s))
        .collect()
}

fn lattice<T: Scalar>(params: &EnsembleParams<T>, max_arg: T) -> Vec<Complex<T>> {
    let r = params.support_radius();
    let mut pts = Vec::with_capacity(25);
    for &fr in &[0.15, 0.35, 0.55, 0.75, 0.95] {
        for &fa in &[-0.8, -0.4, 0.0, 0.4, 0.8] {
            pts.push(Complex::from_polar(r * T::lit(fr), max_arg * T::lit(fa)));
        }
    }
    pts
}
