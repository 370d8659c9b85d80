//! Ensemble parameters, equilibrium density, support, and the angular sector
//! around the diagonal where the asymptotic kernel is used.

use num_complex::Complex;
use serde::Serialize;

use crate::{Error, Result, Scalar};

/// The pair `(alpha, n)`: potential exponent and matrix size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnsembleParams<T> {
    alpha: T,
    n: usize,
}

impl<T: Scalar> EnsembleParams<T> {
    pub fn new(alpha: T, n: usize) -> Result<Self> {
        if !alpha.is_finite() || alpha < T::lit(2.0) {
            return Err(Error::InvalidParams(format!(
                "alpha must be finite and >= 2, got {alpha}"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidParams("n must be >= 1".into()));
        }
        Ok(Self { alpha, n })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_scalar(&self) -> T {
        T::from_usize(self.n).unwrap()
    }

    /// Radius `(2/alpha)^(1/alpha)` of the disk carrying the equilibrium density.
    pub fn support_radius(&self) -> T {
        (T::lit(2.0) / self.alpha).powf(self.alpha.recip())
    }

    /// Angular half-width `2π/alpha` of the diagonal sector.
    pub fn sector_half_width(&self) -> T {
        T::TAU() / self.alpha
    }

    pub fn contains(&self, z: Complex<T>) -> bool {
        z.norm() <= self.support_radius()
    }

    pub fn region_around(&self, z: Complex<T>) -> Result<AngularRegion<T>> {
        ensure_finite(z, "z")?;
        ensure_nonzero(z, "z")?;
        AngularRegion::new(z.arg(), self.sector_half_width())
    }
}

/// Sector `{w : |arg w - center| < half_width}` with wrapped angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularRegion<T> {
    center_arg: T,
    half_width: T,
}

impl<T: Scalar> AngularRegion<T> {
    pub fn new(center_arg: T, half_width: T) -> Result<Self> {
        if !center_arg.is_finite() {
            return Err(Error::NonFinite("center_arg"));
        }
        if !(half_width > T::zero() && half_width <= T::PI()) {
            return Err(Error::InvalidArgument(format!(
                "half width must lie in (0, π], got {half_width}"
            )));
        }
        Ok(Self {
            center_arg,
            half_width,
        })
    }

    pub fn center_arg(&self) -> T {
        self.center_arg
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    /// Strict containment of the direction `angle`.
    pub fn contains_angle(&self, angle: T) -> bool {
        wrap_angle(angle - self.center_arg).abs() < self.half_width
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle<T: Scalar>(x: T) -> T {
    let pi = T::PI();
    let tau = T::TAU();
    let mut r = x % tau;
    if r > pi {
        r = r - tau;
    } else if r <= -pi {
        r = r + tau;
    }
    r
}

pub(crate) fn ensure_finite<T: Scalar>(z: Complex<T>, what: &'static str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

pub(crate) fn ensure_nonzero<T: Scalar>(z: Complex<T>, what: &'static str) -> Result<()> {
    if z.re == T::zero() && z.im == T::zero() {
        Err(Error::Domain(format!(
            "{what} is the origin, where the argument is undefined"
        )))
    } else {
        Ok(())
    }
}

/// `|z|^p` computed from `|z|^2` to avoid a square root.
pub(crate) fn abs_pow<T: Scalar>(z: Complex<T>, p: T) -> T {
    z.norm_sqr().powf(p * T::lit(0.5))
}

pub fn support_radius<T: Scalar>(params: &EnsembleParams<T>) -> T {
    params.support_radius()
}

/// Equilibrium density `alpha^2 |z|^(alpha-2) / 4π` on the support, zero outside.
pub fn density_at<T: Scalar>(params: &EnsembleParams<T>, z: Complex<T>) -> Result<T> {
    ensure_finite(z, "z")?;
    if !params.contains(z) {
        return Ok(T::zero());
    }
    let alpha = params.alpha();
    Ok(alpha * alpha * abs_pow(z, alpha - T::lit(2.0)) / (T::lit(4.0) * T::PI()))
}

/// Whether `(z, w)` lies in the diagonal sector: both points in the support and
/// their wrapped angular distance strictly below `2π/alpha`.
pub fn in_delta_region<T: Scalar>(params: &EnsembleParams<T>, z: Complex<T>, w: Complex<T>) -> Result<bool> {
    ensure_finite(z, "z")?;
    ensure_finite(w, "w")?;
    ensure_nonzero(z, "z")?;
    ensure_nonzero(w, "w")?;
    if !params.contains(z) || !params.contains(w) {
        return Ok(false);
    }
    Ok(params.region_around(z)?.contains_angle(w.arg()))
}
