//! Eigenvalue-correlation kernels of random normal matrix ensembles with the
//! radial potential `V(z) = |z|^alpha`.
//!
//! The crate evaluates the exact finite-`n` kernel in the log domain, its
//! leading-order asymptotic, the rescaled and universal kernels together with
//! the conformal maps between them, and samples eigenvalue moduli from the
//! radial law of the ensemble.
//!
//! Everything is generic over a [`Scalar`] (`f32` or `f64`); the `f64`
//! aliases at the crate root cover the common case.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
mod scalar;

pub mod asymptotic;
pub mod conformal;
pub mod ensemble;
pub mod exact;
pub mod grid;
pub mod logcomplex;
pub mod sampling;
pub mod special;

pub use asymptotic::{
    cross_term_magnitude, error_sup, kernel_asymptotic, kernel_piecewise, secondary_peak_angles,
    write_error_table_csv, ErrorTableRow, PolarSample,
};
pub use conformal::{
    map_phi, map_phi_derivative, map_phi_inverse, map_u, map_u_inverse, rescaled_kernel, scale_g,
    sine_kernel, universal_kernel, verify_g_composition, verify_phi_identity, verify_phi_roundtrip,
    verify_u_identity, IdentityName, IdentityResidual, IDENTITY_TOLERANCE,
};
pub use ensemble::{density_at, in_delta_region, support_radius, AngularRegion, EnsembleParams};
pub use error::{Error, Result};
pub use exact::{ginibre_closed_form, kernel_exact, ExactKernel};
pub use grid::{kernel_grid, GridSpec, KernelGrid, PeakSummary};
pub use logcomplex::{CompensatedSum, LogComplex};
pub use sampling::{
    attach_uniform_angles, fraction_in_disk, sample_moduli, sample_trial, spacing_check, spacing_oracle,
    RadialSample, SpacingCheckResult,
};
pub use scalar::Scalar;

/// A point of the complex plane. Public operations reject non-finite parts.
pub type ComplexValue<T> = num_complex::Complex<T>;

pub type Complex64 = num_complex::Complex<f64>;
pub type Params64 = EnsembleParams<f64>;
pub type Grid64 = KernelGrid<f64>;
pub type Sample64 = RadialSample<f64>;
pub type LogComplex64 = LogComplex<f64>;
