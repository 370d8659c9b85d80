//! Complex numbers held as `(ln |z|, arg z)` and a compensated complex sum.

use num_complex::Complex;
use serde::Serialize;

use crate::Scalar;

/// A complex number stored as log-magnitude and phase.
///
/// `log_mag == -inf` encodes zero; the phase is then irrelevant and kept at 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogComplex<T> {
    pub log_mag: T,
    pub phase: T,
}

impl<T: Scalar> LogComplex<T> {
    pub fn new(log_mag: T, phase: T) -> Self {
        if log_mag == T::neg_infinity() {
            return Self::zero();
        }
        debug_assert!(phase.is_finite(), "phase must be finite for a nonzero value");
        Self { log_mag, phase }
    }

    pub fn zero() -> Self {
        Self {
            log_mag: T::neg_infinity(),
            phase: T::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log_mag == T::neg_infinity()
    }

    pub fn from_complex(z: Complex<T>) -> Self {
        if z.re == T::zero() && z.im == T::zero() {
            return Self::zero();
        }
        Self {
            log_mag: z.norm().ln(),
            phase: z.arg(),
        }
    }

    /// Converts back; magnitudes beyond the type's range saturate to 0 or inf.
    pub fn to_complex(self) -> Complex<T> {
        if self.is_zero() {
            return Complex::new(T::zero(), T::zero());
        }
        Complex::from_polar(self.log_mag.exp(), self.phase)
    }

    pub fn scale_log(self, log_factor: T) -> Self {
        if self.is_zero() {
            return self;
        }
        Self {
            log_mag: self.log_mag + log_factor,
            phase: self.phase,
        }
    }

    /// Raises to a real power on the branch implied by the stored phase.
    pub fn powf(self, exponent: T) -> Self {
        if self.is_zero() {
            return if exponent == T::zero() {
                Self::new(T::zero(), T::zero())
            } else {
                self
            };
        }
        Self {
            log_mag: self.log_mag * exponent,
            phase: self.phase * exponent,
        }
    }
}

impl<T: Scalar> std::ops::Mul for LogComplex<T> {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self {
            log_mag: self.log_mag + other.log_mag,
            phase: self.phase + other.phase,
        }
    }
}

/// Neumaier-compensated accumulator for complex terms.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<T> {
    sum: Complex<T>,
    carry: Complex<T>,
}

impl<T: Scalar> Default for CompensatedSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> CompensatedSum<T> {
    pub fn new() -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        Self {
            sum: zero,
            carry: zero,
        }
    }

    pub fn add(&mut self, term: Complex<T>) {
        let (re, cre) = two_sum(self.sum.re, term.re);
        let (im, cim) = two_sum(self.sum.im, term.im);
        self.sum = Complex::new(re, im);
        self.carry = Complex::new(self.carry.re + cre, self.carry.im + cim);
    }

    pub fn total(&self) -> Complex<T> {
        self.sum + self.carry
    }
}

#[inline]
fn two_sum<T: Scalar>(acc: T, x: T) -> (T, T) {
    let s = acc + x;
    let err = if acc.abs() >= x.abs() {
        (acc - s) + x
    } else {
        (x - s) + acc
    };
    (s, err)
}
