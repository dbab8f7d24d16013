//! Scalar fields the one-unknown iterations run over.

use std::fmt::Debug;
use std::ops::Neg;

use num_complex::Complex64;
use num_traits::Num;

/// A number type the scalar iterations are generic over: `f64` or `Complex64`.
///
/// Magnitudes are always moduli, so stopping and divergence tests read the
/// same for both fields.
pub trait Field: Num + Neg<Output = Self> + Copy + Debug + PartialEq + Send + Sync + 'static {
    /// Real components per value: 1 for `f64`, 2 for `Complex64`.
    const COMPONENTS: usize;

    fn modulus(self) -> f64;
    fn from_real(x: f64) -> Self;
    fn is_finite(self) -> bool;
    /// The value as a point of the plane (imaginary part zero for reals).
    fn to_point(self) -> [f64; 2];
}

impl Field for f64 {
    const COMPONENTS: usize = 1;

    #[inline]
    fn modulus(self) -> f64 {
        self.abs()
    }

    #[inline]
    fn from_real(x: f64) -> Self {
        x
    }

    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }

    #[inline]
    fn to_point(self) -> [f64; 2] {
        [self, 0.0]
    }
}

impl Field for Complex64 {
    const COMPONENTS: usize = 2;

    #[inline]
    fn modulus(self) -> f64 {
        self.norm()
    }

    #[inline]
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }

    #[inline]
    fn is_finite(self) -> bool {
        Complex64::is_finite(self)
    }

    #[inline]
    fn to_point(self) -> [f64; 2] {
        [self.re, self.im]
    }
}
