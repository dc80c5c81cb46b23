use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point type the polynomial machinery is generic over (`f32` or `f64`).
pub trait Scalar: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Converts an `f64` literal. Panics only if the target cannot represent
    /// finite values, which never happens for the IEEE types.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where T: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {}

pub(crate) fn real<T: Scalar>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Combined absolute/relative comparison used by every float check.
///
/// Two values `u` and `v` are considered equal when
/// `|u - v| <= abs + rel * max(|u|, |v|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    pub abs: T,
    pub rel: T,
}

impl<T: Scalar> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            abs: T::lit(1e-10),
            rel: T::lit(1e-9),
        }
    }
}

impl<T: Scalar> Tolerance<T> {
    pub fn new(abs: T, rel: T) -> Self {
        Self { abs, rel }
    }

    /// Allowed discrepancy between two quantities of the given magnitudes.
    pub fn band(&self, u: T, v: T) -> T {
        self.abs + self.rel * u.abs().max(v.abs())
    }

    pub fn close(&self, u: T, v: T) -> bool {
        (u - v).abs() <= self.band(u, v)
    }

    pub fn close_complex(&self, u: Complex<T>, v: Complex<T>) -> bool {
        (u - v).norm() <= self.band(u.norm(), v.norm())
    }

    pub fn to_f64(&self) -> Tolerance<f64> {
        Tolerance {
            abs: self.abs.as_f64(),
            rel: self.rel.as_f64(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_band() {
        let tol = Tolerance::<f64>::default();
        assert!(tol.close(1.0, 1.0 + 5e-10));
        assert!(!tol.close(1.0, 1.0 + 5e-9));
        assert!(tol.close(0.0, 5e-11));
        assert!(!tol.close(0.0, 5e-10));
    }

    #[test]
    fn complex_close() {
        let tol = Tolerance::<f64>::default();
        assert!(tol.close_complex(Complex::new(1.0, 1.0), Complex::new(1.0, 1.0 + 1e-10)));
        assert!(!tol.close_complex(Complex::new(1.0, 1.0), Complex::new(1.0, 1.1)));
    }
}
