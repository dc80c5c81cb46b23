//! Monic polynomials in product and coefficient form.
//!
//! Coefficient vectors are ascending: `c[k]` multiplies `x^k`.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{real, Scalar};

/// Ordered multiset of complex zeros `a_1..a_n`, `n >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootMultiset<T> {
    roots: Vec<Complex<T>>,
}

impl<T: Scalar> RootMultiset<T> {
    pub fn new(roots: Vec<Complex<T>>) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::EmptyRoots);
        }
        if let Some((index, z)) = roots
            .iter()
            .enumerate()
            .find(|(_, z)| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::NonFiniteRoot {
                index,
                re: z.re.as_f64(),
                im: z.im.as_f64(),
            });
        }
        Ok(Self { roots })
    }

    pub fn from_reals(values: &[T]) -> Result<Self> {
        Self::new(values.iter().map(|&x| real(x)).collect())
    }

    pub fn roots(&self) -> &[Complex<T>] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.roots.iter().all(|z| z.im == T::zero())
    }

    /// The roots as positive reals, or an error naming the first root that is
    /// non-real or not strictly positive.
    pub fn positive_reals(&self) -> Result<Vec<T>> {
        self.roots
            .iter()
            .enumerate()
            .map(|(index, z)| {
                if z.im == T::zero() && z.re > T::zero() {
                    Ok(z.re)
                } else {
                    Err(Error::NotPositiveReal {
                        index,
                        re: z.re.as_f64(),
                        im: z.im.as_f64(),
                    })
                }
            })
            .collect()
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut roots = self.roots.clone();
        roots.extend_from_slice(&other.roots);
        Self { roots }
    }

    /// The multiset with entry `index` removed; `None` if that would leave it empty.
    pub fn without(&self, index: usize) -> Option<Self> {
        if self.roots.len() < 2 || index >= self.roots.len() {
            return None;
        }
        let mut roots = self.roots.clone();
        roots.remove(index);
        Some(Self { roots })
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            roots: self.roots.iter().map(|&z| f(z)).collect(),
        }
    }
}

/// Monic polynomial `c_0 + c_1 x + ... + x^n`, optionally carrying the roots it
/// was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPolynomial<T> {
    coeffs: Vec<Complex<T>>,
    roots: Option<RootMultiset<T>>,
}

impl<T: Scalar> MonicPolynomial<T> {
    /// Expands `prod (x - a_i)` by multiplying the factors in the given order.
    pub fn from_roots(roots: &RootMultiset<T>) -> Self {
        Self {
            coeffs: expand_linear_factors(roots.roots()),
            roots: Some(roots.clone()),
        }
    }

    pub fn from_coeffs(coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::DegreeTooLow);
        }
        if coeffs[coeffs.len() - 1] != Complex::one() {
            return Err(Error::NotMonic);
        }
        Ok(Self { coeffs, roots: None })
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn known_roots(&self) -> Option<&RootMultiset<T>> {
        self.roots.as_ref()
    }

    pub fn evaluate(&self, z: Complex<T>) -> Complex<T> {
        horner(&self.coeffs, z)
    }

    /// Formal derivative; not monic (leading coefficient is the degree).
    pub fn derivative(&self) -> Vec<Complex<T>> {
        derivative_coeffs(&self.coeffs)
    }

    /// Value of the `s`-th derivative at `z`. `s = 0` evaluates the polynomial and
    /// `s > degree` gives exactly zero.
    pub fn derivative_at_order(&self, s: usize, z: Complex<T>) -> Complex<T> {
        derivative_at_order_coeffs(&self.coeffs, s, z)
    }

    /// Coefficients `t_0..t_n` with `P(x) = sum t_k (x - c)^k`.
    pub fn taylor_shift(&self, c: Complex<T>) -> Vec<Complex<T>> {
        taylor_shift_coeffs(&self.coeffs, c)
    }

    pub fn scaled_residual(&self, z: Complex<T>) -> T {
        scaled_residual(&self.coeffs, z)
    }
}

/// Coefficients of `prod (x - a_i)`, multiplying in slice order.
pub fn expand_linear_factors<T: Scalar>(roots: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut coeffs = Vec::with_capacity(roots.len() + 1);
    coeffs.push(Complex::one());
    for &a in roots {
        // multiply by (x - a)
        coeffs.push(Complex::zero());
        for k in (0..coeffs.len()).rev() {
            let below = if k > 0 { coeffs[k - 1] } else { Complex::zero() };
            coeffs[k] = below - a * coeffs[k];
        }
    }
    coeffs
}

/// Same as [`expand_linear_factors`] for real roots.
pub fn expand_real_factors<T: Scalar>(roots: &[T]) -> Vec<T> {
    let mut coeffs = Vec::with_capacity(roots.len() + 1);
    coeffs.push(T::one());
    for &a in roots {
        coeffs.push(T::zero());
        for k in (0..coeffs.len()).rev() {
            let below = if k > 0 { coeffs[k - 1] } else { T::zero() };
            coeffs[k] = below - a * coeffs[k];
        }
    }
    coeffs
}

pub fn horner<T: Scalar>(coeffs: &[Complex<T>], z: Complex<T>) -> Complex<T> {
    coeffs.iter().rev().fold(Complex::zero(), |acc, &c| acc * z + c)
}

pub fn derivative_coeffs<T: Scalar>(coeffs: &[Complex<T>]) -> Vec<Complex<T>> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * T::lit(k as f64))
        .collect()
}

/// `k`-fold formal derivative. Empty once `k` exceeds the degree.
pub fn nth_derivative_coeffs<T: Scalar>(coeffs: &[Complex<T>], k: usize) -> Vec<Complex<T>> {
    let mut out = coeffs.to_vec();
    for _ in 0..k {
        if out.is_empty() {
            break;
        }
        out = derivative_coeffs(&out);
    }
    out
}

pub fn derivative_at_order_coeffs<T: Scalar>(coeffs: &[Complex<T>], s: usize, z: Complex<T>) -> Complex<T> {
    if s >= coeffs.len() {
        return Complex::zero();
    }
    horner(&nth_derivative_coeffs(coeffs, s), z)
}

/// Change of center by repeated synthetic division by `(x - c)`.
pub fn taylor_shift_coeffs<T: Scalar>(coeffs: &[Complex<T>], c: Complex<T>) -> Vec<Complex<T>> {
    let mut t = coeffs.to_vec();
    let n = t.len().saturating_sub(1);
    // pass k leaves the remainder of the k-th division in t[k]
    for k in 0..n {
        for j in (k..n).rev() {
            let carry = c * t[j + 1];
            t[j] = t[j] + carry;
        }
    }
    t
}

/// `|P(z)|` divided by `sum |c_k| * max(1, |z|)^k`, a rounding-level measure of
/// how well `z` solves `P(z) = 0`.
pub fn scaled_residual<T: Scalar>(coeffs: &[Complex<T>], z: Complex<T>) -> T {
    let r = z.norm().max(T::one());
    let scale = coeffs.iter().rev().fold(T::zero(), |acc, c| acc * r + c.norm());
    let value = horner(coeffs, z).norm();
    if scale == T::zero() {
        value
    } else {
        value / scale
    }
}

/// Product-rule form of `P'(z)`: `sum_i prod_{k != i} (z - a_k)`.
pub fn permutation_sum_derivative<T: Scalar>(roots: &RootMultiset<T>, z: Complex<T>) -> Result<Complex<T>> {
    let a = roots.roots();
    if a.len() < 2 {
        return Err(Error::DegreeBelow {
            required: 2,
            actual: a.len(),
        });
    }
    Ok((0..a.len())
        .map(|i| {
            a.iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .fold(Complex::one(), |acc, (_, &ak)| acc * (z - ak))
        })
        .fold(Complex::zero(), |acc, term| acc + term))
}
