//! Product-of-moduli measure, epsilon-limitedness, and the closure properties
//! of limited polynomials under products, conjugation, and rescaling.

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{expand_linear_factors, scaled_residual, RootMultiset};
use crate::scalar::{Scalar, Tolerance};
use crate::verdict::{Check, ClaimId, ClaimVerdict};

/// Above this many roots the measure is accumulated in the log domain.
const LINEAR_MAX_ROOTS: usize = 20;
const LINEAR_MIN_MODULUS: f64 = 1e-6;
const LINEAR_MAX_MODULUS: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Limitedness<T> {
    pub measure: T,
    pub epsilon: T,
    pub is_limited: bool,
}

/// `prod |a_i|`. Exactly zero if any root is zero.
pub fn measure<T: Scalar>(roots: &RootMultiset<T>) -> T {
    measure_of(roots.roots())
}

pub(crate) fn measure_of<T: Scalar>(roots: &[Complex<T>]) -> T {
    if roots.iter().any(|z| z.is_zero()) {
        return T::zero();
    }
    let lo = T::lit(LINEAR_MIN_MODULUS);
    let hi = T::lit(LINEAR_MAX_MODULUS);
    let log_domain = roots.len() > LINEAR_MAX_ROOTS
        || roots.iter().any(|z| {
            let m = z.norm();
            m < lo || m > hi
        });
    if log_domain {
        roots.iter().map(|z| z.norm().ln()).fold(T::zero(), |a, b| a + b).exp()
    } else {
        roots.iter().map(|z| z.norm()).fold(T::one(), |a, b| a * b)
    }
}

fn require_positive<T: Scalar>(name: &'static str, value: T) -> Result<()> {
    if value > T::zero() {
        Ok(())
    } else {
        Err(Error::NonPositive {
            name,
            value: value.as_f64(),
        })
    }
}

pub fn is_epsilon_limited<T: Scalar>(roots: &RootMultiset<T>, eps: T) -> Result<Limitedness<T>> {
    require_positive("epsilon", eps)?;
    let m = measure(roots);
    Ok(Limitedness {
        measure: m,
        epsilon: eps,
        is_limited: m < eps,
    })
}

/// Checks that an `eps`-limited `P` and a `delta`-limited `Q` with disjoint
/// zero sets multiply to an `eps * delta`-limited product. The measure identity
/// `M(PQ) = M(P) M(Q)` is reported whether or not the hypotheses hold.
pub fn check_product_proposition<T: Scalar>(
    p_roots: &RootMultiset<T>,
    q_roots: &RootMultiset<T>,
    eps: T,
    delta: T,
    tol: &Tolerance<T>,
) -> Result<ClaimVerdict> {
    require_positive("epsilon", eps)?;
    require_positive("delta", delta)?;
    let tol = tol.to_f64();

    let separation = p_roots
        .roots()
        .iter()
        .flat_map(|a| q_roots.roots().iter().map(move |b| (a - b).norm()))
        .fold(T::infinity(), T::min);
    let m_p = measure(p_roots);
    let m_q = measure(q_roots);
    let m_pq = measure(&p_roots.concat(q_roots));
    let (eps, delta) = (eps.as_f64(), delta.as_f64());

    let hypotheses = vec![
        Check::strict_upper("disjoint_zero_sets", 0.0, separation.as_f64(), &tol),
        Check::strict_upper("p_epsilon_limited", m_p.as_f64(), eps, &tol),
        Check::strict_upper("q_delta_limited", m_q.as_f64(), delta, &tol),
    ];
    let conclusion = Check::strict_upper("product_limited", m_pq.as_f64(), eps * delta, &tol);
    let identity = Check::identity("measure_multiplicative", m_pq.as_f64(), (m_p * m_q).as_f64(), &tol);
    Ok(ClaimVerdict::new(ClaimId::ProductProp, hypotheses, conclusion).with_auxiliary(vec![identity]))
}

pub fn conjugate_roots<T: Scalar>(roots: &RootMultiset<T>) -> RootMultiset<T> {
    roots.map(|z| z.conj())
}

/// Solves `a_i = lambda_i * b_i` for the `b_i`.
pub fn rescale_roots<T: Scalar>(roots: &RootMultiset<T>, lambdas: &[Complex<T>]) -> Result<RootMultiset<T>> {
    if lambdas.len() != roots.len() {
        return Err(Error::ScaleCountMismatch {
            expected: roots.len(),
            actual: lambdas.len(),
        });
    }
    if let Some(index) = lambdas.iter().position(|l| l.is_zero()) {
        return Err(Error::ZeroScale { index });
    }
    RootMultiset::new(roots.roots().iter().zip(lambdas).map(|(&a, &l)| a / l).collect())
}

/// Multiplying `P` by a nonzero constant leaves its zero set, and hence its
/// measure, unchanged. Verified on the coefficients of `lambda * P`: they
/// normalize back to `P`, they vanish on every root, and `|c_0 / c_n|`
/// reproduces the measure.
pub fn scalar_multiple_invariance<T: Scalar>(roots: &RootMultiset<T>, lambda: Complex<T>) -> Result<bool> {
    if lambda.is_zero() {
        return Err(Error::ZeroScale { index: 0 });
    }
    let tol = Tolerance::<T>::default();
    let base = expand_linear_factors(roots.roots());
    let scaled: Vec<_> = base.iter().map(|&c| c * lambda).collect();
    let lead = scaled[scaled.len() - 1];

    let normalizes = scaled.iter().zip(&base).all(|(&s, &b)| tol.close_complex(s / lead, b));
    let vanishes = roots.roots().iter().all(|&a| scaled_residual(&scaled, a) <= tol.rel);
    let vieta = (scaled[0] / lead).norm();
    let measure_kept = tol.close(vieta, measure(roots));
    Ok(normalizes && vanishes && measure_kept)
}
