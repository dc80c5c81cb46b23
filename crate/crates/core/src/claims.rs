//! One checker per stated bound: evaluate the hypotheses, evaluate the
//! conclusion, classify the instance.
//!
//! All checkers except the product property take strictly positive real zeros
//! and expand about the least zero `a_j`. The common hypothesis is that
//! `P(x) / (x - a_j)` is `eps`-limited, i.e. `prod_{i != j} a_i < eps`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::critical::{critical_points, higher_derivative_zeros};
use crate::error::{Error, Result};
use crate::expansion::{index_bound_check, local_expansion_min, LocalExpansion};
use crate::measure::{check_product_proposition, measure};
use crate::poly::{derivative_at_order_coeffs, permutation_sum_derivative, MonicPolynomial, RootMultiset};
use crate::scalar::{real, Scalar, Tolerance};
use crate::verdict::{Check, ClaimId, ClaimVerdict};

/// Default allowance for the `|s_t| = 1/t` index condition, relative to `1 + 1/t`.
pub const DEFAULT_INDEX_BAND: f64 = 1e-9;

pub const STIRLING_MAX_N: usize = 120;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StirlingBound {
    pub n: usize,
    /// `sum_{k=1}^n k!`
    pub factorial_sum: f64,
    /// `sqrt(2 pi) sum_{k=1}^n e^{-k} k^{k + 1/2}`
    pub stirling_sum: f64,
    /// Whether `stirling_sum < factorial_sum`, as expected from Stirling's
    /// formula underestimating `k!`.
    pub stirling_below_factorial: bool,
}

/// Both sums accumulated from log-domain terms, for `1 <= n <= 120`.
pub fn stirling_bound_compare(n: usize) -> Result<StirlingBound> {
    if n == 0 || n > STIRLING_MAX_N {
        return Err(Error::StirlingRange { n });
    }
    let half_log_tau = 0.5 * std::f64::consts::TAU.ln();
    let mut log_factorial = 0.0;
    let mut factorial_sum = 0.0;
    let mut stirling_sum = 0.0;
    for k in 1..=n {
        let kf = k as f64;
        log_factorial += kf.ln();
        factorial_sum += log_factorial.exp();
        stirling_sum += (half_log_tau - kf + (kf + 0.5) * kf.ln()).exp();
    }
    Ok(StirlingBound {
        n,
        factorial_sum,
        stirling_sum,
        stirling_below_factorial: stirling_sum < factorial_sum,
    })
}

/// Shared setup for the positive-real checkers.
struct Instance<T> {
    poly: MonicPolynomial<T>,
    expansion: LocalExpansion<T>,
    /// `a_j`, the least zero.
    center: T,
    /// `prod_{i != j} a_i`.
    quotient_measure: f64,
}

impl<T: Scalar> Instance<T> {
    fn new(roots: &RootMultiset<T>) -> Result<Self> {
        let expansion = local_expansion_min(roots)?;
        if roots.len() < 2 {
            return Err(Error::DegreeBelow {
                required: 2,
                actual: roots.len(),
            });
        }
        let quotient = roots.without(expansion.center_index).expect("at least two roots");
        Ok(Self {
            poly: MonicPolynomial::from_roots(roots),
            center: expansion.center,
            quotient_measure: measure(&quotient).as_f64(),
            expansion,
        })
    }

    fn n(&self) -> usize {
        self.poly.degree()
    }

    fn limited_hypothesis(&self, name: &str, eps: f64, tol: &Tolerance<f64>) -> Check {
        Check::strict_upper(name, self.quotient_measure, eps, tol)
    }

    /// `sum_{s=1}^n |P^(s)(a_j)|`
    fn derivative_sum(&self) -> f64 {
        let z = real(self.center);
        (1..=self.n())
            .map(|s| self.poly.derivative_at_order(s, z).norm().as_f64())
            .sum()
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositive { name, value })
    }
}

/// Zeros positive, `P / (x - a_j)` 1-limited, and every index `|s_t| = 1/t`
/// together should put every critical point within unit distance of `a_j`.
///
/// The index condition is an exact equality; `index_band` is the relative
/// allowance `| |s_t| - 1/t | <= index_band * (1 + 1/t)` under which it counts
/// as met.
pub fn check_real_case<T: Scalar>(
    roots: &RootMultiset<T>,
    tol: &Tolerance<T>,
    index_band: f64,
) -> Result<ClaimVerdict> {
    positive("index band", index_band)?;
    let tol = tol.to_f64();
    let inst = Instance::new(roots)?;
    let n = inst.n();

    let deviation = (1..n)
        .map(|t| {
            let target = 1.0 / t as f64;
            (inst.expansion.index(t).abs().as_f64() - target).abs() / (1.0 + target)
        })
        .fold(0.0, f64::max);
    let hypotheses = vec![
        inst.limited_hypothesis("one_limited_quotient", 1.0, &tol),
        Check::within("index_condition", deviation, index_band, &tol),
    ];

    let crit = critical_points(&inst.poly)?;
    let a_j = real(inst.center);
    let max_distance = crit
        .points
        .iter()
        .map(|b| (b - a_j).norm().as_f64())
        .fold(0.0, f64::max);
    let conclusion = Check::strict_upper("critical_points_within_unit", max_distance, 1.0, &tol);
    Ok(ClaimVerdict::new(ClaimId::RealCase, hypotheses, conclusion))
}

/// `sum_{s=1}^n |P^(s)(a_j)| < eps sqrt(2 pi) sum e^{-k} k^{k+1/2}` under the
/// `eps`-limited quotient hypothesis. The intermediate links of the argument
/// are reported as auxiliary checks, none of them assumed.
pub fn check_basic_inequality<T: Scalar>(
    roots: &RootMultiset<T>,
    eps: f64,
    tol: &Tolerance<T>,
) -> Result<ClaimVerdict> {
    positive("epsilon", eps)?;
    let tol = tol.to_f64();
    let inst = Instance::new(roots)?;
    let n = inst.n();
    let stirling = stirling_bound_compare(n)?;

    let derivative_sum = inst.derivative_sum();
    let mut factorial = 1.0;
    let mut index_sum = 0.0;
    for k in 1..=n {
        factorial *= k as f64;
        index_sum += factorial * inst.expansion.index(k).abs().as_f64();
    }
    let max_index = inst
        .expansion
        .coeffs
        .iter()
        .map(|s| s.abs().as_f64())
        .fold(0.0, f64::max);
    let factorial_bound = eps * stirling.factorial_sum;
    let stirling_bound = eps * stirling.stirling_sum;

    let hypotheses = vec![inst.limited_hypothesis("epsilon_limited_quotient", eps, &tol)];
    let conclusion = Check::strict_upper(
        "derivative_sum_below_stirling_bound",
        derivative_sum,
        stirling_bound,
        &tol,
    );
    let auxiliary = vec![
        Check::identity("derivative_sum_equals_index_sum", derivative_sum, index_sum, &tol),
        Check::strict_upper("indices_below_epsilon", max_index, eps, &tol),
        Check::strict_upper("index_sum_below_factorial_bound", index_sum, factorial_bound, &tol),
        Check::strict_upper(
            "factorial_bound_below_stirling_bound",
            factorial_bound,
            stirling_bound,
            &tol,
        ),
    ];
    Ok(ClaimVerdict::new(ClaimId::BasicInequality, hypotheses, conclusion).with_auxiliary(auxiliary))
}

/// Every zero of every derivative `P^(k)`, `1 <= k <= n - 1`, within `delta`
/// of `a_j`. The attained maximum distance is the conclusion's `attained`.
pub fn check_squeeze<T: Scalar>(
    roots: &RootMultiset<T>,
    eps: f64,
    delta: f64,
    tol: &Tolerance<T>,
) -> Result<ClaimVerdict> {
    positive("epsilon", eps)?;
    positive("delta", delta)?;
    let tol = tol.to_f64();
    let inst = Instance::new(roots)?;
    let a_j = real(inst.center);

    let mut max_distance = 0.0f64;
    for k in 1..inst.n() {
        let zeros = higher_derivative_zeros(&inst.poly, k)?;
        for b in &zeros.points {
            max_distance = max_distance.max((b - a_j).norm().as_f64());
        }
    }
    let hypotheses = vec![inst.limited_hypothesis("epsilon_limited_quotient", eps, &tol)];
    let conclusion = Check::strict_upper("derivative_zeros_within_delta", max_distance, delta, &tol);
    Ok(ClaimVerdict::new(ClaimId::Squeeze, hypotheses, conclusion))
}

/// `|P'(a_j)| < eps sqrt(2 pi) / e`, with `P'(a_j)` taken from the product-rule
/// sum and cross-checked against `prod_{i != j} (a_j - a_i)`.
pub fn check_perm_sum_bound<T: Scalar>(roots: &RootMultiset<T>, eps: f64, tol: &Tolerance<T>) -> Result<ClaimVerdict> {
    positive("epsilon", eps)?;
    let tol = tol.to_f64();
    let inst = Instance::new(roots)?;
    let a_j = real(inst.center);
    let j = inst.expansion.center_index;

    let sum = permutation_sum_derivative(roots, a_j)?;
    let product = roots
        .roots()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .fold(Complex::new(T::one(), T::zero()), |acc, (_, &a)| acc * (a_j - a));
    let bound = eps * std::f64::consts::TAU.sqrt() / std::f64::consts::E;

    let hypotheses = vec![inst.limited_hypothesis("epsilon_limited_quotient", eps, &tol)];
    let conclusion = Check::strict_upper("derivative_at_least_zero_below_bound", sum.norm().as_f64(), bound, &tol);
    let auxiliary = vec![Check::identity(
        "product_rule_matches_product_form",
        sum.re.as_f64(),
        product.re.as_f64(),
        &tol,
    )];
    Ok(ClaimVerdict::new(ClaimId::PermSumBound, hypotheses, conclusion).with_auxiliary(auxiliary))
}

/// `sum_{s=0}^{n-1} |(P')^(s)(a_j)| < eps sqrt(2 pi) sum e^{-k} k^{k+1/2}`.
pub fn check_deriv_sum_bound<T: Scalar>(roots: &RootMultiset<T>, eps: f64, tol: &Tolerance<T>) -> Result<ClaimVerdict> {
    positive("epsilon", eps)?;
    let tol = tol.to_f64();
    let inst = Instance::new(roots)?;
    let n = inst.n();
    let stirling = stirling_bound_compare(n)?;
    let derivative = inst.poly.derivative();
    let a_j = real(inst.center);
    let lhs: f64 = (0..n)
        .map(|s| derivative_at_order_coeffs(&derivative, s, a_j).norm().as_f64())
        .sum();

    let hypotheses = vec![inst.limited_hypothesis("epsilon_limited_quotient", eps, &tol)];
    let conclusion = Check::strict_upper(
        "derivative_sum_below_stirling_bound",
        lhs,
        eps * stirling.stirling_sum,
        &tol,
    );
    Ok(ClaimVerdict::new(ClaimId::DerivSumBound, hypotheses, conclusion))
}

/// `|s_k| < prod_{i != j} |a_i|` for every index `1 <= k <= n - 1` of the
/// expansion about the least zero. No hypotheses beyond positivity.
pub fn check_index_bound<T: Scalar>(roots: &RootMultiset<T>, tol: &Tolerance<T>) -> Result<ClaimVerdict> {
    let tol = tol.to_f64();
    let inst = Instance::new(roots)?;
    let report = index_bound_check(&inst.expansion, roots);
    let worst = report.worst().map_or(0.0, |e| e.magnitude);
    let conclusion = Check::strict_upper("indices_below_product_bound", worst, report.bound, &tol);
    Ok(ClaimVerdict::new(ClaimId::IndexBound, Vec::new(), conclusion))
}

/// Inputs for [`verify_claim`].
#[derive(Debug, Clone)]
pub struct ClaimParams<T> {
    pub eps: f64,
    pub delta: f64,
    /// Second factor for the product property.
    pub q_roots: Option<RootMultiset<T>>,
    pub tol: Tolerance<T>,
    pub index_band: f64,
}

impl<T: Scalar> Default for ClaimParams<T> {
    fn default() -> Self {
        Self {
            eps: 1.0,
            delta: 1.0,
            q_roots: None,
            tol: Tolerance::default(),
            index_band: DEFAULT_INDEX_BAND,
        }
    }
}

pub fn verify_claim<T: Scalar>(
    claim: ClaimId,
    roots: &RootMultiset<T>,
    params: &ClaimParams<T>,
) -> Result<ClaimVerdict> {
    let tol = &params.tol;
    match claim {
        ClaimId::RealCase => check_real_case(roots, tol, params.index_band),
        ClaimId::BasicInequality => check_basic_inequality(roots, params.eps, tol),
        ClaimId::Squeeze => check_squeeze(roots, params.eps, params.delta, tol),
        ClaimId::PermSumBound => check_perm_sum_bound(roots, params.eps, tol),
        ClaimId::DerivSumBound => check_deriv_sum_bound(roots, params.eps, tol),
        ClaimId::IndexBound => check_index_bound(roots, tol),
        ClaimId::ProductProp => {
            let q = params
                .q_roots
                .as_ref()
                .ok_or_else(|| Error::InvalidConfig("the product property needs a second root set".into()))?;
            check_product_proposition(roots, q, T::lit(params.eps), T::lit(params.delta), tol)
        }
    }
}
