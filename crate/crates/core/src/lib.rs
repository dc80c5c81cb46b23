//! Measure and epsilon-limitedness of monic polynomials, local expansions
//! about an extremal zero, critical-point location, and executable checkers
//! for bounds relating the zeros of a polynomial to those of its derivatives.
//!
//! The numerical core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the claim sweeps and the CLI use.

// `!(x > 0)` style tests are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod claims;
pub mod critical;
pub mod error;
pub mod expansion;
pub mod measure;
pub mod poly;
pub mod scalar;
pub mod search;
pub mod verdict;

pub use num_complex::Complex;

pub use claims::{
    check_basic_inequality, check_deriv_sum_bound, check_index_bound, check_perm_sum_bound, check_real_case,
    check_squeeze, stirling_bound_compare, verify_claim, ClaimParams, StirlingBound,
};
pub use critical::{critical_points, higher_derivative_zeros, sendov_distances, SolveMethod};
pub use error::{Error, Result};
pub use expansion::{
    index_bound_check, local_expansion_max_plus, local_expansion_min, min_pair_lemma, ExpansionForm, IndexBoundReport,
};
pub use measure::{
    check_product_proposition, conjugate_roots, is_epsilon_limited, measure, rescale_roots, scalar_multiple_invariance,
};
pub use poly::permutation_sum_derivative;
pub use scalar::Scalar;
pub use search::{
    complex_pullback_check, generate_roots, modulus_projection, run_search, run_search_shard, Distribution,
    EpsilonPolicy, SearchConfig, SearchReport,
};
pub use verdict::{Check, ClaimId, ClaimVerdict, Classification};

pub type Roots = poly::RootMultiset<f64>;
pub type Polynomial = poly::MonicPolynomial<f64>;
pub type Expansion = expansion::LocalExpansion<f64>;
pub type CriticalSet = critical::CriticalSet<f64>;
pub type SendovDistances = critical::SendovDistances<f64>;
pub type Tolerance = scalar::Tolerance<f64>;
pub type Limitedness = measure::Limitedness<f64>;
pub type PullbackReport = search::PullbackReport<f64>;
pub type C64 = Complex<f64>;

pub type Roots32 = poly::RootMultiset<f32>;
pub type Polynomial32 = poly::MonicPolynomial<f32>;
pub type Tolerance32 = scalar::Tolerance<f32>;
