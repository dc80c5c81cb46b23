use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::scalar::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClaimId {
    RealCase,
    BasicInequality,
    Squeeze,
    PermSumBound,
    DerivSumBound,
    IndexBound,
    ProductProp,
}

impl ClaimId {
    pub const ALL: [ClaimId; 7] = [
        ClaimId::RealCase,
        ClaimId::BasicInequality,
        ClaimId::Squeeze,
        ClaimId::PermSumBound,
        ClaimId::DerivSumBound,
        ClaimId::IndexBound,
        ClaimId::ProductProp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClaimId::RealCase => "REAL_CASE",
            ClaimId::BasicInequality => "BASIC_INEQUALITY",
            ClaimId::Squeeze => "SQUEEZE",
            ClaimId::PermSumBound => "PERM_SUM_BOUND",
            ClaimId::DerivSumBound => "DERIV_SUM_BOUND",
            ClaimId::IndexBound => "INDEX_BOUND",
            ClaimId::ProductProp => "PRODUCT_PROP",
        }
    }

    /// Whether the checker needs strictly positive real zeros.
    pub fn needs_positive_reals(self) -> bool {
        !matches!(self, ClaimId::ProductProp)
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownClaim(pub String);

impl fmt::Display for UnknownClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = ClaimId::ALL.iter().map(|c| c.name().to_lowercase()).collect();
        write!(f, "unknown claim '{}'; valid claims: {}", self.0, names.join(", "))
    }
}

impl std::error::Error for UnknownClaim {}

impl FromStr for ClaimId {
    type Err = UnknownClaim;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted = s.trim().replace('-', "_").to_uppercase();
        ClaimId::ALL
            .into_iter()
            .find(|c| c.name() == wanted)
            .ok_or_else(|| UnknownClaim(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    HypothesesNotMet,
    Confirmed,
    Counterexample,
}

/// One strict inequality `attained < bound` (or an equality condition expressed
/// as a deviation below an allowance).
///
/// `margin` is signed: positive means satisfied with room to spare. `band` is
/// the tolerance within which the margin is considered noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
    pub attained: f64,
    pub bound: f64,
    pub margin: f64,
    pub band: f64,
}

impl Check {
    /// `attained < bound`, strict.
    pub fn strict_upper(name: &str, attained: f64, bound: f64, tol: &Tolerance<f64>) -> Self {
        Self {
            name: name.to_string(),
            holds: attained < bound,
            attained,
            bound,
            margin: bound - attained,
            band: tol.band(attained, bound),
        }
    }

    /// `attained <= bound`; used for equality conditions phrased as a deviation.
    pub fn within(name: &str, attained: f64, bound: f64, tol: &Tolerance<f64>) -> Self {
        Self {
            holds: attained <= bound,
            ..Self::strict_upper(name, attained, bound, tol)
        }
    }

    /// Two routes to the same quantity agree to tolerance.
    pub fn identity(name: &str, lhs: f64, rhs: f64, tol: &Tolerance<f64>) -> Self {
        let band = tol.band(lhs, rhs);
        let gap = (lhs - rhs).abs();
        Self {
            name: name.to_string(),
            holds: gap <= band,
            attained: lhs,
            bound: rhs,
            margin: band - gap,
            band,
        }
    }

    pub fn decisively_met(&self) -> bool {
        self.holds && self.margin > self.band
    }

    pub fn decisively_failed(&self) -> bool {
        !self.holds && self.margin < -self.band
    }
}

/// Outcome of checking one claim on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimVerdict {
    pub claim_id: ClaimId,
    pub hypotheses: Vec<Check>,
    pub conclusion: Check,
    pub classification: Classification,
    /// Set when hypotheses hold and a margin sits inside its tolerance band, so
    /// the instance could not be classified decisively.
    pub boundary: bool,
    /// Auxiliary identities and proof-chain links, reported but not classified.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub auxiliary: Vec<Check>,
}

impl ClaimVerdict {
    pub fn new(claim_id: ClaimId, hypotheses: Vec<Check>, conclusion: Check) -> Self {
        let (classification, boundary) = classify(&hypotheses, &conclusion);
        Self {
            claim_id,
            hypotheses,
            conclusion,
            classification,
            boundary,
            auxiliary: Vec::new(),
        }
    }

    pub fn with_auxiliary(mut self, auxiliary: Vec<Check>) -> Self {
        self.auxiliary = auxiliary;
        self
    }

    pub fn auxiliary_check(&self, name: &str) -> Option<&Check> {
        self.auxiliary.iter().find(|c| c.name == name)
    }

    pub fn hypothesis(&self, name: &str) -> Option<&Check> {
        self.hypotheses.iter().find(|c| c.name == name)
    }
}

/// A counterexample needs every hypothesis met beyond its band and the
/// conclusion failed beyond its band. Anything else with the hypotheses met is
/// confirmed, flagged as boundary when undecided.
pub fn classify(hypotheses: &[Check], conclusion: &Check) -> (Classification, bool) {
    if !hypotheses.iter().all(|h| h.holds) {
        return (Classification::HypothesesNotMet, false);
    }
    let hyps_decisive = hypotheses.iter().all(Check::decisively_met);
    if hyps_decisive && conclusion.decisively_failed() {
        return (Classification::Counterexample, false);
    }
    let boundary = !hyps_decisive || !(conclusion.decisively_met() || conclusion.decisively_failed());
    (Classification::Confirmed, boundary)
}
