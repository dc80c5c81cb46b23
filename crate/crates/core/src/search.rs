//! Seeded randomized sweeps over claim checkers, counterexample capture, and
//! the complex-to-real modulus projection.
//!
//! Every sample draws from its own ChaCha20 stream (`seed`, stream = sample
//! index), so a sweep can be split into shards in any way and the merged
//! report is identical to the single-shot one.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex;
pub use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::claims::{verify_claim, ClaimParams, DEFAULT_INDEX_BAND, STIRLING_MAX_N};
use crate::critical::{critical_points, sendov_distances, CriticalSet, SendovDistances};
use crate::error::{Error, Result};
use crate::measure::measure;
use crate::poly::{MonicPolynomial, RootMultiset};
use crate::scalar::{real, Scalar, Tolerance};
use crate::verdict::{ClaimId, ClaimVerdict, Classification};

/// Identifies the generator and the way it is consumed, so reports can be
/// reproduced by another implementation of the same generator.
pub const RNG_ALGORITHM: &str = "chacha20 (rand_core seed_from_u64); stream = sample index; unit = (u64 >> 11) * 2^-53";

pub const DEFAULT_COUNTEREXAMPLE_CAP: usize = 100;
const FAILURE_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Distribution {
    Uniform { lo: f64, hi: f64 },
    LogUniform { lo: f64, hi: f64 },
    ComplexDisk { radius: f64 },
}

impl Distribution {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        match *self {
            Distribution::Uniform { lo, hi } | Distribution::LogUniform { lo, hi } => {
                if !(lo > 0.0 && lo.is_finite() && hi.is_finite()) {
                    return bad(format!(
                        "distribution lower bound must be positive and finite, got {lo}"
                    ));
                }
                if hi < lo {
                    return bad(format!("distribution bounds out of order: {lo} > {hi}"));
                }
                Ok(())
            }
            Distribution::ComplexDisk { radius } => {
                if radius > 0.0 && radius.is_finite() {
                    Ok(())
                } else {
                    bad(format!("disk radius must be positive and finite, got {radius}"))
                }
            }
        }
    }

    pub fn is_real(&self) -> bool {
        !matches!(self, Distribution::ComplexDisk { .. })
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distribution::Uniform { lo, hi } => write!(f, "uniform:{lo},{hi}"),
            Distribution::LogUniform { lo, hi } => write!(f, "log-uniform:{lo},{hi}"),
            Distribution::ComplexDisk { radius } => write!(f, "complex-disk:{radius}"),
        }
    }
}

fn parse_f64(token: &str, what: &str) -> Result<f64> {
    token
        .trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("cannot parse {what} '{token}'")))
}

impl FromStr for Distribution {
    type Err = Error;

    /// `uniform:LO,HI`, `log-uniform:LO,HI`, or `complex-disk:R` (alias `disk:R`).
    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidConfig(format!("distribution '{s}' lacks ':' parameters")))?;
        let pair = || -> Result<(f64, f64)> {
            let (lo, hi) = args
                .split_once(',')
                .ok_or_else(|| Error::InvalidConfig(format!("distribution '{s}' needs LO,HI")))?;
            Ok((parse_f64(lo, "lower bound")?, parse_f64(hi, "upper bound")?))
        };
        let dist = match kind.trim().to_ascii_lowercase().as_str() {
            "uniform" => {
                let (lo, hi) = pair()?;
                Distribution::Uniform { lo, hi }
            }
            "log-uniform" | "loguniform" => {
                let (lo, hi) = pair()?;
                Distribution::LogUniform { lo, hi }
            }
            "complex-disk" | "disk" => Distribution::ComplexDisk {
                radius: parse_f64(args, "radius")?,
            },
            other => return Err(Error::InvalidConfig(format!("unknown distribution '{other}'"))),
        };
        dist.validate()?;
        Ok(dist)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EpsilonPolicy {
    Fixed {
        value: f64,
    },
    /// `eps = factor * prod_{i != j} |a_i|`, so `factor > 1` makes the
    /// limitedness hypothesis hold by construction.
    MeasureTimes {
        factor: f64,
    },
}

impl fmt::Display for EpsilonPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpsilonPolicy::Fixed { value } => write!(f, "fixed:{value}"),
            EpsilonPolicy::MeasureTimes { factor } => write!(f, "measure-times:{factor}"),
        }
    }
}

impl FromStr for EpsilonPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidConfig(format!("epsilon policy '{s}' lacks ':' parameter")))?;
        let v = parse_f64(arg, "epsilon policy parameter")?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "epsilon policy parameter must be positive, got {v}"
            )));
        }
        match kind.trim().to_ascii_lowercase().as_str() {
            "fixed" => Ok(EpsilonPolicy::Fixed { value: v }),
            "measure-times" => Ok(EpsilonPolicy::MeasureTimes { factor: v }),
            other => Err(Error::InvalidConfig(format!("unknown epsilon policy '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub claim: ClaimId,
    pub degree_min: usize,
    pub degree_max: usize,
    pub samples: u64,
    pub seed: u64,
    pub distribution: Distribution,
    pub epsilon_policy: EpsilonPolicy,
    pub delta: f64,
    pub index_band: f64,
    pub tolerance_abs: f64,
    pub tolerance_rel: f64,
    pub counterexample_cap: usize,
}

impl SearchConfig {
    pub fn new(claim: ClaimId, degree: usize, samples: u64, seed: u64, distribution: Distribution) -> Self {
        let tol = Tolerance::<f64>::default();
        Self {
            claim,
            degree_min: degree,
            degree_max: degree,
            samples,
            seed,
            distribution,
            epsilon_policy: EpsilonPolicy::Fixed { value: 1.0 },
            delta: 1.0,
            index_band: DEFAULT_INDEX_BAND,
            tolerance_abs: tol.abs,
            tolerance_rel: tol.rel,
            counterexample_cap: DEFAULT_COUNTEREXAMPLE_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.samples == 0 {
            return bad("samples must be at least 1".into());
        }
        if self.degree_min < 2 {
            return bad(format!("minimum degree must be at least 2, got {}", self.degree_min));
        }
        if self.degree_max < self.degree_min {
            return bad(format!(
                "degree range {}..{} is empty",
                self.degree_min, self.degree_max
            ));
        }
        if self.degree_max > STIRLING_MAX_N {
            return bad(format!("maximum degree {} exceeds {STIRLING_MAX_N}", self.degree_max));
        }
        self.distribution.validate()?;
        if self.claim.needs_positive_reals() && !self.distribution.is_real() {
            return bad(format!(
                "claim {} needs positive real zeros; use a real distribution",
                self.claim
            ));
        }
        for (name, v) in [("delta", self.delta), ("index band", self.index_band)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if !(self.tolerance_abs >= 0.0 && self.tolerance_rel >= 0.0) {
            return bad("tolerances must be nonnegative".into());
        }
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        short_hash(json.as_bytes())
    }

    fn tolerance(&self) -> Tolerance<f64> {
        Tolerance::new(self.tolerance_abs, self.tolerance_rel)
    }
}

fn short_hash(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Hash of the bit patterns of an instance's roots.
pub fn instance_hash(roots: &RootMultiset<f64>) -> String {
    let bytes: Vec<u8> = roots
        .roots()
        .iter()
        .flat_map(|z| z.re.to_le_bytes().into_iter().chain(z.im.to_le_bytes()))
        .collect();
    short_hash(&bytes)
}

/// The generator for sample `index` of a sweep seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform on `[0, 1)` from the top 53 bits of one draw.
pub fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// `n` independent draws. Real distributions give positive reals.
pub fn generate_roots(dist: &Distribution, n: usize, rng: &mut impl RngCore) -> Result<RootMultiset<f64>> {
    dist.validate()?;
    if n == 0 {
        return Err(Error::EmptyRoots);
    }
    let roots = (0..n)
        .map(|_| match *dist {
            Distribution::Uniform { lo, hi } => Complex::new(lo + (hi - lo) * unit_f64(rng), 0.0),
            Distribution::LogUniform { lo, hi } => {
                let (a, b) = (lo.ln(), hi.ln());
                Complex::new((a + (b - a) * unit_f64(rng)).exp(), 0.0)
            }
            Distribution::ComplexDisk { radius } => {
                let r = radius * unit_f64(rng).sqrt();
                let theta = std::f64::consts::TAU * unit_f64(rng);
                Complex::from_polar(r, theta)
            }
        })
        .collect();
    RootMultiset::new(roots)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub hypotheses_not_met: u64,
    pub confirmed: u64,
    pub counterexample: u64,
    pub solver_failure: u64,
    /// Confirmed instances that sat inside a tolerance band.
    pub boundary: u64,
}

impl Counts {
    pub fn total(&self) -> u64 {
        self.hypotheses_not_met + self.confirmed + self.counterexample + self.solver_failure
    }

    fn add(&mut self, other: &Counts) {
        self.hypotheses_not_met += other.hypotheses_not_met;
        self.confirmed += other.confirmed;
        self.counterexample += other.counterexample;
        self.solver_failure += other.solver_failure;
        self.boundary += other.boundary;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleRecord {
    pub sample_index: u64,
    pub instance_hash: String,
    pub roots: RootMultiset<f64>,
    pub eps: f64,
    pub delta: f64,
    pub verdict: ClaimVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub sample_index: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub config_hash: String,
    pub rng_algorithm: String,
    pub samples_run: u64,
    pub counts: Counts,
    /// Kept counterexamples, ordered by `(instance_hash, sample_index)` and
    /// capped at `config.counterexample_cap`.
    pub counterexamples: Vec<CounterexampleRecord>,
    pub counterexamples_dropped: u64,
    /// First failures by sample index.
    pub failures: Vec<FailureRecord>,
    /// Per degree, counts of conclusion margins by signed decade.
    pub margin_histograms: BTreeMap<usize, BTreeMap<String, u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl SearchReport {
    fn empty(config: &SearchConfig) -> Self {
        Self {
            config: config.clone(),
            config_hash: config.hash(),
            rng_algorithm: RNG_ALGORITHM.to_string(),
            samples_run: 0,
            counts: Counts::default(),
            counterexamples: Vec::new(),
            counterexamples_dropped: 0,
            failures: Vec::new(),
            margin_histograms: BTreeMap::new(),
            wall_time_ms: None,
        }
    }

    /// Combines two shard reports of the same sweep. Associative and
    /// commutative; merging every shard reproduces the single-shot report.
    pub fn merge(mut self, other: SearchReport) -> Result<SearchReport> {
        if self.config_hash != other.config_hash {
            return Err(Error::InvalidConfig(format!(
                "cannot merge reports of different sweeps ({} vs {})",
                self.config_hash, other.config_hash
            )));
        }
        self.samples_run += other.samples_run;
        self.counts.add(&other.counts);
        self.counterexamples.extend(other.counterexamples);
        self.failures.extend(other.failures);
        for (degree, hist) in other.margin_histograms {
            let mine = self.margin_histograms.entry(degree).or_default();
            for (bin, count) in hist {
                *mine.entry(bin).or_default() += count;
            }
        }
        self.wall_time_ms = match (self.wall_time_ms, other.wall_time_ms) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        self.normalize();
        Ok(self)
    }

    fn normalize(&mut self) {
        let cap = self.config.counterexample_cap;
        self.counterexamples
            .sort_by(|a, b| (&a.instance_hash, a.sample_index).cmp(&(&b.instance_hash, b.sample_index)));
        self.counterexamples.truncate(cap);
        self.counterexamples_dropped = self.counts.counterexample - self.counterexamples.len() as u64;
        self.failures.sort_by_key(|f| f.sample_index);
        self.failures.truncate(FAILURE_CAP);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Signed-decade histogram bin of a margin, e.g. `+1e-03` or `-1e+02`.
pub fn margin_bin(margin: f64) -> String {
    if margin.is_nan() {
        return "nan".into();
    }
    if margin == 0.0 {
        return "0".into();
    }
    let sign = if margin > 0.0 { '+' } else { '-' };
    if margin.is_infinite() {
        return format!("{sign}inf");
    }
    let decade = margin.abs().log10().floor().clamp(-12.0, 12.0) as i32;
    format!("{sign}1e{decade:+03}")
}

enum Outcome {
    Verdict {
        degree: usize,
        roots: RootMultiset<f64>,
        eps: f64,
        delta: f64,
        verdict: ClaimVerdict,
    },
    Failure(String),
}

fn run_sample(config: &SearchConfig, index: u64) -> Outcome {
    let mut rng = sample_rng(config.seed, index);
    let span = (config.degree_max - config.degree_min + 1) as f64;
    let degree = config.degree_min + ((unit_f64(&mut rng) * span) as usize).min(config.degree_max - config.degree_min);
    let roots = match generate_roots(&config.distribution, degree, &mut rng) {
        Ok(r) => r,
        Err(e) => return Outcome::Failure(e.to_string()),
    };

    let mut params = ClaimParams {
        eps: 1.0,
        delta: config.delta,
        q_roots: None,
        tol: config.tolerance(),
        index_band: config.index_band,
    };
    let mut subject = roots.clone();
    if config.claim == ClaimId::ProductProp {
        let split = degree / 2;
        let p = RootMultiset::new(roots.roots()[..split].to_vec());
        let q = RootMultiset::new(roots.roots()[split..].to_vec());
        let (Ok(p), Ok(q)) = (p, q) else {
            return Outcome::Failure("cannot split instance into two factors".into());
        };
        match config.epsilon_policy {
            EpsilonPolicy::Fixed { value } => params.eps = value,
            EpsilonPolicy::MeasureTimes { factor } => {
                params.eps = factor * measure(&p);
                params.delta = factor * measure(&q);
            }
        }
        subject = p;
        params.q_roots = Some(q);
    } else {
        params.eps = match config.epsilon_policy {
            EpsilonPolicy::Fixed { value } => value,
            EpsilonPolicy::MeasureTimes { factor } => {
                let j = crate::critical::reference_zero_index(&roots);
                factor * roots.without(j).map_or(1.0, |q| measure(&q))
            }
        };
    }

    match verify_claim(config.claim, &subject, &params) {
        Ok(verdict) => Outcome::Verdict {
            degree,
            roots,
            eps: params.eps,
            delta: params.delta,
            verdict,
        },
        Err(e) => Outcome::Failure(e.to_string()),
    }
}

fn absorb(report: &mut SearchReport, index: u64, outcome: Outcome) {
    report.samples_run += 1;
    match outcome {
        Outcome::Failure(message) => {
            report.counts.solver_failure += 1;
            report.failures.push(FailureRecord {
                sample_index: index,
                message,
            });
        }
        Outcome::Verdict {
            degree,
            roots,
            eps,
            delta,
            verdict,
        } => {
            *report
                .margin_histograms
                .entry(degree)
                .or_default()
                .entry(margin_bin(verdict.conclusion.margin))
                .or_default() += 1;
            match verdict.classification {
                Classification::HypothesesNotMet => report.counts.hypotheses_not_met += 1,
                Classification::Confirmed => {
                    report.counts.confirmed += 1;
                    if verdict.boundary {
                        report.counts.boundary += 1;
                    }
                }
                Classification::Counterexample => {
                    report.counts.counterexample += 1;
                    report.counterexamples.push(CounterexampleRecord {
                        sample_index: index,
                        instance_hash: instance_hash(&roots),
                        roots,
                        eps,
                        delta,
                        verdict,
                    });
                }
            }
        }
    }
}

/// Runs the samples `i` with `i % shard_count == shard_index`.
pub fn run_search_shard(config: &SearchConfig, shard_index: u64, shard_count: u64) -> Result<SearchReport> {
    config.validate()?;
    if shard_count == 0 || shard_index >= shard_count {
        return Err(Error::InvalidConfig(format!(
            "shard {shard_index} of {shard_count} is not valid"
        )));
    }
    let indices: Vec<u64> = (shard_index..config.samples).step_by(shard_count as usize).collect();
    let empty = || SearchReport::empty(config);
    indices
        .par_chunks(256)
        .map(|chunk| {
            let mut report = empty();
            for &i in chunk {
                absorb(&mut report, i, run_sample(config, i));
            }
            report.normalize();
            report
        })
        .map(Ok)
        .reduce(|| Ok(empty()), |a, b| a?.merge(b?))
}

pub fn run_search(config: &SearchConfig) -> Result<SearchReport> {
    run_search_shard(config, 0, 1)
}

/// One line of the counterexample log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRecord {
    pub config_hash: String,
    #[serde(flatten)]
    pub record: CounterexampleRecord,
}

/// Appends one JSON line per kept counterexample. Returns the number written.
pub fn append_counterexample_log(path: &Path, report: &SearchReport) -> Result<usize> {
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut buf = Vec::new();
    for record in &report.counterexamples {
        let line = LogRecord {
            config_hash: report.config_hash.clone(),
            record: record.clone(),
        };
        serde_json::to_writer(&mut buf, &line).map_err(|e| Error::Io(e.to_string()))?;
        buf.push(b'\n');
    }
    file.write_all(&buf)?;
    Ok(report.counterexamples.len())
}

pub fn read_counterexample_log(path: &Path) -> Result<Vec<LogRecord>> {
    let file = std::fs::File::open(path)?;
    BufReader::new(file)
        .lines()
        .filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty()))
        .map(|line| {
            let line = line?;
            serde_json::from_str(&line).map_err(|e| Error::Io(e.to_string()))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusProjection<T> {
    /// `|a_i|` as real roots.
    pub roots: RootMultiset<T>,
    /// Indices whose modulus is zero (not positive, so no positive-real view).
    pub zero_moduli: Vec<usize>,
}

/// Replaces every zero by its modulus. Measure is preserved exactly.
pub fn modulus_projection<T: Scalar>(roots: &RootMultiset<T>) -> ModulusProjection<T> {
    let zero_moduli = roots
        .roots()
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm() == T::zero())
        .map(|(i, _)| i)
        .collect();
    ModulusProjection {
        roots: roots.map(|z| real(z.norm())),
        zero_moduli,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectedSide<T> {
    pub roots: Vec<T>,
    pub critical_points: Vec<T>,
    /// Distances from `|a_j|` to the critical points of the projected polynomial.
    pub distances: Vec<T>,
}

/// Diagnostic comparison of a complex-rooted polynomial with its modulus
/// projection, measured from the zero `a_j` of least modulus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PullbackReport<T> {
    pub reference_index: usize,
    pub reference_root: Complex<T>,
    pub critical: CriticalSet<T>,
    pub distances: SendovDistances<T>,
    /// `min_b |b - a_j|` over the true critical points.
    pub min_distance: T,
    pub slack: T,
    /// `min_distance < 1 + slack`.
    pub within_slack: bool,
    pub projected: ProjectedSide<T>,
    pub zero_moduli: Vec<usize>,
}

pub fn complex_pullback_check<T: Scalar>(roots: &RootMultiset<T>, slack: T) -> Result<PullbackReport<T>> {
    if roots.len() < 2 {
        return Err(Error::DegreeBelow {
            required: 2,
            actual: roots.len(),
        });
    }
    if !(slack >= T::zero()) {
        return Err(Error::NonPositive {
            name: "slack",
            value: slack.as_f64(),
        });
    }
    let mut j = 0;
    for (i, z) in roots.roots().iter().enumerate() {
        if z.norm() < roots.roots()[j].norm() {
            j = i;
        }
    }
    let a_j = roots.roots()[j];
    let critical = critical_points(&MonicPolynomial::from_roots(roots))?;
    let distances = sendov_distances(roots, &critical);
    let min_distance = critical
        .points
        .iter()
        .map(|b| (b - a_j).norm())
        .fold(T::infinity(), T::min);

    let projection = modulus_projection(roots);
    let projected_crit = critical_points(&MonicPolynomial::from_roots(&projection.roots))?;
    let center = a_j.norm();
    let projected = ProjectedSide {
        roots: projection.roots.roots().iter().map(|z| z.re).collect(),
        critical_points: projected_crit.points.iter().map(|z| z.re).collect(),
        distances: projected_crit.points.iter().map(|z| (z.re - center).abs()).collect(),
    };
    Ok(PullbackReport {
        reference_index: j,
        reference_root: a_j,
        critical,
        distances,
        min_distance,
        slack,
        within_slack: min_distance < T::one() + slack,
        projected,
        zero_moduli: projection.zero_moduli,
    })
}
