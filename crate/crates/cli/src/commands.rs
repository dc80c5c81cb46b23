//! The four subcommands. Each returns a [`Report`] and the exit status it implies.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use limpoly::search::{append_counterexample_log, DEFAULT_COUNTEREXAMPLE_CAP};
use limpoly::{
    claims::DEFAULT_INDEX_BAND, complex_pullback_check, conjugate_roots, critical_points, index_bound_check,
    is_epsilon_limited, local_expansion_max_plus, local_expansion_min, measure, sendov_distances, verify_claim,
    ClaimId, ClaimParams, Classification, Distribution, EpsilonPolicy, Error, Polynomial, Roots, SearchConfig,
    Tolerance, C64,
};

use crate::literal::parse_roots;
use crate::report::{skipped, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_COUNTEREXAMPLE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "limpoly",
    version,
    about = "Measure, local expansions and critical points of limited polynomials"
)]
pub struct Cli {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Everything computable for one root set.
    Analyze(AnalyzeArgs),
    /// Check one claim on one root set.
    Verify(VerifyArgs),
    /// Randomized sweep for counterexamples.
    Search(SearchArgs),
    /// Local expansion about a chosen center.
    Expand(ExpandArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Comma-separated roots, e.g. `1,2,3` or `1+1i,-2`.
    #[arg(long, value_parser = parse_roots, allow_hyphen_values = true)]
    pub roots: Roots,
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    /// Allowance on the unit distance in the complex pullback diagnostic.
    #[arg(long, default_value_t = 0.0)]
    pub slack: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub claim: ClaimId,
    #[arg(long, value_parser = parse_roots, allow_hyphen_values = true)]
    pub roots: Roots,
    /// Second factor for product_prop; defaults to the conjugate root set.
    #[arg(long, value_parser = parse_roots, allow_hyphen_values = true)]
    pub q_roots: Option<Roots>,
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[arg(long, default_value_t = DEFAULT_INDEX_BAND)]
    pub index_band: f64,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub claim: ClaimId,
    /// `N` or `LO:HI`.
    #[arg(long, value_parser = parse_degree, default_value = "3")]
    pub degree: (usize, usize),
    #[arg(long)]
    pub samples: u64,
    #[arg(long, env = "LIMPOLY_SEED", default_value_t = 0)]
    pub seed: u64,
    /// `uniform:LO,HI`, `log-uniform:LO,HI` or `complex-disk:R`.
    #[arg(long, default_value = "uniform:0.05,0.5")]
    pub dist: Distribution,
    /// `fixed:V` or `measure-times:F`.
    #[arg(long, default_value = "fixed:1")]
    pub eps_policy: EpsilonPolicy,
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    #[arg(long, default_value_t = DEFAULT_INDEX_BAND)]
    pub index_band: f64,
    /// Counterexamples kept in the report; the rest are only counted.
    #[arg(long, default_value_t = DEFAULT_COUNTEREXAMPLE_CAP)]
    pub cap: usize,
    /// Run shard `I` of `N` (`I/N`, zero-based).
    #[arg(long, value_parser = parse_shard)]
    pub shard: Option<(u64, u64)>,
    /// Append kept counterexamples to this NDJSON log.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record wall time (makes the report nondeterministic).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    #[arg(long, value_parser = parse_roots, allow_hyphen_values = true)]
    pub roots: Roots,
    /// `min`, `max-plus` or `value:X`.
    #[arg(long, value_parser = parse_center, default_value = "min", allow_hyphen_values = true)]
    pub center: Center,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Center {
    Min,
    MaxPlus,
    Value(f64),
}

fn parse_center(s: &str) -> Result<Center, String> {
    match s {
        "min" => Ok(Center::Min),
        "max-plus" => Ok(Center::MaxPlus),
        _ => {
            let v = s
                .strip_prefix("value:")
                .ok_or_else(|| format!("center '{s}' is not one of min, max-plus, value:X"))?;
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(Center::Value)
                .ok_or_else(|| format!("cannot parse center value '{v}'"))
        }
    }
}

fn parse_degree(s: &str) -> Result<(usize, usize), String> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("cannot parse degree '{t}'"))
    };
    match s.split_once(':') {
        Some((lo, hi)) => Ok((num(lo)?, num(hi)?)),
        None => num(s).map(|n| (n, n)),
    }
}

fn parse_shard(s: &str) -> Result<(u64, u64), String> {
    let (i, n) = s.split_once('/').ok_or_else(|| format!("shard '{s}' is not I/N"))?;
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("cannot parse shard '{s}'"));
    let (i, n) = (num(i)?, num(n)?);
    if n == 0 || i >= n {
        return Err(format!("shard index {i} out of range for {n} shards"));
    }
    Ok((i, n))
}

pub struct Outcome {
    pub report: Report,
    pub exit: i32,
}

pub fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Verify(a) => verify(a),
        Command::Search(a) => search(a),
        Command::Expand(a) => expand(a),
    }
}

fn to_value<S: Serialize>(s: &S) -> Value {
    serde_json::to_value(s).expect("serializable")
}

fn roots_value(roots: &Roots) -> Value {
    to_value(&roots.roots())
}

fn tolerance_value(tol: &Tolerance) -> Value {
    json!({"abs": tol.abs, "rel": tol.rel})
}

fn skip_code(err: &Error) -> &'static str {
    match err {
        Error::NotPositiveReal { .. } => "not-positive-real",
        Error::DegreeBelow { .. } | Error::DegreeTooLow => "degree-too-low",
        Error::StirlingRange { .. } => "degree-out-of-range",
        Error::NonPositive { .. } => "non-positive-parameter",
        _ => "not-applicable",
    }
}

fn skip_err(err: &Error) -> Value {
    let reason = match err {
        Error::NotPositiveReal { im, .. } if *im != 0.0 => format!("complex roots: section skipped ({err})"),
        _ => err.to_string(),
    };
    skipped(skip_code(err), &reason)
}

pub fn analyze(args: &AnalyzeArgs) -> Result<Outcome, Error> {
    let roots = &args.roots;
    let tol = Tolerance::default();
    let mut results = Map::new();
    let mut diagnostics = Map::new();

    results.insert("degree".into(), json!(roots.len()));
    results.insert("measure".into(), json!(measure(roots)));
    results.insert("limitedness".into(), to_value(&is_epsilon_limited(roots, args.eps)?));

    match local_expansion_min(roots) {
        Ok(e) => {
            results.insert("index_bound".into(), to_value(&index_bound_check(&e, roots)));
            results.insert("expansion".into(), to_value(&e));
        }
        Err(err) => {
            let reason = if roots.is_real() {
                "non-positive roots: expansion skipped"
            } else {
                "complex roots: expansion skipped"
            };
            results.insert("expansion".into(), skipped(skip_code(&err), reason));
            results.insert("index_bound".into(), skipped(skip_code(&err), reason));
        }
    }

    if roots.len() >= 2 {
        let crit = critical_points(&Polynomial::from_roots(roots))?;
        results.insert("sendov_distances".into(), to_value(&sendov_distances(roots, &crit)));
        diagnostics.insert(
            "solver".into(),
            json!({"method": crit.method, "sweeps": crit.sweeps, "max_residual": crit.max_residual()}),
        );
        results.insert("critical_points".into(), to_value(&crit));
    } else {
        let reason = "degree 1: no critical points";
        results.insert("critical_points".into(), skipped("degree-too-low", reason));
        results.insert("sendov_distances".into(), skipped("degree-too-low", reason));
    }

    let params = ClaimParams {
        eps: args.eps,
        delta: args.delta,
        q_roots: Some(conjugate_roots(roots)),
        ..ClaimParams::default()
    };
    let mut claims = Map::new();
    let mut exit = EXIT_OK;
    for claim in ClaimId::ALL {
        let entry = match verify_claim(claim, roots, &params) {
            Ok(v) => {
                if v.classification == Classification::Counterexample {
                    exit = EXIT_COUNTEREXAMPLE;
                }
                to_value(&v)
            }
            Err(err @ Error::NoConvergence { .. }) => return Err(err),
            Err(err) => skip_err(&err),
        };
        claims.insert(claim.name().into(), entry);
    }
    results.insert("claims".into(), Value::Object(claims));

    if !roots.is_real() && roots.len() >= 2 {
        results.insert(
            "complex_pullback".into(),
            to_value(&complex_pullback_check(roots, args.slack)?),
        );
    } else {
        let reason = if roots.len() < 2 {
            "degree 1: no critical points"
        } else {
            "real roots: pullback not needed"
        };
        let code = if roots.len() < 2 {
            "degree-too-low"
        } else {
            "real-roots"
        };
        results.insert("complex_pullback".into(), skipped(code, reason));
    }

    diagnostics.insert("tolerance".into(), tolerance_value(&tol));
    diagnostics.insert("index_band".into(), json!(params.index_band));
    diagnostics.insert("product_prop_second_factor".into(), json!("conjugate"));

    let inputs = json!({"roots": roots_value(roots), "eps": args.eps, "delta": args.delta, "slack": args.slack});
    Ok(Outcome {
        report: Report::new("analyze", inputs, Value::Object(results), Value::Object(diagnostics)),
        exit,
    })
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome, Error> {
    let roots = &args.roots;
    let (q_roots, q_source) = match &args.q_roots {
        Some(q) => (q.clone(), "given"),
        None => (conjugate_roots(roots), "conjugate"),
    };
    let params = ClaimParams {
        eps: args.eps,
        delta: args.delta,
        q_roots: Some(q_roots.clone()),
        index_band: args.index_band,
        ..ClaimParams::default()
    };
    let verdict = verify_claim(args.claim, roots, &params)?;
    let exit = if verdict.classification == Classification::Counterexample {
        EXIT_COUNTEREXAMPLE
    } else {
        EXIT_OK
    };
    let mut inputs = json!({
        "claim": args.claim,
        "roots": roots_value(roots),
        "eps": args.eps,
        "delta": args.delta,
        "index_band": args.index_band,
    });
    let mut diagnostics = json!({"tolerance": tolerance_value(&params.tol)});
    if args.claim == ClaimId::ProductProp {
        inputs["q_roots"] = roots_value(&q_roots);
        diagnostics["q_roots_source"] = json!(q_source);
    }
    Ok(Outcome {
        report: Report::new("verify", inputs, json!({"verdict": verdict}), diagnostics),
        exit,
    })
}

pub fn search(args: &SearchArgs) -> Result<Outcome, Error> {
    let mut config = SearchConfig::new(args.claim, args.degree.0, args.samples, args.seed, args.dist);
    config.degree_max = args.degree.1;
    config.epsilon_policy = args.eps_policy;
    config.delta = args.delta;
    config.index_band = args.index_band;
    config.counterexample_cap = args.cap;
    config.validate()?;

    let (shard_index, shard_count) = args.shard.unwrap_or((0, 1));
    let started = Instant::now();
    let mut report = limpoly::run_search_shard(&config, shard_index, shard_count)?;
    if args.timing {
        report.wall_time_ms = Some(started.elapsed().as_millis() as u64);
    }

    let mut diagnostics = Map::new();
    if let Some(path) = &args.out {
        let written = append_counterexample_log(path, &report)?;
        diagnostics.insert(
            "log".into(),
            json!({"path": path.display().to_string(), "records_written": written}),
        );
    }
    diagnostics.insert("config_hash".into(), json!(report.config_hash));

    let exit = if report.counts.counterexample > 0 {
        EXIT_COUNTEREXAMPLE
    } else {
        EXIT_OK
    };
    let inputs = json!({
        "config": config,
        "shard": {"index": shard_index, "count": shard_count},
    });
    Ok(Outcome {
        report: Report::new("search", inputs, json!({"search": report}), Value::Object(diagnostics)),
        exit,
    })
}

pub fn expand(args: &ExpandArgs) -> Result<Outcome, Error> {
    let roots = &args.roots;
    let (center, results) = match args.center {
        Center::Value(x) => {
            let coeffs = Polynomial::from_roots(roots).taylor_shift(C64::new(x, 0.0));
            let all_real = coeffs.iter().all(|c| c.im == 0.0);
            let mut results = json!({"center": x, "coeffs": coeffs});
            if all_real {
                results["real_coeffs"] = json!(coeffs.iter().map(|c| c.re).collect::<Vec<_>>());
            }
            (json!(format!("value:{x}")), results)
        }
        selector => {
            let e = if selector == Center::Min {
                local_expansion_min(roots)?
            } else {
                local_expansion_max_plus(roots)?
            };
            let bound = index_bound_check(&e, roots);
            let name = if selector == Center::Min { "min" } else { "max-plus" };
            (json!(name), json!({"expansion": e, "index_bound": bound}))
        }
    };
    let inputs = json!({"roots": roots_value(roots), "center": center});
    Ok(Outcome {
        report: Report::new("expand", inputs, results, json!({})),
        exit: EXIT_OK,
    })
}
