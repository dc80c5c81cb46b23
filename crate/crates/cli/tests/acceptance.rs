//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each, and
//! exits nonzero if any fails.

use std::process::Command;

use limpoly::critical::hull_distance;
use limpoly::poly::{derivative_coeffs, horner};
use limpoly::search::{modulus_projection, sample_rng, unit_f64, ChaCha20Rng};
use limpoly::{
    complex_pullback_check, conjugate_roots, critical_points, generate_roots, index_bound_check, local_expansion_min,
    measure, min_pair_lemma, permutation_sum_derivative, rescale_roots, stirling_bound_compare, Distribution,
    Polynomial, Roots, SearchReport, C64,
};

const BIN: &str = env!("CARGO_BIN_EXE_limpoly");

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rng(seed: u64, i: u64) -> ChaCha20Rng {
    sample_rng(seed, i)
}

fn degree(r: &mut ChaCha20Rng, lo: usize, hi: usize) -> usize {
    lo + (unit_f64(r) * (hi - lo + 1) as f64) as usize
}

const LOG_WIDE: Distribution = Distribution::LogUniform { lo: 1e-3, hi: 1e3 };
const DISK10: Distribution = Distribution::ComplexDisk { radius: 10.0 };

fn product_eval(roots: &Roots, x: C64) -> C64 {
    roots.roots().iter().fold(C64::new(1.0, 0.0), |acc, &a| acc * (x - a))
}

fn probe(r: &mut ChaCha20Rng, real: bool) -> C64 {
    let d = if real { LOG_WIDE } else { DISK10 };
    generate_roots(&d, 1, r).unwrap().roots()[0]
}

fn rel(a: C64, b: C64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn taylor_shift_reconstruction() -> Outcome {
    // Error is measured against sum |s_k| |x - c|^k: when x is far from c the
    // terms of the shifted form cancel, and even correctly rounded s_k cannot
    // reproduce a tiny P(x) to a fixed fraction of itself.
    let (mut worst, mut plain) = (0.0f64, 0.0f64);
    for i in 0..500 {
        let mut r = rng(101, i);
        let real = i % 2 == 0;
        let n = degree(&mut r, 2, 12);
        let roots = generate_roots(if real { &LOG_WIDE } else { &DISK10 }, n, &mut r).unwrap();
        let p = Polynomial::from_roots(&roots);
        let c = roots.roots()[(unit_f64(&mut r) * n as f64) as usize];
        let shifted = p.taylor_shift(c);
        for _ in 0..16 {
            let x = probe(&mut r, real);
            let rebuilt = shifted
                .iter()
                .rev()
                .fold(C64::new(0.0, 0.0), |acc, &s| acc * (x - c) + s);
            let direct = product_eval(&roots, x);
            let y = (x - c).norm();
            let scale: f64 = shifted.iter().rev().fold(0.0, |acc, s| acc * y + s.norm());
            worst = worst.max((rebuilt - direct).norm() / scale);
            plain = plain.max(rel(rebuilt, direct));
        }
    }
    check(
        worst <= 1e-9,
        format!("max relative error {worst:.3e} against sum |s_k||x-c|^k (limit 1e-9); against |P(x)| {plain:.3e}"),
    )
}

fn derivative_index_identity() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..500 {
        let mut r = rng(102, i);
        let n = degree(&mut r, 2, 12);
        let roots = generate_roots(&LOG_WIDE, n, &mut r).unwrap();
        let p = Polynomial::from_roots(&roots);
        let e = local_expansion_min(&roots).unwrap();
        let a_j = C64::new(e.center, 0.0);
        let mut factorial = 1.0;
        for s in 1..=n {
            factorial *= s as f64;
            let lhs = p.derivative_at_order(s, a_j);
            worst = worst.max(rel(lhs, C64::new(factorial * e.index(s), 0.0)));
        }
    }
    check(worst <= 1e-8, format!("max relative error {worst:.3e} (limit 1e-8)"))
}

fn measure_calculus() -> Outcome {
    let rel_f = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
    let (mut mult, mut conj, mut scale) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..10_000 {
        let mut r = rng(103, i);
        let dist = if i % 2 == 0 { LOG_WIDE } else { DISK10 };
        let p = generate_roots(&dist, degree(&mut r, 1, 12), &mut r).unwrap();
        let q = generate_roots(&dist, degree(&mut r, 1, 12), &mut r).unwrap();
        mult = mult.max(rel_f(measure(&p.concat(&q)), measure(&p) * measure(&q)));
        conj = conj.max(rel_f(measure(&conjugate_roots(&p)), measure(&p)));
        let lambdas: Vec<C64> = (0..p.len())
            .map(|_| probe(&mut r, false) + C64::new(0.1, 0.0))
            .collect();
        let b = rescale_roots(&p, &lambdas).unwrap();
        let lambda_measure: f64 = lambdas.iter().map(|l| l.norm()).product();
        scale = scale.max(rel_f(measure(&b) * lambda_measure, measure(&p)));
    }
    let worst = mult.max(conj).max(scale);
    check(
        worst <= 1e-10,
        format!("multiplicativity {mult:.2e}, conjugation {conj:.2e}, rescaling {scale:.2e} (limit 1e-10)"),
    )
}

fn min_pair() -> Outcome {
    let mut failures = 0;
    for i in 0..100_000u64 {
        let mut r = rng(104, i);
        let a = (unit_f64(&mut r) * 12.0 - 6.0).exp();
        let b = (1.0 - unit_f64(&mut r)) / a;
        assert!(a * b < 1.0);
        if !min_pair_lemma(a, b).unwrap() {
            failures += 1;
        }
    }
    check(failures == 0, format!("{failures} failures in 100000 cases"))
}

fn critical_solver() -> Outcome {
    let r123 = Roots::from_reals(&[1.0, 2.0, 3.0]).unwrap();
    let crit = critical_points(&Polynomial::from_roots(&r123)).unwrap();
    let mut got: Vec<f64> = crit.points.iter().map(|z| z.re).collect();
    got.sort_by(f64::total_cmp);
    let expected = [2.0 - 1.0 / 3f64.sqrt(), 2.0 + 1.0 / 3f64.sqrt()];
    let oracle_err = got.iter().zip(expected).map(|(g, e)| (g - e).abs()).fold(0.0, f64::max);

    let (mut hull_worst, mut centroid_worst, mut interlace_bad) = (0.0f64, 0.0f64, 0);
    for i in 0..1000 {
        let mut r = rng(105, i);
        let real = i % 2 == 0;
        let dist = if real {
            Distribution::LogUniform { lo: 1e-2, hi: 1e2 }
        } else {
            DISK10
        };
        let n = degree(&mut r, 2, 12);
        let roots = generate_roots(&dist, n, &mut r).unwrap();
        let crit = critical_points(&Polynomial::from_roots(&roots)).unwrap();
        let size = roots.roots().iter().map(|a| a.norm()).fold(0.0, f64::max);
        for &b in &crit.points {
            hull_worst = hull_worst.max(hull_distance(roots.roots(), b) / (1.0 + size));
        }
        let mean = |v: &[C64]| v.iter().sum::<C64>() / v.len() as f64;
        let scale = roots.roots().iter().map(|a| a.norm()).sum::<f64>() / n as f64;
        centroid_worst = centroid_worst.max((mean(&crit.points) - mean(roots.roots())).norm() / scale);
        if real {
            let mut a: Vec<f64> = roots.roots().iter().map(|z| z.re).collect();
            a.sort_by(f64::total_cmp);
            let mut b: Vec<f64> = crit.points.iter().map(|z| z.re).collect();
            b.sort_by(f64::total_cmp);
            let ok = crit.points.iter().all(|z| z.im == 0.0)
                && b.len() == n - 1
                && b.iter().enumerate().all(|(k, &x)| a[k] <= x && x <= a[k + 1]);
            if !ok {
                interlace_bad += 1;
            }
        }
    }
    check(
        oracle_err <= 1e-10 && hull_worst <= 1e-9 && interlace_bad == 0 && centroid_worst <= 1e-8,
        format!(
            "(1,2,3) error {oracle_err:.1e}; hull excess {hull_worst:.1e}; interlacing failures {interlace_bad}; centroid error {centroid_worst:.1e}"
        ),
    )
}

fn index_bound_examples() -> Outcome {
    let small = Roots::from_reals(&[0.1, 0.2, 0.3]).unwrap();
    let report = index_bound_check(&local_expansion_min(&small).unwrap(), &small);
    let flagged = !report.all_hold
        && report.entries[0].holds
        && !report.entries[1].holds
        && (report.entries[1].magnitude - 0.3).abs() < 1e-12
        && (report.bound - 0.06).abs() < 1e-12;
    let big = Roots::from_reals(&[1.0, 2.0, 3.0]).unwrap();
    let report = index_bound_check(&local_expansion_min(&big).unwrap(), &big);
    let passes = report.all_hold && report.entries.len() == 2;
    check(
        flagged && passes,
        format!("(0.1,0.2,0.3) flagged: {flagged}; (1,2,3) all pass: {passes}"),
    )
}

fn squeeze_counterexample() -> Outcome {
    let out = Command::new(BIN)
        .args([
            "verify",
            "--claim",
            "squeeze",
            "--roots",
            "0.001,0.001,500",
            "--eps",
            "1",
            "--delta",
            "1",
            "--json",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code();
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let distance = doc["results"]["verdict"]["conclusion"]["attained"]
        .as_f64()
        .unwrap_or(f64::NAN);
    check(
        code == Some(2) && (distance - 333.3327).abs() <= 1e-3,
        format!("exit {code:?}, max distance {distance}"),
    )
}

fn stirling_direction() -> Outcome {
    let all_below = (1..=120).all(|n| {
        let s = stirling_bound_compare(n).unwrap();
        s.stirling_below_factorial && s.stirling_sum < s.factorial_sum
    });
    let s1 = stirling_bound_compare(1).unwrap();
    let s2 = stirling_bound_compare(2).unwrap();
    let values = (s1.factorial_sum - 1.0).abs() <= 1e-4
        && (s1.stirling_sum - 0.92214).abs() <= 1e-4
        && (s2.factorial_sum - 3.0).abs() <= 1e-4
        && (s2.stirling_sum - 2.84116).abs() <= 1e-4;
    check(
        all_below && values,
        format!(
            "n=1..120 ordered: {all_below}; n=1 {} vs {:.6}; n=2 {} vs {:.6}",
            s1.factorial_sum, s1.stirling_sum, s2.factorial_sum, s2.stirling_sum
        ),
    )
}

fn permutation_sum_identity() -> Outcome {
    let (mut worst, mut at_root) = (0.0f64, 0.0f64);
    for i in 0..500 {
        let mut r = rng(109, i);
        let real = i % 2 == 0;
        let n = degree(&mut r, 2, 12);
        let roots = generate_roots(if real { &LOG_WIDE } else { &DISK10 }, n, &mut r).unwrap();
        let dp = derivative_coeffs(Polynomial::from_roots(&roots).coeffs());
        for _ in 0..16 {
            let x = probe(&mut r, real);
            worst = worst.max(rel(permutation_sum_derivative(&roots, x).unwrap(), horner(&dp, x)));
        }
        let j = (unit_f64(&mut r) * n as f64) as usize;
        let a_j = roots.roots()[j];
        let product = roots
            .roots()
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .fold(C64::new(1.0, 0.0), |acc, (_, &a)| acc * (a_j - a));
        at_root = at_root.max(rel(permutation_sum_derivative(&roots, a_j).unwrap(), product));
    }
    check(
        worst <= 1e-9 && at_root <= 1e-9,
        format!("probe error {worst:.2e}, error at a root {at_root:.2e} (limit 1e-9)"),
    )
}

fn search_json(extra: &[&str]) -> Result<(Vec<u8>, Option<i32>), String> {
    let mut args = vec![
        "search",
        "--claim",
        "index_bound",
        "--degree",
        "3",
        "--samples",
        "1000",
        "--seed",
        "42",
        "--dist",
        "uniform:0.05,0.5",
        "--json",
    ];
    args.extend_from_slice(extra);
    let out = Command::new(BIN).args(&args).output().map_err(|e| e.to_string())?;
    Ok((out.stdout, out.status.code()))
}

fn embedded_report(bytes: &[u8]) -> Result<SearchReport, String> {
    let doc: serde_json::Value = serde_json::from_slice(bytes).map_err(|e| e.to_string())?;
    serde_json::from_value(doc["results"]["search"].clone()).map_err(|e| e.to_string())
}

fn search_determinism() -> Outcome {
    let (first, code) = search_json(&[])?;
    let (second, _) = search_json(&[])?;
    let identical = first == second && !first.is_empty();
    let whole = embedded_report(&first)?;
    let mut merged: Option<SearchReport> = None;
    for shard in ["0/4", "1/4", "2/4", "3/4"] {
        let part = embedded_report(&search_json(&["--shard", shard])?.0)?;
        merged = Some(match merged {
            None => part,
            Some(m) => m.merge(part).map_err(|e| e.to_string())?,
        });
    }
    let merged = merged.expect("four shards");
    let same_counts = merged.counts == whole.counts && merged.counterexamples == whole.counterexamples;
    check(
        identical && same_counts && code == Some(2) && whole.counts.counterexample > 0,
        format!(
            "byte-identical: {identical}; shard merge matches: {same_counts}; violations {}",
            whole.counts.counterexample
        ),
    )
}

fn complex_projection() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let mut r = rng(111, i);
        let roots = generate_roots(&DISK10, degree(&mut r, 1, 12), &mut r).unwrap();
        let m = measure(&roots);
        let projected = measure(&modulus_projection(&roots).roots);
        worst = worst.max((m - projected).abs() / m);
    }
    let quad = Roots::new(vec![
        C64::new(1.0, 0.0),
        C64::new(0.0, 1.0),
        C64::new(-1.0, 0.0),
        C64::new(0.0, -1.0),
    ])
    .unwrap();
    let report = complex_pullback_check(&quad, 0.0).map_err(|e| e.to_string())?;
    let triple_at_zero = report.critical.points.len() == 3 && report.critical.points.iter().all(|b| b.norm() <= 1e-9);
    let unit = (report.min_distance - 1.0).abs() <= 1e-9
        && report
            .distances
            .matrix
            .iter()
            .flatten()
            .all(|d| (d - 1.0).abs() <= 1e-9);
    check(
        worst <= 1e-12 && triple_at_zero && unit,
        format!("measure error {worst:.2e}; triple critical point at 0: {triple_at_zero}; unit distances: {unit}"),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("taylor shift reconstruction", taylor_shift_reconstruction),
        ("derivative-index identity", derivative_index_identity),
        ("measure calculus", measure_calculus),
        ("min-pair lemma", min_pair),
        ("critical solver", critical_solver),
        ("index bound examples", index_bound_examples),
        ("squeeze counterexample", squeeze_counterexample),
        ("stirling direction", stirling_direction),
        ("permutation-sum identity", permutation_sum_identity),
        ("search determinism", search_determinism),
        ("complex projection", complex_projection),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
