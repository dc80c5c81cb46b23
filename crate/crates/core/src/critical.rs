//! Zeros of `P'` and higher derivatives, and zero-to-critical-point distances.
//!
//! Polynomials with known real zeros go through an interlacing solver: between
//! consecutive distinct zeros the logarithmic derivative `sum m_c / (x - v_c)`
//! falls from `+inf` to `-inf`, so each critical point is bracketed and found
//! by bisection. Everything else goes through Aberth-Ehrlich simultaneous
//! iteration on the monic-normalized derivative.

use std::cmp::Ordering;

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{derivative_coeffs, horner, nth_derivative_coeffs, scaled_residual, MonicPolynomial, RootMultiset};
use crate::scalar::{real, Scalar};

/// Simultaneous-iteration sweep budget.
pub const MAX_SWEEPS: usize = 200;
/// Per-point step size below which an iterate counts as converged, relative to `1 + |z|`.
pub const STEP_TOLERANCE: f64 = 1e-13;
/// Real zeros closer than this are merged into one zero with multiplicity.
pub const CLUSTER_GAP: f64 = 1e-12;
/// Largest scaled residual accepted on a reported critical point.
pub const RESIDUAL_LIMIT: f64 = 1e-8;

const BISECTION_STEPS: usize = 2000;
const NEWTON_POLISH_STEPS: usize = 4;
/// Angular offset of the initial Aberth guesses; keeps them off the real axis.
const INITIAL_ANGLE: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMethod {
    InterlaceBisection,
    SimultaneousIteration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalSet<T> {
    pub points: Vec<Complex<T>>,
    /// Scaled residual of the differentiated polynomial at each point.
    pub residuals: Vec<T>,
    pub method: SolveMethod,
    /// Aberth sweeps used; zero for the interlacing path.
    pub sweeps: usize,
}

impl<T: Scalar> CriticalSet<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_residual(&self) -> T {
        self.residuals.iter().copied().fold(T::zero(), T::max)
    }
}

/// Zeros of `P'`, `degree - 1` of them counted with multiplicity.
pub fn critical_points<T: Scalar>(p: &MonicPolynomial<T>) -> Result<CriticalSet<T>> {
    higher_derivative_zeros(p, 1)
}

/// Zeros of the `k`-th derivative, `degree - k` of them.
pub fn higher_derivative_zeros<T: Scalar>(p: &MonicPolynomial<T>, k: usize) -> Result<CriticalSet<T>> {
    let n = p.degree();
    if n < 2 {
        return Err(Error::DegreeBelow { required: 2, actual: n });
    }
    if k == 0 || k >= n {
        return Err(Error::OrderOutOfRange { order: k, max: n - 1 });
    }
    let target = nth_derivative_coeffs(p.coeffs(), k);

    if let Some(roots) = p.known_roots().filter(|r| r.is_real()) {
        let mut zeros: Vec<T> = roots.roots().iter().map(|z| z.re).collect();
        for _ in 0..k {
            zeros = real_critical_points(&zeros);
        }
        let points: Vec<_> = zeros.into_iter().map(real).collect();
        let residuals = points.iter().map(|&b| scaled_residual(&target, b)).collect();
        return Ok(CriticalSet {
            points,
            residuals,
            method: SolveMethod::InterlaceBisection,
            sweeps: 0,
        });
    }

    let lead = target[target.len() - 1];
    let monic: Vec<_> = target.iter().map(|&c| c / lead).collect();
    let (points, sweeps) = aberth(&monic)?;
    let residuals = points.iter().map(|&b| scaled_residual(&target, b)).collect();
    Ok(CriticalSet {
        points,
        residuals,
        method: SolveMethod::SimultaneousIteration,
        sweeps,
    })
}

/// Zeros of `d/dx prod (x - a_i)` for real `a_i`, ascending.
pub fn real_critical_points<T: Scalar>(zeros: &[T]) -> Vec<T> {
    let mut sorted = zeros.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));

    // (representative, multiplicity) of each run of nearly equal zeros
    let gap = T::lit(CLUSTER_GAP);
    let mut runs: Vec<&[T]> = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[i - 1] > gap {
            runs.push(&sorted[start..i]);
            start = i;
        }
    }
    let clusters: Vec<(T, T)> = runs
        .iter()
        .map(|run| (run[run.len() / 2], T::lit(run.len() as f64)))
        .collect();

    let mut out = Vec::with_capacity(zeros.len().saturating_sub(1));
    for (i, &(v, m)) in clusters.iter().enumerate() {
        let repeats = m.to_usize().unwrap_or(1) - 1;
        out.extend(std::iter::repeat_n(v, repeats));
        if let Some(&(next, _)) = clusters.get(i + 1) {
            out.push(bracketed_zero(&clusters, v, next));
        }
    }
    out
}

fn log_derivative<T: Scalar>(clusters: &[(T, T)], x: T) -> (T, T) {
    clusters.iter().fold((T::zero(), T::zero()), |(g, dg), &(v, m)| {
        let inv = T::one() / (x - v);
        (g + m * inv, dg - m * inv * inv)
    })
}

/// The unique zero of the logarithmic derivative strictly between `lo` and `hi`.
fn bracketed_zero<T: Scalar>(clusters: &[(T, T)], lo: T, hi: T) -> T {
    let two = T::lit(2.0);
    let (mut a, mut b) = (lo, hi);
    for _ in 0..BISECTION_STEPS {
        let mid = a + (b - a) / two;
        if mid <= a || mid >= b {
            break;
        }
        let (g, _) = log_derivative(clusters, mid);
        if g > T::zero() {
            a = mid;
        } else if g < T::zero() {
            b = mid;
        } else {
            return mid;
        }
    }
    let mut x = a + (b - a) / two;
    let mut best = log_derivative(clusters, x).0.abs();
    for _ in 0..NEWTON_POLISH_STEPS {
        let (g, dg) = log_derivative(clusters, x);
        if dg == T::zero() || !g.is_finite() {
            break;
        }
        let next = x - g / dg;
        if !(next > lo && next < hi) {
            break;
        }
        let value = log_derivative(clusters, next).0.abs();
        if value >= best {
            break;
        }
        x = next;
        best = value;
    }
    x
}

/// Aberth-Ehrlich iteration on a monic polynomial. Returns the roots and the
/// number of sweeps used.
fn aberth<T: Scalar>(monic: &[Complex<T>]) -> Result<(Vec<Complex<T>>, usize)> {
    let m = monic.len() - 1;
    if m == 0 {
        return Ok((Vec::new(), 0));
    }
    let dq = derivative_coeffs(monic);
    let radius = T::one() + monic[..m].iter().map(|c| c.norm()).fold(T::zero(), T::max);
    let tau = T::TAU();
    let mut z: Vec<Complex<T>> = (0..m)
        .map(|k| {
            let theta = tau * T::lit(k as f64) / T::lit(m as f64) + T::lit(INITIAL_ANGLE);
            Complex::from_polar(radius, theta)
        })
        .collect();
    let mut done = vec![false; m];
    let step_tol = T::lit(STEP_TOLERANCE);
    // scaled residual below this is indistinguishable from zero
    let noise = T::epsilon() * T::lit(4.0 * (m as f64 + 1.0));

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && done.iter().any(|d| !d) {
        sweeps += 1;
        for k in 0..m {
            if done[k] {
                continue;
            }
            let zk = z[k];
            let p = horner(monic, zk);
            if p.is_zero() {
                done[k] = true;
                continue;
            }
            let dp = horner(&dq, zk);
            let repulsion = z
                .iter()
                .enumerate()
                .filter(|&(j, &zj)| j != k && zj != zk)
                .fold(Complex::zero(), |acc: Complex<T>, (_, &zj)| acc + (zk - zj).inv());
            let denom = dp - p * repulsion;
            let step = if denom.is_zero() || !finite(denom) {
                // stalled; kick the iterate off the degenerate spot
                Complex::from_polar(step_tol.sqrt() * (T::one() + zk.norm()), T::lit(k as f64 + 1.0))
            } else {
                p / denom
            };
            z[k] = zk - step;
            if step.norm() <= step_tol * (T::one() + z[k].norm()) {
                done[k] = true;
            }
            if !finite(z[k]) {
                return Err(no_convergence(monic, &z, sweeps));
            }
        }
    }
    // Zeros of multiplicity m only resolve to about eps^(1/m), where the step
    // keeps jittering; accept those once the budget is spent.
    let unresolved = (0..m).any(|k| !done[k] && scaled_residual(monic, z[k]) > noise);
    if unresolved {
        return Err(no_convergence(monic, &z, sweeps));
    }

    for zk in z.iter_mut() {
        newton_polish(monic, &dq, zk);
    }
    let limit = T::lit(RESIDUAL_LIMIT);
    if z.iter().any(|&zk| !(scaled_residual(monic, zk) <= limit)) {
        return Err(no_convergence(monic, &z, sweeps));
    }
    Ok((z, sweeps))
}

fn finite<T: Scalar>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn newton_polish<T: Scalar>(q: &[Complex<T>], dq: &[Complex<T>], z: &mut Complex<T>) {
    let mut best = scaled_residual(q, *z);
    for _ in 0..NEWTON_POLISH_STEPS {
        let dp = horner(dq, *z);
        if dp.is_zero() {
            return;
        }
        let next = *z - horner(q, *z) / dp;
        let r = scaled_residual(q, next);
        if !(r < best) {
            return;
        }
        *z = next;
        best = r;
    }
}

fn no_convergence<T: Scalar>(q: &[Complex<T>], z: &[Complex<T>], sweeps: usize) -> Error {
    let residuals: Vec<f64> = z.iter().map(|&zk| scaled_residual(q, zk).as_f64()).collect();
    Error::NoConvergence {
        iterations: sweeps,
        worst_residual: residuals.iter().copied().fold(0.0, f64::max),
        iterates: z.iter().map(|zk| (zk.re.as_f64(), zk.im.as_f64())).collect(),
        residuals,
    }
}

/// Distances between zeros and critical points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SendovDistances<T> {
    /// `matrix[i][k] = |a_i - b_k|`.
    pub matrix: Vec<Vec<T>>,
    /// Distance from each zero to its nearest critical point.
    pub nearest: Vec<T>,
    /// Every zero has a critical point at distance strictly below 1.
    pub all_within_unit: bool,
    /// The extremal zero: least real zero for real inputs, least modulus otherwise.
    pub reference_index: usize,
    pub reference_max_distance: T,
}

/// Index of the least zero (real inputs) or least-modulus zero, lowest index on ties.
pub fn reference_zero_index<T: Scalar>(roots: &RootMultiset<T>) -> usize {
    let key = |z: &Complex<T>| if roots.is_real() { z.re } else { z.norm() };
    let mut best = 0;
    for (i, z) in roots.roots().iter().enumerate().skip(1) {
        if key(z) < key(&roots.roots()[best]) {
            best = i;
        }
    }
    best
}

pub fn sendov_distances<T: Scalar>(roots: &RootMultiset<T>, crit: &CriticalSet<T>) -> SendovDistances<T> {
    let matrix: Vec<Vec<T>> = roots
        .roots()
        .iter()
        .map(|a| crit.points.iter().map(|b| (a - b).norm()).collect())
        .collect();
    let nearest: Vec<T> = matrix
        .iter()
        .map(|row| row.iter().copied().fold(T::infinity(), T::min))
        .collect();
    let all_within_unit = nearest.iter().all(|&d| d < T::one());
    let reference_index = reference_zero_index(roots);
    let reference_max_distance = matrix[reference_index].iter().copied().fold(T::zero(), T::max);
    SendovDistances {
        matrix,
        nearest,
        all_within_unit,
        reference_index,
        reference_max_distance,
    }
}

/// How far `z` lies outside the convex hull of `points`; zero inside.
pub fn hull_distance<T: Scalar>(points: &[Complex<T>], z: Complex<T>) -> T {
    let hull = convex_hull(points);
    match hull.len() {
        0 => T::infinity(),
        1 => (z - hull[0]).norm(),
        2 => segment_distance(hull[0], hull[1], z),
        n => {
            let inside = (0..n).all(|i| cross(hull[i], hull[(i + 1) % n], z) >= T::zero());
            if inside {
                T::zero()
            } else {
                (0..n)
                    .map(|i| segment_distance(hull[i], hull[(i + 1) % n], z))
                    .fold(T::infinity(), T::min)
            }
        }
    }
}

fn cross<T: Scalar>(o: Complex<T>, a: Complex<T>, b: Complex<T>) -> T {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

fn segment_distance<T: Scalar>(a: Complex<T>, b: Complex<T>, z: Complex<T>) -> T {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2.is_zero() {
        return (z - a).norm();
    }
    let t = ((z - a) * ab.conj()).re / len2;
    let t = t.max(T::zero()).min(T::one());
    (z - (a + ab * t)).norm()
}

/// Counter-clockwise hull by monotone chain; collinear points dropped.
fn convex_hull<T: Scalar>(points: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
    });
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Complex<T>> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Complex<T>>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= T::zero() {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        // all collinear: keep the two extremes
        return vec![pts[0], pts[pts.len() - 1]];
    }
    hull
}
