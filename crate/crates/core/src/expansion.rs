//! Local expansion of a positive-real-rooted monic polynomial about its least
//! zero (`prod (x - a_i)` in powers of `x - a_j`), or, in plus form, of
//! `prod (x + a_i)` about its largest `a_j` in powers of `x + a_j`.
//!
//! Both forms reduce to `y * prod_{i != j} (y - r_i)` with nonnegative offsets
//! `r_i`, and the coefficients of that product are the indices of expansion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{expand_real_factors, RootMultiset};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpansionForm {
    /// `prod (x - a_i)` about `min a_i`, `y = x - a_j`.
    Minus,
    /// `prod (x + a_i)` about `max a_i`, `y = x + a_j`.
    Plus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalExpansion<T> {
    pub center: T,
    pub center_index: usize,
    pub form: ExpansionForm,
    /// `s_1..s_n`; `s_0` is identically zero and `s_n = 1`.
    pub coeffs: Vec<T>,
    /// `r_i` for every `i != center_index`, in original order.
    pub offsets: Vec<T>,
}

impl<T: Scalar> LocalExpansion<T> {
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Index of expansion `s_k` for `1 <= k <= n`.
    pub fn index(&self, k: usize) -> T {
        self.coeffs[k - 1]
    }

    /// The local variable `y` at `x`.
    pub fn local_variable(&self, x: T) -> T {
        match self.form {
            ExpansionForm::Minus => x - self.center,
            ExpansionForm::Plus => x + self.center,
        }
    }

    /// `sum s_k y^k`.
    pub fn evaluate(&self, x: T) -> T {
        let y = self.local_variable(x);
        self.coeffs.iter().rev().fold(T::zero(), |acc, &s| acc * y + s) * y
    }
}

/// First index of the minimum (or maximum) under `better`.
fn extremal_index<T: Scalar>(values: &[T], better: impl Fn(T, T) -> bool) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if better(v, values[best]) {
            best = i;
        }
    }
    best
}

fn build<T: Scalar>(values: &[T], j: usize, form: ExpansionForm) -> LocalExpansion<T> {
    let center = values[j];
    let offsets: Vec<T> = values
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, &a)| match form {
            ExpansionForm::Minus => a - center,
            ExpansionForm::Plus => center - a,
        })
        .collect();
    // coefficients of prod (y - r_i) are s_1..s_n once multiplied by y
    let coeffs = expand_real_factors(&offsets);
    LocalExpansion {
        center,
        center_index: j,
        form,
        coeffs,
        offsets,
    }
}

/// Expansion of `prod (x - a_i)` about its least zero (ties: lowest index).
pub fn local_expansion_min<T: Scalar>(roots: &RootMultiset<T>) -> Result<LocalExpansion<T>> {
    let values = roots.positive_reals()?;
    let j = extremal_index(&values, |a, b| a < b);
    Ok(build(&values, j, ExpansionForm::Minus))
}

/// Expansion of `prod (x + a_i)` about its largest `a_j` (ties: lowest index).
pub fn local_expansion_max_plus<T: Scalar>(roots: &RootMultiset<T>) -> Result<LocalExpansion<T>> {
    let values = roots.positive_reals()?;
    let j = extremal_index(&values, |a, b| a > b);
    Ok(build(&values, j, ExpansionForm::Plus))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexBoundEntry {
    pub k: usize,
    pub magnitude: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexBoundReport {
    /// `prod_{i != j} |a_i|` in minus form, `|a_j|^n` in plus form.
    pub bound: f64,
    pub entries: Vec<IndexBoundEntry>,
    pub all_hold: bool,
}

impl IndexBoundReport {
    /// Smallest `bound - |s_k|` over the checked indices; infinite when vacuous.
    pub fn min_margin(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.bound - e.magnitude)
            .fold(f64::INFINITY, f64::min)
    }

    /// The entry with the largest `|s_k|`, if any.
    pub fn worst(&self) -> Option<&IndexBoundEntry> {
        self.entries.iter().max_by(|a, b| a.magnitude.total_cmp(&b.magnitude))
    }
}

/// Tests the strict bound on every index `s_1..s_{n-1}`. The bound is reported,
/// not assumed; it fails on ordinary inputs such as `(0.1, 0.2, 0.3)`.
pub fn index_bound_check<T: Scalar>(expansion: &LocalExpansion<T>, roots: &RootMultiset<T>) -> IndexBoundReport {
    let n = expansion.degree();
    let bound = match expansion.form {
        ExpansionForm::Minus => roots
            .roots()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != expansion.center_index)
            .map(|(_, z)| z.norm())
            .fold(T::one(), |a, b| a * b),
        ExpansionForm::Plus => expansion.center.abs().powi(n as i32),
    }
    .as_f64();
    let entries: Vec<_> = (1..n)
        .map(|k| {
            let magnitude = expansion.index(k).abs().as_f64();
            IndexBoundEntry {
                k,
                magnitude,
                bound,
                holds: magnitude < bound,
            }
        })
        .collect();
    let all_hold = entries.iter().all(|e| e.holds);
    IndexBoundReport {
        bound,
        entries,
        all_hold,
    }
}

/// For positive `a, b`: `a * b < 1` implies `min(a, b) < 1`. Returns the truth
/// value of the implication as evaluated on the inputs.
pub fn min_pair_lemma<T: Scalar>(a: T, b: T) -> Result<bool> {
    for (name, v) in [("A", a), ("B", b)] {
        if !(v > T::zero()) {
            return Err(Error::NonPositive {
                name,
                value: v.as_f64(),
            });
        }
    }
    Ok(!(a * b < T::one()) || a.min(b) < T::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reals(v: &[f64]) -> RootMultiset<f64> {
        RootMultiset::from_reals(v).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn min_expansion_examples() {
        let e = local_expansion_min(&reals(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(e.center, 1.0);
        assert_eq!(e.center_index, 0);
        assert_eq!(e.coeffs, vec![2.0, -3.0, 1.0]);
        assert_eq!(e.offsets, vec![1.0, 2.0]);

        let e = local_expansion_min(&reals(&[4.5])).unwrap();
        assert_eq!(e.center, 4.5);
        assert_eq!(e.coeffs, vec![1.0]);

        let e = local_expansion_min(&reals(&[0.3, 0.1, 0.2])).unwrap();
        assert_eq!(e.center, 0.1);
        assert_eq!(e.center_index, 1);
        assert!(close(&e.coeffs, &[0.02, -0.3, 1.0], 1e-15), "{:?}", e.coeffs);
    }

    #[test]
    fn ties_pick_lowest_index() {
        let e = local_expansion_min(&reals(&[2.0, 1.0, 1.0])).unwrap();
        assert_eq!(e.center_index, 1);
        // double minimal root: s_1 is exactly zero
        assert_eq!(e.coeffs, vec![0.0, -1.0, 1.0]);
        let e = local_expansion_max_plus(&reals(&[3.0, 1.0, 3.0])).unwrap();
        assert_eq!(e.center_index, 0);
    }

    #[test]
    fn plus_expansion_examples() {
        let e = local_expansion_max_plus(&reals(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(e.center, 3.0);
        assert_eq!(e.form, ExpansionForm::Plus);
        assert_eq!(e.offsets, vec![2.0, 1.0]);
        assert_eq!(e.coeffs, vec![2.0, -3.0, 1.0]);

        let e = local_expansion_max_plus(&reals(&[0.7, 0.7])).unwrap();
        assert_eq!(e.coeffs, vec![0.0, 1.0]);

        let e = local_expansion_max_plus(&reals(&[1.0, 4.0])).unwrap();
        assert_eq!(e.center, 4.0);
        assert_eq!(e.coeffs, vec![-3.0, 1.0]);
        // (x+1)(x+4) at x = 2
        assert_eq!(e.evaluate(2.0), 18.0);
    }

    #[test]
    fn rejects_non_positive_roots() {
        assert!(matches!(
            local_expansion_min(&reals(&[1.0, -2.0])),
            Err(Error::NotPositiveReal { index: 1, .. })
        ));
        let z = RootMultiset::new(vec![num_complex::Complex::new(1.0, 0.5)]).unwrap();
        assert!(local_expansion_max_plus(&z).is_err());
    }

    #[test]
    fn index_bound_examples() {
        let r = reals(&[1.0, 2.0, 3.0]);
        let report = index_bound_check(&local_expansion_min(&r).unwrap(), &r);
        assert_eq!(report.bound, 6.0);
        assert!(report.all_hold);
        assert_eq!(report.entries.len(), 2);
        assert_eq!(report.entries[0].magnitude, 2.0);
        assert_eq!(report.entries[1].magnitude, 3.0);

        let r = reals(&[0.1, 0.2, 0.3]);
        let report = index_bound_check(&local_expansion_min(&r).unwrap(), &r);
        assert!((report.bound - 0.06).abs() < 1e-16);
        assert!(report.entries[0].holds);
        assert!(!report.entries[1].holds);
        assert!((report.entries[1].magnitude - 0.3).abs() < 1e-15);
        assert!(!report.all_hold);

        let r = reals(&[5.0]);
        let report = index_bound_check(&local_expansion_min(&r).unwrap(), &r);
        assert!(report.entries.is_empty());
        assert!(report.all_hold);
    }

    #[test]
    fn plus_form_bound_uses_power_of_center() {
        let r = reals(&[1.0, 4.0]);
        let report = index_bound_check(&local_expansion_max_plus(&r).unwrap(), &r);
        assert_eq!(report.bound, 16.0);
        assert!(report.all_hold);
    }

    #[test]
    fn min_pair_lemma_examples() {
        assert!(min_pair_lemma(0.5, 1.5).unwrap());
        assert!(min_pair_lemma(0.999, 0.999).unwrap());
        assert!(min_pair_lemma(2.0, 3.0).unwrap());
        assert!(min_pair_lemma(0.0, 3.0).is_err());
        assert!(min_pair_lemma(1.0, -3.0).is_err());
    }
}
