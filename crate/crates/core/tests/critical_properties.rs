mod common;

use common::*;
use limpoly::critical::{hull_distance, real_critical_points};
use limpoly::poly::{derivative_coeffs, nth_derivative_coeffs, scaled_residual};
use limpoly::{
    critical_points, higher_derivative_zeros, sendov_distances, Polynomial, Polynomial32, Roots, Roots32, C64,
};
use proptest::prelude::*;

fn centroid(v: &[C64]) -> C64 {
    v.iter().sum::<C64>() / v.len() as f64
}

proptest! {
    #[test]
    fn gauss_lucas(roots in mixed_roots(2, 12)) {
        let crit = critical_points(&Polynomial::from_roots(&roots)).unwrap();
        prop_assert_eq!(crit.len(), roots.len() - 1);
        let size = roots.roots().iter().map(|a| a.norm()).fold(0.0, f64::max);
        for &b in &crit.points {
            prop_assert!(hull_distance(roots.roots(), b) <= 1e-9 * (1.0 + size));
        }
    }

    #[test]
    fn centroid_is_preserved(roots in mixed_roots(2, 12)) {
        let crit = critical_points(&Polynomial::from_roots(&roots)).unwrap();
        let scale = roots.roots().iter().map(|a| a.norm()).sum::<f64>() / roots.len() as f64;
        prop_assert!((centroid(&crit.points) - centroid(roots.roots())).norm() <= 1e-8 * scale);
    }

    #[test]
    fn residuals_are_small(roots in mixed_roots(2, 12)) {
        let p = Polynomial::from_roots(&roots);
        let crit = critical_points(&p).unwrap();
        let dp = derivative_coeffs(p.coeffs());
        for (&b, &r) in crit.points.iter().zip(&crit.residuals) {
            prop_assert!(r <= 1e-8);
            prop_assert!((scaled_residual(&dp, b) - r).abs() <= 1e-15 + 1e-6 * r);
        }
    }

    #[test]
    fn real_zeros_interlace(roots in positive_roots(2, 12)) {
        let mut a: Vec<f64> = roots.roots().iter().map(|z| z.re).collect();
        a.sort_by(f64::total_cmp);
        let b = real_critical_points(&a);
        prop_assert_eq!(b.len(), a.len() - 1);
        for (k, &x) in b.iter().enumerate() {
            prop_assert!(a[k] <= x && x <= a[k + 1], "{} not in [{}, {}]", x, a[k], a[k + 1]);
        }
        let crit = critical_points(&Polynomial::from_roots(&roots)).unwrap();
        prop_assert!(crit.points.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn higher_derivative_zeros_solve_their_derivative(roots in mixed_roots(3, 10), k in 1usize..9) {
        let n = roots.len();
        let k = 1 + k % (n - 1);
        let p = Polynomial::from_roots(&roots);
        let z = higher_derivative_zeros(&p, k).unwrap();
        prop_assert_eq!(z.len(), n - k);
        let dk = nth_derivative_coeffs(p.coeffs(), k);
        for &b in &z.points {
            prop_assert!(scaled_residual(&dk, b) <= 1e-8);
        }
    }

    #[test]
    fn sendov_nearest_is_row_minimum(roots in mixed_roots(2, 10)) {
        let crit = critical_points(&Polynomial::from_roots(&roots)).unwrap();
        let d = sendov_distances(&roots, &crit);
        for (row, &near) in d.matrix.iter().zip(&d.nearest) {
            prop_assert_eq!(row.iter().copied().fold(f64::INFINITY, f64::min), near);
        }
        prop_assert_eq!(d.all_within_unit, d.nearest.iter().all(|&x| x < 1.0));
    }
}

#[test]
fn oracle_critical_points() {
    let r = Roots::from_reals(&[1.0, 2.0, 3.0]).unwrap();
    let crit = critical_points(&Polynomial::from_roots(&r)).unwrap();
    let mut b: Vec<f64> = crit.points.iter().map(|z| z.re).collect();
    b.sort_by(f64::total_cmp);
    assert!((b[0] - 1.4226497308103742).abs() <= 1e-10);
    assert!((b[1] - 2.5773502691896258).abs() <= 1e-10);
}

#[test]
fn multiple_roots_contribute_multiplicity_minus_one() {
    let r = Roots::from_reals(&[0.7, 0.7, 0.7, 0.7, 2.0]).unwrap();
    let crit = critical_points(&Polynomial::from_roots(&r)).unwrap();
    assert_eq!(crit.points.iter().filter(|z| z.re == 0.7).count(), 3);
    let quartic = Roots::new(vec![
        C64::new(1.0, 0.0),
        C64::new(0.0, 1.0),
        C64::new(-1.0, 0.0),
        C64::new(0.0, -1.0),
    ])
    .unwrap();
    let crit = critical_points(&Polynomial::from_roots(&quartic)).unwrap();
    assert!(crit.points.iter().all(|z| z.norm() < 1e-9), "{:?}", crit.points);
}

#[test]
fn single_precision_path() {
    let r = Roots32::from_reals(&[1.0, 2.0, 3.0]).unwrap();
    let crit = critical_points(&Polynomial32::from_roots(&r)).unwrap();
    let mut b: Vec<f32> = crit.points.iter().map(|z| z.re).collect();
    b.sort_by(f32::total_cmp);
    assert!((b[0] - 1.422_649_7).abs() < 1e-5);
    assert!((b[1] - 2.577_350_3).abs() < 1e-5);
}
