#![allow(dead_code)]

use limpoly::{Roots, C64};
use proptest::prelude::*;

pub fn positive_root() -> impl Strategy<Value = f64> {
    (-3.0f64..3.0).prop_map(|e| 10f64.powf(e))
}

pub fn positive_roots(lo: usize, hi: usize) -> impl Strategy<Value = Roots> {
    prop::collection::vec(positive_root(), lo..=hi).prop_map(|v| Roots::from_reals(&v).unwrap())
}

pub fn disk_point(radius: f64) -> impl Strategy<Value = C64> {
    (0.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(move |(u, t)| C64::from_polar(radius * u.sqrt(), t))
}

pub fn complex_roots(lo: usize, hi: usize) -> impl Strategy<Value = Roots> {
    prop::collection::vec(disk_point(10.0), lo..=hi).prop_map(|v| Roots::new(v).unwrap())
}

pub fn mixed_roots(lo: usize, hi: usize) -> impl Strategy<Value = Roots> {
    prop_oneof![positive_roots(lo, hi), complex_roots(lo, hi)]
}

pub fn product_eval(roots: &Roots, x: C64) -> C64 {
    roots.roots().iter().fold(C64::new(1.0, 0.0), |acc, &a| acc * (x - a))
}

/// `|a - b|` over a caller-supplied magnitude scale.
pub fn scaled_err(a: C64, b: C64, scale: f64) -> f64 {
    if scale == 0.0 {
        (a - b).norm()
    } else {
        (a - b).norm() / scale
    }
}
