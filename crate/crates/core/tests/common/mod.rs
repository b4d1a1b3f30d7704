#![allow(dead_code)]

use std::collections::BTreeMap;

use num_complex::Complex64;
use planar_rotor::{BandedOperator, IndexRange};
use proptest::prelude::*;

/// A point in the closed unit disc.
pub fn unit_disc() -> impl Strategy<Value = Complex64> {
    (0.0..=1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, a)| Complex64::from_polar(r, a))
}

/// Random banded operator on `range` with offsets drawn from `-max_band..=max_band`.
pub fn banded(range: IndexRange, max_band: i64) -> impl Strategy<Value = BandedOperator> {
    let offsets =
        proptest::collection::btree_set(-max_band..=max_band, 1..=(2 * max_band + 1) as usize);
    offsets.prop_flat_map(move |offsets| {
        let bands: Vec<_> = offsets
            .into_iter()
            .map(|k| {
                proptest::collection::vec(unit_disc(), range.band_len(k)).prop_map(move |v| (k, v))
            })
            .collect();
        bands.prop_map(move |bands| {
            let map: BTreeMap<i64, Vec<Complex64>> = bands.into_iter().collect();
            BandedOperator::from_bands(range, map).unwrap()
        })
    })
}

/// Plain row-major square matrix indexed from the window's lowest label.
pub type Dense = Vec<Vec<Complex64>>;

pub fn dense(op: &BandedOperator) -> Dense {
    let range = op.range();
    range
        .labels()
        .map(|n| range.labels().map(|m| op.get(n, m)).collect())
        .collect()
}

/// Textbook triple loop.
pub fn naive_product(a: &Dense, b: &Dense) -> Dense {
    let len = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); len]; len];
    for i in 0..len {
        for j in 0..len {
            for k in 0..len {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn naive_sub(a: &Dense, b: &Dense) -> Dense {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn naive_commutator(a: &Dense, b: &Dense) -> Dense {
    naive_sub(&naive_product(a, b), &naive_product(b, a))
}

/// Max `|a[i][j] - b[i][j]|` over rows and columns at least `margin` from the edge.
pub fn interior_diff(a: &Dense, b: &Dense, margin: usize) -> f64 {
    let len = a.len();
    let mut worst = 0.0f64;
    for i in margin..len - margin {
        for j in margin..len - margin {
            worst = worst.max((a[i][j] - b[i][j]).norm());
        }
    }
    worst
}

pub fn max_diff(a: &BandedOperator, b: &BandedOperator) -> f64 {
    a.max_abs_diff(b).unwrap()
}
