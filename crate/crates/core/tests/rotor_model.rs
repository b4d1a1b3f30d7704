mod common;

use common::{dense, interior_diff, naive_commutator, naive_product, Dense};
use num_complex::Complex64;
use planar_rotor::identities::{commutator_suite, Form};
use planar_rotor::model::selection_rule_check;
use planar_rotor::oracle::fourier_element;
use planar_rotor::{AngularGrid, IndexRange, Observable, PhysicalParams, RotorModel, Tolerance};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = PhysicalParams> {
    (0.2..5.0f64, 0.2..5.0f64, 0.2..5.0f64)
        .prop_map(|(h, m, r)| PhysicalParams::new(h, m, r).unwrap())
}

/// Operators written down from their element formulas, on a dense grid of labels.
struct Reference {
    labels: Vec<i64>,
    hbar: f64,
    mass: f64,
    radius: f64,
}

impl Reference {
    fn new(p: &PhysicalParams, n: i64) -> Self {
        Self {
            labels: (-n..=n).collect(),
            hbar: p.hbar(),
            mass: p.mass(),
            radius: p.radius(),
        }
    }

    fn build(&self, f: impl Fn(i64, i64) -> Complex64) -> Dense {
        self.labels
            .iter()
            .map(|&n| self.labels.iter().map(|&m| f(n, m)).collect())
            .collect()
    }

    fn omega(&self, n: i64, m: i64) -> f64 {
        let inertia = self.mass * self.radius * self.radius;
        self.hbar * ((n * n - m * m) as f64) / (2.0 * inertia)
    }

    fn cos(&self) -> Dense {
        self.build(|n, m| Complex64::new(if (n - m).abs() == 1 { 0.5 } else { 0.0 }, 0.0))
    }

    fn sin(&self) -> Dense {
        self.build(|n, m| match m - n {
            1 => Complex64::new(0.0, 0.5),
            -1 => Complex64::new(0.0, -0.5),
            _ => Complex64::new(0.0, 0.0),
        })
    }

    fn x(&self) -> Dense {
        scale(&self.cos(), Complex64::new(self.radius, 0.0))
    }

    fn y(&self) -> Dense {
        scale(&self.sin(), Complex64::new(self.radius, 0.0))
    }

    fn momentum(&self, q: &Dense) -> Dense {
        let mu = self.mass;
        self.build(|n, m| {
            let i = (n + self.labels.len() as i64 / 2) as usize;
            let j = (m + self.labels.len() as i64 / 2) as usize;
            Complex64::new(0.0, mu * self.omega(n, m)) * q[i][j]
        })
    }

    fn l(&self) -> Dense {
        self.build(|n, m| Complex64::new(if n == m { n as f64 * self.hbar } else { 0.0 }, 0.0))
    }

    fn identity(&self) -> Dense {
        self.build(|n, m| Complex64::new(if n == m { 1.0 } else { 0.0 }, 0.0))
    }
}

fn scale(a: &Dense, z: Complex64) -> Dense {
    a.iter()
        .map(|row| row.iter().map(|v| v * z).collect())
        .collect()
}

fn add(a: &Dense, b: &Dense) -> Dense {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn operators_match_element_formulas(p in params()) {
        let model = RotorModel::new(p, IndexRange::symmetric(6));
        let r = Reference::new(&p, 6);
        let (px, py) = model.momentum();
        prop_assert!(interior_diff(&dense(&model.position().0), &r.x(), 0) <= 1e-15);
        prop_assert!(interior_diff(&dense(&model.position().1), &r.y(), 0) <= 1e-15);
        prop_assert!(interior_diff(&dense(&px), &r.momentum(&r.x()), 0) <= 1e-12);
        prop_assert!(interior_diff(&dense(&py), &r.momentum(&r.y()), 0) <= 1e-12);
        prop_assert!(interior_diff(&dense(&model.angular_momentum()), &r.l(), 0) == 0.0);
    }

    #[test]
    fn commutators_match_dense_reference(p in params()) {
        let model = RotorModel::new(p, IndexRange::symmetric(6));
        let r = Reference::new(&p, 6);
        let (x, y) = (r.x(), r.y());
        let (rpx, rpy) = (r.momentum(&x), r.momentum(&y));
        let (px, py) = model.momentum();
        let (bx, by) = model.position();
        let tol = 1e-12 * (1.0 + p.hbar() * p.hbar() / (p.radius() * p.radius())) * 36.0;
        let pairs = [
            (bx.commutator(&px).unwrap(), naive_commutator(&x, &rpx)),
            (by.commutator(&py).unwrap(), naive_commutator(&y, &rpy)),
            (px.commutator(&py).unwrap(), naive_commutator(&rpx, &rpy)),
        ];
        for (banded, reference) in &pairs {
            prop_assert!(interior_diff(&dense(banded), reference, 2) <= tol);
        }
        // sin^2 + cos^2 = 1 and the exact [x, p_x] + [y, p_y] from the dense side.
        let pyth = add(&naive_product(&r.sin(), &r.sin()), &naive_product(&r.cos(), &r.cos()));
        prop_assert!(interior_diff(&pyth, &r.identity(), 1) <= 1e-15);
        let sum = add(&naive_commutator(&x, &rpx), &naive_commutator(&y, &rpy));
        let i_hbar = scale(&r.identity(), Complex64::new(0.0, p.hbar()));
        prop_assert!(interior_diff(&sum, &i_hbar, 2) <= tol);
    }

    #[test]
    fn suite_holds_in_any_units(p in params()) {
        let model = RotorModel::new(p, IndexRange::symmetric(8));
        // The exact identities are O(1) in hbar and r; use a relative tolerance.
        let scale = 1.0 + p.hbar().powi(2) * (1.0 + 1.0 / p.radius().powi(2)) * 64.0
            + p.hbar() * p.radius().powi(2);
        let tol = Tolerance::new(1e-13 * scale).unwrap();
        for check in commutator_suite(&model, 2, tol).unwrap() {
            prop_assert!(check.as_expected(), "{:?}", check);
        }
    }

    #[test]
    fn spectrum_is_even_and_increasing(p in params()) {
        let model = RotorModel::new(p, IndexRange::symmetric(12));
        let spectrum = model.spectrum();
        prop_assert_eq!(spectrum.energy(0), Some(0.0));
        for n in 1..=12 {
            let e = spectrum.energy(n).unwrap();
            prop_assert_eq!(e.to_bits(), spectrum.energy(-n).unwrap().to_bits());
            prop_assert!(e > spectrum.energy(n - 1).unwrap());
        }
        let h = model.hamiltonian();
        let closed = model.hamiltonian_closed_form();
        prop_assert!(h.max_abs_diff(&closed).unwrap() <= 1e-14 * (1.0 + closed.max_abs()));
    }

    #[test]
    fn mass_scaling_by_powers_of_two_is_exact(p in params(), k in -6i32..=6) {
        let s = 2f64.powi(k);
        let scaled = PhysicalParams::new(p.hbar(), p.mass() * s, p.radius()).unwrap();
        let range = IndexRange::symmetric(10);
        let a = RotorModel::new(p, range).frequencies();
        let b = RotorModel::new(scaled, range).frequencies();
        for n in range.labels() {
            prop_assert_eq!(p.energy(n) / s, scaled.energy(n));
            for m in range.labels() {
                prop_assert_eq!(a.omega(n, m).unwrap() / s, b.omega(n, m).unwrap());
            }
        }
    }

    #[test]
    fn mass_scaling_by_any_factor(p in params(), s in 0.1..10.0f64) {
        let scaled = PhysicalParams::new(p.hbar(), p.mass() * s, p.radius()).unwrap();
        for n in -10..=10i64 {
            let expected = p.energy(n) / s;
            prop_assert!((scaled.energy(n) - expected).abs() <= 4.0 * f64::EPSILON * expected);
        }
    }
}

#[test]
fn trig_elements_match_quadrature() {
    let n_max = 10i64;
    let model = RotorModel::new(
        PhysicalParams::natural(),
        IndexRange::symmetric(n_max as u32),
    );
    let (sin, cos) = model.trig();
    let grid = AngularGrid::new(128).unwrap();
    for n in -n_max..=n_max {
        for m in -n_max..=n_max {
            let qc = fourier_element(grid, f64::cos, 1, n, m).unwrap();
            let qs = fourier_element(grid, f64::sin, 1, n, m).unwrap();
            assert!((qc - cos.get(n, m)).norm() <= 1e-12, "cos ({n},{m})");
            assert!((qs - sin.get(n, m)).norm() <= 1e-12, "sin ({n},{m})");
        }
    }
}

#[test]
fn coordinates_obey_the_selection_rule() {
    let model = RotorModel::new(
        PhysicalParams::new(0.5, 2.0, 1.5).unwrap(),
        IndexRange::symmetric(6),
    );
    let freqs = model.frequencies();
    for which in [Observable::X, Observable::Y, Observable::Px, Observable::Py] {
        let report = selection_rule_check(&model.observable(which), &freqs, Tolerance::default());
        assert!(report.passed(), "{which}");
        assert_eq!(report.offsets.into_iter().collect::<Vec<_>>(), vec![-1, 1]);
        for t in report.allowed {
            assert_eq!(t.omega, freqs.omega(t.n, t.m).unwrap());
        }
    }
}

#[test]
fn momentum_element_example() {
    let model = RotorModel::new(PhysicalParams::natural(), IndexRange::symmetric(4));
    let (px, _) = model.momentum();
    assert!((px.get(1, 0) - Complex64::new(0.0, 0.25)).norm() <= 1e-15);
}

#[test]
fn canonical_claims_fail_by_known_amounts() {
    let p = PhysicalParams::new(0.8, 1.0, 2.0).unwrap();
    let model = RotorModel::new(p, IndexRange::symmetric(10));
    let checks = commutator_suite(&model, 2, Tolerance::default()).unwrap();
    let get = |name: &str| checks.iter().find(|c| c.name == name).unwrap();
    assert_eq!(get("[x,p_x] = i hbar 1").form, Form::CanonicalClaim);
    assert!((get("[x,p_x] = i hbar 1").residual - p.hbar() / 2.0).abs() <= 1e-12);
    assert!((get("[y,p_y] = i hbar 1").residual - p.hbar() / 2.0).abs() <= 1e-12);
    let edge = p.hbar() * p.hbar() * 8.0 / (p.radius() * p.radius());
    assert!((get("[p_x,p_y] = 0").residual - edge).abs() <= 1e-12);
}
