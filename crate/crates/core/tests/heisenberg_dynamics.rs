use num_complex::Complex64;
use planar_rotor::dynamics::{evolve_operator, expectation, expectation_series, uniform_grid};
use planar_rotor::oracle::grid_evolve_expectation;
use planar_rotor::{
    AmplitudeState, AngularGrid, BandedOperator, GridObservable, IndexRange, InitialCondition,
    Observable, PhysicalParams, RotorModel,
};
use proptest::prelude::*;

const WINDOW: u32 = 8;

fn params() -> impl Strategy<Value = PhysicalParams> {
    (0.3..3.0f64, 0.3..3.0f64, 0.3..3.0f64)
        .prop_map(|(h, m, r)| PhysicalParams::new(h, m, r).unwrap())
}

fn raw_amplitudes(max_label: i64) -> impl Strategy<Value = Vec<(i64, Complex64)>> {
    proptest::collection::btree_map(-max_label..=max_label, (-1.0..1.0f64, -1.0..1.0f64), 1..6)
        .prop_filter("nonzero", |m| {
            m.values().any(|&(a, b)| a * a + b * b > 1e-3)
        })
        .prop_map(|m| {
            m.into_iter()
                .map(|(n, (re, im))| (n, Complex64::new(re, im)))
                .collect()
        })
}

fn state(max_label: i64) -> impl Strategy<Value = AmplitudeState> {
    raw_amplitudes(max_label).prop_map(|a| AmplitudeState::normalized(a).unwrap())
}

fn times() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::btree_set(0u32..20_000, 2..40)
        .prop_map(|s| s.into_iter().map(|k| k as f64 * 1e-3).collect())
}

fn model(p: PhysicalParams) -> RotorModel {
    RotorModel::new(p, IndexRange::symmetric(WINDOW))
}

/// `sum conj(a_n) b_m O[n, m](t)` straight from the evolved elements.
fn bilinear(a: &AmplitudeState, b: &AmplitudeState, op_t: &BandedOperator) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for (n, an) in a.amplitudes() {
        for (m, bm) in b.amplitudes() {
            total += an.conj() * bm * op_t.get(n, m);
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn evolution_composes(p in params(), t1 in 0.0..20.0f64, t2 in 0.0..20.0f64) {
        let m = model(p);
        let freqs = m.frequencies();
        for which in Observable::ALL {
            let op = m.observable(which);
            let twice = evolve_operator(&evolve_operator(&op, &freqs, t1).unwrap(), &freqs, t2).unwrap();
            let once = evolve_operator(&op, &freqs, t1 + t2).unwrap();
            let scale = 1.0 + op.max_abs();
            prop_assert!(twice.max_abs_diff(&once).unwrap() <= 1e-12 * scale, "{}", which);
        }
    }

    #[test]
    fn evolution_keeps_moduli_and_hermiticity(p in params(), t in -50.0..50.0f64) {
        let m = model(p);
        let freqs = m.frequencies();
        for which in Observable::ALL {
            let op = m.observable(which);
            let evolved = evolve_operator(&op, &freqs, t).unwrap();
            for (n, k, z) in op.elements() {
                prop_assert!((evolved.get(n, k).norm() - z.norm()).abs() <= 1e-13 * (1.0 + z.norm()));
            }
            prop_assert!(evolved.hermiticity_defect() <= 1e-13 * (1.0 + op.max_abs()), "{}", which);
        }
    }

    #[test]
    fn expectation_is_sesquilinear(
        p in params(),
        a in state(6),
        b in state(6),
        alpha in (-1.0..1.0f64, -1.0..1.0f64),
        beta in (-1.0..1.0f64, -1.0..1.0f64),
        t in 0.0..20.0f64,
    ) {
        let alpha = Complex64::new(alpha.0, alpha.1);
        let beta = Complex64::new(beta.0, beta.1);
        let combined: Vec<_> = a.amplitudes().map(|(n, c)| (n, alpha * c))
            .chain(b.amplitudes().map(|(n, c)| (n, beta * c)))
            .collect();
        let mut summed = std::collections::BTreeMap::<i64, Complex64>::new();
        for &(n, c) in &combined {
            *summed.entry(n).or_default() += c;
        }
        let raw_norm: f64 = summed.values().map(|c| c.norm_sqr()).sum();
        prop_assume!(raw_norm > 1e-3);
        let mixed = AmplitudeState::normalized(combined).unwrap();
        let m = model(p);
        let freqs = m.frequencies();
        for which in [Observable::X, Observable::Px, Observable::L, Observable::H] {
            let op = m.observable(which);
            let op_t = evolve_operator(&op, &freqs, t).unwrap();
            let lhs = expectation(&mixed, &op, &freqs, t).unwrap() * raw_norm;
            let rhs = alpha.norm_sqr() * expectation(&a, &op, &freqs, t).unwrap()
                + beta.norm_sqr() * expectation(&b, &op, &freqs, t).unwrap()
                + alpha.conj() * beta * bilinear(&a, &b, &op_t)
                + beta.conj() * alpha * bilinear(&b, &a, &op_t);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + op.max_abs()), "{}", which);
        }
    }

    #[test]
    fn energy_and_norm_are_conserved(p in params(), s in state(6), grid in times()) {
        let m = model(p);
        let freqs = m.frequencies();
        let ic = InitialCondition::Pure(s);
        let energy = expectation_series(&ic, &m.hamiltonian(), &freqs, &grid, "H").unwrap();
        let e0 = energy.values()[0];
        for e in energy.values() {
            prop_assert!((e - e0).norm() <= 1e-13);
        }
        let identity = BandedOperator::identity(m.range());
        let norm = expectation_series(&ic, &identity, &freqs, &grid, "1").unwrap();
        for v in norm.values() {
            prop_assert!((v - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn matches_schrodinger_picture(p in params(), s in state(5)) {
        let m = model(p);
        let freqs = m.frequencies();
        let grid = AngularGrid::new(64).unwrap();
        let times = uniform_grid(0.0, 20.0, 80);
        let ic = InitialCondition::Pure(s.clone());
        for which in [Observable::X, Observable::Y, Observable::L, Observable::H, Observable::Px, Observable::Py] {
            let heisenberg = expectation_series(&ic, &m.observable(which), &freqs, &times, which.name()).unwrap();
            let obs = GridObservable::for_observable(which, &p);
            let schrodinger = grid_evolve_expectation(&s, &obs, &p, grid, &times, which.name()).unwrap();
            let dev = heisenberg.max_deviation(&schrodinger).unwrap();
            prop_assert!(dev <= 1e-6, "{} deviates by {}", which, dev);
        }
    }
}

#[test]
fn superposition_of_first_two_levels() {
    // <x>(t) = 2 Re(conj(c1) c2 x[1,2] e^{i omega_12 t}) with x[1,2] = r/2.
    let m = model(PhysicalParams::natural());
    let freqs = m.frequencies();
    let s = AmplitudeState::equal_superposition(1, 2).unwrap();
    let (x, _) = m.position();
    for k in 0..50 {
        let t = 0.37 * k as f64;
        let v = expectation(&s, &x, &freqs, t).unwrap();
        assert!((v.re - 0.5 * (1.5 * t).cos()).abs() <= 1e-15);
        assert!(v.im.abs() <= 1e-15);
    }
}
