//! Heisenberg-picture evolution and Born-rule expectations without state vectors.
//!
//! An operator element evolves as `O[n, m](t) = O[n, m] exp(i omega[n, m] t)`
//! with `omega[n, m] = (E_n - E_m) / hbar`. An initial condition is nothing but
//! a finite list of labels with amplitudes (or probabilities), and
//!
//! ```text
//! <O>(t) = sum_{n, m} conj(c_n) c_m O[n, m](t)
//! ```
//!
//! runs over the support of that list only.

use std::collections::BTreeMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::model::FrequencyTable;
use crate::operator::{BandedOperator, IndexRange, Tolerance};

/// Normalisation slack for amplitude and probability lists.
pub const NORM_TOL: f64 = 1e-12;

/// Largest imaginary part tolerated in the expectation of a Hermitian operator.
pub const HERMITIAN_IMAG_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("state is empty")]
    EmptyState,
    #[error("amplitudes have squared norm {0}, expected 1")]
    NotNormalized(f64),
    #[error("amplitudes have zero norm and cannot be normalised")]
    ZeroNorm,
    #[error("probability for label {n} is {p}, must be finite and non-negative")]
    InvalidProbability { n: i64, p: f64 },
    #[error("probabilities sum to {0}, expected 1")]
    ProbabilitySum(f64),
    #[error("label {n} lies outside the window {range}")]
    LabelOutOfRange { n: i64, range: IndexRange },
    #[error("operator window {operator} does not match frequency window {frequencies}")]
    RangeMismatch {
        operator: IndexRange,
        frequencies: IndexRange,
    },
    #[error("time grid is empty")]
    EmptyGrid,
    #[error("time grid is not strictly increasing at index {0}")]
    NonIncreasingGrid(usize),
    #[error("times and values differ in length ({times} vs {values})")]
    LengthMismatch { times: usize, values: usize },
    #[error("expectation of a Hermitian operator has imaginary part {imag} at t = {t}")]
    ImaginaryExpectation { t: f64, imag: f64 },
}

pub type Result<T, E = DynamicsError> = std::result::Result<T, E>;

/// Pure initial condition: labels with complex amplitudes, `sum |c_n|^2 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeState {
    amplitudes: BTreeMap<i64, Complex64>,
}

impl AmplitudeState {
    pub fn new(amplitudes: impl IntoIterator<Item = (i64, Complex64)>) -> Result<Self> {
        let amplitudes = collect_amplitudes(amplitudes);
        if amplitudes.is_empty() {
            return Err(DynamicsError::EmptyState);
        }
        let norm = norm_sqr(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(DynamicsError::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales the amplitudes to unit norm.
    pub fn normalized(amplitudes: impl IntoIterator<Item = (i64, Complex64)>) -> Result<Self> {
        let amplitudes = collect_amplitudes(amplitudes);
        if amplitudes.is_empty() {
            return Err(DynamicsError::EmptyState);
        }
        let norm = norm_sqr(&amplitudes).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(DynamicsError::ZeroNorm);
        }
        let amplitudes = amplitudes.into_iter().map(|(n, c)| (n, c / norm)).collect();
        Ok(Self { amplitudes })
    }

    /// `|n>`.
    pub fn eigenstate(n: i64) -> Self {
        Self {
            amplitudes: BTreeMap::from([(n, Complex64::new(1.0, 0.0))]),
        }
    }

    /// `(|n> + |m>) / sqrt(2)`.
    pub fn equal_superposition(n: i64, m: i64) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        Self::normalized([(n, one), (m, one)])
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.amplitudes.iter().map(|(&n, &c)| (n, c))
    }

    pub fn amplitude(&self, n: i64) -> Complex64 {
        self.amplitudes.get(&n).copied().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.amplitudes.keys().copied()
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// Largest `|n|` in the support.
    pub fn max_label(&self) -> u64 {
        self.support().map(i64::unsigned_abs).max().unwrap_or(0)
    }

    fn check_in(&self, range: IndexRange) -> Result<()> {
        check_labels(self.support(), range)
    }
}

fn collect_amplitudes(
    amplitudes: impl IntoIterator<Item = (i64, Complex64)>,
) -> BTreeMap<i64, Complex64> {
    let mut map = BTreeMap::new();
    for (n, c) in amplitudes {
        *map.entry(n).or_insert_with(Complex64::default) += c;
    }
    map
}

fn norm_sqr(amplitudes: &BTreeMap<i64, Complex64>) -> f64 {
    amplitudes.values().map(Complex64::norm_sqr).sum()
}

fn check_labels(labels: impl IntoIterator<Item = i64>, range: IndexRange) -> Result<()> {
    for n in labels {
        if !range.contains(n) {
            return Err(DynamicsError::LabelOutOfRange { n, range });
        }
    }
    Ok(())
}

/// Statistical mixture of eigenstates: labels with probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedState {
    weights: BTreeMap<i64, f64>,
}

impl MixedState {
    pub fn new(weights: impl IntoIterator<Item = (i64, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (n, p) in weights {
            if !(p.is_finite() && p >= 0.0) {
                return Err(DynamicsError::InvalidProbability { n, p });
            }
            *map.entry(n).or_insert(0.0) += p;
        }
        if map.is_empty() {
            return Err(DynamicsError::EmptyState);
        }
        let total: f64 = map.values().sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(DynamicsError::ProbabilitySum(total));
        }
        Ok(Self { weights: map })
    }

    pub fn weights(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.weights.iter().map(|(&n, &p)| (n, p))
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.weights.keys().copied()
    }

    pub fn max_label(&self) -> u64 {
        self.support().map(i64::unsigned_abs).max().unwrap_or(0)
    }
}

/// Either kind of initial condition.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    Pure(AmplitudeState),
    Mixed(MixedState),
}

impl InitialCondition {
    pub fn max_label(&self) -> u64 {
        match self {
            InitialCondition::Pure(s) => s.max_label(),
            InitialCondition::Mixed(s) => s.max_label(),
        }
    }

    pub fn support(&self) -> Vec<i64> {
        match self {
            InitialCondition::Pure(s) => s.support().collect(),
            InitialCondition::Mixed(s) => s.support().collect(),
        }
    }

    pub fn expectation(
        &self,
        op: &BandedOperator,
        freqs: &FrequencyTable,
        t: f64,
    ) -> Result<Complex64> {
        match self {
            InitialCondition::Pure(s) => expectation(s, op, freqs, t),
            InitialCondition::Mixed(s) => expectation_mixed(s, op, freqs, t),
        }
    }
}

/// Expectation values of one observable on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    values: Vec<Complex64>,
    observable_name: String,
    hermitian_input: bool,
}

impl Trajectory {
    pub fn new(
        times: Vec<f64>,
        values: Vec<Complex64>,
        observable_name: impl Into<String>,
        hermitian_input: bool,
    ) -> Result<Self> {
        check_grid(&times)?;
        if times.len() != values.len() {
            return Err(DynamicsError::LengthMismatch {
                times: times.len(),
                values: values.len(),
            });
        }
        if hermitian_input {
            if let Some((&t, v)) = times
                .iter()
                .zip(&values)
                .find(|(_, v)| v.im.abs() > HERMITIAN_IMAG_TOL)
            {
                return Err(DynamicsError::ImaginaryExpectation { t, imag: v.im });
            }
        }
        Ok(Self {
            times,
            values,
            observable_name: observable_name.into(),
            hermitian_input,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn observable_name(&self) -> &str {
        &self.observable_name
    }

    pub fn hermitian_input(&self) -> bool {
        self.hermitian_input
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest pointwise `|a(t) - b(t)|`; `None` if the time grids differ.
    pub fn max_deviation(&self, other: &Trajectory) -> Option<f64> {
        if self.times != other.times {
            return None;
        }
        Some(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max),
        )
    }
}

pub(crate) fn check_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(DynamicsError::EmptyGrid);
    }
    if let Some(i) = times
        .windows(2)
        .position(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
    {
        return Err(DynamicsError::NonIncreasingGrid(i + 1));
    }
    Ok(())
}

fn check_frequencies(op: &BandedOperator, freqs: &FrequencyTable) -> Result<()> {
    if op.range() != freqs.range() {
        return Err(DynamicsError::RangeMismatch {
            operator: op.range(),
            frequencies: freqs.range(),
        });
    }
    Ok(())
}

fn phase(freqs: &FrequencyTable, n: i64, m: i64, t: f64) -> Complex64 {
    let omega = freqs
        .omega(n, m)
        .expect("labels checked against the window");
    Complex64::from_polar(1.0, omega * t)
}

/// `O(t)` with every element multiplied by `exp(i omega[n, m] t)`.
pub fn evolve_operator(
    op: &BandedOperator,
    freqs: &FrequencyTable,
    t: f64,
) -> Result<BandedOperator> {
    check_frequencies(op, freqs)?;
    Ok(op.map_elements(|n, m, z| if n == m { z } else { z * phase(freqs, n, m, t) }))
}

/// `<O>(t) = sum_{n, m} conj(c_n) c_m O[n, m] exp(i omega[n, m] t)` over the
/// state's support.
pub fn expectation(
    state: &AmplitudeState,
    op: &BandedOperator,
    freqs: &FrequencyTable,
    t: f64,
) -> Result<Complex64> {
    check_frequencies(op, freqs)?;
    state.check_in(op.range())?;
    let mut total = Complex64::new(0.0, 0.0);
    for (n, cn) in state.amplitudes() {
        for (m, cm) in state.amplitudes() {
            let element = op.get(n, m);
            if element == Complex64::default() {
                continue;
            }
            let evolved = if n == m {
                element
            } else {
                element * phase(freqs, n, m, t)
            };
            total += cn.conj() * cm * evolved;
        }
    }
    Ok(total)
}

/// `<O> = sum_n p_n O[n, n]`; diagonal elements do not evolve.
pub fn expectation_mixed(
    state: &MixedState,
    op: &BandedOperator,
    freqs: &FrequencyTable,
    _t: f64,
) -> Result<Complex64> {
    check_frequencies(op, freqs)?;
    check_labels(state.support(), op.range())?;
    Ok(state
        .weights()
        .map(|(n, p)| op.get(n, n) * p)
        .fold(Complex64::new(0.0, 0.0), |acc, z| acc + z))
}

/// One [`expectation`] per grid point.
pub fn expectation_series(
    state: &InitialCondition,
    op: &BandedOperator,
    freqs: &FrequencyTable,
    times: &[f64],
    observable_name: &str,
) -> Result<Trajectory> {
    check_grid(times)?;
    let values = times
        .iter()
        .map(|&t| state.expectation(op, freqs, t))
        .collect::<Result<Vec<_>>>()?;
    let hermitian = op.is_hermitian(Tolerance::default());
    Trajectory::new(times.to_vec(), values, observable_name, hermitian)
}

/// `steps + 1` equally spaced points from `start` to `stop` inclusive.
pub fn uniform_grid(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    let span = stop - start;
    (0..=steps)
        .map(|i| start + span * (i as f64 / steps as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Observable, PhysicalParams, RotorModel};

    fn model() -> RotorModel {
        RotorModel::new(PhysicalParams::natural(), IndexRange::symmetric(8))
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn state_construction() {
        assert_eq!(
            AmplitudeState::new([(1, c(1.0, 0.0)), (2, c(1.0, 0.0))]),
            Err(DynamicsError::NotNormalized(2.0))
        );
        assert_eq!(AmplitudeState::new([]), Err(DynamicsError::EmptyState));
        assert_eq!(
            AmplitudeState::normalized([(0, c(0.0, 0.0))]),
            Err(DynamicsError::ZeroNorm)
        );
        let s = AmplitudeState::equal_superposition(1, 2).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() <= 1e-15);
        assert_eq!(s.support().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn mixed_state_validation() {
        assert!(matches!(
            MixedState::new([(1, 0.5), (2, -0.5)]),
            Err(DynamicsError::InvalidProbability { n: 2, .. })
        ));
        assert!(matches!(
            MixedState::new([(1, 0.5), (2, 0.4)]),
            Err(DynamicsError::ProbabilitySum(_))
        ));
        assert!(MixedState::new([(1, 0.5), (2, 0.5)]).is_ok());
    }

    #[test]
    fn evolution_at_zero_time_is_identity() {
        let m = model();
        let freqs = m.frequencies();
        let (px, _) = m.momentum();
        assert_eq!(evolve_operator(&px, &freqs, 0.0).unwrap(), px);
    }

    #[test]
    fn position_element_phase() {
        let m = model();
        let freqs = m.frequencies();
        let (x, _) = m.position();
        let t = 0.7;
        let x_t = evolve_operator(&x, &freqs, t).unwrap();
        let expected = Complex64::from_polar(0.5, -1.5 * t);
        assert!((x_t.get(1, 2) - expected).norm() <= 1e-15);
    }

    #[test]
    fn diagonal_operators_do_not_evolve() {
        let m = model();
        let h = m.hamiltonian();
        assert_eq!(evolve_operator(&h, &m.frequencies(), 12.5).unwrap(), h);
    }

    #[test]
    fn evolve_rejects_foreign_frequencies() {
        let m = model();
        let other = RotorModel::new(PhysicalParams::natural(), IndexRange::symmetric(3));
        assert!(matches!(
            evolve_operator(&m.hamiltonian(), &other.frequencies(), 1.0),
            Err(DynamicsError::RangeMismatch { .. })
        ));
    }

    #[test]
    fn superposition_of_one_and_two() {
        // x[1,2] = r/2, so <x>(t) = (r/2) cos(omega_21 t) with omega_21 = 1.5.
        let m = model();
        let freqs = m.frequencies();
        let (x, _) = m.position();
        let s = AmplitudeState::equal_superposition(1, 2).unwrap();
        for &t in &[0.0, 0.3, 1.0, 2.5, 7.0] {
            let v = expectation(&s, &x, &freqs, t).unwrap();
            assert!((v - c(0.5 * (1.5 * t).cos(), 0.0)).norm() <= 1e-15, "t={t}");
        }
    }

    #[test]
    fn eigenstate_has_no_position_expectation() {
        let m = model();
        let freqs = m.frequencies();
        let (x, _) = m.position();
        let s = AmplitudeState::eigenstate(1);
        for &t in &[0.0, 1.0, 3.0] {
            assert_eq!(expectation(&s, &x, &freqs, t).unwrap(), c(0.0, 0.0));
        }
    }

    #[test]
    fn ground_and_first_level() {
        let m = model();
        let freqs = m.frequencies();
        let (x, _) = m.position();
        let s = AmplitudeState::equal_superposition(0, 1).unwrap();
        for &t in &[0.0, 0.4, 2.0] {
            let v = expectation(&s, &x, &freqs, t).unwrap();
            assert!((v.re - 0.5 * (0.5 * t).cos()).abs() <= 1e-15);
        }
    }

    #[test]
    fn out_of_window_state_is_rejected() {
        let m = model();
        let s = AmplitudeState::eigenstate(9);
        assert!(matches!(
            expectation(&s, &m.hamiltonian(), &m.frequencies(), 0.0),
            Err(DynamicsError::LabelOutOfRange { n: 9, .. })
        ));
    }

    #[test]
    fn mixed_expectations() {
        let m = model();
        let freqs = m.frequencies();
        let mixed = MixedState::new([(1, 0.5), (2, 0.5)]).unwrap();
        assert_eq!(
            expectation_mixed(&mixed, &m.observable(Observable::X), &freqs, 3.0).unwrap(),
            c(0.0, 0.0)
        );
        assert_eq!(
            expectation_mixed(&mixed, &m.hamiltonian(), &freqs, 3.0).unwrap(),
            c(1.25, 0.0)
        );
        let pure = MixedState::new([(3, 1.0)]).unwrap();
        assert_eq!(
            expectation_mixed(&pure, &m.angular_momentum(), &freqs, 0.0).unwrap(),
            c(3.0, 0.0)
        );
    }

    #[test]
    fn series_examples() {
        let m = model();
        let freqs = m.frequencies();
        let (x, _) = m.position();
        let s = InitialCondition::Pure(AmplitudeState::equal_superposition(1, 2).unwrap());
        let traj = expectation_series(&s, &x, &freqs, &[0.0], "x").unwrap();
        assert!((traj.values()[0] - c(0.5, 0.0)).norm() <= 1e-15);
        let half_period = std::f64::consts::PI / 1.5;
        let traj = expectation_series(&s, &x, &freqs, &[half_period], "x").unwrap();
        assert!((traj.values()[0] - c(-0.5, 0.0)).norm() <= 1e-15);
        assert!(traj.hermitian_input());
    }

    #[test]
    fn series_rejects_bad_grids() {
        let m = model();
        let s = InitialCondition::Pure(AmplitudeState::eigenstate(0));
        let h = m.hamiltonian();
        let freqs = m.frequencies();
        assert_eq!(
            expectation_series(&s, &h, &freqs, &[], "H"),
            Err(DynamicsError::EmptyGrid)
        );
        assert_eq!(
            expectation_series(&s, &h, &freqs, &[0.0, 1.0, 1.0], "H"),
            Err(DynamicsError::NonIncreasingGrid(2))
        );
    }

    #[test]
    fn trajectory_flags_imaginary_hermitian_values() {
        let err = Trajectory::new(vec![0.0], vec![c(1.0, 1e-6)], "x", true).unwrap_err();
        assert!(matches!(err, DynamicsError::ImaginaryExpectation { .. }));
        assert!(Trajectory::new(vec![0.0], vec![c(1.0, 1e-6)], "x", false).is_ok());
    }

    #[test]
    fn uniform_grid_endpoints() {
        let g = uniform_grid(0.0, 2.0, 4);
        assert_eq!(g, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }
}
