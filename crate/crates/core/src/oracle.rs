//! Schrodinger-picture cross-check on a periodic angular grid.
//!
//! Two independent channels:
//!
//! * a second-order finite-difference discretisation of
//!   `-(hbar^2 / 2I) psi'' = E psi` with periodic wrap, whose eigenvalues
//!   converge to `hbar^2 n^2 / 2I` as `O(h^2)`;
//! * mode-exact evolution of `psi(phi, t) = sum_n c_n exp(i n phi - i E_n t / hbar) / sqrt(2 pi)`
//!   sampled on the grid, with expectations taken by periodic trapezoidal
//!   quadrature. The quadrature is exact for trigonometric polynomials of
//!   degree below the number of nodes, so disagreement with the Heisenberg
//!   picture can only come from a genuine error.
//!
//! None of this module touches [`BandedOperator`](crate::operator::BandedOperator).

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

use crate::dynamics::{check_grid, AmplitudeState, DynamicsError, Trajectory};
use crate::model::{Observable, PhysicalParams};

/// Smallest grid accepted.
pub const MIN_POINTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("grid needs at least {MIN_POINTS} points, got {0}")]
    TooFewPoints(usize),
    #[error("grid of {points} points cannot resolve trigonometric degree {degree}")]
    GridTooCoarse { points: usize, degree: u64 },
    #[error("requested {requested} eigenvalues from a {points}-point grid")]
    TooManyLevels { requested: usize, points: usize },
    #[error("symmetric eigen-solver did not converge")]
    EigenSolverFailed,
    #[error("grid values have {found} entries, grid has {points} nodes")]
    ValueCount { points: usize, found: usize },
    #[error("wavefunction norm {0} differs from 1")]
    NotNormalized(f64),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

pub type Result<T, E = OracleError> = std::result::Result<T, E>;

/// Uniform periodic grid `phi_j = 2 pi j / M`, `j = 0..M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AngularGrid {
    points: usize,
}

impl AngularGrid {
    pub fn new(points: usize) -> Result<Self> {
        if points < MIN_POINTS {
            return Err(OracleError::TooFewPoints(points));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.points as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        2.0 * PI * (j % self.points) as f64 / self.points as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|j| self.node(j))
    }

    /// `exp(i k phi_j)` from an exact index reduction, so every mode shares
    /// one table of roots of unity.
    fn roots(&self) -> Vec<Complex64> {
        (0..self.points)
            .map(|j| Complex64::from_polar(1.0, self.node(j)))
            .collect()
    }

    fn root_index(&self, k: i64, j: usize) -> usize {
        let m = self.points as i64;
        (k.rem_euclid(m) * j as i64).rem_euclid(m) as usize
    }

    fn check_degree(&self, degree: u64) -> Result<()> {
        if degree >= self.points as u64 {
            return Err(OracleError::GridTooCoarse {
                points: self.points,
                degree,
            });
        }
        Ok(())
    }
}

/// Wavefunction samples with `h sum_j |psi_j|^2 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWavefunction {
    grid: AngularGrid,
    values: Vec<Complex64>,
}

impl GridWavefunction {
    pub fn new(grid: AngularGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.points {
            return Err(OracleError::ValueCount {
                points: grid.points,
                found: values.len(),
            });
        }
        let wf = Self { grid, values };
        let norm = wf.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(OracleError::NotNormalized(norm));
        }
        Ok(wf)
    }

    pub fn grid(&self) -> AngularGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        self.grid.spacing() * self.values.iter().map(Complex64::norm_sqr).sum::<f64>()
    }
}

/// `int psi_n^* f psi_m dphi` with `psi_k = exp(i k phi) / sqrt(2 pi)`, by the
/// periodic trapezoid rule.
///
/// `f_degree` is the highest Fourier mode present in `f`; the rule is exact
/// when `M > 2 (|n| + |m| + f_degree)`.
pub fn fourier_element(
    grid: AngularGrid,
    f: impl Fn(f64) -> f64,
    f_degree: u32,
    n: i64,
    m: i64,
) -> Result<Complex64> {
    let degree = 2 * (n.unsigned_abs() + m.unsigned_abs() + u64::from(f_degree));
    grid.check_degree(degree)?;
    let roots = grid.roots();
    let sum: Complex64 = (0..grid.points)
        .map(|j| roots[grid.root_index(m - n, j)] * f(grid.node(j)))
        .sum();
    Ok(sum * (grid.spacing() / (2.0 * PI)))
}

/// Dense `M x M` second-difference Hamiltonian with periodic wrap.
pub fn grid_hamiltonian(params: &PhysicalParams, grid: AngularGrid) -> DMatrix<f64> {
    let m = grid.points;
    let h = grid.spacing();
    let coupling = -params.hbar() * params.hbar() / (2.0 * params.inertia() * h * h);
    let mut mat = DMatrix::zeros(m, m);
    for j in 0..m {
        mat[(j, j)] = -2.0 * coupling;
        mat[(j, (j + 1) % m)] = coupling;
        mat[(j, (j + m - 1) % m)] = coupling;
    }
    mat
}

/// One eigenvalue of the grid Hamiltonian tagged with its dominant `|n|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridLevel {
    pub mode: u64,
    pub energy: f64,
}

/// Lowest levels of the grid Hamiltonian in ascending energy.
///
/// Degenerate pairs carry the same `mode`; which eigenvector of a pair is
/// listed first carries no meaning.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpectrum {
    points: usize,
    levels: Vec<GridLevel>,
}

impl GridSpectrum {
    pub fn points(&self) -> usize {
        self.points
    }

    pub fn levels(&self) -> &[GridLevel] {
        &self.levels
    }

    /// Lowest energy tagged with `mode`.
    pub fn energy_of_mode(&self, mode: u64) -> Option<f64> {
        self.levels
            .iter()
            .find(|l| l.mode == mode)
            .map(|l| l.energy)
    }
}

pub fn grid_eigen(
    params: &PhysicalParams,
    grid: AngularGrid,
    count: usize,
) -> Result<GridSpectrum> {
    if count > grid.points {
        return Err(OracleError::TooManyLevels {
            requested: count,
            points: grid.points,
        });
    }
    let mat = grid_hamiltonian(params, grid);
    let eigen =
        SymmetricEigen::try_new(mat, f64::EPSILON, 0).ok_or(OracleError::EigenSolverFailed)?;
    let mut order: Vec<usize> = (0..grid.points).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[a].total_cmp(&eigen.eigenvalues[b]));

    let roots = grid.roots();
    let levels = order
        .into_iter()
        .take(count)
        .map(|col| GridLevel {
            mode: dominant_mode(grid, &roots, eigen.eigenvectors.column(col).iter().copied()),
            energy: eigen.eigenvalues[col],
        })
        .collect();
    Ok(GridSpectrum {
        points: grid.points,
        levels,
    })
}

/// `|k|` maximising the combined power in modes `+k` and `-k`.
fn dominant_mode(grid: AngularGrid, roots: &[Complex64], v: impl Iterator<Item = f64>) -> u64 {
    let v: Vec<f64> = v.collect();
    let projection = |k: i64| -> Complex64 {
        v.iter()
            .enumerate()
            .map(|(j, &vj)| roots[grid.root_index(-k, j)] * vj)
            .sum()
    };
    let half = (grid.points / 2) as i64;
    let mut best = (0u64, f64::NEG_INFINITY);
    for k in 0..=half {
        let mut power = projection(k).norm_sqr();
        if k != 0 && k != half {
            power += projection(-k).norm_sqr();
        }
        if power > best.1 {
            best = (k as u64, power);
        }
    }
    best.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergencePoint {
    pub points: usize,
    pub spacing: f64,
    pub energy: f64,
    pub abs_error: f64,
}

/// Error of the lowest grid level with `|n| = mode` against `hbar^2 n^2 / 2I`.
pub fn convergence_study(
    params: &PhysicalParams,
    sizes: &[usize],
    mode: u64,
) -> Result<Vec<ConvergencePoint>> {
    let exact = params.energy(mode as i64);
    sizes
        .iter()
        .map(|&points| {
            let grid = AngularGrid::new(points)?;
            let spectrum = grid_eigen(params, grid, 2 * mode as usize + 1)?;
            let energy = spectrum
                .energy_of_mode(mode)
                .ok_or(OracleError::GridTooCoarse {
                    points,
                    degree: mode,
                })?;
            Ok(ConvergencePoint {
                points,
                spacing: grid.spacing(),
                energy,
                abs_error: (energy - exact).abs(),
            })
        })
        .collect()
}

/// `log(e_i / e_{i+1}) / log(h_i / h_{i+1})` for consecutive points.
pub fn observed_orders(points: &[ConvergencePoint]) -> Vec<f64> {
    points
        .windows(2)
        .map(|w| (w[0].abs_error / w[1].abs_error).ln() / (w[0].spacing / w[1].spacing).ln())
        .collect()
}

pub type AngleFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Schrodinger-picture form of an observable acting on `psi(phi)`.
#[derive(Clone)]
pub enum GridObservable {
    /// Multiplication by `f(phi)`, whose Fourier content stops at `degree`.
    Multiplier { f: AngleFn, degree: u32 },
    /// `-i hbar d/dphi`
    AngularMomentum,
    /// `-(hbar^2 / 2I) d^2/dphi^2`
    Energy,
    /// `-(sin phi L + L sin phi) / 2r`
    MomentumX,
    /// `(cos phi L + L cos phi) / 2r`
    MomentumY,
}

impl fmt::Debug for GridObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridObservable::Multiplier { degree, .. } => {
                write!(f, "Multiplier {{ degree: {degree} }}")
            }
            GridObservable::AngularMomentum => f.write_str("AngularMomentum"),
            GridObservable::Energy => f.write_str("Energy"),
            GridObservable::MomentumX => f.write_str("MomentumX"),
            GridObservable::MomentumY => f.write_str("MomentumY"),
        }
    }
}

impl GridObservable {
    pub fn multiplier(f: impl Fn(f64) -> f64 + Send + Sync + 'static, degree: u32) -> Self {
        GridObservable::Multiplier {
            f: Arc::new(f),
            degree,
        }
    }

    pub fn for_observable(which: Observable, params: &PhysicalParams) -> Self {
        let r = params.radius();
        match which {
            Observable::X => Self::multiplier(move |phi| r * phi.cos(), 1),
            Observable::Y => Self::multiplier(move |phi| r * phi.sin(), 1),
            Observable::CosPhi => Self::multiplier(f64::cos, 1),
            Observable::SinPhi => Self::multiplier(f64::sin, 1),
            Observable::L => GridObservable::AngularMomentum,
            Observable::H => GridObservable::Energy,
            Observable::Px => GridObservable::MomentumX,
            Observable::Py => GridObservable::MomentumY,
        }
    }

    fn degree(&self) -> u64 {
        match self {
            GridObservable::Multiplier { degree, .. } => u64::from(*degree),
            GridObservable::AngularMomentum | GridObservable::Energy => 0,
            GridObservable::MomentumX | GridObservable::MomentumY => 1,
        }
    }

    /// `conj(psi) (A psi)` at one node, from `psi` and its first two derivatives.
    fn density(&self, params: &PhysicalParams, phi: f64, psi: [Complex64; 3]) -> Complex64 {
        let [p, dp, d2p] = psi;
        let hbar = params.hbar();
        let applied = match self {
            GridObservable::Multiplier { f, .. } => p * f(phi),
            GridObservable::AngularMomentum => dp * Complex64::new(0.0, -hbar),
            GridObservable::Energy => d2p * (-hbar * hbar / (2.0 * params.inertia())),
            GridObservable::MomentumX => {
                // -(1/2r) [sin (-i hbar psi') + (-i hbar)(cos psi + sin psi')]
                (dp * (2.0 * phi.sin()) + p * phi.cos())
                    * Complex64::new(0.0, hbar / (2.0 * params.radius()))
            }
            GridObservable::MomentumY => {
                // (1/2r) [cos (-i hbar psi') + (-i hbar)(-sin psi + cos psi')]
                (dp * (2.0 * phi.cos()) - p * phi.sin())
                    * Complex64::new(0.0, -hbar / (2.0 * params.radius()))
            }
        };
        p.conj() * applied
    }
}

/// Fourier coefficients `c_n exp(-i E_n t / hbar)` of the evolved state.
fn evolved_modes(state: &AmplitudeState, params: &PhysicalParams, t: f64) -> Vec<(i64, Complex64)> {
    state
        .amplitudes()
        .map(|(n, c)| {
            let phase = Complex64::from_polar(1.0, -params.energy(n) * t / params.hbar());
            (n, c * phase)
        })
        .collect()
}

/// `psi`, `psi'` and `psi''` at every node.
fn synthesize_with_derivatives(
    grid: AngularGrid,
    roots: &[Complex64],
    modes: &[(i64, Complex64)],
) -> Vec<[Complex64; 3]> {
    let norm = 1.0 / (2.0 * PI).sqrt();
    (0..grid.points)
        .map(|j| {
            let mut out = [Complex64::new(0.0, 0.0); 3];
            for &(n, a) in modes {
                let wave = roots[grid.root_index(n, j)] * a * norm;
                let k = n as f64;
                out[0] += wave;
                out[1] += wave * Complex64::new(0.0, k);
                out[2] += wave * -(k * k);
            }
            out
        })
        .collect()
}

fn check_resolvable(state: &AmplitudeState, grid: AngularGrid, extra_degree: u64) -> Result<()> {
    grid.check_degree(2 * state.max_label() + extra_degree)
}

/// `psi(phi_j, t)` by mode-exact evolution.
pub fn synthesize(
    state: &AmplitudeState,
    params: &PhysicalParams,
    grid: AngularGrid,
    t: f64,
) -> Result<GridWavefunction> {
    check_resolvable(state, grid, 0)?;
    let modes = evolved_modes(state, params, t);
    let values = synthesize_with_derivatives(grid, &grid.roots(), &modes)
        .into_iter()
        .map(|v| v[0])
        .collect();
    GridWavefunction::new(grid, values)
}

/// `<A>(t) = h sum_j conj(psi_j(t)) (A psi)_j(t)` on each time point.
pub fn grid_evolve_expectation(
    state: &AmplitudeState,
    observable: &GridObservable,
    params: &PhysicalParams,
    grid: AngularGrid,
    times: &[f64],
    observable_name: &str,
) -> Result<Trajectory> {
    check_grid(times)?;
    check_resolvable(state, grid, observable.degree())?;
    let roots = grid.roots();
    let h = grid.spacing();
    let values = times
        .iter()
        .map(|&t| {
            let modes = evolved_modes(state, params, t);
            let samples = synthesize_with_derivatives(grid, &roots, &modes);
            let sum: Complex64 = samples
                .into_iter()
                .enumerate()
                .map(|(j, psi)| observable.density(params, grid.node(j), psi))
                .sum();
            sum * h
        })
        .collect();
    Ok(Trajectory::new(
        times.to_vec(),
        values,
        observable_name,
        true,
    )?)
}
