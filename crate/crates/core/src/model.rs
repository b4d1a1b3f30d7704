//! Operators of the planar rotor in the basis where `L` is diagonal.
//!
//! A particle of mass `mu` on a ring of radius `r` has Hamiltonian
//! `H = L^2 / 2I` with `I = mu r^2`. The matrices built here are the solution
//! of the commutator algebra `[L, sin phi] = -i hbar cos phi`,
//! `[L, cos phi] = i hbar sin phi`:
//!
//! * `L[n, n] = n hbar`
//! * `cos phi[n, m] = (delta(n, m+1) + delta(n, m-1)) / 2`
//! * `sin phi[n, m] = (delta(n, m+1) - delta(n, m-1)) / 2i`
//!
//! Positions are `x = r cos phi`, `y = r sin phi` at `t = 0`, and momenta follow
//! from `p[n, m] = i mu omega[n, m] q[n, m]` with the Bohr frequencies
//! `omega[n, m] = (E_n - E_m) / hbar`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::operator::{BandedOperator, IndexRange, Tolerance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{name} must be strictly positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("unknown observable `{0}` (expected one of x, y, L, H, p_x, p_y, sin_phi, cos_phi)")]
    UnknownObservable(String),
}

/// Physical constants of the rotor. The moment of inertia is always derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    hbar: f64,
    mass: f64,
    radius: f64,
}

impl PhysicalParams {
    pub fn new(hbar: f64, mass: f64, radius: f64) -> Result<Self, ModelError> {
        for (name, value) in [("hbar", hbar), ("mass", mass), ("radius", radius)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(ModelError::NonPositive { name, value });
            }
        }
        Ok(Self { hbar, mass, radius })
    }

    /// `hbar = mu = r = 1`.
    pub fn natural() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            radius: 1.0,
        }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `I = mu r^2`.
    pub fn inertia(&self) -> f64 {
        self.mass * self.radius * self.radius
    }

    /// `E = L^2 / 2I` for a diagonal element `L` of the angular momentum.
    ///
    /// Every energy in the crate goes through this expression so that the
    /// spectrum obtained from any route is bit-identical.
    pub fn energy_from_l(&self, l: f64) -> f64 {
        l * l / (2.0 * self.inertia())
    }

    /// `L[n, n] = n hbar`.
    pub fn l_eigenvalue(&self, n: i64) -> f64 {
        n as f64 * self.hbar
    }

    /// `E_n = hbar^2 n^2 / (2 mu r^2)`.
    pub fn energy(&self, n: i64) -> f64 {
        self.energy_from_l(self.l_eigenvalue(n))
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self::natural()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub n: i64,
    pub energy: f64,
}

/// Energies `E_n` for every label of a window, in ascending `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    range: IndexRange,
    entries: Vec<SpectrumEntry>,
}

impl SpectrumTable {
    pub fn from_fn(range: IndexRange, mut energy: impl FnMut(i64) -> f64) -> Self {
        let entries = range
            .labels()
            .map(|n| SpectrumEntry {
                n,
                energy: energy(n),
            })
            .collect();
        Self { range, entries }
    }

    pub fn range(&self) -> IndexRange {
        self.range
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn energy(&self, n: i64) -> Option<f64> {
        self.range.position(n).map(|i| self.entries[i].energy)
    }
}

/// Bohr frequencies `omega[n, m] = (E_n - E_m) / hbar` over a window.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTable {
    spectrum: SpectrumTable,
    hbar: f64,
    /// Set for the rotor ladder `L[n, n] = n hbar`, holding `hbar / 2I`.
    quantized: Option<f64>,
}

impl FrequencyTable {
    pub fn new(spectrum: SpectrumTable, hbar: f64) -> Self {
        Self {
            spectrum,
            hbar,
            quantized: None,
        }
    }

    /// Table for `E_n = (n hbar)^2 / 2I`. Frequencies are then evaluated as
    /// `hbar (n^2 - m^2) / 2I` with the integer part exact, instead of
    /// subtracting two large energies at high `|n|`.
    pub fn rotor(params: &PhysicalParams, range: IndexRange) -> Self {
        Self {
            spectrum: SpectrumTable::from_fn(range, |n| params.energy(n)),
            hbar: params.hbar,
            quantized: Some(params.hbar / (2.0 * params.inertia())),
        }
    }

    pub fn range(&self) -> IndexRange {
        self.spectrum.range()
    }

    pub fn spectrum(&self) -> &SpectrumTable {
        &self.spectrum
    }

    /// `None` when either label is outside the window.
    pub fn omega(&self, n: i64, m: i64) -> Option<f64> {
        let i = self.range().position(n)?;
        let j = self.range().position(m)?;
        match self.quantized {
            Some(unit) => Some((n * n - m * m) as f64 * unit),
            None => {
                let en = self.spectrum.entries()[i].energy;
                let em = self.spectrum.entries()[j].energy;
                Some((en - em) / self.hbar)
            }
        }
    }
}

/// The observables the model can build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Observable {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "y")]
    Y,
    #[serde(rename = "L")]
    L,
    #[serde(rename = "H")]
    H,
    #[serde(rename = "p_x")]
    Px,
    #[serde(rename = "p_y")]
    Py,
    #[serde(rename = "sin_phi")]
    SinPhi,
    #[serde(rename = "cos_phi")]
    CosPhi,
}

impl Observable {
    pub const ALL: [Observable; 8] = [
        Observable::X,
        Observable::Y,
        Observable::L,
        Observable::H,
        Observable::Px,
        Observable::Py,
        Observable::SinPhi,
        Observable::CosPhi,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Observable::X => "x",
            Observable::Y => "y",
            Observable::L => "L",
            Observable::H => "H",
            Observable::Px => "p_x",
            Observable::Py => "p_y",
            Observable::SinPhi => "sin_phi",
            Observable::CosPhi => "cos_phi",
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Observable {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Observable::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| ModelError::UnknownObservable(s.to_owned()))
    }
}

/// Rotor operators over a fixed window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorModel {
    params: PhysicalParams,
    range: IndexRange,
}

impl RotorModel {
    pub fn new(params: PhysicalParams, range: IndexRange) -> Self {
        Self { params, range }
    }

    pub fn params(&self) -> PhysicalParams {
        self.params
    }

    pub fn range(&self) -> IndexRange {
        self.range
    }

    /// Diagonal `L[n, n] = n hbar`.
    pub fn angular_momentum(&self) -> BandedOperator {
        BandedOperator::diagonal(self.range, |n| {
            Complex64::new(self.params.l_eigenvalue(n), 0.0)
        })
    }

    /// `(sin phi, cos phi)`, nonzero only between adjacent labels.
    pub fn trig(&self) -> (BandedOperator, BandedOperator) {
        (sin_phi(self.range), cos_phi(self.range))
    }

    /// `(x, y) = (r cos phi, r sin phi)` at `t = 0`.
    pub fn position(&self) -> (BandedOperator, BandedOperator) {
        let (sin, cos) = self.trig();
        let r = Complex64::new(self.params.radius, 0.0);
        (cos.scale(r), sin.scale(r))
    }

    /// `(p_x, p_y)` from `p[n, m] = i mu omega[n, m] q[n, m]`.
    pub fn momentum(&self) -> (BandedOperator, BandedOperator) {
        let freqs = self.frequencies();
        let (x, y) = self.position();
        (
            self.velocity_weighted(&x, &freqs),
            self.velocity_weighted(&y, &freqs),
        )
    }

    fn velocity_weighted(&self, q: &BandedOperator, freqs: &FrequencyTable) -> BandedOperator {
        let mu = self.params.mass;
        q.map_elements(|n, m, z| {
            let omega = freqs.omega(n, m).expect("element labels lie in the window");
            Complex64::new(0.0, mu * omega) * z
        })
    }

    /// `H = L L / 2I`, checked against the closed-form spectrum in debug builds.
    pub fn hamiltonian(&self) -> BandedOperator {
        let l = self.angular_momentum();
        let h = l
            .multiply(&l)
            .expect("shared window")
            .div_real(2.0 * self.params.inertia());
        debug_assert!(self
            .range
            .labels()
            .all(|n| h.get(n, n).re.to_bits() == self.params.energy(n).to_bits()));
        h
    }

    /// Diagonal operator with `H[n, n] = hbar^2 n^2 / 2I` written directly.
    pub fn hamiltonian_closed_form(&self) -> BandedOperator {
        BandedOperator::diagonal(self.range, |n| Complex64::new(self.params.energy(n), 0.0))
    }

    /// `L = x p_y - y p_x`, valid on rows at least 2 away from the window edge.
    pub fn angular_momentum_from_xy(&self) -> BandedOperator {
        let (x, y) = self.position();
        let (px, py) = self.momentum();
        let xpy = x.multiply(&py).expect("shared window");
        let ypx = y.multiply(&px).expect("shared window");
        xpy.sub(&ypx).expect("shared window")
    }

    pub fn spectrum(&self) -> SpectrumTable {
        SpectrumTable::from_fn(self.range, |n| self.params.energy(n))
    }

    pub fn frequencies(&self) -> FrequencyTable {
        FrequencyTable::rotor(&self.params, self.range)
    }

    pub fn observable(&self, which: Observable) -> BandedOperator {
        match which {
            Observable::X => self.position().0,
            Observable::Y => self.position().1,
            Observable::L => self.angular_momentum(),
            Observable::H => self.hamiltonian(),
            Observable::Px => self.momentum().0,
            Observable::Py => self.momentum().1,
            Observable::SinPhi => self.trig().0,
            Observable::CosPhi => self.trig().1,
        }
    }
}

/// `(sin phi)[n, n+1] = i/2`, `(sin phi)[n+1, n] = -i/2`.
pub fn sin_phi(range: IndexRange) -> BandedOperator {
    BandedOperator::from_fn(range, [-1, 1], |n, m| {
        if n == m + 1 {
            Complex64::new(0.0, -0.5)
        } else {
            Complex64::new(0.0, 0.5)
        }
    })
}

pub fn cos_phi(range: IndexRange) -> BandedOperator {
    BandedOperator::from_fn(range, [-1, 1], |_, _| Complex64::new(0.5, 0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub n: i64,
    pub m: i64,
    pub omega: f64,
}

/// Outcome of checking that a coordinate couples adjacent labels only.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionRuleReport {
    /// Offsets `m - n` that carry a nonzero element.
    pub offsets: BTreeSet<i64>,
    /// Nonzero elements with `|n - m| = 1`, tagged with their Bohr frequency.
    pub allowed: Vec<Transition>,
    /// Nonzero elements with `|n - m| != 1`.
    pub violations: Vec<(i64, i64, Complex64)>,
}

impl SelectionRuleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Harmonic motion of `q[n, m]` at `omega[n, m]` is only consistent with the
/// ansatz when `omega[n, m] = +/- omega`, i.e. for transitions between
/// neighbouring labels. Elements with modulus `<= tol` count as zero.
pub fn selection_rule_check(
    q: &BandedOperator,
    freqs: &FrequencyTable,
    tol: Tolerance,
) -> SelectionRuleReport {
    let mut report = SelectionRuleReport {
        offsets: BTreeSet::new(),
        allowed: Vec::new(),
        violations: Vec::new(),
    };
    for (n, m, z) in q.elements() {
        if z.norm() <= tol.abs() {
            continue;
        }
        report.offsets.insert(m - n);
        if (m - n).abs() == 1 {
            let omega = freqs.omega(n, m).unwrap_or(f64::NAN);
            report.allowed.push(Transition { n, m, omega });
        } else {
            report.violations.push((n, m, z));
        }
    }
    report
}
