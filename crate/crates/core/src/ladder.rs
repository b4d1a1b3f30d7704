//! Spectrum of `L` from the commutation relations alone.
//!
//! With `L` diagonal, the `(n, n+1)` element of `[L, sin phi] = -i hbar cos phi`
//! and `[L, cos phi] = i hbar sin phi` reads
//!
//! ```text
//! gap * s = -i hbar * c
//! gap * c =  i hbar * s        gap = L[n,n] - L[n+1,n+1]
//! ```
//!
//! with `s = (sin phi)[n, n+1]` and `c = (cos phi)[n, n+1]`. A nonzero `(s, c)`
//! exists only when the determinant `gap^2 - hbar^2` vanishes, so neighbouring
//! diagonal entries of `L` differ by exactly one `hbar`. The commutators are
//! homogeneous in `(s, c)`; their magnitude comes from `sin^2 + cos^2 = 1`.
//! What remains free is a constant shift of the diagonal (the anchor) and a
//! phase of the trig elements (the gauge).

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::model::{PhysicalParams, SpectrumTable};
use crate::operator::{BandedOperator, IndexRange};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LadderError {
    #[error("anchor offset {delta} is not one of 0 or hbar/2 (hbar = {hbar})")]
    UnsupportedAnchor { delta: f64, hbar: f64 },
    #[error("ladder window {0} is not symmetric about 0")]
    AsymmetricRange(IndexRange),
    #[error("ladder window {0} needs at least three labels")]
    WindowTooSmall(IndexRange),
    #[error("unknown anchor `{0}` (expected 0 or half)")]
    UnknownAnchor(String),
}

/// Constant offset `delta` of the diagonal, `L[n, n] = n hbar + delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Anchor {
    /// `delta = 0`: single-valued wavefunctions.
    #[default]
    Zero,
    /// `delta = hbar / 2`: antiperiodic wavefunctions.
    Half,
}

impl Anchor {
    pub fn delta(&self, hbar: f64) -> f64 {
        match self {
            Anchor::Zero => 0.0,
            Anchor::Half => 0.5 * hbar,
        }
    }

    pub fn from_delta(delta: f64, hbar: f64) -> Result<Self, LadderError> {
        let scale = hbar.abs().max(1.0);
        if delta.abs() <= 1e-12 * scale {
            Ok(Anchor::Zero)
        } else if (delta - 0.5 * hbar).abs() <= 1e-12 * scale {
            Ok(Anchor::Half)
        } else {
            Err(LadderError::UnsupportedAnchor { delta, hbar })
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Anchor::Zero => "0",
            Anchor::Half => "half",
        }
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Anchor {
    type Err = LadderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "0" | "zero" => Ok(Anchor::Zero),
            "half" | "1/2" | "0.5" => Ok(Anchor::Half),
            other => Err(LadderError::UnknownAnchor(other.to_owned())),
        }
    }
}

/// Sign of `gap = L[n,n] - L[n+1,n+1]` in units of `hbar`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `gap = -hbar`: `L` increases with `n`, so absorbing `hbar omega` raises `n`.
    Descending,
    /// `gap = +hbar`.
    Ascending,
}

impl Branch {
    pub fn sign(&self) -> f64 {
        match self {
            Branch::Descending => -1.0,
            Branch::Ascending => 1.0,
        }
    }
}

/// Diagonal of `L` and the adjacent-band trig elements that solve the
/// commutator system on a window.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderSolution {
    range: IndexRange,
    /// `L[n, n]` in the units of `hbar`'s value, one per label.
    l_diag: Vec<f64>,
    /// `(sin phi)[n, n+1]` for `n` in `[n_min, n_max - 1]`.
    s_plus: Vec<Complex64>,
    /// `(cos phi)[n, n+1]`, same indexing as `s_plus`.
    c_plus: Vec<Complex64>,
    branch: Branch,
    anchor_delta: f64,
}

impl LadderSolution {
    /// Assembles a solution from raw parts; lengths must match the window.
    pub fn from_parts(
        range: IndexRange,
        l_diag: Vec<f64>,
        s_plus: Vec<Complex64>,
        c_plus: Vec<Complex64>,
        branch: Branch,
        anchor_delta: f64,
    ) -> Self {
        assert_eq!(l_diag.len(), range.len());
        assert_eq!(s_plus.len(), range.len() - 1);
        assert_eq!(c_plus.len(), range.len() - 1);
        Self {
            range,
            l_diag,
            s_plus,
            c_plus,
            branch,
            anchor_delta,
        }
    }

    pub fn range(&self) -> IndexRange {
        self.range
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn anchor_delta(&self) -> f64 {
        self.anchor_delta
    }

    pub fn l_diag(&self, n: i64) -> Option<f64> {
        self.range.position(n).map(|i| self.l_diag[i])
    }

    pub fn s_plus(&self, n: i64) -> Option<Complex64> {
        self.range
            .position(n)
            .and_then(|i| self.s_plus.get(i).copied())
    }

    pub fn c_plus(&self, n: i64) -> Option<Complex64> {
        self.range
            .position(n)
            .and_then(|i| self.c_plus.get(i).copied())
    }

    /// Same solution with every trig element multiplied by `phase`; `L` untouched.
    pub fn with_gauge(&self, phase: Complex64) -> Self {
        Self {
            s_plus: self.s_plus.iter().map(|s| s * phase).collect(),
            c_plus: self.c_plus.iter().map(|c| c * phase).collect(),
            ..self.clone()
        }
    }

    /// Same solution with `L`'s diagonal shifted by `delta`.
    pub fn shifted(&self, delta: f64) -> Self {
        Self {
            l_diag: self.l_diag.iter().map(|l| l + delta).collect(),
            anchor_delta: self.anchor_delta + delta,
            ..self.clone()
        }
    }

    /// Relabels `n -> -n`. Requires a symmetric window.
    pub fn mirrored(&self) -> Self {
        assert!(self.range.is_symmetric());
        let l_diag = self.l_diag.iter().rev().copied().collect();
        // (O')[n, n+1] = O[-n, -n-1] = conj(O[-n-1, -n]) for Hermitian O.
        let s_plus = self.s_plus.iter().rev().map(|s| s.conj()).collect();
        let c_plus = self.c_plus.iter().rev().map(|c| c.conj()).collect();
        let branch = match self.branch {
            Branch::Descending => Branch::Ascending,
            Branch::Ascending => Branch::Descending,
        };
        Self {
            range: self.range,
            l_diag,
            s_plus,
            c_plus,
            branch,
            anchor_delta: self.anchor_delta,
        }
    }

    pub fn angular_momentum(&self) -> BandedOperator {
        BandedOperator::diagonal(self.range, |n| {
            Complex64::new(self.l_diag[self.range.position(n).unwrap()], 0.0)
        })
    }

    fn hermitian_band(&self, upper: &[Complex64]) -> BandedOperator {
        let start = self.range.n_min();
        BandedOperator::from_fn(self.range, [-1, 1], |n, m| {
            if m == n + 1 {
                upper[(n - start) as usize]
            } else {
                upper[(m - start) as usize].conj()
            }
        })
    }

    pub fn sin_phi(&self) -> BandedOperator {
        self.hermitian_band(&self.s_plus)
    }

    pub fn cos_phi(&self) -> BandedOperator {
        self.hermitian_band(&self.c_plus)
    }
}

/// Roots of the determinant `gap^2 - hbar^2` of the per-pair system.
pub fn admissible_gaps(hbar: f64) -> [f64; 2] {
    let i_hbar = Complex64::new(0.0, hbar);
    // det [[gap, i hbar], [-i hbar, gap]] = gap^2 - (i hbar)(-i hbar)
    let constant = (i_hbar * -i_hbar).re;
    let root = constant.sqrt();
    [-root, root]
}

/// Solves on the descending branch (`L` increasing with `n`).
pub fn solve_ladder(
    params: &PhysicalParams,
    range: IndexRange,
    anchor: Anchor,
) -> Result<LadderSolution, LadderError> {
    solve_ladder_on_branch(params, range, anchor, Branch::Descending)
}

/// Solves the commutator system with an explicit choice of branch.
///
/// The trig elements use the gauge `(sin phi)[n, n+1] = i/2`.
pub fn solve_ladder_on_branch(
    params: &PhysicalParams,
    range: IndexRange,
    anchor: Anchor,
    branch: Branch,
) -> Result<LadderSolution, LadderError> {
    if !range.is_symmetric() {
        return Err(LadderError::AsymmetricRange(range));
    }
    if range.len() < 3 {
        return Err(LadderError::WindowTooSmall(range));
    }
    let hbar = params.hbar();
    let [descending, ascending] = admissible_gaps(hbar);
    let gap = match branch {
        Branch::Descending => descending,
        Branch::Ascending => ascending,
    };

    // Null vector of the first row: gap s + i hbar c = 0  =>  c = (i gap / hbar) s.
    let lock = Complex64::new(0.0, gap / hbar);

    // (sin^2 + cos^2)[n, n] = 2|s|^2 + 2|c|^2 = 2|s|^2 (1 + |lock|^2) = 1.
    // The offset-2 band s^2 (1 + lock^2) vanishes because lock^2 = -1.
    let magnitude = (1.0 / (2.0 * (1.0 + lock.norm_sqr()))).sqrt();
    let s = Complex64::new(0.0, magnitude);
    let c = lock * s;

    let delta = anchor.delta(hbar);
    // L[n+1, n+1] = L[n, n] - gap, anchored at L[0, 0] = delta.
    let l_diag = range.labels().map(|n| n as f64 * -gap + delta).collect();
    let pairs = range.len() - 1;
    Ok(LadderSolution {
        range,
        l_diag,
        s_plus: vec![s; pairs],
        c_plus: vec![c; pairs],
        branch,
        anchor_delta: delta,
    })
}

/// Max interior residuals of the relations a [`LadderSolution`] must satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderResiduals {
    /// `[L, sin phi] + i hbar cos phi`
    pub commutator_sin: f64,
    /// `[L, cos phi] - i hbar sin phi`
    pub commutator_cos: f64,
    /// `sin^2 phi + cos^2 phi - 1`
    pub pythagorean: f64,
}

impl LadderResiduals {
    pub fn max(&self) -> f64 {
        self.commutator_sin
            .max(self.commutator_cos)
            .max(self.pythagorean)
    }
}

/// Rebuilds `L`, `sin phi` and `cos phi` from `sol` and measures every relation
/// on rows at least one label from the window edge.
pub fn verify_solution(sol: &LadderSolution, params: &PhysicalParams) -> LadderResiduals {
    let i_hbar = Complex64::new(0.0, params.hbar());
    let l = sol.angular_momentum();
    let sin = sol.sin_phi();
    let cos = sol.cos_phi();
    let interior = |op: BandedOperator| {
        op.interior_view(1)
            .expect("window has at least three labels")
            .max_abs()
    };
    let comm_sin = l
        .commutator(&sin)
        .and_then(|c| c.add(&cos.scale(i_hbar)))
        .expect("shared window");
    let comm_cos = l
        .commutator(&cos)
        .and_then(|c| c.sub(&sin.scale(i_hbar)))
        .expect("shared window");
    let pyth = sin
        .multiply(&sin)
        .and_then(|s2| s2.add(&cos.multiply(&cos)?))
        .and_then(|sum| sum.sub(&BandedOperator::identity(sol.range)))
        .expect("shared window");
    LadderResiduals {
        commutator_sin: interior(comm_sin),
        commutator_cos: interior(comm_cos),
        pythagorean: interior(pyth),
    }
}

/// `E_n = L[n, n]^2 / 2I` read off the solved diagonal.
pub fn spectrum_from_solution(sol: &LadderSolution, params: &PhysicalParams) -> SpectrumTable {
    SpectrumTable::from_fn(sol.range, |n| {
        params.energy_from_l(sol.l_diag(n).expect("label in window"))
    })
}
