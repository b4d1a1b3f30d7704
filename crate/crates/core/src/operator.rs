//! Banded complex operators on a truncated integer ladder.
//!
//! Every observable of the rotor is a matrix indexed by the integer labels
//! `n` of the angular-momentum ladder, and every one of them is banded: only a
//! handful of diagonals `O[n, n + k]` are nonzero. [`BandedOperator`] stores
//! exactly those diagonals over a finite window [`IndexRange`] and implements
//! the ring operations needed for commutator algebra.
//!
//! The window is a truncation of the infinite ladder. Products are computed
//! from in-window terms only, so identities that hold on the infinite ladder
//! hold here only on *interior* rows, at least one total bandwidth away from
//! the edge. Use [`BandedOperator::interior_view`] before comparing.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Absolute tolerance used when none is configured.
pub const DEFAULT_ABS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    #[error("invalid index range [{n_min}, {n_max}]: lower bound exceeds upper bound")]
    InvalidRange { n_min: i64, n_max: i64 },
    #[error("band at offset {offset} has {found} entries, expected {expected}")]
    BandLength {
        offset: i64,
        expected: usize,
        found: usize,
    },
    #[error("index range mismatch: {left} vs {right}")]
    RangeMismatch { left: IndexRange, right: IndexRange },
    #[error("margin {margin} leaves no interior rows in a window of {len} labels")]
    MarginTooLarge { margin: usize, len: usize },
    #[error("tolerance must be a non-negative finite number, got {0}")]
    InvalidTolerance(f64),
    #[error("dense matrix is {rows}x{cols}, window holds {len} labels")]
    DenseShape {
        rows: usize,
        cols: usize,
        len: usize,
    },
}

pub type Result<T, E = OperatorError> = std::result::Result<T, E>;

/// Inclusive window `[n_min, n_max]` of ladder labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexRange {
    n_min: i64,
    n_max: i64,
}

impl IndexRange {
    pub fn new(n_min: i64, n_max: i64) -> Result<Self> {
        if n_min > n_max {
            return Err(OperatorError::InvalidRange { n_min, n_max });
        }
        Ok(Self { n_min, n_max })
    }

    /// The canonical rotor window `[-n, n]`.
    pub fn symmetric(n: u32) -> Self {
        let n = i64::from(n);
        Self {
            n_min: -n,
            n_max: n,
        }
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    pub fn len(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }

    /// Always false; a window holds at least one label.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_symmetric(&self) -> bool {
        self.n_min == -self.n_max
    }

    pub fn contains(&self, n: i64) -> bool {
        (self.n_min..=self.n_max).contains(&n)
    }

    /// Zero-based position of label `n`, if it lies in the window.
    pub fn position(&self, n: i64) -> Option<usize> {
        self.contains(n).then(|| (n - self.n_min) as usize)
    }

    pub fn labels(&self) -> impl DoubleEndedIterator<Item = i64> + Clone {
        self.n_min..=self.n_max
    }

    /// Window with `margin` labels removed from each end.
    pub fn shrink(&self, margin: usize) -> Result<Self> {
        if 2 * margin >= self.len() {
            return Err(OperatorError::MarginTooLarge {
                margin,
                len: self.len(),
            });
        }
        let m = margin as i64;
        Ok(Self {
            n_min: self.n_min + m,
            n_max: self.n_max - m,
        })
    }

    /// First row `n` for which both `n` and `n + offset` lie in the window.
    fn band_start(&self, offset: i64) -> i64 {
        self.n_min.max(self.n_min - offset)
    }

    /// Number of rows carried by the diagonal at `offset`.
    pub fn band_len(&self, offset: i64) -> usize {
        self.len().saturating_sub(offset.unsigned_abs() as usize)
    }
}

impl fmt::Display for IndexRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.n_min, self.n_max)
    }
}

/// Non-negative absolute tolerance for element-wise comparisons.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Tolerance(f64);

impl Tolerance {
    pub fn new(abs_tol: f64) -> Result<Self> {
        if !(abs_tol.is_finite() && abs_tol >= 0.0) {
            return Err(OperatorError::InvalidTolerance(abs_tol));
        }
        Ok(Self(abs_tol))
    }

    pub fn abs(&self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self(DEFAULT_ABS_TOL)
    }
}

/// Complex matrix over an [`IndexRange`], stored as diagonals by offset.
///
/// The band at offset `k` holds `O[n, n + k]` for every row `n` whose column
/// also lies in the window, in ascending `n`. Offsets that are not stored are
/// identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedOperator {
    range: IndexRange,
    bands: BTreeMap<i64, Vec<Complex64>>,
}

impl BandedOperator {
    /// Builds an operator from explicit diagonals.
    ///
    /// Each band must carry exactly [`IndexRange::band_len`] entries. A band at
    /// an offset with no valid rows must be empty and is discarded.
    pub fn from_bands(range: IndexRange, bands: BTreeMap<i64, Vec<Complex64>>) -> Result<Self> {
        let mut stored = BTreeMap::new();
        for (offset, entries) in bands {
            let expected = range.band_len(offset);
            if entries.len() != expected {
                return Err(OperatorError::BandLength {
                    offset,
                    expected,
                    found: entries.len(),
                });
            }
            if expected > 0 {
                stored.insert(offset, entries);
            }
        }
        Ok(Self {
            range,
            bands: stored,
        })
    }

    pub fn zero(range: IndexRange) -> Self {
        Self {
            range,
            bands: BTreeMap::new(),
        }
    }

    pub fn identity(range: IndexRange) -> Self {
        Self::diagonal(range, |_| Complex64::new(1.0, 0.0))
    }

    pub fn diagonal(range: IndexRange, f: impl FnMut(i64) -> Complex64) -> Self {
        let mut bands = BTreeMap::new();
        bands.insert(0, range.labels().map(f).collect());
        Self { range, bands }
    }

    /// Fills the given offsets from `f(n, m)`; all other elements are zero.
    pub fn from_fn(
        range: IndexRange,
        offsets: impl IntoIterator<Item = i64>,
        mut f: impl FnMut(i64, i64) -> Complex64,
    ) -> Self {
        let mut bands = BTreeMap::new();
        for k in offsets {
            let len = range.band_len(k);
            if len == 0 {
                continue;
            }
            let start = range.band_start(k);
            let band = (start..start + len as i64).map(|n| f(n, n + k)).collect();
            bands.insert(k, band);
        }
        Self { range, bands }
    }

    pub fn range(&self) -> IndexRange {
        self.range
    }

    /// Stored offsets in ascending order.
    pub fn offsets(&self) -> impl Iterator<Item = i64> + '_ {
        self.bands.keys().copied()
    }

    pub fn band(&self, offset: i64) -> Option<&[Complex64]> {
        self.bands.get(&offset).map(Vec::as_slice)
    }

    /// Largest `|k|` over stored offsets (0 for the zero operator).
    pub fn bandwidth(&self) -> usize {
        self.bands
            .keys()
            .map(|k| k.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Element `O[n, m]`; zero for unstored offsets and out-of-window labels.
    pub fn get(&self, n: i64, m: i64) -> Complex64 {
        if !(self.range.contains(n) && self.range.contains(m)) {
            return Complex64::new(0.0, 0.0);
        }
        let k = m - n;
        match self.bands.get(&k) {
            Some(band) => band[(n - self.range.band_start(k)) as usize],
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Every stored element as `(n, m, value)`, ordered by row then column.
    pub fn elements(&self) -> Vec<(i64, i64, Complex64)> {
        let mut out: Vec<_> = self
            .bands
            .iter()
            .flat_map(|(&k, band)| {
                let start = self.range.band_start(k);
                band.iter()
                    .enumerate()
                    .map(move |(i, &z)| (start + i as i64, start + i as i64 + k, z))
            })
            .collect();
        out.sort_by_key(|&(n, m, _)| (n, m));
        out
    }

    /// Applies `f(n, m, value)` to every stored element.
    pub fn map_elements(&self, mut f: impl FnMut(i64, i64, Complex64) -> Complex64) -> Self {
        let bands = self
            .bands
            .iter()
            .map(|(&k, band)| {
                let start = self.range.band_start(k);
                let mapped = band
                    .iter()
                    .enumerate()
                    .map(|(i, &z)| {
                        let n = start + i as i64;
                        f(n, n + k, z)
                    })
                    .collect();
                (k, mapped)
            })
            .collect();
        Self {
            range: self.range,
            bands,
        }
    }

    fn check_range(&self, other: &Self) -> Result<()> {
        if self.range != other.range {
            return Err(OperatorError::RangeMismatch {
                left: self.range,
                right: other.range,
            });
        }
        Ok(())
    }

    fn zip_bands(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.check_range(other)?;
        let zero = Complex64::new(0.0, 0.0);
        let mut bands = BTreeMap::new();
        for &k in self.bands.keys().chain(other.bands.keys()) {
            if bands.contains_key(&k) {
                continue;
            }
            let len = self.range.band_len(k);
            let a = self.bands.get(&k);
            let b = other.bands.get(&k);
            let band = (0..len)
                .map(|i| f(a.map_or(zero, |v| v[i]), b.map_or(zero, |v| v[i])))
                .collect();
            bands.insert(k, band);
        }
        Ok(Self {
            range: self.range,
            bands,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_bands(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_bands(other, |a, b| a - b)
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        self.map_elements(|_, _, z| z * lambda)
    }

    /// Divides every element by a real number, component-wise.
    pub fn div_real(&self, d: f64) -> Self {
        self.map_elements(|_, _, z| z / d)
    }

    pub fn neg(&self) -> Self {
        self.map_elements(|_, _, z| -z)
    }

    /// Matrix product restricted to the window.
    ///
    /// Element `(n, m)` sums `A[n, j] * B[j, m]` over intermediate labels `j`
    /// inside the window only; contributions through out-of-window labels are
    /// absent. Result offsets are sums of input offsets.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_range(other)?;
        let range = self.range;
        let mut bands: BTreeMap<i64, Vec<Complex64>> = BTreeMap::new();
        for (&ka, band_a) in &self.bands {
            let start_a = range.band_start(ka);
            for (&kb, band_b) in &other.bands {
                let k = ka + kb;
                let len = range.band_len(k);
                if len == 0 {
                    continue;
                }
                let start = range.band_start(k);
                let start_b = range.band_start(kb);
                let out = bands
                    .entry(k)
                    .or_insert_with(|| vec![Complex64::new(0.0, 0.0); len]);
                for (i, &a) in band_a.iter().enumerate() {
                    let n = start_a + i as i64;
                    let j = n + ka;
                    let m = j + kb;
                    if !range.contains(m) {
                        continue;
                    }
                    let b = band_b[(j - start_b) as usize];
                    out[(n - start) as usize] += a * b;
                }
            }
        }
        Ok(Self { range, bands })
    }

    /// Conjugate transpose: offset `k` becomes offset `-k`.
    pub fn adjoint(&self) -> Self {
        let bands = self
            .bands
            .iter()
            .map(|(&k, band)| (-k, band.iter().map(|z| z.conj()).collect()))
            .collect();
        Self {
            range: self.range,
            bands,
        }
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.multiply(other)?.sub(&other.multiply(self)?)
    }

    /// Largest element modulus (0 for the zero operator).
    pub fn max_abs(&self) -> f64 {
        self.bands
            .values()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest element-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn is_zero(&self, tol: Tolerance) -> bool {
        self.max_abs() <= tol.abs()
    }

    /// Largest `|O[n, m] - conj(O[m, n])|` over the window.
    pub fn hermiticity_defect(&self) -> f64 {
        self.sub(&self.adjoint())
            .map(|d| d.max_abs())
            .unwrap_or(f64::INFINITY)
    }

    pub fn is_hermitian(&self, tol: Tolerance) -> bool {
        self.hermiticity_defect() <= tol.abs()
    }

    /// Restriction to `[n_min + margin, n_max - margin]`.
    pub fn interior_view(&self, margin: usize) -> Result<Self> {
        let inner = self.range.shrink(margin)?;
        let offsets: Vec<i64> = self.bands.keys().copied().collect();
        Ok(Self::from_fn(inner, offsets, |n, m| self.get(n, m)))
    }

    /// Drops every band whose entries all have modulus `<= tol`.
    pub fn pruned(&self, tol: Tolerance) -> Self {
        let bands = self
            .bands
            .iter()
            .filter(|(_, band)| band.iter().any(|z| z.norm() > tol.abs()))
            .map(|(&k, band)| (k, band.clone()))
            .collect();
        Self {
            range: self.range,
            bands,
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let len = self.range.len();
        let mut dense = DMatrix::from_element(len, len, Complex64::new(0.0, 0.0));
        for (n, m, z) in self.elements() {
            let i = (n - self.range.n_min) as usize;
            let j = (m - self.range.n_min) as usize;
            dense[(i, j)] = z;
        }
        dense
    }

    /// Reads a square dense matrix back into band storage, keeping only the
    /// diagonals that hold an element with modulus above `tol`.
    pub fn from_dense(
        range: IndexRange,
        dense: &DMatrix<Complex64>,
        tol: Tolerance,
    ) -> Result<Self> {
        let len = range.len();
        if dense.nrows() != len || dense.ncols() != len {
            return Err(OperatorError::DenseShape {
                rows: dense.nrows(),
                cols: dense.ncols(),
                len,
            });
        }
        let n_min = range.n_min;
        let offsets: Vec<i64> = (-(len as i64) + 1..len as i64)
            .filter(|&k| {
                range.labels().any(|n| {
                    range.contains(n + k)
                        && dense[((n - n_min) as usize, (n + k - n_min) as usize)].norm()
                            > tol.abs()
                })
            })
            .collect();
        Ok(Self::from_fn(range, offsets, |n, m| {
            dense[((n - n_min) as usize, (m - n_min) as usize)]
        }))
    }
}
