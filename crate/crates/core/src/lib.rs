//! Matrix mechanics of the planar quantum rotor.
//!
//! The spectrum of `H = L^2 / 2I` is obtained from commutation relations
//! between `L`, `sin phi` and `cos phi` alone, operator elements are evolved in
//! the Heisenberg picture, and expectation values come from those elements
//! plus a finite list of initial amplitudes. An independent Schrodinger-picture
//! channel on a periodic grid checks every result.
//!
//! * [`operator`]: banded complex matrices on a truncated ladder
//! * [`model`]: the rotor's operators, spectrum and Bohr frequencies
//! * [`ladder`]: solving the commutator system for `L` and the trig elements
//! * [`dynamics`]: Heisenberg evolution and Born-rule expectations
//! * [`identities`]: the commutator identity suite
//! * [`oracle`]: finite-difference and mode-exact grid cross-checks
//! * [`cli`]: the `rotor` command-line front end

pub mod cli;
pub mod dynamics;
pub mod identities;
pub mod ladder;
pub mod model;
pub mod operator;
pub mod oracle;

pub use dynamics::{AmplitudeState, InitialCondition, MixedState, Trajectory};
pub use ladder::{Anchor, Branch, LadderSolution};
pub use model::{FrequencyTable, Observable, PhysicalParams, RotorModel, SpectrumTable};
pub use operator::{BandedOperator, IndexRange, Tolerance};
pub use oracle::{AngularGrid, GridObservable};
