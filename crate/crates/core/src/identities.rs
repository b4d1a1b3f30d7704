//! The rotor's commutator identities, measured on interior rows.
//!
//! Alongside the identities that hold exactly on the infinite ladder, the
//! suite measures three commonly quoted canonical forms that do *not* hold
//! for the rotor: `[x, p_x] = i hbar`, `[y, p_y] = i hbar` and `[p_x, p_y] = 0`.
//! Exact banded algebra gives instead
//!
//! ```text
//! [x, p_x] = i hbar sin^2 phi
//! [y, p_y] = i hbar cos^2 phi
//! [p_x, p_y] = -i (hbar / r^2) L
//! ```
//!
//! and only the sum `[x, p_x] + [y, p_y] = i hbar` survives.

use num_complex::Complex64;

use crate::model::{selection_rule_check, RotorModel};
use crate::operator::{BandedOperator, OperatorError, Tolerance};

/// Interior margin sufficient for every identity below.
pub const IDENTITY_MARGIN: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// Holds on the infinite ladder.
    Exact,
    /// Canonical form that the rotor violates.
    CanonicalClaim,
}

impl Form {
    pub fn name(&self) -> &'static str {
        match self {
            Form::Exact => "exact",
            Form::CanonicalClaim => "canonical_claim",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub form: Form,
    /// Max element modulus of `lhs - rhs` on interior rows.
    pub residual: f64,
    pub holds: bool,
}

impl IdentityCheck {
    /// Exact identities must hold; canonical claims must not.
    pub fn as_expected(&self) -> bool {
        match self.form {
            Form::Exact => self.holds,
            Form::CanonicalClaim => !self.holds,
        }
    }
}

fn residual(
    lhs: &BandedOperator,
    rhs: &BandedOperator,
    margin: usize,
) -> Result<f64, OperatorError> {
    lhs.sub(rhs)?.interior_view(margin).map(|d| d.max_abs())
}

/// Evaluates every identity with interior `margin` (at least [`IDENTITY_MARGIN`]).
pub fn commutator_suite(
    model: &RotorModel,
    margin: usize,
    tol: Tolerance,
) -> Result<Vec<IdentityCheck>, OperatorError> {
    let margin = margin.max(IDENTITY_MARGIN);
    let params = model.params();
    let range = model.range();
    let hbar = params.hbar();
    let i_hbar = Complex64::new(0.0, hbar);
    let zero = BandedOperator::zero(range);
    let identity = BandedOperator::identity(range);

    let l = model.angular_momentum();
    let (sin, cos) = model.trig();
    let (x, y) = model.position();
    let (px, py) = model.momentum();
    let sin2 = sin.multiply(&sin)?;
    let cos2 = cos.multiply(&cos)?;
    let x_px = x.commutator(&px)?;
    let y_py = y.commutator(&py)?;
    let px_py = px.commutator(&py)?;
    let freqs = model.frequencies();

    let mut checks = Vec::new();
    let mut push = |name, form, residual: f64| {
        checks.push(IdentityCheck {
            name,
            form,
            residual,
            holds: residual <= tol.abs(),
        })
    };

    push(
        "[L,sin_phi] = -i hbar cos_phi",
        Form::Exact,
        residual(&l.commutator(&sin)?, &cos.scale(-i_hbar), margin)?,
    );
    push(
        "[L,cos_phi] = i hbar sin_phi",
        Form::Exact,
        residual(&l.commutator(&cos)?, &sin.scale(i_hbar), margin)?,
    );
    push(
        "sin_phi^2 + cos_phi^2 = 1",
        Form::Exact,
        residual(&sin2.add(&cos2)?, &identity, margin)?,
    );
    push(
        "[x,y] = 0",
        Form::Exact,
        residual(&x.commutator(&y)?, &zero, margin)?,
    );
    push(
        "[x,p_x] = i hbar sin_phi^2",
        Form::Exact,
        residual(&x_px, &sin2.scale(i_hbar), margin)?,
    );
    push(
        "[x,p_x] = i hbar 1",
        Form::CanonicalClaim,
        residual(&x_px, &identity.scale(i_hbar), margin)?,
    );
    push(
        "[y,p_y] = i hbar cos_phi^2",
        Form::Exact,
        residual(&y_py, &cos2.scale(i_hbar), margin)?,
    );
    push(
        "[y,p_y] = i hbar 1",
        Form::CanonicalClaim,
        residual(&y_py, &identity.scale(i_hbar), margin)?,
    );
    push(
        "[x,p_x] + [y,p_y] = i hbar 1",
        Form::Exact,
        residual(&x_px.add(&y_py)?, &identity.scale(i_hbar), margin)?,
    );
    let r2 = params.radius() * params.radius();
    push(
        "[p_x,p_y] = -i (hbar/r^2) L",
        Form::Exact,
        residual(&px_py, &l.scale(Complex64::new(0.0, -hbar / r2)), margin)?,
    );
    push(
        "[p_x,p_y] = 0",
        Form::CanonicalClaim,
        residual(&px_py, &zero, margin)?,
    );
    push(
        "L = x p_y - y p_x",
        Form::Exact,
        residual(&model.angular_momentum_from_xy(), &l, margin)?,
    );
    push(
        "L L / 2I = hbar^2 n^2 / 2I",
        Form::Exact,
        residual(&model.hamiltonian(), &model.hamiltonian_closed_form(), 0)?,
    );
    let hermiticity = [&l, &x, &y, &px, &py]
        .iter()
        .map(|op| op.hermiticity_defect())
        .fold(0.0, f64::max);
    push("L, x, y, p_x, p_y Hermitian", Form::Exact, hermiticity);
    let selection = selection_rule_check(&x, &freqs, tol)
        .violations
        .iter()
        .chain(&selection_rule_check(&y, &freqs, tol).violations)
        .map(|&(_, _, z)| z.norm())
        .fold(0.0, f64::max);
    push("x, y couple adjacent labels only", Form::Exact, selection);
    Ok(checks)
}
