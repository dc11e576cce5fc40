// SPDX-License-Identifier: Apache-2.0

//! Gate compilation and reference gate-level quantities.
//!
//! A gate is a short list of in-plane rotations (phase, flip angle). At
//! drive amplitude omega1 each rotation becomes one constant segment of
//! duration angle / omega1. The Hadamard used throughout is the x-flip
//! by pi followed by a quarter turn about -y, total angle 3 pi / 2, so
//! it takes z-polarization to x-polarization.
//!
//! Two observables summarize how dissipation degrades a gate: the
//! normalized magnetization `a` surviving a Hadamard applied to the
//! pseudo-pure state, and the z-polarization ratio surviving the rotary
//! sequence of flips {pi, -2 pi, pi}, whose closed-form decay isolates
//! the drive-induced contribution.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::liouvillian::DidModel;
use crate::propagator::propagate_sequence;
use crate::types::{
    identity2, pseudopure_state, sigma_x, sigma_y, DensityMatrix, PulseSegment, PulseSequence,
    SystemParams,
};

/// Supported gate families. Angles are signed flip angles in radians.
#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    /// x-flip by pi, then a quarter turn about -y.
    Hadamard,
    /// Rotation about x by the given angle.
    RotationX(f64),
    /// Rotation about y by the given angle.
    RotationY(f64),
    /// Arbitrary chain of (phase, flip angle) rotations, applied in
    /// order.
    Custom(Vec<(f64, f64)>),
}

/// A gate together with the drive amplitude used to realize it.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    kind: GateKind,
    omega1: f64,
}

/// Normalizes a gate to (phase, positive flip angle) rotations, folding
/// negative angles into a phase shift of pi and dropping zero flips.
fn rotations(kind: &GateKind) -> Result<Vec<(f64, f64)>> {
    let normalize = |phi: f64, angle: f64| -> Result<Option<(f64, f64)>> {
        if !phi.is_finite() || !angle.is_finite() {
            return Err(Error::ParamOutOfRange(format!(
                "rotation (phi = {phi}, angle = {angle}) must be finite"
            )));
        }
        Ok(if angle == 0.0 {
            None
        } else if angle > 0.0 {
            Some((phi, angle))
        } else {
            Some((phi + PI, -angle))
        })
    };
    let list: Vec<Option<(f64, f64)>> = match kind {
        GateKind::Hadamard => vec![Some((0.0, PI)), Some((-FRAC_PI_2, FRAC_PI_2))],
        GateKind::RotationX(angle) => vec![normalize(0.0, *angle)?],
        GateKind::RotationY(angle) => vec![normalize(FRAC_PI_2, *angle)?],
        GateKind::Custom(chain) => chain
            .iter()
            .map(|&(phi, angle)| normalize(phi, angle))
            .collect::<Result<_>>()?,
    };
    Ok(list.into_iter().flatten().collect())
}

impl GateSpec {
    /// Validates the rotation angles and requires a positive amplitude
    /// whenever the gate has any nonzero flip.
    pub fn new(kind: GateKind, omega1: f64) -> Result<Self> {
        if !omega1.is_finite() || omega1 < 0.0 {
            return Err(Error::ParamOutOfRange(format!(
                "drive amplitude omega1 = {omega1} must be finite and nonnegative"
            )));
        }
        let rots = rotations(&kind)?;
        if omega1 == 0.0 && !rots.is_empty() {
            return Err(Error::ParamOutOfRange(
                "zero drive amplitude cannot realize a nonzero flip".into(),
            ));
        }
        Ok(Self { kind, omega1 })
    }

    pub fn hadamard(omega1: f64) -> Result<Self> {
        Self::new(GateKind::Hadamard, omega1)
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }
}

/// Compiles a gate into constant segments at its drive amplitude, each
/// rotation taking angle / omega1 seconds.
pub fn compile_gate(gate: &GateSpec) -> Result<PulseSequence> {
    let rots = rotations(gate.kind())?;
    if gate.omega1() <= 0.0 && !rots.is_empty() {
        return Err(Error::ParamOutOfRange(
            "zero drive amplitude cannot realize a nonzero flip".into(),
        ));
    }
    rots.into_iter()
        .map(|(phi, angle)| PulseSegment::new(gate.omega1(), phi, angle / gate.omega1()))
        .collect::<Result<Vec<_>>>()
        .map(PulseSequence::new)
}

/// The unitary for one (phase, flip angle) rotation:
/// cos(angle/2) I - i sin(angle/2) (cos(phi) sx + sin(phi) sy).
fn rotation_unitary(phi: f64, angle: f64) -> Matrix2<Complex64> {
    let half = 0.5 * angle;
    let axis = sigma_x() * Complex64::from(phi.cos()) + sigma_y() * Complex64::from(phi.sin());
    identity2() * Complex64::from(half.cos()) - axis * (Complex64::i() * half.sin())
}

/// The exact unitary of a gate, later rotations multiplied on the left.
pub fn ideal_unitary(gate: &GateSpec) -> Result<Matrix2<Complex64>> {
    let mut u = identity2();
    for (phi, angle) in rotations(gate.kind())? {
        u = rotation_unitary(phi, angle) * u;
    }
    Ok(u)
}

/// Applies the gate's exact unitary: U rho U^dagger, no dissipation.
pub fn apply_ideal(gate: &GateSpec, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let u = ideal_unitary(gate)?;
    let raw = u * rho.matrix() * u.adjoint();
    // Conjugation preserves Hermiticity and trace; symmetrize away the
    // last bits of roundoff rather than re-validating.
    let off = 0.5 * (raw[(0, 1)] + raw[(1, 0)].conj());
    let herm = Matrix2::new(
        Complex64::from(raw[(0, 0)].re),
        off,
        off.conj(),
        Complex64::from(raw[(1, 1)].re),
    );
    Ok(DensityMatrix::from_matrix_unchecked(herm))
}

/// Propagates the pseudo-pure state through a dissipative Hadamard.
///
/// Returns the final state and the attenuation `a`: the surviving
/// x-magnetization normalized by the initial polarization `m`, which the
/// gate would map to x-magnetization exactly if dissipation were off.
/// The generator carries the fluctuation-regulated drive-induced
/// decoherence; `sys.m()` supplies the equilibrium pumping while `m`
/// sets the initial state.
pub fn hadamard_dissipative(
    m: f64,
    omega1: f64,
    sys: &SystemParams,
) -> Result<(DensityMatrix, f64)> {
    if !(m > 0.0 && m <= 1.0) {
        return Err(Error::ParamOutOfRange(format!(
            "initial polarization m = {m} must lie in (0, 1]"
        )));
    }
    if !omega1.is_finite() || omega1 <= 0.0 {
        return Err(Error::ParamOutOfRange(format!(
            "drive amplitude omega1 = {omega1} must be finite and positive"
        )));
    }
    let gate = GateSpec::hadamard(omega1)?;
    let sequence = compile_gate(&gate)?;
    let rho0 = pseudopure_state(m)?;
    let rho = propagate_sequence(&rho0, &sequence, sys, &DidModel::FrQme)?;
    let a = rho.expect_x() / m;
    Ok((rho, a))
}

/// Propagates a state through the rotary sequence of x-axis flips
/// {pi, -2 pi, pi} and compares the surviving z-polarization ratio with
/// its closed-form decay exp(-(R_eff + omega1^2 tau_c) * 4 pi / omega1).
///
/// Returns `(measured_ratio, closed_form)`. The two agree at the percent
/// level once omega1 dwarfs the relaxation rates.
pub fn r3_block_decay(
    omega1: f64,
    sys: &SystemParams,
    initial: &DensityMatrix,
) -> Result<(f64, f64)> {
    if !omega1.is_finite() || omega1 <= 0.0 {
        return Err(Error::ParamOutOfRange(format!(
            "drive amplitude omega1 = {omega1} must be finite and positive"
        )));
    }
    let mz0 = initial.expect_z();
    if mz0.abs() < 1e-15 {
        return Err(Error::ParamOutOfRange(
            "initial state has no z-polarization to track".into(),
        ));
    }
    let sequence: PulseSequence = [
        PulseSegment::new(omega1, 0.0, PI / omega1)?,
        PulseSegment::new(omega1, PI, 2.0 * PI / omega1)?,
        PulseSegment::new(omega1, 0.0, PI / omega1)?,
    ]
    .into_iter()
    .collect();
    let rho = propagate_sequence(initial, &sequence, sys, &DidModel::FrQme)?;
    let measured = rho.expect_z() / mz0;

    let total_duration = 4.0 * PI / omega1;
    let closed_form = (-(sys.r_eff() + omega1 * omega1 * sys.tau_c()) * total_duration).exp();
    Ok((measured, closed_form))
}
