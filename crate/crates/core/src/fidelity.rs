// SPDX-License-Identifier: Apache-2.0

//! State fidelity and closed-form gate-decay expressions.
//!
//! For 2x2 states the Uhlmann fidelity reduces to
//! F = Tr(rho sigma) + 2 sqrt(det rho det sigma), with no square roots of
//! matrices. The closed forms specialize it to the Hadamard acting on the
//! pseudo-pure state: the achieved state keeps a fraction `a` of the
//! ideal x-magnetization, giving
//! F = ((1 + m^2 a) + sqrt((1 - m^2)(1 - m^2 a^2))) / 2,
//! and the attenuation itself decays as
//! a = exp(-(3 pi / 2)(R_eff / omega1 + omega1 tau_c)), slow drives
//! losing to relaxation and fast drives to drive-induced decoherence.

use crate::error::{Error, Result};
use crate::types::{DensityMatrix, SystemParams, POSITIVITY_TOL};

/// Roundoff slack tolerated outside the exact [0, 1] fidelity range.
pub const FIDELITY_SLACK: f64 = 1e-12;

/// A fidelity, validated to lie in [0, 1] up to [`FIDELITY_SLACK`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FidelityValue(f64);

impl FidelityValue {
    /// Accepts values in [-slack, 1 + slack]; negative roundoff is
    /// clamped to zero, overshoot above one is kept as measured.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < -FIDELITY_SLACK || value > 1.0 + FIDELITY_SLACK {
            return Err(Error::NumericalDomain(format!(
                "fidelity {value} outside [0, 1] beyond roundoff"
            )));
        }
        Ok(Self(value.max(0.0)))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Uhlmann fidelity of two qubit states, using the determinant closed
/// form. Symmetric in its arguments; one for identical states, zero for
/// orthogonal pure states.
pub fn uhlmann_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<FidelityValue> {
    let d_rho = rho.determinant();
    let d_sigma = sigma.determinant();
    if d_rho < -POSITIVITY_TOL || d_sigma < -POSITIVITY_TOL {
        return Err(Error::NumericalDomain(format!(
            "negative determinant: det(rho) = {d_rho:.3e}, det(sigma) = {d_sigma:.3e}"
        )));
    }
    let overlap = (rho.matrix() * sigma.matrix()).trace().re;
    let value = overlap + 2.0 * (d_rho.max(0.0) * d_sigma.max(0.0)).sqrt();
    FidelityValue::new(value)
}

/// Fidelity between the ideal Hadamard output (I + m sx)/2 and the
/// dissipative output (I + m a sx)/2, as a function of the polarization
/// and the surviving fraction `a`.
pub fn hadamard_fidelity_closed_form(m: f64, a: f64) -> Result<FidelityValue> {
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::ParamOutOfRange(format!(
            "polarization m = {m} outside [0, 1]"
        )));
    }
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::ParamOutOfRange(format!(
            "attenuation a = {a} outside (0, 1]"
        )));
    }
    if a == 1.0 {
        // Identical states; bypass the formula so the answer is exact.
        return FidelityValue::new(1.0);
    }
    let m2 = m * m;
    let value = 0.5 * ((1.0 + m2 * a) + ((1.0 - m2) * (1.0 - m2 * a * a)).sqrt());
    FidelityValue::new(value)
}

/// Closed-form Hadamard attenuation
/// a = exp(-(3 pi / 2)(R_eff / omega1 + omega1 tau_c)).
///
/// The exponent is the total gate time 3 pi / (2 omega1) times the decay
/// rate R_eff + omega1^2 tau_c of the rotating magnetization.
pub fn decay_factor(omega1: f64, sys: &SystemParams) -> Result<f64> {
    if !omega1.is_finite() || omega1 <= 0.0 {
        return Err(Error::ParamOutOfRange(format!(
            "drive amplitude omega1 = {omega1} must be finite and positive"
        )));
    }
    let exponent = 1.5 * std::f64::consts::PI * (sys.r_eff() / omega1 + omega1 * sys.tau_c());
    Ok((-exponent).exp())
}
