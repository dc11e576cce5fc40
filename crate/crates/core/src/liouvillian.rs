// SPDX-License-Identifier: Apache-2.0

//! Construction of the 4x4 generator for a resonantly driven qubit.
//!
//! In the frame rotating with the drive, the generator acting on
//! (rho_11, rho_12, rho_21, rho_22) collects three families of terms:
//!
//! * first-order nutation, xi = i e^{i phi} omega1 / 2, rotating the spin
//!   about the in-plane axis set by the drive phase;
//! * drive-induced decoherence (DiD), second order in the drive: a rate
//!   d = omega1^2 tau_d / 2 on the diagonal and the phase-locked coupling
//!   eta = e^{2 i phi} d between the two coherences, which together
//!   dephase the spin about the drive axis;
//! * thermal relaxation, with population rates (1 -+ m)/T1 pumping toward
//!   polarization m and coherence decay 2/T2.
//!
//! The DiD timescale tau_d is the environmental correlation time tau_c in
//! the fluctuation-regulated model, or a caller-supplied constant in the
//! generalized variant. Rows one and four are exact negatives of each
//! other by construction, so the trace is conserved to the last bit.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::types::{Superoperator, SystemParams};

#[inline]
fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Amplitude and phase of a resonant drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveParams {
    omega1: f64,
    phi: f64,
}

impl DriveParams {
    pub fn new(omega1: f64, phi: f64) -> Result<Self> {
        if !omega1.is_finite() || omega1 < 0.0 {
            return Err(Error::ParamOutOfRange(format!(
                "drive amplitude omega1 = {omega1} must be finite and nonnegative"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::ParamOutOfRange(format!("phase phi = {phi} must be finite")));
        }
        Ok(Self { omega1, phi })
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Choice of timescale entering the drive-induced decoherence rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DidModel {
    /// DiD rates carry the environmental correlation time tau_c, the
    /// fluctuation-regulated prediction.
    FrQme,
    /// DiD rates carry a fixed phenomenological timescale instead.
    Generalized { t_tilde: f64 },
}

impl DidModel {
    /// The timescale tau_d multiplying omega1^2 / 2 in the DiD rates.
    pub fn timescale(&self, sys: &SystemParams) -> Result<f64> {
        match *self {
            DidModel::FrQme => Ok(sys.tau_c()),
            DidModel::Generalized { t_tilde } => {
                if !t_tilde.is_finite() || t_tilde < 0.0 {
                    return Err(Error::ParamOutOfRange(format!(
                        "DiD timescale t_tilde = {t_tilde} must be finite and nonnegative"
                    )));
                }
                Ok(t_tilde)
            }
        }
    }
}

/// Builds the full generator: nutation, drive-induced decoherence, and
/// thermal relaxation.
pub fn build_gamma(drive: &DriveParams, sys: &SystemParams, did: &DidModel) -> Result<Superoperator> {
    let tau_d = did.timescale(sys)?;
    let w1 = drive.omega1();
    let d = 0.5 * w1 * w1 * tau_d;
    let xi = Complex64::i() * Complex64::from_polar(0.5 * w1, drive.phi());
    let eta = Complex64::from_polar(d, 2.0 * drive.phi());

    let r1 = sys.rate1();
    let m = sys.m();
    let pop_down = d + (1.0 - m) * r1;
    let pop_up = d + (1.0 + m) * r1;
    let deco = d + 2.0 * sys.rate2();

    let xc = xi.conj();
    #[rustfmt::skip]
    let gamma = Matrix4::new(
        c(-pop_down),  xi,       xc,       c(pop_up),
        -xc,           c(-deco), eta.conj(), xc,
        -xi,           eta,      c(-deco),   xi,
        c(pop_down),  -xi,      -xc,       c(-pop_up),
    );
    Ok(Superoperator::new(gamma))
}

/// The drive-only part of the generator: the vectorized commutator
/// -i[(omega1/2)(cos(phi) sx + sin(phi) sy), rho].
pub fn coherent_generator(drive: &DriveParams) -> Superoperator {
    let xi = Complex64::i() * Complex64::from_polar(0.5 * drive.omega1(), drive.phi());
    let xc = xi.conj();
    let z = c(0.0);
    #[rustfmt::skip]
    let gamma = Matrix4::new(
        z,   xi, xc,  z,
        -xc, z,  z,   xc,
        -xi, z,  z,   xi,
        z,  -xi, -xc, z,
    );
    Superoperator::new(gamma)
}

/// The thermal-relaxation part of the generator: population exchange at
/// rates (1 -+ m)/T1 and coherence decay at 2/T2.
pub fn relaxation_generator(sys: &SystemParams) -> Superoperator {
    let r1 = sys.rate1();
    let m = sys.m();
    let pop_down = (1.0 - m) * r1;
    let pop_up = (1.0 + m) * r1;
    let deco = 2.0 * sys.rate2();
    let z = c(0.0);
    #[rustfmt::skip]
    let gamma = Matrix4::new(
        c(-pop_down), z,        z,        c(pop_up),
        z,            c(-deco), z,        z,
        z,            z,        c(-deco), z,
        c(pop_down),  z,        z,        c(-pop_up),
    );
    Superoperator::new(gamma)
}

/// Splits a generator into its drive-induced-decoherence and thermal
/// relaxation parts: `(did_part, relax_part)`.
///
/// The DiD part is recovered by subtraction, so the three parts sum back
/// to `gamma` exactly up to one rounding of each entry.
pub fn dissipator_split(
    gamma: &Superoperator,
    drive: &DriveParams,
    sys: &SystemParams,
) -> (Superoperator, Superoperator) {
    let relax = relaxation_generator(sys);
    let coherent = coherent_generator(drive);
    let did = Superoperator::new(gamma.matrix() - coherent.matrix() - relax.matrix());
    (did, relax)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{sigma_x, sigma_y};
    use nalgebra::{Matrix2, Vector4};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng) -> Matrix2<Complex64> {
        Matrix2::from_fn(|_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    fn vec_of(a: &Matrix2<Complex64>) -> Vector4<Complex64> {
        Vector4::new(a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)])
    }

    fn max_abs(m: &Matrix4<Complex64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn zero_drive_ideal_system_gives_zero_generator() {
        let drive = DriveParams::new(0.0, 0.0).unwrap();
        let sys = SystemParams::ideal(0.0).unwrap();
        let gamma = build_gamma(&drive, &sys, &DidModel::FrQme).unwrap();
        assert_eq!(max_abs(gamma.matrix()), 0.0);
    }

    #[test]
    fn relaxation_only_entries() {
        let drive = DriveParams::new(0.0, 0.0).unwrap();
        let sys = SystemParams::new(2.0, 1.0, 0.1, 1e-3).unwrap();
        let gamma = build_gamma(&drive, &sys, &DidModel::FrQme).unwrap();
        let g = gamma.matrix();
        assert_eq!(g[(0, 0)].re, -0.45);
        assert_eq!(g[(0, 3)].re, 0.55);
        assert_eq!(g[(3, 0)].re, 0.45);
        assert_eq!(g[(3, 3)].re, -0.55);
        assert_eq!(g[(1, 1)].re, -2.0);
        assert_eq!(g[(2, 2)].re, -2.0);
        assert_eq!(g[(0, 1)], Complex64::new(0.0, 0.0));
        assert_eq!(g[(1, 2)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn equilibrium_state_is_a_fixed_point() {
        let drive = DriveParams::new(0.0, 0.0).unwrap();
        let sys = SystemParams::new(0.7, 0.3, 0.25, 0.0).unwrap();
        let gamma = build_gamma(&drive, &sys, &DidModel::FrQme).unwrap();
        let eq = Vector4::new(c(0.625), c(0.0), c(0.0), c(0.375));
        let rate = gamma.matrix() * eq;
        assert!(rate[0].norm() < 1e-15);
        assert!(rate[3].norm() < 1e-15);
    }

    #[test]
    fn coherent_generator_matches_commutator() {
        // The drive part must act as the vectorized commutator with the
        // in-plane spin operator, for any matrix argument.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let w1: f64 = rng.gen_range(0.1..10.0);
            let phi: f64 = rng.gen_range(-7.0..7.0);
            let a = random_matrix(&mut rng);

            let drive = DriveParams::new(w1, phi).unwrap();
            let got = coherent_generator(&drive).matrix() * vec_of(&a);

            let h = (sigma_x() * c(0.5 * w1 * phi.cos())) + (sigma_y() * c(0.5 * w1 * phi.sin()));
            let comm = (h * a - a * h) * (-Complex64::i());
            let want = vec_of(&comm);

            for k in 0..4 {
                assert!(
                    (got[k] - want[k]).norm() <= 1e-13 * w1.max(1.0),
                    "phi={phi} k={k}: {} vs {}",
                    got[k],
                    want[k]
                );
            }
        }
    }

    #[test]
    fn full_generator_reduces_to_commutator_without_dissipation() {
        let sys = SystemParams::ideal(0.0).unwrap();
        for phi in [0.0, std::f64::consts::FRAC_PI_2, 1.234] {
            let drive = DriveParams::new(2.5, phi).unwrap();
            let full = build_gamma(&drive, &sys, &DidModel::FrQme).unwrap();
            let coherent = coherent_generator(&drive);
            assert_eq!(max_abs(&(full - coherent).matrix()), 0.0);
        }
    }

    #[test]
    fn did_rate_scales_with_amplitude_squared_and_timescale() {
        let sys = SystemParams::new(1.0, 0.5, 0.1, 2e-3).unwrap();
        let did = DidModel::FrQme;
        let d_of = |w1: f64| {
            let drive = DriveParams::new(w1, 0.3).unwrap();
            let gamma = build_gamma(&drive, &sys, &did).unwrap();
            let (did_part, _) = dissipator_split(&gamma, &drive, &sys);
            did_part.matrix()[(1, 1)].re
        };
        let d1 = d_of(3.0);
        let d2 = d_of(6.0);
        assert!((d2 / d1 - 4.0).abs() < 1e-12, "quadratic in omega1: {}", d2 / d1);
        assert!((d1 + 0.5 * 9.0 * 2e-3).abs() < 1e-15);

        let slow = DidModel::Generalized { t_tilde: 4e-3 };
        let drive = DriveParams::new(3.0, 0.3).unwrap();
        let gamma = build_gamma(&drive, &sys, &slow).unwrap();
        let (did_part, _) = dissipator_split(&gamma, &drive, &sys);
        assert!((did_part.matrix()[(1, 1)].re / d1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn eta_coupling_carries_twice_the_drive_phase() {
        let sys = SystemParams::new(1.0, 0.5, 0.1, 2e-3).unwrap();
        let phi = 0.7;
        let drive = DriveParams::new(3.0, phi).unwrap();
        let gamma = build_gamma(&drive, &sys, &DidModel::FrQme).unwrap();
        let eta = gamma.matrix()[(2, 1)];
        let d = 0.5 * 9.0 * 2e-3;
        assert!((eta - Complex64::from_polar(d, 2.0 * phi)).norm() < 1e-15);
        assert_eq!(gamma.matrix()[(1, 2)], eta.conj());
    }

    #[test]
    fn trace_is_conserved_to_the_last_bit() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let drive =
                DriveParams::new(rng.gen_range(0.0..1e5), rng.gen_range(-7.0..7.0)).unwrap();
            let sys = SystemParams::new(
                rng.gen_range(1e-6..1e3),
                rng.gen_range(1e-6..1e3),
                rng.gen_range(0.0..1.0),
                rng.gen_range(0.0..1e-2),
            )
            .unwrap();
            let gamma = build_gamma(&drive, &sys, &DidModel::FrQme).unwrap();
            assert_eq!(gamma.trace_leak(), 0.0);
        }
    }

    #[test]
    fn split_parts_sum_back_to_the_generator() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let drive =
                DriveParams::new(rng.gen_range(0.0..1e4), rng.gen_range(-7.0..7.0)).unwrap();
            let sys = SystemParams::new(
                rng.gen_range(1e-4..1e3),
                rng.gen_range(1e-4..1e3),
                rng.gen_range(0.0..1.0),
                rng.gen_range(0.0..1e-3),
            )
            .unwrap();
            let gamma = build_gamma(&drive, &sys, &DidModel::FrQme).unwrap();
            let (did_part, relax_part) = dissipator_split(&gamma, &drive, &sys);
            let sum =
                coherent_generator(&drive) + did_part + relax_part;
            let err = max_abs(&(sum - gamma).matrix());
            let scale = max_abs(gamma.matrix()).max(1.0);
            assert!(err <= 1e-14 * scale, "reconstruction error {err:.3e} at scale {scale:.3e}");
        }
    }

    #[test]
    fn split_of_pure_relaxation_has_no_did_part() {
        let drive = DriveParams::new(0.0, 0.0).unwrap();
        let sys = SystemParams::new(2.0, 1.0, 0.1, 5e-3).unwrap();
        let gamma = build_gamma(&drive, &sys, &DidModel::FrQme).unwrap();
        let (did_part, relax_part) = dissipator_split(&gamma, &drive, &sys);
        assert_eq!(max_abs(did_part.matrix()), 0.0);
        assert_eq!(relax_part.matrix()[(0, 0)].re, -0.45);
    }

    #[test]
    fn generalized_model_with_zero_timescale_has_no_did_part() {
        let drive = DriveParams::new(100.0, 1.0).unwrap();
        let sys = SystemParams::new(2.0, 1.0, 0.1, 5e-3).unwrap();
        let gamma =
            build_gamma(&drive, &sys, &DidModel::Generalized { t_tilde: 0.0 }).unwrap();
        let (did_part, _) = dissipator_split(&gamma, &drive, &sys);
        assert_eq!(max_abs(did_part.matrix()), 0.0);
    }

    #[test]
    fn generalized_model_rejects_bad_timescale() {
        let drive = DriveParams::new(1.0, 0.0).unwrap();
        let sys = SystemParams::new(1.0, 1.0, 0.1, 0.0).unwrap();
        for t_tilde in [-1.0, f64::NAN, f64::INFINITY] {
            assert!(build_gamma(&drive, &sys, &DidModel::Generalized { t_tilde }).is_err());
        }
    }
}
