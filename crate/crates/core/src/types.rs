// SPDX-License-Identifier: Apache-2.0

//! Qubit states, Liouville-space vectors, and parameter types.
//!
//! A single-qubit density matrix is flattened column-wise into the vector
//! (rho_11, rho_12, rho_21, rho_22) so that a master equation becomes the
//! linear system d rho_vec / dt = Gamma * rho_vec for a 4x4 generator Gamma.
//! All types here are plain values: cheap to copy, safe to share across
//! threads.

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hermiticity and unit-trace tolerance enforced at state construction.
pub const STATE_TOL: f64 = 1e-12;

/// Eigenvalues may dip this far below zero before a state is rejected;
/// covers harmless rounding on the positivity boundary.
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Trace and Hermiticity band accepted when converting a propagated
/// Liouville vector back to a density matrix. Wider than [`STATE_TOL`]
/// because long integrations accumulate roundoff.
pub const VECTOR_TOL: f64 = 1e-6;

#[inline]
fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Pauli x matrix.
pub fn sigma_x() -> Matrix2<Complex64> {
    Matrix2::new(c(0.0), c(1.0), c(1.0), c(0.0))
}

/// Pauli y matrix.
pub fn sigma_y() -> Matrix2<Complex64> {
    Matrix2::new(
        c(0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(0.0, 1.0),
        c(0.0),
    )
}

/// Pauli z matrix.
pub fn sigma_z() -> Matrix2<Complex64> {
    Matrix2::new(c(1.0), c(0.0), c(0.0), c(-1.0))
}

/// 2x2 identity.
pub fn identity2() -> Matrix2<Complex64> {
    Matrix2::identity()
}

/// A 2x2 Hermitian, unit-trace, positive-semidefinite density matrix.
///
/// Construction through [`DensityMatrix::new`] validates all three
/// invariants; accessors never mutate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    elements: Matrix2<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity and unit trace to [`STATE_TOL`] and
    /// positivity to [`POSITIVITY_TOL`], then wraps the matrix as given.
    pub fn new(elements: Matrix2<Complex64>) -> Result<Self> {
        let herm = (elements[(1, 0)] - elements[(0, 1)].conj()).norm();
        let diag_im = elements[(0, 0)].im.abs().max(elements[(1, 1)].im.abs());
        if herm > STATE_TOL || diag_im > STATE_TOL {
            return Err(Error::StateInvariantViolation(format!(
                "not Hermitian: off-diagonal mismatch {herm:.3e}, diagonal imaginary part {diag_im:.3e}"
            )));
        }
        let trace_dev = (elements.trace() - c(1.0)).norm();
        if trace_dev > STATE_TOL {
            return Err(Error::StateInvariantViolation(format!(
                "trace deviates from one by {trace_dev:.3e}"
            )));
        }
        let state = Self { elements };
        let min_eig = state.min_eigenvalue();
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::StateInvariantViolation(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(state)
    }

    /// Builds the state rho = (I + mx sx + my sy + mz sz) / 2 from a Bloch
    /// vector of length at most one.
    pub fn from_bloch(mx: f64, my: f64, mz: f64) -> Result<Self> {
        let len2 = mx * mx + my * my + mz * mz;
        if !len2.is_finite() || len2 > 1.0 + 2.0 * POSITIVITY_TOL {
            return Err(Error::ParamOutOfRange(format!(
                "Bloch vector length {} exceeds one",
                len2.sqrt()
            )));
        }
        Ok(Self {
            elements: Matrix2::new(
                c(0.5 * (1.0 + mz)),
                Complex64::new(0.5 * mx, -0.5 * my),
                Complex64::new(0.5 * mx, 0.5 * my),
                c(0.5 * (1.0 - mz)),
            ),
        })
    }

    /// Wraps a matrix that is Hermitian and unit-trace by construction.
    /// Callers must guarantee the invariants hold up to roundoff.
    pub(crate) fn from_matrix_unchecked(elements: Matrix2<Complex64>) -> Self {
        Self { elements }
    }

    /// The underlying 2x2 matrix.
    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.elements
    }

    /// Determinant; real because the matrix is Hermitian.
    pub fn determinant(&self) -> f64 {
        (self.elements[(0, 0)] * self.elements[(1, 1)]
            - self.elements[(0, 1)] * self.elements[(1, 0)])
            .re
    }

    /// Tr(rho^2); one for pure states, one half for the maximally mixed
    /// state.
    pub fn purity(&self) -> f64 {
        (self.elements * self.elements).trace().re
    }

    /// Smaller eigenvalue, computed from the stable Hermitian 2x2 closed
    /// form.
    pub fn min_eigenvalue(&self) -> f64 {
        let half_trace = 0.5 * (self.elements[(0, 0)].re + self.elements[(1, 1)].re);
        let half_gap = 0.5 * (self.elements[(0, 0)].re - self.elements[(1, 1)].re);
        let radius = (half_gap * half_gap + self.elements[(0, 1)].norm_sqr()).sqrt();
        half_trace - radius
    }

    /// Expectation value of Pauli x.
    pub fn expect_x(&self) -> f64 {
        (self.elements[(0, 1)] + self.elements[(1, 0)]).re
    }

    /// Expectation value of Pauli y.
    pub fn expect_y(&self) -> f64 {
        (Complex64::i() * (self.elements[(0, 1)] - self.elements[(1, 0)])).re
    }

    /// Expectation value of Pauli z.
    pub fn expect_z(&self) -> f64 {
        (self.elements[(0, 0)] - self.elements[(1, 1)]).re
    }

    /// Bloch vector (x, y, z expectation values).
    pub fn bloch(&self) -> [f64; 3] {
        [self.expect_x(), self.expect_y(), self.expect_z()]
    }
}

/// Flattened density matrix (rho_11, rho_12, rho_21, rho_22).
///
/// Unlike [`DensityMatrix`] this carries no invariants: propagation may
/// push the components off the physical manifold by roundoff, and the
/// drift is measured rather than hidden.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiouvilleVector {
    components: Vector4<Complex64>,
}

impl LiouvilleVector {
    pub fn new(components: Vector4<Complex64>) -> Self {
        Self { components }
    }

    pub fn components(&self) -> &Vector4<Complex64> {
        &self.components
    }

    /// |v1 + v4 - 1|: how far the implied trace is from one.
    pub fn trace_deviation(&self) -> f64 {
        (self.components[0] + self.components[3] - c(1.0)).norm()
    }

    /// How far the components are from describing a Hermitian matrix.
    pub fn hermiticity_drift(&self) -> f64 {
        (self.components[2] - self.components[1].conj())
            .norm()
            .max(self.components[0].im.abs())
            .max(self.components[3].im.abs())
    }
}

/// Flattens a density matrix into its Liouville vector. Exact: each
/// component is copied bit-for-bit.
pub fn vectorize(rho: &DensityMatrix) -> LiouvilleVector {
    let m = rho.matrix();
    LiouvilleVector::new(Vector4::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]))
}

/// Rebuilds a density matrix from a Liouville vector.
///
/// Trace and Hermiticity must hold to [`VECTOR_TOL`]; the surviving
/// roundoff is then repaired exactly by averaging the off-diagonal pair
/// and dropping the imaginary parts of the diagonal. The trace is kept as
/// found, not renormalized.
pub fn devectorize(v: &LiouvilleVector) -> Result<DensityMatrix> {
    let trace_dev = v.trace_deviation();
    if trace_dev > VECTOR_TOL {
        return Err(Error::StateInvariantViolation(format!(
            "vector trace deviates from one by {trace_dev:.3e}"
        )));
    }
    let herm = (v.components[2] - v.components[1].conj()).norm();
    if herm > VECTOR_TOL {
        return Err(Error::StateInvariantViolation(format!(
            "vector Hermiticity drift {herm:.3e}"
        )));
    }
    let off = 0.5 * (v.components[1] + v.components[2].conj());
    let repaired = Matrix2::new(c(v.components[0].re), off, off.conj(), c(v.components[3].re));
    let state = DensityMatrix::from_matrix_unchecked(repaired);
    let min_eig = state.min_eigenvalue();
    if min_eig < -POSITIVITY_TOL {
        return Err(Error::StateInvariantViolation(format!(
            "vector implies negative eigenvalue {min_eig:.3e}"
        )));
    }
    Ok(state)
}

/// The pseudo-pure thermal state (I + m sz) / 2 = diag((1+m)/2, (1-m)/2).
pub fn pseudopure_state(m: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::ParamOutOfRange(format!(
            "polarization m = {m} outside [0, 1]"
        )));
    }
    Ok(DensityMatrix::from_matrix_unchecked(Matrix2::new(
        c(0.5 * (1.0 + m)),
        c(0.0),
        c(0.0),
        c(0.5 * (1.0 - m)),
    )))
}

/// Relaxation and environment parameters of the qubit.
///
/// `t1` and `t2` are the longitudinal and transverse relaxation times in
/// seconds (infinite values switch relaxation off), `m` the equilibrium
/// polarization, and `tau_c` the correlation time of the environmental
/// fluctuations in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    t1: f64,
    t2: f64,
    m: f64,
    tau_c: f64,
}

impl SystemParams {
    pub fn new(t1: f64, t2: f64, m: f64, tau_c: f64) -> Result<Self> {
        if t1.is_nan() || t1 <= 0.0 {
            return Err(Error::ParamOutOfRange(format!("T1 = {t1} must be positive")));
        }
        if t2.is_nan() || t2 <= 0.0 {
            return Err(Error::ParamOutOfRange(format!("T2 = {t2} must be positive")));
        }
        if !(0.0..=1.0).contains(&m) {
            return Err(Error::ParamOutOfRange(format!(
                "polarization m = {m} outside [0, 1]"
            )));
        }
        if !tau_c.is_finite() || tau_c < 0.0 {
            return Err(Error::ParamOutOfRange(format!(
                "correlation time tau_c = {tau_c} must be finite and nonnegative"
            )));
        }
        Ok(Self { t1, t2, m, tau_c })
    }

    /// Relaxation-free limit: infinite T1 and T2, zero correlation time.
    pub fn ideal(m: f64) -> Result<Self> {
        Self::new(f64::INFINITY, f64::INFINITY, m, 0.0)
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn tau_c(&self) -> f64 {
        self.tau_c
    }

    /// 1/T1; zero when T1 is infinite.
    pub fn rate1(&self) -> f64 {
        1.0 / self.t1
    }

    /// 1/T2; zero when T2 is infinite.
    pub fn rate2(&self) -> f64 {
        1.0 / self.t2
    }

    /// Combined relaxation rate 1/T1 + 1/T2 governing gate decay.
    pub fn r_eff(&self) -> f64 {
        self.rate1() + self.rate2()
    }
}

/// One constant-amplitude, constant-phase drive interval.
///
/// `omega1` is the nutation angular frequency in rad/s, `phi` the drive
/// phase in radians (0 drives about x, pi/2 about y), `duration` in
/// seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSegment {
    omega1: f64,
    phi: f64,
    duration: f64,
}

impl PulseSegment {
    pub fn new(omega1: f64, phi: f64, duration: f64) -> Result<Self> {
        if !omega1.is_finite() || omega1 < 0.0 {
            return Err(Error::ParamOutOfRange(format!(
                "drive amplitude omega1 = {omega1} must be finite and nonnegative"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::ParamOutOfRange(format!("phase phi = {phi} must be finite")));
        }
        if !duration.is_finite() || duration < 0.0 {
            return Err(Error::ParamOutOfRange(format!(
                "duration = {duration} must be finite and nonnegative"
            )));
        }
        Ok(Self { omega1, phi, duration })
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Flip angle omega1 * duration in radians.
    pub fn flip_angle(&self) -> f64 {
        self.omega1 * self.duration
    }
}

/// An ordered list of pulse segments, applied first element first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PulseSequence {
    segments: Vec<PulseSegment>,
}

impl PulseSequence {
    pub fn new(segments: Vec<PulseSegment>) -> Self {
        Self { segments }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn push(&mut self, segment: PulseSegment) {
        self.segments.push(segment);
    }

    pub fn segments(&self) -> &[PulseSegment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(PulseSegment::duration).sum()
    }

    /// Largest drive amplitude over all segments; zero for an empty
    /// sequence.
    pub fn max_omega1(&self) -> f64 {
        self.segments.iter().map(PulseSegment::omega1).fold(0.0, f64::max)
    }
}

impl FromIterator<PulseSegment> for PulseSequence {
    fn from_iter<I: IntoIterator<Item = PulseSegment>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// A 4x4 generator acting on Liouville vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superoperator {
    matrix: Matrix4<Complex64>,
}

impl Superoperator {
    pub fn new(matrix: Matrix4<Complex64>) -> Self {
        Self { matrix }
    }

    pub fn zero() -> Self {
        Self { matrix: Matrix4::zeros() }
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.matrix
    }

    /// Applies the generator to a vector: d rho_vec / dt at this instant.
    pub fn apply(&self, v: &LiouvilleVector) -> LiouvilleVector {
        LiouvilleVector::new(self.matrix * v.components())
    }

    /// Largest column sum of the population rows (rows 1 and 4). Zero for
    /// a trace-preserving generator, up to roundoff.
    pub fn trace_leak(&self) -> f64 {
        (0..4)
            .map(|j| (self.matrix[(0, j)] + self.matrix[(3, j)]).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Add for Superoperator {
    type Output = Superoperator;
    fn add(self, rhs: Superoperator) -> Superoperator {
        Superoperator::new(self.matrix + rhs.matrix)
    }
}

impl std::ops::Sub for Superoperator {
    type Output = Superoperator;
    fn sub(self, rhs: Superoperator) -> Superoperator {
        Superoperator::new(self.matrix - rhs.matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn maximally_mixed() -> Matrix2<Complex64> {
        Matrix2::new(c(0.5), c(0.0), c(0.0), c(0.5))
    }

    #[test]
    fn new_accepts_maximally_mixed() {
        let rho = DensityMatrix::new(maximally_mixed()).unwrap();
        assert_eq!(rho.expect_z(), 0.0);
        assert_abs_diff_eq!(rho.purity(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn new_rejects_non_hermitian() {
        let bad = Matrix2::new(c(0.5), c(0.3), c(0.1), c(0.5));
        assert!(matches!(
            DensityMatrix::new(bad),
            Err(Error::StateInvariantViolation(_))
        ));
    }

    #[test]
    fn new_rejects_wrong_trace() {
        let bad = Matrix2::new(c(0.7), c(0.0), c(0.0), c(0.5));
        assert!(matches!(
            DensityMatrix::new(bad),
            Err(Error::StateInvariantViolation(_))
        ));
    }

    #[test]
    fn new_rejects_negative_eigenvalue() {
        // Bloch length 1.25: Hermitian and unit trace but not positive.
        let bad = Matrix2::new(c(1.125), c(0.0), c(0.0), c(-0.125));
        assert!(matches!(
            DensityMatrix::new(bad),
            Err(Error::StateInvariantViolation(_))
        ));
    }

    #[test]
    fn bloch_round_trip() {
        let rho = DensityMatrix::from_bloch(0.3, -0.4, 0.5).unwrap();
        let [x, y, z] = rho.bloch();
        assert_abs_diff_eq!(x, 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(y, -0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(z, 0.5, epsilon = 1e-15);
        assert!(rho.min_eigenvalue() >= 0.0);
    }

    #[test]
    fn from_bloch_rejects_long_vector() {
        assert!(matches!(
            DensityMatrix::from_bloch(1.0, 0.5, 0.0),
            Err(Error::ParamOutOfRange(_))
        ));
    }

    #[test]
    fn vectorize_orders_row_wise() {
        let rho = DensityMatrix::from_bloch(1.0, 0.0, 0.0).unwrap();
        let v = vectorize(&rho);
        assert_eq!(v.components()[0], c(0.5));
        assert_eq!(v.components()[1], c(0.5));
        assert_eq!(v.components()[2], c(0.5));
        assert_eq!(v.components()[3], c(0.5));
    }

    #[test]
    fn vectorize_devectorize_round_trip_is_exact() {
        let rho = DensityMatrix::from_bloch(0.12, 0.34, -0.56).unwrap();
        let back = devectorize(&vectorize(&rho)).unwrap();
        assert_eq!(back.matrix(), rho.matrix());
    }

    #[test]
    fn devectorize_repairs_small_drift() {
        let v = LiouvilleVector::new(Vector4::new(
            Complex64::new(0.5, 1e-9),
            Complex64::new(0.25, 0.1),
            Complex64::new(0.25, -0.1 + 1e-9),
            Complex64::new(0.5, -1e-9),
        ));
        let rho = devectorize(&v).unwrap();
        let m = rho.matrix();
        assert_eq!(m[(1, 0)], m[(0, 1)].conj());
        assert_eq!(m[(0, 0)].im, 0.0);
        // Averaging (0.1) and (0.1 - 1e-9) splits the drift in half.
        assert_abs_diff_eq!(m[(0, 1)].im, 0.1 - 0.5e-9, epsilon = 1e-16);
    }

    #[test]
    fn devectorize_rejects_trace_loss() {
        let v = LiouvilleVector::new(Vector4::new(c(0.49), c(0.0), c(0.0), c(0.5)));
        assert!(matches!(
            devectorize(&v),
            Err(Error::StateInvariantViolation(_))
        ));
    }

    #[test]
    fn devectorize_rejects_hermiticity_drift() {
        let v = LiouvilleVector::new(Vector4::new(c(0.5), c(0.2), c(0.1), c(0.5)));
        assert!(matches!(
            devectorize(&v),
            Err(Error::StateInvariantViolation(_))
        ));
    }

    #[test]
    fn pseudopure_examples() {
        let rho = pseudopure_state(0.1).unwrap();
        assert_eq!(rho.matrix()[(0, 0)], c(0.55));
        assert_eq!(rho.matrix()[(1, 1)], c(0.45));
        assert_eq!(rho.matrix()[(0, 1)], c(0.0));
        assert_abs_diff_eq!(rho.expect_z(), 0.1, epsilon = 1e-15);

        let pure = pseudopure_state(1.0).unwrap();
        assert_eq!(pure.expect_z(), 1.0);
        assert_eq!(pure.min_eigenvalue(), 0.0);

        assert!(matches!(
            pseudopure_state(1.5),
            Err(Error::ParamOutOfRange(_))
        ));
        assert!(matches!(
            pseudopure_state(-0.1),
            Err(Error::ParamOutOfRange(_))
        ));
    }

    #[test]
    fn system_params_validation() {
        assert!(SystemParams::new(1.0, 0.5, 0.1, 1e-3).is_ok());
        assert!(SystemParams::new(f64::INFINITY, f64::INFINITY, 0.0, 0.0).is_ok());
        assert!(matches!(
            SystemParams::new(0.0, 0.5, 0.1, 1e-3),
            Err(Error::ParamOutOfRange(_))
        ));
        assert!(matches!(
            SystemParams::new(1.0, -0.5, 0.1, 1e-3),
            Err(Error::ParamOutOfRange(_))
        ));
        assert!(matches!(
            SystemParams::new(1.0, 0.5, 1.2, 1e-3),
            Err(Error::ParamOutOfRange(_))
        ));
        assert!(matches!(
            SystemParams::new(1.0, 0.5, 0.1, f64::INFINITY),
            Err(Error::ParamOutOfRange(_))
        ));
    }

    #[test]
    fn infinite_relaxation_times_give_zero_rates() {
        let sys = SystemParams::ideal(0.3).unwrap();
        assert_eq!(sys.rate1(), 0.0);
        assert_eq!(sys.rate2(), 0.0);
        assert_eq!(sys.r_eff(), 0.0);
    }

    #[test]
    fn segment_validation_and_flip_angle() {
        let seg = PulseSegment::new(2.0, 0.5, std::f64::consts::PI).unwrap();
        assert_abs_diff_eq!(seg.flip_angle(), 2.0 * std::f64::consts::PI, epsilon = 1e-15);
        assert!(PulseSegment::new(-1.0, 0.0, 1.0).is_err());
        assert!(PulseSegment::new(1.0, f64::NAN, 1.0).is_err());
        assert!(PulseSegment::new(1.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn sequence_duration_and_max_amplitude() {
        let seq: PulseSequence = [
            PulseSegment::new(2.0, 0.0, 1.5).unwrap(),
            PulseSegment::new(3.0, 1.0, 0.5).unwrap(),
        ]
        .into_iter()
        .collect();
        assert_abs_diff_eq!(seq.total_duration(), 2.0, epsilon = 1e-15);
        assert_eq!(seq.max_omega1(), 3.0);
        assert_eq!(PulseSequence::empty().total_duration(), 0.0);
        assert_eq!(PulseSequence::empty().max_omega1(), 0.0);
    }

    #[test]
    fn superoperator_apply_and_trace_leak() {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = c(-1.0);
        m[(3, 0)] = c(1.0);
        m[(1, 1)] = c(-2.0);
        let g = Superoperator::new(m);
        assert_eq!(g.trace_leak(), 0.0);

        let v = LiouvilleVector::new(Vector4::new(c(1.0), c(0.5), c(0.5), c(0.0)));
        let dv = g.apply(&v);
        assert_eq!(dv.components()[0], c(-1.0));
        assert_eq!(dv.components()[3], c(1.0));
        assert_eq!(dv.components()[1], c(-1.0));

        let leaky = Superoperator::new(Matrix4::identity());
        assert_eq!(leaky.trace_leak(), 1.0);
    }
}
