// SPDX-License-Identifier: Apache-2.0

//! Dense matrix exponential for the 4x4 complex generator.
//!
//! Order-13 Pade approximation with scaling and squaring. The input is
//! scaled by a power of two until its 1-norm falls below the order-13
//! accuracy threshold, the rational approximant is evaluated with a
//! single LU solve, and the result is squared back up. For the norms this
//! crate produces the result is accurate to a few units in the last
//! place.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::types::Superoperator;

/// Largest scaled 1-norm for which the order-13 approximant reaches full
/// double precision.
const PADE13_THETA: f64 = 5.371920351148152;

/// Numerator/denominator coefficients of the order-13 Pade approximant.
const B: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

fn one_norm(a: &Matrix4<Complex64>) -> f64 {
    (0..4)
        .map(|j| (0..4).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn all_finite(a: &Matrix4<Complex64>) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Computes exp(gamma * t).
pub fn expm(gamma: &Superoperator, t: f64) -> Result<Matrix4<Complex64>> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::ParamOutOfRange(format!(
            "propagation time t = {t} must be finite and nonnegative"
        )));
    }
    let a = gamma.matrix() * Complex64::from(t);
    if !all_finite(&a) {
        return Err(Error::ExpmFailure("generator has non-finite entries".into()));
    }

    let norm = one_norm(&a);
    let squarings = if norm > PADE13_THETA {
        (norm / PADE13_THETA).log2().ceil() as i32
    } else {
        0
    };
    let a = a * Complex64::from(0.5_f64.powi(squarings));

    let ident = Matrix4::<Complex64>::identity();
    let a2 = a * a;
    let a4 = a2 * a2;
    let a6 = a2 * a4;

    let u_high = a6 * Complex64::from(B[13]) + a4 * Complex64::from(B[11]) + a2 * Complex64::from(B[9]);
    let u = a * (a6 * u_high
        + a6 * Complex64::from(B[7])
        + a4 * Complex64::from(B[5])
        + a2 * Complex64::from(B[3])
        + ident * Complex64::from(B[1]));
    let v_high = a6 * Complex64::from(B[12]) + a4 * Complex64::from(B[10]) + a2 * Complex64::from(B[8]);
    let v = a6 * v_high
        + a6 * Complex64::from(B[6])
        + a4 * Complex64::from(B[4])
        + a2 * Complex64::from(B[2])
        + ident * Complex64::from(B[0]);

    let mut f = (v - u)
        .lu()
        .solve(&(v + u))
        .ok_or_else(|| Error::ExpmFailure("singular Pade denominator".into()))?;
    for _ in 0..squarings {
        f = f * f;
    }
    if !all_finite(&f) {
        return Err(Error::ExpmFailure("result has non-finite entries".into()));
    }
    Ok(f)
}
