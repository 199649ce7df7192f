//! Lie group and Lie algebra primitives for rigid-body attitude.
//!
//! Both attitude groups used here share the Lie algebra ℝ³ with the cross
//! product as bracket. [`RotationMatrix`] is SO(3) with matrix
//! multiplication; [`UnitQuaternion`] is S³ with the Hamilton product and
//! double covers SO(3).
//!
//! The logarithm is undefined on the cut locus: `tr(R) = -1` on SO(3) and
//! `q = -ι` on S³. Both are reported as [`Error::CutLocus`] once they are
//! within [`TRACE_EPS`] / [`POLE_EPS`].

mod inertia;
mod quaternion;
mod so3;

pub use inertia::InertiaTensor;
pub use quaternion::UnitQuaternion;
pub use so3::{so3_exp, so3_log, RotationMatrix};

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Element of the Lie algebra so(3) ≅ s³ ≅ ℝ³ (angular velocities, rotation vectors, sliding variables).
pub type AlgebraVector = Vector3<f64>;

/// Below this rotation angle the log/exp use their Taylor branches.
pub const SMALL_ANGLE: f64 = 1e-4;

/// Margin on `tr(R) + 1` below which the SO(3) logarithm is refused.
pub const TRACE_EPS: f64 = 1e-6;

/// Margin on `q0 + 1` below which the S³ logarithm is refused.
pub const POLE_EPS: f64 = 1e-6;

/// Tolerance on `|S + S^T|` accepted by [`vee`].
pub const SKEW_TOL: f64 = 1e-9;

/// The isomorphism ℝ³ → so(3): `hat(v) * w == v × w`.
pub fn hat(v: &AlgebraVector) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Inverse of [`hat`]. Rejects matrices that are not skew-symmetric.
pub fn vee(s: &Matrix3<f64>) -> Result<AlgebraVector> {
    let asymmetry = (s + s.transpose()).norm();
    if asymmetry > SKEW_TOL {
        return Err(Error::NotSkew { asymmetry });
    }
    Ok(vee_unchecked(s))
}

/// `(M - M^T)^∨`, i.e. twice the axial vector of the skew part of `m`.
pub fn skew_vee(m: &Matrix3<f64>) -> AlgebraVector {
    Vector3::new(m[(2, 1)] - m[(1, 2)], m[(0, 2)] - m[(2, 0)], m[(1, 0)] - m[(0, 1)])
}

pub(crate) fn vee_unchecked(s: &Matrix3<f64>) -> AlgebraVector {
    Vector3::new(s[(2, 1)], s[(0, 2)], s[(1, 0)])
}

/// Coadjoint term `ad*_ζ 𝕁♭(η) = (𝕁η)^∧ ζ`.
///
/// This is the gyroscopic torque that appears in the Euler–Poincaré equation
/// and in the feedforward of the sliding-mode controllers.
pub fn ad_star(zeta: &AlgebraVector, eta: &AlgebraVector, inertia: &InertiaTensor) -> AlgebraVector {
    inertia.flat(eta).cross(zeta)
}

/// Inverse of the right-trivialised differential of the exponential chart.
///
/// If `R(t) = exp(θ(t))` moves with body velocity `Ω` (`Ṙ = R Ω^∧`) then
/// `θ̇ = dexp_inv(θ) Ω`. The closed form is valid for `|θ| < 2π`, which
/// covers both the SO(3) logarithm and twice the S³ logarithm.
pub fn dexp_inv(theta: &AlgebraVector) -> Matrix3<f64> {
    let angle = theta.norm();
    let k = hat(theta);
    // coefficient of k² : 1/θ² - cot(θ/2)/(2θ)
    let c = if angle < SMALL_ANGLE {
        1.0 / 12.0 + angle * angle / 720.0
    } else {
        1.0 / (angle * angle) - 1.0 / (2.0 * angle * (0.5 * angle).tan())
    };
    Matrix3::identity() + 0.5 * k + c * k * k
}
