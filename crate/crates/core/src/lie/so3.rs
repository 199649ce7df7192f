use std::ops::Mul;

use nalgebra::{Matrix3, Vector3};

use super::{hat, skew_vee, AlgebraVector, SMALL_ANGLE, TRACE_EPS};
use crate::error::{Error, Result};

/// Element of SO(3).
///
/// [`RotationMatrix::new`] enforces `RᵀR = I` and `det R = 1` to 1e-9.
/// States produced by the integrator are wrapped with
/// [`RotationMatrix::from_matrix_unchecked`]: they are never re-projected, so
/// their orthonormality drift stays observable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationMatrix(Matrix3<f64>);

impl RotationMatrix {
    pub const TOLERANCE: f64 = 1e-9;

    pub fn identity() -> Self {
        RotationMatrix(Matrix3::identity())
    }

    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let r = RotationMatrix(m);
        let orthogonality = r.orthonormality_error();
        let det = m.determinant();
        if !m.iter().all(|x| x.is_finite()) || orthogonality > Self::TOLERANCE || (det - 1.0).abs() > Self::TOLERANCE {
            return Err(Error::NotRotation { orthogonality, det });
        }
        Ok(r)
    }

    pub fn from_matrix_unchecked(m: Matrix3<f64>) -> Self {
        RotationMatrix(m)
    }

    /// Active rotation by `angle` about coordinate axis `axis` (0, 1 or 2).
    pub fn about_axis(axis: usize, angle: f64) -> Self {
        let mut v = Vector3::zeros();
        v[axis] = angle;
        so3_exp(&v)
    }

    pub fn exp(v: &AlgebraVector) -> Self {
        so3_exp(v)
    }

    pub fn log(&self) -> Result<AlgebraVector> {
        so3_log(self)
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        RotationMatrix(self.0.transpose())
    }

    pub fn inverse(&self) -> Self {
        self.transpose()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// Rotation angle in `[0, π]`.
    pub fn angle(&self) -> f64 {
        let s = 0.5 * skew_vee(&self.0).norm();
        let c = 0.5 * (self.trace() - 1.0);
        s.atan2(c)
    }

    /// `‖RᵀR − I‖_F`.
    pub fn orthonormality_error(&self) -> f64 {
        (self.0.transpose() * self.0 - Matrix3::identity()).norm()
    }

    /// Adjoint action `Ad_R v = R v`.
    pub fn adjoint(&self, v: &AlgebraVector) -> AlgebraVector {
        self.0 * v
    }
}

impl Mul for RotationMatrix {
    type Output = RotationMatrix;

    fn mul(self, rhs: RotationMatrix) -> RotationMatrix {
        RotationMatrix(self.0 * rhs.0)
    }
}

impl Mul<&RotationMatrix> for &RotationMatrix {
    type Output = RotationMatrix;

    fn mul(self, rhs: &RotationMatrix) -> RotationMatrix {
        RotationMatrix(self.0 * rhs.0)
    }
}

impl Mul<AlgebraVector> for &RotationMatrix {
    type Output = AlgebraVector;

    fn mul(self, rhs: AlgebraVector) -> AlgebraVector {
        self.0 * rhs
    }
}

/// Exponential map so(3) → SO(3) (Rodrigues form).
pub fn so3_exp(v: &AlgebraVector) -> RotationMatrix {
    let angle = v.norm();
    let k = hat(v);
    let (a, b) = if angle < SMALL_ANGLE {
        let a2 = angle * angle;
        (1.0 - a2 / 6.0, 0.5 - a2 / 24.0)
    } else {
        (angle.sin() / angle, (1.0 - angle.cos()) / (angle * angle))
    };
    RotationMatrix(Matrix3::identity() + a * k + b * k * k)
}

/// Logarithm SO(3) → so(3), returned as a rotation vector of norm `< π`.
///
/// `log(R) = φ / (2 sin φ) (R − Rᵀ)^∨` with `φ` the rotation angle and
/// `log(I) = 0`. Fails with [`Error::CutLocus`] once `tr(R) ≤ −1 + TRACE_EPS`.
pub fn so3_log(r: &RotationMatrix) -> Result<AlgebraVector> {
    let trace = r.trace();
    if !(trace > -1.0 + TRACE_EPS) {
        return Err(Error::cut_locus(format!("tr(R) = {trace}")));
    }
    let w = skew_vee(r.matrix());
    let s = 0.5 * w.norm();
    let c = 0.5 * (trace - 1.0);
    let angle = s.atan2(c);
    let factor = if angle < SMALL_ANGLE {
        0.5 * (1.0 + angle * angle / 6.0)
    } else {
        angle / (2.0 * angle.sin())
    };
    Ok(factor * w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    /// Truncated power series of the matrix exponential.
    fn series_exp(v: &AlgebraVector, terms: usize) -> Matrix3<f64> {
        let k = hat(v);
        let mut sum = Matrix3::identity();
        let mut term = Matrix3::identity();
        for n in 1..terms {
            term = term * k / n as f64;
            sum += term;
        }
        sum
    }

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(so3_exp(&Vector3::zeros()), RotationMatrix::identity());
    }

    #[test]
    fn exp_quarter_turn_matches_power_series() {
        let v = Vector3::new(FRAC_PI_2, 0.0, 0.0);
        let oracle = series_exp(&v, 30);
        assert!((so3_exp(&v).matrix() - oracle).norm() < 1e-14);
        // and is the expected quarter turn about axis 1
        let expected = Matrix3::new(1.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0);
        assert!((so3_exp(&v).matrix() - expected).norm() < 1e-15);
    }

    #[test]
    fn exp_small_angle_remainder_bound() {
        for scale in [1e-4, 5e-5, 1e-6, 1e-9] {
            let v = Vector3::new(0.3, -0.8, 0.52).normalize() * scale;
            let err = (so3_exp(&v).matrix() - (Matrix3::identity() + hat(&v))).norm();
            assert!(err <= v.norm_squared(), "{scale}: {err}");
        }
    }

    #[test]
    fn exp_is_a_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let v = sampling::velocity(&mut rng) * 3.0;
            assert!(RotationMatrix::new(*so3_exp(&v).matrix()).is_ok());
        }
    }

    #[test]
    fn log_of_identity_is_zero() {
        assert_eq!(so3_log(&RotationMatrix::identity()).unwrap(), Vector3::zeros());
    }

    #[test]
    fn log_inverts_exp() {
        let v = Vector3::new(0.3, -0.2, 0.1);
        assert_relative_eq!(so3_log(&so3_exp(&v)).unwrap(), v, epsilon = 1e-14);
    }

    #[test]
    fn log_rejects_half_turn() {
        let r = RotationMatrix::about_axis(0, PI);
        assert!(so3_log(&r).unwrap_err().is_cut_locus());
        let r = RotationMatrix::new(Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, -1.0))).unwrap();
        assert!(so3_log(&r).unwrap_err().is_cut_locus());
    }

    #[test]
    fn exp_log_roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            // angle margin 0.05 keeps 1 + tr(R) = 2(1 − cos(margin)) above 1e-3
            let r = sampling::rotation(&mut rng, 0.05);
            assert!(r.trace() > -1.0 + 1e-3);
            let back = so3_exp(&so3_log(&r).unwrap());
            assert!((back.matrix() - r.matrix()).norm() < 1e-8);
        }
    }

    #[test]
    fn log_exp_roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let v = sampling::rotation_vector(&mut rng, 1e-3);
            assert!(v.norm() < PI - 1e-3);
            let back = so3_log(&so3_exp(&v)).unwrap();
            assert!((back - v).norm() < 1e-8, "{v:?}");
            assert!(back.norm() < PI);
        }
    }

    #[test]
    fn small_angle_branch_is_continuous() {
        let axis = Vector3::new(1.0, 2.0, -2.0).normalize();
        for angle in [SMALL_ANGLE * 0.999, SMALL_ANGLE * 1.001, 1e-7] {
            let v = axis * angle;
            assert!((so3_log(&so3_exp(&v)).unwrap() - v).norm() < 1e-18_f64.max(1e-12 * angle));
        }
    }

    #[test]
    fn adjoint_preserves_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let r = sampling::rotation(&mut rng, 1e-3);
            let v = sampling::velocity(&mut rng);
            assert_relative_eq!(r.adjoint(&v).norm(), v.norm(), epsilon = 1e-12);
        }
        let v = Vector3::new(1.0, -2.0, 0.5);
        assert_eq!(RotationMatrix::identity().adjoint(&v), v);
    }

    #[test]
    fn new_rejects_non_rotations() {
        assert!(RotationMatrix::new(Matrix3::identity() * 1.01).is_err());
        assert!(RotationMatrix::new(-Matrix3::identity()).is_err());
    }
}
