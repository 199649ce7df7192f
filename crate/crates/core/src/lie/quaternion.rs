use std::ops::{Mul, Neg};

use nalgebra::{Matrix3, Vector3, Vector4};

use super::{hat, AlgebraVector, RotationMatrix, POLE_EPS, SMALL_ANGLE};
use crate::error::{Error, Result};

/// Unit quaternion `[q0, qv]`, scalar first. Element of S³.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitQuaternion {
    w: f64,
    v: Vector3<f64>,
}

impl UnitQuaternion {
    pub const TOLERANCE: f64 = 1e-9;
    /// Norm drift tolerated before a product is renormalised.
    pub const RENORMALIZE_DRIFT: f64 = 1e-12;

    pub fn identity() -> Self {
        UnitQuaternion {
            w: 1.0,
            v: Vector3::zeros(),
        }
    }

    pub fn new(q0: f64, qv: Vector3<f64>) -> Result<Self> {
        let norm = (q0 * q0 + qv.norm_squared()).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > Self::TOLERANCE {
            return Err(Error::NotUnitQuaternion { norm });
        }
        Ok(UnitQuaternion { w: q0, v: qv })
    }

    /// Projects an arbitrary non-zero 4-vector onto S³.
    pub fn from_vector_normalized(q: &Vector4<f64>) -> Self {
        let q = q / q.norm();
        UnitQuaternion {
            w: q[0],
            v: Vector3::new(q[1], q[2], q[3]),
        }
    }

    /// Quaternion of the physical rotation by `|θ|` about `θ/|θ|`.
    pub fn from_rotation_vector(theta: &AlgebraVector) -> Self {
        Self::exp(&(0.5 * theta))
    }

    /// Inverse of [`UnitQuaternion::log`]: `[cos|ω|, sin|ω| ω/|ω|]`.
    pub fn exp(omega: &AlgebraVector) -> Self {
        let a = omega.norm();
        let sinc = if a < SMALL_ANGLE {
            1.0 - a * a / 6.0
        } else {
            a.sin() / a
        };
        UnitQuaternion {
            w: a.cos(),
            v: sinc * omega,
        }
    }

    /// Shepperd's method; returns the representative with `q0 ≥ 0`.
    pub fn from_rotation(r: &RotationMatrix) -> Self {
        let m = r.matrix();
        let trace = m.trace();
        let candidates = [trace, m[(0, 0)], m[(1, 1)], m[(2, 2)]];
        let (best, _) =
            candidates.iter().enumerate().fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, &x)| if x > acc.1 { (i, x) } else { acc },
            );
        let q = match best {
            0 => {
                let s = 2.0 * (1.0 + trace).sqrt();
                Vector4::new(
                    0.25 * s,
                    (m[(2, 1)] - m[(1, 2)]) / s,
                    (m[(0, 2)] - m[(2, 0)]) / s,
                    (m[(1, 0)] - m[(0, 1)]) / s,
                )
            }
            1 => {
                let s = 2.0 * (1.0 + m[(0, 0)] - m[(1, 1)] - m[(2, 2)]).sqrt();
                Vector4::new(
                    (m[(2, 1)] - m[(1, 2)]) / s,
                    0.25 * s,
                    (m[(0, 1)] + m[(1, 0)]) / s,
                    (m[(0, 2)] + m[(2, 0)]) / s,
                )
            }
            2 => {
                let s = 2.0 * (1.0 + m[(1, 1)] - m[(0, 0)] - m[(2, 2)]).sqrt();
                Vector4::new(
                    (m[(0, 2)] - m[(2, 0)]) / s,
                    (m[(0, 1)] + m[(1, 0)]) / s,
                    0.25 * s,
                    (m[(1, 2)] + m[(2, 1)]) / s,
                )
            }
            _ => {
                let s = 2.0 * (1.0 + m[(2, 2)] - m[(0, 0)] - m[(1, 1)]).sqrt();
                Vector4::new(
                    (m[(1, 0)] - m[(0, 1)]) / s,
                    (m[(0, 2)] + m[(2, 0)]) / s,
                    (m[(1, 2)] + m[(2, 1)]) / s,
                    0.25 * s,
                )
            }
        };
        let q = if q[0] < 0.0 { -q } else { q };
        Self::from_vector_normalized(&q)
    }

    pub fn scalar(&self) -> f64 {
        self.w
    }

    pub fn vector(&self) -> &Vector3<f64> {
        &self.v
    }

    pub fn coords(&self) -> Vector4<f64> {
        Vector4::new(self.w, self.v.x, self.v.y, self.v.z)
    }

    pub fn norm(&self) -> f64 {
        (self.w * self.w + self.v.norm_squared()).sqrt()
    }

    /// `q⁻¹ = [q0, −qv]`.
    pub fn inverse(&self) -> Self {
        UnitQuaternion { w: self.w, v: -self.v }
    }

    /// Hamilton product `q1 ⊗ q2 = Q(q1) q2`, renormalised if the norm drifts.
    pub fn compose(&self, rhs: &UnitQuaternion) -> UnitQuaternion {
        let w = self.w * rhs.w - self.v.dot(&rhs.v);
        let v = self.w * rhs.v + rhs.w * self.v + self.v.cross(&rhs.v);
        let q = UnitQuaternion { w, v };
        if (q.norm() - 1.0).abs() > Self::RENORMALIZE_DRIFT {
            Self::from_vector_normalized(&q.coords())
        } else {
            q
        }
    }

    /// Rodrigues map `R(q) = I + 2 q0 qv^∧ + 2 (qv^∧)²`.
    pub fn to_rotation(&self) -> RotationMatrix {
        let k = hat(&self.v);
        RotationMatrix::from_matrix_unchecked(Matrix3::identity() + (2.0 * self.w) * k + 2.0 * (k * k))
    }

    /// `log(q) = arccos(q0) qv / |qv|`, the half-angle rotation vector.
    ///
    /// Fails with [`Error::CutLocus`] within `POLE_EPS` of `−ι`.
    pub fn log(&self) -> Result<AlgebraVector> {
        if !(1.0 + self.w > POLE_EPS) {
            return Err(Error::cut_locus(format!("q0 = {}", self.w)));
        }
        let n = self.v.norm();
        let half_angle = n.atan2(self.w);
        let factor = if half_angle < SMALL_ANGLE {
            1.0 + half_angle * half_angle / 6.0
        } else {
            half_angle / n
        };
        Ok(factor * self.v)
    }

    /// Adjoint action `Ad_q ζ = q ⊗ ζ̄ ⊗ q⁻¹`, evaluated with quaternion products.
    pub fn adjoint(&self, zeta: &AlgebraVector) -> AlgebraVector {
        let pure = UnitQuaternion { w: 0.0, v: *zeta };
        let left = raw_product(self, &pure);
        raw_product(&left, &self.inverse()).v
    }

    /// `½ q ⊗ [0, Ω]`, the attitude kinematics on S³.
    pub fn kinematics(q: &Vector4<f64>, omega: &AlgebraVector) -> Vector4<f64> {
        let w = q[0];
        let v = Vector3::new(q[1], q[2], q[3]);
        let dw = -0.5 * v.dot(omega);
        let dv = 0.5 * (w * omega + v.cross(omega));
        Vector4::new(dw, dv.x, dv.y, dv.z)
    }
}

fn raw_product(a: &UnitQuaternion, b: &UnitQuaternion) -> UnitQuaternion {
    UnitQuaternion {
        w: a.w * b.w - a.v.dot(&b.v),
        v: a.w * b.v + b.w * a.v + a.v.cross(&b.v),
    }
}

impl Neg for UnitQuaternion {
    type Output = UnitQuaternion;

    fn neg(self) -> UnitQuaternion {
        UnitQuaternion { w: -self.w, v: -self.v }
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;

    fn mul(self, rhs: UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion::compose(&self, &rhs)
    }
}
