//! The group interface the generic controller and simulator are written against.

use std::fmt::Debug;

use nalgebra::{Matrix3, Vector4};

use crate::dynamics::{dlog_s3, dlog_so3, OdeState};
use crate::error::Result;
use crate::lie::{hat, so3_exp, so3_log, AlgebraVector, RotationMatrix, UnitQuaternion};
use crate::sliding::{morse_v1, morse_v2};

/// An attitude group with Lie algebra ℝ³ and a logarithmic kinematic control law.
pub trait AttitudeGroup: Copy + Debug + PartialEq {
    /// Unconstrained coordinates the integrator works in.
    type Coords: OdeState + Copy + Debug;

    const NAME: &'static str;

    fn identity() -> Self;

    fn compose(&self, rhs: &Self) -> Self;

    fn inverse(&self) -> Self;

    /// Element representing the physical rotation by `|θ|` about `θ/|θ|`.
    fn from_rotation_vector(theta: &AlgebraVector) -> Self;

    fn rotation(&self) -> RotationMatrix;

    /// `Ad_g v`.
    fn adjoint(&self, v: &AlgebraVector) -> AlgebraVector;

    /// The kinematic control law `ν_u(g) = log(g)`.
    fn kinematic_law(&self) -> Result<AlgebraVector>;

    /// `d/dt ν_u(g(t))` along `ġ = g·ν`.
    fn kinematic_law_rate(&self, nu: &AlgebraVector) -> Result<AlgebraVector>;

    /// The chart's Morse error function (V₁ on SO(3), V₂ on S³).
    fn morse(&self) -> f64;

    /// A distance between two elements of the same chart (for tolerance checks).
    fn distance(&self, other: &Self) -> f64;

    /// How far the element is from its manifold: `‖RᵀR − I‖_F` or `|‖q‖ − 1|`.
    fn defect(&self) -> f64;

    fn to_coords(&self) -> Self::Coords;

    /// Element used to evaluate controllers at an integrator stage.
    /// Quaternions are renormalised; rotation matrices are taken as-is.
    fn from_coords(coords: &Self::Coords) -> Self;

    /// Attitude kinematics `ġ = g·Ω` in integrator coordinates.
    fn coords_rate(coords: &Self::Coords, omega: &AlgebraVector) -> Self::Coords;
}

impl AttitudeGroup for RotationMatrix {
    type Coords = Matrix3<f64>;

    const NAME: &'static str = "SO3";

    fn identity() -> Self {
        RotationMatrix::identity()
    }

    fn compose(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn inverse(&self) -> Self {
        self.transpose()
    }

    fn from_rotation_vector(theta: &AlgebraVector) -> Self {
        so3_exp(theta)
    }

    fn rotation(&self) -> RotationMatrix {
        *self
    }

    fn adjoint(&self, v: &AlgebraVector) -> AlgebraVector {
        RotationMatrix::adjoint(self, v)
    }

    fn kinematic_law(&self) -> Result<AlgebraVector> {
        so3_log(self)
    }

    fn kinematic_law_rate(&self, nu: &AlgebraVector) -> Result<AlgebraVector> {
        dlog_so3(self, nu)
    }

    fn morse(&self) -> f64 {
        morse_v1(self)
    }

    fn distance(&self, other: &Self) -> f64 {
        (self.matrix() - other.matrix()).norm()
    }

    fn defect(&self) -> f64 {
        self.orthonormality_error()
    }

    fn to_coords(&self) -> Matrix3<f64> {
        *self.matrix()
    }

    fn from_coords(coords: &Matrix3<f64>) -> Self {
        RotationMatrix::from_matrix_unchecked(*coords)
    }

    fn coords_rate(coords: &Matrix3<f64>, omega: &AlgebraVector) -> Matrix3<f64> {
        coords * hat(omega)
    }
}

impl AttitudeGroup for UnitQuaternion {
    type Coords = Vector4<f64>;

    const NAME: &'static str = "S3";

    fn identity() -> Self {
        UnitQuaternion::identity()
    }

    fn compose(&self, rhs: &Self) -> Self {
        UnitQuaternion::compose(self, rhs)
    }

    fn inverse(&self) -> Self {
        UnitQuaternion::inverse(self)
    }

    fn from_rotation_vector(theta: &AlgebraVector) -> Self {
        UnitQuaternion::from_rotation_vector(theta)
    }

    fn rotation(&self) -> RotationMatrix {
        self.to_rotation()
    }

    fn adjoint(&self, v: &AlgebraVector) -> AlgebraVector {
        UnitQuaternion::adjoint(self, v)
    }

    fn kinematic_law(&self) -> Result<AlgebraVector> {
        self.log()
    }

    fn kinematic_law_rate(&self, nu: &AlgebraVector) -> Result<AlgebraVector> {
        dlog_s3(self, nu)
    }

    fn morse(&self) -> f64 {
        morse_v2(self)
    }

    fn distance(&self, other: &Self) -> f64 {
        (self.coords() - other.coords()).norm()
    }

    fn defect(&self) -> f64 {
        (self.norm() - 1.0).abs()
    }

    fn to_coords(&self) -> Vector4<f64> {
        self.coords()
    }

    fn from_coords(coords: &Vector4<f64>) -> Self {
        UnitQuaternion::from_vector_normalized(coords)
    }

    fn coords_rate(coords: &Vector4<f64>, omega: &AlgebraVector) -> Vector4<f64> {
        UnitQuaternion::kinematics(coords, omega)
    }
}
