use nalgebra::{Matrix3, SymmetricEigen};

use super::AlgebraVector;
use crate::error::{Error, Result};

/// Symmetric positive-definite kinetic-energy tensor 𝕁 (kg·m²).
///
/// Provides the flat map `𝕁♭(v) = 𝕁v`, the sharp map `𝕁♯(p) = 𝕁⁻¹p` and the
/// induced inner product `𝕁(a, b) = aᵀ𝕁b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InertiaTensor {
    matrix: Matrix3<f64>,
    inverse: Matrix3<f64>,
}

impl InertiaTensor {
    pub const SYMMETRY_TOL: f64 = 1e-12;

    pub fn new(matrix: Matrix3<f64>) -> Result<Self> {
        if !matrix.iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidInertia("non-finite entry".into()));
        }
        let asymmetry = (matrix - matrix.transpose()).amax();
        if asymmetry > Self::SYMMETRY_TOL {
            return Err(Error::InvalidInertia(format!("asymmetry {asymmetry:e}")));
        }
        let eigen = SymmetricEigen::new(matrix);
        let smallest = eigen.eigenvalues.min();
        if smallest <= 0.0 {
            return Err(Error::InvalidInertia(format!(
                "not positive definite (smallest eigenvalue {smallest})"
            )));
        }
        let inverse = matrix
            .try_inverse()
            .ok_or_else(|| Error::InvalidInertia("singular".into()))?;
        Ok(InertiaTensor { matrix, inverse })
    }

    /// The spacecraft inertia used in the reference simulations.
    pub fn preset() -> Self {
        let m = Matrix3::new(
            3.6046, -0.0706, 0.1491, //
            -0.0706, 8.6868, 0.0449, //
            0.1491, 0.0449, 9.3484,
        );
        InertiaTensor::new(m).expect("reference inertia is positive definite")
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.matrix
    }

    pub fn inverse(&self) -> &Matrix3<f64> {
        &self.inverse
    }

    pub fn flat(&self, v: &AlgebraVector) -> AlgebraVector {
        self.matrix * v
    }

    pub fn sharp(&self, p: &AlgebraVector) -> AlgebraVector {
        self.inverse * p
    }

    pub fn inner(&self, a: &AlgebraVector, b: &AlgebraVector) -> f64 {
        a.dot(&(self.matrix * b))
    }

    pub fn kinetic_energy(&self, omega: &AlgebraVector) -> f64 {
        0.5 * self.inner(omega, omega)
    }
}
