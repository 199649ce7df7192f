//! Random samplers for property checks.
//!
//! Rotations are drawn as a uniformly random unit axis with an angle uniform
//! on `(0, π − margin)`, which covers the domain of the logarithm while
//! staying clear of the cut locus. Velocities are standard normal (rad/s).

use nalgebra::Vector3;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use std::f64::consts::PI;

use crate::lie::{so3_exp, AlgebraVector, RotationMatrix, UnitQuaternion};

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R) -> AlgebraVector {
    loop {
        let v = velocity(rng);
        let n = v.norm();
        if n > 1e-6 {
            return v / n;
        }
    }
}

/// Standard-normal vector in ℝ³.
pub fn velocity<R: Rng + ?Sized>(rng: &mut R) -> AlgebraVector {
    Vector3::from_fn(|_, _| StandardNormal.sample(rng))
}

pub fn angle<R: Rng + ?Sized>(rng: &mut R, low: f64, high: f64) -> f64 {
    Uniform::new(low, high).expect("non-empty range").sample(rng)
}

/// Rotation vector with norm uniform on `(0, π − margin)`.
pub fn rotation_vector<R: Rng + ?Sized>(rng: &mut R, margin: f64) -> AlgebraVector {
    let axis = unit_vector(rng);
    axis * angle(rng, 0.0, PI - margin)
}

pub fn rotation<R: Rng + ?Sized>(rng: &mut R, margin: f64) -> RotationMatrix {
    so3_exp(&rotation_vector(rng, margin))
}

/// Unit quaternion whose half-angle is uniform on `(0, π − margin)`; covers
/// both hemispheres of S³.
pub fn quaternion<R: Rng + ?Sized>(rng: &mut R, margin: f64) -> UnitQuaternion {
    let axis = unit_vector(rng);
    UnitQuaternion::exp(&(axis * angle(rng, 0.0, PI - margin)))
}
