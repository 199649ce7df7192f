//! Geometric sliding-mode attitude control on SO(3) and S³.
//!
//! * [`lie`]: group primitives (hat/vee, exp/log, adjoint actions, inertia maps).
//! * [`sliding`]: Morse error functions, the bundle group operation and the sliding subgroup.
//! * [`dynamics`]: Euler–Poincaré dynamics, references, error kinematics and RK4.
//! * [`controllers`]: the sliding-mode reaching and tracking laws plus the LSF and PD+ baselines.
//! * [`harness`]: scenario configuration, closed-loop simulation, metrics and output files.
//! * [`verify`]: the property battery behind `gsmc verify`.

// `!(x > eps)` is used on purpose so that NaN lands on the error branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod controllers;
pub mod dynamics;
pub mod error;
pub mod group;
pub mod harness;
pub mod lie;
pub mod sampling;
pub mod sliding;
pub mod verify;

pub use error::{Error, Result};
pub use group::AttitudeGroup;
pub use lie::{AlgebraVector, InertiaTensor, RotationMatrix, UnitQuaternion};
