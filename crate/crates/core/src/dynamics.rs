//! Rigid-body equations of motion, reference trajectories and error kinematics.
//!
//! The body obeys the Euler–Poincaré equation
//! `Ω̇ = 𝕁⁻¹((𝕁Ω)^∧ Ω) + τ_u` with `τ_u = 𝕁⁻¹τ`, and the attitude follows
//! `Ṙ = R Ω^∧` or `q̇ = ½ q ⊗ [0, Ω]`. States are advanced with a classical
//! fixed-step RK4.

use nalgebra::{Matrix3, Vector3, Vector4};

use crate::error::Result;
use crate::group::AttitudeGroup;
use crate::lie::{dexp_inv, hat, AlgebraVector, InertiaTensor, RotationMatrix, UnitQuaternion};

/// A state an explicit integrator can advance.
pub trait OdeState: Sized {
    /// `self + h·rate`.
    fn add_scaled(&self, rate: &Self, h: f64) -> Self;
}

impl OdeState for f64 {
    fn add_scaled(&self, rate: &f64, h: f64) -> f64 {
        self + h * rate
    }
}

impl OdeState for Vector3<f64> {
    fn add_scaled(&self, rate: &Self, h: f64) -> Self {
        self + rate * h
    }
}

impl OdeState for Vector4<f64> {
    fn add_scaled(&self, rate: &Self, h: f64) -> Self {
        self + rate * h
    }
}

impl OdeState for Matrix3<f64> {
    fn add_scaled(&self, rate: &Self, h: f64) -> Self {
        self + rate * h
    }
}

/// Attitude coordinates plus body angular velocity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidState<C> {
    pub attitude: C,
    pub omega: AlgebraVector,
}

impl<C: OdeState> OdeState for RigidState<C> {
    fn add_scaled(&self, rate: &Self, h: f64) -> Self {
        RigidState {
            attitude: self.attitude.add_scaled(&rate.attitude, h),
            omega: self.omega.add_scaled(&rate.omega, h),
        }
    }
}

/// One classical RK4 step of `ẋ = f(t, x)`.
///
/// Errors returned by `rhs` (e.g. a controller reaching the cut locus inside a
/// stage) abort the step.
pub fn rk4_step<S, F>(state: &S, t: f64, dt: f64, mut rhs: F) -> Result<S>
where
    S: OdeState,
    F: FnMut(f64, &S) -> Result<S>,
{
    let half = 0.5 * dt;
    let k1 = rhs(t, state)?;
    let k2 = rhs(t + half, &state.add_scaled(&k1, half))?;
    let k3 = rhs(t + half, &state.add_scaled(&k2, half))?;
    let k4 = rhs(t + dt, &state.add_scaled(&k3, dt))?;
    Ok(state
        .add_scaled(&k1, dt / 6.0)
        .add_scaled(&k2, dt / 3.0)
        .add_scaled(&k3, dt / 3.0)
        .add_scaled(&k4, dt / 6.0))
}

/// A rigid body described by its inertia tensor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidBody {
    pub inertia: InertiaTensor,
}

impl RigidBody {
    pub fn new(inertia: InertiaTensor) -> Self {
        RigidBody { inertia }
    }

    /// `Ω̇` for a normalised input `τ_u = 𝕁⁻¹τ`.
    pub fn euler_poincare(&self, omega: &AlgebraVector, tau_u: &AlgebraVector) -> AlgebraVector {
        euler_poincare_rhs(omega, tau_u, self)
    }

    /// `𝕁⁻¹τ`.
    pub fn normalize_torque(&self, tau: &AlgebraVector) -> AlgebraVector {
        self.inertia.sharp(tau)
    }

    /// `½ Ωᵀ𝕁Ω`.
    pub fn kinetic_energy(&self, omega: &AlgebraVector) -> f64 {
        self.inertia.kinetic_energy(omega)
    }

    /// Full state derivative for an applied torque `τ` (N·m).
    pub fn rhs<G: AttitudeGroup>(&self, state: &RigidState<G::Coords>, tau: &AlgebraVector) -> RigidState<G::Coords> {
        RigidState {
            attitude: G::coords_rate(&state.attitude, &state.omega),
            omega: self.euler_poincare(&state.omega, &self.normalize_torque(tau)),
        }
    }
}

pub fn euler_poincare_rhs(omega: &AlgebraVector, tau_u: &AlgebraVector, body: &RigidBody) -> AlgebraVector {
    let j = &body.inertia;
    j.sharp(&j.flat(omega).cross(omega)) + tau_u
}

/// `Ṙ = R Ω^∧`.
pub fn attitude_kinematics_rhs_r(r: &RotationMatrix, omega: &AlgebraVector) -> Matrix3<f64> {
    r.matrix() * hat(omega)
}

/// `q̇ = ½ q ⊗ [0, Ω]`.
pub fn attitude_kinematics_rhs_q(q: &UnitQuaternion, omega: &AlgebraVector) -> Vector4<f64> {
    UnitQuaternion::kinematics(&q.coords(), omega)
}

/// Reference configuration, body velocity and its derivative at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceState<G> {
    pub g_r: G,
    pub omega_r: AlgebraVector,
    pub omega_r_dot: AlgebraVector,
}

/// `g_r(t) = g_r0 · exp(Ω_r t)` for a constant body velocity `Ω_r`.
///
/// Evaluated in closed form at every instant, so the reference carries no
/// integration error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceTrajectory<G> {
    pub g_r0: G,
    pub omega_r: AlgebraVector,
}

impl<G: AttitudeGroup> ReferenceTrajectory<G> {
    pub fn new(g_r0: G, omega_r: AlgebraVector) -> Self {
        ReferenceTrajectory { g_r0, omega_r }
    }

    /// The constant reference `g_r ≡ e`, used for regulation.
    pub fn identity() -> Self {
        ReferenceTrajectory::new(G::identity(), AlgebraVector::zeros())
    }

    pub fn at(&self, t: f64) -> ReferenceState<G> {
        ReferenceState {
            g_r: self.g_r0.compose(&G::from_rotation_vector(&(self.omega_r * t))),
            omega_r: self.omega_r,
            omega_r_dot: AlgebraVector::zeros(),
        }
    }
}

/// SO(3) reference state at time `t`.
pub fn reference_at(t: f64, r_r0: &RotationMatrix, omega_r: &AlgebraVector) -> ReferenceState<RotationMatrix> {
    ReferenceTrajectory::new(*r_r0, *omega_r).at(t)
}

/// Tracking error `g_e = g_r⁻¹g`, `Ω_e = Ω − σ` with `σ = Ad_{g_e⁻¹}Ω_r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorState<G> {
    pub g_e: G,
    pub omega_e: AlgebraVector,
    pub sigma: AlgebraVector,
    pub sigma_dot: AlgebraVector,
}

pub fn error_state<G: AttitudeGroup>(g: &G, omega: &AlgebraVector, reference: &ReferenceState<G>) -> ErrorState<G> {
    let g_e = reference.g_r.inverse().compose(g);
    let g_e_inv = g_e.inverse();
    let sigma = g_e_inv.adjoint(&reference.omega_r);
    let omega_e = omega - sigma;
    let sigma_dot = -omega_e.cross(&sigma) + g_e_inv.adjoint(&reference.omega_r_dot);
    ErrorState {
        g_e,
        omega_e,
        sigma,
        sigma_dot,
    }
}

/// `d/dt log(R_e)` along `Ṙ_e = R_e Ω_e^∧`.
pub fn dlog_so3(r_e: &RotationMatrix, omega_e: &AlgebraVector) -> Result<AlgebraVector> {
    let theta = r_e.log()?;
    Ok(dexp_inv(&theta) * omega_e)
}

/// `d/dt log(q_e)` along `q̇_e = ½ q_e ⊗ [0, Ω_e]`.
///
/// `log(q_e)` is half the rotation vector, hence the factor ½.
pub fn dlog_s3(q_e: &UnitQuaternion, omega_e: &AlgebraVector) -> Result<AlgebraVector> {
    let theta = 2.0 * q_e.log()?;
    Ok(0.5 * (dexp_inv(&theta) * omega_e))
}
