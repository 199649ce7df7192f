//! Attitude controllers.
//!
//! Every controller returns the applied torque `τ` (N·m) together with its
//! sliding variable `s` and its feedforward `F`, written in the common form
//! `τ = −k 𝕁 s + F` (or `−k s + F` for PD+), where `s = ω̃ + γφ̃`.
//!
//! The geometric sliding-mode tracking controller is written once against
//! [`AttitudeGroup`]; [`gsmc_tracking_so3`] and [`gsmc_tracking_s3`] are chart
//! bindings of [`gsmc_tracking`].

use crate::dynamics::{error_state, ReferenceState, RigidBody};
use crate::error::{Error, Result};
use crate::group::AttitudeGroup;
use crate::lie::{skew_vee, AlgebraVector, RotationMatrix, UnitQuaternion};
use crate::sliding::{psi, sliding_var, BundleElement, SlidingGain};

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidGain { name, value })
    }
}

/// Gains of the geometric sliding-mode controller.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GsmcGains {
    pub k_s: f64,
    pub lambda: SlidingGain,
}

impl GsmcGains {
    pub fn new(k_s: f64, lambda: f64) -> Result<Self> {
        Ok(GsmcGains {
            k_s: positive("k_s", k_s)?,
            lambda: SlidingGain::new(lambda)?,
        })
    }

    pub fn preset() -> Self {
        GsmcGains::new(1.0, 0.5).unwrap()
    }

    pub fn validate(&self) -> Result<()> {
        GsmcGains::new(self.k_s, self.lambda.value()).map(|_| ())
    }

    /// Weight of the configuration error in `s`.
    pub fn gamma(&self) -> f64 {
        self.lambda.value()
    }
}

/// Gains of the LSF baseline (`Ĩ = I₃`, `K = κI₃`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LsfGains {
    pub k: f64,
    pub kappa: f64,
}

impl LsfGains {
    pub fn new(k: f64, kappa: f64) -> Result<Self> {
        Ok(LsfGains {
            k: positive("k", k)?,
            kappa: positive("kappa", kappa)?,
        })
    }

    pub fn preset() -> Self {
        LsfGains::new(1.0, 0.5).unwrap()
    }

    pub fn validate(&self) -> Result<()> {
        LsfGains::new(self.k, self.kappa).map(|_| ())
    }

    pub fn gamma(&self) -> f64 {
        self.kappa / self.k
    }
}

/// Gains of the PD+ baseline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PdPlusGains {
    pub k_omega: f64,
    pub k_r: f64,
}

impl PdPlusGains {
    pub fn new(k_omega: f64, k_r: f64) -> Result<Self> {
        Ok(PdPlusGains {
            k_omega: positive("k_Omega", k_omega)?,
            k_r: positive("k_R", k_r)?,
        })
    }

    pub fn preset() -> Self {
        PdPlusGains::new(18.5, 9.25).unwrap()
    }

    pub fn validate(&self) -> Result<()> {
        PdPlusGains::new(self.k_omega, self.k_r).map(|_| ())
    }

    pub fn gamma(&self) -> f64 {
        self.k_r / self.k_omega
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControlOutput {
    /// Applied torque τ (N·m).
    pub tau: AlgebraVector,
    /// Sliding variable.
    pub s: AlgebraVector,
    /// Feedforward term F (N·m).
    pub feedforward: AlgebraVector,
}

/// Reaching law for regulation to `(e, 0)`.
///
/// `f_u = 𝕁⁻¹((𝕁ν)^∧ λν_u(g)) − λν̇_u(g) − k_s s(h)`, returned as `τ = 𝕁 f_u`.
/// In closed loop `W = ½𝕁(s, s)` obeys `Ẇ = −2k_s W`.
pub fn gsmc_reaching<G: AttitudeGroup>(
    h: &BundleElement<G>,
    gains: &GsmcGains,
    body: &RigidBody,
) -> Result<ControlOutput> {
    let j = &body.inertia;
    let lam = gains.lambda.value();
    let nu_u = h.g.kinematic_law()?;
    let nu_u_dot = h.g.kinematic_law_rate(&h.nu)?;
    let s = sliding_var(h, gains.lambda)?;
    let feedforward = j.flat(&h.nu).cross(&(lam * nu_u)) - j.flat(&(lam * nu_u_dot));
    Ok(ControlOutput {
        tau: -gains.k_s * j.flat(&s) + feedforward,
        s,
        feedforward,
    })
}

/// Tracking controller on any attitude chart.
///
/// With `Ω_u = ν_u(g_e)`:
/// `F = 𝕁(−λΩ̇_u + σ̇) + (𝕁Ω)^∧(λΩ_u − σ)`, `s = Ω_e + λΩ_u`, `τ = −k_s 𝕁 s + F`.
pub fn gsmc_tracking<G: AttitudeGroup>(
    g: &G,
    omega: &AlgebraVector,
    reference: &ReferenceState<G>,
    gains: &GsmcGains,
    body: &RigidBody,
) -> Result<ControlOutput> {
    let j = &body.inertia;
    let lam = gains.lambda.value();
    let e = error_state(g, omega, reference);
    let omega_u = e.g_e.kinematic_law()?;
    let omega_u_dot = e.g_e.kinematic_law_rate(&e.omega_e)?;
    let s = e.omega_e + lam * omega_u;
    let feedforward = j.flat(&(e.sigma_dot - lam * omega_u_dot)) + j.flat(omega).cross(&(lam * omega_u - e.sigma));
    Ok(ControlOutput {
        tau: -gains.k_s * j.flat(&s) + feedforward,
        s,
        feedforward,
    })
}

pub fn gsmc_tracking_so3(
    r: &RotationMatrix,
    omega: &AlgebraVector,
    reference: &ReferenceState<RotationMatrix>,
    gains: &GsmcGains,
    body: &RigidBody,
) -> Result<ControlOutput> {
    gsmc_tracking(r, omega, reference, gains, body)
}

pub fn gsmc_tracking_s3(
    q: &UnitQuaternion,
    omega: &AlgebraVector,
    reference: &ReferenceState<UnitQuaternion>,
    gains: &GsmcGains,
    body: &RigidBody,
) -> Result<ControlOutput> {
    gsmc_tracking(q, omega, reference, gains, body)
}

/// LSF baseline:
/// `s = Ω − Ω_r + (κ/k) Rᵀ(RR_rᵀ − R_rRᵀ)^∨`,
/// `F = 𝕁Ω̇_r − (𝕁Ω)^∧Ω − Ω^∧Ω_r`, `τ = −k𝕁s + F`.
pub fn lsf_controller(
    r: &RotationMatrix,
    omega: &AlgebraVector,
    reference: &ReferenceState<RotationMatrix>,
    gains: &LsfGains,
    body: &RigidBody,
) -> ControlOutput {
    let j = &body.inertia;
    let (rm, rr) = (r.matrix(), reference.g_r.matrix());
    let attitude_term = rm.transpose() * skew_vee(&(rm * rr.transpose()));
    let s = omega - reference.omega_r + gains.gamma() * attitude_term;
    let feedforward = j.flat(&reference.omega_r_dot) - j.flat(omega).cross(omega) - omega.cross(&reference.omega_r);
    ControlOutput {
        tau: -gains.k * j.flat(&s) + feedforward,
        s,
        feedforward,
    }
}

/// PD+ baseline:
/// `s = Ω_e + (k_R/k_Ω) ψ(R_e)(R_e − R_eᵀ)^∨`,
/// `F = 𝕁RᵀR_rΩ̇_r + (RᵀR_rΩ_r)^∧ 𝕁RᵀR_rΩ_r`, `τ = −k_Ω s + F`.
pub fn pdplus_controller(
    r: &RotationMatrix,
    omega: &AlgebraVector,
    reference: &ReferenceState<RotationMatrix>,
    gains: &PdPlusGains,
    body: &RigidBody,
) -> Result<ControlOutput> {
    let j = &body.inertia;
    let e = error_state(r, omega, reference);
    let s = e.omega_e + gains.gamma() * psi(&e.g_e)? * skew_vee(e.g_e.matrix());
    let to_body = r.matrix().transpose() * reference.g_r.matrix();
    let w = to_body * reference.omega_r;
    let feedforward = j.flat(&(to_body * reference.omega_r_dot)) + w.cross(&j.flat(&w));
    Ok(ControlOutput {
        tau: -gains.k_omega * s + feedforward,
        s,
        feedforward,
    })
}
