//! Fixed-step closed-loop simulation.

use crate::controllers::{gsmc_tracking, lsf_controller, pdplus_controller, ControlOutput};
use crate::dynamics::{error_state, rk4_step, ReferenceTrajectory, RigidBody, RigidState};
use crate::error::{Error, Result};
use crate::group::AttitudeGroup;
use crate::lie::{AlgebraVector, RotationMatrix, UnitQuaternion};
use crate::sliding::attitude_error;

use super::config::{Chart, ControllerId, ScenarioConfig};

/// Samples are recorded every this many integration steps.
pub const SAMPLE_EVERY: usize = 10;

/// One recorded instant of a closed-loop run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectorySample {
    /// Time (s).
    pub t: f64,
    /// `Ψ(R_e) = ½ tr(I − R_e)`.
    pub psi: f64,
    /// `‖Ω_e‖` (rad/s).
    pub omega_e_norm: f64,
    /// `‖s‖` (rad/s).
    pub s_norm: f64,
    /// `‖τ‖` (N·m).
    pub tau_norm: f64,
    /// `√∫τᵀτ dt` so far (N·m·√s).
    pub energy: f64,
    /// The chart's Morse function of the error (V₁ or V₂).
    pub v_morse: f64,
}

/// State of the loop handed to a [`simulate`] observer after every step.
#[derive(Clone, Copy, Debug)]
pub struct Snapshot<G> {
    pub step: usize,
    pub t: f64,
    pub g: G,
    pub omega: AlgebraVector,
    pub control: ControlOutput,
    /// `∫τᵀτ dt` so far (trapezoidal).
    pub energy_squared: f64,
}

/// A run stopped early because a controller hit the cut locus.
#[derive(Debug)]
pub struct Abort {
    pub time: f64,
    pub error: Error,
}

/// Recorded output of [`run_scenario`].
#[derive(Debug)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    /// Sliding variable at each sample time.
    pub sliding: Vec<AlgebraVector>,
    /// Largest [`AttitudeGroup::defect`] of the attitude over all steps:
    /// orthonormality drift on SO(3), norm error on S³.
    pub max_defect: f64,
    pub abort: Option<Abort>,
}

impl Trajectory {
    pub fn completed(&self) -> bool {
        self.abort.is_none()
    }
}

/// Integrates `Ω̇ = 𝕁⁻¹((𝕁Ω)^∧Ω) + 𝕁⁻¹(τ + d)` with `τ = law(t, g, Ω).tau`.
///
/// The law is evaluated inside every RK4 stage. Quaternion coordinates are
/// renormalised after each step; rotation matrices are left unprojected.
/// `observer` sees the initial state (step 0) and the state after every step.
/// Returns the abort time and error if the law fails.
#[allow(clippy::too_many_arguments)]
pub fn simulate<G, L, O>(
    body: &RigidBody,
    g0: G,
    omega0: AlgebraVector,
    dt: f64,
    steps: usize,
    disturbance: AlgebraVector,
    law: L,
    mut observer: O,
) -> std::result::Result<(), Abort>
where
    G: AttitudeGroup,
    L: Fn(f64, &G, &AlgebraVector) -> Result<ControlOutput>,
    O: FnMut(&Snapshot<G>),
{
    let abort = |time: f64| move |error: Error| Abort { time, error };
    let mut x = RigidState {
        attitude: g0.to_coords(),
        omega: omega0,
    };
    let mut control = law(0.0, &g0, &omega0).map_err(abort(0.0))?;
    let mut energy_squared = 0.0;
    observer(&Snapshot {
        step: 0,
        t: 0.0,
        g: g0,
        omega: omega0,
        control,
        energy_squared,
    });
    for i in 0..steps {
        let t = i as f64 * dt;
        let rhs = |stage_t: f64, s: &RigidState<G::Coords>| {
            let g = G::from_coords(&s.attitude);
            let u = law(stage_t, &g, &s.omega)?;
            Ok(body.rhs::<G>(s, &(u.tau + disturbance)))
        };
        let next = rk4_step(&x, t, dt, rhs).map_err(abort(t))?;
        let g = G::from_coords(&next.attitude);
        x = RigidState {
            attitude: g.to_coords(),
            omega: next.omega,
        };
        let t_next = (i + 1) as f64 * dt;
        let next_control = law(t_next, &g, &x.omega).map_err(abort(t_next))?;
        energy_squared += 0.5 * dt * (control.tau.norm_squared() + next_control.tau.norm_squared());
        control = next_control;
        observer(&Snapshot {
            step: i + 1,
            t: t_next,
            g,
            omega: x.omega,
            control,
            energy_squared,
        });
    }
    Ok(())
}

/// Number of RK4 steps covering `horizon`.
pub fn step_count(dt: f64, horizon: f64) -> usize {
    (horizon / dt).round() as usize
}

fn run_chart<G, L>(cfg: &ScenarioConfig, reference: ReferenceTrajectory<G>, g0: G, law: L) -> Trajectory
where
    G: AttitudeGroup,
    L: Fn(f64, &G, &AlgebraVector) -> Result<ControlOutput>,
{
    let body = RigidBody::new(cfg.inertia);
    let steps = step_count(cfg.dt, cfg.horizon);
    let mut samples = Vec::with_capacity(steps / SAMPLE_EVERY + 1);
    let mut sliding = Vec::with_capacity(steps / SAMPLE_EVERY + 1);
    let mut max_defect: f64 = 0.0;
    let result = simulate(
        &body,
        g0,
        cfg.omega0,
        cfg.dt,
        steps,
        cfg.disturbance.unwrap_or_else(AlgebraVector::zeros),
        law,
        |snap: &Snapshot<G>| {
            max_defect = max_defect.max(snap.g.defect());
            if !snap.step.is_multiple_of(SAMPLE_EVERY) {
                return;
            }
            let e = error_state(&snap.g, &snap.omega, &reference.at(snap.t));
            samples.push(TrajectorySample {
                t: snap.t,
                psi: attitude_error(&e.g_e.rotation()),
                omega_e_norm: e.omega_e.norm(),
                s_norm: snap.control.s.norm(),
                tau_norm: snap.control.tau.norm(),
                energy: snap.energy_squared.sqrt(),
                v_morse: e.g_e.morse(),
            });
            sliding.push(snap.control.s);
        },
    );
    Trajectory {
        samples,
        sliding,
        max_defect,
        abort: result.err(),
    }
}

/// Runs one configured scenario. Configuration errors are returned as `Err`;
/// a cut-locus failure during integration is recorded in [`Trajectory::abort`]
/// together with the samples gathered up to that point.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Trajectory> {
    run_from_error(cfg, &cfg.r_e0())
}

/// [`run_scenario`] with the initial attitude error given directly instead of
/// through `cfg.re0_euler312`.
pub fn run_from_error(cfg: &ScenarioConfig, r_e0: &RotationMatrix) -> Result<Trajectory> {
    cfg.validate()?;
    RotationMatrix::new(*r_e0.matrix())?;
    let body = RigidBody::new(cfg.inertia);
    match cfg.chart {
        Chart::So3 => {
            let reference = ReferenceTrajectory::new(cfg.r_r0, cfg.omega_r);
            let law = |t: f64, r: &RotationMatrix, w: &AlgebraVector| {
                let rs = reference.at(t);
                match cfg.controller_id {
                    ControllerId::Gsmc => gsmc_tracking(r, w, &rs, &cfg.gsmc, &body),
                    ControllerId::Lsf => Ok(lsf_controller(r, w, &rs, &cfg.lsf, &body)),
                    ControllerId::PdPlus => pdplus_controller(r, w, &rs, &cfg.pdplus, &body),
                }
            };
            Ok(run_chart(cfg, reference, cfg.r_r0 * *r_e0, law))
        }
        Chart::S3 => {
            let reference = ReferenceTrajectory::new(UnitQuaternion::from_rotation(&cfg.r_r0), cfg.omega_r);
            let q0 = reference.g_r0.compose(&UnitQuaternion::from_rotation(r_e0));
            let law =
                |t: f64, q: &UnitQuaternion, w: &AlgebraVector| gsmc_tracking(q, w, &reference.at(t), &cfg.gsmc, &body);
            Ok(run_chart(cfg, reference, q0, law))
        }
    }
}
