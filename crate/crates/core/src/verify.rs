//! Self-check battery behind `gsmc verify`.
//!
//! Each check runs a property or a closed-loop experiment with fixed seeds and
//! reports pass/fail with the measured numbers.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::controllers::{ControlOutput, GsmcGains};
use crate::dynamics::{dlog_so3, error_state, ReferenceTrajectory, RigidBody};
use crate::error::Result;
use crate::group::AttitudeGroup;
use crate::harness::{
    convergence_time, csv_bytes, descent_delay, final_energy, run_from_error, run_scenario, sign_changes, simulate,
    Chart, ControllerId, ScenarioConfig, Snapshot, Trajectory,
};
use crate::lie::{ad_star, so3_exp, so3_log, AlgebraVector, InertiaTensor, RotationMatrix, UnitQuaternion};
use crate::sampling;
use crate::sliding::{
    bundle_inverse, bundle_star, decay_rate_v2, morse_v1, morse_v1_gradient, morse_v2, sliding_var, BundleElement,
    SlidingGain,
};

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {:<4} {}: {}", self.id, self.name, self.detail)
    }
}

fn check(id: &'static str, name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        id,
        name,
        passed,
        detail,
    }
}

fn failed(id: &'static str, name: &'static str, err: impl fmt::Display) -> Check {
    check(id, name, false, format!("error: {err}"))
}

/// Runs every check in order.
pub fn run_all() -> Vec<Check> {
    vec![
        group_axioms(),
        sliding_subgroup(),
        passivity(),
        reaching_decay(),
        forward_invariance(),
        scenario_1(),
        scenario_2(),
        scenario_3(),
        numerical_dynamics(),
        chart_consistency(),
        determinism(),
        kinematic_law_contract(),
        morse_sandwich(),
        lsf_oscillation(),
        decay_by_differences(),
    ]
}

const LAMBDAS: [f64; 3] = [0.1, 0.5, 2.0];
const SAMPLES: usize = 1000;

fn so3_sample(rng: &mut ChaCha8Rng) -> RotationMatrix {
    sampling::rotation(rng, 0.05)
}

fn s3_sample(rng: &mut ChaCha8Rng) -> UnitQuaternion {
    sampling::quaternion(rng, 0.05)
}

/// Largest identity, inverse and associativity defect of ⋆ over random triples.
fn star_axiom_error<G: AttitudeGroup>(rng: &mut ChaCha8Rng, sample: fn(&mut ChaCha8Rng) -> G) -> f64 {
    let f = BundleElement::<G>::identity();
    let mut worst: f64 = 0.0;
    for &l in &LAMBDAS {
        let lam = SlidingGain::new(l).expect("positive");
        let mut accepted = 0;
        while accepted < SAMPLES {
            let mut draw = || BundleElement::new(sample(rng), sampling::velocity(rng));
            let (a, b, c) = (draw(), draw(), draw());
            let errors = (|| -> Result<[f64; 5]> {
                let inv = bundle_inverse(&a);
                let ab_c = bundle_star(&bundle_star(&a, &b, lam)?, &c, lam)?;
                let a_bc = bundle_star(&a, &bundle_star(&b, &c, lam)?, lam)?;
                Ok([
                    bundle_star(&a, &f, lam)?.distance(&a),
                    bundle_star(&f, &a, lam)?.distance(&a),
                    bundle_star(&a, &inv, lam)?.distance(&f),
                    bundle_star(&inv, &a, lam)?.distance(&f),
                    ab_c.distance(&a_bc),
                ])
            })();
            // triples whose products reach the cut locus are outside the domain
            let Ok(errors) = errors else { continue };
            accepted += 1;
            worst = errors.iter().fold(worst, |w, &e| w.max(e));
        }
    }
    worst
}

pub fn group_axioms() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let so3 = star_axiom_error(&mut rng, so3_sample);
    let s3 = star_axiom_error(&mut rng, s3_sample);
    check(
        "C1",
        "bundle group axioms",
        so3 < 1e-8 && s3 < 1e-8,
        format!("max error SO3 {so3:.2e}, S3 {s3:.2e} (limit 1e-8)"),
    )
}

fn subgroup_error<G: AttitudeGroup>(rng: &mut ChaCha8Rng, sample: fn(&mut ChaCha8Rng) -> G) -> f64 {
    let mut worst: f64 = 0.0;
    for &l in &LAMBDAS {
        let lam = SlidingGain::new(l).expect("positive");
        let identity = sliding_var(&BundleElement::<G>::identity(), lam).map_or(f64::INFINITY, |s| s.norm());
        worst = worst.max(identity);
        let mut accepted = 0;
        while accepted < SAMPLES {
            let errors = (|| -> Result<[f64; 2]> {
                let a = BundleElement::on_sliding_subgroup(sample(rng), lam)?;
                let b = BundleElement::on_sliding_subgroup(sample(rng), lam)?;
                Ok([
                    sliding_var(&bundle_inverse(&a), lam)?.norm(),
                    sliding_var(&bundle_star(&a, &b, lam)?, lam)?.norm(),
                ])
            })();
            let Ok(errors) = errors else { continue };
            accepted += 1;
            worst = errors.iter().fold(worst, |w, &e| w.max(e));
        }
    }
    worst
}

/// Largest `‖s(r_d⁻¹ ⋆ (r₁ ⋆ r₂))‖` for pairs satisfying `s(r_d⁻¹ ⋆ rᵢ) = 0`.
fn star_error_closure_failure(rng: &mut ChaCha8Rng) -> f64 {
    let lam = SlidingGain::new(0.5).expect("positive");
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let rd = BundleElement::new(sampling::rotation(rng, 0.5), sampling::velocity(rng));
        let rd_inv = bundle_inverse(&rd);
        let result = (|| -> Result<f64> {
            let mut member = || -> Result<BundleElement<RotationMatrix>> {
                let r = sampling::rotation(rng, 1.5);
                let s0 = sliding_var(
                    &bundle_star(&rd_inv, &BundleElement::new(r, Vector3::zeros()), lam)?,
                    lam,
                )?;
                Ok(BundleElement::new(r, -s0))
            };
            let (a, b) = (member()?, member()?);
            let ab = bundle_star(&a, &b, lam)?;
            Ok(sliding_var(&bundle_star(&rd_inv, &ab, lam)?, lam)?.norm())
        })();
        if let Ok(s) = result {
            worst = worst.max(s);
        }
    }
    worst
}

pub fn sliding_subgroup() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let so3 = subgroup_error(&mut rng, so3_sample);
    let s3 = subgroup_error(&mut rng, s3_sample);
    let negative = star_error_closure_failure(&mut rng);
    check(
        "C2",
        "sliding subgroup",
        so3 < 1e-8 && s3 < 1e-8 && negative > 1e-3,
        format!(
            "max |s| SO3 {so3:.2e}, S3 {s3:.2e} (limit 1e-8); star-error closure failure |s| = {negative:.3} (> 1e-3)"
        ),
    )
}

pub fn passivity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let j = InertiaTensor::preset();
    let mut worst: f64 = 0.0;
    for i in 0..SAMPLES {
        let scale = 10f64.powi(i as i32 % 5 - 2);
        let zeta = sampling::velocity(&mut rng) * scale;
        let eta = sampling::velocity(&mut rng) * scale;
        let value = j.inner(&zeta, &j.sharp(&ad_star(&zeta, &eta, &j)));
        worst = worst.max(value.abs() / ((1.0 + zeta.norm_squared()) * (1.0 + eta.norm())));
    }
    check(
        "C3",
        "passivity identity",
        worst < 1e-10,
        format!("max normalised |value| {worst:.2e} (limit 1e-10)"),
    )
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn lyapunov_w(run: &Trajectory, inertia: &InertiaTensor) -> Vec<(f64, f64)> {
    run.samples
        .iter()
        .zip(&run.sliding)
        .map(|(sample, s)| (sample.t, 0.5 * inertia.inner(s, s)))
        .collect()
}

fn random_error(rng: &mut ChaCha8Rng, low: f64, high: f64) -> RotationMatrix {
    so3_exp(&(sampling::unit_vector(rng) * sampling::angle(rng, low, high)))
}

pub fn reaching_decay() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    let mut rejected = 0;
    for k_s in [0.5, 1.0, 2.0] {
        let mut done = 0;
        while done < 20 {
            let cfg = ScenarioConfig {
                gsmc: GsmcGains::new(k_s, 0.5).expect("positive"),
                omega0: sampling::velocity(&mut rng) * 0.5,
                horizon: 5.0,
                ..ScenarioConfig::default()
            };
            let r_e0 = random_error(&mut rng, 0.2, PI - 0.2);
            let run = match run_from_error(&cfg, &r_e0) {
                Ok(run) => run,
                Err(e) => return failed("C4", "exponential reaching", e),
            };
            if !run.completed() {
                rejected += 1;
                continue;
            }
            done += 1;
            let (ts, ln_w): (Vec<f64>, Vec<f64>) = lyapunov_w(&run, &cfg.inertia)
                .into_iter()
                .filter(|&(t, _)| t >= 0.5 - 1e-9)
                .map(|(t, w)| (t, w.ln()))
                .unzip();
            let slope = fit_slope(&ts, &ln_w);
            worst = worst.max((slope / (-2.0 * k_s) - 1.0).abs());
        }
    }
    check(
        "C4",
        "exponential reaching",
        worst < 0.02,
        format!("max relative slope error {worst:.2e} over 60 runs (limit 2e-2), {rejected} starts rejected"),
    )
}

pub fn forward_invariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut max_s, mut max_rise, mut max_final): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut done = 0;
    let mut rejected = 0;
    while done < 20 {
        let r_e0 = random_error(&mut rng, 0.05, PI - 0.05);
        let base = ScenarioConfig::default();
        let lam = base.gsmc.lambda.value();
        let Ok(log) = so3_log(&r_e0) else {
            rejected += 1;
            continue;
        };
        // Ω(0) = σ(0) − λ log R_e(0) puts the state on H
        let cfg = ScenarioConfig {
            omega0: r_e0.transpose().adjoint(&base.omega_r) - lam * log,
            ..base
        };
        let run = match run_from_error(&cfg, &r_e0) {
            Ok(run) => run,
            Err(e) => return failed("C5", "forward invariance", e),
        };
        if !run.completed() {
            rejected += 1;
            continue;
        }
        done += 1;
        max_s = run.samples.iter().map(|s| s.s_norm).fold(max_s, f64::max);
        max_rise = run
            .samples
            .windows(2)
            .map(|w| w[1].v_morse - w[0].v_morse)
            .fold(max_rise, f64::max);
        max_final = max_final.max(run.samples.last().map_or(f64::INFINITY, |s| s.v_morse));
    }
    check(
        "C5",
        "forward invariance of H",
        max_s <= 1e-5 && max_rise <= 1e-12 && max_final < 1e-4,
        format!(
            "max |s| {max_s:.2e} (limit 1e-5), max V1 increase {max_rise:.2e}, max final V1 {max_final:.2e} (limit 1e-4), {rejected} rejected"
        ),
    )
}

fn preset_runs(scenario: u8) -> Result<Vec<(ControllerId, Trajectory)>> {
    ControllerId::ALL
        .iter()
        .map(|&id| {
            Ok((
                id,
                run_scenario(&ScenarioConfig::preset(scenario, id, Chart::So3)?)?,
            ))
        })
        .collect()
}

fn within(value: f64, target: f64, rel: f64) -> bool {
    (value - target).abs() <= rel * target
}

fn max_pairwise_spread(values: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for a in values {
        for b in values {
            worst = worst.max((a - b).abs() / a.min(*b));
        }
    }
    worst
}

pub fn scenario_1() -> Check {
    const NAME: &str = "scenario 1 reproduction";
    let runs = match preset_runs(1) {
        Ok(r) => r,
        Err(e) => return failed("C6", NAME, e),
    };
    let targets = [17.0, 17.0, 30.0];
    let mut passed = true;
    let mut parts = Vec::new();
    for ((id, run), target) in runs.iter().zip(targets) {
        let t = convergence_time(&run.samples, 0.01).ok().flatten();
        let t_fine = convergence_time(&run.samples, 1e-7).ok().flatten();
        let ok = run.completed() && t.is_some_and(|t| within(t, target, 0.15));
        passed &= ok;
        parts.push(format!(
            "{id} t(Psi<0.01)={} [target {target}±15%] t(Psi<1e-7)={}",
            fmt_time(t),
            fmt_time(t_fine)
        ));
    }
    let energies: Vec<f64> = runs.iter().map(|(_, r)| final_energy(&r.samples)).collect();
    let spread = max_pairwise_spread(&energies);
    passed &= spread <= 0.10;
    parts.push(format!(
        "energies {:.4}/{:.4}/{:.4} spread {:.2}% (limit 10%)",
        energies[0],
        energies[1],
        energies[2],
        spread * 100.0
    ));
    check("C6", NAME, passed, parts.join("; "))
}

fn fmt_time(t: Option<f64>) -> String {
    t.map_or("never".into(), |t| format!("{t:.2}s"))
}

pub fn scenario_2() -> Check {
    const NAME: &str = "scenario 2 energy ordering";
    let runs = match preset_runs(2) {
        Ok(r) => r,
        Err(e) => return failed("C7", NAME, e),
    };
    let converged = runs.iter().all(|(_, r)| {
        r.completed()
            && r.samples.last().is_some_and(|s| s.psi < 1e-3)
            && convergence_time(&r.samples, 0.01).ok().flatten().is_some()
    });
    let e: Vec<f64> = runs.iter().map(|(_, r)| final_energy(&r.samples)).collect();
    check(
        "C7",
        NAME,
        converged && e[0] < e[1] && e[0] < e[2],
        format!(
            "all converged: {converged}; energies GSMC {:.4} LSF {:.4} PDPLUS {:.4}",
            e[0], e[1], e[2]
        ),
    )
}

pub fn scenario_3() -> Check {
    const NAME: &str = "scenario 3 delay and ordering";
    let runs = match preset_runs(3) {
        Ok(r) => r,
        Err(e) => return failed("C8", NAME, e),
    };
    let targets = [1.0, 2.5, 1.0];
    let mut passed = runs.iter().all(|(_, r)| r.completed());
    let mut parts = Vec::new();
    for ((id, run), target) in runs.iter().zip(targets) {
        let d = descent_delay(&run.samples, 0.05);
        passed &= d.is_some_and(|d| (d - target).abs() <= 0.5);
        parts.push(format!("{id} delay {} [target {target}±0.5]", fmt_time(d)));
    }
    let t: Vec<f64> = runs
        .iter()
        .map(|(_, r)| {
            convergence_time(&r.samples, 0.01)
                .ok()
                .flatten()
                .unwrap_or(f64::INFINITY)
        })
        .collect();
    let e: Vec<f64> = runs.iter().map(|(_, r)| final_energy(&r.samples)).collect();
    let fastest = t[0] < t[1] && t[0] < t[2];
    let costliest = e[0] > e[1] && e[0] > e[2];
    passed &= fastest && costliest;
    parts.push(format!(
        "t(Psi<0.01) {:.2}/{:.2}/{:.2}, energies {:.3}/{:.3}/{:.3}",
        t[0], t[1], t[2], e[0], e[1], e[2]
    ));
    check("C8", NAME, passed, parts.join("; "))
}

fn constant_torque(tau: AlgebraVector) -> impl Fn(f64, &RotationMatrix, &AlgebraVector) -> Result<ControlOutput> {
    move |_, _, _| {
        Ok(ControlOutput {
            tau,
            s: Vector3::zeros(),
            feedforward: Vector3::zeros(),
        })
    }
}

/// Free rigid body over 40 s: worst relative energy drift, momentum drift, orthonormality defect.
fn free_body_drift() -> (f64, f64, f64) {
    let body = RigidBody::new(InertiaTensor::preset());
    let omega0 = Vector3::new(1.0, -1.2, 0.9);
    let e0 = body.kinetic_energy(&omega0);
    let m0 = body.inertia.flat(&omega0).norm();
    let (mut de, mut dm, mut orth): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let _ = simulate(
        &body,
        RotationMatrix::identity(),
        omega0,
        1e-3,
        40_000,
        Vector3::zeros(),
        constant_torque(Vector3::zeros()),
        |snap: &Snapshot<RotationMatrix>| {
            de = de.max((body.kinetic_energy(&snap.omega) - e0).abs() / e0);
            dm = dm.max(((&snap.g * body.inertia.flat(&snap.omega)).norm() - m0).abs() / m0);
            orth = orth.max(snap.g.orthonormality_error());
        },
    );
    (de, dm, orth)
}

/// Centred-difference errors of σ̇ and of d/dt log R_e along torqued trajectories.
fn finite_difference_errors(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let body = RigidBody::new(InertiaTensor::preset());
    let dt = 1e-3;
    let (mut sigma_err, mut dlog_err): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let reference = ReferenceTrajectory::new(sampling::rotation(rng, 0.01), sampling::velocity(rng) * 0.3);
        let r0 = reference.g_r0 * random_error(rng, 0.1, 2.5);
        let mut states = Vec::new();
        let _ = simulate(
            &body,
            r0,
            sampling::velocity(rng) * 0.5,
            dt,
            200,
            Vector3::zeros(),
            constant_torque(sampling::velocity(rng)),
            |snap: &Snapshot<RotationMatrix>| states.push((snap.t, snap.g, snap.omega)),
        );
        let err = |i: usize| {
            let (t, r, w) = states[i];
            error_state(&r, &w, &reference.at(t))
        };
        for k in (1..states.len() - 1).step_by(40) {
            let (prev, here, next) = (err(k - 1), err(k), err(k + 1));
            let fd = (next.sigma - prev.sigma) / (2.0 * dt);
            sigma_err = sigma_err.max((fd - here.sigma_dot).norm());
            if let (Ok(a), Ok(b), Ok(d)) = (prev.g_e.log(), next.g_e.log(), dlog_so3(&here.g_e, &here.omega_e)) {
                dlog_err = dlog_err.max(((b - a) / (2.0 * dt) - d).norm());
            }
        }
    }
    (sigma_err, dlog_err)
}

pub fn numerical_dynamics() -> Check {
    const NAME: &str = "numerical dynamics";
    let (de, dm, free_orth) = free_body_drift();
    let mut orth = free_orth;
    for id in ControllerId::ALL {
        match ScenarioConfig::preset(1, id, Chart::So3).and_then(|c| run_scenario(&c)) {
            Ok(run) => orth = orth.max(run.max_defect),
            Err(e) => return failed("C9", NAME, e),
        }
    }
    let qnorm = match ScenarioConfig::preset(1, ControllerId::Gsmc, Chart::S3).and_then(|c| run_scenario(&c)) {
        Ok(run) => run.max_defect,
        Err(e) => return failed("C9", NAME, e),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (sigma_err, dlog_err) = finite_difference_errors(&mut rng);
    check(
        "C9",
        NAME,
        de < 1e-7 && dm < 1e-6 && qnorm < 1e-12 && orth < 1e-6 && dlog_err < 1e-5 && sigma_err < 1e-5,
        format!(
            "energy drift {de:.1e}, momentum drift {dm:.1e}, |q| error {qnorm:.1e}, orthonormality {orth:.1e}, dlog fd {dlog_err:.1e}, sigma_dot fd {sigma_err:.1e}"
        ),
    )
}

/// Largest `|Ψ_SO3(t) − Ψ_S3(t)|` for the GSMC controller in each scenario.
pub fn chart_gap(scenario: u8) -> Result<f64> {
    let so3 = run_scenario(&ScenarioConfig::preset(scenario, ControllerId::Gsmc, Chart::So3)?)?;
    let s3 = run_scenario(&ScenarioConfig::preset(scenario, ControllerId::Gsmc, Chart::S3)?)?;
    if !(so3.completed() && s3.completed()) || so3.samples.len() != s3.samples.len() {
        return Ok(f64::INFINITY);
    }
    Ok(so3
        .samples
        .iter()
        .zip(&s3.samples)
        .map(|(a, b)| (a.psi - b.psi).abs())
        .fold(0.0, f64::max))
}

pub fn chart_consistency() -> Check {
    let gaps: Result<Vec<f64>> = (1..=3).map(chart_gap).collect();
    match gaps {
        Ok(g) => check(
            "C10",
            "chart consistency",
            g.iter().all(|&x| x < 1e-3),
            format!(
                "max |Psi_SO3 - Psi_S3| per scenario {:.1e}/{:.1e}/{:.1e} (limit 1e-3, lambda_S3 = 2 lambda_SO3)",
                g[0], g[1], g[2]
            ),
        ),
        Err(e) => failed("C10", "chart consistency", e),
    }
}

pub fn determinism() -> Check {
    let mut identical = 0;
    let mut total = 0;
    for scenario in 1..=3 {
        for id in ControllerId::ALL {
            let bytes = || -> Result<Vec<u8>> {
                let run = run_scenario(&ScenarioConfig::preset(scenario, id, Chart::So3)?)?;
                Ok(csv_bytes(&run.samples))
            };
            total += 1;
            match (bytes(), bytes()) {
                (Ok(a), Ok(b)) if a == b => identical += 1,
                (Err(e), _) | (_, Err(e)) => return failed("C11", "determinism", e),
                _ => {}
            }
        }
    }
    check(
        "C11",
        "determinism",
        identical == total,
        format!("{identical}/{total} preset CSVs bit-identical across repeated runs"),
    )
}

pub fn kinematic_law_contract() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut odd, mut v1_rate, mut v2_rel): (f64, f64, f64) = (0.0, f64::NEG_INFINITY, 0.0);
    let identity_zero = so3_log(&RotationMatrix::identity()).is_ok_and(|v| v == Vector3::zeros())
        && UnitQuaternion::identity().log().is_ok_and(|v| v == Vector3::zeros());
    for _ in 0..SAMPLES {
        let r = random_error(&mut rng, 1e-3, PI - 0.05);
        if let (Ok(a), Ok(b)) = (so3_log(&r), so3_log(&r.transpose())) {
            odd = odd.max((a + b).norm());
            if let Ok(grad) = morse_v1_gradient(&r) {
                v1_rate = v1_rate.max(grad.dot(&-a));
            }
        }
        let q = sampling::quaternion(&mut rng, 0.0);
        if q.scalar() > -1.0 + 0.05 && q.scalar() < 1.0 - 1e-6 {
            if let Ok(law) = q.log() {
                let q_dot0 = -0.5 * q.vector().dot(&-law);
                let v2_dot = -q_dot0 / (2.0 * (1.0 - q.scalar()).sqrt());
                let expected = -decay_rate_v2(&q) * morse_v2(&q);
                v2_rel = v2_rel.max((v2_dot - expected).abs() / expected.abs());
            }
        }
    }
    check(
        "P1",
        "kinematic control law contract",
        identity_zero && odd <= 1e-12 && v1_rate < 0.0 && v2_rel <= 1e-9,
        format!("law(e)=0: {identity_zero}; max |law(g^-1)+law(g)| {odd:.1e}; max dV1/dt {v1_rate:.2e} (< 0); S3 decay identity rel. error {v2_rel:.1e}"),
    )
}

pub fn morse_sandwich() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut violations = 0;
    let mut checked = 0;
    while checked < SAMPLES {
        let r = sampling::rotation(&mut rng, 0.0);
        let v = morse_v1(&r);
        if v >= 2.0 - 0.05 {
            continue;
        }
        checked += 1;
        let Ok(g) = morse_v1_gradient(&r) else {
            violations += 1;
            continue;
        };
        let g2 = g.norm_squared();
        if !(g2 <= v + 1e-14 && v <= 2.0 * g2 + 1e-14) {
            violations += 1;
        }
    }
    check(
        "P2",
        "Morse sandwich",
        violations == 0,
        format!("{violations} violations in {checked} samples"),
    )
}

/// Sign changes of the LSF sliding variable after its first crossing, counted
/// per component while the component is above 1e-8.
pub fn lsf_sign_changes(run: &Trajectory) -> usize {
    (0..3)
        .map(|k| {
            let values = run.sliding.iter().map(|s| s[k]).filter(|v| v.abs() > 1e-8);
            sign_changes(values).saturating_sub(1)
        })
        .max()
        .unwrap_or(0)
}

pub fn lsf_oscillation() -> Check {
    match ScenarioConfig::preset(1, ControllerId::Lsf, Chart::So3).and_then(|c| run_scenario(&c)) {
        Ok(run) => {
            let n = lsf_sign_changes(&run);
            check(
                "P3",
                "LSF sliding variable oscillates",
                n >= 3,
                format!("{n} sign changes after the first crossing (needs 3)"),
            )
        }
        Err(e) => failed("P3", "LSF sliding variable oscillates", e),
    }
}

pub fn decay_by_differences() -> Check {
    let cfg = ScenarioConfig::default();
    let run = match run_scenario(&cfg) {
        Ok(run) => run,
        Err(e) => return failed("P4", "W decay by finite differences", e),
    };
    let w = lyapunov_w(&run, &cfg.inertia);
    let k_s = cfg.gsmc.k_s;
    let mut worst: f64 = 0.0;
    for i in 1..w.len() - 1 {
        let (t, wi) = w[i];
        if !(0.5..=5.0).contains(&t) {
            continue;
        }
        let fd = (w[i + 1].1 - w[i - 1].1) / (w[i + 1].0 - w[i - 1].0);
        worst = worst.max((fd - (-2.0 * k_s * wi)).abs() / (2.0 * k_s * wi));
    }
    check(
        "P4",
        "W decay by finite differences",
        worst < 0.01,
        format!("max relative gap {:.3}% (limit 1%)", worst * 100.0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_a_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 4.0 - 1.5 * x).collect();
        assert!((fit_slope(&xs, &ys) + 1.5).abs() < 1e-14);
    }

    #[test]
    fn check_display() {
        let c = check("C1", "x", true, "ok".into());
        assert_eq!(c.to_string(), "[PASS] C1   x: ok");
    }

    #[test]
    fn fast_checks_pass() {
        for c in [passivity(), morse_sandwich(), kinematic_law_contract()] {
            assert!(c.passed, "{c}");
        }
    }
}
