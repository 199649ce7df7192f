//! Acceptance suite. Each test prints one `PASS`/`FAIL criterion N` line and
//! then asserts it; run with `--nocapture` to see every line.
//!
//! Measurements are taken from library output but judged with oracles written
//! here: logs via nalgebra's `Rotation3`, Lyapunov values from a locally typed
//! inertia matrix, metrics recomputed from the raw sample columns.

use std::f64::consts::PI;
use std::time::Instant;

use gsmc::controllers::{gsmc_tracking, ControlOutput, GsmcGains};
use gsmc::dynamics::{ReferenceTrajectory, RigidBody};
use gsmc::harness::{
    emit_csv, run_from_error, run_scenario, simulate, Chart, ControllerId, ScenarioConfig, Snapshot, Trajectory,
    TrajectorySample,
};
use gsmc::lie::ad_star;
use gsmc::sliding::{bundle_inverse, bundle_star, BundleElement, SlidingGain};
use gsmc::{sampling, AttitudeGroup, InertiaTensor, RotationMatrix, UnitQuaternion};
use nalgebra::{Matrix3, Rotation3, Vector3, Vector4};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const LAMBDAS: [f64; 3] = [0.1, 0.5, 2.0];

fn report(n: u8, name: &str, passed: bool, detail: String) {
    let status = if passed { "PASS" } else { "FAIL" };
    println!("{status} criterion {n:>2} {name}: {detail}");
    assert!(passed, "criterion {n} ({name}) failed: {detail}");
}

fn inertia() -> Matrix3<f64> {
    Matrix3::new(3.6046, -0.0706, 0.1491, -0.0706, 8.6868, 0.0449, 0.1491, 0.0449, 9.3484)
}

fn log_so3(r: &Matrix3<f64>) -> Vector3<f64> {
    Rotation3::from_matrix_unchecked(*r).scaled_axis()
}

/// Half the rotation vector of `q`, on the branch with angle `acos(q0)`.
fn log_s3(q: &Vector4<f64>) -> Vector3<f64> {
    let v = Vector3::new(q[1], q[2], q[3]);
    let n = v.norm();
    if n == 0.0 {
        Vector3::zeros()
    } else {
        v / n * q[0].clamp(-1.0, 1.0).acos()
    }
}

/// Sliding variable `ν + λ log g`, recomputed from coordinates.
trait Oracle: AttitudeGroup {
    fn log_oracle(&self) -> Vector3<f64>;
    fn coord_gap(&self, other: &Self) -> f64;
}

impl Oracle for RotationMatrix {
    fn log_oracle(&self) -> Vector3<f64> {
        log_so3(self.matrix())
    }
    fn coord_gap(&self, other: &Self) -> f64 {
        (self.matrix() - other.matrix()).norm()
    }
}

impl Oracle for UnitQuaternion {
    fn log_oracle(&self) -> Vector3<f64> {
        log_s3(&self.coords())
    }
    fn coord_gap(&self, other: &Self) -> f64 {
        (self.coords() - other.coords()).norm()
    }
}

fn gap<G: Oracle>(a: &BundleElement<G>, b: &BundleElement<G>) -> f64 {
    a.g.coord_gap(&b.g) + (a.nu - b.nu).norm()
}

fn s_oracle<G: Oracle>(h: &BundleElement<G>, lambda: f64) -> f64 {
    (h.nu + lambda * h.g.log_oracle()).norm()
}

fn star_axioms<G: Oracle>(rng: &mut ChaCha8Rng, sample: fn(&mut ChaCha8Rng) -> G) -> f64 {
    let e = BundleElement::<G>::identity();
    let mut worst: f64 = 0.0;
    for l in LAMBDAS {
        let lam = SlidingGain::new(l).unwrap();
        let mut n = 0;
        while n < 1000 {
            let mut draw = || BundleElement::new(sample(rng), sampling::velocity(rng));
            let (a, b, c) = (draw(), draw(), draw());
            let inv = bundle_inverse(&a);
            let errors = (|| {
                Ok::<_, gsmc::Error>([
                    gap(&bundle_star(&a, &e, lam)?, &a),
                    gap(&bundle_star(&e, &a, lam)?, &a),
                    gap(&bundle_star(&a, &inv, lam)?, &e),
                    gap(&bundle_star(&inv, &a, lam)?, &e),
                    gap(
                        &bundle_star(&bundle_star(&a, &b, lam)?, &c, lam)?,
                        &bundle_star(&a, &bundle_star(&b, &c, lam)?, lam)?,
                    ),
                ])
            })();
            let Ok(errors) = errors else { continue };
            n += 1;
            worst = errors.into_iter().fold(worst, f64::max);
        }
    }
    worst
}

#[test]
fn criterion_01_group_axioms() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let so3 = star_axioms(&mut rng, |r| sampling::rotation(r, 0.05));
    let s3 = star_axioms(&mut rng, |r| sampling::quaternion(r, 0.05));
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        "bundle group axioms",
        so3 < 1e-8 && s3 < 1e-8 && secs < 5.0,
        format!("max error SO3 {so3:.2e}, S3 {s3:.2e} (< 1e-8) in {secs:.2} s (< 5 s)"),
    );
}

fn subgroup<G: Oracle>(rng: &mut ChaCha8Rng, sample: fn(&mut ChaCha8Rng) -> G) -> f64 {
    let mut worst: f64 = 0.0;
    for l in LAMBDAS {
        let lam = SlidingGain::new(l).unwrap();
        worst = worst.max(s_oracle(&BundleElement::<G>::identity(), l));
        let mut n = 0;
        while n < 1000 {
            let on_h = |g: G| BundleElement::new(g, -l * g.log_oracle());
            let (a, b) = (on_h(sample(rng)), on_h(sample(rng)));
            let Ok(ab) = bundle_star(&a, &b, lam) else { continue };
            n += 1;
            worst = worst.max(s_oracle(&bundle_inverse(&a), l)).max(s_oracle(&ab, l));
        }
    }
    worst
}

/// Elements `r` with `s(r_d⁻¹ ⋆ r) = 0` are not closed under ⋆.
fn error_set_closure_failure(rng: &mut ChaCha8Rng) -> f64 {
    let l = 0.5;
    let lam = SlidingGain::new(l).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let rd = BundleElement::new(sampling::rotation(rng, 0.5), sampling::velocity(rng));
        let rd_inv = bundle_inverse(&rd);
        let mut member = || {
            let r = sampling::rotation(rng, 1.5);
            let e = bundle_star(&rd_inv, &BundleElement::new(r, Vector3::zeros()), lam).unwrap();
            // ν enters r_d⁻¹ ⋆ r additively, so this zeroes s
            BundleElement::new(r, -(e.nu + l * e.g.log_oracle()))
        };
        let (a, b) = (member(), member());
        assert!(s_oracle(&bundle_star(&rd_inv, &a, lam).unwrap(), l) < 1e-9);
        if let Ok(ab) = bundle_star(&a, &b, lam) {
            if let Ok(e) = bundle_star(&rd_inv, &ab, lam) {
                worst = worst.max(s_oracle(&e, l));
            }
        }
    }
    worst
}

#[test]
fn criterion_02_sliding_subgroup() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let so3 = subgroup(&mut rng, |r| sampling::rotation(r, 0.05));
    let s3 = subgroup(&mut rng, |r| sampling::quaternion(r, 0.05));
    let negative = error_set_closure_failure(&mut rng);
    let secs = start.elapsed().as_secs_f64();
    report(
        2,
        "sliding subgroup",
        so3 < 1e-8 && s3 < 1e-8 && negative > 1e-3 && secs < 5.0,
        format!("max |s| SO3 {so3:.2e}, S3 {s3:.2e} (< 1e-8); error-set closure failure |s| = {negative:.3} (> 1e-3); {secs:.2} s"),
    );
}

#[test]
fn criterion_03_passivity() {
    let j = inertia();
    let j_inv = j.try_inverse().unwrap();
    let lib_j = InertiaTensor::preset();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let scale = 10f64.powi(i % 5 - 2);
        let zeta = sampling::velocity(&mut rng) * scale;
        let eta = sampling::velocity(&mut rng) * scale;
        let ad = ad_star(&zeta, &eta, &lib_j);
        let value = zeta.dot(&(j * (j_inv * ad)));
        worst = worst.max(value.abs() / ((1.0 + zeta.norm_squared()) * (1.0 + eta.norm())));
    }
    report(
        3,
        "passivity identity",
        worst < 1e-10,
        format!("max normalised value {worst:.2e} (< 1e-10)"),
    );
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mx, my) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let num: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    num / den
}

fn random_error(rng: &mut ChaCha8Rng, low: f64, high: f64) -> RotationMatrix {
    RotationMatrix::exp(&(sampling::unit_vector(rng) * sampling::angle(rng, low, high)))
}

#[test]
fn criterion_04_exponential_reaching() {
    let start = Instant::now();
    let j = inertia();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for k_s in [0.5, 1.0, 2.0] {
        let mut n = 0;
        while n < 20 {
            let cfg = ScenarioConfig {
                gsmc: GsmcGains::new(k_s, 0.5).unwrap(),
                omega0: sampling::velocity(&mut rng) * 0.5,
                horizon: 5.0,
                ..ScenarioConfig::default()
            };
            let run = run_from_error(&cfg, &random_error(&mut rng, 0.2, PI - 0.2)).unwrap();
            if !run.completed() {
                continue;
            }
            n += 1;
            runs += 1;
            let points: Vec<(f64, f64)> = run
                .samples
                .iter()
                .zip(&run.sliding)
                .filter(|(x, _)| x.t >= 0.5 - 1e-9)
                .map(|(x, s)| (x.t, (0.5 * s.dot(&(j * s))).ln()))
                .collect();
            worst = worst.max((slope(&points) / (-2.0 * k_s) - 1.0).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        4,
        "exponential reaching",
        worst < 0.02 && secs < 60.0,
        format!("max relative slope error {worst:.2e} over {runs} runs (< 2e-2) in {secs:.2} s"),
    );
}

#[test]
fn criterion_05_forward_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let (mut max_s, mut max_rise, mut max_final): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut n = 0;
    while n < 20 {
        let r_e0 = random_error(&mut rng, 0.05, PI - 0.05);
        let base = ScenarioConfig::default();
        let lambda = base.gsmc.lambda.value();
        let cfg = ScenarioConfig {
            omega0: r_e0.matrix().transpose() * base.omega_r - lambda * log_so3(r_e0.matrix()),
            ..base
        };
        let run = run_from_error(&cfg, &r_e0).unwrap();
        if !run.completed() {
            continue;
        }
        n += 1;
        assert!((run.samples.last().unwrap().t - 40.0).abs() < 1e-9);
        // V₁ = 2 − √(1 + tr R_e) with tr R_e = 3 − 2Ψ
        let v1: Vec<f64> = run.samples.iter().map(|x| 2.0 - (4.0 - 2.0 * x.psi).sqrt()).collect();
        max_s = run.sliding.iter().map(|s| s.norm()).fold(max_s, f64::max);
        max_rise = v1.windows(2).map(|w| w[1] - w[0]).fold(max_rise, f64::max);
        max_final = max_final.max(*v1.last().unwrap());
    }
    report(
        5,
        "forward invariance of H",
        max_s <= 1e-5 && max_rise <= 1e-12 && max_final < 1e-4,
        format!("max |s| {max_s:.2e} (<= 1e-5), max V1 increase {max_rise:.2e}, max V1(40 s) {max_final:.2e} (< 1e-4)"),
    );
}

fn preset_runs(scenario: u8) -> Vec<Trajectory> {
    ControllerId::ALL
        .iter()
        .map(|&id| run_scenario(&ScenarioConfig::preset(scenario, id, Chart::So3).unwrap()).unwrap())
        .collect()
}

/// First time after which Ψ stays below `threshold`.
fn settle_time(samples: &[TrajectorySample], threshold: f64) -> Option<f64> {
    let mut t = None;
    for x in samples.iter().rev() {
        if x.psi >= threshold {
            break;
        }
        t = Some(x.t);
    }
    t
}

fn delay(samples: &[TrajectorySample]) -> Option<f64> {
    samples.iter().find(|x| x.psi < samples[0].psi - 0.05).map(|x| x.t)
}

/// `√∫‖τ‖²` by the trapezoid rule on the sampled torque norms.
fn sampled_energy(samples: &[TrajectorySample]) -> f64 {
    samples
        .windows(2)
        .map(|w| 0.5 * (w[1].t - w[0].t) * (w[0].tau_norm.powi(2) + w[1].tau_norm.powi(2)))
        .sum::<f64>()
        .sqrt()
}

fn energies(runs: &[Trajectory]) -> Vec<f64> {
    runs.iter()
        .map(|r| {
            let e = r.samples.last().unwrap().energy;
            let coarse = sampled_energy(&r.samples);
            assert!((e - coarse).abs() < 1e-2 * e, "energy column {e} vs sampled {coarse}");
            e
        })
        .collect()
}

fn show(t: Option<f64>) -> String {
    t.map_or("never".into(), |t| format!("{t:.2} s"))
}

#[test]
fn criterion_06_scenario_1() {
    let start = Instant::now();
    let runs = preset_runs(1);
    let mut passed = runs.iter().all(Trajectory::completed);
    let mut parts = Vec::new();
    for ((run, target), label) in runs.iter().zip([17.0, 17.0, 30.0]).zip(["GSMC", "LSF", "PD+"]) {
        let t = settle_time(&run.samples, 0.01);
        passed &= t.is_some_and(|t| (t - target).abs() <= 0.15 * target);
        parts.push(format!(
            "{label} t(Psi<0.01) {} (want {target} s ±15%), t(Psi<1e-7) {}",
            show(t),
            show(settle_time(&run.samples, 1e-7))
        ));
    }
    let e = energies(&runs);
    let spread = e
        .iter()
        .flat_map(|a| e.iter().map(move |b| (a - b).abs() / a.min(*b)))
        .fold(0.0, f64::max);
    passed &= spread <= 0.10;
    let secs = start.elapsed().as_secs_f64();
    passed &= secs < 30.0;
    parts.push(format!(
        "energies {:.4}/{:.4}/{:.4}, spread {:.3}% (<= 10%); {secs:.2} s",
        e[0],
        e[1],
        e[2],
        spread * 100.0
    ));
    report(6, "scenario 1 reproduction", passed, parts.join("; "));
}

#[test]
fn criterion_07_scenario_2() {
    let runs = preset_runs(2);
    let converged = runs
        .iter()
        .all(|r| r.completed() && r.samples.last().unwrap().psi < 1e-3 && settle_time(&r.samples, 0.01).is_some());
    let e = energies(&runs);
    report(
        7,
        "scenario 2 energy",
        converged && e[0] < e[1] && e[0] < e[2],
        format!(
            "all converge: {converged}; energies GSMC {:.4}, LSF {:.4}, PD+ {:.4}",
            e[0], e[1], e[2]
        ),
    );
}

#[test]
fn criterion_08_scenario_3() {
    let runs = preset_runs(3);
    let mut passed = runs.iter().all(Trajectory::completed);
    let mut parts = Vec::new();
    for ((run, target), label) in runs.iter().zip([1.0, 2.5, 1.0]).zip(["GSMC", "LSF", "PD+"]) {
        let d = delay(&run.samples);
        passed &= d.is_some_and(|d| (d - target).abs() <= 0.5);
        parts.push(format!("{label} delay {} (want {target} s ±0.5)", show(d)));
    }
    let t: Vec<f64> = runs
        .iter()
        .map(|r| settle_time(&r.samples, 0.01).unwrap_or(f64::INFINITY))
        .collect();
    let e = energies(&runs);
    passed &= t[0] < t[1] && t[0] < t[2] && e[0] > e[1] && e[0] > e[2];
    parts.push(format!(
        "t(Psi<0.01) {:.2}/{:.2}/{:.2} s, energies {:.3}/{:.3}/{:.3}",
        t[0], t[1], t[2], e[0], e[1], e[2]
    ));
    report(8, "scenario 3 delay and ordering", passed, parts.join("; "));
}

fn torque(tau: Vector3<f64>) -> ControlOutput {
    ControlOutput {
        tau,
        s: Vector3::zeros(),
        feedforward: Vector3::zeros(),
    }
}

#[test]
fn criterion_09_numerical_dynamics() {
    let j = inertia();
    let body = RigidBody::new(InertiaTensor::preset());

    // torque-free body over 40 s
    let omega0 = Vector3::new(1.0, -1.2, 0.9);
    let e0 = 0.5 * omega0.dot(&(j * omega0));
    let m0 = (j * omega0).norm();
    let (mut de, mut dm, mut orth): (f64, f64, f64) = (0.0, 0.0, 0.0);
    simulate(
        &body,
        RotationMatrix::identity(),
        omega0,
        1e-3,
        40_000,
        Vector3::zeros(),
        |_, _: &RotationMatrix, _| Ok(torque(Vector3::zeros())),
        |x: &Snapshot<RotationMatrix>| {
            let r = x.g.matrix();
            de = de.max((0.5 * x.omega.dot(&(j * x.omega)) - e0).abs() / e0);
            dm = dm.max(((r * j * x.omega).norm() - m0).abs() / m0);
            orth = orth.max((r.transpose() * r - Matrix3::identity()).norm());
        },
    )
    .unwrap();

    // closed-loop quaternion chart, scenario 1
    let cfg = ScenarioConfig::preset(1, ControllerId::Gsmc, Chart::S3).unwrap();
    let reference = ReferenceTrajectory::new(UnitQuaternion::from_rotation(&cfg.r_r0), cfg.omega_r);
    let q0 = reference.g_r0.compose(&UnitQuaternion::from_rotation(&cfg.r_e0()));
    let mut qnorm: f64 = 0.0;
    simulate(
        &body,
        q0,
        cfg.omega0,
        cfg.dt,
        40_000,
        Vector3::zeros(),
        |t, q: &UnitQuaternion, w| gsmc_tracking(q, w, &reference.at(t), &cfg.gsmc, &body),
        |x: &Snapshot<UnitQuaternion>| qnorm = qnorm.max((x.g.coords().norm() - 1.0).abs()),
    )
    .unwrap();

    // centred differences of log R_e and σ = R_eᵀΩ_r along torqued trajectories
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let dt = 1e-3;
    let (mut dlog_err, mut sigma_err): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let reference =
            ReferenceTrajectory::new(sampling::rotation(&mut rng, 0.01), sampling::velocity(&mut rng) * 0.3);
        let r0 = reference.g_r0 * random_error(&mut rng, 0.1, 2.5);
        let tau = sampling::velocity(&mut rng);
        let mut states = Vec::new();
        simulate(
            &body,
            r0,
            sampling::velocity(&mut rng) * 0.5,
            dt,
            200,
            Vector3::zeros(),
            |_, _: &RotationMatrix, _| Ok(torque(tau)),
            |x: &Snapshot<RotationMatrix>| states.push((x.t, *x.g.matrix(), x.omega)),
        )
        .unwrap();
        let error = |i: usize| {
            let (t, r, w) = states[i];
            let r_r = *reference.at(t).g_r.matrix();
            let r_e = r_r.transpose() * r;
            let sigma = r_e.transpose() * reference.omega_r;
            (r_e, w - sigma, sigma)
        };
        for k in (1..states.len() - 1).step_by(40) {
            let ((r_a, _, s_a), (r_e, w_e, s_e), (r_b, _, s_b)) = (error(k - 1), error(k), error(k + 1));
            let lib = gsmc::dynamics::dlog_so3(&RotationMatrix::from_matrix_unchecked(r_e), &w_e).unwrap();
            dlog_err = dlog_err.max(((log_so3(&r_b) - log_so3(&r_a)) / (2.0 * dt) - lib).norm());
            let lib_state = gsmc::dynamics::error_state(
                &RotationMatrix::from_matrix_unchecked(states[k].1),
                &states[k].2,
                &reference.at(states[k].0),
            );
            assert!((lib_state.sigma - s_e).norm() < 1e-12);
            sigma_err = sigma_err.max(((s_b - s_a) / (2.0 * dt) - lib_state.sigma_dot).norm());
        }
    }
    report(
        9,
        "numerical dynamics",
        de < 1e-7 && dm < 1e-6 && qnorm < 1e-12 && orth < 1e-6 && dlog_err < 1e-5 && sigma_err < 1e-5,
        format!(
            "energy drift {de:.1e}, momentum drift {dm:.1e}, |q|-1 {qnorm:.1e}, orthonormality {orth:.1e}, dlog fd {dlog_err:.1e}, sigma_dot fd {sigma_err:.1e}"
        ),
    );
}

#[test]
fn criterion_10_chart_consistency() {
    let mut worst: f64 = 0.0;
    for scenario in 1..=3 {
        let so3 = run_scenario(&ScenarioConfig::preset(scenario, ControllerId::Gsmc, Chart::So3).unwrap()).unwrap();
        let s3 = run_scenario(&ScenarioConfig::preset(scenario, ControllerId::Gsmc, Chart::S3).unwrap()).unwrap();
        assert!(so3.completed() && s3.completed());
        assert_eq!(so3.samples.len(), s3.samples.len());
        worst = so3
            .samples
            .iter()
            .zip(&s3.samples)
            .map(|(a, b)| (a.psi - b.psi).abs())
            .fold(worst, f64::max);
    }
    report(
        10,
        "chart consistency",
        worst < 1e-3,
        format!("max |Psi_SO3 - Psi_S3| {worst:.2e} over scenarios 1-3 (< 1e-3)"),
    );
}

#[test]
fn criterion_11_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let mut identical = 0;
    let mut total = 0;
    let presets = (1..=3).flat_map(|n| {
        ControllerId::ALL
            .iter()
            .map(move |&id| (n, id, Chart::So3))
            .chain([(n, ControllerId::Gsmc, Chart::S3)])
    });
    for (n, id, chart) in presets {
        let cfg = ScenarioConfig::preset(n, id, chart).unwrap();
        let paths = [dir.path().join("a.csv"), dir.path().join("b.csv")];
        for p in &paths {
            emit_csv(&run_scenario(&cfg).unwrap().samples, p).unwrap();
        }
        total += 1;
        if std::fs::read(&paths[0]).unwrap() == std::fs::read(&paths[1]).unwrap() {
            identical += 1;
        }
    }
    report(
        11,
        "determinism",
        identical == total,
        format!("{identical}/{total} preset CSV files bit-identical"),
    );
}
