//! Scenario configuration, the built-in `paper-2023` preset and the flat
//! `key = value` config format.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};

use crate::controllers::{GsmcGains, LsfGains, PdPlusGains};
use crate::error::{Error, Result};
use crate::lie::{AlgebraVector, InertiaTensor, RotationMatrix};

/// Direction-cosine matrix of the 3-1-2 Euler sequence.
///
/// `R₃₁₂(φ, θ, ψ) = (R₃(φ) R₁(θ) R₂(ψ))ᵀ` with `Rᵢ` the active rotation about
/// coordinate axis `i`, i.e. the frame transformation of the successive
/// rotations `φ` about 3, `θ` about the new 1 and `ψ` about the new 2.
pub fn euler_312(phi: f64, theta: f64, psi: f64) -> RotationMatrix {
    let r =
        RotationMatrix::about_axis(2, phi) * RotationMatrix::about_axis(0, theta) * RotationMatrix::about_axis(1, psi);
    r.transpose()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ControllerId {
    Gsmc,
    Lsf,
    PdPlus,
}

impl ControllerId {
    pub const ALL: [ControllerId; 3] = [ControllerId::Gsmc, ControllerId::Lsf, ControllerId::PdPlus];

    pub fn label(&self) -> &'static str {
        match self {
            ControllerId::Gsmc => "GSMC",
            ControllerId::Lsf => "LSF",
            ControllerId::PdPlus => "PDPLUS",
        }
    }
}

impl fmt::Display for ControllerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ControllerId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "GSMC" => Ok(ControllerId::Gsmc),
            "LSF" => Ok(ControllerId::Lsf),
            "PDPLUS" | "PD+" => Ok(ControllerId::PdPlus),
            _ => Err(Error::Config(format!("unknown controller_id '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chart {
    So3,
    S3,
}

impl Chart {
    pub fn label(&self) -> &'static str {
        match self {
            Chart::So3 => "SO3",
            Chart::S3 => "S3",
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Chart {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SO3" | "SO(3)" => Ok(Chart::So3),
            "S3" => Ok(Chart::S3),
            _ => Err(Error::Config(format!("unknown chart '{s}'"))),
        }
    }
}

/// Everything needed to run one closed-loop simulation.
///
/// All three gain records are carried; `controller_id` selects the active one.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub controller_id: ControllerId,
    pub chart: Chart,
    pub gsmc: GsmcGains,
    pub lsf: LsfGains,
    pub pdplus: PdPlusGains,
    pub inertia: InertiaTensor,
    pub r_r0: RotationMatrix,
    pub omega_r: AlgebraVector,
    /// Initial attitude error as 3-1-2 Euler angles (rad).
    pub re0_euler312: [f64; 3],
    pub omega0: AlgebraVector,
    pub dt: f64,
    pub horizon: f64,
    /// Constant torque added to the plant input (N·m); not part of the energy metric.
    pub disturbance: Option<AlgebraVector>,
}

/// Middle Euler angle of the initial error in each reference scenario.
pub const SCENARIO_ANGLES: [f64; 3] = [-0.428 * PI, -0.01 * PI, -0.99 * PI];

/// Quaternion-chart λ giving the same closed loop as the SO(3) chart: the S³
/// logarithm is the half angle, so the gain doubles.
pub fn quaternion_lambda(lambda_so3: f64) -> f64 {
    2.0 * lambda_so3
}

impl ScenarioConfig {
    /// Reference scenario `n` (1, 2 or 3) with the published gains.
    pub fn preset(scenario: u8, controller_id: ControllerId, chart: Chart) -> Result<Self> {
        let angle = match scenario {
            1..=3 => SCENARIO_ANGLES[usize::from(scenario - 1)],
            _ => return Err(Error::Config(format!("scenario must be 1, 2 or 3, got {scenario}"))),
        };
        let mut cfg = ScenarioConfig {
            re0_euler312: [0.0, angle, 0.0],
            controller_id,
            chart,
            ..ScenarioConfig::default()
        };
        if chart == Chart::S3 {
            cfg.gsmc = GsmcGains::new(cfg.gsmc.k_s, quaternion_lambda(cfg.gsmc.lambda.value()))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.gsmc.validate()?;
        self.lsf.validate()?;
        self.pdplus.validate()?;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::Config(format!("horizon must be > 0, got {}", self.horizon)));
        }
        if self.dt > self.horizon {
            return Err(Error::Config("dt exceeds horizon".into()));
        }
        let vectors = [Some(self.omega_r), Some(self.omega0), self.disturbance];
        let angles_finite = self.re0_euler312.iter().all(|a| a.is_finite());
        if !angles_finite || vectors.iter().flatten().any(|v| !v.iter().all(|x| x.is_finite())) {
            return Err(Error::Config("non-finite vector entry".into()));
        }
        if self.chart == Chart::S3 && self.controller_id != ControllerId::Gsmc {
            return Err(Error::Config(format!(
                "{} is only defined on the SO3 chart",
                self.controller_id
            )));
        }
        RotationMatrix::new(*self.r_r0.matrix()).map_err(|e| Error::Config(format!("R_r0: {e}")))?;
        Ok(())
    }

    /// Initial attitude error.
    pub fn r_e0(&self) -> RotationMatrix {
        let [a, b, c] = self.re0_euler312;
        euler_312(a, b, c)
    }

    /// Initial attitude `R(0) = R_r(0) R_e(0)`.
    pub fn r0(&self) -> RotationMatrix {
        self.r_r0 * self.r_e0()
    }

    /// Parses the flat `key = value` format. Keys absent from the text keep
    /// the scenario-1 GSMC defaults; unknown keys are errors.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = ScenarioConfig::default();
        let mut gsmc = (cfg.gsmc.k_s, cfg.gsmc.lambda.value());
        let mut lsf = (cfg.lsf.k, cfg.lsf.kappa);
        let mut pd = (cfg.pdplus.k_omega, cfg.pdplus.k_r);
        let mut seen = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if seen.contains(&key) {
                return Err(Error::Config(format!("line {}: duplicate key '{key}'", n + 1)));
            }
            seen.push(key);
            let ctx = |e: Error| Error::Config(format!("line {} ({key}): {e}", n + 1));
            match key {
                "controller_id" => cfg.controller_id = value.parse().map_err(ctx)?,
                "chart" => cfg.chart = value.parse().map_err(ctx)?,
                "k_s" => gsmc.0 = parse_number(value).map_err(ctx)?,
                "lambda" => gsmc.1 = parse_number(value).map_err(ctx)?,
                "k" => lsf.0 = parse_number(value).map_err(ctx)?,
                "kappa" => lsf.1 = parse_number(value).map_err(ctx)?,
                "k_Omega" => pd.0 = parse_number(value).map_err(ctx)?,
                "k_R" => pd.1 = parse_number(value).map_err(ctx)?,
                "inertia" => {
                    let m = Matrix3::from_row_slice(&parse_list(value, 9).map_err(ctx)?);
                    cfg.inertia = InertiaTensor::new(m).map_err(ctx)?;
                }
                "R_r0" => {
                    let m = Matrix3::from_row_slice(&parse_list(value, 9).map_err(ctx)?);
                    cfg.r_r0 = RotationMatrix::new(m).map_err(ctx)?;
                }
                "Omega_r" => cfg.omega_r = parse_vector(value).map_err(ctx)?,
                "Re0_euler312" => {
                    let v = parse_list(value, 3).map_err(ctx)?;
                    cfg.re0_euler312 = [v[0], v[1], v[2]];
                }
                "Omega0" => cfg.omega0 = parse_vector(value).map_err(ctx)?,
                "dt" => cfg.dt = parse_number(value).map_err(ctx)?,
                "horizon" => cfg.horizon = parse_number(value).map_err(ctx)?,
                "disturbance" => {
                    cfg.disturbance = if value.eq_ignore_ascii_case("none") {
                        None
                    } else {
                        Some(parse_vector(value).map_err(ctx)?)
                    }
                }
                _ => return Err(Error::Config(format!("line {}: unknown key '{key}'", n + 1))),
            }
        }
        cfg.gsmc = GsmcGains::new(gsmc.0, gsmc.1).map_err(|e| Error::Config(e.to_string()))?;
        cfg.lsf = LsfGains::new(lsf.0, lsf.1).map_err(|e| Error::Config(e.to_string()))?;
        cfg.pdplus = PdPlusGains::new(pd.0, pd.1).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate().map_err(|e| match e {
            Error::Config(_) => e,
            other => Error::Config(other.to_string()),
        })?;
        Ok(cfg)
    }

    /// Serialises to the format read by [`ScenarioConfig::from_text`].
    pub fn to_text(&self) -> String {
        let vec = |v: &AlgebraVector| format!("[{:?}, {:?}, {:?}]", v.x, v.y, v.z);
        let mat = |m: &Matrix3<f64>| {
            let rows: Vec<String> = (0..3)
                .map(|i| format!("{:?}, {:?}, {:?}", m[(i, 0)], m[(i, 1)], m[(i, 2)]))
                .collect();
            format!("[{}]", rows.join(",  "))
        };
        let [a, b, c] = self.re0_euler312;
        let mut out = String::new();
        let _ = writeln!(out, "controller_id = {}", self.controller_id);
        let _ = writeln!(out, "chart = {}", self.chart);
        let _ = writeln!(out, "k_s = {:?}", self.gsmc.k_s);
        let _ = writeln!(out, "lambda = {:?}", self.gsmc.lambda.value());
        let _ = writeln!(out, "k = {:?}", self.lsf.k);
        let _ = writeln!(out, "kappa = {:?}", self.lsf.kappa);
        let _ = writeln!(out, "k_Omega = {:?}", self.pdplus.k_omega);
        let _ = writeln!(out, "k_R = {:?}", self.pdplus.k_r);
        let _ = writeln!(out, "inertia = {}", mat(self.inertia.matrix()));
        let _ = writeln!(out, "R_r0 = {}", mat(self.r_r0.matrix()));
        let _ = writeln!(out, "Omega_r = {}", vec(&self.omega_r));
        let _ = writeln!(out, "Re0_euler312 = [{a:?}, {b:?}, {c:?}]");
        let _ = writeln!(out, "Omega0 = {}", vec(&self.omega0));
        let _ = writeln!(out, "dt = {:?}", self.dt);
        let _ = writeln!(out, "horizon = {:?}", self.horizon);
        match &self.disturbance {
            Some(d) => {
                let _ = writeln!(out, "disturbance = {}", vec(d));
            }
            None => {
                let _ = writeln!(out, "disturbance = none");
            }
        }
        out
    }
}

impl Default for ScenarioConfig {
    /// Scenario 1 of the reference study with the GSMC controller on SO(3).
    fn default() -> Self {
        ScenarioConfig {
            controller_id: ControllerId::Gsmc,
            chart: Chart::So3,
            gsmc: GsmcGains::preset(),
            lsf: LsfGains::preset(),
            pdplus: PdPlusGains::preset(),
            inertia: InertiaTensor::preset(),
            r_r0: euler_312(PI / 4.0, -PI, PI / 4.0),
            omega_r: Vector3::new(0.0, 0.1, 0.0),
            re0_euler312: [0.0, SCENARIO_ANGLES[0], 0.0],
            omega0: Vector3::new(1.0, 2.0, 3.0) / (2.0 * 14f64.sqrt()),
            dt: 1e-3,
            horizon: 40.0,
            disturbance: None,
        }
    }
}

/// Parses a real number, optionally written as a multiple of π:
/// `0.5`, `-0.428pi`, `pi`, `-pi/4`, `0.25*pi`.
pub fn parse_number(token: &str) -> Result<f64> {
    let t = token.trim();
    let bad = || Error::Config(format!("invalid number '{token}'"));
    let Some(idx) = t.find("pi") else {
        return t.parse::<f64>().map_err(|_| bad());
    };
    let (coef, rest) = (t[..idx].trim_end_matches('*').trim(), &t[idx + 2..]);
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let divisor = match rest.trim() {
        "" => 1.0,
        r => r
            .strip_prefix('/')
            .ok_or_else(bad)?
            .trim()
            .parse::<f64>()
            .map_err(|_| bad())?,
    };
    Ok(coef * PI / divisor)
}

fn parse_list(value: &str, expected: usize) -> Result<Vec<f64>> {
    let inner = value.trim().trim_start_matches('[').trim_end_matches(']');
    let items: Vec<f64> = inner
        .split(|c: char| c == ',' || c.is_whitespace() || c == '[' || c == ']' || c == ';')
        .filter(|s| !s.is_empty())
        .map(parse_number)
        .collect::<Result<_>>()?;
    if items.len() != expected {
        return Err(Error::Config(format!(
            "expected {expected} numbers, got {}",
            items.len()
        )));
    }
    Ok(items)
}

fn parse_vector(value: &str) -> Result<AlgebraVector> {
    let v = parse_list(value, 3)?;
    Ok(Vector3::new(v[0], v[1], v[2]))
}
