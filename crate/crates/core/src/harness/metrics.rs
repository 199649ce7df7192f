//! Scalar summaries of recorded runs and the comparison report.

use std::fmt;

use crate::error::{Error, Result};

use super::sim::TrajectorySample;

/// First time `t*` with `Ψ(t) < threshold` for every sample at or after `t*`.
/// `None` if the final sample is still at or above the threshold.
pub fn convergence_time(samples: &[TrajectorySample], threshold: f64) -> Result<Option<f64>> {
    if !(threshold > 0.0) {
        return Err(Error::Config(format!("threshold must be > 0, got {threshold}")));
    }
    match samples.iter().rposition(|s| s.psi >= threshold) {
        None => Ok(samples.first().map(|s| s.t)),
        Some(i) => Ok(samples.get(i + 1).map(|s| s.t)),
    }
}

/// Time at which `Ψ` first falls below `Ψ(0) − drop`.
pub fn descent_delay(samples: &[TrajectorySample], drop: f64) -> Option<f64> {
    let start = samples.first()?.psi;
    samples.iter().find(|s| s.psi < start - drop).map(|s| s.t)
}

pub fn peak_torque(samples: &[TrajectorySample]) -> f64 {
    samples.iter().map(|s| s.tau_norm).fold(0.0, f64::max)
}

pub fn final_energy(samples: &[TrajectorySample]) -> f64 {
    samples.last().map_or(0.0, |s| s.energy)
}

/// Number of strict sign changes in a series, ignoring exact zeros.
pub fn sign_changes(values: impl IntoIterator<Item = f64>) -> usize {
    let mut last = 0.0_f64;
    let mut count = 0;
    for v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            count += 1;
        }
        last = v;
    }
    count
}

/// Per-run row of a [`CompareReport`].
#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub label: String,
    /// Convergence time for each report threshold.
    pub convergence: Vec<Option<f64>>,
    pub final_psi: f64,
    pub final_energy: f64,
    pub peak_tau: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareReport {
    pub thresholds: Vec<f64>,
    pub runs: Vec<RunSummary>,
    /// `energy_ratio[i][j] = E_i / E_j`.
    pub energy_ratio: Vec<Vec<f64>>,
}

/// Thresholds on Ψ used by the CLI comparison.
pub const REPORT_THRESHOLDS: [f64; 2] = [1e-2, 1e-7];

pub fn compare_report(runs: &[(String, Vec<TrajectorySample>)], thresholds: &[f64]) -> Result<CompareReport> {
    if runs.len() < 2 {
        return Err(Error::Config(format!(
            "a comparison needs at least two runs, got {}",
            runs.len()
        )));
    }
    let summaries = runs
        .iter()
        .map(|(label, samples)| {
            Ok(RunSummary {
                label: label.clone(),
                convergence: thresholds
                    .iter()
                    .map(|&th| convergence_time(samples, th))
                    .collect::<Result<_>>()?,
                final_psi: samples.last().map_or(f64::NAN, |s| s.psi),
                final_energy: final_energy(samples),
                peak_tau: peak_torque(samples),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let energy_ratio = summaries
        .iter()
        .map(|a| summaries.iter().map(|b| a.final_energy / b.final_energy).collect())
        .collect();
    Ok(CompareReport {
        thresholds: thresholds.to_vec(),
        runs: summaries,
        energy_ratio,
    })
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<10}", "run")?;
        for th in &self.thresholds {
            write!(f, " {:>14}", format!("t(Psi<{th:e})"))?;
        }
        writeln!(f, " {:>12} {:>12} {:>12}", "final Psi", "energy", "peak |tau|")?;
        for r in &self.runs {
            write!(f, "{:<10}", r.label)?;
            for c in &r.convergence {
                match c {
                    Some(t) => write!(f, " {:>14.2}", t)?,
                    None => write!(f, " {:>14}", "-")?,
                }
            }
            writeln!(
                f,
                " {:>12.3e} {:>12.4} {:>12.4}",
                r.final_psi, r.final_energy, r.peak_tau
            )?;
        }
        writeln!(f)?;
        writeln!(f, "energy ratios (row / column)")?;
        write!(f, "{:<10}", "")?;
        for r in &self.runs {
            write!(f, " {:>10}", r.label)?;
        }
        writeln!(f)?;
        for (r, row) in self.runs.iter().zip(&self.energy_ratio) {
            write!(f, "{:<10}", r.label)?;
            for v in row {
                write!(f, " {:>10.4}", v)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
