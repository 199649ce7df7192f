//! CSV emission and the companion plotting script.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::sim::TrajectorySample;

pub const CSV_HEADER: [&str; 7] = ["t", "Psi", "Omega_e_norm", "s_norm", "tau_norm", "energy", "V_morse"];

fn csv_error(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn io_error(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Formats a value with ten significant digits in scientific notation.
fn fmt_value(x: f64) -> String {
    format!("{x:.9e}")
}

/// Writes one row per sample under a header row.
pub fn emit_csv(samples: &[TrajectorySample], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_error(path))?;
    write_csv(samples, file).map_err(|e| match e {
        WriteError::Csv(source) => Error::Csv {
            path: path.to_path_buf(),
            source,
        },
        WriteError::Io(source) => Error::Io {
            path: path.to_path_buf(),
            source,
        },
    })
}

/// Failure of [`write_csv`] on an arbitrary writer.
#[derive(Debug)]
pub enum WriteError {
    Csv(csv::Error),
    Io(std::io::Error),
}

/// [`emit_csv`] into any writer.
pub fn write_csv<W: Write>(samples: &[TrajectorySample], writer: W) -> std::result::Result<(), WriteError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    w.write_record(CSV_HEADER).map_err(WriteError::Csv)?;
    for s in samples {
        let row = [s.t, s.psi, s.omega_e_norm, s.s_norm, s.tau_norm, s.energy, s.v_morse];
        w.write_record(row.iter().map(|&x| fmt_value(x)))
            .map_err(WriteError::Csv)?;
    }
    w.flush().map_err(WriteError::Io)
}

/// The CSV text of `samples` as bytes.
pub fn csv_bytes(samples: &[TrajectorySample]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_csv(samples, &mut buf).expect("writing to memory cannot fail");
    buf
}

pub fn read_csv(path: &Path) -> Result<Vec<TrajectorySample>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_error(path))?;
    let header = r.headers().map_err(csv_error(path))?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Config(format!(
            "{}: unexpected header {:?}",
            path.display(),
            header
        )));
    }
    let mut out = Vec::new();
    for record in r.records() {
        let record = record.map_err(csv_error(path))?;
        let v: Vec<f64> = record
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        out.push(TrajectorySample {
            t: v[0],
            psi: v[1],
            omega_e_norm: v[2],
            s_norm: v[3],
            tau_norm: v[4],
            energy: v[5],
            v_morse: v[6],
        });
    }
    Ok(out)
}

/// Writes a matplotlib script that reads the given CSVs (paths relative to the
/// script) and draws Ψ, ‖Ω_e‖, ‖τ‖ and energy in four stacked panels.
pub fn emit_plot_script(runs: &[(String, PathBuf)], path: &Path) -> Result<()> {
    let entries = runs
        .iter()
        .map(|(label, csv)| format!("    ({label:?}, {:?}),", csv.display().to_string()))
        .collect::<Vec<_>>()
        .join("\n");
    let script = format!(
        r#"#!/usr/bin/env python3
"""Closed-loop comparison plots. Usage: python3 {name} [output.png]"""
import csv
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
RUNS = [
{entries}
]
PANELS = [
    ("Psi", r"$\Psi(R_e)$", True),
    ("Omega_e_norm", r"$\|\Omega_e\|$ (rad/s)", True),
    ("tau_norm", r"$\|\tau\|$ (N m)", False),
    ("energy", r"$\sqrt{{\int \tau^T \tau\, dt}}$", False),
]


def load(path):
    with open(os.path.join(HERE, path), newline="") as f:
        rows = list(csv.DictReader(f))
    return {{key: [float(r[key]) for r in rows] for key in rows[0]}} if rows else None


def main():
    fig, axes = plt.subplots(len(PANELS), 1, sharex=True, figsize=(7, 10))
    for label, path in RUNS:
        data = load(path)
        if data is None:
            continue
        for ax, (column, title, log) in zip(axes, PANELS):
            values = data[column]
            if log:
                values = [max(v, 1e-16) for v in values]
            ax.plot(data["t"], values, label=label)
            ax.set_ylabel(title)
            if log:
                ax.set_yscale("log")
    axes[0].legend()
    axes[-1].set_xlabel("t (s)")
    fig.tight_layout()
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(HERE, "comparison.png")
    fig.savefig(out, dpi=150)


if __name__ == "__main__":
    main()
"#,
        name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
    );
    let mut f = File::create(path).map_err(io_error(path))?;
    f.write_all(script.as_bytes()).map_err(io_error(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(t: f64) -> TrajectorySample {
        TrajectorySample {
            t,
            psi: 1.0 - (0.428 * std::f64::consts::PI).cos() * t.exp(),
            omega_e_norm: 0.123456789012345,
            s_norm: 1e-300,
            tau_norm: 12345.678901234,
            energy: t.sqrt(),
            v_morse: -0.0,
        }
    }

    #[test]
    fn empty_csv_has_only_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        emit_csv(&[], &path).unwrap();
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            "t,Psi,Omega_e_norm,s_norm,tau_norm,energy,V_morse\n"
        );
        assert!(read_csv(&path).unwrap().is_empty());
    }

    #[test]
    fn csv_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.csv");
        let samples: Vec<_> = (0..50).map(|i| sample(i as f64 * 0.01)).collect();
        emit_csv(&samples, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.ends_with('\n'));
        let back = read_csv(&path).unwrap();
        assert_eq!(back.len(), samples.len());
        for (a, b) in samples.iter().zip(&back) {
            let pairs = [
                (a.t, b.t),
                (a.psi, b.psi),
                (a.omega_e_norm, b.omega_e_norm),
                (a.s_norm, b.s_norm),
                (a.tau_norm, b.tau_norm),
                (a.energy, b.energy),
                (a.v_morse, b.v_morse),
            ];
            for (x, y) in pairs {
                assert!((x - y).abs() <= 1e-9 * x.abs().max(f64::MIN_POSITIVE), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn io_errors_carry_the_path() {
        let path = Path::new("/nonexistent-dir/run.csv");
        let err = emit_csv(&[], path).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/run.csv"), "{err}");
        let err = emit_plot_script(&[], path).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir"), "{err}");
    }

    #[test]
    fn plot_script_lists_runs() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("plot.py");
        emit_plot_script(
            &[("GSMC".into(), "gsmc.csv".into()), ("LSF".into(), "lsf.csv".into())],
            &path,
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("(\"GSMC\", \"gsmc.csv\")"));
        assert!(text.contains("tau_norm"));
        assert!(text.contains("set_yscale"));
    }
}
