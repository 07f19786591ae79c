//! CSV/JSON serialization for sweeps, phase diagrams, spectra and batch
//! reconstruction. Numbers are written with 12 significant digits so
//! identical inputs give byte-identical files.

use std::io::{Read, Write};

use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::error::Error;
use crate::reconstruction::{reconstruct, NmrObservables};
use crate::spectrum::ScenarioSpectrum;
use crate::witness::{CellOutcome, PhaseDiagram};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("line {line}: {source}")]
    Rejected { line: u64, source: Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `printf("%.12g")`.
pub fn fmt_g(x: f64) -> String {
    const SIG: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (SIG - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIG).contains(&exp) {
        let fixed = format!("{:.*}", (SIG - 1 - exp) as usize, x);
        trim_fraction(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_fraction(mantissa), sign, exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Header plus pre-formatted rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvTable {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: Vec<&'static str>) -> Self {
        CsvTable { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, w: W) -> Result<(), IoError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for r in &self.rows {
            out.write_record(r)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

/// Wraps a JSON payload with its kind and the schema version.
pub fn sidecar(kind: &str, payload: Value) -> Value {
    json!({ "schema_version": SCHEMA_VERSION, "kind": kind, "data": payload })
}

pub fn phase_grid_table(pd: &PhaseDiagram<f64>) -> CsvTable {
    let mut t = CsvTable::new(vec!["tau", "omega_delta", "omega_sigma", "witness", "verdict", "ppt_verdict"]);
    for c in &pd.cells {
        let row = match c.outcome {
            CellOutcome::Evaluated { omega_sigma, expectation, verdict, ppt_verdict } => vec![
                fmt_g(c.tau),
                fmt_g(c.omega_delta),
                fmt_g(omega_sigma),
                fmt_g(expectation),
                verdict.as_str().into(),
                ppt_verdict.as_str().into(),
            ],
            CellOutcome::Singular => {
                vec![fmt_g(c.tau), fmt_g(c.omega_delta), String::new(), String::new(), "Singular".into(), "Singular".into()]
            }
        };
        t.push(row);
    }
    t
}

pub fn boundary_table(pd: &PhaseDiagram<f64>) -> CsvTable {
    let mut t = CsvTable::new(vec!["omega_delta", "tau", "witness"]);
    for b in &pd.boundary {
        t.push(vec![fmt_g(b.omega_delta), fmt_g(b.tau), fmt_g(b.expectation)]);
    }
    t
}

pub fn spectrum_table(s: &ScenarioSpectrum<f64>) -> CsvTable {
    let mut t = CsvTable::new(vec!["frequency", "intensity"]);
    for (f, i) in s.trace.frequency_axis.iter().zip(&s.trace.intensity) {
        t.push(vec![fmt_g(*f), fmt_g(*i)]);
    }
    t
}

pub fn spectrum_lines_json(s: &ScenarioSpectrum<f64>, flip_angle: f64) -> Value {
    let lines: Vec<Value> = s
        .lines
        .iter()
        .map(|l| {
            json!({
                "from_level": l.from_level,
                "to_level": l.to_level,
                "label": l.label(),
                "frequency": l.frequency,
                "amplitude": l.amplitude,
            })
        })
        .collect();
    sidecar(
        "spectrum_lines",
        json!({
            "scenario": s.scenario.as_str(),
            "theta_deg": s.theta.to_degrees(),
            "flip_angle_deg": flip_angle.to_degrees(),
            "linewidth": s.trace.linewidth,
            "lines": lines,
        }),
    )
}

#[derive(Debug, Deserialize)]
struct RawObservableRow {
    p1z: f64,
    p2z: f64,
    p1z2z: f64,
    theta_deg: f64,
}

/// One validated input row of a reconstruction batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableRow {
    pub line: u64,
    pub observables: NmrObservables<f64>,
    pub theta_deg: f64,
}

/// Reads `p1z,p2z,p1z2z,theta_deg` rows. Malformed rows and observables
/// outside `[−1 − tol, 1 + tol]` abort with the offending line number.
pub fn read_observables<R: Read>(input: R, tol: f64) -> Result<Vec<ObservableRow>, IoError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers()?.clone();
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| IoError::Malformed {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let raw: RawObservableRow = rec.deserialize(Some(&headers)).map_err(|e| IoError::Malformed {
            line,
            message: match e.kind() {
                csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
                _ => e.to_string(),
            },
        })?;
        let observables =
            NmrObservables::new(raw.p1z, raw.p2z, raw.p1z2z, tol).map_err(|source| IoError::Rejected { line, source })?;
        if !raw.theta_deg.is_finite() {
            return Err(IoError::Malformed { line, message: format!("theta_deg must be finite (got {})", raw.theta_deg) });
        }
        rows.push(ObservableRow { line, observables, theta_deg: raw.theta_deg });
    }
    Ok(rows)
}

/// Per-row reconstruction. Degenerate-angle and inconsistent rows are kept
/// with a status instead of aborting the batch.
pub fn reconstruction_table(rows: &[ObservableRow], epsilon_theta: f64, tol: f64) -> CsvTable {
    let mut t = CsvTable::new(vec![
        "line",
        "p1z",
        "p2z",
        "p1z2z",
        "theta_deg",
        "p1",
        "p2",
        "p3",
        "p4",
        "mixedness_observables",
        "mixedness_populations",
        "mixedness_difference",
        "condition_number",
        "status",
    ]);
    for r in rows {
        let o = r.observables;
        let mut row = vec![r.line.to_string(), fmt_g(o.p1z), fmt_g(o.p2z), fmt_g(o.p1z2z), fmt_g(r.theta_deg)];
        match reconstruct(&o, r.theta_deg.to_radians(), epsilon_theta, tol) {
            Ok(rec) => {
                row.extend(rec.populations.iter().map(|&p| fmt_g(p)));
                row.extend([
                    fmt_g(rec.mixedness_observables),
                    fmt_g(rec.mixedness_populations),
                    fmt_g(rec.mixedness_observables - rec.mixedness_populations),
                    fmt_g(rec.condition_number),
                    "ok".into(),
                ]);
            }
            Err(e) => {
                let status = match e {
                    Error::HomonuclearDegeneracy { .. } => "homonuclear_degeneracy",
                    Error::InconsistentObservables { .. } => "inconsistent_observables",
                    _ => "error",
                };
                row.extend(std::iter::repeat_n(String::new(), 8));
                row.push(status.into());
            }
        }
        t.push(row);
    }
    t
}
