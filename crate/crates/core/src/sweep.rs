//! One-dimensional parameter sweeps (`J = 1`), evaluated in parallel and
//! returned in grid order.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::{fmt_g, CsvTable};
use crate::quantifiers::{coherence_relative_entropy, mixedness, mixedness_closed_form, purity};
use crate::spin::SpinParams;
use crate::thermal::thermal_density_matrix;
use crate::witness::witness_report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepQuantity {
    Coherence,
    Mixedness,
    Witness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepAxis {
    Tau,
    OmegaSigma,
}

/// `n` points from `start` to `stop` inclusive, `start + (stop − start)·i/(n − 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points (got {n})")));
        }
        if !(start.is_finite() && stop.is_finite()) || start == stop {
            return Err(Error::InvalidGrid(format!("bounds must be finite and distinct (got {start}..{stop})")));
        }
        Ok(Grid { start, stop, n })
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            return self.stop;
        }
        self.start + (self.stop - self.start) * i as f64 / (self.n - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start).abs() / (self.n - 1) as f64
    }
}

/// Parameters held fixed; the swept one is overwritten per point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepBase {
    pub tau: f64,
    pub omega_sigma: f64,
    pub omega_delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSpec {
    pub quantity: SweepQuantity,
    pub axis: SweepAxis,
    pub base: SweepBase,
    pub grid: Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub tau: f64,
    pub omega_sigma: f64,
    pub omega_delta: f64,
    pub values: Vec<f64>,
    pub labels: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

impl SweepQuantity {
    pub fn numeric_columns(&self) -> &'static [&'static str] {
        match self {
            SweepQuantity::Coherence => &["coherence"],
            SweepQuantity::Mixedness => &["mixedness", "mixedness_closed_form", "purity"],
            SweepQuantity::Witness => &["witness", "fidelity", "cxx", "cyy", "czz", "energy_form"],
        }
    }

    pub fn label_columns(&self) -> &'static [&'static str] {
        match self {
            SweepQuantity::Witness => &["verdict", "ppt_verdict"],
            _ => &[],
        }
    }
}

fn evaluate(quantity: SweepQuantity, p: &SpinParams<f64>) -> Result<(Vec<f64>, Vec<&'static str>)> {
    let rho = thermal_density_matrix(p)?;
    Ok(match quantity {
        SweepQuantity::Coherence => (vec![coherence_relative_entropy(&rho)?], vec![]),
        SweepQuantity::Mixedness => (vec![mixedness(&rho), mixedness_closed_form(p)?, purity(&rho)], vec![]),
        SweepQuantity::Witness => {
            let w = witness_report(&rho, p)?;
            (
                vec![w.expectation, w.fidelity, w.correlators.xx, w.correlators.yy, w.correlators.zz, w.energy_form],
                vec![w.verdict.as_str(), w.ppt_verdict.as_str()],
            )
        }
    })
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    let rows = spec
        .grid
        .points()
        .into_par_iter()
        .map(|x| {
            let mut b = spec.base;
            match spec.axis {
                SweepAxis::Tau => b.tau = x,
                SweepAxis::OmegaSigma => b.omega_sigma = x,
            }
            let p = SpinParams::from_sum_diff(b.omega_sigma, b.omega_delta, 1.0, b.tau)?;
            let (values, labels) = evaluate(spec.quantity, &p)?;
            Ok(SweepRow { tau: b.tau, omega_sigma: b.omega_sigma, omega_delta: b.omega_delta, values, labels })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { spec: *spec, rows })
}

impl SweepResult {
    pub fn table(&self) -> CsvTable {
        let q = self.spec.quantity;
        let mut header = vec!["tau", "omega_sigma", "omega_delta"];
        header.extend(q.numeric_columns());
        header.extend(q.label_columns());
        let mut t = CsvTable::new(header);
        for r in &self.rows {
            let mut row = vec![fmt_g(r.tau), fmt_g(r.omega_sigma), fmt_g(r.omega_delta)];
            row.extend(r.values.iter().map(|&v| fmt_g(v)));
            row.extend(r.labels.iter().map(|s| s.to_string()));
            t.push(row);
        }
        t
    }

    /// Values of the first numeric column, in grid order.
    pub fn primary(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.values[0]).collect()
    }

    /// Swept coordinate and value at the maximum of the first numeric column.
    pub fn argmax(&self) -> (f64, f64) {
        let axis = self.spec.axis;
        self.rows
            .iter()
            .map(|r| (if axis == SweepAxis::Tau { r.tau } else { r.omega_sigma }, r.values[0]))
            .fold((f64::NAN, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
    }
}
