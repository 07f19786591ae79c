use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde_json::{json, Value};
use twospin::io::{
    boundary_table, fmt_g, phase_grid_table, read_observables, reconstruction_table, sidecar, spectrum_lines_json,
    spectrum_table, CsvTable, IoError,
};
use twospin::quantifiers::{coherence_relative_entropy, concurrence_check, mixedness, purity};
use twospin::reconstruction::{DEFAULT_CONSISTENCY_TOL, DEFAULT_EPSILON_THETA};
use twospin::spectrum::{scenario_spectra, ScenarioSet, TraceOptions, DEFAULT_FLIP_ANGLE_DEG, DEFAULT_LINEWIDTH, DEFAULT_POINTS, SCENARIO_TAU};
use twospin::sweep::{run_sweep, Grid, SweepAxis, SweepBase, SweepQuantity, SweepSpec};
use twospin::thermal::{ground_regime, partition_function, thermal_density_matrix, zero_temperature_state, GroundRegime, Populations};
use twospin::validate::run_validation;
use twospin::witness::{self, separability_conditions, witness_expectation, witness_report, CellOutcome, PhaseGrid};
use twospin::SpinParams;

use crate::{AxisArg, CliError, PhaseArgs, PointArgs, QuantityArg, ReconstructArgs, SpectraArgs, SweepArgs};

fn write_failed(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::failed(format!("{}: {e}", path.display()))
}

fn write_table(table: &CsvTable, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| write_failed(p, e))?;
            table.write_to(BufWriter::new(f)).map_err(|e| write_failed(p, e))
        }
        None => emit(&table.to_csv_string()),
    }
}

fn write_json(value: &Value, path: &Path) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
    text.push('\n');
    fs::write(path, text).map_err(|e| write_failed(path, e))
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<(), CliError> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::failed(e.to_string())),
        _ => Ok(()),
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn point(a: &PointArgs, as_json: bool) -> Result<ExitCode, CliError> {
    let tau = a.tau.ok_or_else(|| CliError::invalid("--tau is required"))?;
    let j = a.j.unwrap_or(1.0);
    let ws = a.omega_sigma.unwrap_or(1.0);
    let wd = a.omega_delta.unwrap_or(0.0);
    let deg_tol = a.degeneracy_tol.unwrap_or(1e-9);
    if !(deg_tol >= 0.0 && deg_tol.is_finite()) {
        return Err(CliError::invalid(format!("--degeneracy-tol must be finite and >= 0 (got {deg_tol})")));
    }
    let p = SpinParams::from_sum_diff(ws * j, wd * j, j, tau)?;
    let d = p.derived();
    let z = partition_function(&p)?;
    let pops = Populations::thermal(&p)?;
    let rho = thermal_density_matrix(&p)?;
    let w = witness_report(&rho, &p)?;
    let el = |i, k| rho.element(i, k).re;
    let regime = match ground_regime(&p, deg_tol) {
        GroundRegime::Low => "low",
        GroundRegime::Crossing => "crossing",
        GroundRegime::High => "high",
    };
    let w_ground = witness_expectation(&zero_temperature_state(&p, deg_tol));

    let report = json!({
        "params": { "omega_sigma": ws, "omega_delta": wd, "j": j, "tau": tau,
                    "omega1": p.omega1(), "omega2": p.omega2() },
        "derived": { "d_gap": d.d_gap, "theta_deg": d.theta.to_degrees(), "sin_2theta": d.sin_2theta },
        "energies": p.energy_levels().e,
        "ln_z": z.ln(),
        "z": z.value(),
        "populations": pops.0,
        "rho": { "rho11": el(1, 1), "rho22": el(2, 2), "rho33": el(3, 3), "rho44": el(4, 4), "rho23": el(2, 3) },
        "coherence": coherence_relative_entropy(&rho)?,
        "mixedness": mixedness(&rho),
        "purity": purity(&rho),
        "witness": {
            "expectation": w.expectation,
            "fidelity_form": 0.5 - w.fidelity,
            "pauli_form": w.expectation,
            "energy_form": w.energy_form,
            "fidelity": w.fidelity,
            "cxx": w.correlators.xx, "cyy": w.correlators.yy, "czz": w.correlators.zz,
            "verdict": w.verdict.as_str(),
            "ppt_verdict": w.ppt_verdict.as_str(),
        },
        "separability": separability_conditions(&rho)?.as_str(),
        "concurrence": concurrence_check(&rho)?,
        "ground_regime": regime,
        "ground_state_witness": w_ground,
    });

    if as_json {
        emit(&(serde_json::to_string_pretty(&sidecar("point", report)).expect("json values serialize") + "\n"))?;
        return Ok(ExitCode::SUCCESS);
    }
    let g = |v: &Value| v.as_f64().map_or_else(|| v.to_string(), fmt_g);
    let list = |v: &Value| v.as_array().map(|a| a.iter().map(g).collect::<Vec<_>>().join(" ")).unwrap_or_default();
    let r = &report;
    let wr = &r["witness"];
    let lines = [
        format!("omega_sigma/J   {}", g(&r["params"]["omega_sigma"])),
        format!("omega_delta/J   {}", g(&r["params"]["omega_delta"])),
        format!("tau             {}", g(&r["params"]["tau"])),
        format!("D/J             {}", fmt_g(d.d_gap / j)),
        format!("theta_deg       {}", g(&r["derived"]["theta_deg"])),
        format!("energies/J      {}", p.energy_levels().e.map(|e| fmt_g(e / j)).join(" ")),
        format!("ln_Z            {}", g(&r["ln_z"])),
        format!("Z               {}", fmt_g(z.value())),
        format!("populations     {}", list(&r["populations"])),
        format!(
            "rho             rho11={} rho22={} rho33={} rho44={} rho23={}",
            g(&r["rho"]["rho11"]),
            g(&r["rho"]["rho22"]),
            g(&r["rho"]["rho33"]),
            g(&r["rho"]["rho44"]),
            g(&r["rho"]["rho23"])
        ),
        format!("coherence_R     {}", g(&r["coherence"])),
        format!("mixedness_M     {}", g(&r["mixedness"])),
        format!("purity          {}", g(&r["purity"])),
        format!("witness         {}", g(&wr["expectation"])),
        format!("  fidelity_form {}", g(&wr["fidelity_form"])),
        format!("  pauli_form    {}", g(&wr["pauli_form"])),
        format!("  energy_form   {}", g(&wr["energy_form"])),
        format!("  correlators   cxx={} cyy={} czz={}", g(&wr["cxx"]), g(&wr["cyy"]), g(&wr["czz"])),
        format!("verdict         {}", w.verdict.as_str()),
        format!("ppt_verdict     {}", w.ppt_verdict.as_str()),
        format!("separability    {}", r["separability"].as_str().unwrap_or_default()),
        format!("concurrence     {}", g(&r["concurrence"])),
        format!("ground_regime   {regime} (tau -> 0 witness {})", fmt_g(w_ground)),
    ];
    emit(&(lines.join("\n") + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

pub fn sweep(a: &SweepArgs) -> Result<ExitCode, CliError> {
    let quantity = match a.quantity.ok_or_else(|| CliError::invalid("--quantity is required"))? {
        QuantityArg::Coherence => SweepQuantity::Coherence,
        QuantityArg::Mixedness => SweepQuantity::Mixedness,
        QuantityArg::Witness => SweepQuantity::Witness,
    };
    let (axis, start, stop) = match a.axis.ok_or_else(|| CliError::invalid("--axis is required"))? {
        AxisArg::Tau => (SweepAxis::Tau, 0.05, 5.0),
        AxisArg::OmegaSigma => (SweepAxis::OmegaSigma, 0.0, 6.0),
    };
    let grid = Grid::new(a.start.unwrap_or(start), a.stop.unwrap_or(stop), a.points.unwrap_or(201))?;
    let base = SweepBase {
        tau: a.tau.unwrap_or(0.5),
        omega_sigma: a.omega_sigma.unwrap_or(1.0),
        omega_delta: a.omega_delta.unwrap_or(0.0),
    };
    let spec = SweepSpec { quantity, axis, base, grid };
    let result = run_sweep(&spec)?;
    let table = result.table();
    write_table(&table, a.output.as_deref())?;
    if let Some(path) = &a.output {
        let meta = sidecar("sweep", json!({ "spec": spec, "columns": table.header, "rows": table.rows.len() }));
        write_json(&meta, &path.with_extension("json"))?;
    }
    Ok(ExitCode::SUCCESS)
}

pub fn phase_diagram(a: &PhaseArgs) -> Result<ExitCode, CliError> {
    let r = a.r.unwrap_or(-1.0);
    let taus = Grid::new(a.tau_min.unwrap_or(0.02), a.tau_max.unwrap_or(3.0), a.tau_points.unwrap_or(150))?.points();
    let wds = Grid::new(
        a.omega_delta_min.unwrap_or(0.0),
        a.omega_delta_max.unwrap_or(5.0),
        a.omega_delta_points.unwrap_or(101),
    )?
    .points();
    if r == 1.0 && wds.iter().any(|&w| w != 0.0) {
        return Err(CliError::invalid(
            "r = 1 means equal Larmor frequencies, so omega_delta must be 0; \
             the mapping omega2 = omega_delta/(r - 1) is singular for every nonzero omega_delta in the grid",
        ));
    }
    let grid = PhaseGrid::new(taus, wds)?;
    let pd = witness::phase_diagram(&grid, r)?;
    let prefix = a.output.clone().unwrap_or_else(|| PathBuf::from("phase"));
    let grid_path = with_suffix(&prefix, "_grid.csv");
    let boundary_path = with_suffix(&prefix, "_boundary.csv");
    write_table(&phase_grid_table(&pd), Some(&grid_path))?;
    write_table(&boundary_table(&pd), Some(&boundary_path))?;

    let hottest_detected = pd
        .cells
        .iter()
        .filter(|c| c.is_detected())
        .map(|c| c.tau)
        .fold(f64::NEG_INFINITY, f64::max);
    let max_boundary_residual = pd.boundary.iter().map(|b| b.expectation.abs()).fold(0.0, f64::max);
    let ppt_only = pd
        .cells
        .iter()
        .filter(|c| {
            matches!(c.outcome, CellOutcome::Evaluated { verdict, ppt_verdict, .. }
                if verdict == twospin::WitnessVerdict::NotDetected && ppt_verdict == twospin::Separability::Entangled)
        })
        .count();
    let summary = json!({
        "r": r,
        "tau_points": grid.taus.len(),
        "omega_delta_points": grid.omega_deltas.len(),
        "cells": pd.cells.len(),
        "detected": pd.detected_count(),
        "singular": pd.singular_count(),
        "ppt_entangled_not_detected": ppt_only,
        "boundary_points": pd.boundary.len(),
        "max_boundary_residual": max_boundary_residual,
        "hottest_detected_tau": if hottest_detected.is_finite() { json!(hottest_detected) } else { Value::Null },
        "grid_csv": grid_path,
        "boundary_csv": boundary_path,
    });
    write_json(&sidecar("phase_diagram", summary.clone()), &with_suffix(&prefix, ".json"))?;
    emit(&format!(
        "r={} cells={} detected={} singular={} ppt_entangled_not_detected={} boundary_points={} max_boundary_residual={}\n",
        fmt_g(r),
        pd.cells.len(),
        pd.detected_count(),
        pd.singular_count(),
        ppt_only,
        pd.boundary.len(),
        fmt_g(max_boundary_residual)
    ))?;
    Ok(ExitCode::SUCCESS)
}

pub fn spectra(a: &SpectraArgs) -> Result<ExitCode, CliError> {
    let thetas = a.theta.clone().unwrap_or_else(|| vec![45.0, 30.0, 10.0]);
    if thetas.is_empty() {
        return Err(CliError::invalid("--theta needs at least one angle"));
    }
    let opts = TraceOptions {
        flip_angle: a.flip_angle.unwrap_or(DEFAULT_FLIP_ANGLE_DEG).to_radians(),
        linewidth: a.linewidth.unwrap_or(DEFAULT_LINEWIDTH),
        n_points: a.points.unwrap_or(DEFAULT_POINTS),
    };
    let tau = a.tau.unwrap_or(SCENARIO_TAU);
    let dir = a.output_dir.clone().unwrap_or_else(|| PathBuf::from("spectra"));

    let mut all = Vec::new();
    for &deg in &thetas {
        let set = ScenarioSet::for_mixing_angle(deg.to_radians(), tau)?;
        all.push((deg, scenario_spectra(&set, &opts)?));
    }
    fs::create_dir_all(&dir).map_err(|e| write_failed(&dir, e))?;
    let mut out = String::from("theta_deg,scenario,line,frequency,amplitude\n");
    for (deg, spectra) in &all {
        for s in spectra {
            let stem = format!("theta_{}_{}", fmt_g(*deg), s.scenario.as_str());
            write_table(&spectrum_table(s), Some(&dir.join(format!("{stem}.csv"))))?;
            write_json(&spectrum_lines_json(s, opts.flip_angle), &dir.join(format!("{stem}.json")))?;
            for l in &s.lines {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt_g(*deg),
                    s.scenario.as_str(),
                    l.label(),
                    fmt_g(l.frequency),
                    fmt_g(l.amplitude)
                ));
            }
        }
    }
    emit(&out)?;
    Ok(ExitCode::SUCCESS)
}

pub fn reconstruct(a: &ReconstructArgs) -> Result<ExitCode, CliError> {
    let input = a.input.as_ref().ok_or_else(|| CliError::invalid("--input is required"))?;
    let tol = a.tol.unwrap_or(DEFAULT_CONSISTENCY_TOL);
    let eps = a.epsilon_theta.unwrap_or(DEFAULT_EPSILON_THETA);
    if !(tol >= 0.0 && eps >= 0.0) {
        return Err(CliError::invalid("--tol and --epsilon-theta must be non-negative"));
    }
    let file = File::open(input).map_err(|e| CliError::invalid(format!("{}: {e}", input.display())))?;
    let rows = read_observables(file, tol).map_err(|e| match e {
        IoError::Io(_) => CliError::failed(format!("{}: {e}", input.display())),
        _ => CliError::invalid(format!("{}: {e}", input.display())),
    })?;
    write_table(&reconstruction_table(&rows, eps, tol), a.output.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

pub fn validate(as_json: bool) -> Result<ExitCode, CliError> {
    let report = run_validation().map_err(|e| CliError::failed(e.to_string()))?;
    if as_json {
        emit(&(serde_json::to_string_pretty(&report.to_json()).expect("json values serialize") + "\n"))?;
    } else {
        emit(&report.render())?;
    }
    Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
