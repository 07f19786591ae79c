//! Self-validation: closed forms against the brute-force oracle, witness
//! identities, reconstruction round trips and limiting cases.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::io::{fmt_g, sidecar};
use crate::oracle::sampling::{random_density_matrix, random_populations, random_product_mixture, Sampler};
use crate::oracle::{eig_hermitian, log_partition_numeric, min_partial_transpose_eigenvalue, ppt_verdict, thermal_state_numeric};
use crate::quantifiers::{coherence_relative_entropy, concurrence_check, mixedness, mixedness_closed_form};
use crate::reconstruction::{
    forward_observables, mixedness_from_observables, mixedness_from_populations, observables_from_state,
    reconstruct_populations, DEFAULT_CONSISTENCY_TOL, DEFAULT_EPSILON_THETA,
};
use crate::spin::{critical_omega_sigma, EigenBasis, SpinParams};
use crate::sweep::Grid;
use crate::thermal::{partition_function, state_eigenvalues, thermal_density_matrix, DensityMatrix, Populations};
use crate::witness::{
    energy_witness_expectation, pauli_correlators, separability_conditions, singlet_state, witness_expectation,
    witness_fidelity_form, Separability,
};

pub const ORACLE_TOL: f64 = 1e-9;
pub const IDENTITY_TOL: f64 = 1e-12;
const RANDOM_STATES: usize = 1000;
const SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn within(name: &'static str, max_error: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Check { name, max_error, tolerance, passed: max_error <= tolerance, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!(
                "{} {:<34} max_error={:<20} tol={:<8} {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                fmt_g(c.max_error),
                fmt_g(c.tolerance),
                c.detail
            ));
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        s.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        s
    }

    pub fn to_json(&self) -> Value {
        sidecar("validation_report", json!({ "all_passed": self.all_passed(), "checks": self.checks }))
    }
}

/// The `20 × 20 × 3` comparison grid: `τ ∈ [0.05, 5]`, `ω_Σ ∈ [0, 6]`, `ω_δ ∈ {0, 1, 2.5}`.
pub fn oracle_grid() -> Vec<SpinParams<f64>> {
    let taus = Grid { start: 0.05, stop: 5.0, n: 20 }.points();
    let sums = Grid { start: 0.0, stop: 6.0, n: 20 }.points();
    let mut out = Vec::with_capacity(1200);
    for &wd in &[0.0, 1.0, 2.5] {
        for &ws in &sums {
            for &tau in &taus {
                out.push(SpinParams::from_sum_diff(ws, wd, 1.0, tau).expect("grid parameters are valid"));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, Default)]
struct OracleErrors {
    rho: f64,
    ln_z: f64,
    eigenvalues: f64,
    mixedness: f64,
}

fn oracle_errors(p: &SpinParams<f64>) -> Result<OracleErrors> {
    let closed = thermal_density_matrix(p)?;
    let numeric = thermal_state_numeric(p)?;
    let mut ev = state_eigenvalues(&closed)?.values;
    ev.sort_by(f64::total_cmp);
    let num_ev = eig_hermitian(numeric.matrix())?.values;
    Ok(OracleErrors {
        rho: (*closed.matrix() - *numeric.matrix()).max_abs(),
        ln_z: (partition_function(p)?.ln() - log_partition_numeric(p)?).abs(),
        eigenvalues: ev.iter().zip(num_ev).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max),
        mixedness: (mixedness_closed_form(p)? - mixedness(&numeric)).abs(),
    })
}

fn check_oracle_grid() -> Result<Vec<Check>> {
    let grid = oracle_grid();
    let mut worst = OracleErrors::default();
    for p in &grid {
        let e = oracle_errors(p)?;
        worst.rho = worst.rho.max(e.rho);
        worst.ln_z = worst.ln_z.max(e.ln_z);
        worst.eigenvalues = worst.eigenvalues.max(e.eigenvalues);
        worst.mixedness = worst.mixedness.max(e.mixedness);
    }
    let n = format!("{} grid points", grid.len());
    Ok(vec![
        Check::within("oracle_density_matrix", worst.rho, ORACLE_TOL, n.clone()),
        Check::within("oracle_partition_function", worst.ln_z, ORACLE_TOL, format!("{n}, |ln Z - ln Z_num| (relative error of Z)")),
        Check::within("oracle_state_eigenvalues", worst.eigenvalues, ORACLE_TOL, n.clone()),
        Check::within("oracle_mixedness_closed_form", worst.mixedness, ORACLE_TOL, n),
    ])
}

fn check_witness_forms() -> Result<Vec<Check>> {
    let mut rng = Sampler::seeded(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..RANDOM_STATES {
        let rho = random_density_matrix(&mut rng);
        let ws = 6.0 * rng.uniform();
        let wd = 3.0 * rng.uniform() - 1.5;
        let p = SpinParams::from_sum_diff(ws, wd, 1.0, 1.0)?;
        let a = witness_expectation(&rho);
        worst = worst.max((a - witness_fidelity_form(&rho)).abs()).max((a - energy_witness_expectation(&rho, &p)).abs());
    }

    let mut violations = 0usize;
    let mut min_separable_w = f64::INFINITY;
    for _ in 0..RANDOM_STATES {
        let k = 1 + (rng.uniform() * 4.0) as usize;
        let rho = random_product_mixture(&mut rng, k);
        let w = witness_expectation(&rho);
        if ppt_verdict(&rho)? == Separability::Separable {
            min_separable_w = min_separable_w.min(w);
            if w < 0.0 {
                violations += 1;
            }
        }
    }
    Ok(vec![
        Check::within("witness_three_forms", worst, IDENTITY_TOL, format!("{RANDOM_STATES} random states")),
        Check {
            name: "witness_soundness",
            max_error: violations as f64,
            tolerance: 0.0,
            passed: violations == 0,
            detail: format!("{RANDOM_STATES} separable mixtures, min <W> = {}", fmt_g(min_separable_w)),
        },
    ])
}

fn check_reconstruction() -> Result<Vec<Check>> {
    let theta = std::f64::consts::FRAC_PI_8;
    let mut rng = Sampler::seeded(SEED + 1);
    let mut worst: f64 = 0.0;
    for _ in 0..RANDOM_STATES {
        let pops = random_populations(&mut rng);
        let back =
            reconstruct_populations(&forward_observables(&pops, theta), theta, DEFAULT_EPSILON_THETA, DEFAULT_CONSISTENCY_TOL)?;
        worst = pops.0.iter().zip(back.0).fold(worst, |m, (a, b)| m.max((a - b).abs()));
    }
    let obs = forward_observables(&Populations([0.4, 0.3, 0.2, 0.1]), std::f64::consts::FRAC_PI_4);
    let rejected = reconstruct_populations(&obs, std::f64::consts::FRAC_PI_4, DEFAULT_EPSILON_THETA, DEFAULT_CONSISTENCY_TOL).is_err();
    Ok(vec![
        Check::within("reconstruction_round_trip", worst, IDENTITY_TOL, format!("{RANDOM_STATES} populations at theta = pi/8")),
        Check {
            name: "reconstruction_homonuclear_rejected",
            max_error: 0.0,
            tolerance: 0.0,
            passed: rejected,
            detail: "theta = pi/4 must raise a degeneracy error".into(),
        },
    ])
}

fn check_limits() -> Result<Vec<Check>> {
    let hot = SpinParams::from_sum_diff(1.0f64, 0.5, 1.0, 1e9)?;
    let rho = thermal_density_matrix(&hot)?;
    let hot_err = (mixedness(&rho) - 1.0).abs().max(coherence_relative_entropy(&rho)?);

    let mut pure_err: f64 = 0.0;
    for theta in [0.1, std::f64::consts::FRAC_PI_8, std::f64::consts::FRAC_PI_4] {
        let b = EigenBasis::new(theta);
        for i in 1..=4 {
            pure_err = pure_err.max(mixedness(&DensityMatrix::from_pure(&b.ket(i))?).abs());
        }
    }

    let singlet = DensityMatrix::<f64>::from_pure(&singlet_state())?;
    let c = pauli_correlators(&singlet);
    let singlet_err = (witness_expectation(&singlet) + 0.5)
        .abs()
        .max((c.xx + 1.0).abs())
        .max((c.yy + 1.0).abs())
        .max((c.zz + 1.0).abs())
        .max((concurrence_check(&singlet)? - 1.0).abs());

    let cross = SpinParams::from_sum_diff(critical_omega_sigma(1.0f64, 0.0)?, 0.0, 1.0, 0.01)?;
    let cross_err = (mixedness(&thermal_density_matrix(&cross)?) - 2.0 / 3.0).abs();

    Ok(vec![
        Check::within("limit_high_temperature", hot_err, ORACLE_TOL, "tau = 1e9: |M - 1| and R"),
        Check::within("limit_pure_eigenstates", pure_err, ORACLE_TOL, "M of each eigenstate"),
        Check::within("limit_singlet", singlet_err, ORACLE_TOL, "<W> = -1/2, C_aa = -1, concurrence 1"),
        Check::within("crossing_mixedness", cross_err, ORACLE_TOL, "homonuclear crossing, tau = 0.01: M = 2/3"),
    ])
}

fn check_separability() -> Result<Check> {
    let mut disagreements = 0usize;
    let mut undecidable = 0usize;
    let grid = oracle_grid();
    for p in &grid {
        let rho = thermal_density_matrix(p)?;
        if min_partial_transpose_eigenvalue(&rho)?.abs() < ORACLE_TOL {
            undecidable += 1;
            continue;
        }
        let eq = separability_conditions(&rho)?;
        let conc = if concurrence_check(&rho)? > 0.0 { Separability::Entangled } else { Separability::Separable };
        if eq != ppt_verdict(&rho)? || eq != conc {
            disagreements += 1;
        }
    }
    Ok(Check {
        name: "separability_agreement",
        max_error: disagreements as f64,
        tolerance: 0.0,
        passed: disagreements == 0,
        detail: format!(
            "{} grid points; {undecidable} with |min PT eigenvalue| < {} skipped",
            grid.len(),
            fmt_g(ORACLE_TOL)
        ),
    })
}

/// Observable-based mixedness against the eigenbasis-population form and
/// the full `(4/3)(1 − Tr ρ²)` on heteronuclear thermal states.
fn check_mixedness_forms() -> Result<Check> {
    let mut vs_pops: f64 = 0.0;
    let mut vs_state: f64 = 0.0;
    let mut n = 0;
    for p in oracle_grid().iter().filter(|p| p.derived().omega_delta != 0.0) {
        let rho = thermal_density_matrix(p)?;
        let theta = p.derived().theta;
        let obs = observables_from_state(&rho);
        let m_obs = mixedness_from_observables(&obs, theta, DEFAULT_EPSILON_THETA)?;
        let pops = reconstruct_populations(&obs, theta, DEFAULT_EPSILON_THETA, DEFAULT_CONSISTENCY_TOL)?;
        vs_pops = vs_pops.max((m_obs - mixedness_from_populations(&pops)).abs());
        vs_state = vs_state.max((m_obs - mixedness(&rho)).abs());
        n += 1;
    }
    Ok(Check::within(
        "mixedness_observables_vs_populations",
        vs_pops,
        ORACLE_TOL,
        format!("{n} thermal states; max |M_obs - (4/3)(1 - Tr rho^2)| = {}", fmt_g(vs_state)),
    ))
}

pub fn run_validation() -> Result<Report> {
    let mut checks = check_oracle_grid()?;
    checks.extend(check_witness_forms()?);
    checks.extend(check_reconstruction()?);
    checks.extend(check_limits()?);
    checks.push(check_separability()?);
    checks.push(check_mixedness_forms()?);
    Ok(Report { checks })
}
