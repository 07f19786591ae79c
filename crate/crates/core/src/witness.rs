//! Singlet entanglement witness `W = ½·I − |S⟩⟨S|` with `|S⟩ = (|αβ⟩ − |βα⟩)/√2`,
//! evaluated three ways (fidelity, Pauli correlators, coupling energy), the
//! X-state separability conditions, and `(τ, ω_δ)` phase diagrams.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{ket_from_real, pauli_pair, Ket, Mat4, Pauli};
use crate::oracle::ppt_verdict;
use crate::scalar::Real;
use crate::spin::{hamiltonian_matrix, zeeman_matrix, SpinParams};
use crate::thermal::{thermal_density_matrix, DensityMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessVerdict {
    EntangledDetected,
    NotDetected,
}

impl WitnessVerdict {
    /// Only a strictly negative expectation certifies entanglement.
    pub fn from_expectation<T: Real>(w: T) -> Self {
        if w < T::zero() {
            WitnessVerdict::EntangledDetected
        } else {
            WitnessVerdict::NotDetected
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            WitnessVerdict::EntangledDetected => "EntangledDetected",
            WitnessVerdict::NotDetected => "NotDetected",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Separability {
    Entangled,
    Separable,
}

impl Separability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Separability::Entangled => "Entangled",
            Separability::Separable => "Separable",
        }
    }
}

pub fn singlet_state<T: Real>() -> Ket<T> {
    let s = T::FRAC_1_SQRT_2();
    ket_from_real([T::zero(), s, -s, T::zero()])
}

/// `(I − σx⊗σx − σy⊗σy − σz⊗σz)/4`.
pub fn singlet_projector<T: Real>() -> Mat4<T> {
    (Mat4::identity()
        - pauli_pair(Pauli::X, Pauli::X)
        - pauli_pair(Pauli::Y, Pauli::Y)
        - pauli_pair(Pauli::Z, Pauli::Z))
    .scale(T::quarter())
}

/// `W = ½·I − |S⟩⟨S|`; spectrum `{−½, ½, ½, ½}`.
pub fn witness_operator<T: Real>() -> Mat4<T> {
    Mat4::identity().scale(T::half()) - singlet_projector()
}

/// Two-spin correlators `C_aa = Tr(ρ·σ_a⊗σ_a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PauliCorrelators<T> {
    pub xx: T,
    pub yy: T,
    pub zz: T,
}

impl<T: Real> PauliCorrelators<T> {
    pub fn sum(&self) -> T {
        self.xx + self.yy + self.zz
    }
}

pub fn pauli_correlators<T: Real>(rho: &DensityMatrix<T>) -> PauliCorrelators<T> {
    let c = |a| rho.matrix().trace_product(&pauli_pair(a, a)).re;
    PauliCorrelators { xx: c(Pauli::X), yy: c(Pauli::Y), zz: c(Pauli::Z) }
}

/// `⟨W⟩ = ¼(1 + Cxx + Cyy + Czz)`.
pub fn witness_expectation<T: Real>(rho: &DensityMatrix<T>) -> T {
    T::quarter() * (T::one() + pauli_correlators(rho).sum())
}

/// Singlet fidelity `⟨S|ρ|S⟩`.
pub fn singlet_fidelity<T: Real>(rho: &DensityMatrix<T>) -> T {
    rho.matrix().expectation(&singlet_state()).re
}

/// `⟨W⟩ = ½ − F(ρ, |S⟩⟨S|)`.
pub fn witness_fidelity_form<T: Real>(rho: &DensityMatrix<T>) -> T {
    T::half() - singlet_fidelity(rho)
}

/// `⟨W⟩ = ¼ + (⟨H⟩ − ⟨H_Z⟩)/J`. Valid for any state because
/// `H − H_Z = J·I₁·I₂` does not depend on the fields.
pub fn energy_witness_expectation<T: Real>(rho: &DensityMatrix<T>, p: &SpinParams<T>) -> T {
    let m = rho.matrix();
    let e_total = m.trace_product(&hamiltonian_matrix(p)).re;
    let e_zeeman = m.trace_product(&zeeman_matrix(p)).re;
    T::quarter() + (e_total - e_zeeman) / p.j_coupling()
}

/// Entangled iff `ρ₁₁ρ₄₄ < |ρ₂₃|²` or `ρ₂₂ρ₃₃ < |ρ₁₄|²` (strict; equality
/// is reported as separable).
pub fn separability_conditions<T: Real>(rho: &DensityMatrix<T>) -> Result<Separability> {
    rho.require_x()?;
    let r = |i, j| rho.element(i, j);
    let outer = r(1, 1).re * r(4, 4).re < r(2, 3).norm_sqr();
    let inner = r(2, 2).re * r(3, 3).re < r(1, 4).norm_sqr();
    Ok(if outer || inner { Separability::Entangled } else { Separability::Separable })
}

/// Margin of the X-state conditions: `max(|ρ₂₃|² − ρ₁₁ρ₄₄, |ρ₁₄|² − ρ₂₂ρ₃₃)`.
/// Zero means the state sits on the separability boundary.
pub fn separability_margin<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    rho.require_x()?;
    let r = |i, j| rho.element(i, j);
    Ok((r(2, 3).norm_sqr() - r(1, 1).re * r(4, 4).re).max(r(1, 4).norm_sqr() - r(2, 2).re * r(3, 3).re))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessReport<T> {
    pub expectation: T,
    pub fidelity: T,
    pub correlators: PauliCorrelators<T>,
    pub energy_form: T,
    pub verdict: WitnessVerdict,
    pub ppt_verdict: Separability,
}

pub fn witness_report<T: Real>(rho: &DensityMatrix<T>, p: &SpinParams<T>) -> Result<WitnessReport<T>> {
    let correlators = pauli_correlators(rho);
    let expectation = T::quarter() * (T::one() + correlators.sum());
    Ok(WitnessReport {
        expectation,
        fidelity: singlet_fidelity(rho),
        correlators,
        energy_form: energy_witness_expectation(rho, p),
        verdict: WitnessVerdict::from_expectation(expectation),
        ppt_verdict: ppt_verdict(rho)?,
    })
}

/// Parameters for field ratio `r = ω₁/ω₂` at detuning `ω_δ`:
/// `ω₂ = ω_δ/(r−1)`, `ω₁ = r·ω₂`, so `ω_Σ = ω_δ(r+1)/(r−1)`.
/// At `ω_δ = 0` every ratio maps to zero field.
pub fn field_ratio_params<T: Real>(r: T, omega_delta: T, j_coupling: T, tau: T) -> Result<SpinParams<T>> {
    if omega_delta == T::zero() {
        return SpinParams::new(T::zero(), T::zero(), j_coupling, tau);
    }
    if r == T::one() {
        return Err(Error::SingularFieldRatio { omega_delta: omega_delta.as_f64() });
    }
    let omega2 = omega_delta / (r - T::one());
    SpinParams::new(r * omega2, omega2, j_coupling, tau)
}

/// Sampling of the `(τ, ω_δ/J)` plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid<T> {
    /// Ascending, strictly positive.
    pub taus: Vec<T>,
    pub omega_deltas: Vec<T>,
}

impl<T: Real> PhaseGrid<T> {
    pub fn new(taus: Vec<T>, omega_deltas: Vec<T>) -> Result<Self> {
        if taus.is_empty() || omega_deltas.is_empty() {
            return Err(Error::InvalidGrid("phase grid needs at least one tau and one omega_delta".into()));
        }
        if taus.iter().any(|&t| !(t > T::zero())) {
            return Err(Error::InvalidGrid("phase grid temperatures must be positive".into()));
        }
        if taus.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidGrid("phase grid temperatures must be strictly ascending".into()));
        }
        Ok(PhaseGrid { taus, omega_deltas })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellOutcome<T> {
    Evaluated { omega_sigma: T, expectation: T, verdict: WitnessVerdict, ppt_verdict: Separability },
    /// `r = 1` at nonzero detuning.
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseCell<T> {
    pub tau: T,
    pub omega_delta: T,
    pub outcome: CellOutcome<T>,
}

impl<T: Real> PhaseCell<T> {
    pub fn is_detected(&self) -> bool {
        matches!(self.outcome, CellOutcome::Evaluated { verdict: WitnessVerdict::EntangledDetected, .. })
    }
}

/// Point on the `⟨W⟩ = 0` contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint<T> {
    pub omega_delta: T,
    pub tau: T,
    pub expectation: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiagram<T> {
    pub r: T,
    pub grid: PhaseGrid<T>,
    /// Column-major: all `τ` for the first `ω_δ`, then the next column.
    pub cells: Vec<PhaseCell<T>>,
    pub boundary: Vec<BoundaryPoint<T>>,
}

impl<T: Real> PhaseDiagram<T> {
    pub fn column(&self, k: usize) -> &[PhaseCell<T>] {
        let n = self.grid.taus.len();
        &self.cells[k * n..(k + 1) * n]
    }

    pub fn detected_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_detected()).count()
    }

    pub fn singular_count(&self) -> usize {
        self.cells.iter().filter(|c| matches!(c.outcome, CellOutcome::Singular)).count()
    }
}

fn thermal_witness<T: Real>(r: T, omega_delta: T, tau: T) -> Result<(SpinParams<T>, T)> {
    let p = field_ratio_params(r, omega_delta, T::one(), tau)?;
    let rho = thermal_density_matrix(&p)?;
    Ok((p, energy_witness_expectation(&rho, &p)))
}

fn evaluate_cell<T: Real>(r: T, omega_delta: T, tau: T) -> Result<PhaseCell<T>> {
    let outcome = match field_ratio_params(r, omega_delta, T::one(), tau) {
        Err(Error::SingularFieldRatio { .. }) => CellOutcome::Singular,
        Err(e) => return Err(e),
        Ok(p) => {
            let rho = thermal_density_matrix(&p)?;
            let expectation = energy_witness_expectation(&rho, &p);
            CellOutcome::Evaluated {
                omega_sigma: p.derived().omega_sigma,
                expectation,
                verdict: WitnessVerdict::from_expectation(expectation),
                ppt_verdict: ppt_verdict(&rho)?,
            }
        }
    };
    Ok(PhaseCell { tau, omega_delta, outcome })
}

/// Bisects `⟨W⟩(τ)` on `[lo, hi]`, where the sign differs at the ends.
fn bisect_boundary<T: Real>(r: T, omega_delta: T, mut lo: T, mut hi: T) -> Result<BoundaryPoint<T>> {
    let w_lo = thermal_witness(r, omega_delta, lo)?.1;
    let neg_at_lo = w_lo < T::zero();
    for _ in 0..200 {
        if hi - lo <= T::tol(1e-12) * hi.max(T::one()) {
            break;
        }
        let mid = T::half() * (lo + hi);
        let w = thermal_witness(r, omega_delta, mid)?.1;
        if (w < T::zero()) == neg_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tau = T::half() * (lo + hi);
    let expectation = thermal_witness(r, omega_delta, tau)?.1;
    Ok(BoundaryPoint { omega_delta, tau, expectation })
}

/// Evaluates the thermal witness at every grid cell for field ratio `r`
/// (`J = 1`) and locates the `⟨W⟩ = 0` contour by bisection in `τ` wherever
/// the verdict changes between neighbouring temperatures of a column.
pub fn phase_diagram<T: Real>(grid: &PhaseGrid<T>, r: T) -> Result<PhaseDiagram<T>> {
    if !r.is_finite() {
        return Err(Error::InvalidParameter(format!("field ratio must be finite (got {r})")));
    }
    let nt = grid.taus.len();
    let cells = (0..grid.omega_deltas.len() * nt)
        .into_par_iter()
        .map(|idx| evaluate_cell(r, grid.omega_deltas[idx / nt], grid.taus[idx % nt]))
        .collect::<Result<Vec<_>>>()?;

    let boundary = (0..grid.omega_deltas.len())
        .into_par_iter()
        .map(|k| {
            let col = &cells[k * nt..(k + 1) * nt];
            let mut pts = Vec::new();
            for pair in col.windows(2) {
                if let (
                    CellOutcome::Evaluated { expectation: a, .. },
                    CellOutcome::Evaluated { expectation: b, .. },
                ) = (pair[0].outcome, pair[1].outcome)
                {
                    if (a < T::zero()) != (b < T::zero()) {
                        pts.push(bisect_boundary(r, grid.omega_deltas[k], pair[0].tau, pair[1].tau)?);
                    }
                }
            }
            Ok(pts)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    Ok(PhaseDiagram { r, grid: grid.clone(), cells, boundary })
}
