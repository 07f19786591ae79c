//! Boltzmann thermal state of the two-spin system: partition function,
//! eigenstate populations, the product-basis density matrix and its
//! closed-form spectrum, plus the zero-temperature limit states.

use crate::error::{Error, Result};
use crate::matrix::{Ket, Mat4};
use crate::oracle::eig_hermitian;
use crate::scalar::{ln_cosh, Real};
use crate::spin::{EigenBasis, SpinParams};

/// Default width (in units of `J`) within which two levels count as degenerate at `τ = 0`.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-9;

/// Below this `τ` the thermal state is replaced by its exact `τ → 0⁺` limit.
pub const NEAR_ZERO_TAU: f64 = 1e-6;

/// `Z = exp(log_scale) · shifted_sum`, kept split so that `ln Z` stays finite
/// when `Z` itself would overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionFunction<T> {
    pub log_scale: T,
    pub shifted_sum: T,
}

impl<T: Real> PartitionFunction<T> {
    pub fn ln(&self) -> T {
        self.log_scale + self.shifted_sum.ln()
    }

    /// `Z` itself; may be `inf` at very low temperature.
    pub fn value(&self) -> T {
        self.log_scale.exp() * self.shifted_sum
    }
}

/// `Z = 2·e^{βJ/4}·(e^{−βJ/2}·cosh(βω_Σ/2) + cosh(βD/2))`, evaluated through
/// log-cosh so that no intermediate overflows.
pub fn partition_function<T: Real>(p: &SpinParams<T>) -> Result<PartitionFunction<T>> {
    if !(p.tau() > T::zero()) {
        return Err(Error::NonPositiveTemperature { tau: p.tau().as_f64() });
    }
    let beta = p.beta();
    let j = p.j_coupling();
    let d = p.derived();
    let h = T::half();
    let a = -(beta * j * h) + ln_cosh(beta * d.omega_sigma * h);
    let b = ln_cosh(beta * d.d_gap * h);
    let m = a.max(b);
    Ok(PartitionFunction {
        log_scale: T::LN_2() + beta * j * T::quarter() + m,
        shifted_sum: (a - m).exp() + (b - m).exp(),
    })
}

/// Occupation probabilities `p₁..p₄` of the eigenstates φ₁..φ₄.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Populations<T>(pub [T; 4]);

impl<T: Real> Populations<T> {
    /// Accepts values within `1e-12` of the probability simplex.
    pub fn new(p: [T; 4]) -> Result<Self> {
        let tol = T::tol(1e-12);
        if p.iter().any(|&x| !(x >= -tol)) {
            return Err(Error::InvalidParameter(format!("populations must be non-negative: {p:?}")));
        }
        let s: T = p.iter().copied().sum();
        if (s - T::one()).abs() > tol {
            return Err(Error::InvalidParameter(format!("populations must sum to 1 (sum = {s})")));
        }
        Ok(Populations(p))
    }

    /// Boltzmann weights `e^{−βEᵢ}/Z`.
    pub fn thermal(p: &SpinParams<T>) -> Result<Self> {
        let z = partition_function(p)?;
        let ln_z = z.ln();
        let beta = p.beta();
        Ok(Populations(p.energy_levels().e.map(|e| (-(beta * e) - ln_z).exp())))
    }

    /// 1-based accessor.
    pub fn get(&self, i: usize) -> T {
        self.0[i - 1]
    }

    pub fn sum_of_squares(&self) -> T {
        self.0.iter().map(|&x| x * x).sum()
    }
}

/// 4×4 density matrix in the product basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix<T>(Mat4<T>);

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity, unit trace and positivity (all to `1e-12`).
    pub fn new(m: Mat4<T>) -> Result<Self> {
        let tol = T::tol(1e-12);
        let defect = m.hermiticity_defect();
        if defect > tol {
            return Err(Error::NotHermitian { deviation: defect.as_f64() });
        }
        let tr = m.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidDensityMatrix(format!("trace is {tr}, expected 1")));
        }
        let min = eig_hermitian(&m)?.values[0];
        if min < -tol {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min}")));
        }
        Ok(DensityMatrix(m))
    }

    pub(crate) fn from_matrix_unchecked(m: Mat4<T>) -> Self {
        DensityMatrix(m)
    }

    /// `|ψ⟩⟨ψ|`; `ψ` must be normalized to `1e-10`.
    pub fn from_pure(psi: &Ket<T>) -> Result<Self> {
        let n = crate::matrix::ket_norm_sqr(psi);
        if (n - T::one()).abs() > T::tol(1e-10) {
            return Err(Error::NotNormalized { norm_sqr: n.as_f64() });
        }
        Ok(DensityMatrix(Mat4::projector(psi)))
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix(Mat4::identity().scale(T::quarter()))
    }

    /// `Σ pᵢ |φᵢ⟩⟨φᵢ|` for the given eigenbasis.
    pub fn from_populations(pops: &Populations<T>, basis: &EigenBasis<T>) -> Self {
        DensityMatrix((1..=4).fold(Mat4::zeros(), |acc, i| acc + basis.projector(i).scale(pops.get(i))))
    }

    pub fn matrix(&self) -> &Mat4<T> {
        &self.0
    }

    /// `ρᵢⱼ` with 1-based indices.
    pub fn element(&self, i: usize, j: usize) -> num_complex::Complex<T> {
        self.0[(i - 1, j - 1)]
    }

    /// Largest element outside the diagonal and anti-diagonal.
    pub fn x_defect(&self) -> T {
        let mut d = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                if i != j && i + j != 3 {
                    d = d.max(self.0[(i, j)].norm());
                }
            }
        }
        d
    }

    pub(crate) fn require_x(&self) -> Result<()> {
        let d = self.x_defect();
        if d > T::tol(1e-10) {
            return Err(Error::NotXState { deviation: d.as_f64() });
        }
        Ok(())
    }

    /// Population of eigenstate `φᵢ`, `⟨φᵢ|ρ|φᵢ⟩`.
    pub fn eigen_population(&self, basis: &EigenBasis<T>, i: usize) -> T {
        self.0.expectation(&basis.ket(i)).re
    }

    /// `w·self + (1−w)·other`.
    pub fn mix(&self, other: &DensityMatrix<T>, w: T) -> Self {
        DensityMatrix(self.0.scale(w) + other.0.scale(T::one() - w))
    }
}

/// `ρ = e^{−βH}/Z` in the product basis from the closed-form elements:
///
/// ```text
/// ρ₁₁ = e^{−βE₁}/Z                      ρ₄₄ = e^{−βE₄}/Z
/// ρ₂₂ = (e^{−βE₂}cos²θ + e^{−βE₃}sin²θ)/Z
/// ρ₃₃ = (e^{−βE₂}sin²θ + e^{−βE₃}cos²θ)/Z
/// ρ₂₃ = ρ₃₂ = (e^{−βE₂} − e^{−βE₃}) sinθ cosθ / Z,   ρ₁₄ = 0
/// ```
///
/// For `0 < τ < 1e-6` the exact `τ → 0⁺` limit is returned instead.
pub fn thermal_density_matrix<T: Real>(p: &SpinParams<T>) -> Result<DensityMatrix<T>> {
    if !(p.tau() > T::zero()) {
        return Err(Error::NonPositiveTemperature { tau: p.tau().as_f64() });
    }
    if p.tau() < T::lit(NEAR_ZERO_TAU) {
        return Ok(zero_temperature_state(p, T::lit(DEFAULT_DEGENERACY_TOL)));
    }
    let w = Populations::thermal(p)?.0;
    let (s, c) = p.derived().theta.sin_cos();
    let mut m = Mat4::diag_real([
        w[0],
        w[1] * c * c + w[2] * s * s,
        w[1] * s * s + w[2] * c * c,
        w[3],
    ]);
    let r23 = (w[1] - w[2]) * s * c;
    m[(1, 2)] = crate::matrix::re(r23);
    m[(2, 1)] = crate::matrix::re(r23);
    Ok(DensityMatrix(m))
}

/// Closed-form spectrum of an X-structured state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateEigenvalues<T> {
    /// `λ₁ ≥ λ₂` from the outer block, `λ₃ ≥ λ₄` from the inner block.
    pub values: [T; 4],
}

impl<T: Real> StateEigenvalues<T> {
    pub fn sum(&self) -> T {
        self.values.iter().copied().sum()
    }

    pub fn sorted(&self) -> [T; 4] {
        let mut v = self.values;
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        v
    }
}

fn block_eigenvalues<T: Real>(a: T, b: T, off: T) -> (T, T) {
    let h = T::half();
    let r = ((a - b) * (a - b) + T::lit(4.0) * off * off).sqrt();
    (h * (a + b + r), h * (a + b - r))
}

/// `λ = ½[(ρ₁₁+ρ₄₄) ± sqrt((ρ₁₁−ρ₄₄)² + 4|ρ₁₄|²)]` and
/// `½[(ρ₂₂+ρ₃₃) ± sqrt((ρ₂₂−ρ₃₃)² + 4|ρ₂₃|²)]`. With `ρ₁₄ = 0` the outer pair
/// reduces to `max/min(ρ₁₁, ρ₄₄)`.
pub fn state_eigenvalues<T: Real>(rho: &DensityMatrix<T>) -> Result<StateEigenvalues<T>> {
    rho.require_x()?;
    let m = rho.matrix();
    let (l1, l2) = block_eigenvalues(m[(0, 0)].re, m[(3, 3)].re, m[(0, 3)].norm());
    let (l3, l4) = block_eigenvalues(m[(1, 1)].re, m[(2, 2)].re, m[(1, 2)].norm());
    Ok(StateEigenvalues { values: [l1, l2, l3, l4] })
}

/// Character of the ground state at `τ = 0`, decided by the E₃/E₄ ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroundRegime {
    /// E₃ below E₄: the entangled φ₃ is the ground state.
    Low,
    /// E₃ = E₄ within tolerance.
    Crossing,
    /// E₄ below E₃: the product state φ₄ = |ββ⟩.
    High,
}

pub fn ground_regime<T: Real>(p: &SpinParams<T>, degeneracy_tol: T) -> GroundRegime {
    let l = p.energy_levels();
    let (e3, e4) = (l.level(3), l.level(4));
    if (e3 - e4).abs() <= degeneracy_tol * p.j_coupling() {
        GroundRegime::Crossing
    } else if e3 < e4 {
        GroundRegime::Low
    } else {
        GroundRegime::High
    }
}

/// `τ → 0⁺` limit of the thermal state: the uniform mixture of every
/// eigenstate within `degeneracy_tol·J` of the lowest level. This gives
/// `ρ_low = |φ₃⟩⟨φ₃|`, `ρ_crossing = ½(|φ₃⟩⟨φ₃| + |φ₄⟩⟨φ₄|)` and
/// `ρ_high = |φ₄⟩⟨φ₄|` in the three regimes.
pub fn zero_temperature_state<T: Real>(p: &SpinParams<T>, degeneracy_tol: T) -> DensityMatrix<T> {
    let levels = p.energy_levels();
    let e_min = levels.min();
    let tol = degeneracy_tol * p.j_coupling();
    let ground: Vec<usize> = (1..=4).filter(|&i| levels.level(i) - e_min <= tol).collect();
    let w = T::one() / T::lit(ground.len() as f64);
    let basis = p.eigenbasis();
    DensityMatrix(ground.iter().fold(Mat4::zeros(), |acc, &i| acc + basis.projector(i).scale(w)))
}
