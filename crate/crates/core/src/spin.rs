//! Two coupled spin-½ nuclei in a static field: parameters, Hamiltonian,
//! analytic eigensystem and the E₃/E₄ level-crossing criterion.
//!
//! Energies are in the units of the scalar coupling `J` (ħ = 1) and the
//! temperature is carried as the rescaled `τ = k_B T / J`, so `βJ = 1/τ`.

use crate::error::{Error, Result};
use crate::matrix::{pauli_pair, Ket, Mat4, Pauli};
use crate::scalar::Real;

/// Physical inputs of the two-spin system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinParams<T> {
    omega1: T,
    omega2: T,
    j_coupling: T,
    tau: T,
}

impl<T: Real> SpinParams<T> {
    /// Larmor frequencies `ω₁, ω₂`, coupling `J > 0` and rescaled temperature `τ ≥ 0`.
    pub fn new(omega1: T, omega2: T, j_coupling: T, tau: T) -> Result<Self> {
        if !omega1.is_finite() || !omega2.is_finite() {
            return Err(Error::InvalidParameter("Larmor frequencies must be finite".into()));
        }
        if !(j_coupling > T::zero()) || !j_coupling.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coupling J must be positive and finite (got {j_coupling})"
            )));
        }
        if !(tau >= T::zero()) || tau.is_nan() {
            return Err(Error::InvalidParameter(format!("tau must be >= 0 (got {tau})")));
        }
        Ok(SpinParams { omega1, omega2, j_coupling, tau })
    }

    /// Builds parameters from the sum/difference frequencies `ω_Σ`, `ω_δ`.
    pub fn from_sum_diff(omega_sigma: T, omega_delta: T, j_coupling: T, tau: T) -> Result<Self> {
        let h = T::half();
        Self::new(h * (omega_sigma + omega_delta), h * (omega_sigma - omega_delta), j_coupling, tau)
    }

    /// Dimensionless parameters with `J = 1` (the ratios `ω/J` and `τ`).
    pub fn normalized(&self) -> Self {
        let j = self.j_coupling;
        SpinParams { omega1: self.omega1 / j, omega2: self.omega2 / j, j_coupling: T::one(), tau: self.tau }
    }

    pub fn with_tau(&self, tau: T) -> Result<Self> {
        Self::new(self.omega1, self.omega2, self.j_coupling, tau)
    }

    pub fn omega1(&self) -> T {
        self.omega1
    }

    pub fn omega2(&self) -> T {
        self.omega2
    }

    pub fn j_coupling(&self) -> T {
        self.j_coupling
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    /// Inverse temperature `β = 1/(τJ)`; infinite at `τ = 0`.
    pub fn beta(&self) -> T {
        T::one() / (self.tau * self.j_coupling)
    }

    pub fn derived(&self) -> DerivedParams<T> {
        derive_params(self)
    }

    pub fn energy_levels(&self) -> EnergyLevels<T> {
        EnergyLevels::from_params(self)
    }

    pub fn eigenbasis(&self) -> EigenBasis<T> {
        EigenBasis::new(self.derived().theta)
    }
}

/// Quantities derived from [`SpinParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams<T> {
    /// `ω_Σ = ω₁ + ω₂`
    pub omega_sigma: T,
    /// `ω_δ = ω₁ − ω₂`
    pub omega_delta: T,
    /// `D = sqrt(ω_δ² + J²)`
    pub d_gap: T,
    /// Mixing angle with `sin 2θ = J/D`, `cos 2θ = ω_δ/D`.
    pub theta: T,
    pub sin_2theta: T,
    pub cos_2theta: T,
}

/// `θ = ½·atan2(J, ω_δ)`, which lies in `(0, π/4]` for `ω_δ ≥ 0` and in
/// `(π/4, π/2)` for negative detuning. Both branches keep `sin 2θ = J/D`.
pub fn derive_params<T: Real>(p: &SpinParams<T>) -> DerivedParams<T> {
    let omega_sigma = p.omega1 + p.omega2;
    let omega_delta = p.omega1 - p.omega2;
    let j = p.j_coupling;
    let d_gap = omega_delta.hypot(j);
    let theta = if omega_delta == T::zero() { T::FRAC_PI_4() } else { T::half() * j.atan2(omega_delta) };
    DerivedParams {
        omega_sigma,
        omega_delta,
        d_gap,
        theta,
        sin_2theta: j / d_gap,
        cos_2theta: omega_delta / d_gap,
    }
}

/// Closed-form energies of the eigenstates φ₁..φ₄.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLevels<T> {
    pub e: [T; 4],
}

impl<T: Real> EnergyLevels<T> {
    pub fn from_params(p: &SpinParams<T>) -> Self {
        let d = p.derived();
        let h = T::half();
        let j = p.j_coupling;
        EnergyLevels {
            e: [
                h * (d.omega_sigma + h * j),
                h * (d.d_gap - h * j),
                -h * (d.d_gap + h * j),
                h * (-d.omega_sigma + h * j),
            ],
        }
    }

    /// Energy of level `i` (1-based, as in φ₁..φ₄).
    pub fn level(&self, i: usize) -> T {
        self.e[i - 1]
    }

    pub fn min(&self) -> T {
        self.e.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn sorted(&self) -> [T; 4] {
        let mut s = self.e;
        s.sort_by(|a, b| a.partial_cmp(b).expect("finite energies"));
        s
    }
}

/// Eigenvectors φ₁..φ₄ in the product basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenBasis<T> {
    pub theta: T,
    pub vectors: [[T; 4]; 4],
}

impl<T: Real> EigenBasis<T> {
    pub fn new(theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        let (o, l) = (T::zero(), T::one());
        EigenBasis {
            theta,
            vectors: [[l, o, o, o], [o, c, s, o], [o, -s, c, o], [o, o, o, l]],
        }
    }

    /// φᵢ as a complex ket (1-based index).
    pub fn ket(&self, i: usize) -> Ket<T> {
        crate::matrix::ket_from_real(self.vectors[i - 1])
    }

    /// `|φᵢ⟩⟨φᵢ|`.
    pub fn projector(&self, i: usize) -> Mat4<T> {
        Mat4::projector(&self.ket(i))
    }

    /// Unitary whose columns are φ₁..φ₄.
    pub fn as_matrix(&self) -> Mat4<T> {
        let mut m = Mat4::zeros();
        for i in 1..=4 {
            m.set_column(i - 1, &self.ket(i));
        }
        m
    }
}

/// `H_Z = (ω₁σ₁z + ω₂σ₂z)/2`.
pub fn zeeman_matrix<T: Real>(p: &SpinParams<T>) -> Mat4<T> {
    let h = T::half();
    pauli_pair(Pauli::Z, Pauli::I).scale(h * p.omega1) + pauli_pair(Pauli::I, Pauli::Z).scale(h * p.omega2)
}

/// `H_J = J·I₁·I₂ = (J/4)(σx⊗σx + σy⊗σy + σz⊗σz)`.
pub fn coupling_matrix<T: Real>(p: &SpinParams<T>) -> Mat4<T> {
    (pauli_pair(Pauli::X, Pauli::X) + pauli_pair(Pauli::Y, Pauli::Y) + pauli_pair(Pauli::Z, Pauli::Z))
        .scale(T::quarter() * p.j_coupling)
}

/// `H = H_Z + H_J` in the product basis; real symmetric.
pub fn hamiltonian_matrix<T: Real>(p: &SpinParams<T>) -> Mat4<T> {
    zeeman_matrix(p) + coupling_matrix(p)
}

/// Coupling at which E₃ = E₄ for given `ω_Σ > 0` and `ω_δ`:
/// `J = (ω_Σ² − ω_δ²)/(2ω_Σ)`.
pub fn crossing_coupling<T: Real>(omega_sigma: T, omega_delta: T) -> Result<T> {
    if !(omega_sigma > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "crossing criterion requires omega_sigma > 0 (got {omega_sigma})"
        )));
    }
    Ok((omega_sigma * omega_sigma - omega_delta * omega_delta) / (T::two() * omega_sigma))
}

/// Positive root of `ω_Σ² − 2Jω_Σ − ω_δ² = 0`, i.e. `ω_Σ = J + D`.
pub fn critical_omega_sigma<T: Real>(j_coupling: T, omega_delta: T) -> Result<T> {
    if !(j_coupling > T::zero()) {
        return Err(Error::InvalidParameter(format!("coupling J must be positive (got {j_coupling})")));
    }
    Ok(j_coupling + omega_delta.hypot(j_coupling))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    fn params(ws: f64, wd: f64) -> SpinParams<f64> {
        SpinParams::from_sum_diff(ws, wd, 1.0, 1.0).unwrap()
    }

    #[test]
    fn rejects_non_positive_coupling_and_negative_tau() {
        assert!(SpinParams::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(SpinParams::new(1.0, 1.0, -1.0, 1.0).is_err());
        assert!(SpinParams::new(1.0, 1.0, 1.0, -0.1).is_err());
        assert!(SpinParams::new(f64::NAN, 1.0, 1.0, 0.1).is_err());
        assert!(SpinParams::new(1.0, 1.0, 1.0, 0.0).is_ok());
    }

    #[test]
    fn homonuclear_forces_quarter_pi() {
        let d = SpinParams::new(1.0, 1.0, 1.0, 1.0).unwrap().derived();
        assert_eq!(d.omega_delta, 0.0);
        assert_eq!(d.d_gap, 1.0);
        assert_eq!(d.theta, FRAC_PI_4);
        assert_eq!(d.sin_2theta, 1.0);
    }

    #[test]
    fn unit_detuning_gives_eighth_pi() {
        let d = params(3.0, 1.0).derived();
        assert!((d.d_gap - 2f64.sqrt()).abs() < 1e-15);
        assert!((d.sin_2theta - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((d.theta - FRAC_PI_8).abs() < 1e-15);
    }

    #[test]
    fn detuning_two_and_a_half() {
        let d = params(3.0, 2.5).derived();
        // 2.5² + 1 = 7.25 by hand; sqrt by Newton iteration as an independent check
        let mut x = 3.0_f64;
        for _ in 0..50 {
            x = 0.5 * (x + 7.25 / x);
        }
        assert!((d.d_gap - x).abs() < 1e-14);
        assert!((d.d_gap - 2.692582403567252).abs() < 1e-14);
        assert!((d.sin_2theta * d.d_gap - 1.0).abs() < 1e-15);
    }

    #[test]
    fn negative_detuning_keeps_sin2theta_positive() {
        let d = params(1.0, -2.0).derived();
        assert!(d.theta > FRAC_PI_4 && d.theta < std::f64::consts::FRAC_PI_2);
        assert!(((2.0 * d.theta).sin() - d.sin_2theta).abs() < 1e-15);
        assert!(((2.0 * d.theta).cos() - d.cos_2theta).abs() < 1e-15);
    }

    #[test]
    fn hamiltonian_structure() {
        let p = SpinParams::new(1.3f64, 1.3, 1.0, 1.0).unwrap();
        let h = hamiltonian_matrix(&p);
        assert!((h[(1, 1)].re + 0.25).abs() < 1e-15);
        assert!((h[(2, 2)].re + 0.25).abs() < 1e-15);
        assert!((h[(1, 2)].re - 0.5).abs() < 1e-15);
        assert!(h.trace().norm() < 1e-15);
        assert_eq!(h.hermiticity_defect(), 0.0);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(h[(i, j)].im, 0.0);
            }
        }
    }

    #[test]
    fn zeeman_is_diagonal_and_traceless() {
        let p = SpinParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let hz = zeeman_matrix(&p);
        assert!((hz - Mat4::diag_real([1.0, 0.0, 0.0, -1.0])).max_abs() < 1e-15);
        let q = params(2.2, 0.7);
        assert!(zeeman_matrix(&q).trace().norm() < 1e-15);
        assert!(((hamiltonian_matrix(&q) - zeeman_matrix(&q)) - coupling_matrix(&q)).max_abs() < 1e-15);
    }

    #[test]
    fn eigenbasis_diagonalizes_hamiltonian() {
        for &(ws, wd) in &[(0.0, 0.0), (1.0, 0.0), (2.5, 1.0), (4.0, -2.5), (0.3, 7.0)] {
            let p = params(ws, wd);
            let h = hamiltonian_matrix(&p);
            let b = p.eigenbasis();
            let lv = p.energy_levels();
            for i in 1..=4 {
                let v = b.ket(i);
                let hv = h.apply(&v);
                for k in 0..4 {
                    assert!((hv[k] - v[k] * lv.level(i)).norm() < 1e-12, "ws={ws} wd={wd} i={i}");
                }
                for j in 1..=4 {
                    let dot: f64 = (0..4).map(|k| b.vectors[i - 1][k] * b.vectors[j - 1][k]).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - want).abs() < 1e-12);
                }
            }
            let l = lv.e;
            assert!((l[1] - l[2] - p.derived().d_gap).abs() < 1e-14);
            assert!(l[2] <= l[1]);
        }
    }

    #[test]
    fn crossing_homonuclear_at_two() {
        assert_eq!(critical_omega_sigma(1.0, 0.0).unwrap(), 2.0);
        assert!((crossing_coupling(2.0f64, 0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn crossing_heteronuclear_matches_bisection_on_levels() {
        let wd = 2.5;
        let gap = |ws: f64| {
            let l = params(ws, wd).energy_levels();
            l.level(3) - l.level(4)
        };
        let (mut lo, mut hi) = (0.0, 10.0);
        assert!(gap(lo) < 0.0 && gap(hi) > 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if gap(mid) < 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        let ws = critical_omega_sigma(1.0, wd).unwrap();
        assert!((ws - 0.5 * (lo + hi)).abs() < 1e-12);
        assert!((ws - (1.0 + 7.25f64.sqrt())).abs() < 1e-14);
        assert!(gap(ws).abs() < 1e-12);
        // D/J = ω_Σ/J − 1 at the crossing
        assert!((params(ws, wd).derived().d_gap - (ws - 1.0)).abs() < 1e-14);
        assert!((crossing_coupling(ws, wd).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn normalization_divides_by_j() {
        let p = SpinParams::new(4.0, 2.0, 2.0, 0.5).unwrap();
        let n = p.normalized();
        assert_eq!((n.omega1(), n.omega2(), n.j_coupling(), n.tau()), (2.0, 1.0, 1.0, 0.5));
        assert_eq!(p.beta(), 1.0);
    }
}
