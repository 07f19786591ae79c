//! Entropy- and purity-based quantifiers: von Neumann and diagonal entropy,
//! relative entropy of coherence, purity, mixedness, fidelity and an X-state
//! concurrence used for cross-checks.
//!
//! Entropies are in bits. Coherence is measured in the product basis
//! `{|αα⟩, |αβ⟩, |βα⟩, |ββ⟩}`.

use crate::error::{Error, Result};
use crate::matrix::{ket_norm_sqr, Ket};
use crate::scalar::{ln_cosh, log_add_exp, xlog2x, Real};
use crate::spin::SpinParams;
use crate::thermal::{state_eigenvalues, DensityMatrix, StateEigenvalues};

/// `S = −Σ λᵢ log₂ λᵢ`.
pub fn von_neumann_entropy<T: Real>(eigs: &StateEigenvalues<T>) -> T {
    -eigs.values.iter().map(|&l| xlog2x(l.max(T::zero()))).sum::<T>()
}

/// Entropy of the dephased state, `−Σ ρᵢᵢ log₂ ρᵢᵢ`.
pub fn diagonal_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    -(1..=4).map(|i| xlog2x(rho.element(i, i).re.max(T::zero()))).sum::<T>()
}

/// `R(ρ) = S(ρ_d) − S(ρ)` for X-structured states, using the closed-form spectrum.
pub fn coherence_relative_entropy<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let eigs = state_eigenvalues(rho)?;
    Ok((diagonal_entropy(rho) - von_neumann_entropy(&eigs)).max(T::zero()))
}

/// `Tr ρ²`.
pub fn purity<T: Real>(rho: &DensityMatrix<T>) -> T {
    rho.matrix().0.iter().flatten().map(|z| z.norm_sqr()).sum()
}

/// `M = (4/3)(1 − Tr ρ²)`: 0 for pure states, 1 for `I/4`.
pub fn mixedness<T: Real>(rho: &DensityMatrix<T>) -> T {
    T::lit(4.0 / 3.0) * (T::one() - purity(rho))
}

/// Thermal mixedness without building ρ:
///
/// ```text
/// M = (4/3)·[1 − (e^{−βJ}cosh(βω_Σ) + cosh(βD)) / (2·(e^{−βJ/2}cosh(βω_Σ/2) + cosh(βD/2))²)]
/// ```
///
/// Numerator and denominator are handled in log space.
pub fn mixedness_closed_form<T: Real>(p: &SpinParams<T>) -> Result<T> {
    if !(p.tau() > T::zero()) {
        return Err(Error::NonPositiveTemperature { tau: p.tau().as_f64() });
    }
    let beta = p.beta();
    let j = p.j_coupling();
    let d = p.derived();
    Ok(mixedness_from_log_terms(beta, j, d.omega_sigma, d.d_gap))
}

fn mixedness_from_log_terms<T: Real>(beta: T, j: T, omega_sigma: T, d_gap: T) -> T {
    let h = T::half();
    let ln_num = log_add_exp(-(beta * j) + ln_cosh(beta * omega_sigma), ln_cosh(beta * d_gap));
    let ln_den = log_add_exp(-(beta * j * h) + ln_cosh(beta * omega_sigma * h), ln_cosh(beta * d_gap * h));
    let ratio = (ln_num - T::LN_2() - T::two() * ln_den).exp();
    T::lit(4.0 / 3.0) * (T::one() - ratio)
}

/// Negligible-field form: the closed form with `ω_Σ → 0`.
pub fn mixedness_zero_field<T: Real>(p: &SpinParams<T>) -> Result<T> {
    if !(p.tau() > T::zero()) {
        return Err(Error::NonPositiveTemperature { tau: p.tau().as_f64() });
    }
    Ok(mixedness_from_log_terms(p.beta(), p.j_coupling(), T::zero(), p.derived().d_gap))
}

/// Homonuclear, negligible-field form `(4/3)[1 − (e^{2βJ} + 3)/(e^{βJ} + 3)²]`.
///
/// The triplet is threefold degenerate at zero field, hence the 3 in the
/// denominator; with a 2 there the high-temperature limit would be 20/27.
pub fn mixedness_homonuclear_zero_field<T: Real>(beta_j: T) -> T {
    // divide through by e^{2βJ} to keep large βJ finite
    let x = (-beta_j).exp();
    let ratio = (T::one() + T::lit(3.0) * x * x) / ((T::one() + T::lit(3.0) * x) * (T::one() + T::lit(3.0) * x));
    T::lit(4.0 / 3.0) * (T::one() - ratio)
}

/// `F = ⟨ψ|ρ|ψ⟩` for a normalized `ψ`.
pub fn fidelity_with_pure<T: Real>(rho: &DensityMatrix<T>, psi: &Ket<T>) -> Result<T> {
    let n = ket_norm_sqr(psi);
    if (n - T::one()).abs() > T::tol(1e-10) {
        return Err(Error::NotNormalized { norm_sqr: n.as_f64() });
    }
    Ok(rho.matrix().expectation(psi).re)
}

/// X-state concurrence `2·max(0, |ρ₂₃| − sqrt(ρ₁₁ρ₄₄), |ρ₁₄| − sqrt(ρ₂₂ρ₃₃))`.
pub fn concurrence_check<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    rho.require_x()?;
    let r = |i, j| rho.element(i, j);
    let a = r(2, 3).norm() - (r(1, 1).re * r(4, 4).re).max(T::zero()).sqrt();
    let b = r(1, 4).norm() - (r(2, 2).re * r(3, 3).re).max(T::zero()).sqrt();
    Ok(T::two() * a.max(b).max(T::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{ket_from_real, Mat4};
    use crate::oracle::von_neumann_entropy_numeric;
    use crate::spin::EigenBasis;
    use crate::thermal::{thermal_density_matrix, zero_temperature_state};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn eigs(v: [f64; 4]) -> StateEigenvalues<f64> {
        StateEigenvalues { values: v }
    }

    fn params(ws: f64, wd: f64, tau: f64) -> SpinParams<f64> {
        SpinParams::from_sum_diff(ws, wd, 1.0, tau).unwrap()
    }

    #[test]
    fn entropy_reference_values() {
        assert_eq!(von_neumann_entropy(&eigs([1.0, 0.0, 0.0, 0.0])), 0.0);
        assert!((von_neumann_entropy(&eigs([0.25; 4])) - 2.0).abs() < 1e-15);
        assert!((von_neumann_entropy(&eigs([0.5, 0.5, 0.0, 0.0])) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_state_has_no_coherence() {
        let rho = DensityMatrix::new(Mat4::diag_real([0.1f64, 0.2, 0.3, 0.4])).unwrap();
        let s = von_neumann_entropy(&state_eigenvalues(&rho).unwrap());
        assert!((diagonal_entropy(&rho) - s).abs() < 1e-15);
        assert_eq!(coherence_relative_entropy(&rho).unwrap(), 0.0);
    }

    #[test]
    fn singlet_has_one_bit_of_coherence() {
        let rho = DensityMatrix::from_pure(&EigenBasis::new(FRAC_PI_4).ket(3)).unwrap();
        assert!(von_neumann_entropy(&state_eigenvalues(&rho).unwrap()).abs() < 1e-12);
        assert!((diagonal_entropy(&rho) - 1.0).abs() < 1e-15);
        assert!((coherence_relative_entropy(&rho).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn crossing_state_diagonal_entropy_by_expansion() {
        // ½(|φ₃⟩⟨φ₃| + |φ₄⟩⟨φ₄|) has diagonal (0, sin²θ/2, cos²θ/2, 1/2)
        let theta = 0.4_f64;
        let p = SpinParams::from_sum_diff(1.0 + 1.0 / (2.0 * theta).sin(), 1.0 / (2.0 * theta).tan(), 1.0, 0.0).unwrap();
        assert!((p.derived().theta - theta).abs() < 1e-14);
        let rho = zero_temperature_state(&p, 1e-9);
        let (s2, c2) = (theta.sin().powi(2) / 2.0, theta.cos().powi(2) / 2.0);
        let want = -(s2 * s2.log2() + c2 * c2.log2() + 0.5 * 0.5f64.log2());
        assert!((diagonal_entropy(&rho) - want).abs() < 1e-12);
        assert!(diagonal_entropy(&rho) >= von_neumann_entropy(&state_eigenvalues(&rho).unwrap()));
    }

    #[test]
    fn thermal_coherence_matches_numeric_entropy() {
        let rho = thermal_density_matrix(&params(1.0, 0.0, 0.5)).unwrap();
        let oracle = diagonal_entropy(&rho) - von_neumann_entropy_numeric(&rho).unwrap();
        let r = coherence_relative_entropy(&rho).unwrap();
        assert!((r - oracle).abs() < 1e-12);
        assert!(r > 0.0);
    }

    #[test]
    fn purity_and_mixedness_extremes() {
        let pure = DensityMatrix::from_pure(&ket_from_real([0.6f64, 0.0, 0.8, 0.0])).unwrap();
        assert!((purity(&pure) - 1.0).abs() < 1e-15);
        assert!(mixedness(&pure).abs() < 1e-15);
        let mm = DensityMatrix::<f64>::maximally_mixed();
        assert!((purity(&mm) - 0.25).abs() < 1e-15);
        assert!((mixedness(&mm) - 1.0).abs() < 1e-15);
        let cross = zero_temperature_state(&params(2.0, 0.0, 0.0), 1e-9);
        assert!((purity(&cross) - 0.5).abs() < 1e-15);
        assert!((mixedness(&cross) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_mixedness_matches_matrix() {
        for &(ws, wd, tau) in &[(1.0, 0.0, 0.5), (2.0, 0.0, 0.05), (3.0, 2.5, 1.3), (0.0, 1.0, 4.0), (6.0, 1.0, 0.01)] {
            let p = params(ws, wd, tau);
            let direct = mixedness(&thermal_density_matrix(&p).unwrap());
            assert!((mixedness_closed_form(&p).unwrap() - direct).abs() < 1e-10, "ws={ws} wd={wd} tau={tau}");
        }
        assert!(mixedness_closed_form(&params(1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn zero_field_specializations() {
        for &tau in &[0.1, 0.7, 3.0] {
            let p = params(0.0, 0.0, tau);
            let full = mixedness_closed_form(&p).unwrap();
            assert!((mixedness_zero_field(&p).unwrap() - full).abs() < 1e-14);
            assert!((mixedness_homonuclear_zero_field(1.0 / tau) - full).abs() < 1e-13);
        }
        assert!(mixedness_homonuclear_zero_field(1e4_f64).abs() < 1e-12);
        assert!((mixedness_homonuclear_zero_field(1e-9_f64) - 1.0).abs() < 1e-8);
        let plus_two = |b: f64| 4.0 / 3.0 * (1.0 - ((2.0 * b).exp() + 3.0) / (b.exp() + 2.0).powi(2));
        assert!((plus_two(1e-9) - 20.0 / 27.0).abs() < 1e-8);
        assert!((mixedness_closed_form(&params(1.0, 0.5, 1e9)).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fidelity_cases() {
        let s = FRAC_1_SQRT_2;
        let singlet = ket_from_real([0.0, s, -s, 0.0]);
        let rho = DensityMatrix::from_pure(&singlet).unwrap();
        assert!((fidelity_with_pure(&rho, &singlet).unwrap() - 1.0).abs() < 1e-15);
        let mm = DensityMatrix::<f64>::maximally_mixed();
        assert!((fidelity_with_pure(&mm, &singlet).unwrap() - 0.25).abs() < 1e-15);
        let cross = zero_temperature_state(&params(2.0, 0.0, 0.0), 1e-9);
        assert!((fidelity_with_pure(&cross, &singlet).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            fidelity_with_pure(&mm, &ket_from_real([1.0, 1.0, 0.0, 0.0])),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn concurrence_of_eigenstates() {
        let b = EigenBasis::new(FRAC_PI_4);
        let phi1 = DensityMatrix::from_pure(&b.ket(1)).unwrap();
        assert_eq!(concurrence_check(&phi1).unwrap(), 0.0);
        let phi3 = DensityMatrix::from_pure(&b.ket(3)).unwrap();
        assert!((concurrence_check(&phi3).unwrap() - 1.0).abs() < 1e-15);
        for &theta in &[0.1f64, 0.3, 0.6] {
            let phi3 = DensityMatrix::from_pure(&EigenBasis::new(theta).ket(3)).unwrap();
            let want = 2.0 * (theta.sin() * theta.cos()).abs();
            assert!((concurrence_check(&phi3).unwrap() - want).abs() < 1e-15);
        }
        let plus = ket_from_real([FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0]);
        assert!(concurrence_check(&DensityMatrix::from_pure(&plus).unwrap()).is_err());
    }
}
