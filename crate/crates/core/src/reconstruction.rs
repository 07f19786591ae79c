//! Longitudinal NMR observables and population reconstruction.
//!
//! Three 1D experiments give `P₁z = Tr(σ₁zρ)`, `P₂z = Tr(σ₂zρ)` and
//! `P₁z,₂z = Tr(σ₁zσ₂zρ)`; together with `Σpᵢ = 1` they fix the four
//! eigenstate populations whenever `cos 2θ ≠ 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{pauli_pair, Pauli};
use crate::scalar::Real;
use crate::thermal::{DensityMatrix, Populations};

pub const DEFAULT_EPSILON_THETA: f64 = 1e-6;
pub const DEFAULT_CONSISTENCY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NmrObservables<T> {
    pub p1z: T,
    pub p2z: T,
    pub p1z2z: T,
}

impl<T: Real> NmrObservables<T> {
    /// Rejects non-finite values and values outside `[−1 − tol, 1 + tol]`.
    pub fn new(p1z: T, p2z: T, p1z2z: T, tol: T) -> Result<Self> {
        for (name, v) in [("P1z", p1z), ("P2z", p2z), ("P1z2z", p1z2z)] {
            if !(v.is_finite() && v.abs() <= T::one() + tol) {
                return Err(Error::ObservableOutOfRange { name, value: v.as_f64() });
            }
        }
        Ok(NmrObservables { p1z, p2z, p1z2z })
    }
}

/// Observables implied by eigenbasis populations at mixing angle `θ`.
pub fn forward_observables<T: Real>(pops: &Populations<T>, theta: T) -> NmrObservables<T> {
    let [p1, p2, p3, p4] = pops.0;
    let c = (T::two() * theta).cos();
    NmrObservables { p1z: p1 - p4 + (p2 - p3) * c, p2z: p1 - p4 + (p3 - p2) * c, p1z2z: p1 + p4 - (p2 + p3) }
}

/// Observables by direct operator traces.
pub fn observables_from_state<T: Real>(rho: &DensityMatrix<T>) -> NmrObservables<T> {
    let t = |a, b| rho.matrix().trace_product(&pauli_pair(a, b)).re;
    NmrObservables { p1z: t(Pauli::Z, Pauli::I), p2z: t(Pauli::I, Pauli::Z), p1z2z: t(Pauli::Z, Pauli::Z) }
}

fn checked_cos_2theta<T: Real>(theta: T, epsilon_theta: T) -> Result<T> {
    let c = (T::two() * theta).cos();
    if !(c.abs() > epsilon_theta) {
        return Err(Error::HomonuclearDegeneracy { cos_2theta: c.abs().as_f64(), epsilon: epsilon_theta.as_f64() });
    }
    Ok(c)
}

/// Inverse of [`forward_observables`]. Values within `tol` of `[0, 1]` are
/// clamped and the vector renormalized; anything further out is reported.
pub fn reconstruct_populations<T: Real>(obs: &NmrObservables<T>, theta: T, epsilon_theta: T, tol: T) -> Result<Populations<T>> {
    let c = checked_cos_2theta(theta, epsilon_theta)?;
    let q = T::quarter();
    let sum = obs.p1z + obs.p2z;
    let split = (obs.p1z - obs.p2z) / c;
    let raw = [
        q * (T::one() + obs.p1z2z + sum),
        q * (T::one() - obs.p1z2z + split),
        q * (T::one() - obs.p1z2z - split),
        q * (T::one() + obs.p1z2z - sum),
    ];
    for (k, &v) in raw.iter().enumerate() {
        if !(v >= -tol && v <= T::one() + tol) {
            return Err(Error::InconsistentObservables { index: k + 1, value: v.as_f64() });
        }
    }
    let clamped = raw.map(|v| v.max(T::zero()).min(T::one()));
    let total: T = clamped.iter().copied().sum();
    Populations::new(clamped.map(|v| v / total))
}

/// `M = 1 − (1/6)[2P₁z,₂z² + (P₁z+P₂z)² + (P₁z−P₂z)²/cos²2θ]`.
pub fn mixedness_from_observables<T: Real>(obs: &NmrObservables<T>, theta: T, epsilon_theta: T) -> Result<T> {
    let c = checked_cos_2theta(theta, epsilon_theta)?;
    let s = obs.p1z + obs.p2z;
    let d = (obs.p1z - obs.p2z) / c;
    Ok(T::one() - (T::two() * obs.p1z2z * obs.p1z2z + s * s + d * d) / T::lit(6.0))
}

/// `(4/3)(1 − Σpᵢ²)`, the mixedness of the dephased eigenbasis state.
pub fn mixedness_from_populations<T: Real>(pops: &Populations<T>) -> T {
    T::lit(4.0 / 3.0) * (T::one() - pops.sum_of_squares())
}

/// `1/|cos 2θ|`, the amplification of errors in `P₁z − P₂z`.
pub fn condition_number<T: Real>(theta: T) -> T {
    T::one() / (T::two() * theta).cos().abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Reconstruction<T> {
    pub populations: [T; 4],
    pub mixedness_observables: T,
    pub mixedness_populations: T,
    pub condition_number: T,
}

impl<T: Real> Reconstruction<T> {
    pub fn discrepancy(&self) -> T {
        (self.mixedness_observables - self.mixedness_populations).abs()
    }
}

pub fn reconstruct<T: Real>(obs: &NmrObservables<T>, theta: T, epsilon_theta: T, tol: T) -> Result<Reconstruction<T>> {
    let pops = reconstruct_populations(obs, theta, epsilon_theta, tol)?;
    Ok(Reconstruction {
        populations: pops.0,
        mixedness_observables: mixedness_from_observables(obs, theta, epsilon_theta)?,
        mixedness_populations: mixedness_from_populations(&pops),
        condition_number: condition_number(theta),
    })
}
