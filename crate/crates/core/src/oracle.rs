//! Brute-force numerical machinery used to cross-check the closed forms:
//! a cyclic Jacobi eigensolver for 4×4 Hermitian matrices, the thermal state
//! built as `exp(−βH)/Tr exp(−βH)` from that eigensolver, the partial
//! transpose and the PPT test. Nothing here uses the analytic eigensystem.

pub mod sampling;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::{re, Ket, Mat4};
use crate::scalar::{xlog2x, Real};
use crate::spin::{hamiltonian_matrix, SpinParams};
use crate::thermal::DensityMatrix;
use crate::witness::Separability;

const MAX_SWEEPS: usize = 64;

/// Eigen-decomposition `M = V·diag(values)·V†`, values ascending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianEigen<T> {
    pub values: [T; 4],
    /// Columns are the eigenvectors, in the order of `values`.
    pub vectors: Mat4<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn reconstruct(&self) -> Mat4<T> {
        self.vectors * Mat4::diag_real(self.values) * self.vectors.dagger()
    }

    /// `V·diag(f(λ))·V†`.
    pub fn map_values(&self, f: impl Fn(T) -> T) -> Mat4<T> {
        self.vectors * Mat4::diag_real(self.values.map(f)) * self.vectors.dagger()
    }
}

fn off_diagonal_norm<T: Real>(a: &Mat4<T>) -> T {
    let mut s = T::zero();
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                s = s + a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic complex Jacobi iteration (pairs swept upper-triangle row-major).
pub fn eig_hermitian<T: Real>(m: &Mat4<T>) -> Result<HermitianEigen<T>> {
    let scale = m.max_abs().max(T::one());
    let defect = m.hermiticity_defect();
    if !(defect <= T::tol(1e-10) * scale) {
        return Err(Error::NotHermitian { deviation: defect.as_f64() });
    }
    // symmetrize so rounding in the input does not leak into the iteration
    let mut a = (*m + m.dagger()).scale(T::half());
    let mut v = Mat4::<T>::identity();
    let threshold = T::tol(1e-13) * scale;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < threshold {
            converged = true;
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == T::zero() {
                    continue;
                }
                let phase = apq / mag;
                let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
                let zeta = (aqq - app) / (T::two() * mag);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                // U = diag(1, e^{-iφ}) on (p,q) followed by the real rotation [[c, s], [-s, c]]
                let mut u = Mat4::<T>::identity();
                u[(p, p)] = re(c);
                u[(p, q)] = re(s);
                u[(q, p)] = phase.conj() * (-s);
                u[(q, q)] = phase.conj() * c;
                a = u.dagger() * a * u;
                v = v * u;
                a[(p, q)] = re(T::zero());
                a[(q, p)] = re(T::zero());
            }
        }
    }
    if !converged {
        if off_diagonal_norm(&a) < threshold {
            converged = true;
        }
        if !converged {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
        }
    }

    let mut order = [0usize, 1, 2, 3];
    let diag = [a[(0, 0)].re, a[(1, 1)].re, a[(2, 2)].re, a[(3, 3)].re];
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues").then(i.cmp(&j)));
    let values = order.map(|i| diag[i]);
    let mut vectors = Mat4::zeros();
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &v.column(i));
    }
    gram_schmidt(&mut vectors);
    Ok(HermitianEigen { values, vectors })
}

/// In-place modified Gram–Schmidt over the columns, left to right.
fn gram_schmidt<T: Real>(m: &mut Mat4<T>) {
    for j in 0..4 {
        let mut col = m.column(j);
        for k in 0..j {
            let prev = m.column(k);
            let proj = inner(&prev, &col);
            for i in 0..4 {
                col[i] = col[i] - prev[i] * proj;
            }
        }
        let n = col.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        for z in col.iter_mut() {
            *z = *z / n;
        }
        m.set_column(j, &col);
    }
}

fn inner<T: Real>(a: &Ket<T>, b: &Ket<T>) -> Complex<T> {
    a.iter().zip(b.iter()).fold(re(T::zero()), |acc, (x, y)| acc + x.conj() * *y)
}

/// `exp(−βH)/Tr exp(−βH)` from the numerical eigendecomposition of `H`.
pub fn thermal_state_numeric<T: Real>(p: &SpinParams<T>) -> Result<DensityMatrix<T>> {
    if !(p.tau() > T::zero()) {
        return Err(Error::NonPositiveTemperature { tau: p.tau().as_f64() });
    }
    let eig = eig_hermitian(&hamiltonian_matrix(p))?;
    let beta = p.beta();
    let e_min = eig.values[0];
    let weights = eig.values.map(|e| (-(beta * (e - e_min))).exp());
    let total: T = weights.iter().copied().sum();
    let rho = eig.vectors * Mat4::diag_real(weights.map(|w| w / total)) * eig.vectors.dagger();
    Ok(DensityMatrix::from_matrix_unchecked(rho))
}

/// `Σ e^{−βEᵢ}` over numerically computed eigenvalues of `H`, in log form
/// `(ln Z)`.
pub fn log_partition_numeric<T: Real>(p: &SpinParams<T>) -> Result<T> {
    let eig = eig_hermitian(&hamiltonian_matrix(p))?;
    let beta = p.beta();
    let e_min = eig.values[0];
    let s: T = eig.values.iter().map(|&e| (-(beta * (e - e_min))).exp()).sum();
    Ok(-beta * e_min + s.ln())
}

/// Von Neumann entropy in bits from the numerical spectrum.
pub fn von_neumann_entropy_numeric<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let eig = eig_hermitian(rho.matrix())?;
    Ok(-eig.values.iter().map(|&l| xlog2x(l.max(T::zero()))).sum::<T>())
}

/// Which spin the partial transpose acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Transposes the chosen spin's indices: `(i₁i₂, j₁j₂) → (j₁i₂, i₁j₂)` for
/// the first spin, `(i₁j₂, j₁i₂)` for the second.
pub fn partial_transpose<T: Real>(rho: &Mat4<T>, subsystem: Subsystem) -> Mat4<T> {
    let mut out = Mat4::zeros();
    for i1 in 0..2 {
        for i2 in 0..2 {
            for j1 in 0..2 {
                for j2 in 0..2 {
                    let (r, c) = match subsystem {
                        Subsystem::First => (2 * j1 + i2, 2 * i1 + j2),
                        Subsystem::Second => (2 * i1 + j2, 2 * j1 + i2),
                    };
                    out[(r, c)] = rho[(2 * i1 + i2, 2 * j1 + j2)];
                }
            }
        }
    }
    out
}

pub fn min_partial_transpose_eigenvalue<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let pt = partial_transpose(rho.matrix(), Subsystem::Second);
    Ok(eig_hermitian(&pt)?.values[0])
}

/// Peres–Horodecki verdict; exact for two qubits.
pub fn ppt_verdict<T: Real>(rho: &DensityMatrix<T>) -> Result<Separability> {
    Ok(if min_partial_transpose_eigenvalue(rho)? < -T::tol(1e-10) {
        Separability::Entangled
    } else {
        Separability::Separable
    })
}
