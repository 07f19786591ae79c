//! Seeded random states for property checks and the validation report.
//!
//! Mixed states are Dirichlet(1)-weighted mixtures of Haar-random kets.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::matrix::{Ket, Mat2, Mat4};
use crate::thermal::{DensityMatrix, Populations};

/// Deterministic generator used throughout the test and validation code.
pub struct Sampler(ChaCha8Rng);

impl Sampler {
    pub fn seeded(seed: u64) -> Self {
        Sampler(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.0)
    }

    pub fn uniform(&mut self) -> f64 {
        self.0.random::<f64>()
    }

    pub fn complex_normal(&mut self) -> Complex<f64> {
        Complex::new(self.normal(), self.normal())
    }

    /// Point on the probability simplex, uniformly distributed.
    pub fn dirichlet<const N: usize>(&mut self) -> [f64; N] {
        let mut w = [0.0; N];
        for x in w.iter_mut() {
            *x = Exp1.sample(&mut self.0);
        }
        let s: f64 = w.iter().sum();
        w.map(|x| x / s)
    }
}

pub fn random_ket(rng: &mut Sampler) -> Ket<f64> {
    let v = [rng.complex_normal(), rng.complex_normal(), rng.complex_normal(), rng.complex_normal()];
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.map(|z| z / n)
}

fn random_qubit(rng: &mut Sampler) -> [Complex<f64>; 2] {
    let v = [rng.complex_normal(), rng.complex_normal()];
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    v.map(|z| z / n)
}

fn mixture(weights: &[f64], kets: &[Ket<f64>]) -> DensityMatrix<f64> {
    let m = weights
        .iter()
        .zip(kets)
        .fold(Mat4::zeros(), |acc, (&w, k)| acc + Mat4::projector(k).scale(w));
    DensityMatrix::from_matrix_unchecked(m)
}

fn weights(rng: &mut Sampler, k: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..k).map(|_| Exp1.sample(&mut rng.0)).collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    w
}

/// Mixture of `k` Haar-random pure states.
pub fn random_state(rng: &mut Sampler, k: usize) -> DensityMatrix<f64> {
    let kets: Vec<_> = (0..k).map(|_| random_ket(rng)).collect();
    let w = weights(rng, k);
    mixture(&w, &kets)
}

/// Random rank between 1 and 4.
pub fn random_density_matrix(rng: &mut Sampler) -> DensityMatrix<f64> {
    let k = 1 + (rng.uniform() * 4.0).floor().min(3.0) as usize;
    random_state(rng, k)
}

/// Mixture of `k` random product states; separable by construction.
pub fn random_product_mixture(rng: &mut Sampler, k: usize) -> DensityMatrix<f64> {
    let kets: Vec<Ket<f64>> = (0..k)
        .map(|_| {
            let a = random_qubit(rng);
            let b = random_qubit(rng);
            [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
        })
        .collect();
    let w = weights(rng, k);
    mixture(&w, &kets)
}

/// X-structured state with ρ₂₃, ρ₁₄ inside the positivity bounds.
pub fn random_x_state(rng: &mut Sampler) -> DensityMatrix<f64> {
    let p = rng.dirichlet::<4>();
    let mut m = Mat4::diag_real(p);
    let phase = |rng: &mut Sampler| Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * rng.uniform());
    let c23 = phase(rng) * (rng.uniform() * (p[1] * p[2]).sqrt());
    let c14 = phase(rng) * (rng.uniform() * (p[0] * p[3]).sqrt());
    m[(1, 2)] = c23;
    m[(2, 1)] = c23.conj();
    m[(0, 3)] = c14;
    m[(3, 0)] = c14.conj();
    DensityMatrix::from_matrix_unchecked(m)
}

pub fn random_populations(rng: &mut Sampler) -> Populations<f64> {
    Populations::new(rng.dirichlet::<4>()).expect("simplex point")
}

fn random_su2(rng: &mut Sampler) -> Mat2<f64> {
    let q = [rng.normal(), rng.normal(), rng.normal(), rng.normal()];
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (a, b) = (Complex::new(q[0], q[1]) / n, Complex::new(q[2], q[3]) / n);
    Mat2([[a, -b.conj()], [b, a.conj()]])
}

/// Haar-random `U₁ ⊗ U₂`.
pub fn random_local_unitary(rng: &mut Sampler) -> Mat4<f64> {
    random_su2(rng).kron(&random_su2(rng))
}

pub fn random_hermitian(rng: &mut Sampler) -> Mat4<f64> {
    let mut m = Mat4::zeros();
    for i in 0..4 {
        m[(i, i)] = Complex::new(rng.normal(), 0.0);
        for j in (i + 1)..4 {
            let z = rng.complex_normal();
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}
