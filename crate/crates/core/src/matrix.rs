//! Dense 4×4 complex matrices over the two-spin product basis
//! `{|αα⟩, |αβ⟩, |βα⟩, |ββ⟩}` (spin 1 is the high bit, α = spin up).

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;

use crate::scalar::Real;

pub type Ket<T> = [Complex<T>; 4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2<T>(pub [[Complex<T>; 2]; 2]);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4<T>(pub [[Complex<T>; 4]; 4]);

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl<T: Real> Mat2<T> {
    pub fn pauli(p: Pauli) -> Self {
        let (o, l, i) = (Complex::new(T::zero(), T::zero()), re(T::one()), Complex::new(T::zero(), T::one()));
        Mat2(match p {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        })
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Mat2<T>) -> Mat4<T> {
        let mut out = Mat4::zeros();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        out[(2 * a + c, 2 * b + d)] = self.0[a][b] * rhs.0[c][d];
                    }
                }
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Mat2<T>) -> Mat2<T> {
        let mut out = [[re(T::zero()); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        Mat2(out)
    }

    pub fn dagger(&self) -> Mat2<T> {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }
}

/// `σ_a ⊗ σ_b` on the two spins.
pub fn pauli_pair<T: Real>(a: Pauli, b: Pauli) -> Mat4<T> {
    Mat2::pauli(a).kron(&Mat2::pauli(b))
}

impl<T: Real> Mat4<T> {
    pub fn zeros() -> Self {
        Mat4([[re(T::zero()); 4]; 4])
    }

    pub fn identity() -> Self {
        Self::diag_real([T::one(); 4])
    }

    pub fn diag_real(d: [T; 4]) -> Self {
        let mut m = Self::zeros();
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = re(v);
        }
        m
    }

    pub fn from_real(rows: [[T; 4]; 4]) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = re(rows[i][j]);
            }
        }
        m
    }

    /// `|ψ⟩⟨φ|`.
    pub fn outer(psi: &Ket<T>, phi: &Ket<T>) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = psi[i] * phi[j].conj();
            }
        }
        m
    }

    pub fn projector(psi: &Ket<T>) -> Self {
        Self::outer(psi, psi)
    }

    pub fn dagger(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = self[(j, i)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = self[(j, i)];
            }
        }
        m
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for v in row.iter_mut() {
                *v = f(*v);
            }
        }
        m
    }

    pub fn trace(&self) -> Complex<T> {
        (0..4).map(|i| self[(i, i)]).fold(re(T::zero()), |a, b| a + b)
    }

    /// `Tr(self · rhs)` without forming the product.
    pub fn trace_product(&self, rhs: &Mat4<T>) -> Complex<T> {
        let mut acc = re(T::zero());
        for i in 0..4 {
            for k in 0..4 {
                acc = acc + self[(i, k)] * rhs[(k, i)];
            }
        }
        acc
    }

    pub fn apply(&self, v: &Ket<T>) -> Ket<T> {
        let mut out = [re(T::zero()); 4];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, x) in v.iter().enumerate() {
                *o = *o + self[(i, j)] * *x;
            }
        }
        out
    }

    /// `⟨ψ|M|ψ⟩`.
    pub fn expectation(&self, psi: &Ket<T>) -> Complex<T> {
        let mpsi = self.apply(psi);
        psi.iter().zip(mpsi.iter()).fold(re(T::zero()), |acc, (a, b)| acc + a.conj() * *b)
    }

    pub fn max_abs(&self) -> T {
        self.0
            .iter()
            .flat_map(|r| r.iter())
            .fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn frobenius(&self) -> T {
        self.0.iter().flat_map(|r| r.iter()).map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Largest `|M − M†|` entry.
    pub fn hermiticity_defect(&self) -> T {
        (*self - self.dagger()).max_abs()
    }

    pub fn column(&self, j: usize) -> Ket<T> {
        [self[(0, j)], self[(1, j)], self[(2, j)], self[(3, j)]]
    }

    pub fn set_column(&mut self, j: usize, v: &Ket<T>) {
        for (i, x) in v.iter().enumerate() {
            self[(i, j)] = *x;
        }
    }
}

impl<T> Index<(usize, usize)> for Mat4<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.0[i][j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat4<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.0[i][j]
    }
}

impl<T: Real> Add for Mat4<T> {
    type Output = Mat4<T>;
    fn add(self, rhs: Mat4<T>) -> Mat4<T> {
        let mut m = self;
        for i in 0..4 {
            for j in 0..4 {
                m[(i, j)] = m[(i, j)] + rhs[(i, j)];
            }
        }
        m
    }
}

impl<T: Real> Sub for Mat4<T> {
    type Output = Mat4<T>;
    fn sub(self, rhs: Mat4<T>) -> Mat4<T> {
        self + (-rhs)
    }
}

impl<T: Real> Neg for Mat4<T> {
    type Output = Mat4<T>;
    fn neg(self) -> Mat4<T> {
        self.map(|z| -z)
    }
}

impl<T: Real> Mul for Mat4<T> {
    type Output = Mat4<T>;
    fn mul(self, rhs: Mat4<T>) -> Mat4<T> {
        let mut m = Mat4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = re(T::zero());
                for k in 0..4 {
                    acc = acc + self[(i, k)] * rhs[(k, j)];
                }
                m[(i, j)] = acc;
            }
        }
        m
    }
}

pub fn ket_norm_sqr<T: Real>(v: &Ket<T>) -> T {
    v.iter().map(|z| z.norm_sqr()).sum()
}

pub fn ket_from_real<T: Real>(v: [T; 4]) -> Ket<T> {
    v.map(re)
}
