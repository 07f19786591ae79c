//! Thermal states of a J-coupled pair of spin-1/2 nuclei: closed-form Gibbs
//! states, coherence and mixedness, the singlet entanglement witness, NMR
//! spectra and population reconstruction, with an independent brute-force
//! oracle for cross-checking.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*64`/`*32`
//! aliases below fix the scalar. Energies and temperatures are in units of
//! the coupling `J`.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod quantifiers;
pub mod reconstruction;
pub mod scalar;
pub mod spectrum;
pub mod spin;
pub mod sweep;
pub mod thermal;
pub mod validate;
pub mod witness;

pub use error::{Error, Result};
pub use matrix::{Ket, Mat4};
pub use scalar::Real;
pub use spin::{DerivedParams, EigenBasis, EnergyLevels, SpinParams};
pub use thermal::{DensityMatrix, Populations, StateEigenvalues};
pub use witness::{Separability, WitnessReport, WitnessVerdict};

pub type SpinParams64 = SpinParams<f64>;
pub type SpinParams32 = SpinParams<f32>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type DensityMatrix32 = DensityMatrix<f32>;
pub type Populations64 = Populations<f64>;
pub type Populations32 = Populations<f32>;
pub type Mat4x64 = Mat4<f64>;
pub type Mat4x32 = Mat4<f32>;
