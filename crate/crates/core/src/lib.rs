//! Constrained coupled-graph Hamiltonians.
//!
//! Two copies of a bipartite graph `H_L` are coupled through a projector that
//! removes every product state whose two labels both exceed a cutoff `D'`.
//! The crate builds these matrices (the PXP chain is the motivating member of
//! the family), diagonalizes them exactly, and analyses entanglement, exact
//! and approximate scar states, level statistics and the dimer ladder at the
//! Rokhsar-Kivelson point.

pub mod coupling;
pub mod ensemble;
pub mod entanglement;
pub mod error;
pub mod fib_basis;
pub mod graph;
pub mod linalg;
pub mod rk_dimer;
pub mod scalar;
pub mod scars;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::BinaryGraph;
pub use linalg::DenseMatrix;
pub use scalar::Real;

pub type Matrix = DenseMatrix<f64>;
pub type Spectrum = spectral::SpectralResult<f64>;
pub type CoupledSpectrum = spectral::CoupledSpectrum<f64>;
pub type Record = entanglement::EntanglementRecord<f64>;
pub type Scar = scars::ScarState<f64>;

pub type MatrixF32 = DenseMatrix<f32>;
pub type SpectrumF32 = spectral::SpectralResult<f32>;
