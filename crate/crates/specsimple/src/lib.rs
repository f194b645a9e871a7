//! Finite-scale spectral simplicity toolkit.
//!
//! The crate materializes whole-line Jacobi operators and extended CMV
//! matrices as finite dense matrices, performs the exact rank-one
//! decouplings that split them across a site cut, and checks the
//! finite-dimensional consequences: disjointness of perturbed and
//! unperturbed spectra, simplicity of rank-one-coupled direct sums, and the
//! Schur-function rotation identity on the unit circle.
//!
//! Layout:
//! - [`operator`]: operator families and seeded ensembles (windows, dense
//!   carriers, rank-one couplings).
//! - [`decouple`]: rank-one decouplings and the Cayley bridge between
//!   selfadjoint and unitary operators.
//! - [`spectral`]: eigendecomposition contracts, atomic spectral measures,
//!   Krylov cyclicity, support partitions, and the Borel / Caratheodory /
//!   Schur transforms.
//! - [`harness`]: executable verifications producing structured reports.
//! - [`runner`] / [`ensemble`]: seeded ensemble drivers for the
//!   verification suites and their trial generators.

pub mod decouple;
pub mod eig;
pub mod ensemble;
pub mod error;
pub mod harness;
pub mod matrix;
pub mod operator;
pub mod rng;
pub mod runner;
pub mod spectral;

pub use error::{Error, Result};
pub use matrix::CMatrix;
pub use operator::{
    anderson_jacobi, apply_rank_one, materialize_cmv, materialize_jacobi, random_verblunsky,
    theta_block, CMVWindow, DenseOperator, JacobiWindow, OperatorKind, RankOneCoupling,
};
