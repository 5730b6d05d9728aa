//! Polynomial invariants of second-order tensors in flat pseudo-Riemannian spaces.
//!
//! A [`Metric`] fixes the space. A [`Tensor2`] carries its components in one of the
//! four index placements; every algebraic operation goes through the mixed
//! `A^i_{·j}` form, where products, traces and the characteristic polynomial are
//! basis independent.
//!
//! The [`minkowski`] module specializes to `n = 4` with the electromagnetic field
//! tensor and the block form of symmetric (stress-energy) tensors, and [`transform`]
//! samples isometries of a metric to certify invariance empirically.

pub mod error;
pub mod exec;
pub mod invariants;
pub mod metric;
pub mod minkowski;
pub mod sampling;
pub mod tensor;
pub mod transform;

mod linalg;

pub use error::{Error, Result};
pub use exec::Execution;
pub use invariants::{
    cayley_hamilton_residual, char_poly, coeffs_to_traces, eigen, express_in_basis,
    minimal_integrity_basis, traces_to_coeffs, BasisEntry, BasisRepresentation, CharPoly,
    EigenDecomp, IntegrityBasis, PowerWitness,
};
pub use metric::Metric;
pub use tensor::{Tensor2, TensorClass, Variance, DEFAULT_CLASSIFY_TOL};
pub use transform::{Isometry, InvarianceReport, Verdict};

/// Dense real matrix used for all component storage.
pub type Matrix = nalgebra::DMatrix<f64>;
/// Complex scalar used for eigenvalues and eigenvectors.
pub type Complex = nalgebra::Complex<f64>;
