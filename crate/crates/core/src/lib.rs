//! Exact cohomology of constrained lattice-fermion chains.

pub mod cohomology;
pub mod couplings;
pub mod cut_paste;
pub mod double_complex;
pub mod error;
pub mod hamiltonian;
pub mod linalg;
pub mod oracle;
pub mod scalar;
pub mod sparse;
pub mod state_space;
pub mod supercharge;
pub mod sweep;

pub use couplings::CouplingScheme;
pub use error::{Error, Result};
pub use sparse::{SparseMatrix, SparseVec};
pub use state_space::{Boundary, ChainSpec, Configuration, GradedBasis};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
/// Sparse matrix over the rationals.
pub type QMatrix = SparseMatrix<Rational>;
/// Coupling scheme over the rationals.
pub type QScheme = CouplingScheme<Rational>;
