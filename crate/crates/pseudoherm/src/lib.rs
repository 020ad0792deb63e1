//! Numerical pseudo-Hermitian quantum mechanics on finite-dimensional state spaces.
//!
//! A Hamiltonian `H` is *pseudo-Hermitian* when `H† = η H η⁻¹` for some Hermitian
//! invertible `η` (the metric). This crate makes that structure executable:
//!
//! - [`operators`]: the pseudo-adjoint `O♯ = η₊⁻¹ O† η₋` and its *-algebra,
//!   indefinite inner products, unitary transport, symmetry candidates.
//! - [`biorthogonal`]: dense biorthonormal eigendecomposition, classification of
//!   spectra into real / conjugate-paired parts, and explicit construction of a
//!   certifying metric from the left eigenvectors.
//! - [`discretize`]: 1-D grids with exact parity/momentum identities and the
//!   standard PT-symmetric Hamiltonian forms.
//! - [`wdw`]: the two-component minisuperspace wave-equation model whose
//!   Klein-Gordon inner product is an indefinite metric.
//! - [`psusy`]: pseudo-supersymmetric pairs `H± = ½D♯D, ½DD♯` and the
//!   first-order factory of non-Hermitian Hamiltonians with real spectra.
//! - [`evolution`]: fixed-step RK4 Schrödinger integration and conservation
//!   checks for the indefinite inner product.
//!
//! All residuals are Frobenius norms normalized by the product of the factor
//! norms, so they are scale-free and comparable across instances.

pub mod biorthogonal;
pub mod discretize;
mod eigen;
mod error;
pub mod evolution;
pub mod io;
mod op;
pub mod operators;
pub mod psusy;
pub mod wdw;

pub use error::{Error, Result};
pub use op::{commutator, Metric, Op, StateVec};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;
/// Dense complex matrix storage.
pub type CMat = nalgebra::DMatrix<C64>;
/// Dense complex vector storage.
pub type CVec = nalgebra::DVector<C64>;

/// Default relative tolerance for algebraic identities in double precision.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Default factor for eigenvalue clustering: `cluster_tol = 1e-8 * spectral radius`.
pub const DEFAULT_CLUSTER_FACTOR: f64 = 1e-8;

/// Default relative tolerance when deciding whether an eigenvalue is real.
pub const DEFAULT_PAIR_TOL: f64 = 1e-8;

/// Eigenvector-matrix condition estimate beyond which a matrix is reported as
/// lacking a complete biorthonormal system.
pub const DEFAULT_DEFECTIVE_COND: f64 = 1e12;

/// Relative threshold for kernel detection: `‖Dv‖ ≤ tol·‖D‖·‖v‖`.
pub const DEFAULT_KERNEL_TOL: f64 = 1e-8;
