//! Rational spectral methods for PDEs with the fractional Laplacian on
//! unbounded domains.
//!
//! The basis functions are modified mapped Gegenbauer functions (MMGFs),
//! `R_n^λ(x) = (1+x²)^{-(λ+1)/2} C_n^λ(x/√(1+x²))`, which are orthogonal on
//! the whole real line with a uniform weight and admit closed-form Fourier
//! transforms (modified-Bessel sums) and fractional Laplacians (Gauss
//! hypergeometric sums). Those closed forms are what make Galerkin and
//! direct collocation schemes for `(-Δ)^{α/2} u + ρ u = f` practical here.
//!
//! Module map:
//! - [`specfun`]: scalar kernels (log-Gamma, Pochhammer, ₂F₁, `K_μ`,
//!   Gegenbauer polynomials).
//! - [`mmgf`]: the basis itself (mapping, recurrence evaluation, norms,
//!   coefficient fields).
//! - [`fracops`]: fractional Laplacian and Fourier transform of the basis,
//!   decay predictions.
//! - [`grids`]: Gauss–Gegenbauer nodes/weights, the mapped real-line grid,
//!   quadrature and interpolation.
//! - [`linalg`]: dense LU, symmetric tridiagonal and dense eigensolvers.
//! - [`solvers`]: Galerkin and collocation solvers in 1D, frequency-space
//!   collocation in d dimensions.
//!
//! Parallelism: matrix assembly (stiffness quadrature, collocation operator
//! tables) runs in parallel over rows/nodes via rayon; everything else is
//! single-threaded per call. All public types are immutable after
//! construction and safe to share across threads.

pub mod error;
pub mod fracops;
pub mod grids;
pub mod linalg;
pub mod mmgf;
mod mp;
mod quad;
pub mod solvers;
pub mod specfun;

pub use error::{Error, Result};
pub use fracops::FracOrder;
pub use grids::MappedGrid;
pub use linalg::DenseMatrix;
pub use mmgf::{BasisSpec, SpectralField};
pub use solvers::{ProblemSpec, SourceSpec};
