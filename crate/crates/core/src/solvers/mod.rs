//! Problem assembly and solution: 1D Galerkin, 1D collocation, and
//! multi-dimensional frequency-space collocation.

mod colloc;
mod galerkin;
mod problem;
mod tensor;

pub use colloc::{colloc_eig, colloc_matrix, colloc_solve, CollocSolution};
pub use galerkin::{assemble_mass, assemble_stiffness, galerkin_solve, l2_error, L2Target};
pub use problem::{ProblemSpec, ReactionSpec, SourceSpec, Term};
pub use tensor::{nd_colloc_solve, NdSolution, Tensor};
