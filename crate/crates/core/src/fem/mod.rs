//! P1 finite-element Neumann eigensolver for the two-dimensional models.
//!
//! Curved models are meshed as polyhedral surfaces in `R³` (the equator and
//! caps are intrinsically round hemispheres); the flat half tori use an
//! isometric rectangular chart with a periodic direction. The Jacobi form
//! `Q(f) = ∫|∇f|² - c f²` is discretised as `K₀ - cM`, with the Neumann
//! condition natural.

mod assemble;
mod eigen;
mod index;
mod io;
mod mesh;
mod sparse;

pub use assemble::{assemble, assemble_jacobi, Assembled};
pub use eigen::{solve_lowest, solve_lowest_with, EigenResult, SolverOptions, DENSE_CUTOFF};
pub use index::{
    convergence_study, fem_index, model_mesh, ConvergenceRow, EigenComparison, FemIndexResult, MAX_REFINE,
};
pub use io::{read_off, write_matrix_market, write_off};
pub use mesh::{mesh_cap, mesh_flat_half_torus, mesh_flat_rectangle, mesh_hemisphere, Mesh, MetricMode};
pub use sparse::{rcm_ordering, CsrMatrix, SkylineCholesky};
