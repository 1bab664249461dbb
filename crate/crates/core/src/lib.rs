//! Spectral geometry of the model free-boundary CMC hypersurfaces of the
//! upper unit hemisphere `S^{n+1}_+ = S^{n+1} ∩ {x_{n+2} >= 0}`.
//!
//! The crate is organised around four layers:
//!
//! * [`models`]: the catalog (equator, umbilical caps, half minimal Clifford
//!   tori, half H-tori), their closed-form curvature invariants and explicit
//!   embeddings.
//! * [`spectra`]: exact Laplace and Jacobi spectra with multiplicities,
//!   strong/weak Morse indices and the H-torus radius window.
//! * [`verify`]: identity, inequality and eigenvalue-bound checks.
//! * [`fem`]: an independent P1 finite-element Neumann eigensolver used to
//!   cross-check the closed-form engine on two-dimensional models.

pub mod error;
pub mod fem;
mod fd;
pub mod models;
pub mod report;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
pub use models::{GeometricData, HalvedFactor, ModelHypersurface, ModelKind};
pub use report::{BoundReport, IdentityReport};
pub use spectra::{IndexReport, SpectralLine, Spectrum};

/// Version string embedded in every emitted report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
