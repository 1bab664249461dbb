//! Identity, inequality and first-eigenvalue bound checks.

mod algebra;
mod bounds;
mod identities;
mod inequalities;
mod suite;

pub use algebra::{
    alpha_h, alpha_h_with, char_poly, char_poly_random_check, dichotomy_scan, p_h, p_h_with, simons_residual,
    CharPolyResult, PhCoefficient,
};
pub use bounds::{cmc_family_scan, lambda1_bound_cmc, lambda1_bound_minimal, CurvatureReading};
pub use identities::{check_boundary_identities, check_position_identities};
pub use inequalities::{
    alencar_equality_witnesses, alencar_inequality, alencar_random_suite, kato_inequality_check, kato_random_suite,
    random_harmonic_poly, TrigPoly, TrigTerm, Wave,
};
pub use suite::{identity_catalog, run_suite, Family, Suite, SuiteOptions};
