//! Structured verdicts shared by the verification suites.

use serde::{Deserialize, Serialize};

use crate::models::ModelHypersurface;

/// Outcome of an identity or inequality check over a set of samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub notes: String,
}

impl IdentityReport {
    /// `pass` is derived: it holds exactly when `max_residual <= tolerance`.
    pub fn new(name: impl Into<String>, samples: usize, max_residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            samples,
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
            notes: String::new(),
        }
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }
}

/// Which alternative of a first-eigenvalue theorem a model falls under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundCase {
    /// Minimal, not totally geodesic: `λ₁ <= -2n`.
    NonGeodesic,
    /// Totally geodesic: `λ₁ = -n`.
    TotallyGeodesic,
    /// CMC, not totally umbilical: the `P_H`-type upper bound.
    NonUmbilical,
    /// Totally umbilical: `λ₁ = -n(1 + H²/n²)`.
    TotallyUmbilical,
}

/// First-eigenvalue bound verdict. `slack = bound - lambda1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub case: BoundCase,
    pub lambda1: f64,
    pub bound: f64,
    pub slack: f64,
    pub equality: bool,
    pub pass: bool,
    pub family_params: ModelHypersurface,
    pub notes: String,
}

/// Equality threshold on `|slack|`.
pub const EQUALITY_TOL: f64 = 1e-9;

impl BoundReport {
    pub fn new(
        name: impl Into<String>,
        case: BoundCase,
        lambda1: f64,
        bound: f64,
        family_params: ModelHypersurface,
    ) -> Self {
        let slack = bound - lambda1;
        Self {
            name: name.into(),
            case,
            lambda1,
            bound,
            slack,
            equality: slack.abs() < EQUALITY_TOL,
            // the rigid cases assert the value itself, the others an inequality
            pass: match case {
                BoundCase::TotallyGeodesic | BoundCase::TotallyUmbilical => slack.abs() < EQUALITY_TOL,
                BoundCase::NonGeodesic | BoundCase::NonUmbilical => slack >= -EQUALITY_TOL,
            },
            family_params,
            notes: String::new(),
        }
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }
}

/// Either kind of verdict, as emitted by the suite runner.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Report {
    Identity(IdentityReport),
    Bound(BoundReport),
}

impl Report {
    pub fn pass(&self) -> bool {
        match self {
            Report::Identity(r) => r.pass,
            Report::Bound(r) => r.pass,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Report::Identity(r) => &r.name,
            Report::Bound(r) => &r.name,
        }
    }
}

impl From<IdentityReport> for Report {
    fn from(r: IdentityReport) -> Self {
        Report::Identity(r)
    }
}

impl From<BoundReport> for Report {
    fn from(r: BoundReport) -> Self {
        Report::Bound(r)
    }
}
