//! Suite runner producing a flat list of reports.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::algebra::{alpha_h, char_poly_random_check, dichotomy_scan, p_h, simons_residual};
use super::bounds::{cmc_family_scan, lambda1_bound_cmc, lambda1_bound_minimal, CurvatureReading};
use super::identities::{check_boundary_identities, check_position_identities};
use super::inequalities::{alencar_equality_witnesses, alencar_random_suite, kato_random_suite};
use crate::error::{Error, Result};
use crate::models::{free_boundary_check, HalvedFactor, ModelHypersurface};
use crate::report::{IdentityReport, Report};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    #[default]
    All,
    Identities,
    Algebra,
    Alencar,
    Kato,
    Bounds,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Self::All,
            "identities" => Self::Identities,
            "algebra" => Self::Algebra,
            "alencar" => Self::Alencar,
            "kato" => Self::Kato,
            "bounds" => Self::Bounds,
            _ => return Err(Error::Parse(format!("unknown suite `{s}`"))),
        })
    }
}

/// Model family restricting the bounds suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Equator,
    Cap,
    Clifford,
    Htorus,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "equator" => Self::Equator,
            "cap" => Self::Cap,
            "clifford" => Self::Clifford,
            "htorus" => Self::Htorus,
            _ => return Err(Error::Parse(format!("unknown family `{s}`"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Overrides the per-suite default sample count.
    pub samples: Option<usize>,
    pub family: Option<Family>,
    pub n: Option<usize>,
    pub k: Option<usize>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { seed: 42, samples: None, family: None, n: None, k: None }
    }
}

/// Models with `n <= 4` used by the finite-difference identity checks.
pub fn identity_catalog() -> Vec<ModelHypersurface> {
    let mut out = Vec::new();
    for n in 2..=4 {
        out.push(ModelHypersurface::equator(n).unwrap());
        for r in [0.4, 0.7] {
            out.push(ModelHypersurface::umbilical_cap(n, r).unwrap());
        }
        for k in 1..n {
            out.push(ModelHypersurface::minimal_clifford_half(n, k).unwrap());
            for r in [0.45, 0.7] {
                out.push(ModelHypersurface::h_torus_half(n, k, r).unwrap());
            }
        }
    }
    out.push(ModelHypersurface::h_torus_half(3, 1, 0.5).unwrap().with_halved(HalvedFactor::First));
    out.push(ModelHypersurface::minimal_clifford_half(4, 2).unwrap().with_halved(HalvedFactor::First));
    out
}

fn identities(opts: &SuiteOptions) -> Result<Vec<Report>> {
    let points = opts.samples.unwrap_or(100);
    let models = identity_catalog();
    let per_model: Vec<Result<Vec<Report>>> = models
        .par_iter()
        .enumerate()
        .map(|(i, m)| {
            let seed = opts.seed.wrapping_add(i as u64);
            Ok(vec![
                check_position_identities(m, points, 10, seed)?.into(),
                check_boundary_identities(m, points, seed).into(),
                free_boundary_check(m, points, seed).into(),
                simons_residual(m).into(),
            ])
        })
        .collect();
    let mut out = Vec::new();
    for r in per_model {
        out.extend(r?);
    }
    Ok(out)
}

fn alpha_grid_check() -> IdentityReport {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 3..=12 {
        for j in 0..10 {
            let h = 0.5 * j as f64;
            let a = alpha_h(n, h);
            worst = worst.max(p_h(n, h, a).abs());
            count += 1;
        }
    }
    for n in 2..=12 {
        worst = worst.max((alpha_h(n, 0.0) - (n as f64).sqrt()).abs());
    }
    IdentityReport::new("alpha_h_root", count, worst, 1e-12).with_notes("n in 3..=12, H in {0, 0.5, ..., 4.5}")
}

fn algebra(opts: &SuiteOptions) -> Result<Vec<Report>> {
    let mut out: Vec<Report> = Vec::new();
    for n in 2..=8 {
        out.push(dichotomy_scan(n)?.into());
    }
    out.push(char_poly_random_check(opts.samples.unwrap_or(10_000), opts.seed).into());
    out.push(alpha_grid_check().into());
    for n in 2..=6 {
        out.push(simons_residual(&ModelHypersurface::equator(n)?).into());
        for k in 1..n {
            out.push(simons_residual(&ModelHypersurface::minimal_clifford_half(n, k)?).into());
            for r in [0.2, 0.5, 0.8] {
                out.push(simons_residual(&ModelHypersurface::h_torus_half(n, k, r)?).into());
            }
        }
    }
    Ok(out)
}

fn alencar(opts: &SuiteOptions) -> Vec<Report> {
    let mut out: Vec<Report> = alencar_random_suite(8, opts.samples.unwrap_or(100_000), opts.seed)
        .into_iter()
        .map(Report::from)
        .collect();
    out.push(alencar_equality_witnesses(8).into());
    out
}

fn bounds(opts: &SuiteOptions, summarize_scan: bool) -> Result<Vec<Report>> {
    let dims: Vec<usize> = match opts.n {
        Some(n) => vec![n],
        None => (2..=6).collect(),
    };
    let wants = |f: Family| opts.family.is_none_or(|x| x == f);
    let mut out: Vec<Report> = Vec::new();
    for &n in &dims {
        if wants(Family::Equator) {
            out.push(lambda1_bound_minimal(&ModelHypersurface::equator(n)?)?.into());
        }
        if wants(Family::Clifford) {
            for k in (1..n).filter(|&k| opts.k.is_none_or(|x| x == k)) {
                out.push(lambda1_bound_minimal(&ModelHypersurface::minimal_clifford_half(n, k)?)?.into());
            }
        }
        if wants(Family::Cap) {
            for r in [0.3, 0.5, 0.8] {
                out.push(lambda1_bound_cmc(&ModelHypersurface::umbilical_cap(n, r)?, CurvatureReading::Squared)?.into());
            }
        }
    }
    if wants(Family::Htorus) {
        let lo = *dims.first().unwrap();
        let hi = *dims.last().unwrap();
        let mut scan = cmc_family_scan(lo..=hi, 0.01, CurvatureReading::Squared)?;
        if let Some(k) = opts.k {
            scan.retain(|r| r.family_params.k() == Some(k));
        }
        if summarize_scan {
            let worst = scan.iter().map(|r| (-r.slack).max(0.0)).fold(0.0, f64::max);
            let misplaced = scan
                .iter()
                .filter(|r| r.equality != (r.family_params.k() == Some(r.family_params.n() - 1)))
                .count();
            out.push(
                IdentityReport::new(format!("cmc_family_scan[n={lo}..={hi}]"), scan.len(), worst, 1e-9)
                    .with_notes(format!("equality off the k = n-1 family at {misplaced} points"))
                    .into(),
            );
            if misplaced > 0 {
                out.push(IdentityReport::new("cmc_equality_set", scan.len(), misplaced as f64, 0.0).into());
            }
        } else {
            out.extend(scan.into_iter().map(Report::from));
        }
    }
    Ok(out)
}

/// Run a suite. Output order is deterministic for a given `opts`.
pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<Vec<Report>> {
    Ok(match suite {
        Suite::Identities => identities(opts)?,
        Suite::Algebra => algebra(opts)?,
        Suite::Alencar => alencar(opts),
        Suite::Kato => vec![kato_random_suite(opts.samples.unwrap_or(100), 3, 8, opts.seed).into()],
        Suite::Bounds => bounds(opts, false)?,
        Suite::All => {
            let mut out = identities(&SuiteOptions { samples: None, ..opts.clone() })?;
            out.extend(algebra(&SuiteOptions { samples: None, ..opts.clone() })?);
            out.extend(alencar(&SuiteOptions { samples: None, ..opts.clone() }));
            out.push(kato_random_suite(100, 3, 8, opts.seed).into());
            out.extend(bounds(opts, true)?);
            out
        }
    })
}
