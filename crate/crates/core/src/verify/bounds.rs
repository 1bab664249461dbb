//! First-eigenvalue bounds for the Jacobi operator.

use serde::{Deserialize, Serialize};

use super::algebra::p_h;
use crate::error::{Error, Result};
use crate::models::{ModelHypersurface, ModelKind};
use crate::report::{BoundCase, BoundReport};
use crate::spectra::{jacobi_spectrum, Cutoff};

/// Mean curvatures below this are treated as minimal and excluded from the
/// CMC bound.
const MIN_H: f64 = 1e-6;

fn lambda1(m: &ModelHypersurface) -> Result<f64> {
    Ok(jacobi_spectrum(m, Cutoff::Lowest(1))?.lines[0].value)
}

/// `λ₁ <= -2n` for minimal, non totally geodesic models (equality on the
/// half Clifford tori); the equator instead reports `λ₁ = -n`.
pub fn lambda1_bound_minimal(m: &ModelHypersurface) -> Result<BoundReport> {
    let n = m.n() as f64;
    let l1 = lambda1(m)?;
    match m.kind() {
        ModelKind::MinimalCliffordHalf => {
            Ok(BoundReport::new(format!("lambda1_minimal[{m}]"), BoundCase::NonGeodesic, l1, -2.0 * n, m.clone()))
        }
        ModelKind::Equator => Ok(BoundReport::new(
            format!("lambda1_minimal[{m}]"),
            BoundCase::TotallyGeodesic,
            l1,
            -n,
            m.clone(),
        )
        .with_notes(format!("totally geodesic: checks lambda1 = -n; the -2n bound does not apply (-n > {})", -2.0 * n))),
        _ => Err(Error::NotApplicable(format!("{m} is not minimal"))),
    }
}

/// Which reading of the curvature term in the CMC bound to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurvatureReading {
    /// `-2n(1 + H²/n²) + βH|Å|`.
    #[default]
    Squared,
    /// `-2n(1 + H/n²) + βH|Å|`, the displayed form.
    Linear,
}

/// CMC first-eigenvalue bound, with `β = (n-2)/√(n(n-1))` and `|Å|`
/// constant so that the integral ratio is `|Å|`:
///
/// * totally umbilical: `λ₁ = -n(1 + H²/n²)`
/// * otherwise, `H > 0`: `λ₁ <= -2n(1 + H²/n²) + βH|Å|`
///
/// Under the squared reading the slack equals `P_H(|Å|)`. Models with
/// `H <= 0` are not covered.
pub fn lambda1_bound_cmc(m: &ModelHypersurface, reading: CurvatureReading) -> Result<BoundReport> {
    let g = m.geometric_data();
    let nf = m.n() as f64;
    let h = g.h;
    let curv = match reading {
        CurvatureReading::Squared => 1.0 + h * h / (nf * nf),
        CurvatureReading::Linear => 1.0 + h / (nf * nf),
    };
    let name = format!("lambda1_cmc[{m}]");
    if m.is_umbilical() {
        return Ok(BoundReport::new(name, BoundCase::TotallyUmbilical, lambda1(m)?, -nf * curv, m.clone())
            .with_notes(format!("H = {h:.12}; totally umbilical: checks lambda1 = -n(1+H^2/n^2)")));
    }
    if h <= MIN_H {
        return Err(Error::NotApplicable(format!("{m} has H = {h:.3e}; the bound needs H > 0")));
    }
    let beta = (nf - 2.0) / (nf * (nf - 1.0)).sqrt();
    let a0 = g.norm_a0();
    let bound = -2.0 * nf * curv + beta * h * a0;
    Ok(BoundReport::new(name, BoundCase::NonUmbilical, lambda1(m)?, bound, m.clone()).with_notes(format!(
        "H = {h:.12}; |A0| = {a0:.12}; P_H(|A0|) = {:.3e}; reading = {reading:?}",
        p_h(m.n(), h, a0)
    )))
}

/// CMC bound over the half H-tori with `2 <= n <= n_max`, all `k`, and
/// `r = step, 2·step, … < 1`, restricted to `H > 0`.
pub fn cmc_family_scan(n_range: std::ops::RangeInclusive<usize>, step: f64, reading: CurvatureReading) -> Result<Vec<BoundReport>> {
    if !(step > 0.0 && step < 1.0) {
        return Err(Error::InvalidDimension(format!("step {step} outside (0, 1)")));
    }
    let count = (1.0 / step).round() as usize;
    let mut out = Vec::new();
    for n in n_range.filter(|&n| n >= 2) {
        for k in 1..n {
            for i in 1..count {
                let r = i as f64 * step;
                if r >= 1.0 {
                    break;
                }
                let m = ModelHypersurface::h_torus_half(n, k, r)?;
                match lambda1_bound_cmc(&m, reading) {
                    Ok(rep) => out.push(rep),
                    Err(Error::NotApplicable(_)) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_examples() {
        let c = lambda1_bound_minimal(&ModelHypersurface::minimal_clifford_half(3, 1).unwrap()).unwrap();
        assert_eq!(c.lambda1, -6.0);
        assert!(c.equality && c.pass && c.case == BoundCase::NonGeodesic);
        let e = lambda1_bound_minimal(&ModelHypersurface::equator(4).unwrap()).unwrap();
        assert_eq!(e.lambda1, -4.0);
        assert_eq!(e.case, BoundCase::TotallyGeodesic);
        // the −2n bound fails for the equator
        assert!(e.lambda1 > -8.0);
        assert!(lambda1_bound_minimal(&ModelHypersurface::umbilical_cap(3, 0.5).unwrap()).is_err());
    }

    #[test]
    fn cmc_examples() {
        let cap = lambda1_bound_cmc(&ModelHypersurface::umbilical_cap(3, 0.5).unwrap(), CurvatureReading::Squared).unwrap();
        assert!((cap.lambda1 + 12.0).abs() < 1e-12 && cap.equality);
        let eq = lambda1_bound_cmc(&ModelHypersurface::h_torus_half(3, 2, 0.6).unwrap(), CurvatureReading::Squared).unwrap();
        assert!(eq.equality && eq.pass, "{eq:?}");
        let strict = lambda1_bound_cmc(&ModelHypersurface::h_torus_half(3, 1, 0.5).unwrap(), CurvatureReading::Squared).unwrap();
        assert!(strict.slack > 1e-3 && !strict.equality, "{strict:?}");
        assert!(matches!(
            lambda1_bound_cmc(&ModelHypersurface::h_torus_half(3, 1, 0.6).unwrap(), CurvatureReading::Squared),
            Err(Error::NotApplicable(_))
        ));
        assert!(lambda1_bound_cmc(&ModelHypersurface::minimal_clifford_half(3, 1).unwrap(), CurvatureReading::Squared).is_err());
    }

    #[test]
    fn family_scan_equality_set() {
        let reps = cmc_family_scan(2..=6, 0.01, CurvatureReading::Squared).unwrap();
        assert!(!reps.is_empty());
        for r in &reps {
            let k = r.family_params.k().unwrap();
            let n = r.family_params.n();
            assert!(r.pass, "{r:?}");
            assert_eq!(r.equality, k == n - 1, "{r:?}");
        }
    }
}
