//! Closed-form algebraic checks: Simons residuals, the `|A|²`-dichotomy, the
//! 2×2 characteristic polynomial and the polynomial `P_H`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{ModelHypersurface, ModelKind};
use crate::report::IdentityReport;

/// Residuals of Simons' identity for parallel second fundamental form
/// (`∇A = 0`, `Δ|A|² = 0` on the whole catalog):
///
/// * minimal: `|A|²(n - |A|²)`
/// * CMC: `(n(1 + H²/n²) - |Å|²)|Å|² + H tr(Å³)`
///
/// Both are normalised by `(1 + |A|²)²` and must vanish.
pub fn simons_residual(m: &ModelHypersurface) -> IdentityReport {
    let g = m.geometric_data();
    let n = m.n() as f64;
    let scale = (1.0 + g.norm_a2).powi(2);
    let cmc = ((n * (1.0 + g.h * g.h / (n * n)) - g.norm_a0_2) * g.norm_a0_2 + g.h * g.trace_a0_cubed()) / scale;
    let mut residual = cmc.abs();
    let mut notes = format!("cmc form {cmc:.3e}");
    if m.is_minimal() {
        let minimal = g.norm_a2 * (n - g.norm_a2) / scale;
        residual = residual.max(minimal.abs());
        notes.push_str(&format!("; minimal form {minimal:.3e}"));
    }
    IdentityReport::new(format!("simons[{m}]"), 1, residual, 1e-10).with_notes(notes)
}

/// Every minimal member of the catalog in dimension `n` (and the H-torus at
/// its minimal radius) has `|A|² ∈ {0, n}`.
pub fn dichotomy_scan(n: usize) -> Result<IdentityReport> {
    let mut models = vec![ModelHypersurface::equator(n)?];
    for k in 1..n {
        models.push(ModelHypersurface::minimal_clifford_half(n, k)?);
        models.push(ModelHypersurface::h_torus_half(n, k, (k as f64 / n as f64).sqrt())?);
    }
    let nf = n as f64;
    let mut attained: Vec<f64> = Vec::new();
    let mut worst: f64 = 0.0;
    for m in &models {
        let g = m.geometric_data();
        let a2 = g.norm_a2;
        if m.kind() == ModelKind::HTorusHalf {
            // only the H = 0 member belongs to the minimal family
            worst = worst.max(g.h.abs() / nf);
        }
        worst = worst.max(a2.abs().min((a2 - nf).abs()) / nf);
        if !attained.iter().any(|v| (v - a2).abs() < 1e-9 * nf) {
            attained.push(a2);
        }
    }
    attained.sort_by(f64::total_cmp);
    let shown: Vec<String> = attained.iter().map(|v| format!("{v:.12}")).collect();
    Ok(IdentityReport::new(format!("dichotomy[n={n}]"), models.len(), worst, 1e-12)
        .with_notes(format!("attained |A|^2 = {{{}}}", shown.join(", "))))
}

/// Roots of `λ² - (|A|²+n)λ + n|A|² - H²`, the characteristic polynomial of
/// `[[|A|², H], [H, n]]`, and the ratios `γ± = (n - λ± + H)/(|A|² - λ± + H)`.
///
/// `(1, γ+)` spans the eigenspace of `λ-` and `(1, γ-)` that of `λ+`;
/// `eigvec_residual` is the largest relative residual of those pairings.
/// A `γ` is `None` when its denominator vanishes, in which case the paired
/// eigenvector is `(0, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharPolyResult {
    pub lambda_minus: f64,
    pub lambda_plus: f64,
    pub gamma_minus: Option<f64>,
    pub gamma_plus: Option<f64>,
    pub discriminant: f64,
    pub eigvec_residual: f64,
}

pub fn char_poly(n: usize, norm_a2: f64, h: f64) -> Result<CharPolyResult> {
    let nf = n as f64;
    if n < 2 {
        return Err(Error::InvalidDimension(format!("n = {n} must be >= 2")));
    }
    if !(norm_a2.is_finite() && h.is_finite()) || norm_a2 < h * h / nf - 1e-12 * norm_a2.abs().max(1.0) {
        return Err(Error::DegenerateInput(format!("need |A|^2 >= H^2/n, got |A|^2 = {norm_a2}, H = {h}")));
    }
    let b = norm_a2 + nf;
    let discriminant = (norm_a2 - nf).powi(2) + 4.0 * h * h;
    let root = discriminant.sqrt();
    if root <= 1e-12 * b {
        return Err(Error::DegenerateInput("repeated root |A|^2 = n, H = 0".into()));
    }
    let lambda_plus = 0.5 * (b + root);
    // product of the roots avoids cancellation in the smaller one
    let lambda_minus = (nf * norm_a2 - h * h) / lambda_plus;
    let gamma = |lambda: f64| {
        let den = norm_a2 - lambda + h;
        let num = nf - lambda + h;
        let tiny = 1e-14 * b;
        match (num.abs() <= tiny, den.abs() <= tiny) {
            (true, true) => Err(Error::DegenerateInput(format!("gamma is 0/0 at lambda = {lambda}"))),
            (false, true) => Ok(None),
            _ => Ok(Some(num / den)),
        }
    };
    let gamma_plus = gamma(lambda_plus)?;
    let gamma_minus = gamma(lambda_minus)?;
    let residual = |gamma: Option<f64>, lambda: f64| {
        let (v0, v1) = match gamma {
            Some(g) => (1.0, g),
            None => (0.0, 1.0),
        };
        let r0 = norm_a2 * v0 + h * v1 - lambda * v0;
        let r1 = h * v0 + nf * v1 - lambda * v1;
        (r0 * r0 + r1 * r1).sqrt() / ((v0 * v0 + v1 * v1).sqrt() * b)
    };
    let eigvec_residual = residual(gamma_plus, lambda_minus).max(residual(gamma_minus, lambda_plus));
    Ok(CharPolyResult { lambda_minus, lambda_plus, gamma_minus, gamma_plus, discriminant, eigvec_residual })
}

/// Vieta relations and eigenvector pairings of [`char_poly`] on random
/// admissible `(n, |A|², H)`.
pub fn char_poly_random_check(samples: usize, seed: u64) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut skipped = 0;
    for _ in 0..samples {
        let n = rng.random_range(2..=10usize);
        let h: f64 = rng.random_range(-10.0..10.0);
        let a2 = h * h / n as f64 + rng.random_range(0.0..20.0);
        let r = match char_poly(n, a2, h) {
            Ok(r) => r,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        let nf = n as f64;
        let scale = (a2 + nf).max(1.0);
        let sum = (r.lambda_minus + r.lambda_plus - (a2 + nf)).abs() / scale;
        let prod = (r.lambda_minus * r.lambda_plus - (nf * a2 - h * h)).abs() / (scale * scale);
        worst = worst.max(sum).max(prod).max(r.eigvec_residual);
    }
    // the eigenvector residual inherits the conditioning of `|A|² - λ + H`
    IdentityReport::new("char_poly_vieta", samples, worst, 1e-10)
        .with_notes(format!("seed={seed}; relative residuals; {skipped} degenerate draws skipped"))
}

/// Coefficient of the linear term of `P_H`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhCoefficient {
    /// `(n-2)/√(n(n-1))`, as used in the proof.
    #[default]
    Proof,
    /// `(n-2)/√(n-1)`, the displayed coefficient.
    Statement,
}

impl PhCoefficient {
    fn beta(self, n: usize) -> f64 {
        let nf = n as f64;
        match self {
            Self::Proof => (nf - 2.0) / (nf * (nf - 1.0)).sqrt(),
            Self::Statement => (nf - 2.0) / (nf - 1.0).sqrt(),
        }
    }
}

/// `P_H(x) = x² + β H x - n(1 + H²/n²)`.
pub fn p_h_with(coef: PhCoefficient, n: usize, h: f64, x: f64) -> f64 {
    let nf = n as f64;
    x * x + coef.beta(n) * h * x - nf * (1.0 + h * h / (nf * nf))
}

pub fn p_h(n: usize, h: f64, x: f64) -> f64 {
    p_h_with(PhCoefficient::Proof, n, h, x)
}

/// Positive root of `P_H`, `2c / (b + √(b² + 4c))` with `b = βH`,
/// `c = n(1 + H²/n²)`.
pub fn alpha_h_with(coef: PhCoefficient, n: usize, h: f64) -> f64 {
    let nf = n as f64;
    let b = coef.beta(n) * h;
    let c = nf * (1.0 + h * h / (nf * nf));
    2.0 * c / (b + (b * b + 4.0 * c).sqrt())
}

pub fn alpha_h(n: usize, h: f64) -> f64 {
    alpha_h_with(PhCoefficient::Proof, n, h)
}
