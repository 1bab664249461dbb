//! Finite-difference checks of the position and Gauss-map identities.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::fd::{laplacian_geodesic, one_sided};
use crate::models::{dot, ModelHypersurface};
use crate::report::IdentityReport;

/// (step, Richardson levels) of the geodesic Laplace–Beltrami stencil.
const LAP: (f64, u32) = (3e-3, 2);
/// Inner and outer stencils for `J(-Δ⟨x,a⟩)`. The outer step is larger
/// because it differentiates the rounding noise of the inner one.
const NESTED_INNER: (f64, u32) = (2e-2, 3);
const NESTED_OUTER: (f64, u32) = (5e-2, 3);
/// Step of the one-sided conormal derivative.
const BOUNDARY_STEP: f64 = 1e-4;
/// Polar angles stay this far from the chart singularities.
const MARGIN: f64 = 0.3;

fn random_unit<R: rand::Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let len = dot(&v, &v).sqrt();
        if len > 1e-8 {
            return v.into_iter().map(|x| x / len).collect();
        }
    }
}

/// At random interior points and random unit vectors `a`, evaluate with
/// finite differences
///
/// * `Δ⟨x,a⟩ = H⟨ν,a⟩ - n⟨x,a⟩`
/// * `(Δ + |A|²)⟨ν,a⟩ = H⟨x,a⟩`
/// * `J⟨x,a⟩ = |A|²⟨x,a⟩ + H⟨ν,a⟩`
/// * `J⟨ν,a⟩ = n⟨ν,a⟩ + H⟨x,a⟩`
/// * `J(n⟨x,a⟩ - H⟨ν,a⟩) = (n|A|² - H²)⟨x,a⟩`
/// * `J(-Δ⟨x,a⟩) = (n|A|² - H²)⟨x,a⟩`, with a nested stencil
///
/// where `J = Δ + |A|² + n`. The residual is the largest absolute violation.
pub fn check_position_identities(
    m: &ModelHypersurface,
    points: usize,
    directions: usize,
    seed: u64,
) -> Result<IdentityReport> {
    let worst = position_residuals(m, points, directions, seed, LAP, NESTED_INNER, NESTED_OUTER)?;
    let max = worst.iter().copied().fold(0.0, f64::max);
    Ok(IdentityReport::new(format!("position_identities[{m}]"), points * directions, max, 1e-5).with_notes(
        format!(
            "seed={seed}; per-identity max residuals [lap_x, lap_nu, J_x, J_nu, J_combo, J_nested] = [{}]",
            worst.iter().map(|w| format!("{w:.3e}")).collect::<Vec<_>>().join(", ")
        ),
    ))
}

fn position_residuals(
    m: &ModelHypersurface,
    points: usize,
    directions: usize,
    seed: u64,
    lap: (f64, u32),
    nested_inner: (f64, u32),
    nested_outer: (f64, u32),
) -> Result<[f64; 6]> {
    let g = m.geometric_data();
    let (n, h, a2, c) = (m.n() as f64, g.h, g.norm_a2, g.potential);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [0.0f64; 6];
    for _ in 0..points {
        let chart = m.sample_interior(&mut rng, MARGIN);
        let e = m.embed(&chart)?;
        let (y1, y2) = m.factor_points(&chart);
        for _ in 0..directions {
            let a = random_unit(&mut rng, m.ambient_dim());
            let fx = |p: &[f64], q: &[f64]| dot(&m.embed_factors(p, q).x, &a);
            let fnu = |p: &[f64], q: &[f64]| dot(&m.embed_factors(p, q).normal, &a);
            let (xa, na) = (dot(&e.x, &a), dot(&e.normal, &a));
            let lx = laplacian_geodesic(m, &fx, &y1, &y2, lap.0, lap.1);
            let ln = laplacian_geodesic(m, &fnu, &y1, &y2, lap.0, lap.1);
            let jx = lx + c * xa;
            let jn = ln + c * na;
            let inner = |p: &[f64], q: &[f64]| -laplacian_geodesic(m, &fx, p, q, nested_inner.0, nested_inner.1);
            let j_nested =
                laplacian_geodesic(m, &inner, &y1, &y2, nested_outer.0, nested_outer.1) + c * inner(&y1, &y2);
            let residuals = [
                lx - (h * na - n * xa),
                ln + a2 * na - h * xa,
                jx - (a2 * xa + h * na),
                jn - (n * na + h * xa),
                n * jx - h * jn - (n * a2 - h * h) * xa,
                j_nested - (n * a2 - h * h) * xa,
            ];
            for (w, r) in worst.iter_mut().zip(residuals) {
                *w = w.max(r.abs());
            }
        }
    }
    Ok(worst)
}

/// At random boundary points, one-sided differences along the outward
/// conormal `η = -e_{n+2}` check `∇_η⟨x,a⟩ = ⟨η,a⟩` and
/// `∇_η⟨ν,a⟩ = A(η,η)⟨η,a⟩` for random `a` and for every basis vector (the
/// latter includes `∇_η⟨ν,e_i⟩ = 0` for `i <= n+1`). Here
/// `A(η,η) = ⟨∇̄_η ν, η⟩`, which is minus the principal curvature of the
/// halved factor in the trace convention used for `H`.
pub fn check_boundary_identities(m: &ModelHypersurface, points: usize, seed: u64) -> IdentityReport {
    let dim = m.ambient_dim();
    let idx = m.halved_angle_index();
    let [f1, f2] = m.factors();
    let kappa_halved = if f1.halved { f2.radius / f1.radius } else { -f1.radius / f2.radius };
    let a_eta = -kappa_halved;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for _ in 0..points {
        let chart = m.sample_boundary(&mut rng, MARGIN);
        let inward = if chart[idx] < 1.0 { 1.0 } else { -1.0 };
        let (inv, _) = m.chart_metric(&chart);
        let speed = inv[idx].sqrt();
        let along = |t: f64| {
            let mut p = chart.clone();
            p[idx] += inward * t;
            m.embed_unchecked(&p)
        };
        let mut dirs: Vec<Vec<f64>> = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        dirs.extend((0..3).map(|_| random_unit(&mut rng, dim)));
        for a in &dirs {
            let eta_a = -a[dim - 1];
            let dx = -speed * one_sided(&|t| dot(&along(t).x, a), BOUNDARY_STEP);
            let dn = -speed * one_sided(&|t| dot(&along(t).normal, a), BOUNDARY_STEP);
            worst = worst.max((dx - eta_a).abs()).max((dn - a_eta * eta_a).abs());
            samples += 1;
        }
    }
    IdentityReport::new(format!("boundary_identities[{m}]"), samples, worst, 1e-6)
        .with_notes(format!("seed={seed}; A(eta,eta) = {a_eta:.12}"))
}
