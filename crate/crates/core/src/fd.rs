//! Finite-difference stencils on the models.

use crate::models::ModelHypersurface;

/// Second-order central Laplace–Beltrami stencil in chart coordinates.
#[cfg(test)]
fn laplacian_central<F: Fn(&[f64]) -> f64>(m: &ModelHypersurface, f: &F, chart: &[f64], h: f64) -> f64 {
    let (inv, drift) = m.chart_metric(chart);
    let f0 = f(chart);
    let mut p = chart.to_vec();
    let mut acc = 0.0;
    for i in 0..chart.len() {
        p[i] = chart[i] + h;
        let fp = f(&p);
        p[i] = chart[i] - h;
        let fm = f(&p);
        p[i] = chart[i];
        let second = (fp - 2.0 * f0 + fm) / (h * h);
        let first = (fp - fm) / (2.0 * h);
        acc += inv[i] * (second + drift[i] * first);
    }
    acc
}

/// Laplace–Beltrami of `f` at `chart`, one Richardson level on top of the
/// central stencil.
#[cfg(test)]
pub(crate) fn laplacian<F: Fn(&[f64]) -> f64>(m: &ModelHypersurface, f: &F, chart: &[f64], h: f64) -> f64 {
    laplacian_extrapolated(m, f, chart, h, 1)
}

/// Central stencil at steps `h, 2h, …, 2^levels h` combined by repeated
/// Richardson extrapolation; the truncation error is `O(h^{2 levels + 2})`.
#[cfg(test)]
pub(crate) fn laplacian_extrapolated<F: Fn(&[f64]) -> f64>(
    m: &ModelHypersurface,
    f: &F,
    chart: &[f64],
    h: f64,
    levels: u32,
) -> f64 {
    let mut table: Vec<f64> = (0..=levels).map(|j| laplacian_central(m, f, chart, h * 2f64.powi(j as i32))).collect();
    for level in 1..=levels {
        let factor = 4f64.powi(level as i32);
        for j in 0..table.len() - 1 {
            table[j] = (factor * table[j] - table[j + 1]) / (factor - 1.0);
        }
        table.pop();
    }
    table[0]
}

/// Orthonormal basis of the tangent space of the unit sphere at `y`.
fn tangent_frame(y: &[f64]) -> Vec<Vec<f64>> {
    let d = y.len();
    let skip = (0..d).max_by(|&a, &b| y[a].abs().total_cmp(&y[b].abs())).unwrap();
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(d - 1);
    for i in (0..d).filter(|&i| i != skip) {
        let mut v: Vec<f64> = (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect();
        for _ in 0..2 {
            for b in std::iter::once(y).chain(frame.iter().map(Vec::as_slice)) {
                let p: f64 = v.iter().zip(b).map(|(a, c)| a * c).sum();
                v.iter_mut().zip(b).for_each(|(a, c)| *a -= p * c);
            }
        }
        let len = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        frame.push(v.into_iter().map(|a| a / len).collect());
    }
    frame
}

/// Laplace–Beltrami of `f(y₁, y₂)` on `S^{d₁}(ρ₁) × S^{d₂}(ρ₂)` as the sum
/// of second derivatives along unit-speed great circles in an orthonormal
/// frame. No chart is involved, so the stencil is equally conditioned at
/// every point. Central differences at `h, 2h, …` with `levels` Richardson
/// steps.
pub(crate) fn laplacian_geodesic<F: Fn(&[f64], &[f64]) -> f64>(
    m: &ModelHypersurface,
    f: &F,
    y1: &[f64],
    y2: &[f64],
    h: f64,
    levels: u32,
) -> f64 {
    let [f1, f2] = m.factors();
    let f0 = f(y1, y2);
    let mut acc = 0.0;
    for (which, factor) in [f1, f2].iter().enumerate() {
        if factor.dim == 0 {
            continue;
        }
        let y = if which == 0 { y1 } else { y2 };
        for v in tangent_frame(y) {
            let along = |t: f64| {
                let (c, s) = ((t / factor.radius).cos(), (t / factor.radius).sin());
                let p: Vec<f64> = y.iter().zip(&v).map(|(a, b)| a * c + b * s).collect();
                if which == 0 {
                    f(&p, y2)
                } else {
                    f(y1, &p)
                }
            };
            let mut table: Vec<f64> = (0..=levels)
                .map(|j| {
                    let s = h * 2f64.powi(j as i32);
                    (along(s) - 2.0 * f0 + along(-s)) / (s * s)
                })
                .collect();
            for level in 1..=levels {
                let factor = 4f64.powi(level as i32);
                for j in 0..table.len() - 1 {
                    table[j] = (factor * table[j] - table[j + 1]) / (factor - 1.0);
                }
                table.pop();
            }
            acc += table[0];
        }
    }
    acc
}

/// One-sided second-order derivative `g'(0)` from `g(0), g(h), g(2h)`.
pub(crate) fn one_sided<G: Fn(f64) -> f64>(g: &G, h: f64) -> f64 {
    (-3.0 * g(0.0) + 4.0 * g(h) - g(2.0 * h)) / (2.0 * h)
}
