//! Pointwise algebraic inequalities: the cubic-trace bound for traceless
//! tuples and the Kato-type gradient inequality for traceless Codazzi
//! tensors on a flat chart.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::IdentityReport;

fn cubic_bound(n: usize, sum_sq: f64) -> f64 {
    let nf = n as f64;
    (nf - 2.0) / (nf * (nf - 1.0)).sqrt() * sum_sq.powf(1.5)
}

/// `|Σ aᵢ³| <= (n-2)/√(n(n-1)) (Σ aᵢ²)^{3/2}` for `Σ aᵢ = 0`.
///
/// The residual is the violation relative to `max(1, bound)`; `notes`
/// records the slack and whether the tuple attains equality.
pub fn alencar_inequality(tuple: &[f64]) -> Result<IdentityReport> {
    let n = tuple.len();
    if n < 2 {
        return Err(Error::InvalidDimension(format!("tuple length {n} must be >= 2")));
    }
    let sum: f64 = tuple.iter().sum();
    let scale = tuple.iter().map(|a| a.abs()).sum::<f64>().max(1.0);
    if sum.abs() > 1e-12 * scale {
        return Err(Error::NotTraceless { sum });
    }
    let (lhs, bound) = sides(tuple);
    let slack = bound - lhs;
    let equality = slack.abs() <= 1e-12 * bound.max(1.0);
    Ok(IdentityReport::new(format!("alencar[n={n}]"), 1, (-slack).max(0.0) / bound.max(1.0), 1e-12)
        .with_notes(format!("lhs={lhs:.16e}; bound={bound:.16e}; slack={slack:.3e}; equality={equality}")))
}

fn sides(tuple: &[f64]) -> (f64, f64) {
    let cubes: f64 = tuple.iter().map(|a| a * a * a).sum();
    let squares: f64 = tuple.iter().map(|a| a * a).sum();
    (cubes.abs(), cubic_bound(tuple.len(), squares))
}

/// Mean-centred standard Gaussian tuples for each `n` in `2..=n_max`.
/// One report per `n`; per-`n` streams are seeded from `seed` and `n`.
pub fn alencar_random_suite(n_max: usize, samples: usize, seed: u64) -> Vec<IdentityReport> {
    (2..=n_max)
        .into_par_iter()
        .map(|n| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32));
            let mut worst: f64 = 0.0;
            let mut violations = 0usize;
            let mut tuple = vec![0.0; n];
            for _ in 0..samples {
                for a in tuple.iter_mut() {
                    *a = StandardNormal.sample(&mut rng);
                }
                let mean = tuple.iter().sum::<f64>() / n as f64;
                tuple.iter_mut().for_each(|a| *a -= mean);
                let (lhs, bound) = sides(&tuple);
                let violation = (lhs - bound).max(0.0) / bound.max(1.0);
                if violation > 1e-12 {
                    violations += 1;
                }
                worst = worst.max(violation);
            }
            IdentityReport::new(format!("alencar_random[n={n}]"), samples, worst, 1e-12)
                .with_notes(format!("seed={seed}; violations={violations}"))
        })
        .collect()
}

/// The tuples `(n-1, -1, …, -1)` attain equality for every `n` in `2..=n_max`.
pub fn alencar_equality_witnesses(n_max: usize) -> IdentityReport {
    let mut worst: f64 = 0.0;
    for n in 2..=n_max {
        let mut tuple = vec![-1.0; n];
        tuple[0] = (n - 1) as f64;
        let (lhs, bound) = sides(&tuple);
        worst = worst.max((lhs - bound).abs() / bound.max(1.0));
    }
    IdentityReport::new(format!("alencar_equality[n<={n_max}]"), n_max.saturating_sub(1), worst, 1e-12)
}

/// A one-dimensional factor `f(ω t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Wave {
    Cos(f64),
    Sin(f64),
    Cosh(f64),
    Sinh(f64),
}

impl Wave {
    /// `d^order/dt^order` at `t`.
    fn derivative(self, order: usize, t: f64) -> f64 {
        let shift = order as f64 * PI / 2.0;
        match self {
            Self::Cos(w) => w.powi(order as i32) * (w * t + shift).cos(),
            Self::Sin(w) => w.powi(order as i32) * (w * t + shift).sin(),
            Self::Cosh(w) | Self::Sinh(w) => {
                let even = matches!(self, Self::Cosh(_)) == (order % 2 == 0);
                w.powi(order as i32) * if even { (w * t).cosh() } else { (w * t).sinh() }
            }
        }
    }
}

/// `coef · Π_i waves[i](x_i)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub coef: f64,
    pub waves: Vec<Wave>,
}

/// Sum of separable terms on the flat chart `[0, 2π)^{n-1} × [0, π]`, with
/// exact derivatives of every order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigPoly {
    pub n: usize,
    pub terms: Vec<TrigTerm>,
}

impl TrigPoly {
    pub fn new(n: usize, terms: Vec<TrigTerm>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(format!("n = {n} must be >= 2")));
        }
        if let Some(t) = terms.iter().find(|t| t.waves.len() != n) {
            return Err(Error::InvalidDimension(format!("term has {} factors, expected {n}", t.waves.len())));
        }
        Ok(Self { n, terms })
    }

    /// Partial derivative along the listed axes (with repetition).
    pub fn partial(&self, axes: &[usize], x: &[f64]) -> f64 {
        let mut orders = vec![0usize; self.n];
        for &a in axes {
            orders[a] += 1;
        }
        self.terms
            .iter()
            .map(|t| t.coef * t.waves.iter().enumerate().map(|(i, w)| w.derivative(orders[i], x[i])).product::<f64>())
            .sum()
    }
}

/// Random harmonic function: each term is a product of `cos/sin(ωᵢxᵢ)` in
/// the periodic directions and `cosh/sinh(|ω| x_n)` in the interval
/// direction, with integer frequencies `|ωᵢ| <= max_degree`.
pub fn random_harmonic_poly<R: Rng>(n: usize, max_degree: i32, rng: &mut R) -> TrigPoly {
    let terms = (0..rng.random_range(1..=4))
        .map(|_| {
            let omega: Vec<f64> = loop {
                let w: Vec<f64> = (0..n - 1).map(|_| rng.random_range(-max_degree..=max_degree) as f64).collect();
                if w.iter().any(|&v| v != 0.0) {
                    break w;
                }
            };
            let norm = omega.iter().map(|w| w * w).sum::<f64>().sqrt();
            let mut waves: Vec<Wave> =
                omega.iter().map(|&w| if rng.random_bool(0.5) { Wave::Cos(w) } else { Wave::Sin(w) }).collect();
            waves.push(if rng.random_bool(0.5) { Wave::Cosh(norm) } else { Wave::Sinh(norm) });
            let gauss: f64 = StandardNormal.sample(rng);
            TrigTerm { coef: gauss / (norm * PI).cosh(), waves }
        })
        .collect();
    TrigPoly { n, terms }
}

/// `|∇|T|²|² <= 4n/(n+2) |T|² |∇T|²` for `T = Hess u - (Δu/n) g` on a
/// `grid^n` lattice of the chart. Both sides use exact derivatives.
///
/// The inequality needs `T` traceless with totally symmetric `∇T`. That
/// holds for harmonic `u`; for general `u` the Codazzi defect
/// `∇_k T_ij - ∇_i T_kj` is nonzero and the inequality can fail, so the
/// defect is reported in `notes`.
pub fn kato_inequality_check(u: &TrigPoly, grid: usize) -> IdentityReport {
    let n = u.n;
    let nf = n as f64;
    let constant = 4.0 * nf / (nf + 2.0);
    let total = grid.pow(n as u32);
    let mut rows = Vec::with_capacity(total);
    for idx in 0..total {
        let mut rem = idx;
        let x: Vec<f64> = (0..n)
            .map(|d| {
                let i = rem % grid;
                rem /= grid;
                let len = if d + 1 == n { PI } else { 2.0 * PI };
                let denom = if d + 1 == n { (grid - 1).max(1) } else { grid };
                len * i as f64 / denom as f64
            })
            .collect();
        rows.push(kato_sides(u, &x));
    }
    let scale = rows.iter().map(|r| r.rhs).fold(0.0, f64::max).max(1.0);
    let prod_scale = rows.iter().map(|r| r.t2 * r.grad_t2).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    let mut ratio: f64 = 0.0;
    let mut codazzi: f64 = 0.0;
    for r in &rows {
        worst = worst.max((r.lhs - r.rhs).max(0.0) / scale);
        let denom = r.t2 * r.grad_t2;
        if denom > 1e-12 * prod_scale && denom > 0.0 {
            ratio = ratio.max(r.lhs / denom);
        }
        codazzi = codazzi.max(r.codazzi);
    }
    IdentityReport::new(format!("kato[n={n}]"), total, worst, 1e-10).with_notes(format!(
        "max ratio |grad|T|^2|^2/(|T|^2|grad T|^2) = {ratio:.6}; constant 4n/(n+2) = {constant:.6}; codazzi defect = {codazzi:.3e}"
    ))
}

struct KatoRow {
    lhs: f64,
    rhs: f64,
    t2: f64,
    grad_t2: f64,
    codazzi: f64,
}

fn kato_sides(u: &TrigPoly, x: &[f64]) -> KatoRow {
    let n = u.n;
    let nf = n as f64;
    let mut hess = vec![vec![0.0; n]; n];
    let mut third = vec![vec![vec![0.0; n]; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = u.partial(&[i, j], x);
            hess[i][j] = v;
            hess[j][i] = v;
            for k in 0..n {
                let w = u.partial(&[i, j, k], x);
                third[i][j][k] = w;
                third[j][i][k] = w;
            }
        }
    }
    let lap: f64 = (0..n).map(|i| hess[i][i]).sum();
    let dlap: Vec<f64> = (0..n).map(|k| (0..n).map(|i| third[i][i][k]).sum()).collect();
    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let t = |i: usize, j: usize| hess[i][j] - lap / nf * delta(i, j);
    let dt = |i: usize, j: usize, k: usize| third[i][j][k] - dlap[k] / nf * delta(i, j);
    let mut t2 = 0.0;
    let mut grad_t2 = 0.0;
    let mut grad_norm_sq = vec![0.0; n];
    let mut codazzi: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let tij = t(i, j);
            t2 += tij * tij;
            for k in 0..n {
                let d = dt(i, j, k);
                grad_t2 += d * d;
                grad_norm_sq[k] += 2.0 * tij * d;
                codazzi = codazzi.max((d - dt(k, j, i)).abs());
            }
        }
    }
    let lhs: f64 = grad_norm_sq.iter().map(|g| g * g).sum();
    let rhs = 4.0 * nf / (nf + 2.0) * t2 * grad_t2;
    KatoRow { lhs, rhs, t2, grad_t2, codazzi }
}

/// `count` random harmonic functions with `n` cycling through `2..=4`;
/// `max_residual` is the worst violation over all of them.
pub fn kato_random_suite(count: usize, max_degree: i32, grid: usize, seed: u64) -> IdentityReport {
    let reports: Vec<IdentityReport> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let n = 2 + i % 3;
            let u = random_harmonic_poly(n, max_degree, &mut rng);
            kato_inequality_check(&u, if n == 4 { grid.min(6) } else { grid })
        })
        .collect();
    let worst = reports.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    let failures = reports.iter().filter(|r| !r.pass).count();
    let points: usize = reports.iter().map(|r| r.samples).sum();
    IdentityReport::new(format!("kato_random[count={count}]"), count, worst, 1e-10)
        .with_notes(format!("seed={seed}; {points} grid points; {failures} fields with violations"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alencar_examples() {
        let r = alencar_inequality(&[1.0, -1.0]).unwrap();
        assert!(r.pass && r.notes.contains("equality=true"), "{r:?}");
        let r = alencar_inequality(&[2.0, -1.0, -1.0]).unwrap();
        assert!(r.pass && r.notes.contains("lhs=6.0") && r.notes.contains("equality=true"), "{r:?}");
        let r = alencar_inequality(&[3.0, -1.0, -1.0, -1.0]).unwrap();
        assert!(r.notes.contains("equality=true"), "{r:?}");
        let r = alencar_inequality(&[1.0, 0.5, -1.5]).unwrap();
        assert!(r.pass && r.notes.contains("equality=false"), "{r:?}");
        assert!(matches!(alencar_inequality(&[1.0, 1.0]), Err(Error::NotTraceless { .. })));
        assert!(alencar_inequality(&[0.0]).is_err());
    }

    #[test]
    fn alencar_random_small() {
        for r in alencar_random_suite(8, 2000, 9) {
            assert!(r.pass, "{r:?}");
        }
        assert!(alencar_equality_witnesses(8).pass);
    }

    #[test]
    fn wave_derivatives() {
        let t = 0.37;
        let w = 2.0;
        assert!((Wave::Cos(w).derivative(1, t) + w * (w * t).sin()).abs() < 1e-14);
        assert!((Wave::Sin(w).derivative(3, t) + w.powi(3) * (w * t).cos()).abs() < 1e-12);
        assert!((Wave::Cosh(w).derivative(1, t) - w * (w * t).sinh()).abs() < 1e-14);
        assert!((Wave::Sinh(w).derivative(2, t) - w * w * (w * t).sinh()).abs() < 1e-14);
    }

    #[test]
    fn kato_zero_function() {
        let u = TrigPoly::new(2, vec![]).unwrap();
        let r = kato_inequality_check(&u, 5);
        assert!(r.pass && r.max_residual == 0.0);
    }

    #[test]
    fn kato_non_codazzi_example_violates() {
        // u = cos θ: T is traceless but ∇T is not symmetric, and the ratio
        // reaches 4 > 4n/(n+2) = 2
        let u = TrigPoly::new(2, vec![TrigTerm { coef: 1.0, waves: vec![Wave::Cos(1.0), Wave::Cos(0.0)] }]).unwrap();
        let r = kato_inequality_check(&u, 16);
        assert!(!r.pass, "{r:?}");
        assert!(r.notes.contains("max ratio |grad|T|^2|^2/(|T|^2|grad T|^2) = 4.000000"), "{}", r.notes);
    }

    #[test]
    fn kato_harmonic_example() {
        let u = TrigPoly::new(2, vec![TrigTerm { coef: 0.1, waves: vec![Wave::Cos(1.0), Wave::Cosh(1.0)] }]).unwrap();
        let r = kato_inequality_check(&u, 16);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn kato_random_harmonics() {
        let r = kato_random_suite(30, 3, 6, 11);
        assert!(r.pass, "{r:?}");
    }
}
