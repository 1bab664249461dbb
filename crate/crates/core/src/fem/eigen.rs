//! Lowest eigenpairs of the pencil `K v = λ M v`.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::sparse::{CsrMatrix, SkylineCholesky};
use crate::error::{Error, Result};

/// Largest problem handed to the dense path.
pub const DENSE_CUTOFF: usize = 800;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    /// Eigenvalues below `-zero_tol`.
    pub num_negative: usize,
    pub lambda1: f64,
    pub dof: usize,
    /// `‖K v - λ M v‖ / ‖M v‖` per pair.
    pub residual_norms: Vec<f64>,
    /// M-orthonormal eigenvectors, one per eigenvalue.
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Shift `σ` for `(K - σM)⁻¹`; must lie below the spectrum. When absent
    /// the solver tries `-1, -2, -4, …` until `K - σM` factors.
    pub shift: Option<f64>,
    pub seed: u64,
    pub tol: f64,
    pub max_iter: usize,
    pub dense_cutoff: usize,
    /// Threshold for `num_negative`.
    pub zero_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { shift: None, seed: 42, tol: 1e-8, max_iter: 1000, dense_cutoff: DENSE_CUTOFF, zero_tol: 1e-9 }
    }
}

pub fn solve_lowest(k: &CsrMatrix, m: &CsrMatrix, count: usize) -> Result<EigenResult> {
    solve_lowest_with(k, m, count, &SolverOptions::default())
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn residuals(k: &CsrMatrix, m: &CsrMatrix, values: &[f64], vectors: &[Vec<f64>]) -> Vec<f64> {
    values
        .iter()
        .zip(vectors)
        .map(|(&l, v)| {
            let kv = k.mul(v);
            let mv = m.mul(v);
            let r: Vec<f64> = kv.iter().zip(&mv).map(|(a, b)| a - l * b).collect();
            norm(&r) / norm(&mv)
        })
        .collect()
}

fn finish(k: &CsrMatrix, m: &CsrMatrix, values: Vec<f64>, vectors: Vec<Vec<f64>>, zero_tol: f64) -> EigenResult {
    let residual_norms = residuals(k, m, &values, &vectors);
    EigenResult {
        num_negative: values.iter().filter(|&&l| l < -zero_tol).count(),
        lambda1: values[0],
        dof: k.dim(),
        eigenvalues: values,
        residual_norms,
        eigenvectors: vectors,
    }
}

fn solve_dense(k: &CsrMatrix, m: &CsrMatrix, count: usize, zero_tol: f64) -> Result<EigenResult> {
    let n = k.dim();
    let chol = m.to_dense().cholesky().ok_or(Error::MassNotSpd)?;
    let l = chol.l();
    let x = l.solve_lower_triangular(&k.to_dense()).ok_or(Error::MassNotSpd)?;
    let c = l.solve_lower_triangular(&x.transpose()).ok_or(Error::MassNotSpd)?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    order.truncate(count);
    let lt = l.transpose();
    let mut values = Vec::with_capacity(count);
    let mut vectors = Vec::with_capacity(count);
    for i in order {
        values.push(eig.eigenvalues[i]);
        let w = DMatrix::from_column_slice(n, 1, eig.eigenvectors.column(i).as_slice());
        let v = lt.solve_upper_triangular(&w).ok_or(Error::MassNotSpd)?;
        vectors.push(v.as_slice().to_vec());
    }
    Ok(finish(k, m, values, vectors, zero_tol))
}

/// Two passes of modified Gram–Schmidt in the M inner product. Columns that
/// collapse are replaced by fresh random vectors.
fn m_orthonormalize(m: &CsrMatrix, cols: &mut [Vec<f64>], rng: &mut ChaCha8Rng) {
    let n = m.dim();
    for j in 0..cols.len() {
        for attempt in 0..4 {
            let before = norm(&cols[j]);
            for _ in 0..2 {
                let mv = m.mul(&cols[j]);
                let (done, rest) = cols.split_at_mut(j);
                for q in done.iter() {
                    let p = dot(q, &mv);
                    for (a, b) in rest[0].iter_mut().zip(q) {
                        *a -= p * b;
                    }
                }
            }
            let mv = m.mul(&cols[j]);
            let len = dot(&cols[j], &mv).sqrt();
            if len.is_finite() && norm(&cols[j]) > 1e-10 * before && len > 0.0 {
                cols[j].iter_mut().for_each(|x| *x /= len);
                break;
            }
            assert!(attempt < 3, "subspace collapsed");
            cols[j] = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        }
    }
}

fn factor_shifted(k: &CsrMatrix, m: &CsrMatrix, shift: Option<f64>) -> Result<SkylineCholesky> {
    if let Some(s) = shift {
        return SkylineCholesky::factor(&k.axpby(1.0, m, -s)).ok_or_else(|| {
            Error::Unsupported(format!("shift {s} is not below the spectrum (K - sM not positive definite)"))
        });
    }
    let mut s = -1.0;
    for _ in 0..60 {
        if let Some(f) = SkylineCholesky::factor(&k.axpby(1.0, m, -s)) {
            return Ok(f);
        }
        s *= 2.0;
    }
    Err(Error::Unsupported("no shift below the spectrum found".into()))
}

/// Block shift-invert subspace iteration with Rayleigh–Ritz on an
/// M-orthonormal basis.
fn solve_sparse(k: &CsrMatrix, m: &CsrMatrix, count: usize, opts: &SolverOptions) -> Result<EigenResult> {
    let n = k.dim();
    if SkylineCholesky::factor(m).is_none() {
        return Err(Error::MassNotSpd);
    }
    let op = factor_shifted(k, m, opts.shift)?;
    let p = (count + count.div_ceil(2).max(8)).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x: Vec<Vec<f64>> = (0..p).map(|_| (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()).collect();
    let mut worst = f64::INFINITY;
    for _ in 0..opts.max_iter {
        let mut y: Vec<Vec<f64>> = x.iter().map(|v| op.solve(&m.mul(v))).collect();
        m_orthonormalize(m, &mut y, &mut rng);
        let ky: Vec<Vec<f64>> = y.iter().map(|v| k.mul(v)).collect();
        let mut red = DMatrix::zeros(p, p);
        for i in 0..p {
            for j in 0..=i {
                let v = 0.5 * (dot(&y[i], &ky[j]) + dot(&y[j], &ky[i]));
                red[(i, j)] = v;
                red[(j, i)] = v;
            }
        }
        let eig = SymmetricEigen::new(red);
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        x = order
            .iter()
            .map(|&c| {
                let q = eig.eigenvectors.column(c);
                let mut v = vec![0.0; n];
                for (i, yi) in y.iter().enumerate() {
                    let w = q[i];
                    v.iter_mut().zip(yi).for_each(|(a, b)| *a += w * b);
                }
                v
            })
            .collect();
        let values: Vec<f64> = order.iter().map(|&c| eig.eigenvalues[c]).collect();
        let res = residuals(k, m, &values[..count], &x[..count]);
        worst = res.iter().copied().fold(0.0, f64::max);
        if worst <= opts.tol {
            x.truncate(count);
            return Ok(finish(k, m, values[..count].to_vec(), x, opts.zero_tol));
        }
    }
    Err(Error::ConvergenceFailure { iterations: opts.max_iter, max_residual: worst })
}

/// The `count` smallest eigenpairs, ascending. Dense Cholesky reduction up to
/// `opts.dense_cutoff` degrees of freedom, shift-invert subspace iteration
/// above it.
pub fn solve_lowest_with(k: &CsrMatrix, m: &CsrMatrix, count: usize, opts: &SolverOptions) -> Result<EigenResult> {
    let n = k.dim();
    if m.dim() != n {
        return Err(Error::InvalidDimension(format!("K is {n}x{n} but M is {0}x{0}", m.dim())));
    }
    if count == 0 || count > n {
        return Err(Error::InvalidDimension(format!("count = {count} outside 1..={n}")));
    }
    if !k.is_symmetric(1e-12) || !m.is_symmetric(1e-12) {
        return Err(Error::InvalidDimension("K and M must be symmetric".into()));
    }
    if n <= opts.dense_cutoff {
        solve_dense(k, m, count, opts.zero_tol)
    } else {
        solve_sparse(k, m, count, opts)
    }
}
