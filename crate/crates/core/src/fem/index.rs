//! Gap-aware Morse index counts and convergence tables from the FEM oracle.

use serde::{Deserialize, Serialize};

use super::assemble::assemble;
use super::eigen::{solve_lowest, EigenResult};
use super::mesh::{mesh_cap, mesh_flat_half_torus, Mesh};
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};
use crate::models::{ModelHypersurface, ModelKind};
use crate::spectra::{jacobi_spectrum, paper_claim, strong_index, zero_tolerance, Cutoff, IndexKind};

pub const MAX_REFINE: usize = 8;
/// Floor of the zero-gap threshold.
pub const MIN_EPS_GAP: f64 = 1e-3;
/// Eigenvalues within this distance of zero drive the error estimate.
const GAP_WINDOW: f64 = 1.0;

/// Mesh of an `n = 2` model: a (scaled) hemisphere for the equator and caps,
/// a `2^(refine+1) × 2^refine` periodic chart for the tori.
pub fn model_mesh(m: &ModelHypersurface, refine: usize) -> Result<Mesh> {
    if m.n() != 2 {
        return Err(Error::InvalidDimension(format!("the FEM oracle needs n = 2, got n = {}", m.n())));
    }
    if refine > MAX_REFINE {
        return Err(Error::Unsupported(format!("refine = {refine} outside 0..={MAX_REFINE}")));
    }
    let [f1, f2] = m.factors();
    match m.kind() {
        ModelKind::Equator | ModelKind::UmbilicalCap => mesh_cap(f1.radius, refine),
        ModelKind::MinimalCliffordHalf | ModelKind::HTorusHalf => {
            if refine < 2 {
                return Err(Error::Unsupported(format!("torus charts need refine >= 2, got {refine}")));
            }
            let (full, halved) = if f1.halved { (f2, f1) } else { (f1, f2) };
            mesh_flat_half_torus(full.radius, halved.radius, 1 << (refine + 1), 1 << refine)
        }
    }
}

fn jacobi_pencil(m: &ModelHypersurface, refine: usize) -> Result<(CsrMatrix, CsrMatrix)> {
    let a = assemble(&model_mesh(m, refine)?)?;
    Ok((a.jacobi(m.geometric_data().potential), a.mass))
}

/// Coarsest refinement accepted by [`model_mesh`].
fn min_refine(m: &ModelHypersurface) -> usize {
    match m.kind() {
        ModelKind::Equator | ModelKind::UmbilicalCap => 0,
        _ => 2,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenComparison {
    pub index: usize,
    pub fem: f64,
    pub exact: f64,
    pub abs_error: f64,
    /// `None` when the exact value is zero.
    pub rel_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FemIndexResult {
    pub model: ModelHypersurface,
    pub refine: usize,
    pub cells: usize,
    /// `num_negative` counts eigenvalues below `-eps_gap`.
    pub eigen: EigenResult,
    pub eps_gap: f64,
    /// `max |λ_h - λ_2h|` over eigenvalues within 1 of zero.
    pub error_estimate: f64,
    pub strong_index: usize,
    pub weak_index: usize,
    /// Spectrum of the pencil restricted to M-mean-zero vectors.
    pub weak_eigenvalues: Vec<f64>,
    pub engine_strong_index: u64,
    pub engine_weak_index: u64,
    pub index_agreement: bool,
    pub weak_agreement: bool,
    pub comparison: Vec<EigenComparison>,
    /// Largest relative error over the exact negative eigenvalues.
    pub max_negative_rel_error: f64,
    pub paper_claim: Option<u64>,
    pub paper_claim_weak: Option<u64>,
    pub discrepancy_flag: bool,
    pub notes: Vec<String>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Rayleigh–Ritz values of `(K, M)` on the span of `vectors` after the
/// M-orthogonal projection that removes constants.
fn deflated_values(k: &CsrMatrix, m: &CsrMatrix, vectors: &[Vec<f64>]) -> Vec<f64> {
    let n = m.dim();
    let ones = vec![1.0; n];
    let m1 = m.mul(&ones);
    let area = dot(&ones, &m1);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mean = dot(&m1, v) / area;
        let mut w: Vec<f64> = v.iter().map(|x| x - mean).collect();
        let before = dot(&w, &m.mul(&w)).sqrt();
        for _ in 0..2 {
            let mw = m.mul(&w);
            for b in &basis {
                let p = dot(b, &mw);
                w.iter_mut().zip(b).for_each(|(a, c)| *a -= p * c);
            }
        }
        let len = dot(&w, &m.mul(&w)).sqrt();
        if len > 1e-8 * before.max(1e-300) && len > 1e-12 {
            w.iter_mut().for_each(|x| *x /= len);
            basis.push(w);
        }
    }
    let p = basis.len();
    let kb: Vec<Vec<f64>> = basis.iter().map(|b| k.mul(b)).collect();
    let red = nalgebra::DMatrix::from_fn(p, p, |i, j| 0.5 * (dot(&basis[i], &kb[j]) + dot(&basis[j], &kb[i])));
    let mut values: Vec<f64> = nalgebra::SymmetricEigen::new(red).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// FEM strong and weak index of an `n = 2` model at the given refinement.
///
/// The discretisation error is estimated from the next coarser mesh, and an
/// eigenvalue counts as negative only below `-ε_gap`,
/// `ε_gap = max(1e-3, err_est)`. Eigenvalues in `[-3ε_gap, -ε_gap)` cannot
/// be classified and give `GapTooSmall`.
pub fn fem_index(m: &ModelHypersurface, refine: usize) -> Result<FemIndexResult> {
    let mesh = model_mesh(m, refine)?;
    let a = assemble(&mesh)?;
    let (k, mass) = (a.jacobi(m.geometric_data().potential), a.mass);
    let dof = k.dim();
    let coarse = if refine > min_refine(m) { Some(jacobi_pencil(m, refine - 1)?) } else { None };

    let mut count = 8.min(dof);
    loop {
        let fine = solve_lowest(&k, &mass, count)?;
        let mut error_estimate: f64 = 0.0;
        if let Some((kc, mc)) = &coarse {
            let cc = count.min(kc.dim());
            let rough = solve_lowest(kc, mc, cc)?;
            for (lf, lc) in fine.eigenvalues.iter().zip(&rough.eigenvalues) {
                if lf.abs() <= GAP_WINDOW {
                    error_estimate = error_estimate.max((lf - lc).abs());
                }
            }
        }
        let eps = MIN_EPS_GAP.max(error_estimate);
        let top = *fine.eigenvalues.last().unwrap();
        if top <= 3.0 * eps && count < dof {
            count = (2 * count).min(dof);
            continue;
        }
        if let Some(&bad) = fine.eigenvalues.iter().find(|&&l| (-3.0 * eps..-eps).contains(&l)) {
            return Err(Error::GapTooSmall { eigenvalue: bad, eps_gap: eps });
        }
        return Ok(classify(m, refine, mesh.cells.len(), &k, &mass, fine, eps, error_estimate)?);
    }
}

#[allow(clippy::too_many_arguments)]
fn classify(
    m: &ModelHypersurface,
    refine: usize,
    cells: usize,
    k: &CsrMatrix,
    mass: &CsrMatrix,
    mut eigen: EigenResult,
    eps: f64,
    error_estimate: f64,
) -> Result<FemIndexResult> {
    let strong = eigen.eigenvalues.iter().filter(|&&l| l < -eps).count();
    eigen.num_negative = strong;
    let weak_eigenvalues = deflated_values(k, mass, &eigen.eigenvectors);
    let weak = weak_eigenvalues.iter().filter(|&&l| l < -eps).count();
    let engine = strong_index(m)?;
    let zero = zero_tolerance(m.geometric_data().potential);
    let exact: Vec<f64> = jacobi_spectrum(m, Cutoff::Lowest(eigen.eigenvalues.len()))?
        .expanded(eigen.eigenvalues.len())
        .into_iter()
        .map(|x| if x.abs() <= zero { 0.0 } else { x })
        .collect();
    let comparison: Vec<EigenComparison> = eigen
        .eigenvalues
        .iter()
        .zip(&exact)
        .enumerate()
        .map(|(index, (&fem, &ex))| EigenComparison {
            index,
            fem,
            exact: ex,
            abs_error: (fem - ex).abs(),
            rel_error: (ex != 0.0).then(|| (fem - ex).abs() / ex.abs()),
        })
        .collect();
    let max_negative_rel_error = comparison
        .iter()
        .filter(|c| c.exact < 0.0)
        .filter_map(|c| c.rel_error)
        .fold(0.0, f64::max);
    let claim = paper_claim(m, IndexKind::Strong);
    let claim_weak = paper_claim(m, IndexKind::Weak);
    let mut notes = Vec::new();
    if let Some(c) = claim.filter(|&c| c != strong as u64) {
        notes.push(format!("paper claims strong index {c}; FEM counts {strong}"));
    }
    if let Some(c) = claim_weak.filter(|&c| c != weak as u64) {
        notes.push(format!("paper claims weak index {c}; FEM counts {weak}"));
    }
    Ok(FemIndexResult {
        model: m.clone(),
        refine,
        cells,
        eps_gap: eps,
        error_estimate,
        strong_index: strong,
        weak_index: weak,
        weak_eigenvalues,
        engine_strong_index: engine.strong_index,
        engine_weak_index: engine.weak_index,
        index_agreement: engine.strong_index == strong as u64,
        weak_agreement: engine.weak_index == weak as u64,
        comparison,
        max_negative_rel_error,
        paper_claim: claim,
        paper_claim_weak: claim_weak,
        discrepancy_flag: claim.is_some_and(|c| c != strong as u64)
            || claim_weak.is_some_and(|c| c != weak as u64),
        notes,
        eigen,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub refine: usize,
    pub dof: usize,
    /// Longest mesh edge.
    pub h: f64,
    pub lambda1: f64,
    pub lambda1_error: f64,
    pub lambda2: f64,
    pub lambda2_error: f64,
    /// `log(e_prev / e) / log(h_prev / h)`; absent on the first row or when
    /// the error is at rounding level.
    pub order_lambda1: Option<f64>,
    pub order_lambda2: Option<f64>,
    /// `e_prev / e` for `λ₂`.
    pub ratio_lambda2: Option<f64>,
}

/// Errors of the two lowest eigenvalues against the closed-form spectrum.
/// `λ₁` belongs to the constant mode, which P1 reproduces exactly, so the
/// element order shows in `λ₂`.
pub fn convergence_study(m: &ModelHypersurface, refinements: &[usize]) -> Result<Vec<ConvergenceRow>> {
    let exact = jacobi_spectrum(m, Cutoff::Lowest(2))?.expanded(2);
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &refine in refinements {
        let mesh = model_mesh(m, refine)?;
        let a = assemble(&mesh)?;
        let k = a.jacobi(m.geometric_data().potential);
        let r = solve_lowest(&k, &a.mass, 2)?;
        let (e1, e2) = ((r.eigenvalues[0] - exact[0]).abs(), (r.eigenvalues[1] - exact[1]).abs());
        let h = mesh.max_edge_length();
        let order = |prev: f64, cur: f64, hp: f64| {
            (prev > 1e-11 && cur > 1e-11).then(|| (prev / cur).ln() / (hp / h).ln())
        };
        let (o1, o2, ratio) = match rows.last() {
            Some(p) => (
                order(p.lambda1_error, e1, p.h),
                order(p.lambda2_error, e2, p.h),
                (e2 > 0.0).then(|| p.lambda2_error / e2),
            ),
            None => (None, None, None),
        };
        rows.push(ConvergenceRow {
            refine,
            dof: r.dof,
            h,
            lambda1: r.eigenvalues[0],
            lambda1_error: e1,
            lambda2: r.eigenvalues[1],
            lambda2_error: e2,
            order_lambda1: o1,
            order_lambda2: o2,
            ratio_lambda2: ratio,
        });
    }
    Ok(rows)
}
