//! Exact Laplace and Jacobi spectra of the model hypersurfaces, and Morse
//! index counting.
//!
//! The Laplacian of a round sphere `S^m(ρ)` has eigenvalues `ℓ(ℓ+m-1)/ρ²`
//! with multiplicity `dim H_ℓ(S^m)`. On the closed half-sphere with Neumann
//! conditions only the harmonics even under the reflection survive; their
//! count is `E(m, ℓ) = Σ_{j ≤ ℓ, j ≡ ℓ (2)} dim H_j(S^{m-1})`. Products add
//! eigenvalues and multiply multiplicities, and the Jacobi operator of every
//! catalog model is `Δ + c` with constant `c`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{HalvedFactor, ModelHypersurface, ModelKind, SphereFactor};

/// Relative tolerance for merging closed-form eigenvalues.
pub const MERGE_TOL: f64 = 1e-12;

/// Mode indices: `[ℓ]` for single-factor models, `[ℓ, m]` for products.
pub type ModeLabel = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralLine {
    pub value: f64,
    pub multiplicity: u64,
    /// All mode tuples merged into this line.
    pub label: Vec<ModeLabel>,
}

/// Sorted eigenvalue lines. Every eigenvalue strictly below `exact_below`
/// is present with its exact multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub lines: Vec<SpectralLine>,
    pub exact_below: f64,
}

fn same_value(a: f64, b: f64) -> bool {
    (a - b).abs() <= MERGE_TOL * a.abs().max(b.abs()).max(1.0)
}

impl Spectrum {
    /// Sort and merge lines whose values agree to [`MERGE_TOL`].
    pub fn from_lines(mut lines: Vec<SpectralLine>, exact_below: f64) -> Result<Self> {
        lines.sort_by(|a, b| a.value.total_cmp(&b.value));
        let mut merged: Vec<SpectralLine> = Vec::with_capacity(lines.len());
        for line in lines {
            match merged.last_mut() {
                Some(last) if same_value(last.value, line.value) => {
                    last.multiplicity = last
                        .multiplicity
                        .checked_add(line.multiplicity)
                        .ok_or_else(|| Error::Unsupported("multiplicity overflows u64".into()))?;
                    last.label.extend(line.label);
                }
                _ => merged.push(line),
            }
        }
        Ok(Self { lines: merged, exact_below })
    }

    /// Lines strictly below the exactness threshold.
    pub fn exact_lines(&self) -> impl Iterator<Item = &SpectralLine> {
        self.lines.iter().filter(move |l| l.value < self.exact_below)
    }

    /// Total multiplicity of eigenvalues `< x`. Only meaningful for
    /// `x <= exact_below`.
    pub fn count_below(&self, x: f64) -> u64 {
        self.lines.iter().filter(|l| l.value < x).map(|l| l.multiplicity).sum()
    }

    /// Eigenvalues repeated by multiplicity, truncated to `max_len`.
    pub fn expanded(&self, max_len: usize) -> Vec<f64> {
        let mut out = Vec::new();
        for l in self.exact_lines() {
            for _ in 0..l.multiplicity {
                if out.len() == max_len {
                    return out;
                }
                out.push(l.value);
            }
        }
        out
    }

    fn shifted(mut self, shift: f64) -> Self {
        for l in &mut self.lines {
            l.value += shift;
        }
        self.exact_below += shift;
        self
    }

    /// CSV with header `value,multiplicity,label`. Labels are `ℓ:m` tuples
    /// joined by `|`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,multiplicity,label\n");
        for l in &self.lines {
            let labels: Vec<String> = l
                .label
                .iter()
                .map(|t| t.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(":"))
                .collect();
            let _ = writeln!(out, "{:.16e},{},{}", l.value, l.multiplicity, labels.join("|"));
        }
        out
    }
}

fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(c)
}

fn to_u64(v: Option<u128>, what: &str) -> Result<u64> {
    v.and_then(|v| u64::try_from(v).ok())
        .ok_or_else(|| Error::Unsupported(format!("{what} overflows u64")))
}

/// `dim H_ℓ(S^m) = C(m+ℓ, m) - C(m+ℓ-2, m)`; valid for `m >= 0`.
pub fn harmonic_dim(m: usize, l: usize) -> Result<u64> {
    let (m, l) = (m as u64, l as u64);
    let a = binomial(m + l, m);
    let b = if l >= 2 { binomial(m + l - 2, m) } else { Some(0) };
    to_u64(a.zip(b).map(|(a, b)| a - b), "harmonic dimension")
}

/// Neumann multiplicity `E(m, ℓ)` of `ℓ(ℓ+m-1)` on the half-sphere `S^m_+`.
pub fn hemisphere_multiplicity(m: usize, l: usize) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidDimension("hemisphere dimension must be >= 1".into()));
    }
    let mut total: u64 = 0;
    for j in (l % 2..=l).step_by(2) {
        total = total
            .checked_add(harmonic_dim(m - 1, j)?)
            .ok_or_else(|| Error::Unsupported("hemisphere multiplicity overflows u64".into()))?;
    }
    Ok(total)
}

fn check_sphere(m: usize, radius: f64) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidDimension("sphere dimension must be >= 1".into()));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidDimension(format!("radius {radius} must be positive")));
    }
    Ok(())
}

fn sphere_value(m: usize, radius: f64, l: usize) -> f64 {
    (l * (l + m - 1)) as f64 / (radius * radius)
}

fn round_spectrum(m: usize, radius: f64, lmax: usize, mult: impl Fn(usize, usize) -> Result<u64>) -> Result<Spectrum> {
    check_sphere(m, radius)?;
    let lines = (0..=lmax)
        .map(|l| Ok(SpectralLine { value: sphere_value(m, radius, l), multiplicity: mult(m, l)?, label: vec![vec![l]] }))
        .collect::<Result<Vec<_>>>()?;
    Spectrum::from_lines(lines, sphere_value(m, radius, lmax + 1))
}

/// Laplace spectrum of the full sphere `S^m(radius)` up to degree `lmax`.
pub fn sphere_laplace_spectrum(m: usize, radius: f64, lmax: usize) -> Result<Spectrum> {
    round_spectrum(m, radius, lmax, harmonic_dim)
}

/// Neumann Laplace spectrum of the half-sphere `S^m_+(radius)` up to degree
/// `lmax`.
pub fn hemisphere_laplace_spectrum(m: usize, radius: f64, lmax: usize) -> Result<Spectrum> {
    round_spectrum(m, radius, lmax, hemisphere_multiplicity)
}

/// Spectrum of a product: all pairwise sums, multiplicities multiplied,
/// labels concatenated.
pub fn product_spectrum(a: &Spectrum, b: &Spectrum) -> Result<Spectrum> {
    let mut lines = Vec::with_capacity(a.lines.len() * b.lines.len());
    for la in &a.lines {
        for lb in &b.lines {
            let multiplicity = la
                .multiplicity
                .checked_mul(lb.multiplicity)
                .ok_or_else(|| Error::Unsupported("product multiplicity overflows u64".into()))?;
            let label = la
                .label
                .iter()
                .flat_map(|x| lb.label.iter().map(move |y| x.iter().chain(y).copied().collect()))
                .collect();
            lines.push(SpectralLine { value: la.value + lb.value, multiplicity, label });
        }
    }
    Spectrum::from_lines(lines, a.exact_below.min(b.exact_below))
}

/// Spectrum of one factor, exact at least below `threshold`.
fn factor_spectrum(f: &SphereFactor, threshold: f64) -> Result<Spectrum> {
    let mut lmax = 0;
    while sphere_value(f.dim, f.radius, lmax + 1) <= threshold {
        lmax += 1;
    }
    if f.halved {
        hemisphere_laplace_spectrum(f.dim, f.radius, lmax)
    } else {
        sphere_laplace_spectrum(f.dim, f.radius, lmax)
    }
}

/// Neumann Laplace spectrum of the model, exact at least below `threshold`.
pub fn laplace_spectrum(m: &ModelHypersurface, threshold: f64) -> Result<Spectrum> {
    let [f1, f2] = m.factors();
    let s1 = factor_spectrum(&f1, threshold)?;
    if f2.dim == 0 {
        return Ok(s1);
    }
    let s2 = factor_spectrum(&f2, threshold)?;
    let mut p = product_spectrum(&s1, &s2)?;
    let cut = p.exact_below;
    p.lines.retain(|l| l.value < cut);
    Ok(p)
}

/// How much of the Jacobi spectrum to compute.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cutoff {
    /// Every eigenvalue strictly below the value.
    Below(f64),
    /// At least this many eigenvalues, counted with multiplicity.
    Lowest(usize),
}

/// Neumann spectrum of `J = Δ + c`. All returned lines are exact.
pub fn jacobi_spectrum(m: &ModelHypersurface, cutoff: Cutoff) -> Result<Spectrum> {
    let c = m.geometric_data().potential;
    let spectrum = match cutoff {
        Cutoff::Below(x) => laplace_spectrum(m, x + c)?,
        Cutoff::Lowest(count) => {
            let mut threshold = c.max(1.0);
            loop {
                let s = laplace_spectrum(m, threshold)?;
                if s.count_below(s.exact_below) >= count as u64 {
                    let mut seen = 0;
                    let mut s = s;
                    s.lines.retain(|l| {
                        let keep = seen < count as u64;
                        seen += l.multiplicity;
                        keep
                    });
                    break s;
                }
                threshold *= 2.0;
            }
        }
    };
    Ok(spectrum.shifted(-c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexKind {
    Strong,
    Weak,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub model: ModelHypersurface,
    /// Which index `paper_claim` refers to.
    pub kind: IndexKind,
    pub strong_index: u64,
    pub weak_index: u64,
    pub lambda1: f64,
    pub lambda1_weak: f64,
    pub negative_lines: Vec<SpectralLine>,
    pub paper_claim: Option<u64>,
    pub discrepancy_flag: bool,
    pub notes: Vec<String>,
}

/// Tolerance below which a closed-form Jacobi eigenvalue counts as zero.
pub fn zero_tolerance(potential: f64) -> f64 {
    1e-9 * potential.abs().max(1.0)
}

/// `(√(k/(n+2)), √((k+2)/(n+2)))`: the radii between which the half
/// H-torus has weak index exactly `n + 1`.
pub fn radius_window(n: usize, k: usize) -> Result<(f64, f64)> {
    if n < 2 || k < 1 || k >= n {
        return Err(Error::InvalidDimension(format!("need 1 <= k <= n-1, got n={n}, k={k}")));
    }
    let d = (n + 2) as f64;
    Ok(((k as f64 / d).sqrt(), ((k + 2) as f64 / d).sqrt()))
}

fn in_window(n: usize, k: usize, r: f64) -> bool {
    let d = (n + 2) as f64;
    let r2 = r * r;
    let slack = 1e-12;
    r2 >= k as f64 / d - slack && r2 <= (k + 2) as f64 / d + slack
}

/// The published index for this model, if one is stated.
pub fn paper_claim(m: &ModelHypersurface, kind: IndexKind) -> Option<u64> {
    let n = m.n() as u64;
    match (kind, m.kind()) {
        (IndexKind::Strong, ModelKind::Equator | ModelKind::UmbilicalCap) => Some(1),
        (IndexKind::Strong, ModelKind::MinimalCliffordHalf) => Some(n + 1),
        (IndexKind::Weak, ModelKind::UmbilicalCap) => Some(0),
        (IndexKind::Weak, ModelKind::HTorusHalf) => {
            in_window(m.n(), m.k().unwrap(), m.r().unwrap()).then_some(n + 1)
        }
        _ => None,
    }
}

fn index_report(m: &ModelHypersurface, kind: IndexKind) -> Result<IndexReport> {
    let c = m.geometric_data().potential;
    let tol = zero_tolerance(c);
    let mut cut = 1.0;
    let spectrum = loop {
        let s = jacobi_spectrum(m, Cutoff::Below(cut))?;
        if s.count_below(s.exact_below) >= 2 {
            break s;
        }
        cut *= 2.0;
    };
    let negative_lines: Vec<SpectralLine> = spectrum.lines.iter().filter(|l| l.value < -tol).cloned().collect();
    let strong_index = negative_lines
        .iter()
        .try_fold(0u64, |acc, l| acc.checked_add(l.multiplicity))
        .ok_or_else(|| Error::Unsupported("index overflows u64".into()))?;
    let first = &spectrum.lines[0];
    // the lowest mode is the constant function, so deflating it removes one
    let lambda1_weak = if first.multiplicity > 1 { first.value } else { spectrum.lines[1].value };
    let weak_index = strong_index.saturating_sub(1);
    let claim = paper_claim(m, kind);
    let computed = match kind {
        IndexKind::Strong => strong_index,
        IndexKind::Weak => weak_index,
    };
    let mut notes = Vec::new();
    if m.factors().iter().any(|f| f.halved && f.dim >= 2) {
        notes.push("half-sphere multiplicities use reflection-even harmonic counts E(m,l)".to_string());
    }
    if kind == IndexKind::Weak && m.kind() == ModelKind::HTorusHalf && claim.is_none() {
        notes.push("radius outside the weak-index window; the stated bound is MI_W > n+1".to_string());
    }
    if let (Some(p), true) = (claim, claim != Some(computed)) {
        notes.push(format!("paper states {p}, exhaustive mode count gives {computed}"));
    }
    Ok(IndexReport {
        model: m.clone(),
        kind,
        strong_index,
        weak_index,
        lambda1: first.value,
        lambda1_weak,
        negative_lines,
        paper_claim: claim,
        discrepancy_flag: claim.is_some_and(|p| p != computed),
        notes,
    })
}

/// Exact strong Morse index: number of negative Neumann eigenvalues of `J`.
pub fn strong_index(m: &ModelHypersurface) -> Result<IndexReport> {
    index_report(m, IndexKind::Strong)
}

/// Exact weak Morse index (mean-zero variations).
pub fn weak_index(m: &ModelHypersurface) -> Result<IndexReport> {
    index_report(m, IndexKind::Weak)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub r: f64,
    pub strong_index: u64,
    pub weak_index: u64,
    pub lambda1: f64,
    pub lambda1_weak: f64,
}

/// `lo, lo + step, ...` up to `hi` (inclusive up to rounding).
pub fn radius_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidDimension(format!("bad grid {lo}:{hi}:{step}")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

/// Strong and weak indices of `HTorusHalf(n, k, r)` for every `r` in
/// `radii`, computed in parallel and returned in input order.
pub fn index_scan(n: usize, k: usize, halved: HalvedFactor, radii: &[f64]) -> Result<Vec<ScanRow>> {
    radii
        .par_iter()
        .map(|&r| {
            let m = ModelHypersurface::h_torus_half(n, k, r)?.with_halved(halved);
            let rep = weak_index(&m)?;
            Ok(ScanRow {
                r,
                strong_index: rep.strong_index,
                weak_index: rep.weak_index,
                lambda1: rep.lambda1,
                lambda1_weak: rep.lambda1_weak,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowSummary {
    pub n: usize,
    pub k: usize,
    pub target_weak_index: u64,
    /// First and last grid radius of the first run with weak index `n + 1`.
    pub empirical: Option<(f64, f64)>,
    pub analytic: (f64, f64),
    pub max_endpoint_deviation: Option<f64>,
    /// True when the weak index equals `n + 1` on more than one separate run.
    pub fragmented: bool,
}

/// Locate the radius window with weak index `n + 1` in a scan.
pub fn summarize_window(n: usize, k: usize, rows: &[ScanRow]) -> Result<WindowSummary> {
    let target = n as u64 + 1;
    let analytic = radius_window(n, k)?;
    let mut runs: Vec<(f64, f64)> = Vec::new();
    let mut current: Option<(f64, f64)> = None;
    for row in rows {
        if row.weak_index == target {
            current = Some(match current {
                Some((lo, _)) => (lo, row.r),
                None => (row.r, row.r),
            });
        } else if let Some(run) = current.take() {
            runs.push(run);
        }
    }
    runs.extend(current);
    let empirical = runs.first().copied();
    let max_endpoint_deviation =
        empirical.map(|(lo, hi)| (lo - analytic.0).abs().max((hi - analytic.1).abs()));
    Ok(WindowSummary {
        n,
        k,
        target_weak_index: target,
        empirical,
        analytic,
        max_endpoint_deviation,
        fragmented: runs.len() > 1,
    })
}

/// CSV with header `r,strong,weak,lambda1,lambda1_weak`.
pub fn scan_to_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from("r,strong,weak,lambda1,lambda1_weak\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{:.16e},{},{},{:.16e},{:.16e}",
            r.r, r.strong_index, r.weak_index, r.lambda1, r.lambda1_weak
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(s: &Spectrum) -> Vec<(f64, u64)> {
        s.lines.iter().map(|l| (l.value, l.multiplicity)).collect()
    }

    fn assert_pairs(s: &Spectrum, expected: &[(f64, u64)]) {
        let got = pairs(s);
        assert_eq!(got.len(), expected.len(), "{got:?}");
        for ((v, m), (ev, em)) in got.iter().zip(expected) {
            assert!((v - ev).abs() < 1e-12, "{got:?}");
            assert_eq!(m, em, "{got:?}");
        }
    }

    // hemisphere multiplicities E(m, l), l = 0..6, from a brute-force count of
    // harmonic polynomials even in the last coordinate
    const HEMI: [[u64; 7]; 4] = [
        [1, 1, 1, 1, 1, 1, 1],
        [1, 2, 3, 4, 5, 6, 7],
        [1, 3, 6, 10, 15, 21, 28],
        [1, 4, 10, 20, 35, 56, 84],
    ];

    // full-sphere harmonic dimensions for m = 1..4
    const FULL: [[u64; 7]; 4] = [
        [1, 2, 2, 2, 2, 2, 2],
        [1, 3, 5, 7, 9, 11, 13],
        [1, 4, 9, 16, 25, 36, 49],
        [1, 5, 14, 30, 55, 91, 140],
    ];

    #[test]
    fn multiplicity_tables() {
        for m in 1..=4 {
            for l in 0..=6 {
                assert_eq!(hemisphere_multiplicity(m, l).unwrap(), HEMI[m - 1][l], "E({m},{l})");
                assert_eq!(harmonic_dim(m, l).unwrap(), FULL[m - 1][l], "dim H_{l}(S^{m})");
            }
        }
    }

    #[test]
    fn parity_partition() {
        // even + odd reflection classes exhaust the full-sphere harmonics
        for m in 1..=6 {
            for l in 0..=8 {
                let even = hemisphere_multiplicity(m, l).unwrap();
                let odd = if l == 0 { 0 } else { hemisphere_multiplicity(m, l - 1).unwrap() };
                assert_eq!(even + odd, harmonic_dim(m, l).unwrap());
            }
        }
    }

    #[test]
    fn circle_spectrum() {
        assert_pairs(&sphere_laplace_spectrum(1, 1.0, 2).unwrap(), &[(0.0, 1), (1.0, 2), (4.0, 2)]);
    }

    #[test]
    fn scaled_two_sphere() {
        let s = sphere_laplace_spectrum(2, 0.5f64.sqrt(), 1).unwrap();
        assert_pairs(&s, &[(0.0, 1), (4.0, 3)]);
        assert!((s.exact_below - 12.0).abs() < 1e-12);
    }

    #[test]
    fn clifford_factor_values() {
        for n in 2..8 {
            for k in 1..n {
                let s = sphere_laplace_spectrum(k, (k as f64 / n as f64).sqrt(), 4).unwrap();
                for (i, line) in s.lines.iter().enumerate() {
                    let expect = (n * i * (k + i - 1)) as f64 / k as f64;
                    assert!((line.value - expect).abs() < 1e-10 * expect.max(1.0));
                }
            }
        }
    }

    #[test]
    fn hemisphere_spectra() {
        assert_pairs(&hemisphere_laplace_spectrum(2, 1.0, 1).unwrap(), &[(0.0, 1), (2.0, 2)]);
        assert_pairs(
            &hemisphere_laplace_spectrum(1, 1.0, 3).unwrap(),
            &[(0.0, 1), (1.0, 1), (4.0, 1), (9.0, 1)],
        );
        assert_pairs(&hemisphere_laplace_spectrum(3, 1.0, 2).unwrap(), &[(0.0, 1), (3.0, 3), (8.0, 6)]);
    }

    #[test]
    fn invalid_dimensions() {
        assert!(matches!(sphere_laplace_spectrum(0, 1.0, 2), Err(Error::InvalidDimension(_))));
        assert!(matches!(hemisphere_laplace_spectrum(2, 0.0, 2), Err(Error::InvalidDimension(_))));
        assert!(radius_window(3, 3).is_err());
    }

    #[test]
    fn product_examples() {
        let one = Spectrum::from_lines(vec![SpectralLine { value: 0.0, multiplicity: 1, label: vec![vec![0]] }], 10.0)
            .unwrap();
        let b = sphere_laplace_spectrum(1, 1.0, 2).unwrap();
        assert_eq!(pairs(&product_spectrum(&one, &b).unwrap()), pairs(&b));

        let a = Spectrum::from_lines(
            vec![
                SpectralLine { value: 0.0, multiplicity: 1, label: vec![vec![0]] },
                SpectralLine { value: 2.0, multiplicity: 2, label: vec![vec![1]] },
            ],
            6.0,
        )
        .unwrap();
        let b = Spectrum::from_lines(
            vec![
                SpectralLine { value: 0.0, multiplicity: 1, label: vec![vec![0]] },
                SpectralLine { value: 1.0, multiplicity: 1, label: vec![vec![1]] },
            ],
            4.0,
        )
        .unwrap();
        let p = product_spectrum(&a, &b).unwrap();
        assert_pairs(&p, &[(0.0, 1), (1.0, 1), (2.0, 2), (3.0, 2)]);
        assert_eq!(p.exact_below, 4.0);
    }

    #[test]
    fn half_clifford_laplace_lines() {
        // values 2p² + 2q² with p ∈ Z (circle), q >= 0 (Neumann interval)
        let m = ModelHypersurface::minimal_clifford_half(2, 1).unwrap();
        let s = laplace_spectrum(&m, 17.0).unwrap();
        let expected = [(0.0, 1), (2.0, 3), (4.0, 2), (8.0, 3), (10.0, 4), (16.0, 2)];
        for (v, mult) in expected {
            let line = s.lines.iter().find(|l| (l.value - v).abs() < 1e-12).expect("line present");
            assert_eq!(line.multiplicity, mult, "value {v}");
        }
        assert!(s.exact_below > 17.0);
    }

    #[test]
    fn equator_jacobi() {
        for n in 2..=6 {
            let m = ModelHypersurface::equator(n).unwrap();
            let s = jacobi_spectrum(&m, Cutoff::Lowest(3)).unwrap();
            assert_eq!(s.lines[0].value, -(n as f64));
            assert_eq!(s.lines[0].multiplicity, 1);
            assert_eq!(s.lines[1].value, 0.0);
            assert_eq!(s.lines[1].multiplicity, n as u64);
            let rep = strong_index(&m).unwrap();
            assert_eq!(rep.strong_index, 1);
            assert!(!rep.discrepancy_flag);
        }
    }

    #[test]
    fn cap_jacobi() {
        let m = ModelHypersurface::umbilical_cap(3, 0.5).unwrap();
        let s = jacobi_spectrum(&m, Cutoff::Below(1.0)).unwrap();
        assert!((s.lines[0].value + 12.0).abs() < 1e-12);
        assert!(s.lines[1].value.abs() < 1e-12);
        let w = weak_index(&m).unwrap();
        assert_eq!((w.strong_index, w.weak_index), (1, 0));
        assert_eq!(w.paper_claim, Some(0));
    }

    #[test]
    fn htorus_lambda1() {
        let m = ModelHypersurface::h_torus_half(2, 1, 0.6).unwrap();
        let s = jacobi_spectrum(&m, Cutoff::Lowest(1)).unwrap();
        assert!((s.lines[0].value + 4.340_277_777_777_778).abs() < 1e-12);
    }

    #[test]
    fn clifford_index_discrepancy() {
        let m = ModelHypersurface::minimal_clifford_half(2, 1).unwrap();
        let rep = strong_index(&m).unwrap();
        assert_eq!(rep.strong_index, 4);
        assert_pairs(&Spectrum::from_lines(rep.negative_lines.clone(), 0.0).unwrap(), &[(-4.0, 1), (-2.0, 3)]);
        assert_eq!(rep.paper_claim, Some(3));
        assert!(rep.discrepancy_flag);
        for n in 2..=7 {
            for k in 1..n {
                for h in [HalvedFactor::First, HalvedFactor::Second] {
                    let m = ModelHypersurface::minimal_clifford_half(n, k).unwrap().with_halved(h);
                    assert_eq!(strong_index(&m).unwrap().strong_index, n as u64 + 2, "n={n} k={k} {h:?}");
                }
            }
        }
    }

    #[test]
    fn torus_limit_matches_clifford() {
        for n in 2..=5 {
            for k in 1..n {
                let t = ModelHypersurface::h_torus_half(n, k, (k as f64 / n as f64).sqrt()).unwrap();
                let c = ModelHypersurface::minimal_clifford_half(n, k).unwrap();
                let st = jacobi_spectrum(&t, Cutoff::Below(10.0)).unwrap();
                let sc = jacobi_spectrum(&c, Cutoff::Below(10.0)).unwrap();
                assert_eq!(st.lines.len(), sc.lines.len());
                for (a, b) in st.lines.iter().zip(&sc.lines) {
                    assert!((a.value - b.value).abs() < 1e-10);
                    assert_eq!(a.multiplicity, b.multiplicity);
                }
            }
        }
    }

    #[test]
    fn htorus_weak_examples() {
        let inside = ModelHypersurface::h_torus_half(3, 1, 0.5).unwrap();
        let w = weak_index(&inside).unwrap();
        assert_eq!(w.weak_index, 4);
        assert_eq!(w.paper_claim, Some(4));
        assert!(!w.discrepancy_flag);
        let outside = ModelHypersurface::h_torus_half(3, 1, 0.9).unwrap();
        assert!(weak_index(&outside).unwrap().weak_index > 4);
    }

    #[test]
    fn windows() {
        let (lo, hi) = radius_window(2, 1).unwrap();
        assert!((lo - 0.5).abs() < 1e-15 && (hi - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let (lo, hi) = radius_window(4, 2).unwrap();
        assert!((lo - (1.0f64 / 3.0).sqrt()).abs() < 1e-15 && (hi - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn scan_finds_window() {
        let grid = radius_grid(0.3, 0.95, 0.001).unwrap();
        let rows = index_scan(2, 1, HalvedFactor::Second, &grid).unwrap();
        let summary = summarize_window(2, 1, &rows).unwrap();
        assert!(!summary.fragmented);
        assert!(summary.max_endpoint_deviation.unwrap() <= 0.001 + 1e-12, "{summary:?}");
    }

    #[test]
    fn grid_validation() {
        assert!(radius_grid(0.5, 0.4, 0.1).is_err());
        assert!(radius_grid(0.1, 0.4, 0.0).is_err());
        assert_eq!(radius_grid(0.1, 0.4, 0.1).unwrap().len(), 4);
    }

    #[test]
    fn csv_format() {
        let s = hemisphere_laplace_spectrum(2, 1.0, 1).unwrap();
        let csv = s.to_csv();
        assert!(csv.starts_with("value,multiplicity,label\n0.0000000000000000e0,1,0\n"));
    }
}
