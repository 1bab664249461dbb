//! Catalog of model free-boundary hypersurfaces in the upper hemisphere.
//!
//! Every model is a product of (at most two) round spheres sitting in
//! `S^{n+1} ⊂ R^{n+2}`:
//!
//! * `Equator(n)`: the totally geodesic `S^n_+`.
//! * `UmbilicalCap(n, r)`: the half of a small sphere `S^n(r)` centred on an
//!   axis inside `{x_{n+2} = 0}`.
//! * `MinimalCliffordHalf(n, k)`: half of `S^k(√(k/n)) × S^{n-k}(√((n-k)/n))`.
//! * `HTorusHalf(n, k, r)`: half of `S^k(r) × S^{n-k}(√(1-r²))`.
//!
//! Exactly one factor is cut by the hyperplane `x_{n+2} = 0`; which one is
//! recorded by [`HalvedFactor`]. All four families share the parametrisation
//! `x = (ρ₁ y₁, ρ₂ y₂)`, `ν = (-ρ₂ y₁, ρ₁ y₂)` with `ρ₁² + ρ₂² = 1`, where the
//! cap and the equator use a zero-dimensional second factor (the axis point).

use std::fmt;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::IdentityReport;

/// Largest supported intrinsic dimension.
pub const MAX_DIM: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    Equator,
    UmbilicalCap,
    MinimalCliffordHalf,
    HTorusHalf,
}

/// Which product factor is cut by `x_{n+2} = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HalvedFactor {
    First,
    #[default]
    Second,
}

/// A validated model hypersurface. Construct through the named constructors
/// or by deserializing a [`ModelDescriptor`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelDescriptor", into = "ModelDescriptor")]
pub struct ModelHypersurface {
    kind: ModelKind,
    n: usize,
    k: Option<usize>,
    r: Option<f64>,
    halved: Option<HalvedFactor>,
}

/// Canonical JSON form `{kind, n, k?, r?, halved_factor?}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDescriptor {
    pub kind: ModelKind,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halved_factor: Option<HalvedFactor>,
}

fn check_n(n: usize) -> Result<()> {
    if !(2..=MAX_DIM).contains(&n) {
        return Err(Error::InvalidModel(format!("n = {n} outside 2..={MAX_DIM}")));
    }
    Ok(())
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k < 1 || k >= n {
        return Err(Error::InvalidModel(format!("k = {k} outside 1..={}", n - 1)));
    }
    Ok(())
}

impl ModelHypersurface {
    pub fn equator(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self { kind: ModelKind::Equator, n, k: None, r: None, halved: None })
    }

    /// Half of the small sphere of radius `r`. `r = 1` is normalised to the
    /// equator.
    pub fn umbilical_cap(n: usize, r: f64) -> Result<Self> {
        check_n(n)?;
        if !(r > 0.0 && r <= 1.0) {
            return Err(Error::InvalidModel(format!("cap radius r = {r} outside (0, 1]")));
        }
        if r == 1.0 {
            return Self::equator(n);
        }
        Ok(Self { kind: ModelKind::UmbilicalCap, n, k: None, r: Some(r), halved: None })
    }

    pub fn minimal_clifford_half(n: usize, k: usize) -> Result<Self> {
        check_n(n)?;
        check_k(n, k)?;
        Ok(Self {
            kind: ModelKind::MinimalCliffordHalf,
            n,
            k: Some(k),
            r: None,
            halved: Some(HalvedFactor::default()),
        })
    }

    pub fn h_torus_half(n: usize, k: usize, r: f64) -> Result<Self> {
        check_n(n)?;
        check_k(n, k)?;
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidModel(format!("torus radius r = {r} outside (0, 1)")));
        }
        Ok(Self {
            kind: ModelKind::HTorusHalf,
            n,
            k: Some(k),
            r: Some(r),
            halved: Some(HalvedFactor::default()),
        })
    }

    /// Select the halving convention. Ignored for the equator and caps,
    /// which have a single factor.
    pub fn with_halved(mut self, halved: HalvedFactor) -> Self {
        if self.halved.is_some() {
            self.halved = Some(halved);
        }
        self
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> Option<usize> {
        self.k
    }

    pub fn r(&self) -> Option<f64> {
        self.r
    }

    pub fn halved_factor(&self) -> Option<HalvedFactor> {
        self.halved
    }

    pub fn is_umbilical(&self) -> bool {
        matches!(self.kind, ModelKind::Equator | ModelKind::UmbilicalCap)
    }

    pub fn is_minimal(&self) -> bool {
        matches!(self.kind, ModelKind::Equator | ModelKind::MinimalCliffordHalf)
    }

    /// The two product factors. The second one has dimension zero for the
    /// equator and the caps (it is the axis point at distance `ρ₂` from the
    /// origin).
    pub fn factors(&self) -> [SphereFactor; 2] {
        let n = self.n;
        match self.kind {
            ModelKind::Equator => [
                SphereFactor { dim: n, radius: 1.0, halved: true },
                SphereFactor { dim: 0, radius: 0.0, halved: false },
            ],
            ModelKind::UmbilicalCap => {
                let r = self.r.expect("cap radius");
                [
                    SphereFactor { dim: n, radius: r, halved: true },
                    SphereFactor { dim: 0, radius: (1.0 - r * r).sqrt(), halved: false },
                ]
            }
            ModelKind::MinimalCliffordHalf | ModelKind::HTorusHalf => {
                let k = self.k.expect("torus k");
                let (r1, r2) = match self.kind {
                    ModelKind::HTorusHalf => {
                        let r = self.r.expect("torus radius");
                        (r, (1.0 - r * r).sqrt())
                    }
                    _ => ((k as f64 / n as f64).sqrt(), ((n - k) as f64 / n as f64).sqrt()),
                };
                let first_halved = self.halved == Some(HalvedFactor::First);
                [
                    SphereFactor { dim: k, radius: r1, halved: first_halved },
                    SphereFactor { dim: n - k, radius: r2, halved: !first_halved },
                ]
            }
        }
    }

    /// Ambient dimension `n + 2`.
    pub fn ambient_dim(&self) -> usize {
        self.n + 2
    }

    /// Closed-form curvature invariants.
    pub fn geometric_data(&self) -> GeometricData {
        geometric_data(self)
    }

    /// Index in the chart vector of the angle that is restricted to `[0, π]`
    /// by the halving; the boundary is where it equals `0` or `π`.
    pub fn halved_angle_index(&self) -> usize {
        let [f1, _] = self.factors();
        if f1.halved {
            f1.dim - 1
        } else {
            self.n - 1
        }
    }

    /// Checked embedding; see [`embed`].
    pub fn embed(&self, chart: &[f64]) -> Result<Embedding> {
        embed(self, chart)
    }

    /// Embedding without domain checks. The formulas extend smoothly past
    /// the chart domain, which finite-difference stencils rely on.
    pub fn embed_unchecked(&self, chart: &[f64]) -> Embedding {
        let (y1, y2) = self.factor_points(chart);
        self.embed_factors(&y1, &y2)
    }

    /// Unit points `(y₁, y₂)` of the two sphere factors at a chart point;
    /// `y₂ = [1]` when the second factor is 0-dimensional.
    pub fn factor_points(&self, chart: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let [f1, f2] = self.factors();
        let (a1, a2) = chart.split_at(f1.dim);
        let y2 = if f2.dim == 0 { vec![1.0] } else { sphere_point(a2) };
        (sphere_point(a1), y2)
    }

    /// `x = (ρ₁y₁, ρ₂y₂)`, `ν = (-ρ₂y₁, ρ₁y₂)` with the halved factor's block
    /// last, so that its last coordinate is `x_{n+2}`.
    pub fn embed_factors(&self, y1: &[f64], y2: &[f64]) -> Embedding {
        let [f1, f2] = self.factors();
        let (p1, p2) = (f1.radius, f2.radius);
        let mut block1 = (y1.iter().map(|v| p1 * v).collect::<Vec<_>>(), y1.iter().map(|v| -p2 * v).collect::<Vec<_>>());
        let mut block2 = (y2.iter().map(|v| p2 * v).collect::<Vec<_>>(), y2.iter().map(|v| p1 * v).collect::<Vec<_>>());
        if f1.halved {
            std::mem::swap(&mut block1, &mut block2);
        }
        let mut x = block1.0;
        x.extend(block2.0);
        let mut normal = block1.1;
        normal.extend(block2.1);
        Embedding { x, normal }
    }

    /// Diagonal inverse chart metric `g^{ii}` and first-order drift
    /// coefficients `(1/√g) ∂_i(√g g^{ii})` divided by `g^{ii}`, so that
    /// `Δf = Σ g^{ii} (∂_i² f + drift_i ∂_i f)`.
    pub fn chart_metric(&self, chart: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut inv = Vec::with_capacity(self.n);
        let mut drift = Vec::with_capacity(self.n);
        let mut offset = 0;
        for f in self.factors().iter().filter(|f| f.dim > 0) {
            let angles = &chart[offset..offset + f.dim];
            let mut sin_prod2 = 1.0;
            for (i, &phi) in angles.iter().enumerate() {
                inv.push(1.0 / (f.radius * f.radius * sin_prod2));
                let power = (f.dim - 1 - i) as f64;
                drift.push(if power > 0.0 { power * phi.cos() / phi.sin() } else { 0.0 });
                sin_prod2 *= phi.sin() * phi.sin();
            }
            offset += f.dim;
        }
        (inv, drift)
    }

    /// Random chart point with all polar angles at least `margin` away from
    /// the coordinate singularities and the boundary.
    pub fn sample_interior<R: Rng>(&self, rng: &mut R, margin: f64) -> Vec<f64> {
        let mut chart = Vec::with_capacity(self.n);
        for f in self.factors().iter().filter(|f| f.dim > 0) {
            for i in 0..f.dim {
                let last = i + 1 == f.dim;
                let phi = if last && !f.halved {
                    rng.random_range(0.0..2.0 * PI)
                } else {
                    rng.random_range(margin..PI - margin)
                };
                chart.push(phi);
            }
        }
        chart
    }

    /// Random boundary chart point (halved angle at `0` or `π`).
    pub fn sample_boundary<R: Rng>(&self, rng: &mut R, margin: f64) -> Vec<f64> {
        let mut chart = self.sample_interior(rng, margin);
        let idx = self.halved_angle_index();
        chart[idx] = if rng.random_bool(0.5) { 0.0 } else { PI };
        chart
    }
}

impl fmt::Display for ModelHypersurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ModelKind::Equator => write!(f, "Equator(n={})", self.n),
            ModelKind::UmbilicalCap => write!(f, "UmbilicalCap(n={}, r={})", self.n, self.r.unwrap()),
            ModelKind::MinimalCliffordHalf => write!(
                f,
                "MinimalCliffordHalf(n={}, k={}, halved={:?})",
                self.n,
                self.k.unwrap(),
                self.halved.unwrap()
            ),
            ModelKind::HTorusHalf => write!(
                f,
                "HTorusHalf(n={}, k={}, r={}, halved={:?})",
                self.n,
                self.k.unwrap(),
                self.r.unwrap(),
                self.halved.unwrap()
            ),
        }
    }
}

impl TryFrom<ModelDescriptor> for ModelHypersurface {
    type Error = Error;

    fn try_from(d: ModelDescriptor) -> Result<Self> {
        let reject = |field: &str| Err(Error::InvalidModel(format!("field `{field}` not allowed for {:?}", d.kind)));
        match d.kind {
            ModelKind::Equator => {
                if d.k.is_some() {
                    return reject("k");
                }
                if d.r.is_some() {
                    return reject("r");
                }
                if d.halved_factor.is_some() {
                    return reject("halved_factor");
                }
                Self::equator(d.n)
            }
            ModelKind::UmbilicalCap => {
                if d.k.is_some() {
                    return reject("k");
                }
                if d.halved_factor.is_some() {
                    return reject("halved_factor");
                }
                let r = d.r.ok_or_else(|| Error::InvalidModel("UmbilicalCap requires `r`".into()))?;
                Self::umbilical_cap(d.n, r)
            }
            ModelKind::MinimalCliffordHalf => {
                if d.r.is_some() {
                    return reject("r");
                }
                let k = d.k.ok_or_else(|| Error::InvalidModel("MinimalCliffordHalf requires `k`".into()))?;
                Ok(Self::minimal_clifford_half(d.n, k)?.with_halved(d.halved_factor.unwrap_or_default()))
            }
            ModelKind::HTorusHalf => {
                let k = d.k.ok_or_else(|| Error::InvalidModel("HTorusHalf requires `k`".into()))?;
                let r = d.r.ok_or_else(|| Error::InvalidModel("HTorusHalf requires `r`".into()))?;
                Ok(Self::h_torus_half(d.n, k, r)?.with_halved(d.halved_factor.unwrap_or_default()))
            }
        }
    }
}

impl From<ModelHypersurface> for ModelDescriptor {
    fn from(m: ModelHypersurface) -> Self {
        Self { kind: m.kind, n: m.n, k: m.k, r: m.r, halved_factor: m.halved }
    }
}

impl std::str::FromStr for ModelHypersurface {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidModel(e.to_string()))
    }
}

/// A round sphere factor `S^dim(radius)`, possibly cut in half.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereFactor {
    pub dim: usize,
    pub radius: f64,
    pub halved: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrincipalCurvature {
    pub value: f64,
    pub multiplicity: usize,
}

/// Scalar curvature invariants. `h` is the unnormalised mean curvature
/// `trace(S_ν)`; `potential` is the constant in `J = Δ + potential`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricData {
    pub n: usize,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "normA2")]
    pub norm_a2: f64,
    #[serde(rename = "normA0_2")]
    pub norm_a0_2: f64,
    pub principal_curvatures: Vec<PrincipalCurvature>,
    pub potential: f64,
}

impl GeometricData {
    /// `|Å|`.
    pub fn norm_a0(&self) -> f64 {
        self.norm_a0_2.sqrt()
    }

    /// `tr(Å³) = Σ mult (κ - H/n)³`.
    pub fn trace_a0_cubed(&self) -> f64 {
        let mean = self.h / self.n as f64;
        self.principal_curvatures
            .iter()
            .map(|c| c.multiplicity as f64 * (c.value - mean).powi(3))
            .sum()
    }

    /// The potential written as `|Å|² + n(1 + H²/n²)`.
    pub fn potential_cmc_form(&self) -> f64 {
        let n = self.n as f64;
        self.norm_a0_2 + n * (1.0 + self.h * self.h / (n * n))
    }
}

/// Closed-form invariants. The normal is oriented so that the curvature of
/// the first factor (multiplicity `k` for tori) is positive; for the
/// H-torus this makes `H > 0` exactly when `r < √(k/n)`.
pub fn geometric_data(m: &ModelHypersurface) -> GeometricData {
    let n = m.n;
    let nf = n as f64;
    let pc = |value: f64, multiplicity: usize| PrincipalCurvature { value, multiplicity };
    match m.kind {
        ModelKind::Equator => GeometricData {
            n,
            h: 0.0,
            norm_a2: 0.0,
            norm_a0_2: 0.0,
            principal_curvatures: vec![pc(0.0, n)],
            potential: nf,
        },
        ModelKind::UmbilicalCap => {
            let r = m.r.unwrap();
            let s2 = 1.0 - r * r;
            let kappa = s2.sqrt() / r;
            GeometricData {
                n,
                h: nf * kappa,
                norm_a2: nf * s2 / (r * r),
                norm_a0_2: 0.0,
                principal_curvatures: vec![pc(kappa, n)],
                potential: nf / (r * r),
            }
        }
        ModelKind::MinimalCliffordHalf => {
            let k = m.k.unwrap();
            let kf = k as f64;
            GeometricData {
                n,
                h: 0.0,
                norm_a2: nf,
                norm_a0_2: nf,
                principal_curvatures: vec![
                    pc(((nf - kf) / kf).sqrt(), k),
                    pc(-(kf / (nf - kf)).sqrt(), n - k),
                ],
                potential: 2.0 * nf,
            }
        }
        ModelKind::HTorusHalf => {
            let k = m.k.unwrap();
            let kf = k as f64;
            let r = m.r.unwrap();
            let r2 = r * r;
            let s2 = 1.0 - r2;
            let s = s2.sqrt();
            let h = kf * s / r - (nf - kf) * r / s;
            let norm_a2 = kf * s2 / r2 + (nf - kf) * r2 / s2;
            GeometricData {
                n,
                h,
                norm_a2,
                norm_a0_2: norm_a2 - h * h / nf,
                principal_curvatures: vec![pc(s / r, k), pc(-r / s, n - k)],
                potential: kf / r2 + (nf - kf) / s2,
            }
        }
    }
}

/// Position and unit normal in `R^{n+2}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub x: Vec<f64>,
    pub normal: Vec<f64>,
}

/// Point `y ∈ S^m ⊂ R^{m+1}` in hyperspherical coordinates; the last
/// coordinate is `Π sin φᵢ`, nonnegative when every angle lies in `[0, π]`.
fn sphere_point(angles: &[f64]) -> Vec<f64> {
    let m = angles.len();
    let mut y = Vec::with_capacity(m + 1);
    let mut sin_prod = 1.0;
    for &phi in angles {
        y.push(sin_prod * phi.cos());
        sin_prod *= phi.sin();
    }
    y.push(sin_prod);
    y
}

/// Explicit embedding from a chart point: the first `dim₁` entries are the
/// hyperspherical angles of the first factor, the rest those of the second.
/// Polar angles range over `[0, π]`; the azimuth of a full factor over
/// `[0, 2π]` and that of the halved factor over `[0, π]` (so `x_{n+2} >= 0`).
pub fn embed(m: &ModelHypersurface, chart: &[f64]) -> Result<Embedding> {
    if chart.len() != m.n {
        return Err(Error::OutOfChart(format!("expected {} angles, got {}", m.n, chart.len())));
    }
    let mut offset = 0;
    for f in m.factors().iter().filter(|f| f.dim > 0) {
        for i in 0..f.dim {
            let phi = chart[offset + i];
            let upper = if i + 1 == f.dim && !f.halved { 2.0 * PI } else { PI };
            if !(0.0..=upper).contains(&phi) {
                return Err(Error::OutOfChart(format!("angle {} = {phi} outside [0, {upper}]", offset + i)));
            }
        }
        offset += f.dim;
    }
    Ok(m.embed_unchecked(chart))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Outward unit conormal at a boundary chart point, from a central
/// difference of the embedding along the halved angle.
pub(crate) fn numeric_conormal(m: &ModelHypersurface, chart: &[f64], h: f64) -> Vec<f64> {
    let idx = m.halved_angle_index();
    let mut plus = chart.to_vec();
    let mut minus = chart.to_vec();
    plus[idx] += h;
    minus[idx] -= h;
    let xp = m.embed_unchecked(&plus).x;
    let xm = m.embed_unchecked(&minus).x;
    let mut t: Vec<f64> = xp.iter().zip(&xm).map(|(a, b)| (a - b) / (2.0 * h)).collect();
    let len = norm(&t);
    // outward means decreasing angle at 0, increasing angle at π
    let sign = if chart[idx] < PI / 2.0 { -1.0 } else { 1.0 };
    t.iter_mut().for_each(|v| *v *= sign / len);
    t
}

/// Free-boundary check at random boundary points: the outward conormal is
/// `±e_{n+2}`, the normal is tangent to `∂S^{n+1}_+`, and the point lies on
/// `{x_{n+2} = 0}`.
pub fn free_boundary_check(m: &ModelHypersurface, samples: usize, seed: u64) -> IdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let last = m.ambient_dim() - 1;
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let chart = m.sample_boundary(&mut rng, 0.3);
        let e = m.embed_unchecked(&chart);
        let eta = numeric_conormal(m, &chart, 1e-4);
        let mut dev_plus: f64 = 0.0;
        let mut dev_minus: f64 = 0.0;
        for (i, v) in eta.iter().enumerate() {
            let target = if i == last { 1.0 } else { 0.0 };
            dev_plus = dev_plus.max((v - target).abs());
            dev_minus = dev_minus.max((v + target).abs());
        }
        let checks = [
            dev_plus.min(dev_minus),
            e.x[last].abs(),
            e.normal[last].abs(),
            dot(&e.x, &e.normal).abs(),
            dot(&eta, &e.normal).abs(),
            (norm(&e.normal) - 1.0).abs(),
        ];
        worst = checks.iter().fold(worst, |a, &b| a.max(b));
    }
    IdentityReport::new(format!("free_boundary[{m}]"), samples, worst, 1e-10)
        .with_notes(format!("seed={seed}; conormal vs ±e_(n+2), x_(n+2)=0, <nu,e_(n+2)>=0"))
}
