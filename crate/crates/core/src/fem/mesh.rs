//! Triangle meshes of the two-dimensional models.

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible cell area.
pub const MIN_CELL_AREA: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MetricMode {
    /// Flat triangles in `R³` approximating a curved surface.
    Embedded,
    /// An isometric planar chart (`z = 0`).
    FlatChart,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub cells: Vec<[usize; 3]>,
    /// Sorted indices of the vertices on `∂Σ`.
    pub boundary_vertices: Vec<usize>,
    pub metric_mode: MetricMode,
    /// `(image, source)`: the image vertex is identified with the source.
    pub periodic_pairs: Vec<(usize, usize)>,
    /// Period of the `x` direction for flat charts.
    pub periodic_length: Option<f64>,
}

fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

impl Mesh {
    /// Edge vectors opposite each corner, `e_i = p_{i+2} - p_{i+1}`.
    pub(crate) fn cell_edges(&self, c: usize) -> [[f64; 3]; 3] {
        let [a, b, d] = self.cells[c].map(|i| self.vertices[i]);
        [sub(&d, &b), sub(&a, &d), sub(&b, &a)]
    }

    pub fn cell_area(&self, c: usize) -> f64 {
        let e = self.cell_edges(c);
        let n = cross(&e[0], &e[1]);
        0.5 * dot3(&n, &n).sqrt()
    }

    pub fn total_area(&self) -> f64 {
        (0..self.cells.len()).map(|c| self.cell_area(c)).sum()
    }

    pub fn max_edge_length(&self) -> f64 {
        (0..self.cells.len())
            .flat_map(|c| self.cell_edges(c))
            .map(|e| dot3(&e, &e).sqrt())
            .fold(0.0, f64::max)
    }

    /// Fails with `DegenerateCell` if any cell is (nearly) flat.
    pub fn validate(&self) -> Result<()> {
        for c in 0..self.cells.len() {
            let area = self.cell_area(c);
            if !(area > MIN_CELL_AREA) {
                return Err(Error::DegenerateCell { cell: c, area });
            }
        }
        Ok(())
    }

    /// Vertex to degree-of-freedom map after merging periodic images, and
    /// the number of degrees of freedom.
    pub fn dof_map(&self) -> (Vec<usize>, usize) {
        let mut root: Vec<usize> = (0..self.vertices.len()).collect();
        for &(image, source) in &self.periodic_pairs {
            root[image] = source;
        }
        let mut dof = vec![usize::MAX; self.vertices.len()];
        let mut next = 0;
        for v in 0..self.vertices.len() {
            if root[v] == v {
                dof[v] = next;
                next += 1;
            }
        }
        for v in 0..self.vertices.len() {
            if root[v] != v {
                dof[v] = dof[root[v]];
            }
        }
        (dof, next)
    }

    /// Uniformly scaled copy.
    pub fn scaled(mut self, factor: f64) -> Self {
        for v in &mut self.vertices {
            v.iter_mut().for_each(|x| *x *= factor);
        }
        self.periodic_length = self.periodic_length.map(|l| l * factor);
        self
    }
}

/// Upper unit hemisphere by `refine`-fold midpoint subdivision of the four
/// upper octahedron faces, reprojected to the sphere.
pub fn mesh_hemisphere(refine: usize) -> Result<Mesh> {
    if refine > 8 {
        return Err(Error::Unsupported(format!("refine = {refine} outside 0..=8")));
    }
    let mut vertices: Vec<[f64; 3]> =
        vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut cells: Vec<[usize; 3]> = vec![[0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4]];
    for _ in 0..refine {
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<[f64; 3]>| {
            *midpoints.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let (p, q) = (vertices[a], vertices[b]);
                let m = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1]), 0.5 * (p[2] + q[2])];
                let len = dot3(&m, &m).sqrt();
                vertices.push(m.map(|x| x / len));
                vertices.len() - 1
            })
        };
        let mut next = Vec::with_capacity(cells.len() * 4);
        for &[a, b, c] in &cells {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            next.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        cells = next;
    }
    // equator midpoints have z exactly 0; interior vertices have z > 0
    let boundary_vertices = (0..vertices.len()).filter(|&i| vertices[i][2] == 0.0).collect();
    let mesh = Mesh {
        vertices,
        cells,
        boundary_vertices,
        metric_mode: MetricMode::Embedded,
        periodic_pairs: Vec::new(),
        periodic_length: None,
    };
    mesh.validate()?;
    Ok(mesh)
}

/// Half of the sphere of radius `r` (intrinsically the cap `S²_+(r)`).
pub fn mesh_cap(r: f64, refine: usize) -> Result<Mesh> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidModel(format!("cap radius {r} must be positive")));
    }
    Ok(mesh_hemisphere(refine)?.scaled(r))
}

fn grid_mesh(lx: f64, ly: f64, nx: usize, ny: usize, periodic: bool) -> Result<Mesh> {
    if nx < 4 || ny < 4 {
        return Err(Error::Unsupported(format!("grid {nx}x{ny} must be at least 4x4")));
    }
    if !(lx > 0.0 && ly > 0.0 && lx.is_finite() && ly.is_finite()) {
        return Err(Error::InvalidDimension(format!("rectangle {lx}x{ly} must have positive sides")));
    }
    let idx = |i: usize, j: usize| j * (nx + 1) + i;
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            vertices.push([lx * i as f64 / nx as f64, ly * j as f64 / ny as f64, 0.0]);
        }
    }
    let mut cells = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            cells.push([a, b, c]);
            cells.push([a, c, d]);
        }
    }
    let mut boundary_vertices: Vec<usize> = (0..=nx).flat_map(|i| [idx(i, 0), idx(i, ny)]).collect();
    if !periodic {
        boundary_vertices.extend((1..ny).flat_map(|j| [idx(0, j), idx(nx, j)]));
    }
    boundary_vertices.sort_unstable();
    let periodic_pairs = if periodic { (0..=ny).map(|j| (idx(nx, j), idx(0, j))).collect() } else { Vec::new() };
    let mesh = Mesh {
        vertices,
        cells,
        boundary_vertices,
        metric_mode: MetricMode::FlatChart,
        periodic_pairs,
        periodic_length: periodic.then_some(lx),
    };
    mesh.validate()?;
    Ok(mesh)
}

/// Chart of `S¹(r1) × S¹_+(r2)`: `[0, 2π r1]` periodic × `[0, π r2]` with
/// Neumann ends.
pub fn mesh_flat_half_torus(r1: f64, r2: f64, nx: usize, ny: usize) -> Result<Mesh> {
    grid_mesh(2.0 * PI * r1, PI * r2, nx, ny, true)
}

/// Neumann rectangle `[0, lx] × [0, ly]`.
pub fn mesh_flat_rectangle(lx: f64, ly: f64, nx: usize, ny: usize) -> Result<Mesh> {
    grid_mesh(lx, ly, nx, ny, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octahedron() {
        let m = mesh_hemisphere(0).unwrap();
        assert_eq!((m.vertices.len(), m.cells.len(), m.boundary_vertices.len()), (5, 4, 4));
    }

    #[test]
    fn reprojection() {
        let m = mesh_hemisphere(3).unwrap();
        for v in &m.vertices {
            assert!((dot3(v, v).sqrt() - 1.0).abs() < 1e-15);
            assert!(v[2] >= 0.0);
        }
        assert_eq!(m.boundary_vertices.len(), 4 * 8);
    }

    #[test]
    fn hemisphere_area() {
        let a = mesh_hemisphere(4).unwrap().total_area();
        assert!((a / (2.0 * PI) - 1.0).abs() < 5e-3, "{a}");
    }

    #[test]
    fn refine_limit() {
        assert!(mesh_hemisphere(9).is_err());
    }

    #[test]
    fn torus_chart() {
        let h = 0.5f64.sqrt();
        let m = mesh_flat_half_torus(h, h, 8, 4).unwrap();
        assert!((m.periodic_length.unwrap() - 2.0 * PI * h).abs() < 1e-15);
        let ymax = m.vertices.iter().map(|v| v[1]).fold(0.0, f64::max);
        assert!((ymax - PI * h).abs() < 1e-15);
        assert!((m.total_area() - 2.0 * PI * PI * h * h).abs() < 1e-12);
        let (_, dofs) = m.dof_map();
        assert_eq!(dofs, 8 * 5);
        assert!(mesh_flat_half_torus(h, h, 3, 4).is_err());
    }
}
