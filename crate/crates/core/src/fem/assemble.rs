//! P1 stiffness and consistent mass assembly.

use rayon::prelude::*;

use super::mesh::{dot3, Mesh, MIN_CELL_AREA};
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Assembled {
    /// `K₀`, the Dirichlet-energy matrix.
    pub stiffness: CsrMatrix,
    pub mass: CsrMatrix,
    /// Vertex to degree of freedom.
    pub dof_map: Vec<usize>,
}

impl Assembled {
    pub fn dof(&self) -> usize {
        self.mass.dim()
    }

    /// `K₀ - cM`.
    pub fn jacobi(&self, c: f64) -> CsrMatrix {
        self.stiffness.axpby(1.0, &self.mass, -c)
    }
}

/// Local matrices are computed in parallel and summed in cell order, so the
/// result does not depend on the thread count.
pub fn assemble(mesh: &Mesh) -> Result<Assembled> {
    let (dof_map, dofs) = mesh.dof_map();
    let local: Vec<Result<[[(f64, f64); 3]; 3]>> = (0..mesh.cells.len())
        .into_par_iter()
        .map(|c| {
            let area = mesh.cell_area(c);
            if !(area > MIN_CELL_AREA) {
                return Err(Error::DegenerateCell { cell: c, area });
            }
            let e = mesh.cell_edges(c);
            let mut out = [[(0.0, 0.0); 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    let k = dot3(&e[i], &e[j]) / (4.0 * area);
                    let m = area / 12.0 * if i == j { 2.0 } else { 1.0 };
                    out[i][j] = (k, m);
                }
            }
            Ok(out)
        })
        .collect();
    let mut tk = Vec::with_capacity(9 * mesh.cells.len());
    let mut tm = Vec::with_capacity(9 * mesh.cells.len());
    for (c, l) in local.into_iter().enumerate() {
        let l = l?;
        let d = mesh.cells[c].map(|v| dof_map[v]);
        for i in 0..3 {
            for j in 0..3 {
                tk.push((d[i], d[j], l[i][j].0));
                tm.push((d[i], d[j], l[i][j].1));
            }
        }
    }
    Ok(Assembled {
        stiffness: CsrMatrix::from_triplets(dofs, tk),
        mass: CsrMatrix::from_triplets(dofs, tm),
        dof_map,
    })
}

/// `(K₀ - cM, M)`.
pub fn assemble_jacobi(mesh: &Mesh, c: f64) -> Result<(CsrMatrix, CsrMatrix)> {
    let a = assemble(mesh)?;
    Ok((a.jacobi(c), a.mass))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::mesh::{mesh_flat_half_torus, mesh_hemisphere};

    #[test]
    fn constants_in_kernel() {
        for mesh in [mesh_hemisphere(2).unwrap(), mesh_flat_half_torus(0.7, 0.7, 8, 4).unwrap()] {
            let a = assemble(&mesh).unwrap();
            let ones = vec![1.0; a.dof()];
            assert!(a.stiffness.mul(&ones).iter().all(|v| v.abs() < 1e-12));
            let total: f64 = a.mass.mul(&ones).iter().sum();
            assert!((total - mesh.total_area()).abs() < 1e-12);
            assert!(a.stiffness.is_symmetric(1e-14) && a.mass.is_symmetric(1e-14));
        }
    }

    #[test]
    fn degenerate_cell() {
        let mut mesh = mesh_hemisphere(1).unwrap();
        let [a, b, _] = mesh.cells[0];
        mesh.cells[0] = [a, b, b];
        assert!(matches!(assemble(&mesh), Err(Error::DegenerateCell { cell: 0, .. })));
    }

    #[test]
    fn deterministic() {
        let mesh = mesh_hemisphere(3).unwrap();
        let a = assemble(&mesh).unwrap();
        let b = assemble(&mesh).unwrap();
        assert_eq!(a.stiffness, b.stiffness);
        assert_eq!(a.mass, b.mass);
    }
}
