//! OFF meshes and Matrix Market matrices.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use super::mesh::{Mesh, MetricMode};
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

/// OFF with extra comment headers: `# periodic x <length>` for periodic
/// charts, `# metric <embedded|flat>`, `# boundary i j …` and
/// `# pair image source` per periodic identification.
pub fn write_off<W: Write>(mesh: &Mesh, mut out: W) -> Result<()> {
    let mut s = String::from("OFF\n");
    let mode = match mesh.metric_mode {
        MetricMode::Embedded => "embedded",
        MetricMode::FlatChart => "flat",
    };
    writeln!(s, "# metric {mode}").unwrap();
    if let Some(l) = mesh.periodic_length {
        writeln!(s, "# periodic x {l:.17e}").unwrap();
    }
    for chunk in mesh.boundary_vertices.chunks(16) {
        let ids: Vec<String> = chunk.iter().map(|i| i.to_string()).collect();
        writeln!(s, "# boundary {}", ids.join(" ")).unwrap();
    }
    for (a, b) in &mesh.periodic_pairs {
        writeln!(s, "# pair {a} {b}").unwrap();
    }
    writeln!(s, "{} {} 0", mesh.vertices.len(), mesh.cells.len()).unwrap();
    for v in &mesh.vertices {
        writeln!(s, "{:.17e} {:.17e} {:.17e}", v[0], v[1], v[2]).unwrap();
    }
    for c in &mesh.cells {
        writeln!(s, "3 {} {} {}", c[0], c[1], c[2]).unwrap();
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

fn parse<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<T> {
    tok.and_then(|t| t.parse().ok()).ok_or_else(|| Error::Parse(format!("OFF: bad or missing {what}")))
}

/// Inverse of [`write_off`]. Plain OFF files without the comment headers
/// load as embedded meshes with no boundary information.
pub fn read_off<R: BufRead>(input: R) -> Result<Mesh> {
    let mut metric_mode = MetricMode::Embedded;
    let mut periodic_length = None;
    let mut boundary_vertices = Vec::new();
    let mut periodic_pairs = Vec::new();
    let mut body: Vec<String> = Vec::new();
    for line in input.lines() {
        let line = line?;
        let t = line.trim();
        if let Some(c) = t.strip_prefix('#') {
            let mut w = c.split_whitespace();
            match w.next() {
                Some("metric") => {
                    metric_mode = match w.next() {
                        Some("flat") => MetricMode::FlatChart,
                        Some("embedded") => MetricMode::Embedded,
                        other => return Err(Error::Parse(format!("OFF: unknown metric {other:?}"))),
                    }
                }
                Some("periodic") => {
                    if w.next() != Some("x") {
                        return Err(Error::Parse("OFF: only `periodic x` is supported".into()));
                    }
                    periodic_length = Some(parse(w.next(), "periodic length")?);
                }
                Some("boundary") => {
                    for tok in w {
                        boundary_vertices.push(parse(Some(tok), "boundary index")?);
                    }
                }
                Some("pair") => periodic_pairs.push((parse(w.next(), "pair")?, parse(w.next(), "pair")?)),
                _ => {}
            }
        } else if !t.is_empty() {
            body.push(t.to_string());
        }
    }
    let mut lines = body.iter();
    if lines.next().map(String::as_str) != Some("OFF") {
        return Err(Error::Parse("OFF: missing header".into()));
    }
    let mut counts = lines.next().map(|l| l.split_whitespace()).into_iter().flatten();
    let nv: usize = parse(counts.next(), "vertex count")?;
    let nf: usize = parse(counts.next(), "face count")?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let mut w = lines.next().map(|l| l.split_whitespace()).into_iter().flatten();
        vertices.push([parse(w.next(), "x")?, parse(w.next(), "y")?, parse(w.next(), "z")?]);
    }
    let mut cells = Vec::with_capacity(nf);
    for _ in 0..nf {
        let mut w = lines.next().map(|l| l.split_whitespace()).into_iter().flatten();
        if parse::<usize>(w.next(), "face size")? != 3 {
            return Err(Error::Parse("OFF: only triangles are supported".into()));
        }
        let c: [usize; 3] = [parse(w.next(), "index")?, parse(w.next(), "index")?, parse(w.next(), "index")?];
        if c.iter().any(|&i| i >= nv) {
            return Err(Error::Parse(format!("OFF: face {c:?} references a missing vertex")));
        }
        cells.push(c);
    }
    if boundary_vertices.iter().chain(periodic_pairs.iter().flat_map(|(a, b)| [a, b])).any(|&i| i >= nv) {
        return Err(Error::Parse("OFF: annotation references a missing vertex".into()));
    }
    boundary_vertices.sort_unstable();
    let mesh = Mesh { vertices, cells, boundary_vertices, metric_mode, periodic_pairs, periodic_length };
    mesh.validate()?;
    Ok(mesh)
}

/// Matrix Market `coordinate real general`, 1-based.
pub fn write_matrix_market<W: Write>(a: &CsrMatrix, mut out: W) -> Result<()> {
    let mut s = String::from("%%MatrixMarket matrix coordinate real general\n");
    writeln!(s, "{} {} {}", a.dim(), a.dim(), a.nnz()).unwrap();
    for (i, j, v) in a.triplets() {
        writeln!(s, "{} {} {:.17e}", i + 1, j + 1, v).unwrap();
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::mesh::{mesh_flat_half_torus, mesh_hemisphere};

    #[test]
    fn off_round_trip() {
        for mesh in [mesh_hemisphere(2).unwrap(), mesh_flat_half_torus(0.6, 0.8, 8, 4).unwrap()] {
            let mut buf = Vec::new();
            write_off(&mesh, &mut buf).unwrap();
            let back = read_off(buf.as_slice()).unwrap();
            assert_eq!(back, mesh);
        }
    }

    #[test]
    fn off_periodic_header() {
        let mut buf = Vec::new();
        write_off(&mesh_flat_half_torus(0.5, 0.5, 4, 4).unwrap(), &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains("# periodic x 3.14159265358979"));
    }

    #[test]
    fn off_rejects_bad_face() {
        assert!(read_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 5\n".as_bytes()).is_err());
    }

    #[test]
    fn matrix_market_header() {
        let a = CsrMatrix::from_triplets(2, vec![(0, 0, 1.0), (1, 0, -2.0)]);
        let mut buf = Vec::new();
        write_matrix_market(&a, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 "));
    }
}
