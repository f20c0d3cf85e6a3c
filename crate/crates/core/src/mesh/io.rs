use std::fmt::Write as _;
use std::io::BufRead;

use super::complex::{CellComplex, CellShape};
use super::MeshError;

/// Reads a mesh in the line-oriented text format:
///
/// ```text
/// # comment
/// dim 2
/// v 0 0
/// v 1 0
/// v 0 1
/// c 2 0 1 2
/// ```
///
/// `c k i0 .. ik` lines give simplicial top cells, `r i0 .. i(2^n-1)` lines give
/// boxes in binary corner order. Vertex order and cell orientation are kept.
pub fn load_mesh<R: BufRead>(reader: R) -> Result<CellComplex, MeshError> {
    let mut dim: Option<usize> = None;
    let mut ambient: Option<usize> = None;
    let mut points = Vec::new();
    let mut tops: Vec<Vec<usize>> = Vec::new();
    let mut top_lines = Vec::new();
    let mut shape: Option<CellShape> = None;

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| MeshError::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| MeshError::Parse {
            line: lineno,
            message,
        };
        let mut tokens = content.split_whitespace();
        let tag = tokens.next().unwrap_or_default();
        let rest: Vec<&str> = tokens.collect();
        match tag {
            "dim" => {
                if dim.is_some() {
                    return Err(err("repeated dim line".into()));
                }
                let [d] = rest[..] else {
                    return Err(err("expected `dim <n>`".into()));
                };
                let d: usize = d.parse().map_err(|_| err(format!("bad dimension `{d}`")))?;
                if !(1..=3).contains(&d) {
                    return Err(err(format!("dimension {d} not in 1..=3")));
                }
                dim = Some(d);
            }
            "v" => {
                let n = dim.ok_or_else(|| err("vertex before dim line".into()))?;
                if rest.len() < n || rest.len() > 3 {
                    return Err(err(format!(
                        "vertex needs between {n} and 3 coordinates, got {}",
                        rest.len()
                    )));
                }
                match ambient {
                    None => ambient = Some(rest.len()),
                    Some(a) if a != rest.len() => {
                        return Err(err(format!("vertex has {} coordinates, expected {a}", rest.len())))
                    }
                    _ => {}
                }
                let mut p = [0.0; 3];
                for (slot, tok) in p.iter_mut().zip(&rest) {
                    let x: f64 = tok.parse().map_err(|_| err(format!("bad coordinate `{tok}`")))?;
                    if !x.is_finite() {
                        return Err(err(format!("non-finite coordinate `{tok}`")));
                    }
                    *slot = x;
                }
                points.push(p);
            }
            "c" | "r" => {
                let n = dim.ok_or_else(|| err("cell before dim line".into()))?;
                let (this_shape, idx_tokens) = if tag == "c" {
                    let (k, idx) = rest
                        .split_first()
                        .ok_or_else(|| err("expected `c <k> <indices>`".into()))?;
                    let k: usize = k.parse().map_err(|_| err(format!("bad cell dimension `{k}`")))?;
                    if k != n {
                        return Err(err(format!("cell dimension {k} differs from mesh dimension {n}")));
                    }
                    (CellShape::Simplex, idx)
                } else {
                    (CellShape::Cube, &rest[..])
                };
                if *shape.get_or_insert(this_shape) != this_shape {
                    return Err(err("mixed simplex and box cells".into()));
                }
                let expected = this_shape.vertex_count(n);
                if idx_tokens.len() != expected {
                    return Err(err(format!(
                        "cell needs {expected} vertex indices, got {}",
                        idx_tokens.len()
                    )));
                }
                let mut cell = Vec::with_capacity(expected);
                for tok in idx_tokens {
                    let v: usize = tok.parse().map_err(|_| err(format!("bad vertex index `{tok}`")))?;
                    cell.push(v);
                }
                tops.push(cell);
                top_lines.push(lineno);
            }
            other => return Err(err(format!("unknown record `{other}`"))),
        }
    }

    let n = dim.ok_or(MeshError::Parse {
        line: 0,
        message: "missing dim line".into(),
    })?;
    let nverts = points.len();
    for (cell, &lineno) in tops.iter().zip(&top_lines) {
        if let Some(&v) = cell.iter().find(|&&v| v >= nverts) {
            return Err(MeshError::Parse {
                line: lineno,
                message: format!("vertex index {v} out of range ({nverts} vertices)"),
            });
        }
    }
    let shape = shape.ok_or(MeshError::Parse {
        line: 0,
        message: "no cells".into(),
    })?;
    CellComplex::from_top_cells(n, ambient.unwrap_or(n), shape, points, tops)
}

/// Writes a complex in the format read by [`load_mesh`].
pub fn write_mesh(complex: &CellComplex) -> String {
    let n = complex.dim();
    let mut out = format!("dim {n}\n");
    for p in complex.points() {
        out.push('v');
        for x in &p[..complex.ambient_dim()] {
            let _ = write!(out, " {x}");
        }
        out.push('\n');
    }
    for cell in complex.cells(n) {
        match complex.shape() {
            CellShape::Simplex => {
                let _ = write!(out, "c {n}");
            }
            CellShape::Cube => out.push('r'),
        }
        for v in &cell.vertices {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}
