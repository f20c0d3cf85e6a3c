use super::complex::{CellComplex, CellShape};
use super::geometry::{barycentric, cell_circumcenter, cell_volume, distance};

/// Geometric quality of one top cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellQuality {
    pub circumcenter_inside: bool,
    pub min_edge: f64,
    pub max_edge: f64,
    /// `NaN` when the cell has no well-defined circumcenter.
    pub circumradius: f64,
    pub inradius: f64,
    /// Longest over shortest edge.
    pub aspect_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshQualityReport {
    pub cells: Vec<CellQuality>,
}

impl MeshQualityReport {
    /// Top cells whose circumcenter lies outside the cell.
    pub fn outside_cells(&self) -> Vec<usize> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, q)| !q.circumcenter_inside)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn min_edge(&self) -> f64 {
        self.cells.iter().map(|q| q.min_edge).fold(f64::INFINITY, f64::min)
    }

    pub fn max_aspect_ratio(&self) -> f64 {
        self.cells.iter().map(|q| q.aspect_ratio).fold(0.0, f64::max)
    }
}

/// Per-top-cell quality measures. Never fails; degenerate cells report `NaN`
/// radii and `circumcenter_inside = false`.
pub fn quality(complex: &CellComplex) -> MeshQualityReport {
    let n = complex.dim();
    let shape = complex.shape();
    let cells = (0..complex.num_cells(n))
        .map(|t| {
            let pts = complex.cell_points(n, t);
            let edges = edge_lengths(complex, n, t);
            let min_edge = edges.iter().cloned().fold(f64::INFINITY, f64::min);
            let max_edge = edges.iter().cloned().fold(0.0, f64::max);
            let cc = cell_circumcenter(shape, &pts);
            let circumradius = cc.map_or(f64::NAN, |c| distance(c, pts[0]));
            let (inside, inradius) = match shape {
                CellShape::Cube => (true, 0.5 * min_edge),
                CellShape::Simplex => {
                    let inside = cc
                        .and_then(|c| barycentric(&pts, c, n.min(complex.ambient_dim())))
                        .is_some_and(|l| l.iter().all(|&x| x >= -1e-12));
                    let facet_area: f64 = complex
                        .cell(n, t)
                        .boundary
                        .iter()
                        .map(|&(f, _)| cell_volume(shape, &complex.cell_points(n - 1, f)))
                        .sum();
                    (inside, n as f64 * cell_volume(shape, &pts) / facet_area)
                }
            };
            CellQuality {
                circumcenter_inside: inside,
                min_edge,
                max_edge,
                circumradius,
                inradius,
                aspect_ratio: max_edge / min_edge,
            }
        })
        .collect();
    MeshQualityReport { cells }
}

fn edge_lengths(complex: &CellComplex, k: usize, i: usize) -> Vec<f64> {
    if k == 1 {
        let v = &complex.cell(1, i).vertices;
        return vec![distance(complex.point(v[0]), complex.point(v[1]))];
    }
    let mut out: Vec<f64> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    let mut stack = vec![(k, i)];
    while let Some((level, c)) = stack.pop() {
        for &(f, _) in &complex.cell(level, c).boundary {
            if level == 2 {
                if !seen.contains(&f) {
                    seen.push(f);
                    out.extend(edge_lengths(complex, 1, f));
                }
            } else {
                stack.push((level - 1, f));
            }
        }
    }
    out
}
