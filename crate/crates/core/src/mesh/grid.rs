use super::complex::{CellComplex, CellShape};
use super::MeshError;

/// Tensor-product structure of a rectangular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridInfo {
    /// Node coordinates along each axis, strictly increasing.
    pub coords: Vec<Vec<f64>>,
}

impl GridInfo {
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Cells per axis.
    pub fn counts(&self) -> Vec<usize> {
        self.coords.iter().map(|c| c.len() - 1).collect()
    }

    /// Vertex index of the node with multi-index `idx` (x fastest).
    pub fn vertex_index(&self, idx: &[usize]) -> usize {
        let mut v = 0;
        let mut stride = 1;
        for (a, &i) in idx.iter().enumerate() {
            v += i * stride;
            stride *= self.coords[a].len();
        }
        v
    }

    /// Vertices of the cell with lowest corner `corner` spanning `axes`
    /// (ascending), in binary corner order. `None` if it leaves the grid.
    pub fn cell_vertices(&self, corner: &[usize], axes: &[usize]) -> Option<Vec<usize>> {
        for &a in axes {
            if corner[a] + 1 >= self.coords[a].len() {
                return None;
            }
        }
        if corner.iter().zip(&self.coords).any(|(&i, c)| i >= c.len()) {
            return None;
        }
        Some(
            (0..1usize << axes.len())
                .map(|bits| {
                    let mut idx = corner.to_vec();
                    for (b, &a) in axes.iter().enumerate() {
                        idx[a] += (bits >> b) & 1;
                    }
                    self.vertex_index(&idx)
                })
                .collect(),
        )
    }

    /// Cell widths along axis `a`.
    pub fn widths(&self, a: usize) -> Vec<f64> {
        self.coords[a].windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// Uniform rectangular grid `[0, extents]` with `counts` cells per axis.
pub fn build_rect_grid(extents: &[f64], counts: &[usize]) -> Result<CellComplex, MeshError> {
    if extents.len() != counts.len() || !(2..=3).contains(&extents.len()) {
        return Err(MeshError::InvalidArgument(
            "grid needs 2 or 3 matching extents and counts".into(),
        ));
    }
    if let Some(e) = extents.iter().find(|&&e| !(e > 0.0 && e.is_finite())) {
        return Err(MeshError::InvalidArgument(format!("extent {e} must be positive")));
    }
    if counts.contains(&0) {
        return Err(MeshError::InvalidArgument("cell counts must be >= 1".into()));
    }
    let coords = extents
        .iter()
        .zip(counts)
        .map(|(&e, &n)| (0..=n).map(|i| e * i as f64 / n as f64).collect())
        .collect();
    build_rect_grid_from_coords(coords)
}

/// Rectangular grid with arbitrary (strictly increasing) node coordinates.
pub fn build_rect_grid_from_coords(coords: Vec<Vec<f64>>) -> Result<CellComplex, MeshError> {
    let dim = coords.len();
    if !(2..=3).contains(&dim) {
        return Err(MeshError::InvalidArgument("grid dimension must be 2 or 3".into()));
    }
    for c in &coords {
        if c.len() < 2 || c.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(MeshError::InvalidArgument(
                "axis coordinates must be strictly increasing with at least 2 nodes".into(),
            ));
        }
    }
    let grid = GridInfo { coords };
    let sizes: Vec<usize> = grid.coords.iter().map(Vec::len).collect();
    let nverts: usize = sizes.iter().product();
    let mut points = Vec::with_capacity(nverts);
    for v in 0..nverts {
        let mut p = [0.0; 3];
        let mut rest = v;
        for a in 0..dim {
            p[a] = grid.coords[a][rest % sizes[a]];
            rest /= sizes[a];
        }
        points.push(p);
    }
    let axes: Vec<usize> = (0..dim).collect();
    let mut tops = Vec::new();
    for v in 0..nverts {
        let mut idx = vec![0; dim];
        let mut rest = v;
        for a in 0..dim {
            idx[a] = rest % sizes[a];
            rest /= sizes[a];
        }
        if let Some(cell) = grid.cell_vertices(&idx, &axes) {
            tops.push(cell);
        }
    }
    Ok(CellComplex::from_top_cells(dim, dim, CellShape::Cube, points, tops)?.with_grid(grid))
}
