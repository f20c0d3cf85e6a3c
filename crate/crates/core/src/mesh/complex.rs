use std::collections::{BTreeMap, HashMap};

use super::geometry::Point;
use super::grid::GridInfo;
use super::MeshError;

/// Shape of every cell in a complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellShape {
    Simplex,
    /// Axis boxes with vertices in binary corner order.
    Cube,
}

impl CellShape {
    pub fn vertex_count(self, k: usize) -> usize {
        match self {
            CellShape::Simplex => k + 1,
            CellShape::Cube => 1 << k,
        }
    }
}

/// One oriented k-cell: its ordered vertices and signed (k-1)-facets.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub vertices: Vec<usize>,
    pub boundary: Vec<(usize, i8)>,
}

/// An oriented manifold cell complex of dimension `n`, embedded in
/// `ambient_dim`-dimensional Euclidean space.
#[derive(Debug, Clone)]
pub struct CellComplex {
    dim: usize,
    ambient_dim: usize,
    shape: CellShape,
    points: Vec<Point>,
    cells: Vec<Vec<Cell>>,
    cofaces: Vec<Vec<Vec<(usize, i8)>>>,
    on_boundary: Vec<Vec<bool>>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
    grid: Option<GridInfo>,
}

/// The boundary of a complex as a standalone complex of one lower dimension.
#[derive(Debug, Clone)]
pub struct BoundaryComplex {
    pub complex: CellComplex,
    /// Parent vertex index of each boundary-complex vertex.
    pub vertex_map: Vec<usize>,
}

impl CellComplex {
    /// Builds a complex from its top-dimensional cells. Lower cells are
    /// derived, ordered lexicographically by sorted vertex tuple and given
    /// canonical orientations; top cells keep the order and orientation given.
    pub fn from_top_cells(
        dim: usize,
        ambient_dim: usize,
        shape: CellShape,
        points: Vec<Point>,
        tops: Vec<Vec<usize>>,
    ) -> Result<Self, MeshError> {
        if dim == 0 || dim > 3 || ambient_dim < dim || ambient_dim > 3 {
            return Err(MeshError::InvalidArgument(format!(
                "unsupported dimensions: complex {dim}, ambient {ambient_dim}"
            )));
        }
        if tops.is_empty() {
            return Err(MeshError::InvalidArgument("no top cells".into()));
        }
        let nverts = points.len();
        let per_cell = shape.vertex_count(dim);
        let mut top_lookup = HashMap::new();
        for (i, cell) in tops.iter().enumerate() {
            if cell.len() != per_cell {
                return Err(MeshError::InvalidArgument(format!(
                    "top cell {i} has {} vertices, expected {per_cell}",
                    cell.len()
                )));
            }
            if let Some(&v) = cell.iter().find(|&&v| v >= nverts) {
                return Err(MeshError::InvalidArgument(format!(
                    "top cell {i} references vertex {v} of {nverts}"
                )));
            }
            let key = sorted(cell);
            if key.windows(2).any(|w| w[0] == w[1]) {
                return Err(MeshError::InvalidArgument(format!(
                    "top cell {i} repeats a vertex"
                )));
            }
            if let Some(prev) = top_lookup.insert(key, i) {
                return Err(MeshError::DuplicateCell(format!(
                    "top cells {prev} and {i} share the same vertices"
                )));
            }
        }

        let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); dim + 1];
        let mut lookup: Vec<HashMap<Vec<usize>, usize>> = vec![HashMap::new(); dim + 1];
        cells[dim] = tops
            .into_iter()
            .map(|vertices| Cell {
                vertices,
                boundary: Vec::new(),
            })
            .collect();
        lookup[dim] = top_lookup;

        for k in (1..=dim).rev() {
            let mut facet_orders: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
            let mut induced: Vec<Vec<(Vec<usize>, i8)>> = Vec::with_capacity(cells[k].len());
            for cell in &cells[k] {
                let facets = induced_facets(shape, &cell.vertices);
                for (order, _) in &facets {
                    facet_orders
                        .entry(sorted(order))
                        .or_insert_with(|| canonical_order(shape, order).0);
                }
                induced.push(facets);
            }
            if k == 1 {
                let used: Vec<usize> = facet_orders.keys().map(|key| key[0]).collect();
                if used.len() != nverts {
                    let missing = (0..nverts).find(|v| used.binary_search(v).is_err());
                    return Err(MeshError::InvalidArgument(format!(
                        "vertex {} is not used by any cell",
                        missing.unwrap_or(0)
                    )));
                }
                cells[0] = (0..nverts)
                    .map(|v| Cell {
                        vertices: vec![v],
                        boundary: Vec::new(),
                    })
                    .collect();
                lookup[0] = (0..nverts).map(|v| (vec![v], v)).collect();
            } else {
                let mut level = Vec::with_capacity(facet_orders.len());
                let mut map = HashMap::with_capacity(facet_orders.len());
                for (i, (key, order)) in facet_orders.into_iter().enumerate() {
                    map.insert(key, i);
                    level.push(Cell {
                        vertices: order,
                        boundary: Vec::new(),
                    });
                }
                cells[k - 1] = level;
                lookup[k - 1] = map;
            }
            for (cell, facets) in cells[k].iter_mut().zip(induced) {
                cell.boundary = facets
                    .into_iter()
                    .map(|(order, sign)| {
                        let idx = lookup[k - 1][&sorted(&order)];
                        let rel = canonical_order(shape, &order).1;
                        (idx, sign * rel)
                    })
                    .collect();
            }
        }

        let mut cofaces: Vec<Vec<Vec<(usize, i8)>>> =
            (0..=dim).map(|k| vec![Vec::new(); cells[k].len()]).collect();
        for k in 1..=dim {
            for (i, cell) in cells[k].iter().enumerate() {
                for &(f, s) in &cell.boundary {
                    cofaces[k - 1][f].push((i, s));
                }
            }
        }

        for (i, co) in cofaces[dim - 1].iter().enumerate() {
            match co.len() {
                1 => {}
                2 => {
                    if co[0].1 == co[1].1 {
                        return Err(MeshError::InconsistentOrientation(format!(
                            "{}-cell {:?} shared by top cells {} and {}",
                            dim - 1,
                            cells[dim - 1][i].vertices,
                            co[0].0,
                            co[1].0
                        )));
                    }
                }
                m => {
                    return Err(MeshError::NonManifold(format!(
                        "{}-cell {:?} has {m} incident top cells",
                        dim - 1,
                        cells[dim - 1][i].vertices
                    )))
                }
            }
        }

        let mut on_boundary: Vec<Vec<bool>> =
            (0..=dim).map(|k| vec![false; cells[k].len()]).collect();
        for (i, co) in cofaces[dim - 1].iter().enumerate() {
            on_boundary[dim - 1][i] = co.len() == 1;
        }
        for k in (1..dim).rev() {
            for i in 0..cells[k].len() {
                if on_boundary[k][i] {
                    for &(f, _) in &cells[k][i].boundary {
                        on_boundary[k - 1][f] = true;
                    }
                }
            }
        }

        Ok(Self {
            dim,
            ambient_dim,
            shape,
            points,
            cells,
            cofaces,
            on_boundary,
            lookup,
            grid: None,
        })
    }

    pub(crate) fn with_grid(mut self, grid: GridInfo) -> Self {
        self.grid = Some(grid);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn shape(&self) -> CellShape {
        self.shape
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, v: usize) -> Point {
        self.points[v]
    }

    pub fn num_cells(&self, k: usize) -> usize {
        self.cells.get(k).map_or(0, Vec::len)
    }

    pub fn cells(&self, k: usize) -> &[Cell] {
        &self.cells[k]
    }

    pub fn cell(&self, k: usize, i: usize) -> &Cell {
        &self.cells[k][i]
    }

    /// Signed (k+1)-cells containing the k-cell `i`.
    pub fn cofaces(&self, k: usize, i: usize) -> &[(usize, i8)] {
        &self.cofaces[k][i]
    }

    pub fn is_boundary(&self, k: usize, i: usize) -> bool {
        self.on_boundary[k][i]
    }

    pub fn boundary_mask(&self, k: usize) -> &[bool] {
        &self.on_boundary[k]
    }

    /// Index of the k-cell with exactly these vertices (any order).
    pub fn find(&self, k: usize, vertices: &[usize]) -> Option<usize> {
        self.lookup.get(k)?.get(&sorted(vertices)).copied()
    }

    pub fn grid(&self) -> Option<&GridInfo> {
        self.grid.as_ref()
    }

    pub fn is_rectangular(&self) -> bool {
        self.shape == CellShape::Cube
    }

    /// Points of a cell in its stored vertex order.
    pub fn cell_points(&self, k: usize, i: usize) -> Vec<Point> {
        self.cells[k][i]
            .vertices
            .iter()
            .map(|&v| self.points[v])
            .collect()
    }

    /// Top cells containing the k-cell `i`.
    pub fn incident_top_cells(&self, k: usize, i: usize) -> Vec<usize> {
        let mut current = vec![i];
        for level in k..self.dim {
            let mut next: Vec<usize> = current
                .iter()
                .flat_map(|&c| self.cofaces[level][c].iter().map(|&(t, _)| t))
                .collect();
            next.sort_unstable();
            next.dedup();
            current = next;
        }
        current
    }

    /// The boundary `∂K` with orientations induced from the top cells.
    pub fn boundary_complex(&self) -> Result<BoundaryComplex, MeshError> {
        let n = self.dim;
        if n < 2 {
            return Err(MeshError::InvalidArgument(
                "boundary complex requires dimension >= 2".into(),
            ));
        }
        let mut tops = Vec::new();
        for (i, co) in self.cofaces[n - 1].iter().enumerate() {
            if co.len() == 1 {
                let mut order = self.cells[n - 1][i].vertices.clone();
                if co[0].1 < 0 {
                    flip_orientation(self.shape, &mut order);
                }
                tops.push(order);
            }
        }
        let mut vertex_map: Vec<usize> = tops.iter().flatten().copied().collect();
        vertex_map.sort_unstable();
        vertex_map.dedup();
        let local: HashMap<usize, usize> = vertex_map
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let tops = tops
            .into_iter()
            .map(|c| c.into_iter().map(|v| local[&v]).collect())
            .collect();
        let points = vertex_map.iter().map(|&v| self.points[v]).collect();
        let complex =
            CellComplex::from_top_cells(n - 1, self.ambient_dim, self.shape, points, tops)?;
        Ok(BoundaryComplex {
            complex,
            vertex_map,
        })
    }
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut s = v.to_vec();
    s.sort_unstable();
    s
}

/// Facets of an ordered cell with their induced boundary signs.
fn induced_facets(shape: CellShape, order: &[usize]) -> Vec<(Vec<usize>, i8)> {
    match shape {
        CellShape::Simplex => (0..order.len())
            .map(|i| {
                let mut f = order.to_vec();
                f.remove(i);
                (f, if i % 2 == 0 { 1 } else { -1 })
            })
            .collect(),
        CellShape::Cube => {
            let k = order.len().trailing_zeros() as usize;
            let mut out = Vec::with_capacity(2 * k);
            for a in 0..k {
                let axis_sign: i8 = if a % 2 == 0 { 1 } else { -1 };
                for side in [0usize, 1] {
                    let f: Vec<usize> = (0..order.len())
                        .filter(|j| (j >> a) & 1 == side)
                        .map(|j| order[j])
                        .collect();
                    let s = if side == 1 { axis_sign } else { -axis_sign };
                    out.push((f, s));
                }
            }
            out
        }
    }
}

/// Canonical vertex order of a cell and the sign relating `order` to it.
fn canonical_order(shape: CellShape, order: &[usize]) -> (Vec<usize>, i8) {
    match shape {
        CellShape::Simplex => {
            let mut idx: Vec<usize> = (0..order.len()).collect();
            idx.sort_by_key(|&i| order[i]);
            let canon = idx.iter().map(|&i| order[i]).collect();
            (canon, permutation_sign(&idx))
        }
        CellShape::Cube => canonical_cube_order(order),
    }
}

/// Re-bases a binary-ordered box at its smallest vertex and sorts its axes by
/// the index of the neighbouring vertex.
fn canonical_cube_order(order: &[usize]) -> (Vec<usize>, i8) {
    let len = order.len();
    let k = len.trailing_zeros() as usize;
    let p = (0..len).min_by_key(|&j| order[j]).unwrap_or(0);
    let reflected: Vec<usize> = (0..len).map(|j| order[j ^ p]).collect();
    let mut sign: i8 = if p.count_ones() % 2 == 0 { 1 } else { -1 };
    let mut perm: Vec<usize> = (0..k).collect();
    perm.sort_by_key(|&a| reflected[1 << a]);
    sign *= permutation_sign(&perm);
    let canon = (0..len)
        .map(|j| {
            let src = (0..k).fold(0, |acc, b| acc | (((j >> b) & 1) << perm[b]));
            reflected[src]
        })
        .collect();
    (canon, sign)
}

fn flip_orientation(shape: CellShape, order: &mut [usize]) {
    match shape {
        CellShape::Simplex => order.swap(0, 1),
        CellShape::Cube => {
            for j in (0..order.len()).step_by(2) {
                order.swap(j, j + 1);
            }
        }
    }
}

fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}
