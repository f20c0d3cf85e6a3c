//! Mesh generators: Delaunay triangulations, random axis partitions and a
//! boundary-graded unstructured mesh of the unit square.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spade::{DelaunayTriangulation, Point2, Triangulation};

use super::complex::{CellComplex, CellShape};
use super::grid::build_rect_grid_from_coords;
use super::MeshError;

/// Delaunay triangulation of planar points, triangles oriented counterclockwise.
/// Vertex indices follow the input order.
pub fn delaunay(points: &[[f64; 2]]) -> Result<CellComplex, MeshError> {
    let tris = delaunay_triangles(points)?;
    let pts = points.iter().map(|p| [p[0], p[1], 0.0]).collect();
    CellComplex::from_top_cells(2, 2, CellShape::Simplex, pts, tris)
}

fn delaunay_triangles(points: &[[f64; 2]]) -> Result<Vec<Vec<usize>>, MeshError> {
    let mut tri: DelaunayTriangulation<Point2<f64>> = DelaunayTriangulation::new();
    for (i, p) in points.iter().enumerate() {
        let h = tri
            .insert(Point2::new(p[0], p[1]))
            .map_err(|e| MeshError::InvalidArgument(format!("point {i}: {e:?}")))?;
        if h.index() != i {
            return Err(MeshError::InvalidArgument(format!(
                "point {i} duplicates point {}",
                h.index()
            )));
        }
    }
    let mut out: Vec<Vec<usize>> = tri
        .inner_faces()
        .map(|f| f.vertices().iter().map(|v| v.fix().index()).collect())
        .collect();
    out.sort();
    Ok(out)
}

/// `count` uniform random points in `[0,1]^2` plus the four corners.
pub fn random_square_points(count: usize, seed: u64) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]];
    pts.extend((0..count).map(|_| [rng.gen_range(0.02..0.98), rng.gen_range(0.02..0.98)]));
    pts
}

/// Node coordinates splitting `[0, extent]` into `count` cells of random
/// widths proportional to `1 + spread * u`, `u` uniform in `[0, 1)`.
pub fn random_partition(extent: f64, count: usize, spread: f64, rng: &mut impl Rng) -> Vec<f64> {
    let widths: Vec<f64> = (0..count).map(|_| 1.0 + spread * rng.gen::<f64>()).collect();
    let total: f64 = widths.iter().sum();
    let mut coords = Vec::with_capacity(count + 1);
    let mut x = 0.0;
    coords.push(0.0);
    for w in &widths[..count - 1] {
        x += w / total;
        coords.push(x * extent);
    }
    coords.push(extent);
    coords
}

/// Rectangular grid over `[0, extents]` with every axis split by
/// [`random_partition`], drawing from ChaCha8 seeded with `seed` axis by axis.
pub fn partition_grid(
    extents: &[f64],
    counts: &[usize],
    spread: f64,
    seed: u64,
) -> Result<CellComplex, MeshError> {
    if extents.len() != counts.len() || counts.contains(&0) {
        return Err(MeshError::InvalidArgument(
            "need matching extents and positive counts".into(),
        ));
    }
    if !(spread >= 0.0 && spread.is_finite()) {
        return Err(MeshError::InvalidArgument(format!("spread {spread} must be >= 0")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords = extents
        .iter()
        .zip(counts)
        .map(|(&e, &n)| random_partition(e, n, spread, &mut rng))
        .collect();
    build_rect_grid_from_coords(coords)
}

/// Unstructured triangulation of the unit square whose target edge length
/// grows linearly from `h_boundary` at the walls to `h_interior` at distance
/// `ramp` from them. Nodes are relaxed with a truss-equilibrium iteration
/// (boundary nodes fixed) and re-triangulated each step.
pub fn refined_square(
    h_boundary: f64,
    h_interior: f64,
    ramp: f64,
    seed: u64,
) -> Result<CellComplex, MeshError> {
    if !(h_boundary > 0.0 && h_interior >= h_boundary && h_interior < 0.5 && ramp > 0.0) {
        return Err(MeshError::InvalidArgument(
            "need 0 < h_boundary <= h_interior < 0.5 and ramp > 0".into(),
        ));
    }
    let size = |p: [f64; 2]| {
        let d = p[0].min(p[1]).min(1.0 - p[0]).min(1.0 - p[1]);
        h_boundary + (h_interior - h_boundary) * (d / ramp).min(1.0)
    };

    let per_side = (1.0 / h_boundary).round().max(1.0) as usize;
    let mut fixed = Vec::new();
    for i in 0..per_side {
        let s = i as f64 / per_side as f64;
        fixed.extend([[s, 0.0], [1.0, s], [1.0 - s, 1.0], [0.0, 1.0 - s]]);
    }

    // rejection sampling on a hexagonal lattice of the finest spacing
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let margin = 0.5 * h_boundary;
    let dy = h_boundary * 3f64.sqrt() / 2.0;
    let mut free = Vec::new();
    let mut row = 0;
    let mut y = margin;
    while y < 1.0 - margin {
        let shift = if row % 2 == 0 { 0.0 } else { 0.5 * h_boundary };
        let mut x = margin + shift;
        while x < 1.0 - margin {
            let h = size([x, y]);
            if rng.gen::<f64>() < (h_boundary / h).powi(2) {
                free.push([x, y]);
            }
            x += h_boundary;
        }
        y += dy;
        row += 1;
    }

    let nfixed = fixed.len();
    let mut pts: Vec<[f64; 2]> = fixed;
    pts.extend(free);
    for _ in 0..150 {
        let tris = delaunay_triangles(&pts)?;
        let mut bars: Vec<(usize, usize)> = tris
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        bars.sort_unstable();
        bars.dedup();
        let lens: Vec<f64> = bars
            .iter()
            .map(|&(a, b)| ((pts[a][0] - pts[b][0]).powi(2) + (pts[a][1] - pts[b][1]).powi(2)).sqrt())
            .collect();
        let hs: Vec<f64> = bars
            .iter()
            .map(|&(a, b)| size([(pts[a][0] + pts[b][0]) / 2.0, (pts[a][1] + pts[b][1]) / 2.0]))
            .collect();
        let scale = 1.2
            * (lens.iter().map(|l| l * l).sum::<f64>() / hs.iter().map(|h| h * h).sum::<f64>())
                .sqrt();
        let mut force = vec![[0.0; 2]; pts.len()];
        for ((&(a, b), &l), &h) in bars.iter().zip(&lens).zip(&hs) {
            let push = (h * scale - l).max(0.0);
            if push == 0.0 || l == 0.0 {
                continue;
            }
            for c in 0..2 {
                let f = push * (pts[a][c] - pts[b][c]) / l;
                force[a][c] += f;
                force[b][c] -= f;
            }
        }
        for (p, f) in pts.iter_mut().zip(&force).skip(nfixed) {
            for c in 0..2 {
                p[c] = (p[c] + 0.2 * f[c]).clamp(margin, 1.0 - margin);
            }
        }
    }
    delaunay(&pts)
}
