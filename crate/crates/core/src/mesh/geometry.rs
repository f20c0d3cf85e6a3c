use nalgebra::{DMatrix, DVector};

use super::complex::CellShape;

/// A point in ambient space; unused trailing coordinates are zero.
pub type Point = [f64; 3];

/// Gram systems with a condition number above this are treated as degenerate.
pub(crate) const MAX_CONDITION: f64 = 1e12;

pub(crate) fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn scale(a: Point, s: f64) -> Point {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub(crate) fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm(a: Point) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn distance(a: Point, b: Point) -> f64 {
    norm(sub(a, b))
}

/// Edge vectors spanning a cell from its first vertex.
fn spanning_vectors(shape: CellShape, pts: &[Point]) -> Vec<Point> {
    match shape {
        CellShape::Simplex => pts[1..].iter().map(|&p| sub(p, pts[0])).collect(),
        CellShape::Cube => {
            let k = pts.len().trailing_zeros();
            (0..k).map(|a| sub(pts[1 << a], pts[0])).collect()
        }
    }
}

fn gram(vectors: &[Point]) -> DMatrix<f64> {
    let k = vectors.len();
    DMatrix::from_fn(k, k, |i, j| dot(vectors[i], vectors[j]))
}

/// Circumcenter of a simplex within its affine hull, from the equidistance
/// conditions `2 (v_i - v_0) . (c - v_0) = |v_i - v_0|^2`.
///
/// Returns `None` when the Gram system is singular or its condition number
/// exceeds `1e12`.
pub fn circumcenter(pts: &[Point]) -> Option<Point> {
    if pts.len() == 1 {
        return Some(pts[0]);
    }
    let vs = spanning_vectors(CellShape::Simplex, pts);
    let g = gram(&vs);
    if condition(&g) > MAX_CONDITION {
        return None;
    }
    let rhs = DVector::from_iterator(vs.len(), vs.iter().map(|v| 0.5 * dot(*v, *v)));
    let lambda = g.lu().solve(&rhs)?;
    let mut c = pts[0];
    for (v, l) in vs.iter().zip(lambda.iter()) {
        c = add(c, scale(*v, *l));
    }
    Some(c)
}

fn condition(g: &DMatrix<f64>) -> f64 {
    let eig = g.clone().symmetric_eigen().eigenvalues;
    let max = eig.iter().cloned().fold(0.0_f64, f64::max);
    let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Circumcenter for either cell shape; boxes use the vertex centroid.
pub(crate) fn cell_circumcenter(shape: CellShape, pts: &[Point]) -> Option<Point> {
    match shape {
        CellShape::Simplex => circumcenter(pts),
        CellShape::Cube => {
            let mut c = [0.0; 3];
            for p in pts {
                c = add(c, *p);
            }
            Some(scale(c, 1.0 / pts.len() as f64))
        }
    }
}

/// Unsigned k-volume of a cell (1 for a vertex).
pub(crate) fn cell_volume(shape: CellShape, pts: &[Point]) -> f64 {
    if pts.len() == 1 {
        return 1.0;
    }
    let vs = spanning_vectors(shape, pts);
    let det = gram(&vs).determinant().max(0.0);
    let k = vs.len();
    match shape {
        CellShape::Simplex => det.sqrt() / (1..=k).product::<usize>() as f64,
        CellShape::Cube => det.sqrt(),
    }
}

/// Barycentric coordinates of `p` with respect to a full-dimensional simplex.
pub(crate) fn barycentric(pts: &[Point], p: Point, ambient: usize) -> Option<Vec<f64>> {
    let k = pts.len() - 1;
    if k != ambient {
        return None;
    }
    let m = DMatrix::from_fn(k, k, |i, j| pts[j + 1][i] - pts[0][i]);
    let rhs = DVector::from_iterator(k, (0..k).map(|i| p[i] - pts[0][i]));
    let l = m.lu().solve(&rhs)?;
    let mut out = Vec::with_capacity(k + 1);
    out.push(1.0 - l.sum());
    out.extend(l.iter());
    Some(out)
}
