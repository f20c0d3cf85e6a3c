use super::complex::CellComplex;
use super::geometry::{cell_circumcenter, cell_volume, dot, norm, sub, Point};
use super::MeshError;

/// Non-fatal findings from dual construction.
#[derive(Debug, Clone, PartialEq)]
pub enum DualWarning {
    /// Some elementary piece of the dual of this cell has negative signed
    /// measure (the circumcenter of a neighbouring cell lies beyond it).
    NegativeDualPart { dim: usize, index: usize, value: f64 },
}

/// Boundary-restricted circumcentric dual of a [`CellComplex`].
///
/// Dual measures are signed sums over flags `σ ⊂ τ_1 ⊂ … ⊂ τ_{n-k}` of the
/// elementary simplices spanned by the circumcenters along the flag. Cells on
/// `∂K` additionally get a dual inside the boundary itself, built from flags
/// that stay on the boundary.
#[derive(Debug, Clone)]
pub struct DualComplex {
    dim: usize,
    circumcenters: Vec<Vec<Point>>,
    primal_volumes: Vec<Vec<f64>>,
    dual_volumes: Vec<Vec<f64>>,
    portions: Vec<Vec<Vec<(usize, f64)>>>,
    boundary_cells: Vec<Vec<usize>>,
    boundary_dual_volumes: Vec<Vec<f64>>,
    warnings: Vec<DualWarning>,
}

/// Builds the circumcentric dual of `complex`, restricted to the complex.
pub fn circumcentric_dual(complex: &CellComplex) -> Result<DualComplex, MeshError> {
    let n = complex.dim();
    let shape = complex.shape();
    let mut circumcenters = Vec::with_capacity(n + 1);
    let mut primal_volumes = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut cc = Vec::with_capacity(complex.num_cells(k));
        let mut vol = Vec::with_capacity(complex.num_cells(k));
        for i in 0..complex.num_cells(k) {
            let pts = complex.cell_points(k, i);
            let c = cell_circumcenter(shape, &pts).ok_or_else(|| MeshError::Degenerate {
                dim: k,
                index: i,
                reason: format!(
                    "no well-conditioned circumcenter for vertices {:?}",
                    complex.cell(k, i).vertices
                ),
            })?;
            let v = cell_volume(shape, &pts);
            if !(v > 0.0) {
                return Err(MeshError::ZeroVolume { dim: k, index: i });
            }
            cc.push(c);
            vol.push(v);
        }
        circumcenters.push(cc);
        primal_volumes.push(vol);
    }

    let mut dual_volumes = Vec::with_capacity(n + 1);
    let mut portions = Vec::with_capacity(n + 1);
    let mut warnings = Vec::new();
    for k in 0..=n {
        let fact = factorial(n - k);
        let mut vols = Vec::with_capacity(complex.num_cells(k));
        let mut parts = Vec::with_capacity(complex.num_cells(k));
        for i in 0..complex.num_cells(k) {
            let mut acc: Vec<(usize, f64)> = Vec::new();
            let mut min_piece = f64::INFINITY;
            walk_flags(complex, &circumcenters, k, i, 1.0, n, false, &mut |top, w| {
                min_piece = min_piece.min(w);
                match acc.iter_mut().find(|(t, _)| *t == top) {
                    Some(slot) => slot.1 += w / fact,
                    None => acc.push((top, w / fact)),
                }
            });
            acc.sort_by_key(|&(t, _)| t);
            let total: f64 = acc.iter().map(|&(_, w)| w).sum();
            if min_piece < -1e-12 * total.abs().max(1e-300) && k < n {
                warnings.push(DualWarning::NegativeDualPart {
                    dim: k,
                    index: i,
                    value: min_piece / fact,
                });
            }
            vols.push(total);
            parts.push(acc);
        }
        dual_volumes.push(vols);
        portions.push(parts);
    }

    let mut boundary_cells = Vec::with_capacity(n);
    let mut boundary_dual_volumes = Vec::with_capacity(n);
    for k in 0..n {
        let fact = factorial(n - 1 - k);
        let cells: Vec<usize> = (0..complex.num_cells(k))
            .filter(|&i| complex.is_boundary(k, i))
            .collect();
        let vols = cells
            .iter()
            .map(|&i| {
                let mut total = 0.0;
                walk_flags(complex, &circumcenters, k, i, 1.0, n - 1, true, &mut |_, w| {
                    total += w
                });
                total / fact
            })
            .collect();
        boundary_cells.push(cells);
        boundary_dual_volumes.push(vols);
    }

    Ok(DualComplex {
        dim: n,
        circumcenters,
        primal_volumes,
        dual_volumes,
        portions,
        boundary_cells,
        boundary_dual_volumes,
        warnings,
    })
}

/// Visits every flag from cell `(k, i)` up to level `top`, passing the final
/// cell and the product of signed circumcenter heights along the flag.
#[allow(clippy::too_many_arguments)]
fn walk_flags(
    complex: &CellComplex,
    cc: &[Vec<Point>],
    k: usize,
    i: usize,
    product: f64,
    top: usize,
    boundary_only: bool,
    visit: &mut dyn FnMut(usize, f64),
) {
    if k == top {
        visit(i, product);
        return;
    }
    for &(t, _) in complex.cofaces(k, i) {
        if boundary_only && !complex.is_boundary(k + 1, t) {
            continue;
        }
        let h = signed_height(complex, cc, k, i, t);
        walk_flags(complex, cc, k + 1, t, product * h, top, boundary_only, visit);
    }
}

/// Distance from the circumcenter of `(k, i)` to that of its coface `(k+1, t)`,
/// negative when the coface circumcenter lies on the far side of the face.
fn signed_height(complex: &CellComplex, cc: &[Vec<Point>], k: usize, i: usize, t: usize) -> f64 {
    let lower = &complex.cell(k, i).vertices;
    let upper = &complex.cell(k + 1, t).vertices;
    let w = upper
        .iter()
        .find(|v| !lower.contains(v))
        .copied()
        .expect("coface has an extra vertex");
    let step = sub(cc[k + 1][t], cc[k][i]);
    let len = norm(step);
    if len == 0.0 {
        return 0.0;
    }
    let side = dot(step, sub(complex.point(w), cc[k][i]));
    if side < 0.0 {
        -len
    } else {
        len
    }
}

fn factorial(m: usize) -> f64 {
    (1..=m).product::<usize>() as f64
}

impl DualComplex {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn circumcenter(&self, k: usize, i: usize) -> Point {
        self.circumcenters[k][i]
    }

    /// `|σ|` for every k-cell.
    pub fn primal_volumes(&self, k: usize) -> &[f64] {
        &self.primal_volumes[k]
    }

    /// Signed `|*σ|` for every k-cell.
    pub fn dual_volumes(&self, k: usize) -> &[f64] {
        &self.dual_volumes[k]
    }

    /// Signed measure of the part of `*σ` inside each incident top cell.
    pub fn dual_portions(&self, k: usize, i: usize) -> &[(usize, f64)] {
        &self.portions[k][i]
    }

    /// Boundary k-cells, in index order.
    pub fn boundary_cells(&self, k: usize) -> &[usize] {
        &self.boundary_cells[k]
    }

    /// Measures of the duals of boundary k-cells taken within `∂K`, aligned
    /// with [`Self::boundary_cells`].
    pub fn boundary_dual_volumes(&self, k: usize) -> &[f64] {
        &self.boundary_dual_volumes[k]
    }

    pub fn warnings(&self) -> &[DualWarning] {
        &self.warnings
    }

    /// Indices of k-cells whose dual has zero measure.
    pub fn zero_dual_cells(&self, k: usize) -> Vec<usize> {
        self.dual_volumes[k]
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Largest `|cos|` between a dual edge and the spanning vectors of its
    /// primal (n-1)-cell, over all (n-1)-cells with a non-degenerate dual edge.
    pub fn max_orthogonality_defect(&self, complex: &CellComplex) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..complex.num_cells(n - 1) {
            let co = complex.cofaces(n - 1, i);
            let a = self.circumcenters[n][co[0].0];
            let b = if co.len() == 2 {
                self.circumcenters[n][co[1].0]
            } else {
                self.circumcenters[n - 1][i]
            };
            let dual_edge = sub(a, b);
            let dl = norm(dual_edge);
            if dl < 1e-14 {
                continue;
            }
            let pts = complex.cell_points(n - 1, i);
            for p in &pts[1..] {
                let v = sub(*p, pts[0]);
                worst = worst.max((dot(v, dual_edge) / (norm(v) * dl)).abs());
            }
        }
        worst
    }
}
