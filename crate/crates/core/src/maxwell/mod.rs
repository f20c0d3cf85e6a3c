//! Electromagnetic fields on a complex: constitutive stars, field state,
//! PEC walls and current sources.

mod source;
mod state;

pub use source::{continuity_residual, CurrentSource, FieldCurrent, SourceTerm};
pub use state::FieldState;

use thiserror::Error;

use crate::dec::{exterior_derivative, DecError, OperatorMatrix};
use crate::mesh::{circumcentric_dual, CellComplex, DualComplex, MeshError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MaxwellError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Dec(#[from] DecError),
    #[error("invalid material: {0}")]
    Material(String),
    #[error("{0}")]
    Mismatch(String),
}

/// A material coefficient, uniform or given per top cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient {
    Uniform(f64),
    PerCell(Vec<f64>),
}

impl Coefficient {
    pub fn at(&self, top: usize) -> f64 {
        match self {
            Coefficient::Uniform(v) => *v,
            Coefficient::PerCell(v) => v[top],
        }
    }

    fn validate(&self, name: &str, tops: usize) -> Result<(), MaxwellError> {
        let values: &[f64] = match self {
            Coefficient::Uniform(v) => std::slice::from_ref(v),
            Coefficient::PerCell(v) => {
                if v.len() != tops {
                    return Err(MaxwellError::Material(format!(
                        "{name} has {} values for {tops} cells",
                        v.len()
                    )));
                }
                v
            }
        };
        if let Some(bad) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(MaxwellError::Material(format!("{name} = {bad} must be positive")));
        }
        Ok(())
    }
}

/// Permittivity and permeability.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialParams {
    pub epsilon: Coefficient,
    pub mu: Coefficient,
}

impl MaterialParams {
    pub fn vacuum() -> Self {
        Self::uniform(1.0, 1.0)
    }

    pub fn uniform(epsilon: f64, mu: f64) -> Self {
        Self {
            epsilon: Coefficient::Uniform(epsilon),
            mu: Coefficient::Uniform(mu),
        }
    }

    pub fn validate(&self, tops: usize) -> Result<(), MaxwellError> {
        self.epsilon.validate("epsilon", tops)?;
        self.mu.validate("mu", tops)
    }
}

/// Diagonal constitutive stars: `⋆_ε` on edges (`D = ⋆_ε E`) and the
/// reluctivity star `ν` on faces (`H = ν B`).
///
/// Each dual cell is split into the pieces lying in different top cells and
/// every piece is weighted by its own cell's coefficient, so
/// `⋆_ε(e) = Σ_τ ε_τ |*e ∩ τ| / |e|` and `ν(σ) = Σ_τ |*σ ∩ τ| / (μ_τ |σ|)`.
pub fn constitutive_stars(
    complex: &CellComplex,
    dual: &DualComplex,
    material: &MaterialParams,
) -> Result<(OperatorMatrix, OperatorMatrix), MaxwellError> {
    let (eps, nu) = star_entries(complex, dual, material)?;
    Ok((OperatorMatrix::diagonal(&eps), OperatorMatrix::diagonal(&nu)))
}

fn star_entries(
    complex: &CellComplex,
    dual: &DualComplex,
    material: &MaterialParams,
) -> Result<(Vec<f64>, Vec<f64>), MaxwellError> {
    let n = complex.dim();
    if n < 2 {
        return Err(MaxwellError::Mismatch("fields need a 2- or 3-dimensional mesh".into()));
    }
    material.validate(complex.num_cells(n))?;
    let weighted = |k: usize, coef: &dyn Fn(usize) -> f64| -> Result<Vec<f64>, MaxwellError> {
        (0..complex.num_cells(k))
            .map(|i| {
                let len = dual.primal_volumes(k)[i];
                if len == 0.0 {
                    return Err(DecError::ZeroPrimalMeasure { dim: k, index: i }.into());
                }
                let s: f64 = dual
                    .dual_portions(k, i)
                    .iter()
                    .map(|&(t, w)| coef(t) * w)
                    .sum();
                Ok(s / len)
            })
            .collect()
    };
    let eps = weighted(1, &|t| material.epsilon.at(t))?;
    let nu = weighted(2, &|t| 1.0 / material.mu.at(t))?;
    Ok((eps, nu))
}

/// The parts of the constitutive stars that lie inside one top cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementStars {
    /// `(edge, ε_τ |*e ∩ τ| / |e|)` over the cell's interior edges.
    pub edges: Vec<(usize, f64)>,
    /// `(face, |*σ ∩ τ| / (μ_τ |σ|))` over the cell's faces.
    pub faces: Vec<(usize, f64)>,
}

/// Everything the integrators need about a spatial mesh and its materials.
#[derive(Debug, Clone)]
pub struct MaxwellModel {
    pub complex: CellComplex,
    pub dual: DualComplex,
    pub material: MaterialParams,
    pub d0: OperatorMatrix,
    pub d1: OperatorMatrix,
    /// Present for 3-dimensional meshes only.
    pub d2: Option<OperatorMatrix>,
    /// `⋆_ε` diagonal, one entry per edge.
    pub eps_star: Vec<f64>,
    /// `ν` diagonal, one entry per face.
    pub nu_star: Vec<f64>,
    pub boundary_edges: Vec<bool>,
    pub interior_vertices: Vec<usize>,
}

impl MaxwellModel {
    pub fn new(complex: CellComplex, material: MaterialParams) -> Result<Self, MaxwellError> {
        let dual = circumcentric_dual(&complex)?;
        Self::with_dual(complex, dual, material)
    }

    pub fn with_dual(
        complex: CellComplex,
        dual: DualComplex,
        material: MaterialParams,
    ) -> Result<Self, MaxwellError> {
        let (eps_star, nu_star) = star_entries(&complex, &dual, &material)?;
        let d0 = exterior_derivative(&complex, 0)?;
        let d1 = exterior_derivative(&complex, 1)?;
        let d2 = if complex.dim() == 3 {
            Some(exterior_derivative(&complex, 2)?)
        } else {
            None
        };
        if let Some(e) = (0..complex.num_cells(1)).find(|&e| !complex.is_boundary(1, e) && !(eps_star[e] > 0.0)) {
            return Err(DecError::NonPositiveStar { dim: 1, index: e, value: eps_star[e] }.into());
        }
        let boundary_edges = complex.boundary_mask(1).to_vec();
        let interior_vertices = (0..complex.num_cells(0))
            .filter(|&v| !complex.is_boundary(0, v))
            .collect();
        Ok(Self {
            complex,
            dual,
            material,
            d0,
            d1,
            d2,
            eps_star,
            nu_star,
            boundary_edges,
            interior_vertices,
        })
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    pub fn num_edges(&self) -> usize {
        self.complex.num_cells(1)
    }

    pub fn num_faces(&self) -> usize {
        self.complex.num_cells(2)
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.boundary_edges[e]
    }

    /// `E = ⋆_ε⁻¹ D` on interior edges; boundary edges are held at zero.
    pub fn e_from_d(&self, d: &[f64]) -> Vec<f64> {
        d.iter()
            .enumerate()
            .map(|(e, &x)| if self.boundary_edges[e] { 0.0 } else { x / self.eps_star[e] })
            .collect()
    }

    pub fn d_from_e(&self, e: &[f64]) -> Vec<f64> {
        e.iter().zip(&self.eps_star).map(|(x, s)| x * s).collect()
    }

    pub fn h_from_b(&self, b: &[f64]) -> Vec<f64> {
        b.iter().zip(&self.nu_star).map(|(x, s)| x * s).collect()
    }

    /// Element restriction of `⋆_ε` and `ν` to top cell `top`.
    pub fn element(&self, top: usize) -> ElementStars {
        let k = &self.complex;
        let n = k.dim();
        let eps = self.material.epsilon.at(top);
        let mu = self.material.mu.at(top);
        let faces: Vec<usize> = if n == 2 {
            vec![top]
        } else {
            k.cell(n, top).boundary.iter().map(|&(f, _)| f).collect()
        };
        let mut edges: Vec<usize> = faces
            .iter()
            .flat_map(|&f| k.cell(2, f).boundary.iter().map(|&(e, _)| e))
            .filter(|&e| !self.boundary_edges[e])
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let part = |dim: usize, i: usize| -> f64 {
            self.dual
                .dual_portions(dim, i)
                .iter()
                .filter(|&&(t, _)| t == top)
                .map(|&(_, w)| w)
                .sum::<f64>()
                / self.dual.primal_volumes(dim)[i]
        };
        ElementStars {
            edges: edges.into_iter().map(|e| (e, eps * part(1, e))).collect(),
            faces: faces.into_iter().map(|f| (f, part(2, f) / mu)).collect(),
        }
    }

    /// Outward flux of a dual (n-1)-cochain through each vertex's dual cell.
    pub fn dual_divergence(&self, flux: &[f64]) -> Vec<f64> {
        self.d0.apply_transpose(flux).into_iter().map(|x| -x).collect()
    }
}
