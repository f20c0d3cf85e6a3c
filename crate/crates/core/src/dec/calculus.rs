use super::{Cochain, DecError, OperatorKind, OperatorMatrix, Placement};
use crate::mesh::{CellComplex, DualComplex};

/// Per-cell sign κ of the Hodge star.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Causality {
    /// κ = +1 on every cell.
    #[default]
    Spacelike,
    PerCell(Vec<i8>),
}

impl Causality {
    fn sign(&self, i: usize) -> f64 {
        match self {
            Causality::Spacelike => 1.0,
            Causality::PerCell(s) => f64::from(s[i]),
        }
    }

    fn check(&self, expected: usize) -> Result<(), DecError> {
        match self {
            Causality::PerCell(s) if s.len() != expected => Err(DecError::CausalityLength {
                expected,
                actual: s.len(),
            }),
            Causality::PerCell(s) if s.iter().any(|&x| x != 1 && x != -1) => {
                Err(DecError::Mismatch("causality entries must be +1 or -1".into()))
            }
            _ => Ok(()),
        }
    }
}

/// The coboundary `d_k` from k-cochains to (k+1)-cochains.
pub fn exterior_derivative(complex: &CellComplex, k: usize) -> Result<OperatorMatrix, DecError> {
    let n = complex.dim();
    if k >= n {
        return Err(DecError::DegreeOutOfRange { degree: k, dim: n });
    }
    let mut trip = Vec::new();
    for (i, cell) in complex.cells(k + 1).iter().enumerate() {
        for &(f, s) in &cell.boundary {
            trip.push((i, f, f64::from(s)));
        }
    }
    Ok(OperatorMatrix::from_triplets(
        OperatorKind::Incidence,
        complex.num_cells(k + 1),
        complex.num_cells(k),
        &trip,
    ))
}

/// Diagonal star on primal k-cochains with entries `κ |*σ| / |σ|`.
pub fn hodge_star(
    complex: &CellComplex,
    dual: &DualComplex,
    k: usize,
    causality: &Causality,
) -> Result<OperatorMatrix, DecError> {
    Ok(OperatorMatrix::diagonal(&star_entries(complex, dual, k, causality)?))
}

fn star_entries(
    complex: &CellComplex,
    dual: &DualComplex,
    k: usize,
    causality: &Causality,
) -> Result<Vec<f64>, DecError> {
    let n = complex.dim();
    if k > n {
        return Err(DecError::DegreeOutOfRange { degree: k, dim: n });
    }
    causality.check(complex.num_cells(k))?;
    let primal = dual.primal_volumes(k);
    let duals = dual.dual_volumes(k);
    primal
        .iter()
        .zip(duals)
        .enumerate()
        .map(|(i, (&p, &d))| {
            if p == 0.0 {
                Err(DecError::ZeroPrimalMeasure { dim: k, index: i })
            } else {
                Ok(causality.sign(i) * d / p)
            }
        })
        .collect()
}

fn invert(entries: &[f64], k: usize) -> Result<Vec<f64>, DecError> {
    entries
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if v == 0.0 {
                Err(DecError::ZeroDualMeasure { dim: k, index: i })
            } else {
                Ok(1.0 / v)
            }
        })
        .collect()
}

/// `(α, β) = Σ κ (|*σ|/|σ|) α_σ β_σ` for primal cochains; dual cochains use
/// the reciprocal ratio.
pub fn inner_product(
    complex: &CellComplex,
    dual: &DualComplex,
    alpha: &Cochain,
    beta: &Cochain,
    causality: &Causality,
) -> Result<f64, DecError> {
    if alpha.degree() != beta.degree() || alpha.placement() != beta.placement() {
        return Err(DecError::Mismatch(format!(
            "inner product of degree {} and degree {} cochains",
            alpha.degree(),
            beta.degree()
        )));
    }
    alpha.check(complex)?;
    beta.check(complex)?;
    let weights = match alpha.placement() {
        Placement::Primal => star_entries(complex, dual, alpha.degree(), causality)?,
        Placement::Dual => {
            let k = complex.dim() - alpha.degree();
            invert(&star_entries(complex, dual, k, causality)?, k)?
        }
    };
    Ok(weights
        .iter()
        .zip(alpha.values())
        .zip(beta.values())
        .map(|((w, a), b)| w * a * b)
        .sum())
}

/// `δ_k = ⋆_{k-1}⁻¹ d_{k-1}ᵀ ⋆_k`, the adjoint of `d_{k-1}` for the inner
/// product on cochains that vanish on `∂K`. With this sign `δ d` is the
/// positive semidefinite Laplacian.
pub fn codifferential(
    complex: &CellComplex,
    dual: &DualComplex,
    k: usize,
) -> Result<OperatorMatrix, DecError> {
    let n = complex.dim();
    if k == 0 || k > n {
        return Err(DecError::DegreeOutOfRange { degree: k, dim: n });
    }
    let star_k = hodge_star(complex, dual, k, &Causality::Spacelike)?;
    let inv = invert(&star_entries(complex, dual, k - 1, &Causality::Spacelike)?, k - 1)?;
    let d = exterior_derivative(complex, k - 1)?;
    OperatorMatrix::diagonal(&inv).compose(&d.transpose().compose(&star_k)?)
}

/// `(dα, β) − (α, δβ) − Σ_ρ α_ρ b_ρ` over boundary (k-1)-cells ρ.
///
/// `boundary_flux` gives `b_ρ`, the value of `⋆β` on the boundary dual cell
/// of each boundary (k-1)-cell, ordered as [`DualComplex::boundary_cells`].
/// A primal cochain does not determine these values, so they are supplied
/// (zero when `None`). The codifferential used here is the full one whose dual
/// derivative closes each boundary dual cell with that flux.
pub fn ibp_residual(
    complex: &CellComplex,
    dual: &DualComplex,
    alpha: &Cochain,
    beta: &Cochain,
    boundary_flux: Option<&[f64]>,
) -> Result<f64, DecError> {
    let k = beta.degree();
    if k == 0 || alpha.degree() + 1 != k {
        return Err(DecError::Mismatch(format!(
            "need degrees (k-1, k), got ({}, {k})",
            alpha.degree()
        )));
    }
    if alpha.placement() != Placement::Primal || beta.placement() != Placement::Primal {
        return Err(DecError::Mismatch("integration by parts needs primal cochains".into()));
    }
    alpha.check(complex)?;
    beta.check(complex)?;
    let bcells = dual.boundary_cells(k - 1);
    let zeros;
    let flux = match boundary_flux {
        Some(b) => {
            if b.len() != bcells.len() {
                return Err(DecError::LengthMismatch {
                    expected: bcells.len(),
                    actual: b.len(),
                });
            }
            b
        }
        None => {
            zeros = vec![0.0; bcells.len()];
            &zeros[..]
        }
    };

    let d = exterior_derivative(complex, k - 1)?;
    let da = Cochain::new(k, Placement::Primal, d.apply(alpha.values()))?;
    let lhs = inner_product(complex, dual, &da, beta, &Causality::Spacelike)?;

    let star_k = star_entries(complex, dual, k, &Causality::Spacelike)?;
    let star_km1 = star_entries(complex, dual, k - 1, &Causality::Spacelike)?;
    let star_beta: Vec<f64> = star_k.iter().zip(beta.values()).map(|(s, b)| s * b).collect();
    let mut div = d.apply_transpose(&star_beta);
    for (&rho, &b) in bcells.iter().zip(flux) {
        div[rho] -= b;
    }
    let inv = invert(&star_km1, k - 1)?;
    let delta_beta: Vec<f64> = inv.iter().zip(&div).map(|(s, v)| s * v).collect();
    let rhs = inner_product(
        complex,
        dual,
        alpha,
        &Cochain::new(k - 1, Placement::Primal, delta_beta)?,
        &Causality::Spacelike,
    )?;
    let boundary: f64 = bcells
        .iter()
        .zip(flux)
        .map(|(&rho, &b)| alpha.values()[rho] * b)
        .sum();
    Ok(lhs - rhs - boundary)
}
