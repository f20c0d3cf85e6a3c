use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::IntegratorError;
use crate::maxwell::MaxwellModel;

const MAX_ITERATIONS: usize = 10_000;
const TOLERANCE: f64 = 1e-6;

/// Stability limit `2 / √λ_max` of the leapfrog, with `λ_max` the largest
/// eigenvalue of `⋆_ε⁻¹ d₁ᵀ ν d₁` on interior edges, by power iteration on
/// the symmetrized operator until the Rayleigh quotient changes by less than
/// `1e-6` relative.
pub fn cfl_dt(model: &MaxwellModel) -> Result<f64, IntegratorError> {
    let ne = model.num_edges();
    let scale: Vec<f64> = (0..ne)
        .map(|e| {
            if model.is_boundary_edge(e) {
                0.0
            } else {
                1.0 / model.eps_star[e].sqrt()
            }
        })
        .collect();
    let apply = |v: &[f64]| -> Vec<f64> {
        let x: Vec<f64> = v.iter().zip(&scale).map(|(a, s)| a * s).collect();
        let h = model.h_from_b(&model.d1.apply(&x));
        let y = model.d1.apply_transpose(&h);
        y.iter().zip(&scale).map(|(a, s)| a * s).collect()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x00c0_ffee);
    let mut v: Vec<f64> = scale
        .iter()
        .map(|&s| if s > 0.0 { rng.gen_range(-1.0..1.0) } else { 0.0 })
        .collect();
    normalize(&mut v).ok_or_else(|| {
        IntegratorError::InvalidArgument("mesh has no interior edges".into())
    })?;
    let mut lambda_prev = 0.0;
    for _ in 0..MAX_ITERATIONS {
        let mut w = apply(&v);
        let lambda: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        if normalize(&mut w).is_none() {
            return Err(IntegratorError::InvalidArgument(
                "curl-curl operator vanishes on the start vector".into(),
            ));
        }
        if (lambda - lambda_prev).abs() <= TOLERANCE * lambda.abs() {
            return Ok(2.0 / lambda.sqrt());
        }
        lambda_prev = lambda;
        v = w;
    }
    Err(IntegratorError::NoConvergence(MAX_ITERATIONS))
}

fn normalize(v: &mut [f64]) -> Option<()> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= n);
    Some(())
}

/// Per-face stability limits from element restrictions of the same operator.
///
/// Each top cell τ contributes `λ_τ`, the largest eigenvalue of its local
/// `M_τ⁻¹ K_τ`; a face gets `2 / √λ` with `λ` the largest over its incident
/// cells. Since the global operator is the assembly of these local pieces,
/// `λ_max ≤ max_τ λ_τ`: the smallest face limit never exceeds the global one. Cells
/// whose local mass is not positive (obtuse elements) fall back to the global
/// limit.
pub fn local_cfl_dt(model: &MaxwellModel) -> Result<Vec<f64>, IntegratorError> {
    let n = model.dim();
    let tops = model.complex.num_cells(n);
    let mut global: Option<f64> = None;
    let mut lam_top = vec![0.0; tops];
    for (t, slot) in lam_top.iter_mut().enumerate() {
        match element_lambda(model, t) {
            Some(l) if l > 0.0 => *slot = l,
            _ => {
                let g = match global {
                    Some(g) => g,
                    None => *global.insert(cfl_dt(model)?),
                };
                *slot = 4.0 / (g * g);
            }
        }
    }
    Ok((0..model.num_faces())
        .map(|f| {
            let lam = if n == 2 {
                lam_top[f]
            } else {
                model
                    .complex
                    .cofaces(2, f)
                    .iter()
                    .map(|&(t, _)| lam_top[t])
                    .fold(0.0, f64::max)
            };
            2.0 / lam.sqrt()
        })
        .collect())
}

fn element_lambda(model: &MaxwellModel, top: usize) -> Option<f64> {
    let el = model.element(top);
    if el.edges.is_empty() {
        return None;
    }
    if el.edges.iter().any(|&(_, m)| !(m > 0.0)) {
        return None;
    }
    let m = el.edges.len();
    let mut k = DMatrix::<f64>::zeros(m, m);
    for &(f, nu) in &el.faces {
        let row: Vec<(usize, f64)> = model
            .d1
            .row(f)
            .into_iter()
            .filter_map(|(e, s)| el.edges.iter().position(|&(x, _)| x == e).map(|i| (i, s)))
            .collect();
        for &(i, si) in &row {
            for &(j, sj) in &row {
                k[(i, j)] += nu * si * sj;
            }
        }
    }
    let inv_sqrt: Vec<f64> = el.edges.iter().map(|&(_, w)| 1.0 / w.sqrt()).collect();
    let a = DMatrix::from_fn(m, m, |i, j| inv_sqrt[i] * k[(i, j)] * inv_sqrt[j]);
    Some(a.symmetric_eigen().eigenvalues.iter().cloned().fold(0.0, f64::max))
}
