use super::DiagnosticsError;
use crate::integrators::{bootstrap, leapfrog_step};
use crate::maxwell::{ElementStars, FieldState, MaxwellModel};

/// Potentials `A^n` at whole steps `n = 0..=N` of a synchronous run in
/// temporal gauge, `A^{n+1} = A^n − Δt E^{n+1/2}` and `B^n = d₁ A^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialHistory {
    pub dt: f64,
    pub levels: Vec<Vec<f64>>,
}

/// Spacetime block: the given spatial top cells times the time slabs
/// `[start, start + steps]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacetimeBlock {
    pub cells: Vec<usize>,
    pub start: usize,
    pub steps: usize,
}

/// Runs the source-free leapfrog from `A⁰`, `E⁰` (boundary edges zeroed) and
/// records the potential at every whole step.
pub fn potential_history(
    model: &MaxwellModel,
    a0: &[f64],
    e0: &[f64],
    dt: f64,
    steps: usize,
) -> Result<PotentialHistory, DiagnosticsError> {
    let mut a: Vec<f64> = a0
        .iter()
        .enumerate()
        .map(|(e, &x)| if model.is_boundary_edge(e) { 0.0 } else { x })
        .collect();
    let b0 = model.d1.apply(&a);
    let mut state = FieldState::from_fields(model, e0.to_vec(), b0, 0.0);
    bootstrap(model, &mut state, dt, None);
    let mut levels = Vec::with_capacity(steps + 1);
    levels.push(a.clone());
    for _ in 0..steps {
        for (x, e) in a.iter_mut().zip(state.e.values()) {
            *x -= dt * e;
        }
        levels.push(a.clone());
        leapfrog_step(model, &mut state, dt, None)?;
    }
    Ok(PotentialHistory { dt, levels })
}

/// Gradient of the block action `S = Σ_{τ, m} L(τ, m)` with
/// `L = Δt ½ Σ_e w_e (ΔA_e/Δt)² − (Δt/2) ½ Σ_σ ν_σ ((d₁A^m)_σ² + (d₁A^{m+1})_σ²)`,
/// keyed by `(level, edge)`.
fn block_gradient(
    model: &MaxwellModel,
    elements: &[ElementStars],
    hist: &PotentialHistory,
    block: &SpacetimeBlock,
) -> std::collections::BTreeMap<(usize, usize), f64> {
    let dt = hist.dt;
    let mut grad = std::collections::BTreeMap::new();
    let curl = |level: usize, f: usize| -> f64 {
        model
            .d1
            .row(f)
            .iter()
            .map(|&(e, s)| s * hist.levels[level][e])
            .sum()
    };
    for el in elements {
        for m in block.start..block.start + block.steps {
            for &(e, w) in &el.edges {
                let v = w * (hist.levels[m + 1][e] - hist.levels[m][e]) / dt;
                *grad.entry((m, e)).or_insert(0.0) -= v;
                *grad.entry((m + 1, e)).or_insert(0.0) += v;
            }
            for &(f, nu) in &el.faces {
                for level in [m, m + 1] {
                    let b = curl(level, f);
                    for (e, s) in model.d1.row(f) {
                        if model.is_boundary_edge(e) {
                            continue;
                        }
                        *grad.entry((level, e)).or_insert(0.0) -= 0.5 * dt * nu * b * s;
                    }
                }
            }
        }
    }
    grad
}

/// Largest Euler–Lagrange residual of a history at interior spacetime nodes.
fn euler_lagrange_residual(model: &MaxwellModel, hist: &PotentialHistory) -> f64 {
    let dt = hist.dt;
    let mut worst: f64 = 0.0;
    for n in 1..hist.levels.len().saturating_sub(1) {
        let b = model.d1.apply(&hist.levels[n]);
        let h = model.h_from_b(&b);
        let curl_h = model.d1.apply_transpose(&h);
        for e in 0..model.num_edges() {
            if model.is_boundary_edge(e) {
                continue;
            }
            let acc = hist.levels[n + 1][e] - 2.0 * hist.levels[n][e] + hist.levels[n - 1][e];
            let r = -model.eps_star[e] * acc / dt - dt * curl_h[e];
            worst = worst.max(r.abs());
        }
    }
    worst
}

/// `|Σ_{∂K_sub} (α · ∂S(β) − β · ∂S(α))|`, the discrete multisymplectic form
/// evaluated on two solutions over the boundary nodes of a spacetime block.
pub fn multisymplectic_residual(
    model: &MaxwellModel,
    alpha: &PotentialHistory,
    beta: &PotentialHistory,
    block: &SpacetimeBlock,
) -> Result<f64, DiagnosticsError> {
    let n = model.dim();
    if alpha.dt != beta.dt || alpha.levels.len() != beta.levels.len() {
        return Err(DiagnosticsError::InvalidInput("histories differ in time grid".into()));
    }
    if block.steps == 0 || block.start + block.steps >= alpha.levels.len() {
        return Err(DiagnosticsError::InvalidInput("block exceeds the history".into()));
    }
    let tops = model.complex.num_cells(n);
    if block.cells.is_empty() || block.cells.iter().any(|&c| c >= tops) {
        return Err(DiagnosticsError::InvalidInput("block cells out of range".into()));
    }
    for (name, h) in [("alpha", alpha), ("beta", beta)] {
        let r = euler_lagrange_residual(model, h);
        if r > 1e-8 {
            return Err(DiagnosticsError::InvalidInput(format!(
                "{name} is not a solution (residual {r:e})"
            )));
        }
    }
    let mut cells = block.cells.clone();
    cells.sort_unstable();
    cells.dedup();
    let elements: Vec<ElementStars> = cells.iter().map(|&t| model.element(t)).collect();
    let ga = block_gradient(model, &elements, alpha, block);
    let gb = block_gradient(model, &elements, beta, block);

    let interior_edge = |e: usize| {
        model
            .complex
            .incident_top_cells(1, e)
            .iter()
            .all(|t| cells.binary_search(t).is_ok())
    };
    let mut omega = 0.0;
    for (&(level, e), &g_beta) in &gb {
        let inside = level > block.start && level < block.start + block.steps && interior_edge(e);
        if inside {
            continue;
        }
        let g_alpha = ga[&(level, e)];
        omega += alpha.levels[level][e] * g_beta - beta.levels[level][e] * g_alpha;
    }
    Ok(omega.abs())
}
