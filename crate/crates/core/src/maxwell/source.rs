use super::{MaxwellError, MaxwellModel};
use crate::dec::Cochain;
use crate::mesh::Point;

/// A current density that can be sampled as dual-face fluxes `J_e(t)`.
pub trait CurrentSource {
    /// Current through the dual cell of `edge` at time `t`.
    fn edge_current(&self, model: &MaxwellModel, edge: usize, t: f64) -> f64;

    /// Writes the current through the dual cell of every edge at time `t`.
    fn edge_currents(&self, model: &MaxwellModel, t: f64, out: &mut [f64]) {
        for (e, slot) in out.iter_mut().enumerate() {
            *slot = self.edge_current(model, e, t);
        }
    }
}

/// Closed-form current density `J(x, t)`; the flux through `*e` is taken as
/// `J(midpoint, t) · t̂_e |*e|`.
pub struct FieldCurrent<F> {
    pub density: F,
}

impl<F> CurrentSource for FieldCurrent<F>
where
    F: Fn(Point, f64) -> [f64; 3],
{
    fn edge_current(&self, model: &MaxwellModel, edge: usize, t: f64) -> f64 {
        let k = &model.complex;
        let v = &k.cell(1, edge).vertices;
        let (a, b) = (k.point(v[0]), k.point(v[1]));
        let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0, (a[2] + b[2]) / 2.0];
        let tang = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let len = (tang[0].powi(2) + tang[1].powi(2) + tang[2].powi(2)).sqrt();
        let j = (self.density)(mid, t);
        let along = (j[0] * tang[0] + j[1] * tang[1] + j[2] * tang[2]) / len;
        along * model.dual.dual_volumes(1)[edge]
    }
}

/// Tabulated sources: `J^n` on dual (n-1)-cells and `ρ^n` on vertex duals.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceTerm {
    pub current: Vec<Cochain>,
    pub charge: Vec<Cochain>,
}

/// `max |(ρ^{n+1} − ρ^n)/Δt + div J^n|` over all steps and vertices.
pub fn continuity_residual(
    model: &MaxwellModel,
    source: &SourceTerm,
    dt: f64,
) -> Result<f64, MaxwellError> {
    if source.charge.len() < 2 || source.current.len() + 1 < source.charge.len() {
        return Err(MaxwellError::Mismatch(
            "need consecutive charge snapshots and a current per step".into(),
        ));
    }
    let mut worst: f64 = 0.0;
    for (pair, j) in source.charge.windows(2).zip(&source.current) {
        let div = model.dual_divergence(j.values());
        for ((a, b), dj) in pair[0].values().iter().zip(pair[1].values()).zip(div) {
            worst = worst.max(((b - a) / dt + dj).abs());
        }
    }
    Ok(worst)
}
