use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::MaxwellModel;
use crate::dec::{Cochain, Placement};

/// Discrete fields: `E`, `D` at half steps on edges and their duals, `B`, `H`
/// at whole steps on faces and their duals.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub e: Cochain,
    pub d: Cochain,
    pub b: Cochain,
    pub h: Cochain,
    pub time_e: f64,
    pub time_b: f64,
}

impl FieldState {
    pub fn zeros(model: &MaxwellModel, t0: f64) -> Self {
        let k = &model.complex;
        let n = k.dim();
        Self {
            e: Cochain::zeros(k, 1, Placement::Primal),
            d: Cochain::zeros(k, n - 1, Placement::Dual),
            b: Cochain::zeros(k, 2, Placement::Primal),
            h: Cochain::zeros(k, n - 2, Placement::Dual),
            time_e: t0,
            time_b: t0,
        }
    }

    /// State with the given `E` and `B` at `t0`; `D`, `H` derived and PEC
    /// applied.
    pub fn from_fields(model: &MaxwellModel, e: Vec<f64>, b: Vec<f64>, t0: f64) -> Self {
        let mut s = Self::zeros(model, t0);
        s.e.values_mut().copy_from_slice(&e);
        s.b.values_mut().copy_from_slice(&b);
        s.sync_d_from_e(model);
        s.sync_h_from_b(model);
        s.apply_pec(model);
        s
    }

    /// Interior-edge `E` i.i.d. uniform in `[-1, 1]` from ChaCha8 seeded with
    /// `seed` (one draw per interior edge, in edge order), `B = 0`.
    pub fn random_e(model: &MaxwellModel, seed: u64, t0: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = (0..model.num_edges())
            .map(|i| {
                if model.is_boundary_edge(i) {
                    0.0
                } else {
                    rng.gen_range(-1.0..=1.0)
                }
            })
            .collect();
        Self::from_fields(model, e, vec![0.0; model.num_faces()], t0)
    }

    /// Zeroes `E` and `D` on boundary edges.
    pub fn apply_pec(&mut self, model: &MaxwellModel) {
        for (i, &on) in model.boundary_edges.iter().enumerate() {
            if on {
                self.e.values_mut()[i] = 0.0;
                self.d.values_mut()[i] = 0.0;
            }
        }
    }

    pub fn sync_d_from_e(&mut self, model: &MaxwellModel) {
        let d = model.d_from_e(self.e.values());
        self.d.values_mut().copy_from_slice(&d);
    }

    pub fn sync_e_from_d(&mut self, model: &MaxwellModel) {
        let e = model.e_from_d(self.d.values());
        self.e.values_mut().copy_from_slice(&e);
    }

    pub fn sync_h_from_b(&mut self, model: &MaxwellModel) {
        let h = model.h_from_b(self.b.values());
        self.h.values_mut().copy_from_slice(&h);
    }

    /// Largest absolute entry over `E` and `B`.
    pub fn max_norm(&self) -> f64 {
        self.e.max_abs().max(self.b.max_abs())
    }

    /// Largest deviation from `D = ⋆_ε E` and `H = ν B` (PEC edges excluded).
    pub fn constitutive_defect(&self, model: &MaxwellModel) -> f64 {
        let de = model
            .d_from_e(self.e.values())
            .iter()
            .zip(self.d.values())
            .enumerate()
            .filter(|(i, _)| !model.is_boundary_edge(*i))
            .fold(0.0_f64, |m, (_, (a, b))| m.max((a - b).abs()));
        let hb = model
            .h_from_b(self.b.values())
            .iter()
            .zip(self.h.values())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        de.max(hb)
    }
}
