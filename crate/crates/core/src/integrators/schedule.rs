use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::IntegratorError;
use crate::mesh::CellComplex;

/// Per-face arithmetic time sets `Θ_σ = {t₀ + k Δt_σ}`, each ending at the
/// first time that reaches `t_final` (snapped to `t_final` when within
/// `1e-9 Δt_σ`).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSchedule {
    pub t0: f64,
    pub t_final: f64,
    pub face_dt: Vec<f64>,
    pub face_steps: Vec<usize>,
}

/// Builds a schedule from base steps `dt`, multiplying each by a factor in
/// `[1, 1 + jitter)` drawn from ChaCha8 seeded with `seed` (one draw per face
/// in face order, only when `jitter > 0`).
pub fn build_schedule(
    dt: &[f64],
    t0: f64,
    t_final: f64,
    jitter: f64,
    seed: u64,
) -> Result<TimeSchedule, IntegratorError> {
    if !(t_final >= t0) {
        return Err(IntegratorError::InvalidArgument(format!(
            "final time {t_final} precedes start {t0}"
        )));
    }
    if !(jitter >= 0.0 && jitter.is_finite()) {
        return Err(IntegratorError::InvalidArgument(format!("jitter {jitter} must be >= 0")));
    }
    if let Some((i, d)) = dt.iter().enumerate().find(|(_, d)| !(**d > 0.0 && d.is_finite())) {
        return Err(IntegratorError::InvalidArgument(format!(
            "face {i} has non-positive time step {d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let face_dt: Vec<f64> = dt
        .iter()
        .map(|&d| {
            if jitter > 0.0 {
                d * (1.0 + jitter * rng.gen::<f64>())
            } else {
                d
            }
        })
        .collect();
    let span = t_final - t0;
    let face_steps = face_dt
        .iter()
        .map(|&d| {
            let mut n = (span / d).ceil() as usize;
            // absorb rounding in span / d
            while n > 0 && t0 + (n - 1) as f64 * d >= t_final - 1e-9 * d {
                n -= 1;
            }
            while t0 + (n as f64) * d < t_final - 1e-9 * d {
                n += 1;
            }
            n
        })
        .collect();
    Ok(TimeSchedule {
        t0,
        t_final,
        face_dt,
        face_steps,
    })
}

impl TimeSchedule {
    pub fn num_faces(&self) -> usize {
        self.face_dt.len()
    }

    /// `t^k_σ`.
    pub fn time(&self, face: usize, k: usize) -> f64 {
        let n = self.face_steps[face];
        let t = self.t0 + k as f64 * self.face_dt[face];
        if k == n && (t - self.t_final).abs() <= 1e-9 * self.face_dt[face] {
            self.t_final
        } else {
            t
        }
    }

    /// `Θ_σ`.
    pub fn face_times(&self, face: usize) -> Vec<f64> {
        (0..=self.face_steps[face]).map(|k| self.time(face, k)).collect()
    }

    /// `Θ_e`: sorted union of the time sets of the faces containing `edge`.
    pub fn edge_times(&self, complex: &CellComplex, edge: usize) -> Vec<f64> {
        let mut all: Vec<f64> = complex
            .cofaces(1, edge)
            .iter()
            .flat_map(|&(f, _)| self.face_times(f))
            .collect();
        all.sort_by(f64::total_cmp);
        all.dedup();
        all
    }

    /// `Θ′_e`: midpoints of consecutive times in `Θ_e`.
    pub fn edge_midpoints(&self, complex: &CellComplex, edge: usize) -> Vec<f64> {
        self.edge_times(complex, edge)
            .windows(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect()
    }

    /// Number of coincidences between time sets of different faces other than
    /// the shared start time.
    pub fn collisions(&self) -> usize {
        let mut all: Vec<(f64, usize)> = (0..self.num_faces())
            .flat_map(|f| self.face_times(f).into_iter().skip(1).map(move |t| (t, f)))
            .collect();
        all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        all.windows(2)
            .filter(|w| w[0].0 == w[1].0 && w[0].1 != w[1].1)
            .count()
    }

    pub fn is_asynchronous(&self) -> bool {
        self.collisions() == 0
    }

    pub fn total_events(&self) -> usize {
        self.face_steps.iter().sum()
    }
}
