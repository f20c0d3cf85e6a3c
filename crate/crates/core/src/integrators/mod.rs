//! Time integrators: synchronous leapfrog (Yee on grids, Bossavit–Kettunen
//! on unstructured meshes) and the asynchronous variational integrator.

mod avi;
mod cfl;
mod leapfrog;
mod schedule;

pub use avi::{run_avi, AviRun, AviStats};
pub use cfl::{cfl_dt, local_cfl_dt};
pub use leapfrog::{bootstrap, leapfrog_step, run_sync};
pub use schedule::{build_schedule, TimeSchedule};

use thiserror::Error;

use crate::dec::DecError;
use crate::maxwell::{FieldState, MaxwellError, MaxwellModel};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegratorError {
    #[error(transparent)]
    Maxwell(#[from] MaxwellError),
    #[error(transparent)]
    Dec(#[from] DecError),
    #[error("time labels out of step: E at {time_e}, B at {time_b}, dt {dt}")]
    LabelMismatch { time_e: f64, time_b: f64, dt: f64 },
    #[error("unstable at t = {time} (step {step}): max |field| = {norm:e} exceeds {limit:e}")]
    Unstable {
        step: usize,
        time: f64,
        norm: f64,
        limit: f64,
    },
    #[error("power iteration did not converge in {0} iterations")]
    NoConvergence(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// A sampled quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Probe {
    /// `E` on an edge.
    Edge(usize),
    /// `B` on a face.
    Face(usize),
}

impl Probe {
    pub fn label(&self) -> String {
        match self {
            Probe::Edge(i) => format!("e{i}"),
            Probe::Face(i) => format!("f{i}"),
        }
    }

    fn read(&self, e: &[f64], b: &[f64]) -> f64 {
        match *self {
            Probe::Edge(i) => e[i],
            Probe::Face(i) => b[i],
        }
    }

    pub fn check(&self, model: &MaxwellModel) -> Result<(), IntegratorError> {
        let (i, n, what) = match *self {
            Probe::Edge(i) => (i, model.num_edges(), "edge"),
            Probe::Face(i) => (i, model.num_faces(), "face"),
        };
        if i >= n {
            return Err(IntegratorError::InvalidArgument(format!(
                "probe {what} {i} out of range ({n})"
            )));
        }
        Ok(())
    }
}

/// Output controls shared by the integrators.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    /// Synchronous runs record every this many steps (0 = initial and final only).
    pub record_every: usize,
    /// Asynchronous runs record on this uniform clock (0 = initial and final only).
    pub sample_dt: f64,
    pub probes: Vec<Probe>,
    /// Field snapshots every this many records (0 = none besides the final state).
    pub snapshot_every: usize,
    /// Abort when a field entry exceeds this multiple of the initial max-norm.
    pub instability_factor: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            record_every: 1,
            sample_dt: 0.0,
            probes: Vec::new(),
            snapshot_every: 0,
            instability_factor: 1e6,
        }
    }
}

/// One recorded time.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub time: f64,
    pub electric: f64,
    pub magnetic: f64,
    pub total: f64,
    pub divb: f64,
    pub gauss: f64,
    pub probes: Vec<f64>,
}

/// `E` and `B` at one recorded time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub e: Vec<f64>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub snapshots: Vec<Snapshot>,
    pub final_state: FieldState,
    /// Charge per vertex accumulated from the applied currents.
    pub charge: Vec<f64>,
    pub steps: usize,
}

impl Trajectory {
    pub fn energies(&self) -> Vec<crate::diagnostics::EnergySample> {
        self.samples
            .iter()
            .map(|s| crate::diagnostics::EnergySample {
                time: s.time,
                electric: s.electric,
                magnetic: s.magnetic,
                total: s.total,
            })
            .collect()
    }
}

fn instability_limit(state: &FieldState, factor: f64) -> f64 {
    let n0 = state.max_norm();
    factor * if n0 > 0.0 { n0 } else { 1.0 }
}
