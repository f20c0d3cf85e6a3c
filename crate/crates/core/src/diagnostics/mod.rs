//! Energy, constraint residuals, multisymplectic residual and spectra.

mod multisymplectic;
mod spectrum;

pub use multisymplectic::{
    multisymplectic_residual, potential_history, PotentialHistory, SpacetimeBlock,
};
pub use spectrum::{spectrum, Spectrum, SpectrumError};

use thiserror::Error;

use crate::integrators::IntegratorError;
use crate::maxwell::MaxwellModel;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticsError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Integrator(#[from] IntegratorError),
}

/// Electric, magnetic and total field energy at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySample {
    pub time: f64,
    pub electric: f64,
    pub magnetic: f64,
    pub total: f64,
}

/// `½ Eᵀ ⋆_ε E + ½ Bᵀ ν B`.
pub fn energy(model: &MaxwellModel, e: &[f64], b: &[f64], time: f64) -> EnergySample {
    let electric = 0.5 * e.iter().zip(&model.eps_star).map(|(x, s)| s * x * x).sum::<f64>();
    let magnetic = 0.5 * b.iter().zip(&model.nu_star).map(|(x, s)| s * x * x).sum::<f64>();
    EnergySample {
        time,
        electric,
        magnetic,
        total: electric + magnetic,
    }
}

/// Energy at a whole step from `E` at the two neighbouring half steps.
pub fn energy_staggered(
    model: &MaxwellModel,
    e_before: &[f64],
    e_after: &[f64],
    b: &[f64],
    time: f64,
) -> EnergySample {
    let e: Vec<f64> = e_before.iter().zip(e_after).map(|(a, c)| 0.5 * (a + c)).collect();
    energy(model, &e, b, time)
}

/// `div D − ρ` at every interior vertex (outward flux of `D` through the
/// vertex's dual cell).
pub fn gauss_defect(model: &MaxwellModel, d: &[f64], rho: Option<&[f64]>) -> Vec<f64> {
    let div = model.dual_divergence(d);
    model
        .interior_vertices
        .iter()
        .map(|&v| div[v] - rho.map_or(0.0, |r| r[v]))
        .collect()
}

/// Max-norm of [`gauss_defect`].
pub fn gauss_residual(model: &MaxwellModel, d: &[f64], rho: Option<&[f64]>) -> f64 {
    max_abs(&gauss_defect(model, d, rho))
}

/// Max-norm of `d₂ B` over 3-cells; identically 0 in two dimensions.
pub fn divb_residual(model: &MaxwellModel, b: &[f64]) -> f64 {
    match &model.d2 {
        Some(d2) => max_abs(&d2.apply(b)),
        None => 0.0,
    }
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Least-squares line through `(t, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
}

pub fn linear_fit(t: &[f64], y: &[f64]) -> Option<LinearFit> {
    let n = t.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let nf = n as f64;
    let tm = t.iter().sum::<f64>() / nf;
    let ym = y.iter().sum::<f64>() / nf;
    let sxx: f64 = t.iter().map(|x| (x - tm).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = t.iter().zip(y).map(|(x, v)| (x - tm) * (v - ym)).sum();
    let slope = sxy / sxx;
    Some(LinearFit {
        slope,
        intercept: ym - slope * tm,
    })
}

/// Summary of an energy series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyDrift {
    pub mean: f64,
    /// `|slope| · (t_end − t_start) / mean`.
    pub relative_drift: f64,
    /// `max |E(t) − mean| / mean`.
    pub relative_excursion: f64,
}

pub fn energy_drift(samples: &[EnergySample]) -> Option<EnergyDrift> {
    let t: Vec<f64> = samples.iter().map(|s| s.time).collect();
    let y: Vec<f64> = samples.iter().map(|s| s.total).collect();
    let fit = linear_fit(&t, &y)?;
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    if mean <= 0.0 {
        return None;
    }
    let span = t[t.len() - 1] - t[0];
    Some(EnergyDrift {
        mean,
        relative_drift: fit.slope.abs() * span / mean,
        relative_excursion: y.iter().fold(0.0_f64, |m, v| m.max((v - mean).abs())) / mean,
    })
}
