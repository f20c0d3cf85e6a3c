use super::{instability_limit, IntegratorError, RunOptions, Sample, Snapshot, Trajectory};
use crate::diagnostics::{divb_residual, energy, gauss_residual};
use crate::maxwell::{CurrentSource, FieldState, MaxwellModel};

/// Moves `E`, `D` from `t₀` to `t₀ + Δt/2` with one explicit half step,
/// `D ← D + (Δt/2)(d₁ᵀH⁰ − J⁰)`, and re-applies PEC. Returns the charge
/// transported by the current.
pub fn bootstrap(
    model: &MaxwellModel,
    state: &mut FieldState,
    dt: f64,
    source: Option<&dyn CurrentSource>,
) -> Vec<f64> {
    let half = 0.5 * dt;
    let curl_h = model.d1.apply_transpose(state.h.values());
    let j = current(model, source, state.time_b);
    for (e, d) in state.d.values_mut().iter_mut().enumerate() {
        *d += half * (curl_h[e] - j[e]);
    }
    state.apply_pec(model);
    state.sync_e_from_d(model);
    state.time_e = state.time_b + half;
    transported(model, &j, half)
}

fn current(model: &MaxwellModel, source: Option<&dyn CurrentSource>, t: f64) -> Vec<f64> {
    let mut j = vec![0.0; model.num_edges()];
    if let Some(src) = source {
        src.edge_currents(model, t, &mut j);
        for (e, x) in j.iter_mut().enumerate() {
            if model.is_boundary_edge(e) {
                *x = 0.0;
            }
        }
    }
    j
}

/// Charge change per vertex when `D` loses `dt · J`.
fn transported(model: &MaxwellModel, j: &[f64], dt: f64) -> Vec<f64> {
    model
        .dual_divergence(j)
        .into_iter()
        .map(|x| -dt * x)
        .collect()
}

/// One leapfrog step from `(Bⁿ, E^{n+1/2})` to `(B^{n+1}, E^{n+3/2})`:
/// `B ← B − Δt d₁E`, `H = νB`, `D ← D + Δt(d₁ᵀH − J^{n+1})`, PEC, `E = ⋆_ε⁻¹D`.
pub fn leapfrog_step(
    model: &MaxwellModel,
    state: &mut FieldState,
    dt: f64,
    source: Option<&dyn CurrentSource>,
) -> Result<Vec<f64>, IntegratorError> {
    if (state.time_e - state.time_b - 0.5 * dt).abs() > 1e-9 * (dt + state.time_e.abs()) {
        return Err(IntegratorError::LabelMismatch {
            time_e: state.time_e,
            time_b: state.time_b,
            dt,
        });
    }
    let curl_e = model.d1.apply(state.e.values());
    for (b, c) in state.b.values_mut().iter_mut().zip(&curl_e) {
        *b -= dt * c;
    }
    state.time_b += dt;
    state.sync_h_from_b(model);
    let curl_h = model.d1.apply_transpose(state.h.values());
    let j = current(model, source, state.time_b);
    for (e, d) in state.d.values_mut().iter_mut().enumerate() {
        *d += dt * (curl_h[e] - j[e]);
    }
    state.apply_pec(model);
    state.sync_e_from_d(model);
    state.time_e += dt;
    Ok(transported(model, &j, dt))
}

fn add(acc: &mut [f64], x: &[f64]) {
    acc.iter_mut().zip(x).for_each(|(a, b)| *a += b);
}

/// Bootstraps `state₀` (fields at `t₀`) and takes `steps` leapfrog steps of
/// size `dt`, recording energy (with `E` averaged across the two adjacent
/// half steps), constraint residuals and probes every `record_every` steps.
/// The Gauss residual compares `div D` at the latest half step with the
/// charge transported by the current up to the same time.
pub fn run_sync(
    model: &MaxwellModel,
    state0: &FieldState,
    dt: f64,
    steps: usize,
    options: &RunOptions,
    source: Option<&dyn CurrentSource>,
) -> Result<Trajectory, IntegratorError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(IntegratorError::InvalidArgument(format!("time step {dt} must be positive")));
    }
    for p in &options.probes {
        p.check(model)?;
    }
    let mut state = state0.clone();
    let mut charge = vec![0.0; model.complex.num_cells(0)];
    let mut samples = Vec::new();
    let mut snapshots = Vec::new();
    let limit = instability_limit(&state, options.instability_factor);

    let record = |samples: &mut Vec<Sample>,
                  snapshots: &mut Vec<Snapshot>,
                  e: &[f64],
                  s: &FieldState,
                  charge: &[f64]| {
        let en = energy(model, e, s.b.values(), s.time_b);
        samples.push(Sample {
            time: s.time_b,
            electric: en.electric,
            magnetic: en.magnetic,
            total: en.total,
            divb: divb_residual(model, s.b.values()),
            gauss: gauss_residual(model, s.d.values(), Some(charge)),
            probes: options.probes.iter().map(|p| p.read(e, s.b.values())).collect(),
        });
        if options.snapshot_every > 0 && (samples.len() - 1) % options.snapshot_every == 0 {
            snapshots.push(Snapshot {
                time: s.time_b,
                e: e.to_vec(),
                b: s.b.values().to_vec(),
            });
        }
    };
    record(&mut samples, &mut snapshots, state.e.values(), &state, &charge);
    if steps == 0 {
        return Ok(Trajectory {
            samples,
            snapshots,
            final_state: state,
            charge,
            steps: 0,
        });
    }

    let q = bootstrap(model, &mut state, dt, source);
    add(&mut charge, &q);
    let mut e_prev = state.e.values().to_vec();
    for n in 1..=steps {
        let q = leapfrog_step(model, &mut state, dt, source)?;
        add(&mut charge, &q);
        let norm = state.max_norm();
        if !(norm <= limit) {
            return Err(IntegratorError::Unstable {
                step: n,
                time: state.time_b,
                norm,
                limit,
            });
        }
        let due = options.record_every > 0 && n % options.record_every == 0;
        if due || n == steps {
            let avg: Vec<f64> = e_prev
                .iter()
                .zip(state.e.values())
                .map(|(a, b)| 0.5 * (a + b))
                .collect();
            record(&mut samples, &mut snapshots, &avg, &state, &charge);
        }
        e_prev.copy_from_slice(state.e.values());
    }
    Ok(Trajectory {
        samples,
        snapshots,
        final_state: state,
        charge,
        steps,
    })
}
