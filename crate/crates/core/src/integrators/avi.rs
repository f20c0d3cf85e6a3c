use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::{
    instability_limit, IntegratorError, RunOptions, Sample, Snapshot, TimeSchedule, Trajectory,
};
use crate::diagnostics::{divb_residual, energy, gauss_residual};
use crate::maxwell::{CurrentSource, FieldState, MaxwellModel};

/// Pending update of one face. Ordered by time, then face index.
#[derive(Debug, Clone, Copy)]
struct Event {
    time: f64,
    face: usize,
    k: usize,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.face.cmp(&other.face))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AviStats {
    pub events: usize,
    pub events_per_face: Vec<usize>,
    pub max_queue: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AviRun {
    pub trajectory: Trajectory,
    /// Accumulated potential `A_e` at `t_final` (zero at `t₀`).
    pub potential: Vec<f64>,
    pub stats: AviStats,
}

struct Avi<'a> {
    model: &'a MaxwellModel,
    source: Option<&'a dyn CurrentSource>,
    /// `d₁` rows: the signed edges of each face.
    rows: Vec<Vec<(usize, f64)>>,
    /// `(face, position in that face's row)` for each edge.
    edge_faces: Vec<Vec<(usize, usize)>>,
    /// Change of each face's edge potentials since the face last updated `B`,
    /// aligned with `rows`. Updating `B` from these increments avoids the
    /// cancellation in `B⁰ + d₁A` once `A` has grown.
    pending: Vec<Vec<f64>>,
    a: Vec<f64>,
    e: Vec<f64>,
    d: Vec<f64>,
    b: Vec<f64>,
    h: Vec<f64>,
    tau_e: Vec<f64>,
    tau_f: Vec<f64>,
    /// `∫ J_e dt` applied so far.
    transport: Vec<f64>,
}

impl Avi<'_> {
    fn current(&self, e: usize, t: f64) -> f64 {
        match self.source {
            Some(s) if !self.model.is_boundary_edge(e) => s.edge_current(self.model, e, t),
            _ => 0.0,
        }
    }

    fn charge(&self) -> Vec<f64> {
        self.model.d0.apply_transpose(&self.transport)
    }

    /// Moves `A_e` from `τ_e` to `t` with the held `E_e`.
    fn advance(&mut self, e: usize, t: f64) {
        let delta = -self.e[e] * (t - self.tau_e[e]);
        self.a[e] += delta;
        for &(f, pos) in &self.edge_faces[e] {
            self.pending[f][pos] += delta;
        }
        self.tau_e[e] = t;
    }

    /// Folds the pending potential change of face `f` into `B_f`.
    fn settle(&mut self, f: usize) {
        let curl: f64 = self.rows[f]
            .iter()
            .zip(&self.pending[f])
            .map(|(&(_, s), da)| s * da)
            .sum();
        self.b[f] += curl;
        self.pending[f].iter_mut().for_each(|x| *x = 0.0);
    }

    /// `B` at time `s ≥ τ_e` from the potential extrapolated with the held `E`.
    fn b_at(&self, s: f64) -> Vec<f64> {
        (0..self.b.len())
            .map(|f| {
                let curl: f64 = self.rows[f]
                    .iter()
                    .zip(&self.pending[f])
                    .map(|(&(e, sg), da)| sg * (da - self.e[e] * (s - self.tau_e[e])))
                    .sum();
                self.b[f] + curl
            })
            .collect()
    }
}

/// Asynchronous variational integration of `state₀` (fields at `t₀`) over
/// `schedule`.
///
/// Faces are popped from a priority queue in time order. For an event
/// `(t, σ)`, every edge of σ first advances its potential,
/// `A_e ← A_e − E_e (t − τ_e)`; unless `t` has reached `t_final` the face then
/// updates `B_σ = B⁰_σ + (d₁A)_σ` (accumulated from the potential increments
/// since its last update), `H_σ = ν_σ B_σ`, and each interior edge gets
/// `D_e ← D_e + d₁(σ, e) H_σ (t − τ_σ) − J_e(t)(t − τ_e)` and `E_e = D_e / ⋆_ε`.
/// The initial half step gives each edge `Σ_σ d₁(σ, e) H⁰_σ (t¹_σ − t₀)/2`
/// and `−J_e(t₀)(t¹_e − t₀)/2`. After the queue drains every edge is flushed
/// to `t_final`.
///
/// Samples are taken on a uniform clock of `options.sample_dt`: probes hold
/// the latest values, the energy uses `B` extrapolated from the potential.
pub fn run_avi(
    model: &MaxwellModel,
    state0: &FieldState,
    schedule: &TimeSchedule,
    options: &RunOptions,
    source: Option<&dyn CurrentSource>,
) -> Result<AviRun, IntegratorError> {
    let nf = model.num_faces();
    let ne = model.num_edges();
    if schedule.num_faces() != nf {
        return Err(IntegratorError::InvalidArgument(format!(
            "schedule has {} faces, mesh has {nf}",
            schedule.num_faces()
        )));
    }
    for p in &options.probes {
        p.check(model)?;
    }
    let t0 = schedule.t0;
    let t_final = schedule.t_final;
    let rows: Vec<Vec<(usize, f64)>> = (0..nf).map(|f| model.d1.row(f)).collect();
    let mut edge_faces = vec![Vec::new(); ne];
    for (f, row) in rows.iter().enumerate() {
        for (pos, &(e, _)) in row.iter().enumerate() {
            edge_faces[e].push((f, pos));
        }
    }
    let pending = rows.iter().map(|r| vec![0.0; r.len()]).collect();
    let mut st = Avi {
        model,
        source,
        rows,
        edge_faces,
        pending,
        a: vec![0.0; ne],
        e: state0.e.values().to_vec(),
        d: state0.d.values().to_vec(),
        b: state0.b.values().to_vec(),
        h: state0.h.values().to_vec(),
        tau_e: vec![t0; ne],
        tau_f: vec![t0; nf],
        transport: vec![0.0; ne],
    };
    let limit = instability_limit(state0, options.instability_factor);
    let mut samples = Vec::new();
    let mut snapshots = Vec::new();
    let mut stats = AviStats {
        events_per_face: vec![0; nf],
        ..AviStats::default()
    };

    let record = |st: &Avi, s: f64, samples: &mut Vec<Sample>, snapshots: &mut Vec<Snapshot>| {
        let b_now = st.b_at(s);
        let en = energy(model, &st.e, &b_now, s);
        let charge = st.charge();
        samples.push(Sample {
            time: s,
            electric: en.electric,
            magnetic: en.magnetic,
            total: en.total,
            divb: divb_residual(model, &b_now),
            gauss: gauss_residual(model, &st.d, Some(&charge)),
            probes: options.probes.iter().map(|p| p.read(&st.e, &st.b)).collect(),
        });
        if options.snapshot_every > 0 && (samples.len() - 1) % options.snapshot_every == 0 {
            snapshots.push(Snapshot {
                time: s,
                e: st.e.clone(),
                b: b_now,
            });
        }
    };
    record(&st, t0, &mut samples, &mut snapshots);

    if schedule.total_events() == 0 {
        return Ok(AviRun {
            trajectory: Trajectory {
                samples,
                snapshots,
                final_state: state0.clone(),
                charge: vec![0.0; model.complex.num_cells(0)],
                steps: 0,
            },
            potential: st.a,
            stats,
        });
    }

    // half-step start
    let mut first_edge_time = vec![f64::INFINITY; ne];
    for f in 0..nf {
        if schedule.face_steps[f] == 0 {
            continue;
        }
        let t1 = schedule.time(f, 1).min(t_final);
        let half = 0.5 * elapsed(schedule, f, 1, t1);
        for (e, s) in model.d1.row(f) {
            first_edge_time[e] = first_edge_time[e].min(t1);
            if !model.is_boundary_edge(e) {
                st.d[e] += s * st.h[f] * half;
            }
        }
    }
    for e in 0..ne {
        if model.is_boundary_edge(e) {
            st.d[e] = 0.0;
            st.e[e] = 0.0;
            continue;
        }
        if first_edge_time[e].is_finite() {
            let q = st.current(e, t0) * 0.5 * (first_edge_time[e] - t0);
            st.d[e] -= q;
            st.transport[e] += q;
        }
        st.e[e] = st.d[e] / model.eps_star[e];
    }

    let mut queue = BinaryHeap::with_capacity(nf);
    for f in 0..nf {
        if schedule.face_steps[f] >= 1 {
            queue.push(Reverse(Event {
                time: schedule.time(f, 1),
                face: f,
                k: 1,
            }));
        }
    }
    let sample_dt = options.sample_dt;
    let mut next_sample = 1usize;
    let sample_time = |k: usize| t0 + k as f64 * sample_dt;
    let mut last_time = t0;
    let mut prev_tau = Vec::new();
    let mut row = Vec::new();

    while let Some(Reverse(ev)) = queue.pop() {
        stats.max_queue = stats.max_queue.max(queue.len() + 1);
        if ev.time < last_time {
            return Err(IntegratorError::Internal(format!(
                "event at {} popped after {last_time}",
                ev.time
            )));
        }
        last_time = ev.time;
        while sample_dt > 0.0 && sample_time(next_sample) <= ev.time.min(t_final) && sample_time(next_sample) < t_final {
            let s = sample_time(next_sample);
            record(&st, s, &mut samples, &mut snapshots);
            check_norm(&samples, &st, limit, stats.events)?;
            next_sample += 1;
        }
        stats.events += 1;
        stats.events_per_face[ev.face] += 1;

        let f = ev.face;
        let t = ev.time.min(t_final);
        row.clear();
        row.extend_from_slice(&st.rows[f]);
        prev_tau.clear();
        for &(e, _) in &row {
            prev_tau.push(st.tau_e[e]);
            st.advance(e, t);
        }
        if ev.time >= t_final {
            continue;
        }
        st.settle(f);
        st.h[f] = model.nu_star[f] * st.b[f];
        let elapsed_face = elapsed(schedule, f, ev.k, t);
        for (&(e, s), &tau) in row.iter().zip(&prev_tau) {
            if model.is_boundary_edge(e) {
                continue;
            }
            let q = st.current(e, t) * (t - tau);
            st.d[e] += s * st.h[f] * elapsed_face - q;
            st.transport[e] += q;
            st.e[e] = st.d[e] / model.eps_star[e];
        }
        st.tau_f[f] = t;
        if ev.k < schedule.face_steps[f] {
            queue.push(Reverse(Event {
                time: schedule.time(f, ev.k + 1),
                face: f,
                k: ev.k + 1,
            }));
        }
    }

    while sample_dt > 0.0 && sample_time(next_sample) < t_final {
        record(&st, sample_time(next_sample), &mut samples, &mut snapshots);
        next_sample += 1;
    }
    for e in 0..ne {
        st.advance(e, t_final);
    }
    for f in 0..nf {
        st.settle(f);
    }
    st.h = model.h_from_b(&st.b);
    st.tau_f.iter_mut().for_each(|t| *t = t_final);
    record(&st, t_final, &mut samples, &mut snapshots);
    check_norm(&samples, &st, limit, stats.events)?;

    let mut final_state = state0.clone();
    final_state.e.values_mut().copy_from_slice(&st.e);
    final_state.d.values_mut().copy_from_slice(&st.d);
    final_state.b.values_mut().copy_from_slice(&st.b);
    final_state.h.values_mut().copy_from_slice(&st.h);
    final_state.time_b = t_final;
    final_state.time_e = t_final;
    let charge = st.charge();
    Ok(AviRun {
        trajectory: Trajectory {
            samples,
            snapshots,
            final_state,
            charge,
            steps: stats.events,
        },
        potential: st.a,
        stats,
    })
}

/// Length of face step `k` ending at `t`: the face's own `Δt` unless the step
/// was cut short at `t_final`. Using `Δt` directly avoids the cancellation in
/// `t_k − t_{k−1}`, which matters when comparing with the synchronous scheme.
fn elapsed(schedule: &TimeSchedule, face: usize, k: usize, t: f64) -> f64 {
    if t < schedule.t_final {
        schedule.face_dt[face]
    } else {
        t - schedule.time(face, k - 1)
    }
}

fn check_norm(samples: &[Sample], st: &Avi, limit: f64, events: usize) -> Result<(), IntegratorError> {
    let norm = st
        .e
        .iter()
        .chain(&st.b)
        .fold(0.0_f64, |m, x| m.max(x.abs()));
    if !(norm <= limit) {
        let time = samples.last().map_or(0.0, |s| s.time);
        return Err(IntegratorError::Unstable {
            step: events,
            time,
            norm,
            limit,
        });
    }
    Ok(())
}
