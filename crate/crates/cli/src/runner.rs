//! Assembles a model from a [`Config`], runs the selected integrator and
//! writes the artifacts.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use emdec::diagnostics::{energy_drift, spectrum};
use emdec::integrators::{
    build_schedule, cfl_dt, local_cfl_dt, run_avi, run_sync, AviStats, IntegratorError, Probe,
    RunOptions, TimeSchedule, Trajectory,
};
use emdec::io::{
    energy_csv, peaks_csv, probes_csv, residuals_csv, snapshot_csv, spectrum_csv, write_atomic,
};
use emdec::maxwell::{Coefficient, FieldCurrent};
use emdec::mesh::generate::{delaunay, partition_grid, random_square_points, refined_square};
use emdec::mesh::{build_rect_grid, load_mesh, quality, CellComplex, Point};
use emdec::{FieldState, MaterialParams, MaxwellModel};
use sha2::{Digest, Sha256};

use crate::config::{Config, DtRule, InitSpec, MeshSpec, ProbeSpec, Scheme};
use crate::expr::Expr;
use crate::CliError;

/// What a run produced.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub manifest: String,
}

/// Builds the mesh described by `spec`.
pub fn build_mesh(spec: &MeshSpec, seed: u64) -> Result<CellComplex, CliError> {
    let mesh = match spec {
        MeshSpec::Grid { extents, counts } => build_rect_grid(extents, counts),
        MeshSpec::Partition {
            extents,
            counts,
            spread,
        } => partition_grid(extents, counts, *spread, seed),
        MeshSpec::Refined {
            h_boundary,
            h_interior,
            ramp,
        } => refined_square(*h_boundary, *h_interior, *ramp, seed),
        MeshSpec::Delaunay { points } => delaunay(&random_square_points(*points, seed)),
        MeshSpec::File(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            load_mesh(text.as_bytes())
        }
    };
    mesh.map_err(|e| CliError::Config(format!("mesh: {e}")))
}

fn coefficient(expr: &Expr, unit: f64, complex: &CellComplex, dual: &emdec::DualComplex) -> Coefficient {
    match expr.constant() {
        Some(v) => Coefficient::Uniform(v * unit),
        None => {
            let n = complex.dim();
            Coefficient::PerCell(
                (0..complex.num_cells(n))
                    .map(|t| {
                        let c = dual.circumcenter(n, t);
                        unit * expr.eval(c[0], c[1], c[2], 0.0)
                    })
                    .collect(),
            )
        }
    }
}

/// Mesh, dual and materials for `config`.
pub fn build_model(config: &Config) -> Result<MaxwellModel, CliError> {
    let complex = build_mesh(&config.mesh, config.seed)?;
    let dual = emdec::mesh::circumcentric_dual(&complex)
        .map_err(|e| CliError::Numeric(format!("dual mesh: {e}")))?;
    let material = MaterialParams {
        epsilon: coefficient(&config.epsilon, config.epsilon0, &complex, &dual),
        mu: coefficient(&config.mu, config.mu0, &complex, &dual),
    };
    MaxwellModel::with_dual(complex, dual, material).map_err(|e| match e {
        emdec::maxwell::MaxwellError::Material(m) => CliError::Config(format!("material: {m}")),
        other => CliError::Numeric(other.to_string()),
    })
}

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn eval3(f: &[Expr; 3], p: Point, t: f64) -> Point {
    [f[0].eval(p[0], p[1], p[2], t), f[1].eval(p[0], p[1], p[2], t), f[2].eval(p[0], p[1], p[2], t)]
}

/// Edge integrals of `E` by the midpoint rule and face fluxes of `B` through
/// the oriented face at its circumcenter.
fn sample_fields(model: &MaxwellModel, e: &[Expr; 3], b: &[Expr; 3]) -> FieldState {
    let k = &model.complex;
    let ev = (0..model.num_edges())
        .map(|i| {
            let v = &k.cell(1, i).vertices;
            let (p, q) = (k.point(v[0]), k.point(v[1]));
            let mid = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0, (p[2] + q[2]) / 2.0];
            dot(eval3(e, mid, 0.0), sub(q, p))
        })
        .collect();
    let bv = (0..model.num_faces())
        .map(|f| {
            let pts = k.cell_points(2, f);
            let (u, w) = (sub(pts[1], pts[0]), sub(pts[2], pts[0]));
            let n = [u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]];
            let len = dot(n, n).sqrt();
            let area = model.dual.primal_volumes(2)[f];
            let c = model.dual.circumcenter(2, f);
            dot(eval3(b, c, 0.0), n) / len * area
        })
        .collect();
    FieldState::from_fields(model, ev, bv, 0.0)
}

pub fn initial_state(model: &MaxwellModel, config: &Config) -> FieldState {
    match &config.init {
        InitSpec::Random => FieldState::random_e(model, config.seed, 0.0),
        InitSpec::Zero => FieldState::zeros(model, 0.0),
        InitSpec::Fields { e, b } => sample_fields(model, e, b),
    }
}

fn nearest(count: usize, p: [f64; 3], centre: impl Fn(usize) -> Point) -> usize {
    let d2 = |i: usize| {
        let c = centre(i);
        (0..3).map(|a| (c[a] - p[a]).powi(2)).sum::<f64>()
    };
    (0..count).min_by(|&a, &b| d2(a).total_cmp(&d2(b))).unwrap_or(0)
}

pub fn resolve_probes(model: &MaxwellModel, specs: &[ProbeSpec]) -> Result<Vec<Probe>, CliError> {
    let k = &model.complex;
    let probes: Vec<Probe> = specs
        .iter()
        .map(|s| match *s {
            ProbeSpec::Edge(i) => Probe::Edge(i),
            ProbeSpec::Face(i) => Probe::Face(i),
            ProbeSpec::EdgeNear(p) => Probe::Edge(nearest(model.num_edges(), p, |e| {
                let v = &k.cell(1, e).vertices;
                let (a, b) = (k.point(v[0]), k.point(v[1]));
                [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0, (a[2] + b[2]) / 2.0]
            })),
            ProbeSpec::FaceNear(p) => {
                Probe::Face(nearest(model.num_faces(), p, |f| model.dual.circumcenter(2, f)))
            }
        })
        .collect();
    for p in &probes {
        p.check(model).map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(probes)
}

fn put(files: &mut Vec<PathBuf>, dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    write_atomic(&path, contents.as_bytes())
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    files.push(path);
    Ok(())
}

fn numeric(e: IntegratorError) -> CliError {
    CliError::Numeric(e.to_string())
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

enum Timing {
    Sync { dt: f64, steps: usize },
    Avi { schedule: TimeSchedule, stats: AviStats },
}

/// Runs `config` (whose source text is `text`) and writes every artifact to
/// `out_dir`.
pub fn run(config: &Config, text: &str, out_dir: &Path) -> Result<RunReport, CliError> {
    let model = build_model(config)?;
    if config.scheme == Scheme::Yee && !model.complex.is_rectangular() {
        return Err(CliError::Config("yee requires a rectangular grid mesh".into()));
    }
    let probes = resolve_probes(&model, &config.probes)?;
    let state0 = initial_state(&model, config);
    let source = config.source.clone().map(|j| FieldCurrent {
        density: move |p: Point, t: f64| eval3(&j, p, t),
    });
    let source_ref = source.as_ref().map(|s| s as &dyn emdec::maxwell::CurrentSource);
    let options = RunOptions {
        record_every: config.record_every,
        sample_dt: config.sample_dt,
        probes: probes.clone(),
        snapshot_every: config.snapshot_every,
        instability_factor: config.instability_factor,
    };
    let cfl = cfl_dt(&model).map_err(numeric)?;

    let (trajectory, timing): (Trajectory, Timing) = match config.scheme {
        Scheme::Yee | Scheme::Bk => {
            let limit = config.dt_safety * cfl;
            let dt = config.dt.unwrap_or(limit);
            if dt > limit * (1.0 + 1e-12) {
                return Err(CliError::Config(format!(
                    "run.dt = {dt} exceeds dt_safety * CFL limit = {limit}"
                )));
            }
            let steps = (config.t_final / dt - 1e-9).ceil().max(0.0) as usize;
            let dt = if steps > 0 { config.t_final / steps as f64 } else { dt };
            let traj = run_sync(&model, &state0, dt, steps, &options, source_ref).map_err(numeric)?;
            (traj, Timing::Sync { dt, steps })
        }
        Scheme::Avi => {
            let dts: Vec<f64> = match config.dt_rule {
                DtRule::Local => local_cfl_dt(&model)
                    .map_err(numeric)?
                    .iter()
                    .map(|d| config.dt_safety * d)
                    .collect(),
                DtRule::Uniform => vec![config.dt_safety * cfl; model.num_faces()],
            };
            let schedule = build_schedule(&dts, 0.0, config.t_final, config.jitter, config.seed)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let run = run_avi(&model, &state0, &schedule, &options, source_ref).map_err(numeric)?;
            (run.trajectory, Timing::Avi { schedule, stats: run.stats })
        }
    };

    fs::create_dir_all(out_dir).map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;
    let mut files = Vec::new();

    put(&mut files, out_dir, "energy.csv", &energy_csv(&trajectory.samples))?;
    put(&mut files, out_dir, "residuals.csv", &residuals_csv(&trajectory.samples))?;
    if !probes.is_empty() {
        let labels: Vec<String> = probes.iter().map(Probe::label).collect();
        put(&mut files, out_dir, "probes.csv", &probes_csv(&trajectory.samples, &labels))?;
    }
    if !trajectory.snapshots.is_empty() {
        fs::create_dir_all(out_dir.join("snapshots"))
            .map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;
    }
    for (i, s) in trajectory.snapshots.iter().enumerate() {
        put(&mut files, out_dir, &format!("snapshots/e_{i:04}.csv"), &snapshot_csv("E", 1, "primal", s.time, &s.e))?;
        put(&mut files, out_dir, &format!("snapshots/b_{i:04}.csv"), &snapshot_csv("B", 2, "primal", s.time, &s.b))?;
    }
    let mut peaks = None;
    if config.spectrum {
        let interval = match &timing {
            Timing::Sync { dt, .. } => dt * config.record_every as f64,
            Timing::Avi { .. } => config.sample_dt,
        };
        if !(interval > 0.0) {
            return Err(CliError::Config(
                "output.spectrum needs a positive sampling interval".into(),
            ));
        }
        // the final record can fall off the uniform clock
        let series: Vec<f64> = trajectory
            .samples
            .iter()
            .enumerate()
            .take_while(|(i, s)| (s.time - *i as f64 * interval).abs() <= 1e-9 * interval.max(s.time))
            .map(|(_, s)| s.probes[0])
            .collect();
        let spec = spectrum(&series, interval, config.prominence, config.neighborhood)
            .map_err(|e| CliError::Numeric(format!("spectrum: {e}")))?;
        put(&mut files, out_dir, "spectrum.csv", &spectrum_csv(&spec))?;
        put(&mut files, out_dir, "peaks.csv", &peaks_csv(&spec))?;
        peaks = Some(spec.peaks);
    }

    let mut m = String::new();
    let k = &model.complex;
    let _ = writeln!(m, "config_sha256 = {}", hex(&Sha256::digest(text.as_bytes())));
    let _ = writeln!(m, "seed = {}", config.seed);
    let _ = writeln!(m, "scheme = {}", config.scheme.name());
    let _ = writeln!(m, "dimension = {}", k.dim());
    for d in 0..=k.dim() {
        let _ = writeln!(m, "cells_{d} = {}", k.num_cells(d));
    }
    let q = quality(k);
    let _ = writeln!(m, "circumcenters_outside = {}", q.outside_cells().len());
    let _ = writeln!(m, "dual_warnings = {}", model.dual.warnings().len());
    let _ = writeln!(m, "min_edge = {:e}", q.min_edge());
    let _ = writeln!(m, "cfl_dt = {cfl:e}");
    match &timing {
        Timing::Sync { dt, steps } => {
            let _ = writeln!(m, "dt = {dt:e}");
            let _ = writeln!(m, "steps = {steps}");
        }
        Timing::Avi { schedule, stats } => {
            let lo = schedule.face_dt.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = schedule.face_dt.iter().cloned().fold(0.0, f64::max);
            let collisions = schedule.collisions();
            let _ = writeln!(m, "dt_min = {lo:e}");
            let _ = writeln!(m, "dt_max = {hi:e}");
            let _ = writeln!(m, "jitter = {}", config.jitter);
            let _ = writeln!(m, "events = {}", stats.events);
            let _ = writeln!(m, "max_queue = {}", stats.max_queue);
            let _ = writeln!(m, "collisions = {collisions}");
            let _ = writeln!(m, "asynchronous = {}", collisions == 0);
        }
    }
    let _ = writeln!(m, "t_final = {}", config.t_final);
    let _ = writeln!(m, "samples = {}", trajectory.samples.len());
    if let Some(d) = energy_drift(&trajectory.energies()) {
        let _ = writeln!(m, "energy_mean = {:e}", d.mean);
        let _ = writeln!(m, "energy_relative_drift = {:e}", d.relative_drift);
        let _ = writeln!(m, "energy_relative_excursion = {:e}", d.relative_excursion);
    }
    if let Some(p) = &peaks {
        let list: Vec<String> = p.iter().map(|f| format!("{f:.6}")).collect();
        let _ = writeln!(m, "peaks = {}", list.join(" "));
    }
    let outputs: Vec<String> = files
        .iter()
        .filter_map(|f| f.strip_prefix(out_dir).ok())
        .map(|f| f.display().to_string())
        .collect();
    let _ = writeln!(m, "outputs = {}", outputs.join(" "));
    let stamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let _ = writeln!(m, "timestamp = {stamp}");
    put(&mut files, out_dir, "manifest.txt", &m)?;
    Ok(RunReport { files, manifest: m })
}
