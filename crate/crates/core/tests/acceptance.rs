//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::yee::{Yee2d, Yee3d};
use common::*;
use emdec::dec::{exterior_derivative, hodge_star, ibp_residual, inner_product};
use emdec::diagnostics::{
    divb_residual, energy_drift, gauss_defect, multisymplectic_residual, potential_history,
    spectrum, SpacetimeBlock,
};
use emdec::integrators::{
    bootstrap, build_schedule, cfl_dt, leapfrog_step, local_cfl_dt, run_avi, run_sync,
    IntegratorError, Probe, RunOptions, Trajectory,
};
use emdec::io::{energy_csv, probes_csv, residuals_csv, snapshot_csv};
use emdec::mesh::generate::{delaunay, random_partition, random_square_points};
use emdec::mesh::{build_rect_grid_from_coords, circumcentric_dual, CellComplex, CellShape};
use emdec::{Causality, Cochain, FieldState, MaxwellModel, Placement};
use rand::Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// ---- 1: operator identities ------------------------------------------------

/// Oriented boundary of a k-cell computed from its vertex tuple alone.
fn brute_boundary(k: &CellComplex, dim: usize, i: usize) -> Vec<(usize, f64)> {
    let verts = &k.cell(dim, i).vertices;
    let mut out = Vec::new();
    match k.shape() {
        CellShape::Simplex => {
            for drop in 0..verts.len() {
                let face: Vec<usize> = verts
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != drop)
                    .map(|(_, &v)| v)
                    .collect();
                let mut sorted = face.clone();
                sorted.sort_unstable();
                let f = k.find(dim - 1, &sorted).expect("facet exists");
                let stored = &k.cell(dim - 1, f).vertices;
                // parity of the permutation taking `stored` to `face`
                let perm: Vec<usize> = face
                    .iter()
                    .map(|v| stored.iter().position(|s| s == v).unwrap())
                    .collect();
                let inversions = (0..perm.len())
                    .flat_map(|a| (a + 1..perm.len()).map(move |b| (a, b)))
                    .filter(|&(a, b)| perm[a] > perm[b])
                    .count();
                let parity = if inversions % 2 == 0 { 1.0 } else { -1.0 };
                let sign = if drop % 2 == 0 { 1.0 } else { -1.0 };
                out.push((f, sign * parity));
            }
        }
        CellShape::Cube => {
            for a in 0..dim {
                for bit in 0..2 {
                    let face: Vec<usize> = (0..verts.len())
                        .filter(|p| (p >> a) & 1 == bit)
                        .map(|p| verts[p])
                        .collect();
                    let mut sorted = face.clone();
                    sorted.sort_unstable();
                    let f = k.find(dim - 1, &sorted).expect("facet exists");
                    assert_eq!(k.cell(dim - 1, f).vertices, face, "box facet not in corner order");
                    let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
                    out.push((f, if bit == 1 { sign } else { -sign }));
                }
            }
        }
    }
    out
}

fn operator_meshes() -> Vec<CellComplex> {
    let mut r = rng(2024);
    let mut meshes = Vec::new();
    for dim in [2usize, 3, 2, 3, 3] {
        let coords = (0..dim)
            .map(|_| {
                let n = r.gen_range(2..=5);
                random_partition(1.0, n, 0.6, &mut r)
            })
            .collect();
        meshes.push(build_rect_grid_from_coords(coords).unwrap());
    }
    for seed in 0..6 {
        let count = r.gen_range(40..=95);
        let k = delaunay(&random_square_points(count, seed)).unwrap();
        meshes.push(k);
    }
    meshes
}

fn criterion_operators() -> Outcome {
    let meshes = operator_meshes();
    let mut r = rng(77);
    let (mut worst_stokes, mut worst_ibp) = (0.0_f64, 0.0_f64);
    let mut largest_tri = 0;
    for k in &meshes {
        let n = k.dim();
        if k.shape() == CellShape::Simplex {
            largest_tri = largest_tri.max(k.num_cells(2));
        } else if n == 3 {
            assert!(k.num_cells(3) <= 125);
        }
        let dual = circumcentric_dual(k).map_err(|e| e.to_string())?;
        let ds: Vec<_> = (0..n).map(|j| exterior_derivative(k, j).unwrap()).collect();
        for j in 0..n.saturating_sub(1) {
            let dd = ds[j + 1].compose_integer(&ds[j]).map_err(|e| e.to_string())?;
            if dd.iter().any(|&(_, _, v)| v != 0) {
                return Err(format!("d{}·d{} has a non-zero entry", j + 1, j));
            }
        }
        for j in 0..n {
            // Stokes on every cell: (dα)(σ) against α summed over ∂σ
            let alpha = random_vec(k.num_cells(j), &mut r);
            let da = ds[j].apply(&alpha);
            for s in 0..k.num_cells(j + 1) {
                let terms: Vec<f64> = brute_boundary(k, j + 1, s)
                    .iter()
                    .map(|&(f, sg)| sg * alpha[f])
                    .collect();
                let rhs: f64 = terms.iter().sum();
                let scale = terms.iter().map(|t| t.abs()).sum::<f64>().max(1e-300);
                worst_stokes = worst_stokes.max((da[s] - rhs).abs() / scale);
            }
            // integration by parts with random boundary flux
            let beta = random_vec(k.num_cells(j + 1), &mut r);
            let flux = random_vec(dual.boundary_cells(j).len(), &mut r);
            let a = Cochain::new(j, Placement::Primal, alpha.clone()).unwrap();
            let b = Cochain::new(j + 1, Placement::Primal, beta.clone()).unwrap();
            let res = ibp_residual(k, &dual, &a, &b, Some(&flux)).map_err(|e| e.to_string())?;
            let star = hodge_star(k, &dual, j + 1, &Causality::Spacelike).unwrap().diag();
            let scale = star
                .iter()
                .zip(&da)
                .zip(&beta)
                .map(|((s, x), y)| (s * x * y).abs())
                .sum::<f64>()
                + dual
                    .boundary_cells(j)
                    .iter()
                    .zip(&flux)
                    .map(|(&c, f)| (alpha[c] * f).abs())
                    .sum::<f64>();
            worst_ibp = worst_ibp.max(res.abs() / scale);
            let _ = inner_product(k, &dual, &b, &b, &Causality::Spacelike).unwrap();
        }
    }
    check(
        meshes.len() >= 10 && largest_tri <= 200 && worst_stokes <= 1e-10 && worst_ibp <= 1e-10,
        format!(
            "{} meshes (largest Delaunay {largest_tri} triangles), d∘d = 0 exactly, Stokes {worst_stokes:.1e}, IBP {worst_ibp:.1e}",
            meshes.len()
        ),
    )
}

// ---- 2: Yee equivalence ----------------------------------------------------

pub fn yee_run_2d(steps: usize) -> (f64, Trajectory) {
    let (n, ext) = ([16, 16], [1.0, 0.75]);
    let m = vacuum(emdec::mesh::build_rect_grid(&ext, &n).unwrap());
    let dt = 0.9 * cfl_dt(&m).unwrap();
    let s0 = random_fields(&m, 21);
    let mut oracle = Yee2d::from_cochains(&m, n, ext, s0.e.values(), s0.b.values());
    let mut st = s0.clone();
    bootstrap(&m, &mut st, dt, None);
    oracle.bootstrap(dt);
    let view = |s: &FieldState| Yee2d::from_cochains(&m, n, ext, s.e.values(), s.b.values());
    let mut worst = view(&st).max_diff(&oracle);
    for _ in 0..steps {
        leapfrog_step(&m, &mut st, dt, None).unwrap();
        oracle.step(dt);
        worst = worst.max(view(&st).max_diff(&oracle));
    }
    let tr = run_sync(&m, &s0, dt, steps, &yee_options(&m), None).unwrap();
    worst = worst.max(view(&tr.final_state).max_diff(&oracle));
    (worst, tr)
}

fn yee_options(m: &MaxwellModel) -> RunOptions {
    RunOptions {
        record_every: 10,
        probes: vec![Probe::Edge(m.num_edges() / 2), Probe::Face(m.num_faces() / 3)],
        ..RunOptions::default()
    }
}

fn yee_run_3d(steps: usize) -> f64 {
    let (n, ext) = ([8, 8, 8], [1.0, 0.8, 0.6]);
    let m = vacuum(emdec::mesh::build_rect_grid(&ext, &n).unwrap());
    let dt = 0.9 * cfl_dt(&m).unwrap();
    let s0 = random_fields(&m, 22);
    let mut oracle = Yee3d::from_cochains(&m, n, ext, s0.e.values(), s0.b.values());
    let mut st = s0.clone();
    bootstrap(&m, &mut st, dt, None);
    oracle.bootstrap(dt);
    let view = |s: &FieldState| Yee3d::from_cochains(&m, n, ext, s.e.values(), s.b.values());
    let mut worst = view(&st).max_diff(&oracle);
    for _ in 0..steps {
        leapfrog_step(&m, &mut st, dt, None).unwrap();
        oracle.step(dt);
        worst = worst.max(view(&st).max_diff(&oracle));
    }
    let tr = run_sync(&m, &s0, dt, steps, &RunOptions::default(), None).unwrap();
    worst.max(view(&tr.final_state).max_diff(&oracle))
}

fn criterion_yee() -> Outcome {
    let (d2, _) = yee_run_2d(200);
    let d3 = yee_run_3d(200);
    check(
        d2 < 1e-12 && d3 < 1e-12,
        format!("200 steps, max |DEC − Yee| 2-D {d2:.1e}, 3-D {d3:.1e}"),
    )
}

// ---- 3: synchronous AVI limit ----------------------------------------------

struct AviSyncRuns {
    scale: f64,
    diff_e: f64,
    diff_b: f64,
    triangles: usize,
    csv: String,
}

fn avi_sync_runs(steps: usize) -> AviSyncRuns {
    let m = coarse_unstructured();
    let dt = 0.9 * cfl_dt(&m).unwrap();
    let s0 = unit_energy(&m, &random_fields(&m, 31));
    let sch = build_schedule(&vec![dt; m.num_faces()], 0.0, steps as f64 * dt, 0.0, 0).unwrap();
    assert!(sch.face_steps.iter().all(|&s| s == steps));
    let opts = RunOptions {
        sample_dt: 10.0 * dt,
        probes: vec![Probe::Edge(m.num_edges() / 2), Probe::Face(7)],
        ..RunOptions::default()
    };
    let avi = run_avi(&m, &s0, &sch, &opts, None).unwrap();
    let sync_n = run_sync(&m, &s0, dt, steps, &RunOptions::default(), None).unwrap();
    let sync_prev = run_sync(&m, &s0, dt, steps - 1, &RunOptions::default(), None).unwrap();
    let fin = &avi.trajectory.final_state;
    let labels: Vec<String> = opts.probes.iter().map(|p| p.label()).collect();
    let mut csv = energy_csv(&avi.trajectory.samples);
    csv += &probes_csv(&avi.trajectory.samples, &labels);
    csv += &snapshot_csv("E", 1, "primal", fin.time_e, fin.e.values());
    AviSyncRuns {
        scale: fin.e.max_abs().max(fin.b.max_abs()),
        diff_e: max_diff(fin.e.values(), sync_prev.final_state.e.values()),
        diff_b: max_diff(fin.b.values(), sync_n.final_state.b.values()),
        triangles: m.num_faces(),
        csv,
    }
}

fn criterion_avi_sync() -> Outcome {
    let r = avi_sync_runs(200);
    check(
        r.triangles >= 100 && r.diff_e < 1e-12 && r.diff_b < 1e-12,
        format!(
            "{} triangles, unit initial energy, 200 steps, max |AVI − sync| E {:.1e}, B {:.1e} (relative {:.1e})",
            r.triangles,
            r.diff_e,
            r.diff_b,
            r.diff_e.max(r.diff_b) / r.scale
        ),
    )
}

// ---- 4: constraint conservation --------------------------------------------

fn conservation(m: &MaxwellModel, steps: usize) -> (f64, f64) {
    let dt = 0.9 * cfl_dt(m).unwrap();
    let s0 = random_fields(m, 41);
    let opts = RunOptions {
        record_every: 100,
        ..RunOptions::default()
    };
    let tr = run_sync(m, &s0, dt, steps, &opts, None).unwrap();
    let divb0 = divb_residual(m, s0.b.values());
    let divb = tr
        .samples
        .iter()
        .map(|s| (s.divb - divb0).abs())
        .fold(0.0, f64::max)
        .max((divb_residual(m, tr.final_state.b.values()) - divb0).abs());
    let g0 = gauss_defect(m, s0.d.values(), None);
    let g1 = gauss_defect(m, tr.final_state.d.values(), None);
    let g0max = g0.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    let series = tr
        .samples
        .iter()
        .map(|s| (s.gauss - g0max).abs())
        .fold(0.0, f64::max);
    (divb, max_diff(&g0, &g1).max(series))
}

fn criterion_conservation() -> Outcome {
    let cube = vacuum(emdec::mesh::build_rect_grid(&[1.0, 1.0, 1.0], &[6, 6, 6]).unwrap());
    let (divb3, gauss3) = conservation(&cube, 10_000);
    let (divb2, gauss2) = conservation(&coarse_unstructured(), 10_000);
    check(
        divb3 <= 1e-12 && divb2 <= 1e-12 && gauss3 < 1e-10 && gauss2 < 1e-10,
        format!(
            "10⁴ steps: div B change 3-D {divb3:.1e}, 2-D {divb2:.1e}; Gauss drift 3-D {gauss3:.1e}, 2-D unstructured {gauss2:.1e}"
        ),
    )
}

// ---- 5: electrostatic stationarity -----------------------------------------

fn stationarity(m: &MaxwellModel, seed: u64) -> f64 {
    let mut r = rng(seed);
    let phi: Vec<f64> = (0..m.complex.num_cells(0))
        .map(|v| if m.complex.is_boundary(0, v) { 0.0 } else { r.gen_range(-1.0..1.0) })
        .collect();
    let e0 = m.d0.apply(&phi);
    let s0 = FieldState::from_fields(m, e0.clone(), vec![0.0; m.num_faces()], 0.0);
    let dt = 0.9 * cfl_dt(m).unwrap();
    let mut st = s0.clone();
    bootstrap(m, &mut st, dt, None);
    let mut worst = max_diff(st.e.values(), &e0);
    for _ in 0..100 {
        let before = st.e.values().to_vec();
        leapfrog_step(m, &mut st, dt, None).unwrap();
        worst = worst
            .max(max_diff(st.e.values(), &before))
            .max(st.b.max_abs());
    }
    worst
}

fn criterion_stationarity() -> Outcome {
    let a = stationarity(&coarse_unstructured(), 51);
    let b = stationarity(&vacuum(emdec::mesh::build_rect_grid(&[1.0; 3], &[5, 5, 5]).unwrap()), 52);
    check(
        a <= 1e-12 && b <= 1e-12,
        format!("E⁰ = d₀φ, 100 steps, max per-step change 2-D {a:.1e}, 3-D {b:.1e}"),
    )
}

// ---- 6: energy behaviour ---------------------------------------------------

struct EnergyRuns {
    uniform: (f64, f64),
    random: (f64, f64),
    csv: String,
}

fn energy_runs() -> EnergyRuns {
    let m = unit_grid(32);
    let dt = cfl_dt(&m).unwrap() / 10.0;
    let steps = (8.0 / dt).ceil() as usize;
    let s0 = FieldState::random_e(&m, 61, 0.0);
    let opts = RunOptions {
        record_every: 10,
        ..RunOptions::default()
    };
    let tr = run_sync(&m, &s0, dt, steps, &opts, None).unwrap();
    let du = energy_drift(&tr.energies()).unwrap();

    let m = random_partition_grid(32, 0.5, 62);
    let dts: Vec<f64> = local_cfl_dt(&m).unwrap().iter().map(|d| d / 10.0).collect();
    let sch = build_schedule(&dts, 0.0, 8.0, 0.0, 63).unwrap();
    let s0 = FieldState::random_e(&m, 61, 0.0);
    let opts = RunOptions {
        sample_dt: 0.01,
        ..RunOptions::default()
    };
    let run = run_avi(&m, &s0, &sch, &opts, None).unwrap();
    let dr = energy_drift(&run.trajectory.energies()).unwrap();
    let mut csv = energy_csv(&tr.samples);
    csv += &residuals_csv(&tr.samples);
    csv += &energy_csv(&run.trajectory.samples);
    csv += &residuals_csv(&run.trajectory.samples);
    EnergyRuns {
        uniform: (du.relative_drift, du.relative_excursion),
        random: (dr.relative_drift, dr.relative_excursion),
        csv,
    }
}

fn criterion_energy() -> Outcome {
    let r = energy_runs();
    let ok = |(d, x): (f64, f64)| d < 0.01 && x < 0.10;
    check(
        ok(r.uniform) && ok(r.random),
        format!(
            "t = 8, Δt = CFL/10: uniform drift {:.1e} excursion {:.1e}; random-partition AVI drift {:.1e} excursion {:.1e}",
            r.uniform.0, r.uniform.1, r.random.0, r.random.1
        ),
    )
}

// ---- 7: resonance spectrum -------------------------------------------------

const SPECTRUM_T: f64 = 100.0;
const PROMINENCE: f64 = 10.0;
const NEIGHBORHOOD: usize = 1;
/// Every cavity `H_z` mode has an antinode at the corners.
const PROBE_AT: [f64; 2] = [0.02, 0.02];

fn match_peaks(peaks: &[f64], bin: f64) -> Result<f64, String> {
    let expect = cavity_frequencies(5);
    if peaks.len() < 5 {
        return Err(format!("only {} peaks detected", peaks.len()));
    }
    let mut worst = 0.0_f64;
    for (p, f) in peaks.iter().zip(&expect) {
        let tol = (2.0 * bin).max(0.02 * f);
        if (p - f).abs() > tol {
            return Err(format!("peak {p:.4} vs analytic {f:.4} (tolerance {tol:.4})"));
        }
        worst = worst.max((p - f).abs() / f);
    }
    Ok(worst)
}

fn criterion_spectrum() -> Outcome {
    let m = unit_grid(32);
    let dt = 0.5 * cfl_dt(&m).unwrap();
    let every = 4;
    let opts = RunOptions {
        record_every: every,
        probes: vec![Probe::Face(face_near(&m, PROBE_AT))],
        ..RunOptions::default()
    };
    let steps = (SPECTRUM_T / dt).ceil() as usize;
    let tr = run_sync(&m, &gaussian_pulse(&m), dt, steps, &opts, None).unwrap();
    let series: Vec<f64> = tr.samples.iter().map(|s| s.probes[0]).collect();
    let su = spectrum(&series, every as f64 * dt, PROMINENCE, NEIGHBORHOOD).unwrap();
    let eu = match_peaks(&su.peaks, su.bin_width()).map_err(|e| format!("uniform grid: {e}"))?;

    let m = refined_mesh();
    let dts: Vec<f64> = local_cfl_dt(&m).unwrap().iter().map(|d| d / 10.0).collect();
    let sch = build_schedule(&dts, 0.0, SPECTRUM_T, 0.0, 71).unwrap();
    let sample_dt = 0.05;
    let opts = RunOptions {
        sample_dt,
        probes: vec![Probe::Face(face_near(&m, PROBE_AT))],
        ..RunOptions::default()
    };
    let run = run_avi(&m, &gaussian_pulse(&m), &sch, &opts, None).unwrap();
    let series: Vec<f64> = run.trajectory.samples.iter().map(|s| s.probes[0]).collect();
    let sr = spectrum(&series, sample_dt, PROMINENCE, NEIGHBORHOOD).unwrap();
    let er = match_peaks(&sr.peaks, sr.bin_width())
        .map_err(|e| format!("refined mesh ({} triangles, AVI): {e}", m.num_faces()))?;
    Ok(format!(
        "5 lowest peaks within tolerance; worst relative error uniform {eu:.1e}, refined AVI ({} triangles) {er:.1e}",
        m.num_faces()
    ))
}

// ---- 8: multisymplecticity -------------------------------------------------

fn criterion_multisymplectic() -> Outcome {
    let m = unit_grid(4);
    let dt = 0.9 * cfl_dt(&m).unwrap();
    let steps = 8;
    let mut r = rng(81);
    let mut worst = 0.0_f64;
    let trials = 24;
    for _ in 0..trials {
        let mut solution = || {
            let a0 = random_vec(m.num_edges(), &mut r);
            let e0 = random_vec(m.num_edges(), &mut r);
            potential_history(&m, &a0, &e0, dt, steps).unwrap()
        };
        let (alpha, beta) = (solution(), solution());
        let mut cells: Vec<usize> = (0..m.num_faces()).filter(|_| r.gen_bool(0.4)).collect();
        if cells.is_empty() {
            cells.push(r.gen_range(0..m.num_faces()));
        }
        let start = r.gen_range(0..steps);
        let len = r.gen_range(1..=steps - start);
        let block = SpacetimeBlock {
            cells,
            start,
            steps: len,
        };
        let res = multisymplectic_residual(&m, &alpha, &beta, &block).map_err(|e| e.to_string())?;
        worst = worst.max(res);
    }
    check(
        worst < 1e-10,
        format!("{trials} solution pairs and blocks on a 4×4 grid, 8 steps, max residual {worst:.1e}"),
    )
}

// ---- 9: stability boundary -------------------------------------------------

fn criterion_stability() -> Outcome {
    let m = unit_grid(16);
    let limit = cfl_dt(&m).unwrap();
    let s0 = FieldState::random_e(&m, 91, 0.0);
    let opts = RunOptions {
        record_every: 0,
        ..RunOptions::default()
    };
    let stable = run_sync(&m, &s0, 0.9 * limit, 10_000, &opts, None);
    let unstable = run_sync(&m, &s0, 1.1 * limit, 1_000, &opts, None);
    let blowup = match unstable {
        Err(IntegratorError::Unstable { step, .. }) => Some(step),
        _ => None,
    };
    check(
        stable.is_ok() && blowup.is_some(),
        format!(
            "0.9·CFL stable for 10⁴ steps: {}; 1.1·CFL blow-up detected at step {}",
            stable.is_ok(),
            blowup.map_or("never".to_string(), |s| s.to_string())
        ),
    )
}

// ---- 10: determinism -------------------------------------------------------

fn yee_csv() -> String {
    let (_, tr) = yee_run_2d(200);
    let fin = &tr.final_state;
    let labels = vec!["e".to_string(), "f".to_string()];
    energy_csv(&tr.samples)
        + &residuals_csv(&tr.samples)
        + &probes_csv(&tr.samples, &labels)
        + &snapshot_csv("E", 1, "primal", fin.time_e, fin.e.values())
        + &snapshot_csv("B", 2, "primal", fin.time_b, fin.b.values())
}

fn criterion_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut identical = 0;
    let produce: [(&str, fn() -> String); 3] = [
        ("yee", yee_csv),
        ("avi_sync", || avi_sync_runs(200).csv),
        ("energy", || energy_runs().csv),
    ];
    for (name, f) in produce {
        let paths = [dir.path().join(format!("{name}_a.csv")), dir.path().join(format!("{name}_b.csv"))];
        for p in &paths {
            emdec::io::write_atomic(p, f().as_bytes()).map_err(|e| e.to_string())?;
        }
        let a = std::fs::read(&paths[0]).map_err(|e| e.to_string())?;
        let b = std::fs::read(&paths[1]).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("{name}: reruns differ"));
        }
        identical += 1;
    }
    Ok(format!("{identical} of 3 reruns byte-identical"))
}

// ---- driver ----------------------------------------------------------------

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 10] = [
        ("1 operator identities", criterion_operators, Duration::from_secs(10)),
        ("2 Yee equivalence", criterion_yee, Duration::from_secs(30)),
        ("3 synchronous AVI limit", criterion_avi_sync, Duration::from_secs(30)),
        ("4 constraint conservation", criterion_conservation, Duration::from_secs(60)),
        ("5 electrostatic stationarity", criterion_stationarity, Duration::from_secs(60)),
        ("6 energy behaviour", criterion_energy, Duration::from_secs(300)),
        ("7 resonance spectrum", criterion_spectrum, Duration::from_secs(300)),
        ("8 multisymplecticity", criterion_multisymplectic, Duration::from_secs(10)),
        ("9 stability boundary", criterion_stability, Duration::from_secs(60)),
        ("10 determinism", criterion_determinism, Duration::from_secs(600)),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run, budget) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| Err(format!("panicked: {}", panic_message(&p))));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > budget => Err(format!("{d}; over time budget {budget:?}")),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] criterion {name}: {detail} ({:.2} s)", elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

fn panic_message(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "unknown panic".into())
}
