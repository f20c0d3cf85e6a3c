//! Helpers shared by the integration tests: mesh factories, initial fields
//! and an independent component-stencil Yee solver.

#![allow(dead_code)]

pub mod yee;

use emdec::mesh::generate::{random_partition, refined_square};
use emdec::mesh::{build_rect_grid, build_rect_grid_from_coords, CellComplex};
use emdec::{FieldState, MaterialParams, MaxwellModel};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn vacuum(k: CellComplex) -> MaxwellModel {
    MaxwellModel::new(k, MaterialParams::vacuum()).unwrap()
}

pub fn unit_grid(n: usize) -> MaxwellModel {
    vacuum(build_rect_grid(&[1.0, 1.0], &[n, n]).unwrap())
}

/// Unit square with random node spacing along both axes.
pub fn random_partition_grid(n: usize, spread: f64, seed: u64) -> MaxwellModel {
    let mut r = rng(seed);
    let cx = random_partition(1.0, n, spread, &mut r);
    let cy = random_partition(1.0, n, spread, &mut r);
    vacuum(build_rect_grid_from_coords(vec![cx, cy]).unwrap())
}

/// Boundary-graded unstructured triangulation of the unit square.
pub fn refined_mesh() -> MaxwellModel {
    vacuum(refined_square(0.025, 0.07, 0.2, 5).unwrap())
}

/// Coarse unstructured triangulation (a few hundred triangles).
pub fn coarse_unstructured() -> MaxwellModel {
    vacuum(refined_square(0.08, 0.1, 0.2, 3).unwrap())
}

pub fn random_vec(n: usize, r: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| r.gen_range(-1.0..1.0)).collect()
}

/// Random `E` on interior edges and a closed `B = d₁A` for random `A`, scaled
/// by edge length (`A` by its square) so field components are of order one.
pub fn random_fields(m: &MaxwellModel, seed: u64) -> FieldState {
    let mut r = rng(seed);
    let len = m.dual.primal_volumes(1);
    let scaled = |r: &mut ChaCha8Rng, p: i32| -> Vec<f64> {
        random_vec(m.num_edges(), r).iter().zip(len).map(|(x, l)| x * l.powi(p)).collect()
    };
    let e = scaled(&mut r, 1);
    let a = scaled(&mut r, 2);
    let b = m.d1.apply(&a);
    FieldState::from_fields(m, e, b, 0.0)
}

/// `state` rescaled to unit total energy.
pub fn unit_energy(m: &MaxwellModel, state: &FieldState) -> FieldState {
    let w = emdec::diagnostics::energy(m, state.e.values(), state.b.values(), 0.0).total;
    let k = 1.0 / w.sqrt();
    let scale = |v: &[f64]| v.iter().map(|x| x * k).collect::<Vec<f64>>();
    FieldState::from_fields(m, scale(state.e.values()), scale(state.b.values()), state.time_b)
}

/// Top cell whose circumcenter is closest to `p`.
pub fn face_near(m: &MaxwellModel, p: [f64; 2]) -> usize {
    let n = m.dim();
    let d2 = |f: usize| {
        let c = m.dual.circumcenter(n, f);
        (c[0] - p[0]).powi(2) + (c[1] - p[1]).powi(2)
    };
    (0..m.complex.num_cells(n))
        .min_by(|&a, &b| d2(a).total_cmp(&d2(b)))
        .unwrap()
}

/// Off-centre Gaussian `B_z` pulse of width 0.1 at (0.3, 0.4), `E = 0`.
pub fn gaussian_pulse(m: &MaxwellModel) -> FieldState {
    let b = (0..m.num_faces())
        .map(|f| {
            let c = m.dual.circumcenter(2, f);
            let r2 = (c[0] - 0.3).powi(2) + (c[1] - 0.4).powi(2);
            (-r2 / 0.02).exp() * m.dual.primal_volumes(2)[f]
        })
        .collect();
    FieldState::from_fields(m, vec![0.0; m.num_edges()], b, 0.0)
}

/// Lowest distinct resonant frequencies `½√(k² + l²)` of the unit square.
pub fn cavity_frequencies(count: usize) -> Vec<f64> {
    let mut f: Vec<f64> = (0..12)
        .flat_map(|k| (0..12).map(move |l| (k, l)))
        .filter(|&(k, l)| k + l > 0)
        .map(|(k, l)| 0.5 * ((k * k + l * l) as f64).sqrt())
        .collect();
    f.sort_by(f64::total_cmp);
    f.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    f.truncate(count);
    f
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
