//! Textbook Yee scheme on a uniform box in physical field components,
//! vacuum, PEC walls. Used as an oracle against the cochain leapfrog.
//!
//! Cochain values convert as `E_a = ±e / h_a` and `B_a = ±b / (h_b h_c)`,
//! with the sign read off each cell's vertex order.

use emdec::MaxwellModel;

#[derive(Debug, Clone, Copy)]
struct Slot {
    axis: usize,
    idx: [usize; 3],
    sign: f64,
}

fn axis_of(d: [f64; 3]) -> usize {
    (0..3)
        .max_by(|&a, &b| d[a].abs().total_cmp(&d[b].abs()))
        .unwrap()
}

fn edge_slots(m: &MaxwellModel, h: [f64; 3]) -> Vec<Slot> {
    let k = &m.complex;
    (0..k.num_cells(1))
        .map(|e| {
            let v = &k.cell(1, e).vertices;
            let (p, q) = (k.point(v[0]), k.point(v[1]));
            let d = [q[0] - p[0], q[1] - p[1], q[2] - p[2]];
            let axis = axis_of(d);
            let mut idx = [0; 3];
            for a in 0..3 {
                idx[a] = (p[a].min(q[a]) / h[a]).round() as usize;
            }
            Slot {
                axis,
                idx,
                sign: d[axis].signum(),
            }
        })
        .collect()
}

/// Faces are labelled by their normal axis; in 2-D every face has normal z.
fn face_slots(m: &MaxwellModel, h: [f64; 3]) -> Vec<Slot> {
    let k = &m.complex;
    let n = m.dim();
    (0..k.num_cells(2))
        .map(|f| {
            let v = &k.cell(2, f).vertices;
            let p: Vec<[f64; 3]> = v.iter().map(|&i| k.point(i)).collect();
            let u = [p[1][0] - p[0][0], p[1][1] - p[0][1], p[1][2] - p[0][2]];
            let w = [p[2][0] - p[0][0], p[2][1] - p[0][1], p[2][2] - p[0][2]];
            let normal = [
                u[1] * w[2] - u[2] * w[1],
                u[2] * w[0] - u[0] * w[2],
                u[0] * w[1] - u[1] * w[0],
            ];
            let axis = axis_of(normal);
            let mut idx = [0; 3];
            for a in 0..n {
                idx[a] = (p.iter().map(|x| x[a]).fold(f64::INFINITY, f64::min) / h[a]).round() as usize;
            }
            Slot {
                axis,
                idx,
                sign: normal[axis].signum(),
            }
        })
        .collect()
}

/// 2-D TE Yee grid: `E_x` at `(i+½, j)`, `E_y` at `(i, j+½)`, `H_z` at `(i+½, j+½)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Yee2d {
    pub nx: usize,
    pub ny: usize,
    pub hx: f64,
    pub hy: f64,
    pub ex: Vec<f64>,
    pub ey: Vec<f64>,
    pub hz: Vec<f64>,
}

impl Yee2d {
    fn ex_at(&self, i: usize, j: usize) -> usize {
        i + self.nx * j
    }
    fn ey_at(&self, i: usize, j: usize) -> usize {
        i + (self.nx + 1) * j
    }
    fn hz_at(&self, i: usize, j: usize) -> usize {
        i + self.nx * j
    }

    /// Reads a cochain state on a uniform `nx × ny` grid of the box `[0, lx] × [0, ly]`.
    pub fn from_cochains(m: &MaxwellModel, n: [usize; 2], ext: [f64; 2], e: &[f64], b: &[f64]) -> Self {
        let (hx, hy) = (ext[0] / n[0] as f64, ext[1] / n[1] as f64);
        let mut y = Yee2d {
            nx: n[0],
            ny: n[1],
            hx,
            hy,
            ex: vec![0.0; n[0] * (n[1] + 1)],
            ey: vec![0.0; (n[0] + 1) * n[1]],
            hz: vec![0.0; n[0] * n[1]],
        };
        let h = [hx, hy, 1.0];
        for (s, v) in edge_slots(m, h).iter().zip(e) {
            let [i, j, _] = s.idx;
            if s.axis == 0 {
                let at = y.ex_at(i, j);
                y.ex[at] = s.sign * v / hx;
            } else {
                let at = y.ey_at(i, j);
                y.ey[at] = s.sign * v / hy;
            }
        }
        for (s, v) in face_slots(m, h).iter().zip(b) {
            let at = y.hz_at(s.idx[0], s.idx[1]);
            y.hz[at] = s.sign * v / (hx * hy);
        }
        y
    }

    fn update_e(&mut self, dt: f64) {
        for j in 1..self.ny {
            for i in 0..self.nx {
                let c = (self.hz[self.hz_at(i, j)] - self.hz[self.hz_at(i, j - 1)]) / self.hy;
                let at = self.ex_at(i, j);
                self.ex[at] += dt * c;
            }
        }
        for j in 0..self.ny {
            for i in 1..self.nx {
                let c = (self.hz[self.hz_at(i, j)] - self.hz[self.hz_at(i - 1, j)]) / self.hx;
                let at = self.ey_at(i, j);
                self.ey[at] -= dt * c;
            }
        }
    }

    pub fn bootstrap(&mut self, dt: f64) {
        self.update_e(0.5 * dt);
    }

    pub fn step(&mut self, dt: f64) {
        for j in 0..self.ny {
            for i in 0..self.nx {
                let dey = (self.ey[self.ey_at(i + 1, j)] - self.ey[self.ey_at(i, j)]) / self.hx;
                let dex = (self.ex[self.ex_at(i, j + 1)] - self.ex[self.ex_at(i, j)]) / self.hy;
                let at = self.hz_at(i, j);
                self.hz[at] -= dt * (dey - dex);
            }
        }
        self.update_e(dt);
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        super::max_diff(&self.ex, &other.ex)
            .max(super::max_diff(&self.ey, &other.ey))
            .max(super::max_diff(&self.hz, &other.hz))
    }
}

/// 3-D Yee grid with the usual staggering: `E_a` on edge midpoints, `H_a`
/// on face centres.
#[derive(Debug, Clone, PartialEq)]
pub struct Yee3d {
    pub n: [usize; 3],
    pub h: [f64; 3],
    /// `E_x`, `E_y`, `E_z`.
    pub e: [Vec<f64>; 3],
    /// `H_x`, `H_y`, `H_z`.
    pub hf: [Vec<f64>; 3],
}

impl Yee3d {
    /// Array shape of the `E` component along `a`: one fewer node along `a`.
    fn e_shape(&self, a: usize) -> [usize; 3] {
        let mut s = [self.n[0] + 1, self.n[1] + 1, self.n[2] + 1];
        s[a] -= 1;
        s
    }
    /// Array shape of the `H` component along `a`: one fewer node off `a`.
    fn h_shape(&self, a: usize) -> [usize; 3] {
        let mut s = self.n;
        s[a] += 1;
        s
    }
    fn at(shape: [usize; 3], i: usize, j: usize, k: usize) -> usize {
        i + shape[0] * (j + shape[1] * k)
    }

    pub fn from_cochains(m: &MaxwellModel, n: [usize; 3], ext: [f64; 3], e: &[f64], b: &[f64]) -> Self {
        let h = [ext[0] / n[0] as f64, ext[1] / n[1] as f64, ext[2] / n[2] as f64];
        let mut y = Yee3d {
            n,
            h,
            e: [vec![], vec![], vec![]],
            hf: [vec![], vec![], vec![]],
        };
        for a in 0..3 {
            let s = y.e_shape(a);
            y.e[a] = vec![0.0; s[0] * s[1] * s[2]];
            let s = y.h_shape(a);
            y.hf[a] = vec![0.0; s[0] * s[1] * s[2]];
        }
        for (s, v) in edge_slots(m, h).iter().zip(e) {
            let at = Self::at(y.e_shape(s.axis), s.idx[0], s.idx[1], s.idx[2]);
            y.e[s.axis][at] = s.sign * v / h[s.axis];
        }
        for (s, v) in face_slots(m, h).iter().zip(b) {
            let area = h[(s.axis + 1) % 3] * h[(s.axis + 2) % 3];
            let at = Self::at(y.h_shape(s.axis), s.idx[0], s.idx[1], s.idx[2]);
            y.hf[s.axis][at] = s.sign * v / area;
        }
        y
    }

    fn update_e(&mut self, dt: f64) {
        let [nx, ny, nz] = self.n;
        let [hx, hy, hz] = self.h;
        let (sx, sy, sz) = (self.h_shape(0), self.h_shape(1), self.h_shape(2));
        let (hxv, hyv, hzv) = (&self.hf[0], &self.hf[1], &self.hf[2]);
        let s = self.e_shape(0);
        for k in 1..nz {
            for j in 1..ny {
                for i in 0..nx {
                    let c = (hzv[Self::at(sz, i, j, k)] - hzv[Self::at(sz, i, j - 1, k)]) / hy
                        - (hyv[Self::at(sy, i, j, k)] - hyv[Self::at(sy, i, j, k - 1)]) / hz;
                    self.e[0][Self::at(s, i, j, k)] += dt * c;
                }
            }
        }
        let s = self.e_shape(1);
        for k in 1..nz {
            for j in 0..ny {
                for i in 1..nx {
                    let c = (hxv[Self::at(sx, i, j, k)] - hxv[Self::at(sx, i, j, k - 1)]) / hz
                        - (hzv[Self::at(sz, i, j, k)] - hzv[Self::at(sz, i - 1, j, k)]) / hx;
                    self.e[1][Self::at(s, i, j, k)] += dt * c;
                }
            }
        }
        let s = self.e_shape(2);
        for k in 0..nz {
            for j in 1..ny {
                for i in 1..nx {
                    let c = (hyv[Self::at(sy, i, j, k)] - hyv[Self::at(sy, i - 1, j, k)]) / hx
                        - (hxv[Self::at(sx, i, j, k)] - hxv[Self::at(sx, i, j - 1, k)]) / hy;
                    self.e[2][Self::at(s, i, j, k)] += dt * c;
                }
            }
        }
    }

    fn update_h(&mut self, dt: f64) {
        let [nx, ny, nz] = self.n;
        let [hx, hy, hz] = self.h;
        let (sx, sy, sz) = (self.e_shape(0), self.e_shape(1), self.e_shape(2));
        let (exv, eyv, ezv) = (&self.e[0], &self.e[1], &self.e[2]);
        let s = self.h_shape(0);
        for k in 0..nz {
            for j in 0..ny {
                for i in 0..=nx {
                    let c = (ezv[Self::at(sz, i, j + 1, k)] - ezv[Self::at(sz, i, j, k)]) / hy
                        - (eyv[Self::at(sy, i, j, k + 1)] - eyv[Self::at(sy, i, j, k)]) / hz;
                    self.hf[0][Self::at(s, i, j, k)] -= dt * c;
                }
            }
        }
        let s = self.h_shape(1);
        for k in 0..nz {
            for j in 0..=ny {
                for i in 0..nx {
                    let c = (exv[Self::at(sx, i, j, k + 1)] - exv[Self::at(sx, i, j, k)]) / hz
                        - (ezv[Self::at(sz, i + 1, j, k)] - ezv[Self::at(sz, i, j, k)]) / hx;
                    self.hf[1][Self::at(s, i, j, k)] -= dt * c;
                }
            }
        }
        let s = self.h_shape(2);
        for k in 0..=nz {
            for j in 0..ny {
                for i in 0..nx {
                    let c = (eyv[Self::at(sy, i + 1, j, k)] - eyv[Self::at(sy, i, j, k)]) / hx
                        - (exv[Self::at(sx, i, j + 1, k)] - exv[Self::at(sx, i, j, k)]) / hy;
                    self.hf[2][Self::at(s, i, j, k)] -= dt * c;
                }
            }
        }
    }

    pub fn bootstrap(&mut self, dt: f64) {
        self.update_e(0.5 * dt);
    }

    pub fn step(&mut self, dt: f64) {
        self.update_h(dt);
        self.update_e(dt);
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        (0..3).fold(0.0, |m: f64, a| {
            m.max(super::max_diff(&self.e[a], &other.e[a]))
                .max(super::max_diff(&self.hf[a], &other.hf[a]))
        })
    }
}
