//! Two-dimensional Euler right-hand side in the class-A finite-volume form:
//! each face flux is a 3-point Gauss–Legendre average of Lax–Friedrichs
//! fluxes, with node states from two nested 1D WENO passes.
//!
//! States are stored row-major with four fields per cell: entry
//! `(j * nx + i) * 4 + m` is field `m` of cell `(i, j)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::euler::{self, RoeState};
use crate::scheme::Scheme;
use crate::solver1d::{BoundaryKind, GHOST};
use crate::time::{self, CflRule, IntegrationStats};
use crate::weno::{self, PointStencil};

/// Gauss–Legendre weights on `[-1/2, 1/2]`, nodes at `-√15/10, 0, √15/10`.
pub const GAUSS_WEIGHTS: [f64; 3] = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];

pub fn gauss_nodes() -> [f64; 3] {
    let r = 15f64.sqrt() / 10.0;
    [-r, 0.0, r]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl Grid2D {
    pub fn new(x: (f64, f64), y: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        if nx < 6 || ny < 6 {
            return Err(Error::invalid(format!("grid needs at least 6 cells per axis, got {nx}x{ny}")));
        }
        if !(x.1 > x.0) || !(y.1 > y.0) {
            return Err(Error::invalid("empty domain"));
        }
        Ok(Grid2D { x, y, nx, ny })
    }

    pub fn square(lo: f64, hi: f64, n: usize) -> Result<Self> {
        Grid2D::new((lo, hi), (lo, hi), n, n)
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.x.1 - self.x.0) / self.nx as f64
    }

    #[inline]
    pub fn dy(&self) -> f64 {
        (self.y.1 - self.y.0) / self.ny as f64
    }

    #[inline]
    pub fn centre(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.x.0 + (i as f64 + 0.5) * self.dx(),
            self.y.0 + (j as f64 + 0.5) * self.dy(),
        )
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    /// The grid with axes exchanged.
    pub fn transposed(&self) -> Grid2D {
        Grid2D {
            x: self.y,
            y: self.x,
            nx: self.ny,
            ny: self.nx,
        }
    }
}

/// Copies the interior into an array padded with [`GHOST`] cells on every
/// side. x-ghosts are filled first, then whole padded rows are copied into
/// the y-ghosts, which also fills the corners.
pub fn apply_boundary_2d(state: &[f64], nx: usize, ny: usize, kind: BoundaryKind) -> Vec<f64> {
    let px = nx + 2 * GHOST;
    let py = ny + 2 * GHOST;
    let mut g = vec![0.0; px * py * 4];
    for j in 0..ny {
        let dst = ((j + GHOST) * px + GHOST) * 4;
        g[dst..dst + nx * 4].copy_from_slice(&state[j * nx * 4..(j + 1) * nx * 4]);
    }
    for j in GHOST..GHOST + ny {
        let row = &mut g[j * px * 4..(j + 1) * px * 4];
        for k in 0..GHOST {
            let (ls, rs) = match kind {
                BoundaryKind::Periodic => (nx + k, GHOST + k),
                BoundaryKind::Transmissive => (GHOST, GHOST + nx - 1),
            };
            row.copy_within(ls * 4..ls * 4 + 4, k * 4);
            row.copy_within(rs * 4..rs * 4 + 4, (GHOST + nx + k) * 4);
        }
    }
    for k in 0..GHOST {
        let (bs, ts) = match kind {
            BoundaryKind::Periodic => (ny + k, GHOST + k),
            BoundaryKind::Transmissive => (GHOST, GHOST + ny - 1),
        };
        g.copy_within(bs * px * 4..(bs + 1) * px * 4, k * px * 4);
        g.copy_within(ts * px * 4..(ts + 1) * px * 4, (GHOST + ny + k) * px * 4);
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// A padded array seen along one axis: `normal` indexes across faces,
/// `tangent` along them. The y view swaps the two momentum components so
/// the x-direction flux code applies unchanged.
#[derive(Clone, Copy)]
struct View<'a> {
    g: &'a [f64],
    normal_stride: usize,
    tangent_stride: usize,
    swap: bool,
}

impl View<'_> {
    #[inline(always)]
    fn cell(&self, a: usize, b: usize) -> [f64; 4] {
        let k = (a * self.normal_stride + b * self.tangent_stride) * 4;
        let s = &self.g[k..k + 4];
        if self.swap {
            [s[0], s[2], s[1], s[3]]
        } else {
            [s[0], s[1], s[2], s[3]]
        }
    }
}

/// Left and right states at the three Gauss nodes of one face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceStates {
    pub left: [[f64; 4]; 3],
    pub right: [[f64; 4]; 3],
}

#[inline(always)]
fn to_primitive(q: &[f64; 4]) -> [f64; 4] {
    euler::primitive_2d(q)
}

#[inline(always)]
fn admissible(q: &[f64; 4]) -> bool {
    let p = to_primitive(q);
    p[0] > 0.0 && p[3] > 0.0 && p[0].is_finite() && p[3].is_finite()
}

struct Reconstructor {
    scheme: Scheme,
    outer: PointStencil,
    centre: PointStencil,
}

impl Reconstructor {
    fn new(scheme: Scheme) -> Self {
        Reconstructor {
            scheme,
            outer: PointStencil::gauss_outer(),
            centre: PointStencil::centre(),
        }
    }

    /// Face-averaged left/right states at the face after normal cell `a`
    /// in tangential line `b`.
    #[inline(always)]
    fn normal_pass(&self, view: &View, a: usize, b: usize) -> ([f64; 4], [f64; 4]) {
        let mut cells = [[0.0; 4]; 6];
        for (k, c) in cells.iter_mut().enumerate() {
            *c = view.cell(a - 2 + k, b);
        }
        let roe = RoeState::average_unchecked(to_primitive(&cells[2]), to_primitive(&cells[3]));
        let es = euler::eigensystem_x_2d(&roe);
        let w: [[f64; 4]; 6] = cells.map(|c| es.to_characteristic(&c));
        let mut left = [0.0; 4];
        let mut right = [0.0; 4];
        for f in 0..4 {
            left[f] = self.scheme.reconstruct(&[w[0][f], w[1][f], w[2][f], w[3][f], w[4][f]]);
            right[f] = self.scheme.reconstruct(&[w[5][f], w[4][f], w[3][f], w[2][f], w[1][f]]);
        }
        (es.to_conserved(&left), es.to_conserved(&right))
    }

    /// Point values at the three Gauss nodes from five face averages
    /// centred on the target line, in the characteristic basis `es`.
    #[inline(always)]
    fn tangential_pass(&self, es: &euler::Eigensystem<4>, avg: &[[f64; 4]; 5]) -> [[f64; 4]; 3] {
        let w: [[f64; 4]; 5] = avg.map(|q| es.to_characteristic(&q));
        let mut nodes = [[0.0; 4]; 3];
        for f in 0..4 {
            let v = [w[0][f], w[1][f], w[2][f], w[3][f], w[4][f]];
            let rv = [v[4], v[3], v[2], v[1], v[0]];
            let inv = self.scheme.factors(&weno::betas_raw(&v));
            let rinv = [inv[2], inv[1], inv[0]];
            nodes[0][f] = self.scheme.reconstruct_point(&self.outer, &rv, &rinv);
            nodes[1][f] = self.scheme.reconstruct_point(&self.centre, &v, &inv);
            nodes[2][f] = self.scheme.reconstruct_point(&self.outer, &v, &inv);
        }
        nodes.map(|n| es.to_conserved(&n))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Solver2D {
    pub grid: Grid2D,
    pub scheme: Scheme,
    pub boundary: BoundaryKind,
}

impl Solver2D {
    pub fn new(grid: Grid2D, scheme: Scheme, boundary: BoundaryKind) -> Result<Self> {
        scheme.validate()?;
        Ok(Solver2D {
            grid,
            scheme,
            boundary,
        })
    }

    fn check_len(&self, state: &[f64]) -> Result<()> {
        let want = self.grid.cells() * 4;
        if state.len() == want {
            Ok(())
        } else {
            Err(Error::invalid(format!("state has {} entries, expected {want}", state.len())))
        }
    }

    fn padded(&self, state: &[f64]) -> Vec<f64> {
        apply_boundary_2d(state, self.grid.nx, self.grid.ny, self.boundary)
    }

    fn view<'a>(&self, g: &'a [f64], axis: Axis) -> View<'a> {
        let px = self.grid.nx + 2 * GHOST;
        match axis {
            Axis::X => View {
                g,
                normal_stride: 1,
                tangent_stride: px,
                swap: false,
            },
            Axis::Y => View {
                g,
                normal_stride: px,
                tangent_stride: 1,
                swap: true,
            },
        }
    }

    fn extent(&self, axis: Axis) -> (usize, usize) {
        match axis {
            Axis::X => (self.grid.nx, self.grid.ny),
            Axis::Y => (self.grid.ny, self.grid.nx),
        }
    }

    /// `(max |u| + c, max |v| + c)` over the interior.
    pub fn max_wave_speeds(&self, state: &[f64]) -> Result<(f64, f64)> {
        self.check_len(state)?;
        let (mut ax, mut ay): (f64, f64) = (0.0, 0.0);
        for (k, q) in state.chunks_exact(4).enumerate() {
            let [rho, u, v, p] = euler::primitive_2d(&[q[0], q[1], q[2], q[3]]);
            euler::check_admissible(rho, p, || {
                format!("cell ({}, {})", k % self.grid.nx, k / self.grid.nx)
            })?;
            let c = euler::sound_speed(rho, p);
            ax = ax.max(u.abs() + c);
            ay = ay.max(v.abs() + c);
        }
        Ok((ax, ay))
    }

    pub fn dt(&self, state: &[f64], cfl: CflRule) -> Result<f64> {
        let (ax, ay) = self.max_wave_speeds(state)?;
        time::dt_2d(cfl, self.grid.dx(), self.grid.dy(), ax, ay)
    }

    /// Gauss-node states on every face normal to `axis`, indexed
    /// `[face][line]` with `face = 0..=n_normal` and interior tangential
    /// lines. Face `k` lies before interior cell `k`. Momentum components
    /// are in the grid's own (x, y) order.
    pub fn face_gauss_states(&self, state: &[f64], axis: Axis) -> Result<Vec<Vec<FaceStates>>> {
        self.check_len(state)?;
        let g = self.padded(state);
        let view = self.view(&g, axis);
        let (nn, nt) = self.extent(axis);
        let rec = Reconstructor::new(self.scheme);
        (0..=nn)
            .map(|face| {
                let states = face_states(&rec, &view, face, nt)?;
                Ok(states
                    .into_iter()
                    .map(|s| {
                        if view.swap {
                            FaceStates {
                                left: s.left.map(swap_momentum),
                                right: s.right.map(swap_momentum),
                            }
                        } else {
                            s
                        }
                    })
                    .collect())
            })
            .collect::<Result<Vec<_>>>()
            .map_err(|e| locate(e, axis))
    }

    pub fn rhs(&self, state: &[f64], out: &mut [f64]) -> Result<()> {
        let (ax, ay) = self.max_wave_speeds(state)?;
        let alpha = ax.max(ay);
        let g = self.padded(state);
        let rec = Reconstructor::new(self.scheme);
        let fx = sweep_fluxes(&rec, &self.view(&g, Axis::X), self.grid.nx, self.grid.ny, alpha)
            .map_err(|e| locate(e, Axis::X))?;
        let fy = sweep_fluxes(&rec, &self.view(&g, Axis::Y), self.grid.ny, self.grid.nx, alpha)
            .map_err(|e| locate(e, Axis::Y))?;
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let (idx, idy) = (1.0 / self.grid.dx(), 1.0 / self.grid.dy());
        for j in 0..ny {
            for i in 0..nx {
                let ex0 = &fx[i * ny + j];
                let ex1 = &fx[(i + 1) * ny + j];
                let ey0 = &fy[j * nx + i];
                let ey1 = &fy[(j + 1) * nx + i];
                let o = (j * nx + i) * 4;
                for m in 0..4 {
                    let my = match m {
                        1 => 2,
                        2 => 1,
                        _ => m,
                    };
                    out[o + m] = -(ex1[m] - ex0[m]) * idx - (ey1[my] - ey0[my]) * idy;
                }
            }
        }
        Ok(())
    }

    pub fn run(&self, state: &mut [f64], t_final: f64, cfl: CflRule) -> Result<IntegrationStats> {
        self.check_len(state)?;
        time::integrate(state, t_final, |s| self.dt(s, cfl), |s, out| self.rhs(s, out))
    }
}

#[inline]
fn swap_momentum(q: [f64; 4]) -> [f64; 4] {
    [q[0], q[2], q[1], q[3]]
}

fn locate(e: Error, axis: Axis) -> Error {
    match e {
        Error::Inadmissible { location, detail } => Error::Inadmissible {
            location: format!("{axis:?}-{location}"),
            detail,
        },
        other => other,
    }
}

fn face_states(rec: &Reconstructor, view: &View, face: usize, nt: usize) -> Result<Vec<FaceStates>> {
    // face `face` separates padded normal cells face + 2 and face + 3
    let a = face + GHOST - 1;
    let lines = nt + 4;
    let mut avg = Vec::with_capacity(lines);
    for r in 0..lines {
        let (l, rr) = rec.normal_pass(view, a, r + 1);
        if !admissible(&l) || !admissible(&rr) {
            return Err(Error::Inadmissible {
                location: format!("face {face}, line {}", r as isize - 2),
                detail: "face-averaged state has non-positive density or pressure".into(),
            });
        }
        avg.push((l, rr));
    }
    let mut out = Vec::with_capacity(nt);
    for b in 0..nt {
        let (cl, cr) = avg[b + 2];
        let roe = RoeState::average_unchecked(to_primitive(&cl), to_primitive(&cr));
        let es = euler::eigensystem_x_2d(&roe);
        let left = rec.tangential_pass(&es, &[avg[b].0, avg[b + 1].0, avg[b + 2].0, avg[b + 3].0, avg[b + 4].0]);
        let right = rec.tangential_pass(&es, &[avg[b].1, avg[b + 1].1, avg[b + 2].1, avg[b + 3].1, avg[b + 4].1]);
        if !left.iter().chain(&right).all(admissible) {
            return Err(Error::Inadmissible {
                location: format!("face {face}, line {b}"),
                detail: "Gauss-node state has non-positive density or pressure".into(),
            });
        }
        out.push(FaceStates { left, right });
    }
    Ok(out)
}

/// Face-averaged normal fluxes indexed `face * nt + line`, in the view's
/// (possibly swapped) component order.
fn sweep_fluxes(rec: &Reconstructor, view: &View, nn: usize, nt: usize, alpha: f64) -> Result<Vec<[f64; 4]>> {
    let face_flux = |face: usize| -> Result<Vec<[f64; 4]>> {
        let states = face_states(rec, view, face, nt)?;
        Ok(states
            .iter()
            .map(|s| {
                let mut acc = [0.0; 4];
                for n in 0..3 {
                    let fl = euler::flux_x_2d(&s.left[n]);
                    let fr = euler::flux_x_2d(&s.right[n]);
                    for m in 0..4 {
                        let lf = 0.5 * (fl[m] + fr[m] - alpha * (s.right[n][m] - s.left[n][m]));
                        acc[m] += GAUSS_WEIGHTS[n] * lf;
                    }
                }
                acc
            })
            .collect())
    };
    let per_face: Vec<Vec<[f64; 4]>> = if rayon::current_num_threads() > 1 {
        (0..=nn).into_par_iter().map(face_flux).collect::<Result<_>>()?
    } else {
        (0..=nn).map(face_flux).collect::<Result<_>>()?
    };
    Ok(per_face.into_iter().flatten().collect())
}
