//! Semi-discrete right-hand sides for 1D scalar advection and the 1D Euler
//! equations.
//!
//! States are stored cell-major: entry `i * M + m` is field `m` of cell `i`.

use std::cell::{Cell, RefCell};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::euler::{self, RoeState};
use crate::lop::TraceSink;
use crate::scheme::Scheme;
use crate::time::{self, CflRule, IntegrationStats};

/// Receives the interface index and the five-cell window being reconstructed.
type Recorder<'a> = Option<&'a mut dyn FnMut(usize, &[f64; 5])>;

pub const GHOST: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub x_left: f64,
    pub x_right: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(x_left: f64, x_right: f64, n: usize) -> Result<Self> {
        if n < 6 {
            return Err(Error::invalid(format!("grid needs at least 6 cells, got {n}")));
        }
        if !(x_right > x_left) || !x_left.is_finite() || !x_right.is_finite() {
            return Err(Error::invalid(format!("empty interval [{x_left}, {x_right}]")));
        }
        Ok(Grid1D {
            x_left,
            x_right,
            n,
        })
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.x_right - self.x_left) / self.n as f64
    }

    #[inline]
    pub fn centre(&self, i: usize) -> f64 {
        self.x_left + (i as f64 + 0.5) * self.dx()
    }

    /// Left edge of cell `i` (`i = n` gives the right boundary).
    #[inline]
    pub fn edge(&self, i: usize) -> f64 {
        self.x_left + i as f64 * self.dx()
    }

    pub fn centres(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.centre(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryKind {
    #[default]
    Periodic,
    /// Zeroth-order extrapolation of the nearest interior cell.
    Transmissive,
}

/// Copies `interior` (n cells of `m` fields) into a new array with
/// [`GHOST`] ghost cells on each side.
pub fn apply_boundary(interior: &[f64], m: usize, kind: BoundaryKind) -> Vec<f64> {
    let n = interior.len() / m;
    let mut g = vec![0.0; (n + 2 * GHOST) * m];
    g[GHOST * m..(GHOST + n) * m].copy_from_slice(interior);
    fill_ghosts(&mut g, m, kind);
    g
}

/// Fills the ghost layers of an already padded array in place.
pub fn fill_ghosts(g: &mut [f64], m: usize, kind: BoundaryKind) {
    let n = g.len() / m - 2 * GHOST;
    for k in 0..GHOST {
        let (left_src, right_src) = match kind {
            BoundaryKind::Periodic => (n + k, GHOST + k),
            BoundaryKind::Transmissive => (GHOST, GHOST + n - 1),
        };
        for f in 0..m {
            g[k * m + f] = g[left_src * m + f];
            g[(GHOST + n + k) * m + f] = g[right_src * m + f];
        }
    }
}

/// Global Lax–Friedrichs splitting `f± = ½(f ± αu)`.
pub fn lf_split(f: &[f64], u: &[f64], alpha: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(alpha > 0.0) {
        return Err(Error::invalid(format!("splitting speed must be positive, got {alpha}")));
    }
    if f.len() != u.len() {
        return Err(Error::invalid(format!(
            "flux and state lengths differ ({} vs {})",
            f.len(),
            u.len()
        )));
    }
    let plus = f.iter().zip(u).map(|(f, u)| 0.5 * (f + alpha * u)).collect();
    let minus = f.iter().zip(u).map(|(f, u)| 0.5 * (f - alpha * u)).collect();
    Ok((plus, minus))
}

/// The Lax–Friedrichs numerical flux `½[f(a) + f(b) − α(b − a)]`.
pub fn lf_flux(fa: f64, fb: f64, a: f64, b: f64, alpha: f64) -> f64 {
    0.5 * (fa + fb - alpha * (b - a))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Equation1D {
    /// `u_t + a u_x = 0`.
    Advection { speed: f64 },
    Euler,
}

impl Equation1D {
    pub fn fields(&self) -> usize {
        match self {
            Equation1D::Advection { .. } => 1,
            Equation1D::Euler => 3,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Solver1D {
    pub grid: Grid1D,
    pub equation: Equation1D,
    pub scheme: Scheme,
    pub boundary: BoundaryKind,
}

#[inline(always)]
fn window(v: &[f64], start: usize) -> [f64; 5] {
    [v[start], v[start + 1], v[start + 2], v[start + 3], v[start + 4]]
}

impl Solver1D {
    pub fn new(grid: Grid1D, equation: Equation1D, scheme: Scheme, boundary: BoundaryKind) -> Result<Self> {
        scheme.validate()?;
        if let Equation1D::Advection { speed } = equation {
            if !speed.is_finite() || speed == 0.0 {
                return Err(Error::invalid(format!("advection speed must be non-zero, got {speed}")));
            }
        }
        Ok(Solver1D {
            grid,
            equation,
            scheme,
            boundary,
        })
    }

    pub fn fields(&self) -> usize {
        self.equation.fields()
    }

    fn check_len(&self, state: &[f64]) -> Result<()> {
        let want = self.grid.n * self.fields();
        if state.len() == want {
            Ok(())
        } else {
            Err(Error::invalid(format!("state has {} entries, expected {want}", state.len())))
        }
    }

    pub fn max_wave_speed(&self, state: &[f64]) -> Result<f64> {
        self.check_len(state)?;
        match self.equation {
            Equation1D::Advection { speed } => Ok(speed.abs()),
            Equation1D::Euler => {
                let mut alpha: f64 = 0.0;
                for (i, q) in state.chunks_exact(3).enumerate() {
                    let [rho, u, p] = euler::primitive_1d(&[q[0], q[1], q[2]]);
                    euler::check_admissible(rho, p, || format!("cell {i}"))?;
                    alpha = alpha.max(u.abs() + euler::sound_speed(rho, p));
                }
                Ok(alpha)
            }
        }
    }

    pub fn dt(&self, state: &[f64], cfl: CflRule) -> Result<f64> {
        time::dt_1d(cfl, self.grid.dx(), self.max_wave_speed(state)?)
    }

    /// Writes the tendency `−(F_{j+1/2} − F_{j−1/2})/Δx` of `state` to `out`.
    pub fn rhs(&self, state: &[f64], out: &mut [f64]) -> Result<()> {
        self.rhs_inner(state, out, None)
    }

    /// As [`Solver1D::rhs`], also recording the weights of every
    /// left-biased reconstruction at the right interface of each cell.
    pub fn rhs_traced(&self, state: &[f64], out: &mut [f64], time: f64, sink: &mut TraceSink) -> Result<()> {
        self.rhs_inner(state, out, Some((time, sink)))
    }

    fn rhs_inner(&self, state: &[f64], out: &mut [f64], trace: Option<(f64, &mut TraceSink)>) -> Result<()> {
        self.check_len(state)?;
        let m = self.fields();
        let n = self.grid.n;
        let g = apply_boundary(state, m, self.boundary);
        let fluxes = match self.equation {
            Equation1D::Advection { speed } => self.advection_fluxes(&g, speed, trace),
            Equation1D::Euler => self.euler_fluxes(&g, trace)?,
        };
        let inv_dx = 1.0 / self.grid.dx();
        for i in 0..n {
            for f in 0..m {
                out[i * m + f] = -(fluxes[(i + 1) * m + f] - fluxes[i * m + f]) * inv_dx;
            }
        }
        Ok(())
    }

    /// Interface fluxes `F_{j−1/2}` for `j = 0..=n`.
    fn advection_fluxes(&self, g: &[f64], speed: f64, trace: Option<(f64, &mut TraceSink)>) -> Vec<f64> {
        let n = self.grid.n;
        let a_plus = 0.5 * (speed + speed.abs());
        let a_minus = 0.5 * (speed - speed.abs());
        let scheme = &self.scheme;
        let flux_at = |j: usize| {
            // interface between padded cells j + 2 and j + 3
            let mut f = 0.0;
            if a_plus != 0.0 {
                f += a_plus * scheme.reconstruct(&window(g, j));
            }
            if a_minus != 0.0 {
                let w = window(g, j + 1);
                f += a_minus * scheme.reconstruct(&[w[4], w[3], w[2], w[1], w[0]]);
            }
            f
        };
        let fluxes = if rayon::current_num_threads() > 1 {
            (0..=n).into_par_iter().map(flux_at).collect()
        } else {
            (0..=n).map(flux_at).collect()
        };
        if let Some((t, sink)) = trace {
            for j in 1..=n {
                let w = if a_plus != 0.0 {
                    window(g, j)
                } else {
                    let w = window(g, j + 1);
                    [w[4], w[3], w[2], w[1], w[0]]
                };
                let (_, info) = scheme.reconstruct_detailed(&w);
                sink.record(j - 1, 0, t, info.omega_js, info.omega, info.op_flag);
            }
        }
        fluxes
    }

    fn euler_fluxes(&self, g: &[f64], trace: Option<(f64, &mut TraceSink)>) -> Result<Vec<f64>> {
        let n = self.grid.n;
        let cells = n + 2 * GHOST;
        let mut prim = vec![[0.0; 4]; cells];
        let mut flux = vec![[0.0; 3]; cells];
        let mut alpha: f64 = 0.0;
        for c in 0..cells {
            let q = [g[3 * c], g[3 * c + 1], g[3 * c + 2]];
            let [rho, u, p] = euler::primitive_1d(&q);
            euler::check_admissible(rho, p, || format!("cell {}", c as isize - GHOST as isize))?;
            prim[c] = [rho, u, 0.0, p];
            flux[c] = euler::flux_1d(&q);
            alpha = alpha.max(u.abs() + euler::sound_speed(rho, p));
        }
        let scheme = &self.scheme;
        let interface = |j: usize, mut rec: Recorder<'_>| -> [f64; 3] {
            let (l, r) = (j + 2, j + 3);
            let es = euler::eigensystem_1d(&RoeState::average_unchecked(prim[l], prim[r]));
            let mut wp = [[0.0; 3]; 6];
            let mut wm = [[0.0; 3]; 6];
            for k in 0..6 {
                let c = j + k;
                let q = [g[3 * c], g[3 * c + 1], g[3 * c + 2]];
                let lf = es.to_characteristic(&flux[c]);
                let lq = es.to_characteristic(&q);
                for f in 0..3 {
                    wp[k][f] = 0.5 * (lf[f] + alpha * lq[f]);
                    wm[k][f] = 0.5 * (lf[f] - alpha * lq[f]);
                }
            }
            let mut fc = [0.0; 3];
            for f in 0..3 {
                let plus = [wp[0][f], wp[1][f], wp[2][f], wp[3][f], wp[4][f]];
                let minus = [wm[5][f], wm[4][f], wm[3][f], wm[2][f], wm[1][f]];
                if let Some(rec) = rec.as_mut() {
                    rec(f, &plus);
                }
                fc[f] = scheme.reconstruct(&plus) + scheme.reconstruct(&minus);
            }
            es.to_conserved(&fc)
        };
        let per_face: Vec<[f64; 3]> = if rayon::current_num_threads() > 1 {
            (0..=n).into_par_iter().map(|j| interface(j, None)).collect()
        } else {
            (0..=n).map(|j| interface(j, None)).collect()
        };
        if let Some((t, sink)) = trace {
            for j in 1..=n {
                let mut rec = |f: usize, w: &[f64; 5]| {
                    let (_, info) = scheme.reconstruct_detailed(w);
                    sink.record(j - 1, f, t, info.omega_js, info.omega, info.op_flag);
                };
                interface(j, Some(&mut rec));
            }
        }
        Ok(per_face.into_iter().flatten().collect())
    }

    /// Advances `state` to `t_final` with SSP-RK3.
    pub fn run(&self, state: &mut [f64], t_final: f64, cfl: CflRule) -> Result<IntegrationStats> {
        self.check_len(state)?;
        time::integrate(state, t_final, |s| self.dt(s, cfl), |s, out| self.rhs(s, out))
    }

    /// As [`Solver1D::run`], recording the weights at the first stage of
    /// every `every`-th step (and the first) into `sink`.
    pub fn run_traced(
        &self,
        state: &mut [f64],
        t_final: f64,
        cfl: CflRule,
        every: usize,
        sink: &mut TraceSink,
    ) -> Result<IntegrationStats> {
        self.check_len(state)?;
        let every = every.max(1);
        // (start of this step, start of the next, steps taken, record pending)
        let clock = Cell::new((0.0, 0.0, 0usize, false));
        let sink = RefCell::new(sink);
        time::integrate(
            state,
            t_final,
            |s| {
                let dt = self.dt(s, cfl)?;
                let (_, next, step, _) = clock.get();
                clock.set((next, next + dt, step + 1, step % every == 0));
                Ok(dt)
            },
            |s, out| {
                let (t, next, step, due) = clock.get();
                if due {
                    clock.set((t, next, step, false));
                    self.rhs_traced(s, out, t, &mut sink.borrow_mut())
                } else {
                    self.rhs(s, out)
                }
            },
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::MappingKind;
    use std::f64::consts::PI;

    #[test]
    fn boundary_examples() {
        let data = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let p = apply_boundary(&data, 1, BoundaryKind::Periodic);
        assert_eq!(&p[..3], &[4.0, 5.0, 6.0]);
        assert_eq!(&p[9..], &[1.0, 2.0, 3.0]);
        let t = apply_boundary(&data, 1, BoundaryKind::Transmissive);
        assert_eq!(&t[..3], &[1.0, 1.0, 1.0]);
        assert_eq!(&t[9..], &[6.0, 6.0, 6.0]);
    }

    #[test]
    fn lf_examples() {
        let (p, m) = lf_split(&[0.3, -1.0], &[0.3, -1.0], 1.0).unwrap();
        assert_eq!(p, vec![0.3, -1.0]);
        assert_eq!(m, vec![0.0, 0.0]);
        assert_eq!(lf_flux(1.0, 0.0, 1.0, 0.0, 1.0), 1.0);
        assert_eq!(lf_flux(0.4, 0.4, 0.4, 0.4, 2.0), 0.4);
        assert!(lf_split(&[1.0], &[1.0], 0.0).is_err());
    }

    #[test]
    fn grid_validation() {
        assert!(Grid1D::new(0.0, 1.0, 5).is_err());
        assert!(Grid1D::new(1.0, 1.0, 10).is_err());
        let g = Grid1D::new(-1.0, 1.0, 4 * 10).unwrap();
        assert!((g.dx() - 0.05).abs() < 1e-16);
    }

    #[test]
    fn free_stream_euler() {
        let grid = Grid1D::new(-1.0, 1.0, 20).unwrap();
        let q = euler::conserved_1d(1.0, 0.7, 1.0);
        let state: Vec<f64> = (0..20).flat_map(|_| q).collect();
        for scheme in Scheme::catalogue() {
            let s = Solver1D::new(grid, Equation1D::Euler, scheme, BoundaryKind::Periodic).unwrap();
            let mut out = vec![1.0; state.len()];
            s.rhs(&state, &mut out).unwrap();
            assert!(out.iter().all(|v| v.abs() < 1e-12), "{scheme}");
        }
    }

    #[test]
    fn advection_derivative_converges() {
        let err = |n: usize| {
            let grid = Grid1D::new(-1.0, 1.0, n).unwrap();
            let h = grid.dx();
            // exact cell averages of sin(πx)
            let state: Vec<f64> = (0..n)
                .map(|i| {
                    let (a, b) = (grid.edge(i), grid.edge(i + 1));
                    ((PI * a).cos() - (PI * b).cos()) / (PI * h)
                })
                .collect();
            let s = Solver1D::new(
                grid,
                Equation1D::Advection { speed: 1.0 },
                Scheme::lop(MappingKind::M),
                BoundaryKind::Periodic,
            )
            .unwrap();
            let mut out = vec![0.0; n];
            s.rhs(&state, &mut out).unwrap();
            (0..n)
                .map(|i| {
                    let (a, b) = (grid.edge(i), grid.edge(i + 1));
                    let exact = -((PI * b).sin() - (PI * a).sin()) / h;
                    (out[i] - exact).abs()
                })
                .fold(0.0, f64::max)
        };
        let order = (err(80) / err(160)).log2();
        assert!(order > 4.7, "order {order}");
    }

    #[test]
    fn trace_records_one_row_per_cell() {
        let grid = Grid1D::new(-1.0, 1.0, 16).unwrap();
        let state: Vec<f64> = grid.centres().iter().map(|x| (PI * x).sin()).collect();
        let s = Solver1D::new(
            grid,
            Equation1D::Advection { speed: 1.0 },
            Scheme::lop(MappingKind::M),
            BoundaryKind::Periodic,
        )
        .unwrap();
        let mut sink = TraceSink::enabled();
        let mut out = vec![0.0; 16];
        s.rhs_traced(&state, &mut out, 0.5, &mut sink).unwrap();
        assert_eq!(sink.len(), 16);
        let mut plain = vec![0.0; 16];
        s.rhs(&state, &mut plain).unwrap();
        assert_eq!(out, plain);
    }
}
