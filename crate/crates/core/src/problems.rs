//! Test problems: initial data, exact solutions where known, and the grid,
//! boundary and time-step conventions of each.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::euler::{self, GAMMA};
use crate::solver1d::{BoundaryKind, Grid1D};
use crate::solver2d::Grid2D;
use crate::time::CflRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemId {
    /// `u_t + u_x = 0`, `u(x, 0) = sin(πx)` on `[-1, 1]`.
    Sine1D,
    /// Advection of `exp(-(x-9)^5 cos^9(π(x-9)))` on `(7.5, 10.5)`.
    HighOrderCP,
    /// Gaussian, square wave, triangle and semi-ellipse.
    Slp,
    /// Unit step on `[-1, 0]`.
    Step,
    ShuOsher,
    TitarevToro,
    DensityWave1,
    /// Density wave with critical points.
    DensityWave2,
    ShockVortex,
}

/// A state at one point: a scalar, or conserved Euler variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointState {
    Scalar(f64),
    Euler1D([f64; 3]),
    Euler2D([f64; 4]),
}

impl PointState {
    pub fn as_slice(&self) -> &[f64] {
        match self {
            PointState::Scalar(v) => std::slice::from_ref(v),
            PointState::Euler1D(q) => q,
            PointState::Euler2D(q) => q,
        }
    }

    /// The scalar itself, or the density.
    pub fn primary(&self) -> f64 {
        self.as_slice()[0]
    }
}

const SLP_Z: f64 = -0.7;
const SLP_DELTA: f64 = 0.005;
const SLP_A: f64 = 0.5;
const SLP_ALPHA: f64 = 10.0;

fn slp_beta() -> f64 {
    2f64.ln() / (36.0 * SLP_DELTA * SLP_DELTA)
}

fn slp(x: f64) -> f64 {
    let g = |z: f64| (-slp_beta() * (x - z) * (x - z)).exp();
    let f = |a: f64| (1.0 - SLP_ALPHA * SLP_ALPHA * (x - a) * (x - a)).max(0.0).sqrt();
    if (-0.8..=-0.6).contains(&x) {
        (g(SLP_Z - SLP_DELTA) + 4.0 * g(SLP_Z) + g(SLP_Z + SLP_DELTA)) / 6.0
    } else if (-0.4..=-0.2).contains(&x) {
        1.0
    } else if (0.0..=0.2).contains(&x) {
        1.0 - (10.0 * (x - 0.1)).abs()
    } else if (0.4..=0.6).contains(&x) {
        (f(SLP_A - SLP_DELTA) + 4.0 * f(SLP_A) + f(SLP_A + SLP_DELTA)) / 6.0
    } else {
        0.0
    }
}

fn high_order_cp(x: f64) -> f64 {
    let s = x - 9.0;
    (-s.powi(5) * (PI * s).cos().powi(9)).exp()
}

fn density_wave(id: ProblemId, s: f64) -> f64 {
    match id {
        ProblemId::DensityWave1 => 1.0 + 0.2 * (PI * s).sin(),
        _ => 1.0 + 0.2 * (PI * s - (PI * s).sin() / PI).sin(),
    }
}

/// Shock-vortex parameters.
pub mod shock_vortex {
    pub const EPSILON: f64 = 0.3;
    pub const RC: f64 = 0.05;
    pub const ALPHA: f64 = 0.204;
    pub const XC: f64 = 0.25;
    pub const YC: f64 = 0.5;
    pub const P_RIGHT: f64 = 1.3;
    pub const SHOCK_X: f64 = 0.5;
}

/// Pre-shock right state `(ρ, u, v, p)` from the Rankine–Hugoniot
/// expressions with the left state `(1, √γ, 0, 1)`.
pub fn shock_vortex_right_state() -> [f64; 4] {
    let g = GAMMA;
    let pr = shock_vortex::P_RIGHT;
    let rho = (g - 1.0 + (g + 1.0) * pr) / (g + 1.0 + (g - 1.0) * pr);
    let u = g.sqrt() * (1.0 - pr) / (g - 1.0 + pr * (g + 1.0)).sqrt();
    [rho, u, 0.0, pr]
}

fn shock_vortex_point(x: f64, y: f64) -> [f64; 4] {
    use shock_vortex::*;
    if x >= SHOCK_X {
        let [rho, u, v, p] = shock_vortex_right_state();
        return euler::conserved_2d(rho, u, v, p);
    }
    let (rho_l, p_l) = (1.0, 1.0);
    let r2 = ((x - XC).powi(2) + (y - YC).powi(2)) / (RC * RC);
    let e = (ALPHA * (1.0 - r2)).exp();
    let dt = -(GAMMA - 1.0) * EPSILON * EPSILON * e * e / (4.0 * ALPHA * GAMMA);
    let drho = rho_l * rho_l / ((GAMMA - 1.0) * p_l) * dt;
    let du = EPSILON * (y - YC) / RC * e;
    let dv = -EPSILON * (x - XC) / RC * e;
    let dp = GAMMA * rho_l * rho_l / ((GAMMA - 1.0) * rho_l) * dt;
    euler::conserved_2d(rho_l + drho, GAMMA.sqrt() + du, dv, p_l + dp)
}

const GAUSS5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GAUSS5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Mean of `f` over `[a, b]`: 5-point Gauss on every piece between the
/// given breakpoints, each piece further cut into `sub` equal parts.
fn piecewise_mean<const M: usize>(
    a: f64,
    b: f64,
    breaks: &[f64],
    sub: usize,
    f: &impl Fn(f64) -> [f64; M],
) -> [f64; M] {
    let mut cuts = vec![a];
    cuts.extend(breaks.iter().copied().filter(|&p| p > a && p < b));
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    let mut acc = [0.0; M];
    for piece in cuts.windows(2) {
        let h = (piece[1] - piece[0]) / sub as f64;
        for s in 0..sub {
            let lo = piece[0] + s as f64 * h;
            for (xi, w) in GAUSS5_NODES.iter().zip(GAUSS5_WEIGHTS) {
                let v = f(lo + 0.5 * h * (1.0 + xi));
                for m in 0..M {
                    acc[m] += 0.5 * h * w * v[m];
                }
            }
        }
    }
    acc.map(|v| v / (b - a))
}

impl ProblemId {
    pub const ALL: [ProblemId; 9] = [
        ProblemId::Sine1D,
        ProblemId::HighOrderCP,
        ProblemId::Slp,
        ProblemId::Step,
        ProblemId::ShuOsher,
        ProblemId::TitarevToro,
        ProblemId::DensityWave1,
        ProblemId::DensityWave2,
        ProblemId::ShockVortex,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ProblemId::Sine1D => "sine",
            ProblemId::HighOrderCP => "high-order-cp",
            ProblemId::Slp => "slp",
            ProblemId::Step => "step",
            ProblemId::ShuOsher => "shu-osher",
            ProblemId::TitarevToro => "titarev-toro",
            ProblemId::DensityWave1 => "density-wave-1",
            ProblemId::DensityWave2 => "density-wave-2",
            ProblemId::ShockVortex => "shock-vortex",
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            ProblemId::DensityWave1 | ProblemId::DensityWave2 | ProblemId::ShockVortex => 2,
            _ => 1,
        }
    }

    pub fn is_euler(&self) -> bool {
        !matches!(
            self,
            ProblemId::Sine1D | ProblemId::HighOrderCP | ProblemId::Slp | ProblemId::Step
        )
    }

    /// Number of conserved fields per cell.
    pub fn fields(&self) -> usize {
        match (self.is_euler(), self.dimension()) {
            (false, _) => 1,
            (true, 1) => 3,
            _ => 4,
        }
    }

    pub fn x_range(&self) -> (f64, f64) {
        match self {
            ProblemId::HighOrderCP => (7.5, 10.5),
            ProblemId::ShuOsher | ProblemId::TitarevToro => (-5.0, 5.0),
            ProblemId::ShockVortex => (0.0, 1.0),
            _ => (-1.0, 1.0),
        }
    }

    pub fn y_range(&self) -> Option<(f64, f64)> {
        match self {
            ProblemId::DensityWave1 | ProblemId::DensityWave2 => Some((-1.0, 1.0)),
            ProblemId::ShockVortex => Some((0.0, 1.0)),
            _ => None,
        }
    }

    pub fn boundary(&self) -> BoundaryKind {
        match self {
            ProblemId::ShuOsher | ProblemId::TitarevToro | ProblemId::ShockVortex => {
                BoundaryKind::Transmissive
            }
            _ => BoundaryKind::Periodic,
        }
    }

    pub fn default_cfl(&self) -> CflRule {
        match self {
            ProblemId::HighOrderCP | ProblemId::DensityWave1 | ProblemId::DensityWave2 => {
                CflRule::MeshPower(2.0 / 3.0)
            }
            ProblemId::TitarevToro => CflRule::Fixed(0.4),
            ProblemId::ShockVortex => CflRule::Fixed(0.5),
            _ => CflRule::Fixed(0.1),
        }
    }

    pub fn default_t_final(&self) -> f64 {
        match self {
            ProblemId::HighOrderCP => 15.0,
            ProblemId::ShuOsher => 1.8,
            ProblemId::TitarevToro => 5.0,
            ProblemId::ShockVortex => 0.35,
            _ => 2.0,
        }
    }

    pub fn default_cells(&self) -> usize {
        match self {
            ProblemId::HighOrderCP | ProblemId::ShuOsher => 300,
            ProblemId::Slp => 800,
            ProblemId::Step => 200,
            ProblemId::TitarevToro => 1500,
            ProblemId::Sine1D | ProblemId::DensityWave1 | ProblemId::DensityWave2 => 40,
            ProblemId::ShockVortex => 200,
        }
    }

    pub fn has_exact(&self) -> bool {
        !matches!(
            self,
            ProblemId::ShuOsher | ProblemId::TitarevToro | ProblemId::ShockVortex
        )
    }

    /// Positions where the initial data is discontinuous or kinked.
    fn breakpoints_x(&self) -> Vec<f64> {
        match self {
            ProblemId::Step => vec![-1.0, 0.0],
            ProblemId::Slp => vec![
                -0.8, -0.6, -0.4, -0.2, 0.0, 0.1, 0.2, 0.395, 0.4, 0.405, 0.595, 0.6, 0.605,
            ],
            ProblemId::ShuOsher => vec![-4.0],
            ProblemId::TitarevToro => vec![-4.5],
            ProblemId::ShockVortex => vec![shock_vortex::SHOCK_X],
            _ => Vec::new(),
        }
    }

    fn check_inside(&self, x: f64, y: Option<f64>) -> Result<()> {
        let inside = |v: f64, (lo, hi): (f64, f64)| {
            let tol = 1e-12 * (hi - lo);
            v >= lo - tol && v <= hi + tol
        };
        let ok = inside(x, self.x_range())
            && match (y, self.y_range()) {
                (Some(y), Some(r)) => inside(y, r),
                (None, None) => true,
                _ => false,
            };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "position ({x}, {y:?}) outside the domain of {}",
                self.name()
            )))
        }
    }

    /// Initial state at a point of a 1D problem.
    pub fn initial_point_1d(&self, x: f64) -> Result<PointState> {
        self.check_inside(x, None)?;
        Ok(self.eval_1d(x))
    }

    /// Initial state at a point of a 2D problem.
    pub fn initial_point_2d(&self, x: f64, y: f64) -> Result<PointState> {
        self.check_inside(x, Some(y))?;
        Ok(PointState::Euler2D(self.eval_2d(x, y)))
    }

    fn eval_1d(&self, x: f64) -> PointState {
        match self {
            ProblemId::Sine1D => PointState::Scalar((PI * x).sin()),
            ProblemId::HighOrderCP => PointState::Scalar(high_order_cp(x)),
            ProblemId::Slp => PointState::Scalar(slp(x)),
            ProblemId::Step => PointState::Scalar(if x <= 0.0 { 1.0 } else { 0.0 }),
            ProblemId::ShuOsher => PointState::Euler1D(if x < -4.0 {
                euler::conserved_1d(3.857143, 2.629369, 10.333333)
            } else {
                euler::conserved_1d(1.0 + 0.2 * (5.0 * x).sin(), 0.0, 1.0)
            }),
            ProblemId::TitarevToro => PointState::Euler1D(if x < -4.5 {
                euler::conserved_1d(1.515695, 0.5233346, 1.80500)
            } else {
                euler::conserved_1d(1.0 + 0.1 * (20.0 * PI * x).sin(), 0.0, 1.0)
            }),
            _ => unreachable!("1D evaluation of a 2D problem"),
        }
    }

    fn eval_2d(&self, x: f64, y: f64) -> [f64; 4] {
        match self {
            ProblemId::DensityWave1 | ProblemId::DensityWave2 => {
                euler::conserved_2d(density_wave(*self, x + y), 0.7, 0.3, 1.0)
            }
            ProblemId::ShockVortex => shock_vortex_point(x, y),
            _ => unreachable!("2D evaluation of a 1D problem"),
        }
    }

    /// Foot of the characteristic through `x` at time `t`, wrapped into
    /// the periodic domain.
    fn foot(&self, x: f64, t: f64) -> f64 {
        let (a, b) = self.x_range();
        a + (x - t - a).rem_euclid(b - a)
    }

    /// Exact state at a point, for problems with a closed-form solution.
    pub fn exact_point_1d(&self, x: f64, t: f64) -> Option<PointState> {
        if !self.has_exact() || self.dimension() != 1 {
            return None;
        }
        Some(self.eval_1d(self.foot(x, t)))
    }

    pub fn exact_point_2d(&self, x: f64, y: f64, t: f64) -> Option<PointState> {
        if !self.has_exact() || self.dimension() != 2 {
            return None;
        }
        // density waves travel with (u, v) = (0.7, 0.3)
        let s = x + y - t;
        Some(PointState::Euler2D(euler::conserved_2d(
            density_wave(*self, s),
            0.7,
            0.3,
            1.0,
        )))
    }

    fn sub_intervals(&self) -> usize {
        if *self == ProblemId::Slp {
            8
        } else {
            1
        }
    }

    /// Cell averages of the solution at time `t` (the initial data when
    /// `t = 0`), flattened cell-major.
    pub fn cell_averages_1d(&self, grid: &Grid1D, t: f64) -> Result<Vec<f64>> {
        if self.dimension() != 1 {
            return Err(Error::invalid(format!("{} is not a 1D problem", self.name())));
        }
        if t != 0.0 && !self.has_exact() {
            return Err(Error::invalid(format!("{} has no exact solution", self.name())));
        }
        let (a, b) = self.x_range();
        let shift = if self.is_euler() { 0.0 } else { t };
        let breaks: Vec<f64> = self
            .breakpoints_x()
            .iter()
            .map(|&p| a + (p + shift - a).rem_euclid(b - a))
            .collect();
        let sub = self.sub_intervals();
        let mut out = Vec::with_capacity(grid.n * self.fields());
        for i in 0..grid.n {
            let (lo, hi) = (grid.edge(i), grid.edge(i + 1));
            if self.is_euler() {
                let f = |x: f64| match self.eval_1d(x) {
                    PointState::Euler1D(q) => q,
                    _ => unreachable!(),
                };
                out.extend(piecewise_mean(lo, hi, &breaks, sub, &f));
            } else {
                let f = |x: f64| [self.eval_1d(self.foot(x, shift)).primary()];
                out.extend(piecewise_mean(lo, hi, &breaks, sub, &f));
            }
        }
        Ok(out)
    }

    /// Point values at cell centres at time `t`.
    pub fn point_values_1d(&self, grid: &Grid1D, t: f64) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(grid.n * self.fields());
        for i in 0..grid.n {
            let x = grid.centre(i);
            let v = if t == 0.0 {
                self.initial_point_1d(x)?
            } else {
                self.exact_point_1d(x, t)
                    .ok_or_else(|| Error::invalid(format!("{} has no exact solution", self.name())))?
            };
            out.extend_from_slice(v.as_slice());
        }
        Ok(out)
    }

    /// Cell averages by tensor-product 5-point Gauss quadrature, split at
    /// discontinuities normal to x.
    pub fn cell_averages_2d(&self, grid: &Grid2D, t: f64) -> Result<Vec<f64>> {
        if self.dimension() != 2 {
            return Err(Error::invalid(format!("{} is not a 2D problem", self.name())));
        }
        if t != 0.0 && !self.has_exact() {
            return Err(Error::invalid(format!("{} has no exact solution", self.name())));
        }
        let breaks = self.breakpoints_x();
        let (dx, dy) = (grid.dx(), grid.dy());
        let mut out = Vec::with_capacity(grid.cells() * 4);
        for j in 0..grid.ny {
            let ylo = grid.y.0 + j as f64 * dy;
            for i in 0..grid.nx {
                let xlo = grid.x.0 + i as f64 * dx;
                let row = |x: f64| {
                    let mut acc = [0.0; 4];
                    for (eta, w) in GAUSS5_NODES.iter().zip(GAUSS5_WEIGHTS) {
                        let y = ylo + 0.5 * dy * (1.0 + eta);
                        let q = if t == 0.0 {
                            self.eval_2d(x, y)
                        } else {
                            match self.exact_point_2d(x, y, t) {
                                Some(PointState::Euler2D(q)) => q,
                                _ => unreachable!(),
                            }
                        };
                        for m in 0..4 {
                            acc[m] += 0.5 * w * q[m];
                        }
                    }
                    acc
                };
                out.extend(piecewise_mean(xlo, xlo + dx, &breaks, 1, &row));
            }
        }
        Ok(out)
    }

    pub fn point_values_2d(&self, grid: &Grid2D, t: f64) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(grid.cells() * 4);
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let (x, y) = grid.centre(i, j);
                let v = if t == 0.0 {
                    self.initial_point_2d(x, y)?
                } else {
                    self.exact_point_2d(x, y, t)
                        .ok_or_else(|| Error::invalid(format!("{} has no exact solution", self.name())))?
                };
                out.extend_from_slice(v.as_slice());
            }
        }
        Ok(out)
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        ProblemId::ALL
            .into_iter()
            .find(|p| p.name() == key)
            .or(match key.as_str() {
                "sine1d" => Some(ProblemId::Sine1D),
                "highordercp" | "hocp" => Some(ProblemId::HighOrderCP),
                "shuosher" => Some(ProblemId::ShuOsher),
                "titarevtoro" => Some(ProblemId::TitarevToro),
                _ => None,
            })
            .ok_or_else(|| Error::invalid(format!("unknown problem '{s}'")))
    }
}
