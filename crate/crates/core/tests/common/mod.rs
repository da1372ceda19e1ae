//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::f64::consts::PI;

use lopweno::euler;
use lopweno::solver1d::{BoundaryKind, Equation1D, Grid1D, Solver1D};
use lopweno::solver2d::{Grid2D, Solver2D};
use lopweno::time::{ssp_rk3_step, CflRule};
use lopweno::Scheme;

/// Largest relative drift of the per-field sums after `steps` steps.
pub fn sum_drift(before: &[f64], after: &[f64], fields: usize) -> f64 {
    (0..fields)
        .map(|m| {
            let s0: f64 = before.iter().skip(m).step_by(fields).sum();
            let s1: f64 = after.iter().skip(m).step_by(fields).sum();
            (s1 - s0).abs() / s0.abs().max(1.0)
        })
        .fold(0.0, f64::max)
}

pub fn step_1d(solver: &Solver1D, state: &mut [f64], steps: usize, cfl: f64) {
    for _ in 0..steps {
        let dt = solver.dt(state, CflRule::Fixed(cfl)).unwrap();
        ssp_rk3_step(state, dt, |u, out| solver.rhs(u, out)).unwrap();
    }
}

pub fn step_2d(solver: &Solver2D, state: &mut [f64], steps: usize, cfl: f64) {
    for _ in 0..steps {
        let dt = solver.dt(state, CflRule::Fixed(cfl)).unwrap();
        ssp_rk3_step(state, dt, |u, out| solver.rhs(u, out)).unwrap();
    }
}

/// Periodic 1D Euler data with a smooth density and pressure wave.
pub fn euler_wave_1d(n: usize) -> (Grid1D, Vec<f64>) {
    let grid = Grid1D::new(-1.0, 1.0, n).unwrap();
    let state = grid
        .centres()
        .iter()
        .flat_map(|&x| euler::conserved_1d(1.0 + 0.2 * (PI * x).sin(), 0.5, 1.0 + 0.1 * (PI * x).cos()))
        .collect();
    (grid, state)
}

/// Conserved-sum drift over 100 periodic steps, for scalar advection and
/// 1D Euler.
pub fn conservation_drift_1d(scheme: Scheme) -> f64 {
    let grid = Grid1D::new(-1.0, 1.0, 64).unwrap();
    let adv = Solver1D::new(grid, Equation1D::Advection { speed: 1.0 }, scheme, BoundaryKind::Periodic).unwrap();
    let mut u: Vec<f64> = grid
        .centres()
        .iter()
        .map(|&x| if x.abs() < 0.4 { 1.0 } else { 0.1 * (PI * x).sin() + 0.5 })
        .collect();
    let u0 = u.clone();
    step_1d(&adv, &mut u, 100, 0.5);
    let (grid, mut q) = euler_wave_1d(64);
    let q0 = q.clone();
    let eul = Solver1D::new(grid, Equation1D::Euler, scheme, BoundaryKind::Periodic).unwrap();
    step_1d(&eul, &mut q, 100, 0.5);
    sum_drift(&u0, &u, 1).max(sum_drift(&q0, &q, 3))
}

/// Conserved-sum drift over 100 periodic 2D Euler steps.
pub fn conservation_drift_2d(scheme: Scheme) -> f64 {
    let n = 16;
    let grid = Grid2D::square(-1.0, 1.0, n).unwrap();
    let mut q: Vec<f64> = (0..grid.cells())
        .flat_map(|k| {
            let (x, y) = grid.centre(k % n, k / n);
            euler::conserved_2d(1.0 + 0.2 * (PI * (x + y)).sin(), 0.7, 0.3, 1.0 + 0.1 * (PI * x).cos())
        })
        .collect();
    let q0 = q.clone();
    let s = Solver2D::new(grid, scheme, BoundaryKind::Periodic).unwrap();
    step_2d(&s, &mut q, 100, 0.5);
    sum_drift(&q0, &q, 4)
}

/// Largest deviation from a uniform moving 2D state after 100 steps.
pub fn free_stream_error_2d(scheme: Scheme, boundary: BoundaryKind) -> f64 {
    let n = 12;
    let grid = Grid2D::new((0.0, 1.0), (0.0, 2.0), n, n).unwrap();
    let uniform = euler::conserved_2d(1.3, 0.4, -0.25, 2.0);
    let mut q: Vec<f64> = (0..grid.cells()).flat_map(|_| uniform).collect();
    let s = Solver2D::new(grid, scheme, boundary).unwrap();
    step_2d(&s, &mut q, 100, 0.6);
    q.chunks_exact(4)
        .flat_map(|c| c.iter().zip(&uniform).map(|(a, b)| (a - b).abs() / b.abs().max(1.0)))
        .fold(0.0, f64::max)
}
