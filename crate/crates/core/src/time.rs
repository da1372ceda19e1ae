//! Third-order SSP Runge–Kutta stepping and CFL time-step selection.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CflRule {
    Fixed(f64),
    /// CFL number `h^exponent`, with `h` the (smallest) mesh spacing.
    MeshPower(f64),
}

impl CflRule {
    pub fn number(&self, h: f64) -> Result<f64> {
        let c = match *self {
            CflRule::Fixed(c) => c,
            CflRule::MeshPower(e) => h.powf(e),
        };
        if c > 0.0 && c <= 1.0 {
            Ok(c)
        } else {
            Err(Error::invalid(format!("CFL number {c} outside (0, 1]")))
        }
    }
}

pub fn dt_1d(rule: CflRule, dx: f64, speed: f64) -> Result<f64> {
    if !(speed > 0.0) || !speed.is_finite() {
        return Err(Error::invalid(format!("wave speed must be positive, got {speed}")));
    }
    Ok(rule.number(dx)? * dx / speed)
}

pub fn dt_2d(rule: CflRule, dx: f64, dy: f64, speed_x: f64, speed_y: f64) -> Result<f64> {
    let rate = speed_x / dx + speed_y / dy;
    if !(speed_x >= 0.0 && speed_y >= 0.0 && rate > 0.0) || !rate.is_finite() {
        return Err(Error::invalid(format!(
            "wave speeds must be non-negative and not both zero, got ({speed_x}, {speed_y})"
        )));
    }
    Ok(rule.number(dx.min(dy))? / rate)
}

/// One SSP-RK3 step. `rhs` writes the tendency of its first argument into
/// the second. Fails with a divergence error naming the stage (1..=3)
/// whose result is non-finite.
pub fn ssp_rk3_step<F>(state: &mut [f64], dt: f64, mut rhs: F) -> Result<()>
where
    F: FnMut(&[f64], &mut [f64]) -> Result<()>,
{
    if !(dt > 0.0) {
        return Err(Error::invalid(format!("time step must be positive, got {dt}")));
    }
    let n = state.len();
    let mut tend = vec![0.0; n];
    let mut stage = vec![0.0; n];

    rhs(state, &mut tend)?;
    for i in 0..n {
        stage[i] = state[i] + dt * tend[i];
    }
    check_finite(&stage, 1)?;

    rhs(&stage, &mut tend)?;
    for i in 0..n {
        stage[i] = 0.75 * state[i] + 0.25 * stage[i] + 0.25 * dt * tend[i];
    }
    check_finite(&stage, 2)?;

    rhs(&stage, &mut tend)?;
    for i in 0..n {
        state[i] = state[i] / 3.0 + 2.0 / 3.0 * stage[i] + 2.0 / 3.0 * dt * tend[i];
    }
    check_finite(state, 3)
}

fn check_finite(v: &[f64], stage: usize) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        None => Ok(()),
        Some(i) => Err(Error::Divergence {
            location: format!("RK stage {stage}, entry {i}"),
        }),
    }
}

/// Summary of a completed integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationStats {
    pub steps: usize,
    pub time: f64,
}

/// Advances `state` from `t = 0` to `t_final`. `dt_of` picks the step for
/// the current state; the last step is clamped to land on `t_final`.
pub fn integrate<D, F>(
    state: &mut [f64],
    t_final: f64,
    mut dt_of: D,
    mut rhs: F,
) -> Result<IntegrationStats>
where
    D: FnMut(&[f64]) -> Result<f64>,
    F: FnMut(&[f64], &mut [f64]) -> Result<()>,
{
    if !(t_final >= 0.0) {
        return Err(Error::invalid(format!("t_final must be non-negative, got {t_final}")));
    }
    let mut t = 0.0;
    let mut steps = 0;
    while t < t_final {
        let mut dt = dt_of(state)?;
        if t + dt >= t_final || t_final - (t + dt) < 1e-12 * t_final {
            dt = t_final - t;
        }
        ssp_rk3_step(state, dt, &mut rhs).map_err(|e| match e {
            Error::Divergence { location } => Error::Divergence {
                location: format!("t = {t:.6e}, step {}: {location}", steps + 1),
            },
            Error::Inadmissible { location, detail } => Error::Inadmissible {
                location: format!("t = {t:.6e}, step {}: {location}", steps + 1),
                detail,
            },
            other => other,
        })?;
        steps += 1;
        if t + dt >= t_final {
            t = t_final;
        } else {
            t += dt;
        }
    }
    Ok(IntegrationStats { steps, time: t })
}
