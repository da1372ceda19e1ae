//! Ideal-gas Euler equations: state conversions, fluxes and the
//! Roe-averaged characteristic eigensystems in 1D and 2D.

use crate::error::{Error, Result};

pub const GAMMA: f64 = 1.4;

/// Primitive 1D state `(ρ, u, p)` to conserved `(ρ, ρu, E)`.
#[inline]
pub fn conserved_1d(rho: f64, u: f64, p: f64) -> [f64; 3] {
    [rho, rho * u, p / (GAMMA - 1.0) + 0.5 * rho * u * u]
}

#[inline]
pub fn primitive_1d(q: &[f64; 3]) -> [f64; 3] {
    let u = q[1] / q[0];
    [q[0], u, (GAMMA - 1.0) * (q[2] - 0.5 * q[0] * u * u)]
}

#[inline]
pub fn flux_1d(q: &[f64; 3]) -> [f64; 3] {
    let [rho, u, p] = primitive_1d(q);
    [rho * u, rho * u * u + p, u * (q[2] + p)]
}

/// Primitive 2D state `(ρ, u, v, p)` to conserved `(ρ, ρu, ρv, E)`.
#[inline]
pub fn conserved_2d(rho: f64, u: f64, v: f64, p: f64) -> [f64; 4] {
    [
        rho,
        rho * u,
        rho * v,
        p / (GAMMA - 1.0) + 0.5 * rho * (u * u + v * v),
    ]
}

#[inline]
pub fn primitive_2d(q: &[f64; 4]) -> [f64; 4] {
    let u = q[1] / q[0];
    let v = q[2] / q[0];
    [q[0], u, v, (GAMMA - 1.0) * (q[3] - 0.5 * q[0] * (u * u + v * v))]
}

/// x-direction flux of a 2D state.
#[inline]
pub fn flux_x_2d(q: &[f64; 4]) -> [f64; 4] {
    let [rho, u, v, p] = primitive_2d(q);
    [rho * u, rho * u * u + p, rho * u * v, u * (q[3] + p)]
}

#[inline]
pub fn sound_speed(rho: f64, p: f64) -> f64 {
    (GAMMA * p / rho).sqrt()
}

pub fn check_admissible(rho: f64, p: f64, location: impl FnOnce() -> String) -> Result<()> {
    if rho > 0.0 && p > 0.0 && rho.is_finite() && p.is_finite() {
        Ok(())
    } else {
        Err(Error::Inadmissible {
            location: location(),
            detail: format!("density {rho:e}, pressure {p:e}"),
        })
    }
}

/// Roe average of two admissible states in terms of `(u, v, H)`; pass
/// `v = 0` in 1D.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoeState {
    pub u: f64,
    pub v: f64,
    pub h: f64,
    pub c: f64,
}

impl RoeState {
    /// `left`/`right` are `(ρ, u, v, p)`.
    pub fn average(left: [f64; 4], right: [f64; 4]) -> Result<Self> {
        let [rl, ul, vl, pl] = left;
        let [rr, ur, vr, pr] = right;
        check_admissible(rl, pl, || "left state".into())?;
        check_admissible(rr, pr, || "right state".into())?;
        let roe = Self::average_unchecked(left, right);
        if roe.c > 0.0 && roe.c.is_finite() {
            Ok(roe)
        } else {
            Err(Error::Inadmissible {
                location: "Roe average".into(),
                detail: format!("sound speed {} from u=({ul},{ur}) v=({vl},{vr})", roe.c),
            })
        }
    }

    #[inline]
    pub(crate) fn average_unchecked(left: [f64; 4], right: [f64; 4]) -> Self {
        let [rl, ul, vl, pl] = left;
        let [rr, ur, vr, pr] = right;
        let sl = rl.sqrt();
        let sr = rr.sqrt();
        let hl = GAMMA / (GAMMA - 1.0) * pl / rl + 0.5 * (ul * ul + vl * vl);
        let hr = GAMMA / (GAMMA - 1.0) * pr / rr + 0.5 * (ur * ur + vr * vr);
        let inv = 1.0 / (sl + sr);
        let u = (sl * ul + sr * ur) * inv;
        let v = (sl * vl + sr * vr) * inv;
        let h = (sl * hl + sr * hr) * inv;
        let c = ((GAMMA - 1.0) * (h - 0.5 * (u * u + v * v))).sqrt();
        RoeState { u, v, h, c }
    }
}

/// Left and right eigenvector matrices; rows of `left` are left
/// eigenvectors, columns of `right` right eigenvectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigensystem<const M: usize> {
    pub left: [[f64; M]; M],
    pub right: [[f64; M]; M],
    pub eigenvalues: [f64; M],
}

impl<const M: usize> Eigensystem<M> {
    #[inline(always)]
    pub fn to_characteristic(&self, q: &[f64; M]) -> [f64; M] {
        let mut w = [0.0; M];
        for (k, row) in self.left.iter().enumerate() {
            let mut s = 0.0;
            for m in 0..M {
                s += row[m] * q[m];
            }
            w[k] = s;
        }
        w
    }

    #[inline(always)]
    pub fn to_conserved(&self, w: &[f64; M]) -> [f64; M] {
        let mut q = [0.0; M];
        for (m, row) in self.right.iter().enumerate() {
            let mut s = 0.0;
            for k in 0..M {
                s += row[k] * w[k];
            }
            q[m] = s;
        }
        q
    }
}

/// 1D eigensystem at a Roe state.
pub fn eigensystem_1d(roe: &RoeState) -> Eigensystem<3> {
    let RoeState { u, h, c, .. } = *roe;
    let b1 = (GAMMA - 1.0) / (c * c);
    let b2 = 0.5 * b1 * u * u;
    Eigensystem {
        left: [
            [0.5 * (b2 + u / c), -0.5 * (b1 * u + 1.0 / c), 0.5 * b1],
            [1.0 - b2, b1 * u, -b1],
            [0.5 * (b2 - u / c), -0.5 * (b1 * u - 1.0 / c), 0.5 * b1],
        ],
        right: [
            [1.0, 1.0, 1.0],
            [u - c, u, u + c],
            [h - u * c, 0.5 * u * u, h + u * c],
        ],
        eigenvalues: [u - c, u, u + c],
    }
}

/// Eigensystem of the x-direction flux Jacobian of the 2D system.
pub fn eigensystem_x_2d(roe: &RoeState) -> Eigensystem<4> {
    let RoeState { u, v, h, c } = *roe;
    let q2 = u * u + v * v;
    let b1 = (GAMMA - 1.0) / (c * c);
    let b2 = 0.5 * b1 * q2;
    Eigensystem {
        left: [
            [
                0.5 * (b2 + u / c),
                -0.5 * (b1 * u + 1.0 / c),
                -0.5 * b1 * v,
                0.5 * b1,
            ],
            [-v, 0.0, 1.0, 0.0],
            [1.0 - b2, b1 * u, b1 * v, -b1],
            [
                0.5 * (b2 - u / c),
                -0.5 * (b1 * u - 1.0 / c),
                -0.5 * b1 * v,
                0.5 * b1,
            ],
        ],
        right: [
            [1.0, 0.0, 1.0, 1.0],
            [u - c, 0.0, u, u + c],
            [v, 1.0, v, v],
            [h - u * c, v, 0.5 * q2, h + u * c],
        ],
        eigenvalues: [u - c, u, u, u + c],
    }
}

/// Checked characteristic basis between two 1D conserved states.
pub fn char_basis(left: &[f64; 3], right: &[f64; 3]) -> Result<Eigensystem<3>> {
    let [rl, ul, pl] = primitive_1d(left);
    let [rr, ur, pr] = primitive_1d(right);
    let roe = RoeState::average([rl, ul, 0.0, pl], [rr, ur, 0.0, pr])?;
    Ok(eigensystem_1d(&roe))
}
