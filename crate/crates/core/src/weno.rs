//! Fifth-order (r = 3) WENO reconstruction kernels.
//!
//! A five-cell window `[ū_{j-2}, …, ū_{j+2}]` is split into three
//! three-cell substencils. Each substencil yields a third-order candidate
//! value at the right interface `x_{j+1/2}`; the candidates are blended with
//! nonlinear weights built from the Jiang–Shu smoothness indicators.
//!
//! The checked API ([`CellWindow`], [`WeightTriple`], …) validates its
//! inputs. The solvers call the unchecked `*_raw` kernels directly.

use crate::error::{Error, Result};

/// Ideal linear weights of the interface reconstruction.
pub const IDEAL_WEIGHTS: [f64; 3] = [0.1, 0.6, 0.3];

/// Default regularisation of the JS weight denominator.
pub const DEFAULT_EPSILON: f64 = 1e-40;

const NORMALIZATION_TOL: f64 = 1e-12;

const THIRTEEN_TWELFTHS: f64 = 13.0 / 12.0;

// Interface candidate coefficients, one row per substencil.
const INTERFACE_COEFFS: [[f64; 3]; 3] = [
    [1.0 / 3.0, -7.0 / 6.0, 11.0 / 6.0],
    [-1.0 / 6.0, 5.0 / 6.0, 1.0 / 3.0],
    [1.0 / 3.0, 5.0 / 6.0, -1.0 / 6.0],
];

/// Five consecutive cell averages, ordered left to right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellWindow([f64; 5]);

impl CellWindow {
    pub fn new(values: [f64; 5]) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite cell average {bad}")));
        }
        Ok(CellWindow(values))
    }

    pub fn values(&self) -> &[f64; 5] {
        &self.0
    }

    /// The window mirrored about its centre cell.
    pub fn reversed(&self) -> Self {
        let v = self.0;
        CellWindow([v[4], v[3], v[2], v[1], v[0]])
    }
}

/// Three substencil weights of one global stencil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightTriple {
    w: [f64; 3],
    normalized: bool,
}

impl WeightTriple {
    pub fn unnormalized(w: [f64; 3]) -> Result<Self> {
        check_nonnegative(&w, "weight")?;
        Ok(WeightTriple {
            w,
            normalized: false,
        })
    }

    /// Weights that must sum to one within `1e-12`.
    pub fn normalized(w: [f64; 3]) -> Result<Self> {
        check_nonnegative(&w, "weight")?;
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Contract(format!(
                "normalized weights sum to {sum}, not 1"
            )));
        }
        Ok(WeightTriple {
            w,
            normalized: true,
        })
    }

    /// Divides by the sum. Fails on an all-zero triple.
    pub fn normalize(&self) -> Result<Self> {
        let sum: f64 = self.w.iter().sum();
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(Error::Contract(format!(
                "cannot normalize weights with sum {sum}"
            )));
        }
        Ok(WeightTriple {
            w: self.w.map(|x| x / sum),
            normalized: true,
        })
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.w
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn get(&self, s: usize) -> f64 {
        self.w[s]
    }
}

/// Jiang–Shu smoothness indicators `β_0, β_1, β_2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessTriple([f64; 3]);

impl SmoothnessTriple {
    pub fn new(b: [f64; 3]) -> Result<Self> {
        check_nonnegative(&b, "smoothness indicator")?;
        Ok(SmoothnessTriple(b))
    }

    pub fn values(&self) -> &[f64; 3] {
        &self.0
    }
}

/// Ideal weights and the `ε` regularisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeParams {
    pub ideal: [f64; 3],
    pub epsilon: f64,
}

impl Default for SchemeParams {
    fn default() -> Self {
        SchemeParams {
            ideal: IDEAL_WEIGHTS,
            epsilon: DEFAULT_EPSILON,
        }
    }
}

impl SchemeParams {
    pub fn with_epsilon(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(SchemeParams {
            epsilon,
            ..Default::default()
        })
    }
}

fn check_nonnegative(v: &[f64; 3], what: &str) -> Result<()> {
    for x in v {
        if !x.is_finite() || *x < 0.0 {
            return Err(Error::invalid(format!("{what} {x} is not a finite nonnegative number")));
        }
    }
    Ok(())
}

/// Third-order candidate values `u^s_{j+1/2}` of the three substencils.
pub fn substencil_values(w: &CellWindow) -> [f64; 3] {
    candidates_raw(&w.0, &INTERFACE_COEFFS)
}

pub fn smoothness_indicators(w: &CellWindow) -> SmoothnessTriple {
    SmoothnessTriple(betas_raw(&w.0))
}

/// Unnormalized `α_s = d_s / (ε + β_s)²` and normalized `ω_s`.
pub fn js_weights(b: &SmoothnessTriple, p: &SchemeParams) -> Result<(WeightTriple, WeightTriple)> {
    if !(p.epsilon > 0.0) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let alpha = js_alpha_raw(&b.0, &p.ideal, p.epsilon);
    let omega = normalize_raw(&alpha);
    Ok((
        WeightTriple::unnormalized(alpha)?,
        WeightTriple {
            w: omega,
            normalized: true,
        },
    ))
}

pub fn reconstruct_convex(omega: &WeightTriple, u: &[f64; 3]) -> Result<f64> {
    if !omega.normalized {
        return Err(Error::Contract(
            "convex combination needs normalized weights".into(),
        ));
    }
    Ok(combine_raw(&omega.w, u))
}

/// Reconstruction with the ideal weights, bypassing the smoothness indicators.
pub fn reconstruct_ideal(w: &CellWindow, p: &SchemeParams) -> Result<f64> {
    let omega = WeightTriple::normalized(p.ideal)?;
    reconstruct_convex(&omega, &substencil_values(w))
}

#[inline(always)]
pub(crate) fn candidates_raw(v: &[f64; 5], c: &[[f64; 3]; 3]) -> [f64; 3] {
    [
        c[0][0] * v[0] + c[0][1] * v[1] + c[0][2] * v[2],
        c[1][0] * v[1] + c[1][1] * v[2] + c[1][2] * v[3],
        c[2][0] * v[2] + c[2][1] * v[3] + c[2][2] * v[4],
    ]
}

#[inline(always)]
pub(crate) fn interface_candidates_raw(v: &[f64; 5]) -> [f64; 3] {
    candidates_raw(v, &INTERFACE_COEFFS)
}

#[inline(always)]
pub(crate) fn betas_raw(v: &[f64; 5]) -> [f64; 3] {
    let a0 = v[0] - 2.0 * v[1] + v[2];
    let b0 = v[0] - 4.0 * v[1] + 3.0 * v[2];
    let a1 = v[1] - 2.0 * v[2] + v[3];
    let b1 = v[1] - v[3];
    let a2 = v[2] - 2.0 * v[3] + v[4];
    let b2 = 3.0 * v[2] - 4.0 * v[3] + v[4];
    [
        THIRTEEN_TWELFTHS * a0 * a0 + 0.25 * b0 * b0,
        THIRTEEN_TWELFTHS * a1 * a1 + 0.25 * b1 * b1,
        THIRTEEN_TWELFTHS * a2 * a2 + 0.25 * b2 * b2,
    ]
}

#[inline(always)]
pub(crate) fn js_alpha_raw(b: &[f64; 3], d: &[f64; 3], eps: f64) -> [f64; 3] {
    let q0 = eps + b[0];
    let q1 = eps + b[1];
    let q2 = eps + b[2];
    [d[0] / (q0 * q0), d[1] / (q1 * q1), d[2] / (q2 * q2)]
}

/// `1 / (ε + β_s)²`, shared by every set of linear weights on one window.
#[inline(always)]
pub(crate) fn inv_sq_raw(b: &[f64; 3], eps: f64) -> [f64; 3] {
    let q0 = eps + b[0];
    let q1 = eps + b[1];
    let q2 = eps + b[2];
    [1.0 / (q0 * q0), 1.0 / (q1 * q1), 1.0 / (q2 * q2)]
}

#[inline(always)]
pub(crate) fn normalize_raw(a: &[f64; 3]) -> [f64; 3] {
    let inv = 1.0 / (a[0] + a[1] + a[2]);
    [a[0] * inv, a[1] * inv, a[2] * inv]
}

#[inline(always)]
pub(crate) fn combine_raw(w: &[f64; 3], u: &[f64; 3]) -> f64 {
    w[0] * u[0] + w[1] * u[1] + w[2] * u[2]
}

/// Linear weights of a point reconstruction. The cell-centre point has
/// negative linear weights and is handled by splitting them into two
/// positive groups, `γ = σ⁺ γ⁺ − σ⁻ γ⁻`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinearWeights {
    Positive([f64; 3]),
    Split {
        plus: [f64; 3],
        sigma_plus: f64,
        minus: [f64; 3],
        sigma_minus: f64,
    },
}

impl LinearWeights {
    fn split(gamma: [f64; 3]) -> Self {
        let plus_raw = gamma.map(|g| 0.5 * (g + 3.0 * g.abs()));
        let minus_raw = [
            plus_raw[0] - gamma[0],
            plus_raw[1] - gamma[1],
            plus_raw[2] - gamma[2],
        ];
        let sigma_plus: f64 = plus_raw.iter().sum();
        let sigma_minus: f64 = minus_raw.iter().sum();
        LinearWeights::Split {
            plus: plus_raw.map(|g| g / sigma_plus),
            sigma_plus,
            minus: minus_raw.map(|g| g / sigma_minus),
            sigma_minus,
        }
    }

    /// The signed linear weights these groups recombine to.
    pub fn effective(&self) -> [f64; 3] {
        match *self {
            LinearWeights::Positive(d) => d,
            LinearWeights::Split {
                plus,
                sigma_plus,
                minus,
                sigma_minus,
            } => [0, 1, 2].map(|s| sigma_plus * plus[s] - sigma_minus * minus[s]),
        }
    }
}

/// Substencil coefficients and linear weights for reconstructing the point
/// value at offset `xi` (in cell widths) from the centre of the middle cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointStencil {
    pub xi: f64,
    pub coeffs: [[f64; 3]; 3],
    pub weights: LinearWeights,
}

impl PointStencil {
    /// Right interface, `xi = 1/2`.
    pub fn interface() -> Self {
        PointStencil {
            xi: 0.5,
            coeffs: INTERFACE_COEFFS,
            weights: LinearWeights::Positive(IDEAL_WEIGHTS),
        }
    }

    /// Gauss–Legendre node at `xi = +√15/10`.
    pub fn gauss_outer() -> Self {
        let r = 15f64.sqrt();
        let d_edge = 71.0 * r / 5240.0;
        PointStencil {
            xi: r / 10.0,
            coeffs: [
                [1.0 / 30.0 + r / 20.0, -r / 5.0 - 1.0 / 15.0, 3.0 * r / 20.0 + 31.0 / 30.0],
                [1.0 / 30.0 - r / 20.0, 14.0 / 15.0, 1.0 / 30.0 + r / 20.0],
                [31.0 / 30.0 - 3.0 * r / 20.0, r / 5.0 - 1.0 / 15.0, 1.0 / 30.0 - r / 20.0],
            ],
            weights: LinearWeights::Positive([
                126.0 / 655.0 - d_edge,
                403.0 / 655.0,
                126.0 / 655.0 + d_edge,
            ]),
        }
    }

    /// Cell centre, `xi = 0`.
    pub fn centre() -> Self {
        PointStencil {
            xi: 0.0,
            coeffs: [
                [-1.0 / 24.0, 1.0 / 12.0, 23.0 / 24.0],
                [-1.0 / 24.0, 13.0 / 12.0, -1.0 / 24.0],
                [23.0 / 24.0, 1.0 / 12.0, -1.0 / 24.0],
            ],
            weights: LinearWeights::split([-9.0 / 80.0, 49.0 / 40.0, -9.0 / 80.0]),
        }
    }

    pub fn candidates(&self, w: &CellWindow) -> [f64; 3] {
        candidates_raw(&w.0, &self.coeffs)
    }

    /// Linear (ideal-weight) reconstruction at this point.
    pub fn linear(&self, w: &CellWindow) -> f64 {
        combine_raw(&self.weights.effective(), &self.candidates(w))
    }
}
