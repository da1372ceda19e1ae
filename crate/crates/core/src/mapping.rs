//! Mapping functions `g_s(ω)` of the mapped WENO family.
//!
//! Every map is parameterised by the ideal weight `d_s` of its substencil,
//! fixes `0`, `d_s` and `1`, and is non-decreasing on `[0, 1]`.

use std::fmt;

use crate::error::{Error, Result};

/// Parameters of the approximate-constant mapping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcmParams {
    pub a: f64,
    pub k: i32,
    pub delta: f64,
    /// Lower transition point is `cfs_factor * d_s`.
    pub cfs_factor: f64,
    /// Upper transition point is `1 - (1 - d_s) * cfs_upper_factor`.
    pub cfs_upper_factor: f64,
}

impl Default for AcmParams {
    fn default() -> Self {
        AcmParams {
            a: 20.0,
            k: 2,
            delta: 1e-6,
            cfs_factor: 0.1,
            cfs_upper_factor: 0.1,
        }
    }
}

/// Which mapping to apply to the JS weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MappingKind {
    /// `g(ω) = ω`; plain WENO-JS.
    Identity,
    /// Henrick et al.
    M,
    /// Piecewise polynomial of order `k`.
    Pm { k: u32 },
    /// Improved mapping `IM(k, A)`.
    Im { k: u32, a: f64 },
    Ppm5,
    Rm260,
    Acm(AcmParams),
}

/// Flatness order of a map at `ω = d_s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlatnessOrder {
    None,
    Finite(u32),
    Infinite,
}

impl MappingKind {
    pub const PM6: MappingKind = MappingKind::Pm { k: 6 };
    pub const IM_2_01: MappingKind = MappingKind::Im { k: 2, a: 0.1 };

    pub fn acm() -> Self {
        MappingKind::Acm(AcmParams::default())
    }

    /// The six mapped families with their recommended parameters.
    pub fn standard_family() -> [MappingKind; 6] {
        [
            MappingKind::M,
            MappingKind::PM6,
            MappingKind::IM_2_01,
            MappingKind::Ppm5,
            MappingKind::Rm260,
            MappingKind::acm(),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            MappingKind::Pm { k } if k == 0 || k % 2 != 0 => {
                Err(Error::invalid(format!("PM order k must be even and positive, got {k}")))
            }
            MappingKind::Im { k, a } => {
                if k == 0 || k % 2 != 0 {
                    Err(Error::invalid(format!("IM order k must be even and positive, got {k}")))
                } else if !(a > 0.0) || !a.is_finite() {
                    Err(Error::invalid(format!("IM amplitude A must be positive, got {a}")))
                } else {
                    Ok(())
                }
            }
            MappingKind::Acm(p) => {
                if !(p.a > 0.0) || !(p.delta > 0.0) {
                    Err(Error::invalid("ACM requires A > 0 and delta > 0"))
                } else if !(0.0..1.0).contains(&p.cfs_factor)
                    || !(0.0..1.0).contains(&p.cfs_upper_factor)
                {
                    Err(Error::invalid("ACM transition factors must lie in [0, 1)"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// `n_X`: number of vanishing derivatives at `ω = d_s`.
    pub fn flatness_order(&self) -> FlatnessOrder {
        match *self {
            MappingKind::Identity => FlatnessOrder::None,
            MappingKind::M => FlatnessOrder::Finite(2),
            MappingKind::Pm { k } | MappingKind::Im { k, .. } => FlatnessOrder::Finite(k),
            MappingKind::Ppm5 => FlatnessOrder::Finite(4),
            // listed as "3, 4"; the rational form is flatter still
            MappingKind::Rm260 => FlatnessOrder::Finite(4),
            MappingKind::Acm(_) => FlatnessOrder::Infinite,
        }
    }

    /// Short scheme label, e.g. `M`, `PM6`, `IM(2, 0.1)`.
    pub fn label(&self) -> String {
        match *self {
            MappingKind::Identity => "JS".into(),
            MappingKind::M => "M".into(),
            MappingKind::Pm { k } => format!("PM{k}"),
            MappingKind::Im { k, a } => format!("IM({k}, {a})"),
            MappingKind::Ppm5 => "PPM5".into(),
            MappingKind::Rm260 => "RM(260)".into(),
            MappingKind::Acm(_) => "ACM".into(),
        }
    }

    /// `g_s(ω)` for `ω ∈ [0, 1]`; rejects anything else.
    pub fn map_weight(&self, d: f64, omega: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&omega) {
            return Err(Error::Domain {
                value: omega,
                domain: "[0, 1]",
            });
        }
        if !(d > 0.0 && d < 1.0) {
            return Err(Error::Domain {
                value: d,
                domain: "(0, 1) for the ideal weight",
            });
        }
        Ok(self.apply(d, omega))
    }

    /// Unchecked `g_s(ω)`.
    #[inline(always)]
    pub fn apply(&self, d: f64, w: f64) -> f64 {
        match *self {
            MappingKind::Identity => w,
            MappingKind::M => {
                w * (d + d * d - 3.0 * d * w + w * w) / (d * d + (1.0 - 2.0 * d) * w)
            }
            // d - d cancellation at w = 0 can leave a tiny negative value
            MappingKind::Pm { k } => pm(k, d, w).max(0.0),
            MappingKind::Im { k, a } => {
                let x = w - d;
                let xk = x.powi(k as i32);
                (d + xk * x * a / (xk * a + w * (1.0 - w))).max(0.0)
            }
            MappingKind::Ppm5 => {
                if w <= d {
                    let am1 = w / d - 1.0;
                    d * (1.0 + am1.powi(5))
                } else {
                    let b = 1.0 / (d - 1.0);
                    d + b.powi(4) * (w - d).powi(5)
                }
            }
            MappingKind::Rm260 => {
                let a0 = d.powi(6);
                let a1 = -7.0 * d.powi(5);
                let a2 = 21.0 * d.powi(4);
                let a3 = (1.0 - d).powi(6) - (a0 + a1 + a2);
                (d + (w - d).powi(7) / (a0 + w * (a1 + w * (a2 + w * a3)))).max(0.0)
            }
            MappingKind::Acm(p) => {
                if w <= d {
                    let cfs = d * p.cfs_factor;
                    0.5 * d * sgm(w - cfs, p.delta, p.a, p.k) + 0.5 * d
                } else {
                    let cfs_upper = 1.0 - (1.0 - d) * p.cfs_upper_factor;
                    0.5 * (1.0 - d) * sgm(w - cfs_upper, p.delta, p.a, p.k) + 0.5 * (1.0 + d)
                }
            }
        }
    }
}

impl fmt::Display for MappingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[inline(always)]
fn pm(k: u32, d: f64, w: f64) -> f64 {
    let kp1 = (k + 1) as f64;
    let (c1, c2) = if w <= d {
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        (sign * kp1 / d.powi(k as i32 + 1), d / kp1)
    } else {
        (
            -kp1 / (1.0 - d).powi(k as i32 + 1),
            (d - (k as f64 + 2.0)) / kp1,
        )
    };
    c1 * (w - d).powi(k as i32 + 1) * (w + c2) + d
}

/// Smoothed sign function of the approximate-constant mapping.
pub fn sgm(x: f64, delta: f64, a: f64, k: i32) -> f64 {
    let ax = x.abs();
    if ax >= delta {
        x / ax
    } else {
        x / ((a * (delta * delta - x * x)).powi(k + 3) + ax)
    }
}
