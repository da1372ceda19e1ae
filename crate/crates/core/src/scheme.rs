//! Complete weight pipeline of one reconstruction: JS weights, optional
//! mapping, optional LOP adaptation.

use std::fmt;

use crate::error::Result;
use crate::lop::{self, Membership, DEFAULT_TIE_TOL};
use crate::mapping::MappingKind;
use crate::weno::{self, LinearWeights, PointStencil, SchemeParams, DEFAULT_EPSILON};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weighting {
    /// Linear weights, no smoothness indicators (WENO5-ILW).
    Ideal,
    /// Mapped JS weights; `Identity` is WENO-JS itself.
    Mapped(MappingKind),
    /// Mapped JS weights with the LOP fallback.
    Lop(MappingKind),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scheme {
    pub weighting: Weighting,
    pub epsilon: f64,
    pub membership: Membership,
    pub tie_tol: f64,
}

/// What the weight pipeline produced for one stencil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightInfo {
    pub omega_js: [f64; 3],
    pub omega: [f64; 3],
    pub op_flag: bool,
}

impl Scheme {
    pub fn new(weighting: Weighting) -> Self {
        Scheme {
            weighting,
            epsilon: DEFAULT_EPSILON,
            membership: Membership::Relaxed,
            tie_tol: DEFAULT_TIE_TOL,
        }
    }

    pub fn ilw() -> Self {
        Scheme::new(Weighting::Ideal)
    }

    pub fn js() -> Self {
        Scheme::new(Weighting::Mapped(MappingKind::Identity))
    }

    pub fn mapped(kind: MappingKind) -> Self {
        Scheme::new(Weighting::Mapped(kind))
    }

    pub fn lop(kind: MappingKind) -> Self {
        Scheme::new(Weighting::Lop(kind))
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_membership(mut self, membership: Membership) -> Self {
        self.membership = membership;
        self
    }

    pub fn validate(&self) -> Result<()> {
        SchemeParams::with_epsilon(self.epsilon)?;
        match self.weighting {
            Weighting::Ideal => Ok(()),
            Weighting::Mapped(k) | Weighting::Lop(k) => k.validate(),
        }
    }

    pub fn mapping(&self) -> Option<MappingKind> {
        match self.weighting {
            Weighting::Ideal => None,
            Weighting::Mapped(k) | Weighting::Lop(k) => Some(k),
        }
    }

    pub fn is_lop(&self) -> bool {
        matches!(self.weighting, Weighting::Lop(_))
    }

    /// The fourteen schemes compared throughout: ILW, JS, and each mapped
    /// family with and without LOP.
    pub fn catalogue() -> Vec<Scheme> {
        let mut v = vec![Scheme::ilw(), Scheme::js()];
        for k in MappingKind::standard_family() {
            v.push(Scheme::mapped(k));
            v.push(Scheme::lop(k));
        }
        v
    }

    /// Normalized nonlinear weights for smoothness indicators `beta` and
    /// positive linear weights `d`.
    #[inline(always)]
    pub fn weights(&self, beta: &[f64; 3], d: &[f64; 3]) -> [f64; 3] {
        self.weights_from_factors(&self.factors(beta), d)
    }

    /// `1 / (ε + β_s)²` for the given indicators, or zeros for ILW, which
    /// ignores them.
    #[inline(always)]
    pub fn factors(&self, beta: &[f64; 3]) -> [f64; 3] {
        match self.weighting {
            Weighting::Ideal => [0.0; 3],
            _ => weno::inv_sq_raw(beta, self.epsilon),
        }
    }

    /// [`Scheme::weights`] from precomputed [`Scheme::factors`].
    #[inline(always)]
    pub fn weights_from_factors(&self, inv: &[f64; 3], d: &[f64; 3]) -> [f64; 3] {
        let js = || [d[0] * inv[0], d[1] * inv[1], d[2] * inv[2]];
        match self.weighting {
            Weighting::Ideal => *d,
            Weighting::Mapped(MappingKind::Identity) | Weighting::Lop(MappingKind::Identity) => {
                weno::normalize_raw(&js())
            }
            Weighting::Mapped(kind) => {
                let w = weno::normalize_raw(&js());
                weno::normalize_raw(&lop::mapped(&kind, &w, d))
            }
            Weighting::Lop(kind) => {
                let alpha = js();
                let w = weno::normalize_raw(&alpha);
                let (a, _) = lop::lop_raw(&kind, &w, &alpha, d, self.tie_tol, self.membership);
                weno::normalize_raw(&a)
            }
        }
    }

    /// Like [`Scheme::weights`] but also reports the JS weights and the OP
    /// flag (always true for non-LOP schemes).
    pub fn weights_detailed(&self, beta: &[f64; 3], d: &[f64; 3]) -> WeightInfo {
        let inv = weno::inv_sq_raw(beta, self.epsilon);
        let alpha = [d[0] * inv[0], d[1] * inv[1], d[2] * inv[2]];
        let omega_js = weno::normalize_raw(&alpha);
        let (omega, op_flag) = match self.weighting {
            Weighting::Ideal => (*d, true),
            Weighting::Mapped(kind) => {
                (weno::normalize_raw(&lop::mapped(&kind, &omega_js, d)), true)
            }
            Weighting::Lop(kind) => {
                let (a, op) =
                    lop::lop_raw(&kind, &omega_js, &alpha, d, self.tie_tol, self.membership);
                (weno::normalize_raw(&a), op)
            }
        };
        WeightInfo {
            omega_js,
            omega,
            op_flag,
        }
    }

    /// Left-biased value at the right interface of the middle cell.
    #[inline(always)]
    pub fn reconstruct(&self, v: &[f64; 5]) -> f64 {
        let u = weno::interface_candidates_raw(v);
        if let Weighting::Ideal = self.weighting {
            return weno::combine_raw(&weno::IDEAL_WEIGHTS, &u);
        }
        let beta = weno::betas_raw(v);
        weno::combine_raw(&self.weights(&beta, &weno::IDEAL_WEIGHTS), &u)
    }

    pub fn reconstruct_detailed(&self, v: &[f64; 5]) -> (f64, WeightInfo) {
        let u = weno::interface_candidates_raw(v);
        let info = self.weights_detailed(&weno::betas_raw(v), &weno::IDEAL_WEIGHTS);
        (weno::combine_raw(&info.omega, &u), info)
    }

    /// Point value at `stencil.xi` for a window whose indicator
    /// [`Scheme::factors`] are already known.
    #[inline(always)]
    pub fn reconstruct_point(&self, stencil: &PointStencil, v: &[f64; 5], inv: &[f64; 3]) -> f64 {
        let u = weno::candidates_raw(v, &stencil.coeffs);
        match stencil.weights {
            LinearWeights::Positive(d) => weno::combine_raw(&self.weights_from_factors(inv, &d), &u),
            LinearWeights::Split {
                plus,
                sigma_plus,
                minus,
                sigma_minus,
            } => {
                let wp = self.weights_from_factors(inv, &plus);
                let wm = self.weights_from_factors(inv, &minus);
                sigma_plus * weno::combine_raw(&wp, &u) - sigma_minus * weno::combine_raw(&wm, &u)
            }
        }
    }

    /// Name in the `LOP-WENO-X` convention.
    pub fn name(&self) -> String {
        match self.weighting {
            Weighting::Ideal => "WENO5-ILW".into(),
            Weighting::Mapped(MappingKind::Identity) => "WENO-JS".into(),
            Weighting::Mapped(k) => format!("WENO-{}", k.label()),
            Weighting::Lop(k) => format!("LOP-WENO-{}", k.label()),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        let names: Vec<_> = Scheme::catalogue().iter().map(Scheme::name).collect();
        assert_eq!(names[0], "WENO5-ILW");
        assert_eq!(names[1], "WENO-JS");
        assert!(names.contains(&"LOP-WENO-IM(2, 0.1)".to_string()));
        assert!(names.contains(&"WENO-RM(260)".to_string()));
        assert_eq!(names.len(), 14);
    }

    #[test]
    fn identity_lop_equals_js_bitwise() {
        let js = Scheme::js();
        let lop = Scheme::lop(MappingKind::Identity);
        for v in [
            [0.0, 0.0, 0.0, 1.0, 1.0],
            [1.0, 0.3, -2.0, 4.0, 0.1],
            [0.5, 0.51, 0.52, 0.49, 0.5],
        ] {
            assert_eq!(js.reconstruct(&v).to_bits(), lop.reconstruct(&v).to_bits());
        }
    }

    #[test]
    fn mapped_weights_sum_to_one() {
        let beta = [1e-3, 2.0, 0.5];
        for s in Scheme::catalogue() {
            let w = s.weights(&beta, &weno::IDEAL_WEIGHTS);
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14, "{s}");
        }
    }

    #[test]
    fn point_reconstruction_of_constant() {
        let v = [3.0; 5];
        let beta = weno::betas_raw(&v);
        for stencil in [PointStencil::interface(), PointStencil::gauss_outer(), PointStencil::centre()] {
            for s in Scheme::catalogue() {
                let r = s.reconstruct_point(&stencil, &v, &s.factors(&beta));
                assert!((r - 3.0).abs() < 1e-14, "{s} at {}", stencil.xi);
            }
        }
    }
}
