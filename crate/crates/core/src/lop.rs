//! Locally order-preserving (LOP) adaptation of a mapped WENO scheme.
//!
//! A global stencil is an OP point when the mapping keeps the ordering of
//! the JS weights of every pair of substencils. At OP points the mapped
//! weights are used; elsewhere the stencil falls back to the unnormalized JS
//! weights, which preserve the ordering trivially.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::mapping::MappingKind;
use crate::weno::WeightTriple;

/// Default tolerance under which two weights count as equal.
pub const DEFAULT_TIE_TOL: f64 = 1e-14;

/// How a pair with equal ordering products is classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Membership {
    /// A vanishing product with distinct JS weights is accepted (the mapped
    /// weights may coincide without reversing the order).
    #[default]
    Relaxed,
    /// Only strictly positive products, or exact ties in both factors, pass.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StencilClassification {
    pub is_op: bool,
    pub failing_pair: Option<(usize, usize)>,
}

/// `(ω_a − ω_b)(g_a(ω_a) − g_b(ω_b))`.
pub fn post_index(
    a: usize,
    b: usize,
    kind: &MappingKind,
    omega_js: &WeightTriple,
    d: &[f64; 3],
) -> Result<f64> {
    if a > 2 || b > 2 {
        return Err(Error::invalid(format!("substencil index out of range: ({a}, {b})")));
    }
    require_normalized(omega_js)?;
    let w = omega_js.as_array();
    let ga = kind.map_weight(d[a], w[a])?;
    let gb = kind.map_weight(d[b], w[b])?;
    Ok((w[a] - w[b]) * (ga - gb))
}

pub fn classify_stencil(
    kind: &MappingKind,
    omega_js: &WeightTriple,
    d: &[f64; 3],
    tie_tol: f64,
) -> StencilClassification {
    classify_stencil_with(kind, omega_js, d, tie_tol, Membership::Relaxed)
}

pub fn classify_stencil_with(
    kind: &MappingKind,
    omega_js: &WeightTriple,
    d: &[f64; 3],
    tie_tol: f64,
    membership: Membership,
) -> StencilClassification {
    let w = omega_js.as_array();
    let g = mapped(kind, &w, d);
    match first_failing_pair(&w, &g, tie_tol, membership) {
        None => StencilClassification {
            is_op: true,
            failing_pair: None,
        },
        Some(pair) => StencilClassification {
            is_op: false,
            failing_pair: Some(pair),
        },
    }
}

/// Mapped weights at OP points, `alpha_js` verbatim otherwise.
pub fn lop_unnormalized(
    kind: &MappingKind,
    omega_js: &WeightTriple,
    alpha_js: &WeightTriple,
    d: &[f64; 3],
    tie_tol: f64,
) -> WeightTriple {
    let (w, _) = lop_raw(
        kind,
        &omega_js.as_array(),
        &alpha_js.as_array(),
        d,
        tie_tol,
        Membership::Relaxed,
    );
    // g maps [0, 1] into [0, 1] and α is positive, so this cannot fail
    WeightTriple::unnormalized(w).expect("LOP weights are nonnegative")
}

pub fn lop_weights(
    kind: &MappingKind,
    omega_js: &WeightTriple,
    alpha_js: &WeightTriple,
    d: &[f64; 3],
    tie_tol: f64,
) -> Result<WeightTriple> {
    require_normalized(omega_js)?;
    lop_unnormalized(kind, omega_js, alpha_js, d, tie_tol).normalize()
}

fn require_normalized(w: &WeightTriple) -> Result<()> {
    if w.is_normalized() {
        Ok(())
    } else {
        Err(Error::Contract("JS weights must be normalized".into()))
    }
}

#[inline(always)]
pub(crate) fn mapped(kind: &MappingKind, w: &[f64; 3], d: &[f64; 3]) -> [f64; 3] {
    [
        kind.apply(d[0], w[0]),
        kind.apply(d[1], w[1]),
        kind.apply(d[2], w[2]),
    ]
}

#[inline(always)]
fn pair_ok(wa: f64, wb: f64, ga: f64, gb: f64, tie_tol: f64, membership: Membership) -> bool {
    let dw = wa - wb;
    let dg = ga - gb;
    let (ma, mb) = (wa.abs(), wb.abs());
    let tol = if ma <= 1.0 && mb <= 1.0 {
        tie_tol
    } else {
        tie_tol * ma.max(mb)
    };
    if dw.abs() <= tol {
        return dg.abs() <= tol;
    }
    match membership {
        Membership::Relaxed => dw * dg >= 0.0,
        Membership::Strict => dw * dg > 0.0,
    }
}

/// Pairs visited in the order `(0,1), (0,2), (1,2)`; stops at the first
/// failure.
#[inline(always)]
pub(crate) fn first_failing_pair(
    w: &[f64; 3],
    g: &[f64; 3],
    tie_tol: f64,
    membership: Membership,
) -> Option<(usize, usize)> {
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        if !pair_ok(w[a], w[b], g[a], g[b], tie_tol, membership) {
            return Some((a, b));
        }
    }
    None
}

/// Unnormalized LOP weights and the OP flag.
#[inline(always)]
pub(crate) fn lop_raw(
    kind: &MappingKind,
    w: &[f64; 3],
    alpha: &[f64; 3],
    d: &[f64; 3],
    tie_tol: f64,
    membership: Membership,
) -> ([f64; 3], bool) {
    let g = mapped(kind, w, d);
    if first_failing_pair(w, &g, tie_tol, membership).is_none() {
        (g, true)
    } else {
        (*alpha, false)
    }
}

/// One row of the real-time mapping trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MappingTraceRecord {
    pub time: f64,
    pub cell: usize,
    pub field: usize,
    pub omega_js: [f64; 3],
    pub final_weight: [f64; 3],
    pub op_flag: bool,
}

/// In-memory collector of mapping trace records. A disabled sink ignores
/// everything it is handed.
#[derive(Debug, Clone, Default)]
pub struct TraceSink {
    enabled: bool,
    records: Vec<MappingTraceRecord>,
}

impl TraceSink {
    pub const HEADER: &'static str =
        "time,cell,field,omega0_js,omega1_js,omega2_js,w0,w1,w2,op_flag";

    pub fn enabled() -> Self {
        TraceSink {
            enabled: true,
            records: Vec::new(),
        }
    }

    pub fn disabled() -> Self {
        TraceSink::default()
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled
    }

    pub fn records(&self) -> &[MappingTraceRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn record(
        &mut self,
        cell: usize,
        field: usize,
        time: f64,
        omega_js: [f64; 3],
        final_weight: [f64; 3],
        op_flag: bool,
    ) {
        if self.enabled {
            self.records.push(MappingTraceRecord {
                time,
                cell,
                field,
                omega_js,
                final_weight,
                op_flag,
            });
        }
    }

    /// Records sorted by `(time, cell, field)`.
    pub fn sorted(&self) -> Vec<MappingTraceRecord> {
        let mut out = self.records.clone();
        out.sort_by(|a, b| {
            a.time
                .total_cmp(&b.time)
                .then(a.cell.cmp(&b.cell))
                .then(a.field.cmp(&b.field))
        });
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        let mut write = || -> std::io::Result<()> {
            writeln!(out, "{}", Self::HEADER)?;
            for r in self.sorted() {
                writeln!(
                    out,
                    "{:?},{},{},{:?},{:?},{:?},{:?},{:?},{:?},{}",
                    r.time,
                    r.cell,
                    r.field,
                    r.omega_js[0],
                    r.omega_js[1],
                    r.omega_js[2],
                    r.final_weight[0],
                    r.final_weight[1],
                    r.final_weight[2],
                    u8::from(r.op_flag)
                )?;
            }
            out.flush()
        };
        write().map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weno::IDEAL_WEIGHTS;

    const D: [f64; 3] = IDEAL_WEIGHTS;

    fn nw(w: [f64; 3]) -> WeightTriple {
        WeightTriple::normalized(w).unwrap()
    }

    #[test]
    fn post_index_same_pair_is_zero() {
        let w = nw([0.2, 0.5, 0.3]);
        for s in 0..3 {
            assert_eq!(post_index(s, s, &MappingKind::M, &w, &D).unwrap(), 0.0);
        }
    }

    #[test]
    fn post_index_at_ideal_weights() {
        let v = post_index(0, 1, &MappingKind::M, &nw(D), &D).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
    }

    #[test]
    fn post_index_rejects_bad_index() {
        assert!(post_index(0, 3, &MappingKind::M, &nw(D), &D).is_err());
    }

    #[test]
    fn ideal_weights_are_op() {
        let c = classify_stencil(&MappingKind::M, &nw(D), &D, DEFAULT_TIE_TOL);
        assert!(c.is_op);
        assert_eq!(c.failing_pair, None);
    }

    #[test]
    fn identity_always_op() {
        for w in [[0.3, 0.25, 0.45], [0.0, 0.0, 1.0], [0.5, 0.5, 0.0], [1.0 / 3.0; 3]] {
            let c = classify_stencil(&MappingKind::Identity, &nw(w), &D, DEFAULT_TIE_TOL);
            assert!(c.is_op, "{w:?}");
        }
    }

    #[test]
    fn lop_branches() {
        let kind = MappingKind::M;
        let alpha = WeightTriple::unnormalized([3e40, 2.5e40, 4.5e40]).unwrap();
        let w = nw([0.3, 0.25, 0.45]);
        assert_eq!(
            lop_unnormalized(&kind, &w, &alpha, &D, DEFAULT_TIE_TOL).as_array(),
            alpha.as_array()
        );
        let out = lop_weights(&kind, &w, &alpha, &D, DEFAULT_TIE_TOL).unwrap();
        for (a, b) in out.as_array().iter().zip(w.as_array()) {
            assert!((a - b).abs() < 1e-12);
        }
        let at_ideal = lop_unnormalized(&kind, &nw(D), &alpha, &D, DEFAULT_TIE_TOL);
        for (a, b) in at_ideal.as_array().iter().zip(D) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn identity_lop_returns_js() {
        let w = nw([0.2, 0.7, 0.1]);
        let alpha = WeightTriple::unnormalized([1.0, 2.0, 3.0]).unwrap();
        let out = lop_unnormalized(&MappingKind::Identity, &w, &alpha, &D, DEFAULT_TIE_TOL);
        assert_eq!(out.as_array(), w.as_array());
    }

    #[test]
    fn strict_membership_rejects_flat_pairs() {
        // ACM maps every weight in its flat region to d_s, so two distinct JS
        // weights inside the flat regions of substencils with equal d_s would
        // produce a zero product. Emulate with equal ideal weights.
        let d = [0.3, 0.3, 0.4];
        let w = nw([0.25, 0.28, 0.47]);
        let kind = MappingKind::acm();
        let relaxed = classify_stencil_with(&kind, &w, &d, DEFAULT_TIE_TOL, Membership::Relaxed);
        let strict = classify_stencil_with(&kind, &w, &d, DEFAULT_TIE_TOL, Membership::Strict);
        assert!(relaxed.is_op);
        assert!(!strict.is_op);
        assert_eq!(strict.failing_pair, Some((0, 1)));
    }

    #[test]
    fn trace_sink_counts_and_orders() {
        let mut off = TraceSink::disabled();
        off.record(0, 0, 0.0, D, D, true);
        assert!(off.is_empty());

        let mut sink = TraceSink::enabled();
        sink.record(5, 0, 1.0, D, D, true);
        sink.record(2, 0, 1.0, D, D, false);
        sink.record(9, 0, 0.5, D, D, true);
        let order: Vec<_> = sink.sorted().iter().map(|r| r.cell).collect();
        assert_eq!(order, vec![9, 2, 5]);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.csv");
        sink.write_csv(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert_eq!(text.lines().next().unwrap(), TraceSink::HEADER);
    }

    #[test]
    fn trace_write_failure_surfaces() {
        let sink = TraceSink::enabled();
        let err = sink
            .write_csv(Path::new("/nonexistent-dir/trace.csv"))
            .unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
