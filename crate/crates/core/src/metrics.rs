//! Error norms, convergence orders and oscillation measures.

use crate::error::{Error, Result};

/// `(L1, L∞)` of `numerical - exact`. `cell_size` holds one spacing per
/// axis; the L1 sum is weighted by their product.
pub fn error_norms(numerical: &[f64], exact: &[f64], cell_size: &[f64]) -> Result<(f64, f64)> {
    if numerical.len() != exact.len() {
        return Err(Error::invalid(format!(
            "shape mismatch: {} values against {} exact values",
            numerical.len(),
            exact.len()
        )));
    }
    if cell_size.is_empty() || cell_size.iter().any(|h| !(*h > 0.0)) {
        return Err(Error::invalid(format!("cell sizes must be positive, got {cell_size:?}")));
    }
    let volume: f64 = cell_size.iter().product();
    let mut sum = 0.0;
    let mut max = 0.0f64;
    for (a, b) in numerical.iter().zip(exact) {
        let d = (a - b).abs();
        sum += d;
        max = max.max(d);
    }
    Ok((volume * sum, max))
}

/// Observed order `log(e_coarse / e_fine) / log(n_fine / n_coarse)`.
pub fn convergence_order(e_coarse: f64, e_fine: f64, n_coarse: usize, n_fine: usize) -> Result<f64> {
    if !(e_coarse > 0.0 && e_fine > 0.0) || n_coarse == 0 || n_fine == 0 {
        return Err(Error::invalid(format!(
            "orders need positive errors and sizes, got ({e_coarse}, {e_fine}) on ({n_coarse}, {n_fine})"
        )));
    }
    if n_coarse == n_fine {
        return Err(Error::invalid("orders need two distinct grid sizes"));
    }
    Ok((e_coarse / e_fine).ln() / (n_fine as f64 / n_coarse as f64).ln())
}

/// Percentage by which `error` exceeds the ideal-weight `baseline`.
pub fn increased_errors(error: f64, baseline: f64) -> Result<f64> {
    if !(baseline > 0.0) {
        return Err(Error::invalid(format!("baseline error must be positive, got {baseline}")));
    }
    Ok((error - baseline) / baseline * 100.0)
}

/// Largest excursion of `field` outside `[lower, upper]`; zero when inside.
pub fn overshoot_metric(field: &[f64], lower: f64, upper: f64) -> f64 {
    field
        .iter()
        .fold(0.0f64, |acc, &v| acc.max(v - upper).max(lower - v))
}

/// Largest deviation of `field` from its centred moving average over
/// `2 * half_width + 1` points; only points with a full window count.
pub fn oscillation_amplitude(field: &[f64], half_width: usize) -> f64 {
    let w = 2 * half_width + 1;
    if field.len() < w {
        return 0.0;
    }
    let mut worst = 0.0f64;
    for i in half_width..field.len() - half_width {
        let mean = field[i - half_width..=i + half_width].iter().sum::<f64>() / w as f64;
        worst = worst.max((field[i] - mean).abs());
    }
    worst
}

/// Averages of a fine uniform-grid solution over the cells of a coarser
/// uniform grid on the same interval, by exact overlap integration of the
/// piecewise-constant fine data.
pub fn restrict_uniform(fine: &[f64], coarse_cells: usize) -> Result<Vec<f64>> {
    let nf = fine.len();
    if coarse_cells == 0 || coarse_cells > nf {
        return Err(Error::invalid(format!(
            "cannot restrict {nf} cells onto {coarse_cells}"
        )));
    }
    // work in units of one fine cell
    let ratio = nf as f64 / coarse_cells as f64;
    let mut out = Vec::with_capacity(coarse_cells);
    for k in 0..coarse_cells {
        let (lo, hi) = (k as f64 * ratio, (k + 1) as f64 * ratio);
        let first = lo.floor() as usize;
        let last = (hi.ceil() as usize).min(nf);
        let mut acc = 0.0;
        for (j, v) in fine.iter().enumerate().take(last).skip(first) {
            let overlap = hi.min((j + 1) as f64) - lo.max(j as f64);
            if overlap > 0.0 {
                acc += overlap * v;
            }
        }
        out.push(acc / ratio);
    }
    Ok(out)
}

/// One grid level of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub cells: Vec<usize>,
    pub l1: f64,
    pub linf: f64,
    pub l1_order: Option<f64>,
    pub linf_order: Option<f64>,
    pub chi1: Option<f64>,
    pub chi_inf: Option<f64>,
}

impl ErrorRow {
    /// Cells along the first axis, used for orders.
    pub fn n(&self) -> usize {
        self.cells[0]
    }
}

/// Errors of one scheme over a sequence of grid levels.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ErrorReport {
    pub scheme: String,
    pub rows: Vec<ErrorRow>,
}

impl ErrorReport {
    pub fn new(scheme: impl Into<String>) -> Self {
        ErrorReport {
            scheme: scheme.into(),
            rows: Vec::new(),
        }
    }

    /// Appends a level; orders come from the previous level when present.
    pub fn push(&mut self, cells: Vec<usize>, l1: f64, linf: f64) -> Result<()> {
        if cells.is_empty() {
            return Err(Error::invalid("a grid level needs at least one axis"));
        }
        let (l1_order, linf_order) = match self.rows.last() {
            Some(prev) => (
                order_or_none(prev.l1, l1, prev.n(), cells[0]),
                order_or_none(prev.linf, linf, prev.n(), cells[0]),
            ),
            None => (None, None),
        };
        self.rows.push(ErrorRow {
            cells,
            l1,
            linf,
            l1_order,
            linf_order,
            chi1: None,
            chi_inf: None,
        });
        Ok(())
    }

    /// Fills the increased errors against an ideal-weight report with the
    /// same levels.
    pub fn with_baseline(mut self, baseline: &ErrorReport) -> Result<Self> {
        if baseline.rows.len() != self.rows.len() {
            return Err(Error::invalid("baseline report has a different number of levels"));
        }
        for (row, base) in self.rows.iter_mut().zip(&baseline.rows) {
            if row.cells != base.cells {
                return Err(Error::invalid(format!(
                    "baseline level {:?} does not match {:?}",
                    base.cells, row.cells
                )));
            }
            row.chi1 = Some(increased_errors(row.l1, base.l1)?);
            row.chi_inf = Some(increased_errors(row.linf, base.linf)?);
        }
        Ok(self)
    }
}

fn order_or_none(e_coarse: f64, e_fine: f64, n_coarse: usize, n_fine: usize) -> Option<f64> {
    convergence_order(e_coarse, e_fine, n_coarse, n_fine).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_examples() {
        let u = [1.0, 2.0, 3.0];
        assert_eq!(error_norms(&u, &u, &[0.1]).unwrap(), (0.0, 0.0));
        let v = [1.5, 2.5, 3.5];
        let (l1, linf) = error_norms(&v, &u, &[0.1]).unwrap();
        assert!((l1 - 0.15).abs() < 1e-15 && linf == 0.5);
        let (l1, _) = error_norms(&v, &u, &[0.1, 0.2]).unwrap();
        assert!((l1 - 0.03).abs() < 1e-15);
        assert!(error_norms(&u, &v[..2], &[0.1]).is_err());
    }

    #[test]
    fn order_examples() {
        assert!((convergence_order(1.0, 1.0 / 32.0, 40, 80).unwrap() - 5.0).abs() < 1e-12);
        let p = convergence_order(2.05111e-5, 2.71152e-6, 40, 60).unwrap();
        assert!((p - 4.9905).abs() < 1e-4, "{p}");
        assert_eq!(convergence_order(1e-3, 1e-3, 40, 80).unwrap(), 0.0);
        assert!(convergence_order(0.0, 1e-3, 40, 80).is_err());
        assert!(convergence_order(1e-3, 1e-4, 40, 40).is_err());
    }

    #[test]
    fn increased_error_examples() {
        assert_eq!(increased_errors(2.0, 2.0).unwrap(), 0.0);
        assert_eq!(increased_errors(4.0, 2.0).unwrap(), 100.0);
        let chi = increased_errors(1.53437e-3, 9.39243e-4).unwrap();
        assert_eq!(chi.round(), 63.0);
        assert!(increased_errors(1.0, 0.0).is_err());
    }

    #[test]
    fn overshoot_examples() {
        assert_eq!(overshoot_metric(&[0.0, 0.5, 1.0], 0.0, 1.0), 0.0);
        assert!((overshoot_metric(&[0.2, 1.02], 0.0, 1.0) - 0.02).abs() < 1e-15);
        assert!((overshoot_metric(&[-0.05, 1.02], 0.0, 1.0) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn oscillation_of_smooth_and_wiggly_data() {
        let line: Vec<f64> = (0..20).map(|i| 0.5 * i as f64).collect();
        assert!(oscillation_amplitude(&line, 2) < 1e-14);
        let wiggle: Vec<f64> = (0..20).map(|i| if i % 2 == 0 { 0.1 } else { -0.1 }).collect();
        assert!(oscillation_amplitude(&wiggle, 1) > 0.1);
        assert_eq!(oscillation_amplitude(&[1.0], 1), 0.0);
    }

    #[test]
    fn restriction_preserves_means() {
        let fine: Vec<f64> = (0..10).map(|i| i as f64).collect();
        assert_eq!(restrict_uniform(&fine, 5).unwrap(), vec![0.5, 2.5, 4.5, 6.5, 8.5]);
        let r = restrict_uniform(&fine, 3).unwrap();
        let total: f64 = r.iter().sum::<f64>() * 10.0 / 3.0;
        assert!((total - 45.0).abs() < 1e-12);
        assert!((r[0] - (0.0 + 1.0 + 2.0 + 3.0 / 3.0) / (10.0 / 3.0)).abs() < 1e-12);
        assert!(restrict_uniform(&fine, 11).is_err());
    }

    #[test]
    fn report_orders_and_baseline() {
        let mut r = ErrorReport::new("x");
        r.push(vec![40], 1.0, 2.0).unwrap();
        r.push(vec![80], 1.0 / 32.0, 2.0 / 16.0).unwrap();
        assert_eq!(r.rows[0].l1_order, None);
        assert!((r.rows[1].l1_order.unwrap() - 5.0).abs() < 1e-12);
        assert!((r.rows[1].linf_order.unwrap() - 4.0).abs() < 1e-12);
        let mut base = ErrorReport::new("ilw");
        base.push(vec![40], 0.5, 1.0).unwrap();
        base.push(vec![80], 1.0 / 64.0, 1.0 / 16.0).unwrap();
        let r = r.with_baseline(&base).unwrap();
        assert_eq!(r.rows[0].chi1, Some(100.0));
        assert_eq!(r.rows[1].chi_inf, Some(100.0));
    }
}
