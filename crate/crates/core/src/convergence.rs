//! Observed-order estimation from error sequences on geometric grids.

use serde::Serialize;

/// Errors at or below this level are treated as exact zeros (round-off).
pub const EXACT_FLOOR: f64 = 1e-9;

/// Minimum least-squares log-log slope accepted as first-order convergence.
pub const MIN_ORDER: f64 = 0.9;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Row {
    pub h: f64,
    pub err: f64,
    /// Local order from the previous row, `ln(e_prev/e) / ln(h_prev/h)`.
    pub est_order: Option<f64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct OrderStudy {
    pub rows: Vec<Row>,
    /// Least-squares slope of `ln err` against `ln h` over rows above the floor.
    pub slope: Option<f64>,
    pub max_err: f64,
    /// Every error is at or below [`EXACT_FLOOR`].
    pub exact: bool,
}

impl OrderStudy {
    pub fn new(hs: &[f64], errs: &[f64]) -> Self {
        Self::with_floor(hs, errs, EXACT_FLOOR)
    }

    pub fn with_floor(hs: &[f64], errs: &[f64], floor: f64) -> Self {
        assert_eq!(hs.len(), errs.len());
        let mut rows = Vec::with_capacity(hs.len());
        for i in 0..hs.len() {
            let est_order = (i > 0 && errs[i] > floor && errs[i - 1] > floor)
                .then(|| (errs[i - 1] / errs[i]).ln() / (hs[i - 1] / hs[i]).ln());
            rows.push(Row { h: hs[i], err: errs[i], est_order });
        }
        let max_err = errs.iter().copied().fold(0.0, f64::max);
        let usable: Vec<(f64, f64)> = hs
            .iter()
            .zip(errs)
            .filter(|(_, &e)| e > floor)
            .map(|(&h, &e)| (h.ln(), e.ln()))
            .collect();
        OrderStudy { rows, slope: log_log_slope(&usable), max_err, exact: max_err <= floor }
    }

    /// Exact, or first order with slope at least `min_order`.
    pub fn passes(&self, min_order: f64) -> bool {
        self.exact || self.slope.is_some_and(|s| s >= min_order)
    }

    pub fn final_err(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.err)
    }

    /// CSV with the given name for the step column, e.g. `u,err,est_order`.
    pub fn to_csv(&self, step_name: &str) -> String {
        let mut out = format!("{step_name},err,est_order\n");
        for r in &self.rows {
            let order = r.est_order.map_or(String::new(), |o| format!("{o:.6}"));
            out.push_str(&format!("{:e},{:e},{}\n", r.h, r.err, order));
        }
        out
    }
}

/// Least-squares slope through `(x, y)` pairs; `None` with fewer than two points.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Richardson extrapolation of a vector quantity from steps `h` and `h / ratio`.
pub fn richardson(coarse: &[f64], fine: &[f64], ratio: f64, order: f64) -> Vec<f64> {
    let k = ratio.powf(order);
    coarse
        .iter()
        .zip(fine)
        .map(|(c, f)| (k * f - c) / (k - 1.0))
        .collect()
}

/// Dyadic grid `2^-first, …, 2^-last`.
pub fn dyadic(first: i32, last: i32) -> Vec<f64> {
    (first..=last).map(|k| 2f64.powi(-k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_known_order() {
        let hs = dyadic(1, 7);
        let errs: Vec<f64> = hs.iter().map(|h| 3.0 * h * h).collect();
        let s = OrderStudy::new(&hs, &errs);
        assert!((s.slope.unwrap() - 2.0).abs() < 1e-12);
        assert!((s.rows[3].est_order.unwrap() - 2.0).abs() < 1e-12);
        assert!(s.rows[0].est_order.is_none());
        assert!(s.passes(MIN_ORDER));
    }

    #[test]
    fn zero_errors_are_exact() {
        let hs = dyadic(1, 4);
        let s = OrderStudy::new(&hs, &[0.0; 4]);
        assert!(s.exact && s.slope.is_none() && s.passes(MIN_ORDER));
    }

    #[test]
    fn stagnating_error_fails() {
        let hs = dyadic(1, 5);
        let s = OrderStudy::new(&hs, &[0.1; 5]);
        assert!(!s.passes(MIN_ORDER));
    }

    #[test]
    fn richardson_cancels_leading_term() {
        let f = |h: f64| vec![1.0 + 2.0 * h + h * h];
        let r = richardson(&f(0.1), &f(0.05), 2.0, 1.0);
        assert!((r[0] - 1.0).abs() < 0.01);
    }

    #[test]
    fn csv_layout() {
        let s = OrderStudy::new(&[0.5, 0.25], &[0.1, 0.05]);
        let csv = s.to_csv("u");
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "u,err,est_order");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].ends_with(','));
        assert!(lines[2].ends_with("1.000000"));
    }
}
