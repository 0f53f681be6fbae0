//! Finite-range experiments around the asymptotic statements on block
//! complexity and digit changes. Everything here is diagnostic: tables and
//! fitted exponents, no pass/fail.

use serde::Serialize;

use crate::arith::rational::fmt_rational;
use crate::arith::{EvalContext, Rational};
use crate::digits::gap::gap_series_digits_ctx;
use crate::digits::{DigitSource, GapSeriesSpec};
use crate::error::{Error, Result};
use crate::words::{complexity_profile_fast, nbdc_profile, FiniteWord};

/// Least-squares line through (ln ln n, ln v).
#[derive(Clone, Debug, Serialize)]
pub struct LogFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
    pub r2: f64,
}

/// Fits ln v = intercept + slope ln ln n over the points with n >= 3 and
/// v > 0; `None` with fewer than two such points.
pub fn fit_log_log(ns: &[usize], vals: &[u64]) -> Option<LogFit> {
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .zip(vals)
        .filter(|(&n, &v)| n >= 3 && v > 0)
        .map(|(&n, &v)| ((n as f64).ln().ln(), (v as f64).ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LogFit { slope, intercept: my - slope * mx, points: pts.len(), r2 })
}

/// n = 2^i - 1 for i = 2, 3, ... while n <= n_max.
pub fn dyadic_grid(n_max: usize) -> Vec<usize> {
    (2..usize::BITS).map(|i| (1usize << i) - 1).take_while(|&n| n <= n_max).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    pub p: u64,
    /// p(n) / (n (log n)^eta).
    pub ratio: f64,
    pub running_sup: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexityGrowth {
    pub kind: &'static str,
    pub eta: f64,
    pub prefix_len: usize,
    pub rows: Vec<GrowthRow>,
}

/// p(n)/(n (log n)^eta) for 2 <= n <= n_max and its running supremum.
pub fn complexity_growth(w: &FiniteWord, eta: f64, n_max: usize) -> Result<ComplexityGrowth> {
    if n_max < 2 {
        return Err(Error::invalid("n_max must be at least 2"));
    }
    let prof = complexity_profile_fast(w, n_max)?;
    let mut sup = f64::NEG_INFINITY;
    let rows = (2..=n_max)
        .map(|n| {
            let p = prof.get(n);
            let ratio = p as f64 / (n as f64 * (n as f64).ln().powf(eta));
            sup = sup.max(ratio);
            GrowthRow { n, p, ratio, running_sup: sup }
        })
        .collect();
    Ok(ComplexityGrowth { kind: "diagnostic", eta, prefix_len: w.len(), rows })
}

/// (log n)^(3/2) / ((log log n)^(1/2) (log 6d)^(1/2)), the shape of the
/// lower bound for digit changes of an algebraic number of degree d.
pub fn changes_display(n: usize, d: u64) -> f64 {
    let l = (n as f64).ln();
    l.powf(1.5) / (l.ln().sqrt() * (6.0 * d as f64).ln().sqrt())
}

#[derive(Clone, Debug, Serialize)]
pub struct ChangesRow {
    pub n: usize,
    pub nbdc: u64,
    /// nbdc(n) divided by the display for the given degree.
    pub scaled: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DigitChanges {
    pub kind: &'static str,
    pub degree: u64,
    pub rows: Vec<ChangesRow>,
    pub fit: Option<LogFit>,
    pub reference_exponent: f64,
    /// Largest c1 with nbdc(n) >= c1 * display over grid points n >= 16.
    pub c1_fitted: Option<f64>,
}

/// Requires an irrational source: rational algebraic input is rejected.
pub fn require_irrational(source: &DigitSource) -> Result<()> {
    if let DigitSource::Algebraic(x) = source {
        if x.degree() < 2 {
            return Err(Error::invalid("digit-change experiments need an irrational number; the input is rational"));
        }
    }
    Ok(())
}

/// nbdc on a dyadic grid, the fitted exponent of log n, and the constant c1
/// that the data supports for the degree-d display.
pub fn digit_changes(w: &FiniteWord, degree: u64, grid: &[usize]) -> Result<DigitChanges> {
    if degree == 0 {
        return Err(Error::invalid("degree must be >= 1"));
    }
    let n_max = grid.iter().copied().max().ok_or_else(|| Error::invalid("empty n-grid"))?;
    if n_max >= w.len() {
        return Err(Error::invalid(format!("grid reaches n = {n_max}, which needs {} digits; have {}", n_max + 1, w.len())));
    }
    let prof = nbdc_profile(w, n_max)?;
    let rows: Vec<ChangesRow> = grid
        .iter()
        .map(|&n| {
            let v = prof[n - 1];
            let disp = if n >= 16 { changes_display(n, degree) } else { f64::NAN };
            ChangesRow { n, nbdc: v, scaled: v as f64 / disp }
        })
        .collect();
    let vals: Vec<u64> = rows.iter().map(|r| r.nbdc).collect();
    let fit = fit_log_log(grid, &vals);
    let c1 = rows.iter().filter(|r| r.n >= 16).map(|r| r.scaled).fold(None, |a: Option<f64>, s| Some(a.map_or(s, |a| a.min(s))));
    Ok(DigitChanges { kind: "diagnostic", degree, rows, fit, reference_exponent: 1.5, c1_fitted: c1 })
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeComparison {
    pub degree: u64,
    /// Grid points where the observed nbdc is below c1 * display.
    pub below_at: Vec<usize>,
    /// ln ln n beyond which the fitted power law stays below c1 * display,
    /// searched up to ln ln n = 60.
    pub extrapolated_loglog_crossing: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapSeriesChanges {
    pub kind: &'static str,
    pub eta: String,
    pub base: u32,
    pub digits: usize,
    pub rows: Vec<ChangesRow>,
    pub fit: Option<LogFit>,
    pub expected_slope: f64,
    pub reference_exponent: f64,
    /// Fitted slope below the reference exponent: the observed growth
    /// eventually falls under any algebraic lower bound of that shape.
    pub asymptotically_below: bool,
    pub c1: f64,
    pub comparisons: Vec<DegreeComparison>,
}

/// nbdc growth of sum_j b^(-2^floor(j^eta)) over n = 2^i - 1 <= N, the fitted
/// exponent of log n, and where the data sits under c1 times the
/// algebraic display for each hypothetical degree.
pub fn gap_series_changes(eta: &Rational, base: u32, n_digits: usize, c1: f64, degrees: &[u64], ctx: &EvalContext) -> Result<GapSeriesChanges> {
    if !(c1 > 0.0) {
        return Err(Error::invalid("c1 must be positive"));
    }
    let spec = GapSeriesSpec::pow_floor(base, eta.clone())?;
    let w = gap_series_digits_ctx(&spec, n_digits, ctx)?.word;
    let grid = dyadic_grid(n_digits.saturating_sub(1));
    let ch = digit_changes(&w, 1, &grid)?;
    let fit = ch.fit.clone();
    let mut comparisons = Vec::new();
    for &d in degrees {
        if d == 0 {
            return Err(Error::invalid("degrees must be >= 1"));
        }
        let below_at = ch.rows.iter().filter(|r| r.n >= 16 && (r.nbdc as f64) < c1 * changes_display(r.n, d)).map(|r| r.n).collect();
        let crossing = fit.as_ref().and_then(|f| {
            // ln of the fitted law minus ln of the display, as a function of L = ln ln n
            let gap = |l: f64| {
                let disp = 1.5 * l - 0.5 * l.ln() - 0.5 * (6.0 * d as f64).ln().ln();
                f.intercept + f.slope * l - (c1.ln() + disp)
            };
            let mut l = 60.0;
            if gap(l) >= 0.0 {
                return None;
            }
            while l > 0.05 && gap(l - 0.05) < 0.0 {
                l -= 0.05;
            }
            Some(l)
        });
        comparisons.push(DegreeComparison { degree: d, below_at, extrapolated_loglog_crossing: crossing });
    }
    let eta_f = crate::arith::rational::to_f64(eta);
    Ok(GapSeriesChanges {
        kind: "diagnostic",
        eta: fmt_rational(eta),
        base,
        digits: n_digits,
        asymptotically_below: fit.as_ref().map(|f| f.slope < 1.5).unwrap_or(false),
        rows: ch.rows,
        fit,
        expected_slope: 1.0 / eta_f,
        reference_exponent: 1.5,
        c1,
        comparisons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::sqrt2_minus_1;
    use crate::arith::rational::rat;
    use crate::digits::digits_of_algebraic;

    #[test]
    fn fit_recovers_power() {
        let ns = dyadic_grid(1 << 20);
        let vals: Vec<u64> = ns.iter().map(|&n| (5.0 * (n as f64).ln().powf(1.5)).round() as u64).collect();
        let f = fit_log_log(&ns, &vals).unwrap();
        assert!((f.slope - 1.5).abs() < 0.02, "{f:?}");
        assert!(fit_log_log(&[3], &[1]).is_none());
    }

    #[test]
    fn grid_shape() {
        assert_eq!(dyadic_grid(20), vec![3, 7, 15]);
    }

    #[test]
    fn growth_table_is_monotone_in_sup() {
        let w = digits_of_algebraic(&sqrt2_minus_1(), 2, 2000).unwrap();
        let g = complexity_growth(&w, 0.09, 40).unwrap();
        assert!(g.rows.windows(2).all(|r| r[1].running_sup >= r[0].running_sup));
    }

    #[test]
    fn rational_rejected() {
        let x = crate::algebraic::AlgebraicReal::from_rational(&rat(1, 3));
        assert!(require_irrational(&DigitSource::Algebraic(x)).is_err());
        assert!(require_irrational(&DigitSource::Algebraic(sqrt2_minus_1())).is_ok());
    }

    #[test]
    fn small_gap_series_report() {
        let r = gap_series_changes(&rat(4, 5), 2, 1 << 12, 0.1, &[2, 3], &EvalContext::default()).unwrap();
        assert_eq!(r.rows.len(), dyadic_grid((1 << 12) - 1).len());
        assert!(r.fit.is_some());
    }
}
