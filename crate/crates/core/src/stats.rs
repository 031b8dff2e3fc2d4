//! Small fitting and rank-statistics helpers used by the sweeps.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Least-squares polynomial fit, coefficients in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyFit {
    pub coefficients: Vec<f64>,
    pub max_residual: f64,
    pub r_squared: f64,
}

impl PolyFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

fn check_lengths(x: &[f64], y: &[f64], min: usize) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.len() < min {
        return Err(Error::param("points", x.len() as f64, "too few points for the fit"));
    }
    Ok(())
}

pub fn polyfit(x: &[f64], y: &[f64], degree: usize) -> Result<PolyFit> {
    check_lengths(x, y, degree + 1)?;
    let design = DMatrix::from_fn(x.len(), degree + 1, |i, j| x[i].powi(j as i32));
    let rhs = DVector::from_column_slice(y);
    let coeffs = design
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::InvalidParameter {
            name: "design",
            value: f64::NAN,
            reason: e,
        })?;
    let fit = PolyFit {
        coefficients: coeffs.iter().copied().collect(),
        max_residual: 0.0,
        r_squared: 0.0,
    };
    let (max_residual, r_squared) = residual_stats(x, y, |t| fit.eval(t));
    Ok(PolyFit {
        max_residual,
        r_squared,
        ..fit
    })
}

fn residual_stats(x: &[f64], y: &[f64], f: impl Fn(f64) -> f64) -> (f64, f64) {
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let mut max_residual = 0.0f64;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let r = yi - f(xi);
        max_residual = max_residual.max(r.abs());
        ss_res += r * r;
        ss_tot += (yi - mean) * (yi - mean);
    }
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    (max_residual, r_squared)
}

/// `y = k x` fit with its residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct ProportionalFit {
    pub constant: f64,
    pub residuals: Vec<f64>,
}

pub fn fit_through_origin(x: &[f64], y: &[f64]) -> Result<ProportionalFit> {
    check_lengths(x, y, 1)?;
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    if sxx == 0.0 {
        return Err(Error::DivisionDomain("all abscissae are zero"));
    }
    let constant = x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / sxx;
    let residuals = x.iter().zip(y).map(|(a, b)| b - constant * a).collect();
    Ok(ProportionalFit { constant, residuals })
}

/// Ranks starting at 1, ties receive their average rank.
pub fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Spearman rank correlation.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    check_lengths(x, y, 2)?;
    Ok(pearson(&ranks(x), &ranks(y)))
}
