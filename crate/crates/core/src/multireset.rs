//! Coherence versus additional reset qubits.

use crate::hbac::hbac_epsilon_star;
use crate::stats::polyfit;
use crate::{Error, Result};

/// Number of reset qubits, at least one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ResetCount(u32);

impl ResetCount {
    pub fn new(r: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::param("r", 0.0, "need at least one reset qubit"));
        }
        Ok(ResetCount(r))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn next(self) -> Self {
        ResetCount(self.0 + 1)
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&eps) || eps.is_nan() {
        return Err(Error::InvalidPolarization(eps));
    }
    Ok(())
}

/// Asymptotic incoherent polarization with `r` resets at polarization `eps`:
/// `[(1+e)^r - (1-e)^r] / [(1+e)^r + (1-e)^r]`.
pub fn epsilon_infinity(r: ResetCount, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let up = (1.0 + eps).powi(r.0 as i32);
    let down = (1.0 - eps).powi(r.0 as i32);
    Ok((up - down) / (up + down))
}

/// Best coherent polarization with `r` resets over the incoherent limit with `r + 1`.
pub fn resource_ratio(r: ResetCount, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param("eps_a", eps, "must lie in (0, 1)"));
    }
    let virtual_pol = epsilon_infinity(r, eps)?;
    Ok(hbac_epsilon_star(virtual_pol)? / epsilon_infinity(r.next(), eps)?)
}

/// Quadratic fit `c0 + c1 e + c2 e^2` of the ratio on a small-polarization window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallEpsFit {
    pub constant: f64,
    pub linear: f64,
    pub quadratic: f64,
    pub max_residual: f64,
}

pub const SMALL_EPS_WINDOW: f64 = 0.05;
const SMALL_EPS_POINTS: usize = 200;

pub fn ratio_small_eps_expansion(r: ResetCount) -> Result<SmallEpsFit> {
    let xs: Vec<f64> = (1..=SMALL_EPS_POINTS)
        .map(|i| SMALL_EPS_WINDOW * i as f64 / SMALL_EPS_POINTS as f64)
        .collect();
    let ys = xs.iter().map(|&e| resource_ratio(r, e)).collect::<Result<Vec<_>>>()?;
    let fit = polyfit(&xs, &ys, 2)?;
    Ok(SmallEpsFit {
        constant: fit.coefficients[0],
        linear: fit.coefficients[1],
        quadratic: fit.coefficients[2],
        max_residual: fit.max_residual,
    })
}

/// `r sqrt(2) / (r + 1)`, the vanishing-polarization limit of the ratio.
pub fn ratio_limit(r: ResetCount) -> f64 {
    let r = r.0 as f64;
    r * std::f64::consts::SQRT_2 / (r + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hbac::virtual_polarization;
    use approx::assert_abs_diff_eq;

    fn rc(r: u32) -> ResetCount {
        ResetCount::new(r).unwrap()
    }

    #[test]
    fn epsilon_infinity_examples() {
        assert_abs_diff_eq!(epsilon_infinity(rc(1), 0.37).unwrap(), 0.37, epsilon = 1e-16);
        assert_eq!(epsilon_infinity(rc(2), 0.5).unwrap(), 0.8);
        for r in 1..8 {
            assert_eq!(epsilon_infinity(rc(r), 1.0).unwrap(), 1.0);
        }
        assert!(ResetCount::new(0).is_err());
        assert!(epsilon_infinity(rc(2), 1.5).is_err());
    }

    #[test]
    fn matches_hyperbolic_form_and_two_reset_engine() {
        for r in 1..10 {
            for i in 0..50 {
                let e = -0.98 + 1.96 * i as f64 / 49.0;
                let want = (r as f64 * e.atanh()).tanh();
                assert_abs_diff_eq!(epsilon_infinity(rc(r), e).unwrap(), want, epsilon = 1e-14);
            }
        }
        for e in [0.1, 0.35, 0.5, 0.77] {
            assert_abs_diff_eq!(
                epsilon_infinity(rc(2), e).unwrap(),
                virtual_polarization(e, e),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn ratio_examples() {
        assert!(resource_ratio(rc(2), 0.6).unwrap() > 1.0);
        let r4 = resource_ratio(rc(4), 0.05).unwrap();
        assert!(r4 > 1.10);
        assert_abs_diff_eq!(r4, ratio_limit(rc(4)), epsilon = 5e-3);
        assert_abs_diff_eq!(
            resource_ratio(rc(2), 1e-4).unwrap(),
            2.0 * 2f64.sqrt() / 3.0,
            epsilon = 1e-6
        );
        assert!(resource_ratio(rc(2), 0.0).is_err());
    }

    #[test]
    fn ratio_tends_to_one_for_pure_resets() {
        for r in 1..6 {
            assert_abs_diff_eq!(resource_ratio(rc(r), 1.0 - 1e-9).unwrap(), 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn coherence_beats_an_extra_reset_for_three_or_more() {
        for r in 3..8 {
            for i in 1..=400 {
                let e = 0.4 * i as f64 / 400.0;
                assert!(resource_ratio(rc(r), e).unwrap() > 1.0, "r={r} e={e}");
            }
        }
    }

    #[test]
    fn small_eps_fit() {
        let four = ratio_small_eps_expansion(rc(4)).unwrap();
        assert_abs_diff_eq!(four.constant, 1.131, epsilon = 1e-3);
        assert!(four.linear.abs() < 1e-3);
        let two = ratio_small_eps_expansion(rc(2)).unwrap();
        assert_abs_diff_eq!(two.constant, 0.943, epsilon = 1e-3);
        assert!(two.linear.abs() < 1e-3);
        // the quartic term leaves a residual of order c4 * window^4
        for fit in [four, two] {
            assert!(fit.max_residual < 1e-5);
        }
    }
}
