//! Cooling when the coherence phase is only known to lie in an interval.
//!
//! Phases here follow the axis convention: a rotation with phase `alpha_rot`
//! turns the Bloch vector by `chi(gamma_rot)` about the in-plane axis
//! `cos(alpha_rot) X + sin(alpha_rot) Y`. The phase-matched rotation of
//! [`crate::bloch::RotationSpec`] with phase `a` corresponds to
//! `alpha_rot = a - pi/2` here.

use std::f64::consts::{FRAC_PI_2, TAU};

use crate::bloch::{axis_rotation, epsilon_after_rotation, rotation_angle, VirtualQubitSpec};
use crate::quadrature::Adaptive;
use crate::{Error, Result, TOL};

/// Confidence interval `[alpha_min, alpha_max]` for the coherence phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseInterval {
    pub alpha_min: f64,
    pub alpha_max: f64,
}

impl PhaseInterval {
    pub fn new(alpha_min: f64, alpha_max: f64) -> Result<Self> {
        let width = alpha_max - alpha_min;
        if !width.is_finite() || width < 0.0 {
            return Err(Error::param("alpha_max - alpha_min", width, "must be nonnegative"));
        }
        if width > TAU + 1e-12 {
            return Err(Error::param("alpha_max - alpha_min", width, "must not exceed 2 pi"));
        }
        Ok(PhaseInterval { alpha_min, alpha_max })
    }

    /// Interval of the given width centred on zero.
    pub fn centered(width: f64) -> Result<Self> {
        Self::new(-0.5 * width, 0.5 * width)
    }

    pub fn width(&self) -> f64 {
        self.alpha_max - self.alpha_min
    }
}

/// `<sigma_z>` after rotating the virtual qubit `(pol_v, gamma, alpha)` about
/// the axis at `alpha_rot` by `chi(gamma_rot)`:
/// `gamma sqrt(1 - pol_v^2) sin(alpha - alpha_rot) sin(chi) + pol_v cos(chi)`.
pub fn epsilon_rotated(pol_v: f64, gamma: f64, alpha: f64, alpha_rot: f64, gamma_rot: f64) -> Result<f64> {
    let chi = rotation_angle(pol_v, gamma_rot)?;
    let s = (1.0 - pol_v * pol_v).sqrt();
    Ok(gamma * s * (alpha - alpha_rot).sin() * chi.sin() + pol_v * chi.cos())
}

/// A literal closed-form candidate for the average, stated alongside the double-integral
/// definition and evaluated as written:
/// `[2 g g_r (p^2 - 1) cos(D) - 2 g g_r (p^2 - 1) + D^2 p^2] / [p^2 - (p^2 - 1) g_r^2]`.
///
/// This expression does not reduce to the double integral (it lacks the
/// `1/D^2` normalization and carries `eps_star(gamma_rot)^2` rather than
/// `eps_star(gamma_rot)` in the denominator); see [`compare_average`].
pub fn average_epsilon_closed(pol_v: f64, gamma: f64, gamma_rot: f64, interval: PhaseInterval) -> Result<f64> {
    let d = interval.width();
    if d == 0.0 {
        return epsilon_rotated(
            pol_v,
            gamma,
            interval.alpha_min,
            interval.alpha_min - FRAC_PI_2,
            gamma_rot,
        );
    }
    let p2 = pol_v * pol_v;
    let gg = gamma * gamma_rot * (p2 - 1.0);
    let denom = p2 - (p2 - 1.0) * gamma_rot * gamma_rot;
    if denom == 0.0 {
        return Err(Error::DivisionDomain("average_epsilon_closed"));
    }
    Ok((2.0 * gg * d.cos() - 2.0 * gg + d * d * p2) / denom)
}

/// Closed form of the double-integral average derived from the integrand:
/// `[pol_v^2 + gamma gamma_rot (1 - pol_v^2) f(D)] / eps_star(gamma_rot)` with
/// `f(D) = 2 (1 - cos D) / D^2`.
pub fn average_epsilon_analytic(pol_v: f64, gamma: f64, gamma_rot: f64, interval: PhaseInterval) -> Result<f64> {
    let d = interval.width();
    let chi = rotation_angle(pol_v, gamma_rot)?;
    let s = (1.0 - pol_v * pol_v).sqrt();
    // 2(1 - cos D)/D^2 = sinc^2(D/2), stable at small D
    let f = if d == 0.0 {
        1.0
    } else {
        let h = 0.5 * d;
        (h.sin() / h).powi(2)
    };
    Ok(pol_v * chi.cos() + gamma * s * chi.sin() * f)
}

/// `(1/D^2) int_{alpha_min}^{alpha_max} int_{alpha_min - pi/2}^{alpha_max - pi/2}
/// epsilon_rotated d alpha_rot d alpha` by adaptive Gauss-Legendre quadrature.
pub fn average_epsilon_numeric(pol_v: f64, gamma: f64, gamma_rot: f64, interval: PhaseInterval) -> Result<f64> {
    let d = interval.width();
    if d == 0.0 {
        return epsilon_rotated(
            pol_v,
            gamma,
            interval.alpha_min,
            interval.alpha_min - FRAC_PI_2,
            gamma_rot,
        );
    }
    let chi = rotation_angle(pol_v, gamma_rot)?;
    let s = (1.0 - pol_v * pol_v).sqrt();
    let (sin_chi, cos_chi) = chi.sin_cos();
    let quad = Adaptive::new(TOL.quadrature * d * d);
    let integral = quad.integrate_2d(
        (interval.alpha_min, interval.alpha_max),
        (interval.alpha_min - FRAC_PI_2, interval.alpha_max - FRAC_PI_2),
        |alpha, alpha_rot| gamma * s * (alpha - alpha_rot).sin() * sin_chi + pol_v * cos_chi,
    );
    Ok(integral / (d * d))
}

/// The three evaluations of the phase-averaged polarization side by side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageComparison {
    pub numeric: f64,
    pub analytic: f64,
    pub literal: f64,
    /// `literal - numeric`; not expected to vanish.
    pub literal_deviation: f64,
}

pub fn compare_average(pol_v: f64, gamma: f64, gamma_rot: f64, interval: PhaseInterval) -> Result<AverageComparison> {
    let numeric = average_epsilon_numeric(pol_v, gamma, gamma_rot, interval)?;
    let analytic = average_epsilon_analytic(pol_v, gamma, gamma_rot, interval)?;
    let literal = average_epsilon_closed(pol_v, gamma, gamma_rot, interval)?;
    Ok(AverageComparison {
        numeric,
        analytic,
        literal,
        literal_deviation: literal - numeric,
    })
}

/// How each ensemble member's rotation phase is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaRotRule {
    /// `alpha_rot = alpha - pi/2`, phase-matched at every point.
    OrthogonalOffset,
    /// `alpha_rot = (alpha_max - alpha_min) / 2` for every point.
    FixedMidpoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsemblePoint {
    pub alpha: f64,
    pub epsilon_out: f64,
    /// `|<0|rho|1>|` of the rotated state.
    pub coherence_out: f64,
}

/// Rotates each member of a uniform phase grid and records the outcome.
pub fn sample_ensemble(
    pol_v: f64,
    gamma: f64,
    interval: PhaseInterval,
    gamma_rot: f64,
    rule: AlphaRotRule,
    count: usize,
) -> Result<Vec<EnsemblePoint>> {
    if count == 0 {
        return Err(Error::param("count", 0.0, "must be at least 1"));
    }
    let chi = rotation_angle(pol_v, gamma_rot)?;
    let fixed = 0.5 * (interval.alpha_max - interval.alpha_min);
    (0..count)
        .map(|i| {
            let alpha = if count == 1 {
                interval.alpha_min
            } else {
                interval.alpha_min + interval.width() * i as f64 / (count - 1) as f64
            };
            let alpha_rot = match rule {
                AlphaRotRule::OrthogonalOffset => alpha - FRAC_PI_2,
                AlphaRotRule::FixedMidpoint => fixed,
            };
            let state = VirtualQubitSpec::new(pol_v, gamma, alpha)?.state()?;
            let rotated = state.conjugate_by(&axis_rotation(alpha_rot, chi))?;
            Ok(EnsemblePoint {
                alpha,
                epsilon_out: rotated.polarization(),
                coherence_out: rotated.get(0, 1).norm(),
            })
        })
        .collect()
}

/// Mean outcome and the fraction of members that individually cool.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSummary {
    pub mean_epsilon: f64,
    pub fraction_cooling: f64,
}

pub fn summarize_ensemble(pol_v: f64, points: &[EnsemblePoint]) -> EnsembleSummary {
    let n = points.len().max(1) as f64;
    EnsembleSummary {
        mean_epsilon: points.iter().map(|p| p.epsilon_out).sum::<f64>() / n,
        fraction_cooling: points.iter().filter(|p| p.epsilon_out > pol_v).count() as f64 / n,
    }
}

/// Limit of the averaged polarization for a vanishing interval.
pub fn pointwise_limit(pol_v: f64, gamma: f64, gamma_rot: f64) -> Result<f64> {
    epsilon_after_rotation(pol_v, gamma, gamma_rot)
}
