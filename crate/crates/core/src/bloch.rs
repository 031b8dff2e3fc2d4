//! Single-qubit geometry of cooling with a coherent virtual qubit.
//!
//! A virtual qubit with polarization `pol_v`, coherence magnitude `gamma` and
//! phase `alpha` has the density matrix
//!
//! ```text
//! 1/2 [[1 + pol_v,                      gamma e^{-i alpha} sqrt(1 - pol_v^2)],
//!      [gamma e^{i alpha} sqrt(1 - pol_v^2), 1 - pol_v                      ]]
//! ```
//!
//! Qubit convention throughout: `|0>` is the ground state, energy gap `omega`,
//! ground population `(1 + eps) / 2`.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;

use crate::quantum::{c, pauli_x, pauli_y, CMat, DensityMatrix};
use crate::{Error, Result};

fn check_unit(name: &'static str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) || v.is_nan() {
        return Err(Error::param(name, v, "must lie in [0, 1]"));
    }
    Ok(())
}

fn check_polarization(eps: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&eps) || eps.is_nan() {
        return Err(Error::InvalidPolarization(eps));
    }
    Ok(())
}

/// Maps an angle to `[0, 2 pi)`.
pub fn normalize_angle(alpha: f64) -> f64 {
    let a = alpha.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Inverse temperature `omega^-1 ln[(1 + eps) / (1 - eps)]`; `+inf` at `eps = 1`.
pub fn inverse_temperature(eps: f64, omega: f64) -> Result<f64> {
    check_polarization(eps)?;
    if omega <= 0.0 {
        return Err(Error::param("omega", omega, "must be positive"));
    }
    if eps == 1.0 {
        return Ok(f64::INFINITY);
    }
    if eps == -1.0 {
        return Ok(f64::NEG_INFINITY);
    }
    // ln((1+e)/(1-e)) = 2 atanh(e), stable near 0
    Ok(2.0 * eps.atanh() / omega)
}

/// `diag((1 + eps) / 2, (1 - eps) / 2)`.
pub fn thermal_qubit(eps: f64) -> Result<DensityMatrix> {
    check_polarization(eps)?;
    let mut m = CMat::zeros(2, 2);
    m[(0, 0)] = c((1.0 + eps) / 2.0, 0.0);
    m[(1, 1)] = c((1.0 - eps) / 2.0, 0.0);
    DensityMatrix::new(m, vec![2])
}

/// Polarization, coherence magnitude and coherence phase of a virtual qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VirtualQubitSpec {
    pub pol_v: f64,
    pub gamma: f64,
    /// Radians in `[0, 2 pi)`.
    pub alpha: f64,
}

impl VirtualQubitSpec {
    pub fn new(pol_v: f64, gamma: f64, alpha: f64) -> Result<Self> {
        check_polarization(pol_v)?;
        check_unit("gamma", gamma)?;
        if !alpha.is_finite() {
            return Err(Error::param("alpha", alpha, "must be finite"));
        }
        Ok(VirtualQubitSpec {
            pol_v,
            gamma,
            alpha: normalize_angle(alpha),
        })
    }

    /// `<0|rho_v|1>`.
    pub fn coherence(&self) -> Complex64 {
        let r = 0.5 * self.gamma * (1.0 - self.pol_v * self.pol_v).sqrt();
        Complex64::from_polar(r, -self.alpha)
    }

    pub fn state(&self) -> Result<DensityMatrix> {
        coherent_virtual_state(self)
    }
}

/// The coherent virtual qubit density matrix.
pub fn coherent_virtual_state(spec: &VirtualQubitSpec) -> Result<DensityMatrix> {
    let off = spec.coherence();
    let m = CMat::from_row_slice(
        2,
        2,
        &[
            c((1.0 + spec.pol_v) / 2.0, 0.0),
            off,
            off.conj(),
            c((1.0 - spec.pol_v) / 2.0, 0.0),
        ],
    );
    DensityMatrix::new(m, vec![2])
}

/// Coherent cooling limit `sqrt(pol_v^2 + (1 - pol_v^2) gamma^2)`.
pub fn epsilon_star(pol_v: f64, gamma: f64) -> Result<f64> {
    check_polarization(pol_v)?;
    check_unit("gamma", gamma)?;
    Ok(epsilon_star_unchecked(pol_v, gamma))
}

pub(crate) fn epsilon_star_unchecked(pol_v: f64, gamma: f64) -> f64 {
    (pol_v * pol_v + (1.0 - pol_v * pol_v) * gamma * gamma).sqrt()
}

/// Rotation angle `arccos(pol_v / eps_star(gamma_rot))`; zero when both
/// `pol_v` and `gamma_rot` vanish.
pub fn rotation_angle(pol_v: f64, gamma_rot: f64) -> Result<f64> {
    check_polarization(pol_v)?;
    check_unit("gamma_rot", gamma_rot)?;
    let star = epsilon_star_unchecked(pol_v, gamma_rot);
    if star == 0.0 {
        return Ok(0.0);
    }
    Ok((pol_v / star).clamp(-1.0, 1.0).acos())
}

/// `exp(-i angle sigma_phi / 2)` with `sigma_phi = cos(phi) X + sin(phi) Y`:
/// a rotation of the Bloch vector by `angle` about the in-plane axis at
/// azimuth `phi`.
pub fn axis_rotation(phi: f64, angle: f64) -> CMat {
    let sigma = pauli_x().scale(phi.cos()) + pauli_y().scale(phi.sin());
    let (s, co) = (angle / 2.0).sin_cos();
    CMat::identity(2, 2).scale(co) - sigma.map(|z| z * c(0.0, s))
}

/// Parameters of the final polarization-enhancing rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationSpec {
    pub gamma_rot: f64,
    pub alpha_rot: f64,
    /// Rotation angle, radians in `[0, pi/2]` for `pol_v >= 0`.
    pub chi: f64,
}

impl RotationSpec {
    /// Rotation tuned for a virtual qubit of polarization `pol_v`.
    pub fn new(pol_v: f64, gamma_rot: f64, alpha_rot: f64) -> Result<Self> {
        if !alpha_rot.is_finite() {
            return Err(Error::param("alpha_rot", alpha_rot, "must be finite"));
        }
        Ok(RotationSpec {
            gamma_rot,
            alpha_rot: normalize_angle(alpha_rot),
            chi: rotation_angle(pol_v, gamma_rot)?,
        })
    }

    /// `V = exp(i chi sigma_perp(alpha_rot) / 2)`,
    /// `sigma_perp(a) = -sin(a) X + cos(a) Y`.
    pub fn unitary(&self) -> CMat {
        // exp(i chi sigma_perp(a)/2) = exp(-i chi sigma_{a - pi/2}/2)
        axis_rotation(self.alpha_rot - FRAC_PI_2, self.chi)
    }
}

/// The 2x2 unitary `exp(i chi(gamma_rot) sigma_perp(alpha_rot) / 2)`.
pub fn rotation_unitary(pol_v: f64, gamma_rot: f64, alpha_rot: f64) -> Result<CMat> {
    Ok(RotationSpec::new(pol_v, gamma_rot, alpha_rot)?.unitary())
}

/// Polarization reached by rotating a virtual qubit of coherence `gamma` with
/// a rotation tuned for `gamma_rot` (phases matched).
pub fn epsilon_after_rotation(pol_v: f64, gamma: f64, gamma_rot: f64) -> Result<f64> {
    check_unit("pol_v", pol_v)?;
    check_unit("gamma", gamma)?;
    check_unit("gamma_rot", gamma_rot)?;
    let denom = (gamma_rot * gamma_rot + pol_v * pol_v * (1.0 - gamma_rot * gamma_rot)).sqrt();
    if denom == 0.0 {
        return Ok(pol_v);
    }
    Ok((pol_v * pol_v + gamma * gamma_rot * (1.0 - pol_v * pol_v)) / denom)
}

/// Magnitude of the off-diagonal element left after the phase-matched
/// rotation tuned for `gamma_rot` acts on a state with coherence `gamma`.
pub fn residual_coherence(pol_v: f64, gamma: f64, gamma_rot: f64) -> Result<f64> {
    check_unit("pol_v", pol_v)?;
    check_unit("gamma", gamma)?;
    check_unit("gamma_rot", gamma_rot)?;
    let s = (1.0 - pol_v * pol_v).sqrt();
    let star = epsilon_star_unchecked(pol_v, gamma_rot);
    if star == 0.0 {
        return Ok(0.5 * gamma * s);
    }
    // in-plane Bloch component after rotation: pol_v s (gamma - gamma_rot) / eps_star(gamma_rot)
    Ok(0.5 * (pol_v * s * (gamma - gamma_rot) / star).abs())
}

/// Smallest true coherence for which the rotation tuned for `gamma_rot` does
/// not heat: the root of `epsilon_after_rotation(pol_v, gamma, gamma_rot) = pol_v`.
pub fn gamma_inf(pol_v: f64, gamma_rot: f64) -> Result<f64> {
    if gamma_rot == 0.0 {
        return Err(Error::DivisionDomain("gamma_inf"));
    }
    check_unit("gamma_rot", gamma_rot)?;
    if !(0.0..1.0).contains(&pol_v) {
        return Err(Error::param("pol_v", pol_v, "must lie in [0, 1)"));
    }
    let s2 = 1.0 - pol_v * pol_v;
    let root = (pol_v * pol_v + gamma_rot * gamma_rot * s2).sqrt();
    Ok(pol_v * root / (gamma_rot * s2) - pol_v * pol_v / (gamma_rot * s2))
}

/// Which final rotations improve on the incoherent limit for given `(pol_v, gamma)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoolingRegion {
    /// `gamma >= 1/2`.
    AlwaysCools,
    /// `gamma < 1/2` and `pol_v <= gamma / (1 - gamma)`.
    CoolsForAllRotations,
    /// Cooling only for `gamma_rot <= gamma_rot_max`.
    CoolsIfRotationBounded { gamma_rot_max: f64 },
    /// No rotation helps. Unreachable for `gamma, pol_v` in `[0, 1]`, kept
    /// for callers that classify evaluated polarizations.
    Heats,
}

impl CoolingRegion {
    pub fn cools_with(&self, gamma_rot: f64) -> bool {
        match *self {
            CoolingRegion::AlwaysCools | CoolingRegion::CoolsForAllRotations => true,
            CoolingRegion::CoolsIfRotationBounded { gamma_rot_max } => gamma_rot <= gamma_rot_max,
            CoolingRegion::Heats => false,
        }
    }
}

pub fn cooling_region(pol_v: f64, gamma: f64) -> Result<CoolingRegion> {
    check_unit("pol_v", pol_v)?;
    check_unit("gamma", gamma)?;
    if gamma >= 0.5 {
        return Ok(CoolingRegion::AlwaysCools);
    }
    if pol_v <= gamma / (1.0 - gamma) {
        return Ok(CoolingRegion::CoolsForAllRotations);
    }
    let p2 = pol_v * pol_v;
    let gamma_rot_max = 2.0 * p2 * gamma / (p2 - gamma * gamma * (1.0 - p2));
    Ok(CoolingRegion::CoolsIfRotationBounded { gamma_rot_max })
}

/// Whether the midpoint of `[gamma_min, gamma_max]` lies above `gamma_inf(gamma_rot)`.
pub fn midpoint_cools(pol_v: f64, gamma_min: f64, gamma_max: f64, gamma_rot: f64) -> Result<bool> {
    let avg = 0.5 * (gamma_min + gamma_max);
    Ok(avg > gamma_inf(pol_v, gamma_rot)?)
}

/// Lowest steady-state temperature `T omega / Omega` of an incoherent machine.
pub fn t_min_bound(bath_temperature: f64, omega: f64, max_energy: f64) -> Result<f64> {
    if max_energy <= 0.0 {
        return Err(Error::param("Omega", max_energy, "must be positive"));
    }
    if bath_temperature < 0.0 {
        return Err(Error::param("T", bath_temperature, "must be nonnegative"));
    }
    if omega <= 0.0 || omega > max_energy {
        return Err(Error::param("omega", omega, "must lie in (0, Omega]"));
    }
    Ok(bath_temperature * omega / max_energy)
}
