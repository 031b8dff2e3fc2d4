//! Three-qubit heat-bath algorithmic cooling with a coherent reset pair.
//!
//! Qubit 1 is the target, qubits 2 and 3 are the reset pair. Basis index of
//! `|q1 q2 q3>` is `4 q1 + 2 q2 + q3`. One cycle attaches the reset pair
//! state, applies the compression unitary exchanging `|011>` and `|100>`,
//! and traces the pair out again.
//!
//! The channel engine (Kraus operators built from the reset pair spectrum)
//! is the reference for the closed-form propagator in [`analytic_phi_n`].
//! For a reset pair with `<00|rho23|11> = (xi/4) e^{-i alpha'} sqrt(1-eps2^2) sqrt(1-eps3^2)`
//! the stationary target state is the coherent virtual qubit with
//! polarization `(eps2 + eps3) / (1 + eps2 eps3)`, coherence magnitude `xi`
//! and phase `alpha'`.

use num_complex::Complex64;

use crate::bloch::{epsilon_after_rotation, residual_coherence, RotationSpec, VirtualQubitSpec};
use crate::quantum::{
    c, fixed_point, hermitian_eigen, max_abs_diff, partial_trace, tensor, BlochVector, CMat, ChannelRep, DensityMatrix,
};
use crate::{Error, Result};

/// Full protocol parameter record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HbacConfig {
    /// Initial target polarization.
    pub eps1_0: f64,
    /// Initial target coherence `chi`: `<1|rho1(0)|0> = chi sqrt(1 - eps1_0^2) / 2`, `|chi| <= 1`.
    pub target_coherence: Complex64,
    pub eps2: f64,
    pub eps3: f64,
    /// Reset-pair coherence in `[0, 1]`.
    pub xi: f64,
    pub alpha_prime: f64,
    pub cycles: usize,
}

impl HbacConfig {
    /// Incoherent target starting from polarization `eps1_0`.
    pub fn new(eps1_0: f64, eps2: f64, eps3: f64, xi: f64, alpha_prime: f64, cycles: usize) -> Result<Self> {
        let cfg = HbacConfig {
            eps1_0,
            target_coherence: Complex64::new(0.0, 0.0),
            eps2,
            eps3,
            xi,
            alpha_prime,
            cycles,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_target_coherence(mut self, chi: Complex64) -> Result<Self> {
        self.target_coherence = chi;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        for eps in [self.eps1_0, self.eps2, self.eps3] {
            if !(-1.0..=1.0).contains(&eps) || eps.is_nan() {
                return Err(Error::InvalidPolarization(eps));
            }
        }
        if !(0.0..=1.0).contains(&self.xi) || self.xi.is_nan() {
            return Err(Error::param("xi", self.xi, "must lie in [0, 1]"));
        }
        if !self.alpha_prime.is_finite() {
            return Err(Error::param("alpha_prime", self.alpha_prime, "must be finite"));
        }
        if self.target_coherence.norm() > 1.0 + 1e-12 || !self.target_coherence.norm().is_finite() {
            return Err(Error::param(
                "target_coherence",
                self.target_coherence.norm(),
                "magnitude must not exceed 1",
            ));
        }
        Ok(())
    }

    pub fn initial_state(&self) -> Result<DensityMatrix> {
        let s1 = (1.0 - self.eps1_0 * self.eps1_0).sqrt();
        let lower = self.target_coherence * (0.5 * s1);
        let m = CMat::from_row_slice(
            2,
            2,
            &[
                c((1.0 + self.eps1_0) / 2.0, 0.0),
                lower.conj(),
                lower,
                c((1.0 - self.eps1_0) / 2.0, 0.0),
            ],
        );
        DensityMatrix::new(m, vec![2])
    }

    pub fn reset_state(&self) -> Result<DensityMatrix> {
        coherent_reset_state(self.eps2, self.eps3, self.xi, self.alpha_prime)
    }
}

/// `I - |011><011| - |100><100| + |011><100| + |100><011|`.
pub fn compression_unitary() -> CMat {
    let mut u = CMat::identity(8, 8);
    u[(3, 3)] = c(0.0, 0.0);
    u[(4, 4)] = c(0.0, 0.0);
    u[(3, 4)] = c(1.0, 0.0);
    u[(4, 3)] = c(1.0, 0.0);
    u
}

/// Thermal populations of `eps2 (x) eps3` with the single coherence
/// `<00|rho23|11> = (xi/4) e^{-i alpha'} sqrt(1-eps2^2) sqrt(1-eps3^2)`.
pub fn coherent_reset_state(eps2: f64, eps3: f64, xi: f64, alpha_prime: f64) -> Result<DensityMatrix> {
    for eps in [eps2, eps3] {
        if !(-1.0..=1.0).contains(&eps) || eps.is_nan() {
            return Err(Error::InvalidPolarization(eps));
        }
    }
    if !(0.0..=1.0).contains(&xi) || xi.is_nan() {
        return Err(Error::param("xi", xi, "must lie in [0, 1]"));
    }
    let mut m = CMat::zeros(4, 4);
    let pops = [
        (1.0 + eps2) * (1.0 + eps3),
        (1.0 + eps2) * (1.0 - eps3),
        (1.0 - eps2) * (1.0 + eps3),
        (1.0 - eps2) * (1.0 - eps3),
    ];
    for (i, p) in pops.iter().enumerate() {
        m[(i, i)] = c(p / 4.0, 0.0);
    }
    let off = Complex64::from_polar(
        0.25 * xi * (1.0 - eps2 * eps2).sqrt() * (1.0 - eps3 * eps3).sqrt(),
        -alpha_prime,
    );
    m[(0, 3)] = off;
    m[(3, 0)] = off.conj();
    DensityMatrix::new(m, vec![2, 2])
}

/// One refresh-compress-trace cycle on the target for an arbitrary two-qubit
/// reset state, as Kraus operators
/// `K_{m,jk} = sqrt(l_m) (I (x) <jk|) U (I (x) |psi_m>)`.
pub fn reset_channel(rho23: &DensityMatrix) -> Result<ChannelRep> {
    if rho23.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho23.dim(),
        });
    }
    let u = compression_unitary();
    let (values, vectors) = hermitian_eigen(rho23.entries());
    let mut kraus = Vec::new();
    for (m, &lam) in values.iter().enumerate() {
        if lam <= 1e-300 {
            continue;
        }
        let psi = vectors.column(m);
        let amp = lam.sqrt();
        for jk in 0..4 {
            let mut k = CMat::zeros(2, 2);
            for out in 0..2 {
                for inp in 0..2 {
                    let mut acc = c(0.0, 0.0);
                    for r in 0..4 {
                        acc += u[(4 * out + jk, 4 * inp + r)] * psi[r];
                    }
                    k[(out, inp)] = acc * amp;
                }
            }
            kraus.push(k);
        }
    }
    ChannelRep::from_kraus(kraus)
}

/// Single-cycle coherent HBAC channel on the target qubit.
pub fn hbac_channel(config: &HbacConfig) -> Result<ChannelRep> {
    config.validate()?;
    reset_channel(&config.reset_state()?)
}

/// Joint three-qubit states immediately before and after compression in one
/// cycle: `(rho1 (x) rho23, U (rho1 (x) rho23) U^dagger)`.
pub fn compression_snapshots(rho1: &DensityMatrix, rho23: &DensityMatrix) -> Result<(DensityMatrix, DensityMatrix)> {
    let before = tensor(rho1, rho23);
    let after = before.conjugate_by(&compression_unitary())?;
    Ok((before, after))
}

/// Target states over a run of the protocol.
#[derive(Debug, Clone)]
pub struct HbacRun {
    /// `rho1(0), ..., rho1(n)`.
    pub states: Vec<DensityMatrix>,
    pub fixed_point: DensityMatrix,
}

/// Row of the per-cycle trajectory output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub cycle: usize,
    pub eps_z: f64,
    /// `<0|rho1|1>`.
    pub coherence: Complex64,
    pub trace_dist_to_fixed_point: f64,
}

impl HbacRun {
    pub fn bloch(&self) -> Vec<BlochVector> {
        self.states
            .iter()
            .map(|s| s.bloch().expect("target is a qubit"))
            .collect()
    }

    pub fn rows(&self) -> Vec<TrajectoryRow> {
        self.states
            .iter()
            .enumerate()
            .map(|(cycle, s)| TrajectoryRow {
                cycle,
                eps_z: s.polarization(),
                coherence: s.get(0, 1),
                trace_dist_to_fixed_point: s.trace_distance(&self.fixed_point),
            })
            .collect()
    }

    pub fn last(&self) -> &DensityMatrix {
        self.states.last().expect("run holds the initial state")
    }
}

/// Repeated application of the single-cycle channel.
pub fn hbac_iterate(config: &HbacConfig) -> Result<HbacRun> {
    let channel = hbac_channel(config)?;
    iterate_channel(&channel, config.initial_state()?, config.cycles)
}

pub(crate) fn iterate_channel(channel: &ChannelRep, start: DensityMatrix, cycles: usize) -> Result<HbacRun> {
    let mut states = Vec::with_capacity(cycles + 1);
    states.push(start);
    for _ in 0..cycles {
        let next = channel.apply(states.last().expect("nonempty"))?;
        states.push(next);
    }
    Ok(HbacRun {
        states,
        fixed_point: fixed_point(channel)?,
    })
}

/// Incoherent virtual-qubit polarization `(eps2 + eps3) / (1 + eps2 eps3)`.
pub fn virtual_polarization(eps2: f64, eps3: f64) -> f64 {
    (eps2 + eps3) / (1.0 + eps2 * eps3)
}

/// The coherent virtual qubit the protocol converges to.
pub fn extract_virtual_qubit(config: &HbacConfig) -> Result<VirtualQubitSpec> {
    config.validate()?;
    VirtualQubitSpec::new(
        virtual_polarization(config.eps2, config.eps3),
        config.xi,
        config.alpha_prime,
    )
}

/// `pol_v sqrt(2 - pol_v^2)`: the coherent limit when the virtual coherence
/// equals the virtual polarization.
pub fn hbac_epsilon_star(pol_v: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&pol_v) || pol_v.is_nan() {
        return Err(Error::InvalidPolarization(pol_v));
    }
    Ok(pol_v * (2.0 - pol_v * pol_v).sqrt())
}

/// Which form of the closed-form propagator to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PropagatorForm {
    /// Closed form of the channel engine's matrix power.
    #[default]
    Derived,
    /// Literal alternative form; disagrees with channel iteration and is kept for comparison.
    VerbatimSm,
}

struct Closed {
    lambda_n: f64,
    pop_inf: f64,
    /// `<0|rho_inf|1>`.
    coh_inf: Complex64,
}

fn closed(n: usize, eps2: f64, eps3: f64, xi: f64, alpha_prime: f64) -> Closed {
    let e23 = eps2 * eps3;
    let lambda_n = ((1.0 - e23) / 2.0).powi(n as i32);
    let pop_inf = (1.0 + eps2) * (1.0 + eps3) / (2.0 * (1.0 + e23));
    let root = (1.0 - eps2 * eps2).sqrt() * (1.0 - eps3 * eps3).sqrt();
    let coh_inf = Complex64::from_polar(xi * root / (2.0 * (1.0 + e23)), -alpha_prime);
    Closed {
        lambda_n,
        pop_inf,
        coh_inf,
    }
}

/// Natural representation of `n` protocol cycles in closed form (column
/// stacking, vector order `rho00, rho10, rho01, rho11`).
pub fn analytic_phi_n(n: usize, eps2: f64, eps3: f64, xi: f64, alpha_prime: f64, form: PropagatorForm) -> CMat {
    match form {
        PropagatorForm::Derived => derived_phi_n(n, eps2, eps3, xi, alpha_prime),
        PropagatorForm::VerbatimSm => verbatim_phi_n(n, eps2, eps3, xi, alpha_prime),
    }
}

fn derived_phi_n(n: usize, eps2: f64, eps3: f64, xi: f64, alpha_prime: f64) -> CMat {
    let Closed {
        lambda_n,
        pop_inf,
        coh_inf,
    } = closed(n, eps2, eps3, xi, alpha_prime);
    let z = c(0.0, 0.0);
    let r = |x: f64| c(x, 0.0);
    let from_ground = pop_inf + (1.0 - pop_inf) * lambda_n;
    let from_excited = pop_inf * (1.0 - lambda_n);
    let lower = coh_inf.conj() * (1.0 - lambda_n);
    let upper = coh_inf * (1.0 - lambda_n);
    CMat::from_row_slice(
        4,
        4,
        &[
            r(from_ground),
            z,
            z,
            r(from_excited),
            lower,
            r(lambda_n),
            z,
            lower,
            upper,
            z,
            r(lambda_n),
            upper,
            r(1.0 - from_ground),
            z,
            z,
            r(1.0 - from_excited),
        ],
    )
}

fn verbatim_phi_n(n: usize, eps2: f64, eps3: f64, xi: f64, alpha_prime: f64) -> CMat {
    let e23 = eps2 * eps3;
    let lambda_n = ((1.0 - e23) / 2.0).powi(n as i32);
    let phi11 = (1.0 - eps2) * (1.0 - eps3) / (2.0 * (1.0 + e23)) * lambda_n
        + (1.0 + eps2) * (1.0 + eps3) / (2.0 * (1.0 + e23));
    let bracket = (eps2 + eps3) * (e23 - 1.0)
        - ((eps2 + eps3) * (1.0 - e23) - n as f64 * (1.0 - eps2) * (1.0 - eps3) * (1.0 + e23)) * lambda_n;
    let prefactor = Complex64::from_polar(
        xi * (1.0 - eps2 * eps2).sqrt() * (1.0 - eps3 * eps3).sqrt(),
        alpha_prime,
    ) / (2.0 * (e23 - 1.0) * (1.0 + e23).powi(2));
    let phi21 = prefactor * bracket;
    let z = c(0.0, 0.0);
    let r = |x: f64| c(x, 0.0);
    CMat::from_row_slice(
        4,
        4,
        &[
            r(phi11),
            z,
            z,
            r(phi11),
            phi21,
            r(lambda_n),
            z,
            phi21,
            phi21.conj(),
            z,
            r(lambda_n),
            phi21.conj(),
            r(1.0 - phi11),
            z,
            z,
            r(1.0 - phi11),
        ],
    )
}

/// Target state after `n` cycles, in closed form.
pub fn analytic_rho1_matrix(n: usize, config: &HbacConfig, form: PropagatorForm) -> CMat {
    let HbacConfig {
        eps1_0: e1,
        target_coherence: chi,
        eps2,
        eps3,
        xi,
        alpha_prime,
        ..
    } = *config;
    let Closed {
        lambda_n,
        pop_inf,
        coh_inf,
    } = closed(n, eps2, eps3, xi, alpha_prime);
    let e23 = eps2 * eps3;
    let s1 = (1.0 - e1 * e1).sqrt();
    let ground = (e1 * e23 + e1 - eps2 - eps3) / (2.0 * (1.0 + e23)) * lambda_n + pop_inf;
    let initial_lower = chi * (0.5 * s1 * lambda_n);
    let lower = match form {
        PropagatorForm::Derived => initial_lower + coh_inf.conj() * (1.0 - lambda_n),
        PropagatorForm::VerbatimSm => {
            let pol_v = virtual_polarization(eps2, eps3);
            let bracket = pol_v - (pol_v - n as f64 / (1.0 - e23) * (e1 * e23 + e1 - eps2 - eps3)) * lambda_n;
            let phase = Complex64::from_polar(
                xi * (1.0 - eps2 * eps2).sqrt() * (1.0 - eps3 * eps3).sqrt() / (2.0 * (1.0 + e23)),
                alpha_prime,
            );
            phase * bracket + initial_lower
        }
    };
    CMat::from_row_slice(2, 2, &[c(ground, 0.0), lower.conj(), lower, c(1.0 - ground, 0.0)])
}

/// Target state after `n` cycles from the derived closed form.
pub fn analytic_rho1_n(n: usize, config: &HbacConfig) -> Result<DensityMatrix> {
    config.validate()?;
    DensityMatrix::new(analytic_rho1_matrix(n, config, PropagatorForm::Derived), vec![2])
}

/// Largest entrywise gaps between the closed forms and the channel engine
/// after `config.cycles` cycles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorDeviation {
    pub derived_propagator: f64,
    pub derived_state: f64,
    pub verbatim_propagator: f64,
    pub verbatim_state: f64,
}

pub fn propagator_deviation(config: &HbacConfig) -> Result<PropagatorDeviation> {
    let channel = hbac_channel(config)?;
    let n = config.cycles;
    let power = channel.natural_power(n);
    let run = iterate_channel(&channel, config.initial_state()?, n)?;
    let state = run.last().entries();
    let HbacConfig {
        eps2,
        eps3,
        xi,
        alpha_prime,
        ..
    } = *config;
    let phi = |form| analytic_phi_n(n, eps2, eps3, xi, alpha_prime, form);
    Ok(PropagatorDeviation {
        derived_propagator: max_abs_diff(&phi(PropagatorForm::Derived), &power),
        derived_state: max_abs_diff(&analytic_rho1_matrix(n, config, PropagatorForm::Derived), state),
        verbatim_propagator: max_abs_diff(&phi(PropagatorForm::VerbatimSm), &power),
        verbatim_state: max_abs_diff(&analytic_rho1_matrix(n, config, PropagatorForm::VerbatimSm), state),
    })
}

/// Average gate fidelity of the final one-qubit rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateNoise {
    pub fidelity: f64,
}

impl GateNoise {
    pub fn new(fidelity: f64) -> Result<Self> {
        if !(fidelity > 0.5 && fidelity <= 1.0) {
            return Err(Error::param("fidelity", fidelity, "must lie in (0.5, 1]"));
        }
        Ok(GateNoise { fidelity })
    }

    pub fn ideal() -> Self {
        GateNoise { fidelity: 1.0 }
    }

    /// Depolarizing probability with average gate fidelity `1 - p/2`.
    pub fn depolarizing_probability(&self) -> f64 {
        2.0 * (1.0 - self.fidelity)
    }
}

/// Rotation followed by depolarizing noise calibrated to the gate fidelity.
pub fn apply_noisy_rotation(rho: &DensityMatrix, rotation: &RotationSpec, noise: &GateNoise) -> Result<DensityMatrix> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: rho.dim(),
        });
    }
    let noise = GateNoise::new(noise.fidelity)?;
    let rotated = rho.conjugate_by(&rotation.unitary())?;
    let p = noise.depolarizing_probability();
    let m = rotated.entries().scale(1.0 - p) + CMat::identity(2, 2).scale(p / 2.0);
    DensityMatrix::from_propagated(m, vec![2])
}

/// One row of the coherence confidence-band sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandRow {
    pub gamma_rot: f64,
    pub eps_min: f64,
    pub eps_mid: f64,
    pub eps_max: f64,
    pub coh_min: f64,
    pub coh_mid: f64,
    pub coh_max: f64,
}

/// Achievable polarization and residual coherence over a grid of rotation
/// parameters for true coherence at the ends and midpoint of `[gamma_min, gamma_max]`.
pub fn confidence_band_sweep(
    pol_v: f64,
    gamma_min: f64,
    gamma_max: f64,
    gamma_rot_grid: &[f64],
) -> Result<Vec<BandRow>> {
    if !(0.0 <= gamma_min && gamma_min <= gamma_max && gamma_max <= 1.0) {
        return Err(Error::param(
            "gamma_min",
            gamma_min,
            "need 0 <= gamma_min <= gamma_max <= 1",
        ));
    }
    let mid = 0.5 * (gamma_min + gamma_max);
    gamma_rot_grid
        .iter()
        .map(|&gr| {
            Ok(BandRow {
                gamma_rot: gr,
                eps_min: epsilon_after_rotation(pol_v, gamma_min, gr)?,
                eps_mid: epsilon_after_rotation(pol_v, mid, gr)?,
                eps_max: epsilon_after_rotation(pol_v, gamma_max, gr)?,
                coh_min: residual_coherence(pol_v, gamma_min, gr)?,
                coh_mid: residual_coherence(pol_v, mid, gr)?,
                coh_max: residual_coherence(pol_v, gamma_max, gr)?,
            })
        })
        .collect()
}

/// Row with the largest `eps_mid`.
pub fn band_peak(rows: &[BandRow]) -> Option<BandRow> {
    rows.iter()
        .copied()
        .max_by(|a, b| a.eps_mid.partial_cmp(&b.eps_mid).unwrap_or(std::cmp::Ordering::Equal))
}

/// Uniform grid of `points` values on `[lo, hi]`.
pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..points)
            .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

/// Reduced target state from a joint three-qubit state.
pub fn target_marginal(joint: &DensityMatrix) -> Result<DensityMatrix> {
    partial_trace(joint, &[0])
}
