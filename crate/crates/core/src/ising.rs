//! Coherent reset pairs from the thermal state of a two-spin Ising model
//! `H = -(w/4)(Z1 + Z2) + g (X1 X2 - Y1 Y2)`.

use crate::hbac::{iterate_channel, reset_channel};
use crate::quantum::{c, fixed_point, hermitian_eigen, pauli_x, pauli_y, pauli_z, BlochVector, CMat, DensityMatrix};
use crate::stats::{fit_through_origin, spearman};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsingConfig {
    pub omega: f64,
    pub g: f64,
    pub beta: f64,
}

impl IsingConfig {
    pub fn new(omega: f64, g: f64, beta: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::param("omega", omega, "must be positive and finite"));
        }
        if !(g.is_finite() && g >= 0.0) {
            return Err(Error::param("g", g, "must be nonnegative and finite"));
        }
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::param("beta", beta, "must be nonnegative and finite"));
        }
        Ok(IsingConfig { omega, g, beta })
    }

    /// `g tanh(beta sqrt(g^2 + w^2))`, the expected scaling shape of the coherence.
    pub fn scaling_shape(&self) -> f64 {
        self.g * (self.beta * (self.g * self.g + self.omega * self.omega).sqrt()).tanh()
    }
}

pub fn ising_hamiltonian(config: &IsingConfig) -> CMat {
    let id = CMat::identity(2, 2);
    let (x, y, z) = (pauli_x(), pauli_y(), pauli_z());
    let field = (z.kronecker(&id) + id.kronecker(&z)).scale(-config.omega / 4.0);
    let coupling = (x.kronecker(&x) - y.kronecker(&y)).scale(config.g);
    field + coupling
}

/// `exp(-beta H) / tr exp(-beta H)` from the spectral decomposition, shifted
/// by the ground energy so the weights never overflow.
pub fn gibbs_state(h: &CMat, beta: f64) -> Result<DensityMatrix> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::param("beta", beta, "must be nonnegative and finite"));
    }
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            got: h.ncols(),
        });
    }
    let (energies, vectors) = hermitian_eigen(h);
    let ground = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = energies.iter().map(|e| (-beta * (e - ground)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let diag = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        weights.len(),
        weights.iter().map(|w| c(w / z, 0.0)),
    ));
    let m = &vectors * diag * vectors.adjoint();
    DensityMatrix::from_propagated(m, qubit_dims(h.nrows()))
}

fn qubit_dims(dim: usize) -> Vec<usize> {
    if dim.is_power_of_two() && dim > 1 {
        vec![2; dim.trailing_zeros() as usize]
    } else {
        vec![dim]
    }
}

/// Virtual qubit induced by the Ising thermal state used directly as the reset pair.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingCoherence {
    /// Normalized coherence: `|<0|rho|1>| = (gamma/2) sqrt(1 - pol_v^2)`.
    pub gamma: f64,
    /// Bare magnitude `|<0|rho|1>|`.
    pub coherence: f64,
    pub pol_v: f64,
    pub fixed_point: DensityMatrix,
}

pub fn ising_virtual_coherence(config: &IsingConfig) -> Result<IsingCoherence> {
    let rho23 = gibbs_state(&ising_hamiltonian(config), config.beta)?;
    let fp = fixed_point(&reset_channel(&rho23)?)?;
    let pol_v = fp.polarization();
    let off = fp.get(0, 1).norm();
    let width = (1.0 - pol_v * pol_v).max(0.0).sqrt();
    let gamma = if width > 0.0 { (2.0 * off / width).min(1.0) } else { 0.0 };
    Ok(IsingCoherence {
        gamma,
        coherence: off,
        pol_v,
        fixed_point: fp,
    })
}

/// Per-cycle target Bloch vectors with the Ising reset pair, starting maximally mixed.
pub fn ising_trajectory(config: &IsingConfig, cycles: usize) -> Result<Vec<BlochVector>> {
    let rho23 = gibbs_state(&ising_hamiltonian(config), config.beta)?;
    let channel = reset_channel(&rho23)?;
    let run = iterate_channel(&channel, DensityMatrix::maximally_mixed(vec![2]), cycles)?;
    Ok(run.bloch())
}

/// Fit of numerical coherence against `k g tanh(beta sqrt(g^2 + w^2))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub constant: f64,
    pub residuals: Vec<f64>,
    pub spearman: f64,
    pub gammas: Vec<f64>,
}

pub fn scaling_check(grid: &[IsingConfig]) -> Result<ScalingReport> {
    let gammas = grid
        .iter()
        .map(|cfg| ising_virtual_coherence(cfg).map(|r| r.gamma))
        .collect::<Result<Vec<_>>>()?;
    let shapes: Vec<f64> = grid.iter().map(IsingConfig::scaling_shape).collect();
    let fit = fit_through_origin(&shapes, &gammas)?;
    Ok(ScalingReport {
        constant: fit.constant,
        residuals: fit.residuals,
        spearman: spearman(&gammas, &shapes)?,
        gammas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hbac::{hbac_channel, HbacConfig};
    use crate::quantum::max_abs_diff;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hamiltonian_elements() {
        let free = ising_hamiltonian(&IsingConfig::new(1.0, 0.0, 1.0).unwrap());
        let diag: Vec<f64> = (0..4).map(|i| free[(i, i)].re).collect();
        assert_eq!(diag, vec![-0.5, 0.0, 0.0, 0.5]);
        let h = ising_hamiltonian(&IsingConfig::new(1.0, 0.3, 1.0).unwrap());
        assert_abs_diff_eq!(h[(0, 3)].re, 0.6, epsilon = 1e-15);
        assert_eq!(h[(1, 2)].norm(), 0.0);
        assert!(max_abs_diff(&h, &h.adjoint()) == 0.0);
    }

    #[test]
    fn gibbs_examples() {
        let h = ising_hamiltonian(&IsingConfig::new(1.0, 0.4, 1.0).unwrap());
        let hot = gibbs_state(&h, 0.0).unwrap();
        assert!(max_abs_diff(hot.entries(), &CMat::identity(4, 4).scale(0.25)) < 1e-15);

        let beta = 1.7;
        let free = gibbs_state(&ising_hamiltonian(&IsingConfig::new(1.0, 0.0, beta).unwrap()), beta).unwrap();
        let eps = (beta / 4.0).tanh();
        let pops = [
            (1.0 + eps) * (1.0 + eps),
            1.0 - eps * eps,
            1.0 - eps * eps,
            (1.0 - eps) * (1.0 - eps),
        ];
        for (i, p) in pops.iter().enumerate() {
            assert_abs_diff_eq!(free.get(i, i).re, p / 4.0, epsilon = 1e-14);
        }

        let cold = gibbs_state(&h, 400.0).unwrap();
        assert_abs_diff_eq!(cold.purity(), 1.0, epsilon = 1e-12);
        assert!(cold.get(1, 1).norm() < 1e-12 && cold.get(2, 2).norm() < 1e-12);

        let warm = gibbs_state(&h, 2.0).unwrap();
        let comm = &h * warm.entries() - warm.entries() * &h;
        assert!(comm.iter().all(|z| z.norm() < 1e-12));
        assert!(gibbs_state(&h, -1.0).is_err());
    }

    #[test]
    fn block_structure_of_gibbs_state() {
        let h = ising_hamiltonian(&IsingConfig::new(1.0, 0.7, 1.3).unwrap());
        let rho = gibbs_state(&h, 1.3).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j && !matches!((i, j), (0, 3) | (3, 0)) {
                    assert!(rho.get(i, j).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn no_coupling_no_coherence() {
        let cfg = IsingConfig::new(1.0, 0.0, 1.09).unwrap();
        let got = ising_virtual_coherence(&cfg).unwrap();
        assert!(got.gamma < 1e-14);
        let eps = (1.09f64 / 4.0).tanh();
        let reference =
            fixed_point(&hbac_channel(&HbacConfig::new(0.0, eps, eps, 0.0, 0.0, 0).unwrap()).unwrap()).unwrap();
        assert!(max_abs_diff(got.fixed_point.entries(), reference.entries()) < 1e-12);

        let hot = ising_virtual_coherence(&IsingConfig::new(1.0, 0.5, 0.0).unwrap()).unwrap();
        assert!(hot.gamma < 1e-14);
        assert!(hot.pol_v.abs() < 1e-12);
    }

    #[test]
    fn coherence_grows_with_coupling_and_saturates_in_beta() {
        let gammas: Vec<f64> = [0.25, 0.5, 0.75, 1.0]
            .iter()
            .map(|&g| {
                ising_virtual_coherence(&IsingConfig::new(1.0, g, 1.09).unwrap())
                    .unwrap()
                    .gamma
            })
            .collect();
        assert!(gammas.windows(2).all(|w| w[1] > w[0]));
        let a = ising_virtual_coherence(&IsingConfig::new(1.0, 0.5, 40.0).unwrap())
            .unwrap()
            .gamma;
        let b = ising_virtual_coherence(&IsingConfig::new(1.0, 0.5, 80.0).unwrap())
            .unwrap()
            .gamma;
        assert_abs_diff_eq!(a, b, epsilon = 1e-10);
    }

    #[test]
    fn linear_regime_for_weak_coupling() {
        let ratio = |g: f64| {
            ising_virtual_coherence(&IsingConfig::new(1.0, g, 1.09).unwrap())
                .unwrap()
                .gamma
                / g
        };
        assert!((ratio(1e-4) - ratio(2e-4)).abs() < 1e-6 * ratio(1e-4));
    }

    #[test]
    fn bare_coherence_decreases_with_gap() {
        let runs: Vec<IsingCoherence> = [1.0, 2.0, 4.0, 8.0, 16.0]
            .iter()
            .map(|&w| ising_virtual_coherence(&IsingConfig::new(w, 0.5, 1.09).unwrap()).unwrap())
            .collect();
        assert!(runs.windows(2).all(|w| w[1].coherence < w[0].coherence));
        // the normalized coherence moves the other way as the state purifies
        assert!(runs.windows(2).all(|w| w[1].gamma > w[0].gamma));
    }

    #[test]
    fn trajectory_grows_in_polarization_and_coherence() {
        let traj = ising_trajectory(&IsingConfig::new(1.0, 1.0, 1.09).unwrap(), 40).unwrap();
        let z: Vec<f64> = traj.iter().map(|b| b.z.abs()).collect();
        let r: Vec<f64> = traj.iter().map(|b| b.radius_xy()).collect();
        assert!(z[2..].windows(2).all(|w| w[1] >= w[0] - 1e-14));
        assert!(r[2..].windows(2).all(|w| w[1] >= w[0] - 1e-14));
        assert!(traj.last().unwrap().norm_sqr().sqrt() > 0.97);
    }

    #[test]
    fn config_validation() {
        assert!(IsingConfig::new(0.0, 0.1, 1.0).is_err());
        assert!(IsingConfig::new(1.0, -0.1, 1.0).is_err());
        assert!(IsingConfig::new(1.0, 0.1, f64::NAN).is_err());
    }
}
