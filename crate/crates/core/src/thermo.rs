//! Per-cycle heat, work and coherence-aware coefficient of performance.
//!
//! Snapshots are taken around the compression unitary: "before" is the joint
//! state right after the refresh, "after" is the joint state right after the
//! unitary. Qubit Hamiltonians are `diag(0, omega)`.

use crate::bloch::inverse_temperature;
use crate::hbac::{compression_snapshots, HbacConfig};
use crate::quantum::{c, hermitian_eigen, partial_trace, CMat, DensityMatrix};
use crate::{Error, Result};

/// Spectra of a state and a Hamiltonian with the overlaps between their eigenbases.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralAmplitudes {
    /// Eigenvalues of the Hamiltonian, descending.
    pub energies: Vec<f64>,
    /// Eigenvalues of the state, descending.
    pub populations: Vec<f64>,
    /// `overlaps[k][a] = |<k|a>|^2` with `|k>` the Hamiltonian and `|a>` the state eigenvectors.
    pub overlaps: Vec<Vec<f64>>,
}

fn check_qubit_op(m: &CMat) -> Result<()> {
    if m.nrows() != 2 || m.ncols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: m.nrows(),
        });
    }
    Ok(())
}

/// Degenerate states take the Hamiltonian eigenbasis, ground state first,
/// so an exactly mixed state contributes nothing to basis-change terms.
pub fn spectral_amplitudes(rho: &DensityMatrix, h: &CMat) -> Result<SpectralAmplitudes> {
    check_qubit_op(rho.entries())?;
    check_qubit_op(h)?;
    let (energies, h_vecs) = hermitian_eigen(h);
    let (populations, mut rho_vecs) = hermitian_eigen(rho.entries());
    if (populations[0] - populations[1]).abs() < crate::TOL.degenerate_gap {
        rho_vecs = CMat::from_columns(&[h_vecs.column(1).into_owned(), h_vecs.column(0).into_owned()]);
    }
    let overlaps = (0..2)
        .map(|k| {
            (0..2)
                .map(|a| h_vecs.column(k).dotc(&rho_vecs.column(a)).norm_sqr())
                .collect()
        })
        .collect();
    Ok(SpectralAmplitudes {
        energies,
        populations,
        overlaps,
    })
}

/// `diag(0, omega)`.
pub fn qubit_hamiltonian(omega: f64) -> CMat {
    let mut h = CMat::zeros(2, 2);
    h[(1, 1)] = c(omega, 0.0);
    h
}

/// Heat into the target and work on all three qubits over one compression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Energetics {
    pub heat: f64,
    pub work: f64,
}

pub fn cycle_energetics(before: &DensityMatrix, after: &DensityMatrix, omega: f64) -> Result<Energetics> {
    for s in [before, after] {
        if s.dim() != 8 {
            return Err(Error::DimensionMismatch {
                expected: 8,
                got: s.dim(),
            });
        }
    }
    let h = qubit_hamiltonian(omega);
    let mut changes = [0.0; 3];
    for (i, change) in changes.iter_mut().enumerate() {
        let old = partial_trace(before, &[i])?.expectation(&h);
        let new = partial_trace(after, &[i])?.expectation(&h);
        *change = new - old;
    }
    Ok(Energetics {
        heat: changes[0],
        work: changes.iter().sum(),
    })
}

/// `sum_ka w_k p'_a (|c'_ka|^2 - |c_ka|^2)`: energy change of the target
/// attributed to the rotation of its eigenbasis.
pub fn coherent_energetic(before: &DensityMatrix, after: &DensityMatrix, h: &CMat) -> Result<f64> {
    let old = spectral_amplitudes(before, h)?;
    let new = spectral_amplitudes(after, h)?;
    let mut total = 0.0;
    for k in 0..2 {
        for a in 0..2 {
            total += new.energies[k] * new.populations[a] * (new.overlaps[k][a] - old.overlaps[k][a]);
        }
    }
    Ok(total)
}

/// `sum_ka w_k (p'_a - p_a) |c_ka|^2`: energy change from population flow alone.
pub fn population_heat(before: &DensityMatrix, after: &DensityMatrix, h: &CMat) -> Result<f64> {
    let old = spectral_amplitudes(before, h)?;
    let new = spectral_amplitudes(after, h)?;
    let mut total = 0.0;
    for k in 0..2 {
        for a in 0..2 {
            total += old.energies[k] * (new.populations[a] - old.populations[a]) * old.overlaps[k][a];
        }
    }
    Ok(total)
}

/// How the cold-side temperature is read off the target polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColdTemperature {
    /// `omega / ln[(1 + eps) / (1 - eps)]`.
    #[default]
    Reciprocal,
    /// `ln[(1 + eps) / (1 - eps)]` taken literally.
    Logarithm,
}

impl ColdTemperature {
    pub fn evaluate(self, eps: f64, omega: f64) -> Option<f64> {
        let beta = inverse_temperature(eps, omega).ok()?;
        let t = match self {
            ColdTemperature::Reciprocal => 1.0 / beta,
            ColdTemperature::Logarithm => beta * omega,
        };
        t.is_finite().then_some(t)
    }
}

/// `T_c / (T_h - T_c)`, absent when undefined.
pub fn carnot_cop(cold: Option<f64>, hot: Option<f64>) -> Option<f64> {
    let (tc, th) = (cold?, hot?);
    let z = tc / (th - tc);
    z.is_finite().then_some(z)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoRecord {
    pub cycle: usize,
    pub heat: f64,
    pub work: f64,
    pub coherent_energetic: f64,
    /// Heat minus the coherent-energetic term.
    pub coherent_heat: f64,
    /// `-coherent_heat / work`; absent when no work is done.
    pub cop: Option<f64>,
    /// `|coherent_heat(n + 1) - coherent_heat(n)|`.
    pub cooling_power: f64,
    pub carnot_cop: Option<f64>,
    pub target_polarization: f64,
}

struct CycleTerms {
    heat: f64,
    work: f64,
    coherent_energetic: f64,
    target_polarization: f64,
}

/// Thermodynamic record for cycles `0 .. config.cycles`; one extra cycle is
/// simulated for the last cooling-power difference.
pub fn thermo_series(config: &HbacConfig, omega: f64, cold: ColdTemperature) -> Result<Vec<ThermoRecord>> {
    if config.cycles < 2 {
        return Err(Error::param("cycles", config.cycles as f64, "need at least 2 cycles"));
    }
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::param("omega", omega, "must be positive and finite"));
    }
    config.validate()?;
    let rho23 = config.reset_state()?;
    let h = qubit_hamiltonian(omega);
    let mut target = config.initial_state()?;
    let mut terms = Vec::with_capacity(config.cycles + 1);
    for _ in 0..=config.cycles {
        let (before, after) = compression_snapshots(&target, &rho23)?;
        let next = partial_trace(&after, &[0])?;
        let e = cycle_energetics(&before, &after, omega)?;
        terms.push(CycleTerms {
            heat: e.heat,
            work: e.work,
            coherent_energetic: coherent_energetic(&target, &next, &h)?,
            target_polarization: target.polarization(),
        });
        target = next;
    }

    let eps_bath = 0.5 * (config.eps2 + config.eps3);
    let hot = ColdTemperature::Reciprocal.evaluate(eps_bath, omega);
    let coherent_heat = |t: &CycleTerms| t.heat - t.coherent_energetic;
    Ok(terms
        .windows(2)
        .enumerate()
        .map(|(cycle, pair)| {
            let t = &pair[0];
            let q = coherent_heat(t);
            ThermoRecord {
                cycle,
                heat: t.heat,
                work: t.work,
                coherent_energetic: t.coherent_energetic,
                coherent_heat: q,
                cop: (t.work != 0.0).then(|| -q / t.work),
                cooling_power: (coherent_heat(&pair[1]) - q).abs(),
                carnot_cop: carnot_cop(cold.evaluate(t.target_polarization, omega), hot),
                target_polarization: t.target_polarization,
            }
        })
        .collect())
}
