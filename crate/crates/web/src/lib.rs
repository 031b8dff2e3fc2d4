//! Browser bindings for the interactive demo in `www/`.
//!
//! Tables come back as flat `Float64Array`s with a fixed stride so the page
//! can plot them without any JSON round trip.

use cohcool::bloch::epsilon_star;
use cohcool::hbac::{band_peak, confidence_band_sweep, extract_virtual_qubit, hbac_iterate, uniform_grid, HbacConfig};
use cohcool::region::{region_map, Cell};
use wasm_bindgen::prelude::*;

/// Values per row of [`confidence_band`]: `gamma_rot, eps_min, eps_mid, eps_max, coh_mid`.
pub const BAND_STRIDE: usize = 5;

/// Values per row of [`hbac_trajectory`]: `x, y, z, trace distance to the fixed point`.
pub const TRAJECTORY_STRIDE: usize = 4;

fn message(err: cohcool::Error) -> String {
    format!("{}: {err}", err.name())
}

/// Final polarization against the rotation tuned for `gamma_rot`, for the
/// two ends and the midpoint of the coherence interval.
#[wasm_bindgen]
pub fn confidence_band(pol_v: f64, gamma_min: f64, gamma_max: f64, points: usize) -> Result<Vec<f64>, String> {
    if points < 2 {
        return Err("need at least 2 grid points".into());
    }
    let rows = confidence_band_sweep(pol_v, gamma_min, gamma_max, &uniform_grid(0.0, 1.0, points)).map_err(message)?;
    Ok(rows
        .iter()
        .flat_map(|r| [r.gamma_rot, r.eps_min, r.eps_mid, r.eps_max, r.coh_mid])
        .collect())
}

/// `[gamma_rot, eps_mid]` at the best rotation for the interval midpoint.
#[wasm_bindgen]
pub fn band_optimum(pol_v: f64, gamma_min: f64, gamma_max: f64, points: usize) -> Result<Vec<f64>, String> {
    if points < 2 {
        return Err("need at least 2 grid points".into());
    }
    let rows = confidence_band_sweep(pol_v, gamma_min, gamma_max, &uniform_grid(0.0, 1.0, points)).map_err(message)?;
    let peak = band_peak(&rows).expect("grid is nonempty");
    Ok(vec![peak.gamma_rot, peak.eps_mid])
}

/// Cell codes row-major in true coherence: 0 heats, 1 boundary, 2 cools.
#[wasm_bindgen]
pub fn cooling_regions(pol_v: f64, resolution: usize) -> Result<Vec<u8>, String> {
    let map = region_map(pol_v, resolution).map_err(message)?;
    Ok(map
        .cells
        .iter()
        .map(|c| match c {
            Cell::Heats => 0,
            Cell::Boundary => 1,
            Cell::Cools => 2,
        })
        .collect())
}

/// Target Bloch vector for cycles `0..=cycles`, starting maximally mixed.
#[wasm_bindgen]
pub fn hbac_trajectory(eps2: f64, eps3: f64, xi: f64, alpha_prime: f64, cycles: usize) -> Result<Vec<f64>, String> {
    let cfg = HbacConfig::new(0.0, eps2, eps3, xi, alpha_prime, cycles).map_err(message)?;
    let run = hbac_iterate(&cfg).map_err(message)?;
    Ok(run
        .bloch()
        .iter()
        .zip(run.rows())
        .flat_map(|(v, row)| [v.x, v.y, v.z, row.trace_dist_to_fixed_point])
        .collect())
}

/// `[pol_v, gamma, alpha, bound]` for the virtual qubit the protocol settles
/// into and the polarization a matched final rotation reaches from it.
#[wasm_bindgen]
pub fn hbac_limit(eps2: f64, eps3: f64, xi: f64, alpha_prime: f64) -> Result<Vec<f64>, String> {
    let cfg = HbacConfig::new(0.0, eps2, eps3, xi, alpha_prime, 0).map_err(message)?;
    let v = extract_virtual_qubit(&cfg).map_err(message)?;
    let bound = epsilon_star(v.pol_v, v.gamma).map_err(message)?;
    Ok(vec![v.pol_v, v.gamma, v.alpha, bound])
}
