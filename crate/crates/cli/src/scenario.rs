//! Scenario files: a `kind`, a kind-specific `params` object and an `output_path`.

use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Bounds,
    Region,
    AlphaAverage,
    HbacRun,
    HbacAnalyticCheck,
    ConfidenceBand,
    IsingSweep,
    Thermo,
    MultiReset,
}

/// Only the discriminant; everything else is checked in the typed pass.
#[derive(Deserialize)]
struct Header {
    kind: Kind,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Envelope<P> {
    /// Already read by the header pass; kept so the key is accepted.
    #[allow(dead_code)]
    pub kind: Kind,
    pub params: P,
    pub output_path: PathBuf,
}

/// Reads the discriminant first so the typed pass can report errors
/// against the original text, with line and column intact.
pub fn kind_of(source: &str, origin: &str) -> Result<Kind, CliError> {
    serde_json::from_str::<Header>(source)
        .map(|h| h.kind)
        .map_err(|e| CliError::json(origin, &e))
}

pub fn parse<P: DeserializeOwned>(source: &str, origin: &str) -> Result<Envelope<P>, CliError> {
    serde_json::from_str(source).map_err(|e| CliError::json(origin, &e))
}

fn default_points() -> usize {
    101
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsParams {
    pub pol_v: Vec<f64>,
    #[serde(default = "default_points")]
    pub points: usize,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RegionParams {
    pub pol_v: f64,
    #[serde(default = "default_points")]
    pub resolution: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RotationRule {
    OrthogonalOffset,
    FixedMidpoint,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaAverageParams {
    pub pol_v: f64,
    pub gamma: f64,
    pub gamma_rot: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
    #[serde(default = "default_points")]
    pub count: usize,
    pub rule: RotationRule,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct HbacParams {
    #[serde(default)]
    pub eps1_0: f64,
    /// `[re, im]` of the initial target coherence.
    #[serde(default)]
    pub target_coherence: [f64; 2],
    pub eps2: f64,
    pub eps3: f64,
    pub xi: f64,
    #[serde(default)]
    pub alpha_prime: f64,
    pub cycles: usize,
}

fn default_configs() -> usize {
    20
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticCheckParams {
    #[serde(default = "default_configs")]
    pub configs: usize,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_band_points() -> usize {
    10001
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConfidenceBandParams {
    pub pol_v: f64,
    pub gamma_min: f64,
    pub gamma_max: f64,
    #[serde(default)]
    pub gamma_rot_min: f64,
    #[serde(default = "one")]
    pub gamma_rot_max: f64,
    #[serde(default = "default_band_points")]
    pub points: usize,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct IsingParams {
    #[serde(default = "one")]
    pub omega: f64,
    pub beta: f64,
    pub g_over_omega: Vec<f64>,
    pub cycles: usize,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ThermoParams {
    #[serde(default)]
    pub eps1_0: f64,
    #[serde(default)]
    pub target_coherence: [f64; 2],
    pub eps2: f64,
    pub eps3: f64,
    pub xi: f64,
    #[serde(default)]
    pub alpha_prime: f64,
    pub cycles: usize,
    #[serde(default = "one")]
    pub omega: f64,
}

impl ThermoParams {
    pub fn protocol(&self) -> HbacParams {
        HbacParams {
            eps1_0: self.eps1_0,
            target_coherence: self.target_coherence,
            eps2: self.eps2,
            eps3: self.eps3,
            xi: self.xi,
            alpha_prime: self.alpha_prime,
            cycles: self.cycles,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MultiResetParams {
    pub resets: Vec<u32>,
    pub eps_min: f64,
    pub eps_max: f64,
    #[serde(default = "default_points")]
    pub points: usize,
}
