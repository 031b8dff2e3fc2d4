//! Scenario runner: reads a JSON scenario, runs the matching analysis and
//! writes a CSV table plus a JSON manifest next to it.

mod output;
mod scenario;

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use cohcool::alpha::{compare_average, sample_ensemble, summarize_ensemble, AlphaRotRule, PhaseInterval};
use cohcool::bloch::{epsilon_star, gamma_inf};
use cohcool::hbac::{
    band_peak, confidence_band_sweep, extract_virtual_qubit, hbac_iterate, propagator_deviation, uniform_grid,
    HbacConfig,
};
use cohcool::ising::{ising_trajectory, ising_virtual_coherence, scaling_check, IsingConfig};
use cohcool::multireset::{ratio_limit, ratio_small_eps_expansion, resource_ratio, ResetCount};
use cohcool::region::region_map;
use cohcool::thermo::{thermo_series, ColdTemperature};
use cohcool::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

pub use output::{write_atomic, Field, Table};
pub use scenario::Kind;
use scenario::*;

/// Largest closed-form deviation accepted by `hbac-analytic-check`.
pub const ANALYTIC_TOLERANCE: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{name}: {0}", name = .0.name())]
    Numerical(cohcool::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }

    fn json(origin: &str, err: &serde_json::Error) -> Self {
        let text = err.to_string();
        let message = text.rsplit_once(" at line ").map_or(text.as_str(), |(m, _)| m);
        CliError::Config(format!("{origin}:{}:{}: {message}", err.line(), err.column()))
    }

    /// Out-of-range parameters are configuration errors and are pinned to
    /// the line of the offending key; anything else is numerical.
    fn from_core(err: cohcool::Error, source: &str, origin: &str) -> Self {
        let key = match &err {
            cohcool::Error::InvalidParameter { name, .. } => Some(*name),
            cohcool::Error::InvalidPolarization(_) => None,
            _ => return CliError::Numerical(err),
        };
        let line = key
            .and_then(|k| line_of(source, &format!("\"{k}\"")))
            .or_else(|| line_of(source, "\"params\""))
            .unwrap_or(1);
        CliError::Config(format!("{origin}:{line}: {}: {err}", err.name()))
    }
}

fn line_of(source: &str, needle: &str) -> Option<usize> {
    source.lines().position(|l| l.contains(needle)).map(|i| i + 1)
}

/// Command-line switches that modify a scenario.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RunOptions {
    /// Base directory for relative output paths.
    #[serde(skip)]
    pub out_dir: Option<PathBuf>,
    /// Overrides any `seed` in the scenario.
    pub seed: Option<u64>,
    /// Check the literal closed-form propagator rather than the derived one.
    pub verbatim_sm: bool,
    /// Cold temperature as the bare log-ratio of populations.
    pub tc_verbatim: bool,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub kind: Kind,
    pub csv: PathBuf,
    pub manifest: PathBuf,
    pub rows: usize,
    pub summary: Value,
}

struct Outcome {
    params: Value,
    table: Table,
    summary: Value,
}

pub fn run_scenario_file(path: &Path, options: &RunOptions) -> Result<RunReport, CliError> {
    let source = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    run_scenario(&source, &path.display().to_string(), options)
}

/// Runs the scenario in `source`; `origin` names it in error messages.
pub fn run_scenario(source: &str, origin: &str, options: &RunOptions) -> Result<RunReport, CliError> {
    let kind = scenario::kind_of(source, origin)?;
    let (outcome, output_path) = match kind {
        Kind::Bounds => dispatch(source, origin, bounds),
        Kind::Region => dispatch(source, origin, region),
        Kind::AlphaAverage => dispatch(source, origin, alpha_average),
        Kind::HbacRun => dispatch(source, origin, hbac_run),
        Kind::HbacAnalyticCheck => dispatch(source, origin, |p| analytic_check(p, options, origin)),
        Kind::ConfidenceBand => dispatch(source, origin, band),
        Kind::IsingSweep => dispatch(source, origin, ising_sweep),
        Kind::Thermo => dispatch(source, origin, |p| thermo(p, options)),
        Kind::MultiReset => dispatch(source, origin, multi_reset),
    }?;

    let csv = match &options.out_dir {
        Some(dir) => dir.join(&output_path),
        None => output_path,
    };
    let manifest = csv.with_extension("manifest.json");
    write_atomic(&csv, outcome.table.render().as_bytes())?;
    let record = json!({
        "tool": "cohcool",
        "version": cohcool::VERSION,
        "kind": kind,
        "params": outcome.params,
        "options": options,
        "output": csv.file_name().map(|f| f.to_string_lossy().into_owned()),
        "rows": outcome.table.len(),
        "summary": outcome.summary,
    });
    let mut text = serde_json::to_string_pretty(&record).expect("manifest is plain JSON");
    text.push('\n');
    write_atomic(&manifest, text.as_bytes())?;
    Ok(RunReport {
        kind,
        csv,
        manifest,
        rows: outcome.table.len(),
        summary: outcome.summary,
    })
}

fn dispatch<P, F>(source: &str, origin: &str, run: F) -> Result<(Outcome, PathBuf), CliError>
where
    P: serde::de::DeserializeOwned + Serialize,
    F: FnOnce(&P) -> Result<Outcome, RunError>,
{
    let env: Envelope<P> = scenario::parse(source, origin)?;
    let outcome = run(&env.params).map_err(|e| match e {
        RunError::Core(err) => CliError::from_core(err, source, origin),
        RunError::Cli(err) => err,
    })?;
    Ok((outcome, env.output_path))
}

enum RunError {
    Core(cohcool::Error),
    Cli(CliError),
}

impl From<cohcool::Error> for RunError {
    fn from(e: cohcool::Error) -> Self {
        RunError::Core(e)
    }
}

type Run = Result<Outcome, RunError>;

fn to_value<P: Serialize>(p: &P) -> Value {
    serde_json::to_value(p).expect("parameters serialize to JSON")
}

fn grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, RunError> {
    if points < 2 {
        return Err(cohcool::Error::InvalidParameter {
            name: "points",
            value: points as f64,
            reason: "need at least 2 grid points",
        }
        .into());
    }
    Ok(uniform_grid(lo, hi, points))
}

fn bounds(p: &BoundsParams) -> Run {
    let grid = grid(0.0, 1.0, p.points)?;
    let mut table = Table::new(&["pol_v", "gamma", "epsilon_star", "gamma_inf"]);
    for &pol_v in &p.pol_v {
        for &gamma in &grid {
            table.push(vec![
                pol_v.into(),
                gamma.into(),
                epsilon_star(pol_v, gamma)?.into(),
                // No rotation, no heating threshold.
                if gamma > 0.0 {
                    Some(gamma_inf(pol_v, gamma)?)
                } else {
                    None
                }
                .into(),
            ]);
        }
    }
    Ok(Outcome {
        params: to_value(p),
        table,
        summary: json!({}),
    })
}

fn region(p: &RegionParams) -> Run {
    let map = region_map(p.pol_v, p.resolution)?;
    let mut table = Table::new(&["gamma", "gamma_rot", "class"]);
    for i in 0..map.resolution {
        for j in 0..map.resolution {
            table.push(vec![
                map.coordinate(i).into(),
                map.coordinate(j).into(),
                map.get(i, j).label().into(),
            ]);
        }
    }
    Ok(Outcome {
        params: to_value(p),
        table,
        summary: json!({
            "cell": map.step(),
            "boundary_deviation": map.boundary_deviation()?,
        }),
    })
}

fn alpha_average(p: &AlphaAverageParams) -> Run {
    let interval = PhaseInterval::new(p.alpha_min, p.alpha_max)?;
    let rule = match p.rule {
        RotationRule::OrthogonalOffset => AlphaRotRule::OrthogonalOffset,
        RotationRule::FixedMidpoint => AlphaRotRule::FixedMidpoint,
    };
    let points = sample_ensemble(p.pol_v, p.gamma, interval, p.gamma_rot, rule, p.count)?;
    let mut table = Table::new(&["alpha", "epsilon_out", "coherence_out"]);
    for pt in &points {
        table.push(vec![pt.alpha.into(), pt.epsilon_out.into(), pt.coherence_out.into()]);
    }
    let summary = summarize_ensemble(p.pol_v, &points);
    let average = compare_average(p.pol_v, p.gamma, p.gamma_rot, interval)?;
    Ok(Outcome {
        params: to_value(p),
        table,
        summary: json!({
            "mean_epsilon": summary.mean_epsilon,
            "fraction_cooling": summary.fraction_cooling,
            "average_numeric": average.numeric,
            "average_analytic": average.analytic,
            "average_literal": average.literal,
            "literal_deviation": average.literal_deviation,
        }),
    })
}

fn hbac_config(p: &HbacParams) -> Result<HbacConfig, cohcool::Error> {
    let [re, im] = p.target_coherence;
    HbacConfig::new(p.eps1_0, p.eps2, p.eps3, p.xi, p.alpha_prime, p.cycles)?
        .with_target_coherence(Complex64::new(re, im))
}

fn hbac_run(p: &HbacParams) -> Run {
    let cfg = hbac_config(p)?;
    let run = hbac_iterate(&cfg)?;
    let mut table = Table::new(&["cycle", "eps_z", "coh_re", "coh_im", "trace_dist_to_fixed_point"]);
    for row in run.rows() {
        table.push(vec![
            row.cycle.into(),
            row.eps_z.into(),
            row.coherence.re.into(),
            row.coherence.im.into(),
            row.trace_dist_to_fixed_point.into(),
        ]);
    }
    let virtual_qubit = extract_virtual_qubit(&cfg)?;
    Ok(Outcome {
        params: to_value(p),
        table,
        summary: json!({
            "virtual_polarization": virtual_qubit.pol_v,
            "virtual_coherence": virtual_qubit.gamma,
            "virtual_phase": virtual_qubit.alpha,
            "coherent_bound": epsilon_star(virtual_qubit.pol_v, virtual_qubit.gamma)?,
            "final_eps_z": run.last().polarization(),
        }),
    })
}

fn random_config(rng: &mut ChaCha8Rng) -> Result<HbacConfig, cohcool::Error> {
    let chi = Complex64::from_polar(rng.gen_range(0.0..=1.0), rng.gen_range(0.0..TAU));
    HbacConfig::new(
        rng.gen_range(-1.0..=1.0),
        rng.gen_range(0.0..=0.9),
        rng.gen_range(0.0..=0.9),
        rng.gen_range(0.0..=1.0),
        rng.gen_range(0.0..TAU),
        rng.gen_range(0..=30),
    )?
    .with_target_coherence(chi)
}

fn analytic_check(p: &AnalyticCheckParams, options: &RunOptions, origin: &str) -> Run {
    let Some(seed) = options.seed.or(p.seed) else {
        return Err(RunError::Cli(CliError::Config(format!(
            "{origin}: hbac-analytic-check draws random configurations and needs a seed (params.seed or --seed)"
        ))));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = Table::new(&[
        "config",
        "cycles",
        "eps1_0",
        "eps2",
        "eps3",
        "xi",
        "alpha_prime",
        "derived_propagator",
        "derived_state",
        "verbatim_propagator",
        "verbatim_state",
    ]);
    let (mut derived, mut verbatim) = (0.0f64, 0.0f64);
    for i in 0..p.configs {
        let cfg = random_config(&mut rng)?;
        let dev = propagator_deviation(&cfg)?;
        derived = derived.max(dev.derived_propagator).max(dev.derived_state);
        verbatim = verbatim.max(dev.verbatim_propagator).max(dev.verbatim_state);
        table.push(vec![
            i.into(),
            cfg.cycles.into(),
            cfg.eps1_0.into(),
            cfg.eps2.into(),
            cfg.eps3.into(),
            cfg.xi.into(),
            cfg.alpha_prime.into(),
            dev.derived_propagator.into(),
            dev.derived_state.into(),
            dev.verbatim_propagator.into(),
            dev.verbatim_state.into(),
        ]);
    }
    let (form, checked) = if options.verbatim_sm {
        ("verbatim", verbatim)
    } else {
        ("derived", derived)
    };
    let params = AnalyticCheckParams {
        configs: p.configs,
        seed: Some(seed),
    };
    Ok(Outcome {
        params: to_value(&params),
        table,
        summary: json!({
            "checked_form": form,
            "max_deviation": checked,
            "tolerance": ANALYTIC_TOLERANCE,
            "passed": checked < ANALYTIC_TOLERANCE,
            "max_derived_deviation": derived,
            "max_verbatim_deviation": verbatim,
        }),
    })
}

fn band(p: &ConfidenceBandParams) -> Run {
    let grid = grid(p.gamma_rot_min, p.gamma_rot_max, p.points)?;
    let rows = confidence_band_sweep(p.pol_v, p.gamma_min, p.gamma_max, &grid)?;
    let mut table = Table::new(&[
        "gamma_rot",
        "eps_min",
        "eps_mid",
        "eps_max",
        "coh_min",
        "coh_mid",
        "coh_max",
    ]);
    for r in &rows {
        table.push(vec![
            r.gamma_rot.into(),
            r.eps_min.into(),
            r.eps_mid.into(),
            r.eps_max.into(),
            r.coh_min.into(),
            r.coh_mid.into(),
            r.coh_max.into(),
        ]);
    }
    let peak = band_peak(&rows).expect("grid has at least two points");
    Ok(Outcome {
        params: to_value(p),
        table,
        summary: json!({
            "peak_gamma_rot": peak.gamma_rot,
            "peak_eps_mid": peak.eps_mid,
            "peak_coh_mid": peak.coh_mid,
        }),
    })
}

fn ising_sweep(p: &IsingParams) -> Run {
    let configs = p
        .g_over_omega
        .iter()
        .map(|&ratio| IsingConfig::new(p.omega, ratio * p.omega, p.beta))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&["g_over_omega", "cycle", "x", "y", "z"]);
    let mut per_coupling = Vec::new();
    for (cfg, &ratio) in configs.iter().zip(&p.g_over_omega) {
        for (cycle, v) in ising_trajectory(cfg, p.cycles)?.iter().enumerate() {
            table.push(vec![ratio.into(), cycle.into(), v.x.into(), v.y.into(), v.z.into()]);
        }
        let c = ising_virtual_coherence(cfg)?;
        per_coupling.push(json!({
            "g_over_omega": ratio,
            "gamma": c.gamma,
            "coherence": c.coherence,
            "pol_v": c.pol_v,
        }));
    }
    let scaling = if configs.iter().filter(|c| c.g > 0.0).count() >= 2 {
        let report = scaling_check(&configs)?;
        json!({ "constant": report.constant, "spearman": report.spearman })
    } else {
        Value::Null
    };
    Ok(Outcome {
        params: to_value(p),
        table,
        summary: json!({ "couplings": per_coupling, "scaling": scaling }),
    })
}

fn thermo(p: &ThermoParams, options: &RunOptions) -> Run {
    let cfg = hbac_config(&p.protocol())?;
    let cold = if options.tc_verbatim {
        ColdTemperature::Logarithm
    } else {
        ColdTemperature::Reciprocal
    };
    let records = thermo_series(&cfg, p.omega, cold)?;
    let mut table = Table::new(&["cycle", "Q", "W", "C1", "Q_coh", "zeta_coh", "J_coh", "zeta_carnot"]);
    for r in &records {
        table.push(vec![
            r.cycle.into(),
            r.heat.into(),
            r.work.into(),
            r.coherent_energetic.into(),
            r.coherent_heat.into(),
            r.cop.into(),
            r.cooling_power.into(),
            r.carnot_cop.into(),
        ]);
    }
    let exceeds_carnot = records
        .iter()
        .filter(|r| matches!((r.cop, r.carnot_cop), (Some(z), Some(c)) if z > c))
        .count();
    Ok(Outcome {
        params: to_value(p),
        table,
        summary: json!({
            "cold_temperature": if options.tc_verbatim { "logarithm" } else { "reciprocal" },
            "cycles_above_carnot": exceeds_carnot,
        }),
    })
}

fn multi_reset(p: &MultiResetParams) -> Run {
    let grid = grid(p.eps_min, p.eps_max, p.points)?;
    let mut table = Table::new(&["r", "eps_a", "ratio"]);
    let mut fits = Vec::new();
    for &r in &p.resets {
        let count = ResetCount::new(r)?;
        for &eps in &grid {
            table.push(vec![r.into(), eps.into(), resource_ratio(count, eps)?.into()]);
        }
        let fit = ratio_small_eps_expansion(count)?;
        fits.push(json!({
            "r": r,
            "constant": fit.constant,
            "linear": fit.linear,
            "quadratic": fit.quadratic,
            "max_residual": fit.max_residual,
            "limit": ratio_limit(count),
        }));
    }
    Ok(Outcome {
        params: to_value(p),
        table,
        summary: json!({ "small_eps_fits": fits }),
    })
}
