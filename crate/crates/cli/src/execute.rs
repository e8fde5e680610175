//! Task dispatch and report assembly.

use std::path::Path;
use std::time::{Duration, Instant};

use hom_core::analysis::{
    beam_splitter_decompose, brute_force_output, dip_scan, hom_kernel, interference_residual, matched_inputs, propagate,
    schmidt_decompose, DecompositionReport, OutputProbabilities, MAX_ORACLE_MODES,
};
use hom_core::kernel::UNITARITY_TOL;
use hom_core::{
    cw_bragg, hermite_gauss_family, moving_mirror, passive_splitter, synthesize_kernel, Band, BlockKernel, BraggParams,
    Execution, FrequencyGrid, GaussianShape, MirrorParams, ModeBasis, SplitterCoefficients, UnitarityReport, WavePacket,
};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};
use crate::output::{emit_curve, write_json};
use crate::scenario::{DeviceConfig, GridConfig, PacketConfig, PacketsConfig, Scenario, TaskConfig, TaskKind};
use crate::spec_file::SpecDocument;

/// Largest probability-sum error tolerated in a report.
pub const CONSERVATION_TOL: f64 = 1e-10;
/// Largest splitter-decomposition residual tolerated in a report.
pub const DECOMPOSITION_TOL: f64 = 1e-8;
/// Largest disagreement with the Fock-expansion oracle tolerated by `verify`.
pub const ORACLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub config_sha256: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_n_override: Option<usize>,
}

impl Provenance {
    pub fn for_config(config_text: &[u8], grid_n_override: Option<usize>) -> Self {
        Self {
            config_sha256: hex::encode(Sha256::digest(config_text)),
            version: env!("CARGO_PKG_VERSION").to_string(),
            grid_n_override,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeCounts {
    pub red: usize,
    pub blue: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchmidtSummary {
    pub sigmas: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleCheck {
    pub probabilities: OutputProbabilities,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanSummary {
    pub points: usize,
    pub min_delay: f64,
    pub min_coincidence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub task: TaskKind,
    pub device: String,
    pub modes: ModeCounts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probabilities: Option<OutputProbabilities>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_coincidence: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_residual: Option<f64>,
    pub schmidt: SchmidtSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitarity: Option<UnitarityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanSummary>,
    /// Checks that exceeded their tolerance.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
    /// Files written, relative to the output directory.
    pub outputs: Vec<String>,
    pub provenance: Provenance,
    /// Wall-clock time; kept out of the serialized report.
    #[serde(skip)]
    pub elapsed: Duration,
}

fn grid(config: &GridConfig, band: Band) -> CliResult<FrequencyGrid> {
    Ok(FrequencyGrid::uniform(config.center, config.span, config.n, band)?)
}

fn missing(what: &str) -> CliError {
    CliError::Validation(format!("scenario is missing {what}"))
}

/// Builds the device kernel described by the scenario.
pub fn build_kernel(scenario: &Scenario) -> CliResult<BlockKernel> {
    let red = || grid(scenario.grids.red.as_ref().ok_or_else(|| missing("grids.red"))?, Band::Red);
    match &scenario.device {
        DeviceConfig::Passive { tau, rho } => Ok(passive_splitter(SplitterCoefficients::new(*tau, *rho)?, &red()?)),
        DeviceConfig::Mirror { tau, rho, beta } => {
            let params = MirrorParams::new(SplitterCoefficients::new(*tau, *rho)?, *beta)?;
            Ok(moving_mirror(params, &red()?)?)
        }
        DeviceConfig::CwBragg { tau, rho, shift } => {
            let params = BraggParams { coefficients: SplitterCoefficients::new(*tau, *rho)?, shift: *shift };
            Ok(cw_bragg(params, &red()?)?)
        }
        DeviceConfig::Synthesized { spec } => {
            let blue = grid(scenario.grids.blue.as_ref().ok_or_else(|| missing("grids.blue"))?, Band::Blue)?;
            let basis = ModeBasis::new(red()?, blue);
            let doc = SpecDocument::load(&scenario.resolve(spec))?;
            Ok(synthesize_kernel(&doc.build(&basis)?, &basis)?)
        }
        DeviceConfig::FromFile { path } => {
            let path = scenario.resolve(path);
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            BlockKernel::from_json(&text).map_err(|e| CliError::Parse { path, message: e.to_string() })
        }
    }
}

fn packet(config: &PacketConfig, grid: &FrequencyGrid) -> CliResult<WavePacket> {
    match *config {
        PacketConfig::Gaussian { center, width, chirp, delay } => {
            Ok(WavePacket::gaussian(grid, GaussianShape::new(center, width).with_chirp(chirp).with_delay(delay))?)
        }
        PacketConfig::HermiteGauss { center, width, order, delay } => {
            let family = hermite_gauss_family(grid, center, width, order + 1)?;
            Ok(family[order].delayed(delay))
        }
    }
}

struct Inputs {
    red: WavePacket,
    blue: WavePacket,
    predicted: Option<f64>,
}

fn build_inputs(config: &PacketsConfig, kernel: &BlockKernel) -> CliResult<Inputs> {
    match config {
        PacketsConfig::Matched(n) => {
            let m = matched_inputs(kernel, n - 1)?;
            Ok(Inputs { red: m.red, blue: m.blue, predicted: Some(m.predicted_coincidence) })
        }
        PacketsConfig::Explicit { red, blue } => Ok(Inputs {
            red: packet(red, kernel.basis().band1())?,
            blue: packet(blue, kernel.basis().band2())?,
            predicted: None,
        }),
    }
}

fn check_total(p: &OutputProbabilities, failures: &mut Vec<String>) {
    let err = (p.total() - 1.0).abs();
    if err > CONSERVATION_TOL {
        failures.push(format!("probabilities sum to 1 only within {err:.3e} (tolerance {CONSERVATION_TOL:e})"));
    }
}

/// Runs the scenario's task, writing `report.json` and any task outputs into `out_dir`.
pub fn execute(scenario: &Scenario, out_dir: &Path, provenance: Provenance) -> CliResult<RunReport> {
    let start = Instant::now();
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let kernel = build_kernel(scenario)?;
    let k = hom_kernel(&kernel)?;
    let schmidt = schmidt_decompose(&k);
    let basis = kernel.basis();

    let mut report = RunReport {
        task: scenario.task.kind(),
        device: scenario.device.name().to_string(),
        modes: ModeCounts { red: basis.band1().len(), blue: basis.band2().len() },
        probabilities: None,
        predicted_coincidence: None,
        condition_residual: None,
        schmidt: SchmidtSummary { sigmas: schmidt.values.clone() },
        unitarity: None,
        oracle: None,
        decomposition_residual: None,
        scan: None,
        failures: Vec::new(),
        outputs: Vec::new(),
        provenance,
        elapsed: Duration::ZERO,
    };
    let inputs = scenario.packets.as_ref().map(|p| build_inputs(p, &kernel)).transpose()?;
    if let Some(inputs) = &inputs {
        let p = propagate(&kernel, &inputs.red, &inputs.blue)?;
        check_total(&p, &mut report.failures);
        report.probabilities = Some(p);
        report.predicted_coincidence = inputs.predicted;
        report.condition_residual = Some(interference_residual(&inputs.red, &inputs.blue, &k)?);
    }

    match &scenario.task {
        TaskConfig::Run => {}
        TaskConfig::Scan { delays } => {
            let inputs = inputs.as_ref().ok_or_else(|| missing("packets"))?;
            let curve = dip_scan(&kernel, &inputs.red, &inputs.blue, &delays.delays(), Execution::default())?;
            let min = curve.iter().min_by(|a, b| a.coincidence.total_cmp(&b.coincidence)).copied();
            emit_curve(&curve, &out_dir.join("curve.csv"))?;
            report.outputs.push("curve.csv".into());
            if let Some(min) = min {
                report.scan =
                    Some(ScanSummary { points: curve.len(), min_delay: min.delay, min_coincidence: min.coincidence });
            }
        }
        TaskConfig::Decompose => {
            let d = beam_splitter_decompose(&kernel)?;
            if d.residual > DECOMPOSITION_TOL {
                report.failures.push(format!(
                    "decomposition residual {:.3e} exceeds {DECOMPOSITION_TOL:e}",
                    d.residual
                ));
            }
            report.decomposition_residual = Some(d.residual);
            write_json(&DecompositionReport::new(&d, &schmidt, schmidt.residual(&k)), &out_dir.join("decomposition.json"))?;
            report.outputs.push("decomposition.json".into());
        }
        TaskConfig::Verify => {
            let u = kernel.verify_unitarity();
            if u.max() > UNITARITY_TOL {
                report.failures.push(format!("unitarity residual {:.3e} exceeds {UNITARITY_TOL:e}", u.max()));
            }
            report.unitarity = Some(u);
            if let Some(&top) = schmidt.values.first() {
                if top > 1.0 + UNITARITY_TOL {
                    report.failures.push(format!("leading Schmidt value {top} exceeds 1"));
                }
            }
            if let (Some(inputs), Some(p)) = (&inputs, report.probabilities) {
                if basis.len() <= MAX_ORACLE_MODES {
                    let o = brute_force_output(&kernel, &inputs.red, &inputs.blue)?;
                    let dev = (o.rr - p.rr).abs().max((o.rb - p.rb).abs()).max((o.bb - p.bb).abs());
                    if dev > ORACLE_TOL {
                        report.failures.push(format!("Fock-expansion oracle deviates by {dev:.3e}"));
                    }
                    report.oracle = Some(OracleCheck { probabilities: o, max_deviation: dev });
                }
            }
        }
        TaskConfig::Synthesize => {
            let path = out_dir.join("kernel.json");
            let mut text = kernel.to_json();
            if !text.ends_with('\n') {
                text.push('\n');
            }
            std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
            report.outputs.push("kernel.json".into());
            report.unitarity = Some(kernel.verify_unitarity());
        }
    }

    report.outputs.push("report.json".into());
    write_json(&report, &out_dir.join("report.json"))?;
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Loads, executes and reports on the scenario at `config`, with an optional grid override.
pub fn run_config(config: &Path, out_dir: &Path, grid_n: Option<usize>, task: Option<TaskKind>) -> CliResult<RunReport> {
    let bytes = std::fs::read(config).map_err(|e| CliError::io(config, e))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|e| CliError::Parse { path: config.to_path_buf(), message: e.to_string() })?;
    let mut scenario = crate::scenario::parse_scenario(&text, config)?;
    if let Some(task) = task {
        if scenario.task.kind() != task {
            return Err(CliError::Validation(format!(
                "subcommand `{task}` does not match the scenario task `{}`",
                scenario.task.kind()
            )));
        }
    }
    if let Some(n) = grid_n {
        scenario = scenario.with_grid_n(n)?;
    }
    execute(&scenario, out_dir, Provenance::for_config(&bytes, grid_n))
}
