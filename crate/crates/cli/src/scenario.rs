//! Scenario files: one JSON document per simulation.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::path::{Path, PathBuf};

use hom_core::{MirrorParams, SplitterCoefficients};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Schema version this build reads.
pub const SCHEMA_VERSION: u32 = 1;

/// Default transmissivity and reflectivity (balanced splitter).
pub const DEFAULT_TAU: f64 = FRAC_1_SQRT_2;
pub const DEFAULT_RHO: f64 = FRAC_1_SQRT_2;

fn default_tau() -> f64 {
    DEFAULT_TAU
}

fn default_rho() -> f64 {
    DEFAULT_RHO
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    pub device: DeviceConfig,
    #[serde(default)]
    pub grids: GridsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub packets: Option<PacketsConfig>,
    pub task: TaskConfig,
    /// Directory that relative paths in the scenario resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DeviceConfig {
    Passive {
        #[serde(default = "default_tau")]
        tau: f64,
        #[serde(default = "default_rho")]
        rho: f64,
    },
    Mirror {
        #[serde(default = "default_tau")]
        tau: f64,
        #[serde(default = "default_rho")]
        rho: f64,
        /// Mirror speed v/c.
        beta: f64,
    },
    CwBragg {
        #[serde(default = "default_tau")]
        tau: f64,
        #[serde(default = "default_rho")]
        rho: f64,
        /// Frequency offset Ω between the bands (rad/s).
        shift: f64,
    },
    Synthesized {
        /// Schmidt spec document.
        spec: PathBuf,
    },
    FromFile {
        /// Kernel document.
        path: PathBuf,
    },
}

impl DeviceConfig {
    pub fn name(&self) -> &'static str {
        match self {
            DeviceConfig::Passive { .. } => "passive",
            DeviceConfig::Mirror { .. } => "mirror",
            DeviceConfig::CwBragg { .. } => "cw_bragg",
            DeviceConfig::Synthesized { .. } => "synthesized",
            DeviceConfig::FromFile { .. } => "from_file",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub center: f64,
    pub span: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub red: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blue: Option<GridConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum PacketConfig {
    Gaussian {
        center: f64,
        width: f64,
        #[serde(default)]
        chirp: f64,
        #[serde(default)]
        delay: f64,
    },
    HermiteGauss {
        center: f64,
        width: f64,
        order: usize,
        #[serde(default)]
        delay: f64,
    },
}

/// Explicit packets per band, or `"matched:n"` for the n-th Schmidt pair (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPackets", into = "RawPackets")]
pub enum PacketsConfig {
    Matched(usize),
    Explicit { red: PacketConfig, blue: PacketConfig },
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawPackets {
    Tag(String),
    Pair {
        red: PacketConfig,
        blue: PacketConfig,
    },
}

impl TryFrom<RawPackets> for PacketsConfig {
    type Error = String;

    fn try_from(raw: RawPackets) -> Result<Self, String> {
        match raw {
            RawPackets::Pair { red, blue } => Ok(PacketsConfig::Explicit { red, blue }),
            RawPackets::Tag(tag) => tag
                .strip_prefix("matched:")
                .and_then(|n| n.parse::<usize>().ok())
                .map(PacketsConfig::Matched)
                .ok_or_else(|| format!("expected \"matched:<n>\" or {{red, blue}} packets, got \"{tag}\"")),
        }
    }
}

impl From<PacketsConfig> for RawPackets {
    fn from(p: PacketsConfig) -> Self {
        match p {
            PacketsConfig::Matched(n) => RawPackets::Tag(format!("matched:{n}")),
            PacketsConfig::Explicit { red, blue } => RawPackets::Pair { red, blue },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DelaySpec {
    List(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl DelaySpec {
    pub fn delays(&self) -> Vec<f64> {
        match self {
            DelaySpec::List(v) => v.clone(),
            DelaySpec::Range { start, stop, count } => match count {
                0 => vec![],
                1 => vec![*start],
                _ => {
                    let step = (stop - start) / (*count - 1) as f64;
                    (0..*count).map(|i| start + step * i as f64).collect()
                }
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum TaskConfig {
    Run,
    Scan { delays: DelaySpec },
    Decompose,
    Verify,
    Synthesize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    Run,
    Scan,
    Decompose,
    Verify,
    Synthesize,
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            TaskKind::Run => "run",
            TaskKind::Scan => "scan",
            TaskKind::Decompose => "decompose",
            TaskKind::Verify => "verify",
            TaskKind::Synthesize => "synthesize",
        };
        f.write_str(name)
    }
}

impl TaskConfig {
    pub fn kind(&self) -> TaskKind {
        match self {
            TaskConfig::Run => TaskKind::Run,
            TaskConfig::Scan { .. } => TaskKind::Scan,
            TaskConfig::Decompose => TaskKind::Decompose,
            TaskConfig::Verify => TaskKind::Verify,
            TaskConfig::Synthesize => TaskKind::Synthesize,
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn check_grid(name: &str, g: &GridConfig) -> CliResult<()> {
    if g.n == 0 {
        return Err(invalid(format!("grids.{name}.n must be at least 1")));
    }
    if !(g.span.is_finite() && g.span > 0.0) {
        return Err(invalid(format!("grids.{name}.span must be positive, got {}", g.span)));
    }
    let lowest = g.center - g.span / 2.0;
    if !(lowest.is_finite() && lowest > 0.0) {
        return Err(invalid(format!("grids.{name} must lie at positive frequencies (lowest point {lowest})")));
    }
    Ok(())
}

fn check_coefficients(tau: f64, rho: f64) -> CliResult<SplitterCoefficients> {
    SplitterCoefficients::new(tau, rho)
        .map_err(|_| invalid(format!("device coefficients tau={tau}, rho={rho} violate τ²+ρ²=1 (τ, ρ ≥ 0)")))
}

fn check_packet(name: &str, p: &PacketConfig) -> CliResult<()> {
    let (center, width, delay) = match *p {
        PacketConfig::Gaussian { center, width, chirp, delay } => {
            if !chirp.is_finite() {
                return Err(invalid(format!("packets.{name}.chirp must be finite")));
            }
            (center, width, delay)
        }
        PacketConfig::HermiteGauss { center, width, delay, .. } => (center, width, delay),
    };
    if !(center.is_finite() && width.is_finite() && width > 0.0 && delay.is_finite()) {
        return Err(invalid(format!("packets.{name} needs finite center and delay and a positive width")));
    }
    Ok(())
}

impl Scenario {
    /// Checks every precondition that does not require building the kernel.
    pub fn validate(&self) -> CliResult<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(invalid(format!(
                "unsupported schema_version {} (this build reads {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let derived_blue = |device: &str| -> CliResult<()> {
            if self.grids.red.is_none() {
                return Err(invalid(format!("device {device} needs grids.red")));
            }
            if self.grids.blue.is_some() {
                return Err(invalid(format!("device {device} derives the blue grid from grids.red; remove grids.blue")));
            }
            Ok(())
        };
        match &self.device {
            DeviceConfig::Passive { tau, rho } => {
                check_coefficients(*tau, *rho)?;
                derived_blue("passive")?;
            }
            DeviceConfig::Mirror { tau, rho, beta } => {
                let c = check_coefficients(*tau, *rho)?;
                MirrorParams::new(c, *beta)
                    .map_err(|_| invalid(format!("mirror speed must satisfy |beta| < 1, got beta={beta}")))?;
                derived_blue("mirror")?;
            }
            DeviceConfig::CwBragg { tau, rho, shift } => {
                check_coefficients(*tau, *rho)?;
                if !shift.is_finite() {
                    return Err(invalid("cw_bragg shift must be finite"));
                }
                derived_blue("cw_bragg")?;
            }
            DeviceConfig::Synthesized { .. } => {
                if self.grids.red.is_none() || self.grids.blue.is_none() {
                    return Err(invalid("device synthesized needs grids.red and grids.blue"));
                }
            }
            DeviceConfig::FromFile { .. } => {
                if self.grids.red.is_some() || self.grids.blue.is_some() {
                    return Err(invalid("device from_file takes its grids from the kernel file; remove grids"));
                }
            }
        }
        if let Some(g) = &self.grids.red {
            check_grid("red", g)?;
        }
        if let Some(g) = &self.grids.blue {
            check_grid("blue", g)?;
        }
        match &self.packets {
            Some(PacketsConfig::Matched(0)) => {
                return Err(invalid("matched packet index is 1-based; \"matched:0\" is invalid"));
            }
            Some(PacketsConfig::Explicit { red, blue }) => {
                check_packet("red", red)?;
                check_packet("blue", blue)?;
            }
            _ => {}
        }
        match &self.task {
            TaskConfig::Run | TaskConfig::Scan { .. } if self.packets.is_none() => {
                return Err(invalid(format!("task {} needs packets", self.task.kind())));
            }
            TaskConfig::Scan { delays } => {
                let d = delays.delays();
                if d.is_empty() {
                    return Err(invalid("task scan needs at least one delay"));
                }
                if d.iter().any(|t| !t.is_finite()) {
                    return Err(invalid("scan delays must be finite"));
                }
            }
            TaskConfig::Synthesize if !matches!(self.device, DeviceConfig::Synthesized { .. }) => {
                return Err(invalid("task synthesize needs device type synthesized"));
            }
            _ => {}
        }
        Ok(())
    }

    /// Replaces the point count of every configured grid.
    pub fn with_grid_n(mut self, n: usize) -> CliResult<Self> {
        if matches!(self.device, DeviceConfig::FromFile { .. }) {
            return Err(invalid("--grid-n does not apply to kernels loaded from file"));
        }
        for g in [&mut self.grids.red, &mut self.grids.blue].into_iter().flatten() {
            g.n = n;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }
}

/// Parses and validates a scenario document. `origin` is used in diagnostics.
pub fn parse_scenario(text: &str, origin: &Path) -> CliResult<Scenario> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let mut scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.inner();
        let field = e.path().to_string();
        let location = if field.is_empty() || field == "." { String::new() } else { format!("field `{field}`: ") };
        CliError::Parse {
            path: origin.to_path_buf(),
            message: format!("line {} column {}: {location}{inner}", inner.line(), inner.column()),
        }
    })?;
    scenario.base_dir = origin.parent().map(Path::to_path_buf).unwrap_or_default();
    scenario.validate()?;
    Ok(scenario)
}

pub fn load_scenario(path: &Path) -> CliResult<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_scenario(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> CliResult<Scenario> {
        parse_scenario(text, Path::new("cfg/test.json"))
    }

    const MINIMAL: &str = r#"{
        "schema_version": 1,
        "device": {"type": "passive"},
        "grids": {"red": {"center": 200.0, "span": 16.0, "n": 32}},
        "packets": {"red": {"family": "gaussian", "center": 200.0, "width": 1.0},
                    "blue": {"family": "gaussian", "center": 200.0, "width": 1.0}},
        "task": {"type": "run"}
    }"#;

    #[test]
    fn minimal_passive_gets_defaults() {
        let s = parse(MINIMAL).unwrap();
        assert_eq!(s.device, DeviceConfig::Passive { tau: DEFAULT_TAU, rho: DEFAULT_RHO });
        let Some(PacketsConfig::Explicit { red, .. }) = s.packets else { panic!() };
        assert_eq!(red, PacketConfig::Gaussian { center: 200.0, width: 1.0, chirp: 0.0, delay: 0.0 });
        assert_eq!(s.base_dir, PathBuf::from("cfg"));
    }

    #[test]
    fn coefficient_guard_cites_constraint() {
        let text = MINIMAL.replace(r#"{"type": "passive"}"#, r#"{"type": "passive", "tau": 0.6, "rho": 0.9}"#);
        let err = parse(&text).unwrap_err();
        assert!(err.to_string().contains("τ²+ρ²=1"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn superluminal_mirror_rejected() {
        let text = MINIMAL.replace(r#"{"type": "passive"}"#, r#"{"type": "mirror", "beta": 1.2}"#);
        let err = parse(&text).unwrap_err();
        assert!(matches!(err, CliError::Validation(_)));
        assert!(err.to_string().contains("beta"));
    }

    #[test]
    fn parse_errors_name_line_and_field() {
        let text = MINIMAL.replace(r#""n": 32"#, r#""n": "many""#);
        let err = parse(&text).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, CliError::Parse { .. }));
        assert!(msg.contains("line 4") && msg.contains("grids.red.n"), "{msg}");
    }

    #[test]
    fn matched_tag_round_trips() {
        let text = MINIMAL.replace(
            r#"{"red": {"family": "gaussian", "center": 200.0, "width": 1.0},
                    "blue": {"family": "gaussian", "center": 200.0, "width": 1.0}}"#,
            r#""matched:2""#,
        );
        let s = parse(&text).unwrap();
        assert_eq!(s.packets, Some(PacketsConfig::Matched(2)));
        let back: Scenario = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back.packets, s.packets);
        assert!(parse(&text.replace("matched:2", "matched:0")).is_err());
        assert!(parse(&text.replace("matched:2", "best")).is_err());
    }

    #[test]
    fn task_requirements() {
        let no_packets = r#"{"schema_version": 1, "device": {"type": "passive"},
            "grids": {"red": {"center": 200.0, "span": 16.0, "n": 8}}, "task": {"type": "run"}}"#;
        assert!(parse(no_packets).is_err());
        assert!(parse(&no_packets.replace(r#""run""#, r#""verify""#)).is_ok());
        assert!(parse(&no_packets.replace(r#""run""#, r#""synthesize""#)).is_err());
        let empty_scan = MINIMAL.replace(r#"{"type": "run"}"#, r#"{"type": "scan", "delays": []}"#);
        assert!(parse(&empty_scan).is_err());
    }

    #[test]
    fn delay_range_expands() {
        let d = DelaySpec::Range { start: -4.0, stop: 4.0, count: 41 }.delays();
        assert_eq!(d.len(), 41);
        assert_eq!(d[0], -4.0);
        assert_eq!(d[20], 0.0);
        assert!((d[40] - 4.0).abs() < 1e-15);
    }

    #[test]
    fn grid_override() {
        let s = parse(MINIMAL).unwrap().with_grid_n(64).unwrap();
        assert_eq!(s.grids.red.unwrap().n, 64);
        assert!(parse(MINIMAL).unwrap().with_grid_n(0).is_err());
    }
}
