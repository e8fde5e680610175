//! Schmidt spec documents for synthesized devices.
//!
//! ```json
//! {
//!   "modes": {"family": "hermite_gauss", "red": {"center": 200, "width": 1}, "blue": {"center": 300, "width": 1}},
//!   "entries": [{"tau": 0.8, "phase": 0.0, "red_in": 0, "blue_in": 0}]
//! }
//! ```
//!
//! Mode indices select members of the per-band family; `red_out`/`blue_out`
//! default to the input index.

use std::path::Path;

use hom_core::random::random_modes;
use hom_core::{hermite_gauss_family, FrequencyGrid, ModeBasis, SchmidtEntry, SchmidtSpec, WavePacket};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvelopeConfig {
    pub center: f64,
    pub width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModeFamily {
    HermiteGauss { red: EnvelopeConfig, blue: EnvelopeConfig },
    /// Columns of seeded Haar-random unitaries, one per band.
    Random { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryConfig {
    pub tau: f64,
    #[serde(default)]
    pub phase: f64,
    pub red_in: usize,
    #[serde(default)]
    pub red_out: Option<usize>,
    pub blue_in: usize,
    #[serde(default)]
    pub blue_out: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub modes: ModeFamily,
    pub entries: Vec<EntryConfig>,
}

fn family(grid: &FrequencyGrid, count: usize, env: Option<EnvelopeConfig>, rng: &mut ChaCha8Rng) -> CliResult<Vec<WavePacket>> {
    if count > grid.len() {
        return Err(CliError::Validation(format!(
            "Schmidt spec uses mode index {} but the {:?} grid has only {} points",
            count - 1,
            grid.band(),
            grid.len()
        )));
    }
    match env {
        Some(e) => Ok(hermite_gauss_family(grid, e.center, e.width, count)?),
        None => Ok(random_modes(rng, grid, count)),
    }
}

impl SpecDocument {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Parse { path: path.to_path_buf(), message: e.to_string() })
    }

    /// Resolves mode indices against `basis`.
    pub fn build(&self, basis: &ModeBasis) -> CliResult<SchmidtSpec> {
        let red_count = self.entries.iter().map(|e| e.red_in.max(e.red_out.unwrap_or(e.red_in)) + 1).max().unwrap_or(0);
        let blue_count = self.entries.iter().map(|e| e.blue_in.max(e.blue_out.unwrap_or(e.blue_in)) + 1).max().unwrap_or(0);
        let (red_env, blue_env, seed) = match self.modes {
            ModeFamily::HermiteGauss { red, blue } => (Some(red), Some(blue), 0),
            ModeFamily::Random { seed } => (None, None, seed),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let red = family(basis.band1(), red_count, red_env, &mut rng)?;
        let blue = family(basis.band2(), blue_count, blue_env, &mut rng)?;
        let entries = self
            .entries
            .iter()
            .map(|e| SchmidtEntry {
                tau: e.tau,
                phase: e.phase,
                red_in: red[e.red_in].clone(),
                red_out: red[e.red_out.unwrap_or(e.red_in)].clone(),
                blue_in: blue[e.blue_in].clone(),
                blue_out: blue[e.blue_out.unwrap_or(e.blue_in)].clone(),
            })
            .collect();
        Ok(SchmidtSpec::new(entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hom_core::Band;

    fn basis() -> ModeBasis {
        ModeBasis::new(
            FrequencyGrid::uniform(200.0, 16.0, 32, Band::Red).unwrap(),
            FrequencyGrid::uniform(300.0, 16.0, 32, Band::Blue).unwrap(),
        )
    }

    #[test]
    fn hermite_gauss_spec() {
        let doc: SpecDocument = serde_json::from_str(
            r#"{"modes": {"family": "hermite_gauss", "red": {"center": 200, "width": 1}, "blue": {"center": 300, "width": 1}},
                "entries": [{"tau": 0.8, "red_in": 0, "blue_in": 0}, {"tau": 0.3, "phase": 1.0, "red_in": 1, "red_out": 2, "blue_in": 1}]}"#,
        )
        .unwrap();
        let spec = doc.build(&basis()).unwrap();
        assert_eq!(spec.taus(), vec![0.8, 0.3]);
        assert_eq!(spec.entries[1].phase, 1.0);
        assert_ne!(spec.entries[1].red_in, spec.entries[1].red_out);
        assert_eq!(spec.entries[1].blue_in, spec.entries[1].blue_out);
    }

    #[test]
    fn random_spec_is_seeded() {
        let doc = SpecDocument {
            modes: ModeFamily::Random { seed: 11 },
            entries: vec![EntryConfig { tau: 0.5, phase: 0.0, red_in: 0, red_out: Some(3), blue_in: 2, blue_out: None }],
        };
        assert_eq!(doc.build(&basis()).unwrap(), doc.build(&basis()).unwrap());
    }

    #[test]
    fn index_beyond_grid() {
        let doc = SpecDocument {
            modes: ModeFamily::Random { seed: 1 },
            entries: vec![EntryConfig { tau: 0.5, phase: 0.0, red_in: 40, red_out: None, blue_in: 0, blue_out: None }],
        };
        assert!(matches!(doc.build(&basis()), Err(CliError::Validation(_))));
    }
}
