//! Uniform frequency grids.
//!
//! Amplitudes on a grid are stored as `c_k = φ(ω_k)·√Δω`, so a continuum
//! normalization `∫|φ|²dω = 1` becomes the unit-vector condition and every
//! device transform is an exact unitary matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SPACING_RTOL: f64 = 1e-12;

/// Which channel a grid belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Band {
    Red,
    Blue,
    /// Spectrally overlapping input ports of a passive splitter.
    Port1,
    Port2,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyGrid {
    band: Band,
    spacing: f64,
    points: Vec<f64>,
}

impl FrequencyGrid {
    /// Grid of `n_points` angular frequencies covering `[center - span/2, center + span/2]`.
    ///
    /// A single-point grid sits at `center` and takes `span` as its spacing.
    pub fn uniform(center: f64, span: f64, n_points: usize, band: Band) -> Result<Self> {
        if n_points == 0 {
            return Err(Error::InvalidArgument("grid needs at least one point".into()));
        }
        if !(span > 0.0) || !span.is_finite() {
            return Err(Error::InvalidArgument(format!("grid span must be positive, got {span}")));
        }
        if !center.is_finite() {
            return Err(Error::InvalidArgument(format!("grid center must be finite, got {center}")));
        }
        let (points, spacing) = if n_points == 1 {
            (vec![center], span)
        } else {
            let spacing = span / (n_points - 1) as f64;
            let lo = center - span / 2.0;
            ((0..n_points).map(|k| lo + k as f64 * spacing).collect(), spacing)
        };
        let lowest = if n_points == 1 { center - span / 2.0 } else { points[0] };
        if lowest <= 0.0 {
            return Err(Error::NonPositiveFrequency(lowest));
        }
        Ok(Self { band, spacing, points })
    }

    /// Grid from explicit points, checked against the grid invariants.
    pub fn from_points(points: Vec<f64>, spacing: f64, band: Band) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("grid needs at least one point".into()));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::InvalidArgument(format!("grid spacing must be positive, got {spacing}")));
        }
        if let Some(&bad) = points.iter().find(|&&w| !(w > 0.0)) {
            return Err(Error::NonPositiveFrequency(bad));
        }
        for pair in points.windows(2) {
            let step = pair[1] - pair[0];
            if (step - spacing).abs() > SPACING_RTOL * spacing.max(pair[1].abs()) {
                return Err(Error::InvalidArgument(format!(
                    "grid is not uniform: step {step} differs from spacing {spacing}"
                )));
            }
        }
        Ok(Self { band, spacing, points })
    }

    /// Every point and the spacing multiplied by `factor`.
    pub fn scaled(&self, factor: f64, band: Band) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::InvalidArgument(format!("scale factor must be positive, got {factor}")));
        }
        Ok(Self {
            band,
            spacing: self.spacing * factor,
            points: self.points.iter().map(|w| w * factor).collect(),
        })
    }

    /// Every point moved by `offset`; the spacing is unchanged.
    pub fn shifted(&self, offset: f64, band: Band) -> Result<Self> {
        let points: Vec<f64> = self.points.iter().map(|w| w + offset).collect();
        if let Some(&bad) = points.iter().find(|&&w| !(w > 0.0)) {
            return Err(Error::NonPositiveFrequency(bad));
        }
        Ok(Self { band, spacing: self.spacing, points })
    }

    pub fn with_band(&self, band: Band) -> Self {
        Self { band, ..self.clone() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn band(&self) -> Band {
        self.band
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.first() + self.last())
    }

    /// Band edges `[first - Δω/2, last + Δω/2]` covered by the grid cells.
    pub fn edges(&self) -> (f64, f64) {
        (self.first() - 0.5 * self.spacing, self.last() + 0.5 * self.spacing)
    }
}

#[derive(Deserialize)]
struct RawGrid {
    band: Band,
    spacing: f64,
    points: Vec<f64>,
}

impl<'de> Deserialize<'de> for FrequencyGrid {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawGrid::deserialize(deserializer)?;
        FrequencyGrid::from_points(raw.points, raw.spacing, raw.band).map_err(serde::de::Error::custom)
    }
}
