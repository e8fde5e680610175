//! Single-photon spectral wavepackets.

use nalgebra::DVector;
use num_complex::Complex64;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;

/// Spectral mass allowed to fall outside the grid before a packet is rejected.
pub const MAX_TRUNCATED_MASS: f64 = 1e-6;

/// Normalized discrete spectral amplitude of one photon.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacket {
    grid: FrequencyGrid,
    amps: DVector<Complex64>,
}

/// Parameters of a chirped, delayed Gaussian packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianShape {
    /// Center frequency ω₀ (rad/s).
    pub center: f64,
    /// RMS width of the spectral intensity |φ|² (rad/s).
    pub width: f64,
    /// Quadratic spectral phase coefficient (s²).
    pub chirp: f64,
    /// Arrival-time offset (s).
    pub delay: f64,
}

impl GaussianShape {
    pub fn new(center: f64, width: f64) -> Self {
        Self { center, width, chirp: 0.0, delay: 0.0 }
    }

    pub fn with_chirp(self, chirp: f64) -> Self {
        Self { chirp, ..self }
    }

    pub fn with_delay(self, delay: f64) -> Self {
        Self { delay, ..self }
    }

    /// Fraction of the continuum intensity lying outside the grid cells.
    pub fn truncated_mass(&self, grid: &FrequencyGrid) -> f64 {
        let (lo, hi) = grid.edges();
        let scale = std::f64::consts::SQRT_2 * self.width;
        0.5 * erfc((hi - self.center) / scale) + 0.5 * erfc((self.center - lo) / scale)
    }
}

impl WavePacket {
    /// Packet from raw amplitudes, rescaled to unit norm.
    pub fn from_amplitudes(grid: FrequencyGrid, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "{} amplitudes for a {}-point grid",
                amps.len(),
                grid.len()
            )));
        }
        let mut amps = DVector::from_vec(amps);
        let norm = amps.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidArgument("packet amplitudes have zero or non-finite norm".into()));
        }
        amps.unscale_mut(norm);
        Ok(Self { grid, amps })
    }

    /// Packet from amplitudes already known to be unit-norm (within rounding).
    pub(crate) fn from_unit_vector(grid: FrequencyGrid, amps: DVector<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), grid.len());
        Self { grid, amps }
    }

    /// `c_k ∝ exp[-(ω_k-ω₀)²/4σ²] · exp[i b (ω_k-ω₀)²] · exp[i ω_k t₀]`, renormalized.
    pub fn gaussian(grid: &FrequencyGrid, shape: GaussianShape) -> Result<Self> {
        if !(shape.width > 0.0) || !shape.width.is_finite() {
            return Err(Error::InvalidArgument(format!("packet width must be positive, got {}", shape.width)));
        }
        let truncated_mass = shape.truncated_mass(grid);
        if truncated_mass > MAX_TRUNCATED_MASS {
            return Err(Error::PoorlyResolved { truncated_mass });
        }
        let amps = grid
            .points()
            .iter()
            .map(|&w| {
                let x = w - shape.center;
                let envelope = (-x * x / (4.0 * shape.width * shape.width)).exp();
                envelope * Complex64::from_polar(1.0, shape.chirp * x * x + w * shape.delay)
            })
            .collect();
        Self::from_amplitudes(grid.clone(), amps)
    }

    /// Same packet arriving `delay` seconds later: `c_k ← c_k · exp(i ω_k t_d)`.
    pub fn delayed(&self, delay: f64) -> Self {
        let amps = DVector::from_iterator(
            self.amps.len(),
            self.amps
                .iter()
                .zip(self.grid.points())
                .map(|(c, &w)| c * Complex64::from_polar(1.0, w * delay)),
        );
        Self { grid: self.grid.clone(), amps }
    }

    /// Multiply every amplitude by the unit phase `exp(i θ)`.
    pub fn with_phase(&self, phase: f64) -> Self {
        Self { grid: self.grid.clone(), amps: &self.amps * Complex64::from_polar(1.0, phase) }
    }

    /// `Σ_k conj(p_k) q_k`.
    pub fn inner(&self, other: &WavePacket) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// Same amplitudes placed on another grid with the same number of points.
    pub fn regridded(&self, grid: &FrequencyGrid) -> Result<Self> {
        if grid.len() != self.grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { grid: grid.clone(), amps: self.amps.clone() })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }
}

/// First `count` Hermite-Gauss spectral modes, orthonormalized on the grid.
///
/// Member `m` samples `H_m(x)·exp(-x²/2)` with `x = (ω-ω₀)/(√2 σ)`, so the
/// zeroth member is the unchirped Gaussian of intensity width `σ`.
pub fn hermite_gauss_family(grid: &FrequencyGrid, center: f64, width: f64, count: usize) -> Result<Vec<WavePacket>> {
    if count > grid.len() {
        return Err(Error::InvalidArgument(format!(
            "{count} Hermite-Gauss modes requested on a {}-point grid",
            grid.len()
        )));
    }
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::InvalidArgument(format!("mode width must be positive, got {width}")));
    }
    let n = grid.len();
    let xs: Vec<f64> = grid
        .points()
        .iter()
        .map(|&w| (w - center) / (std::f64::consts::SQRT_2 * width))
        .collect();

    // Normalized Hermite functions via the three-term recurrence; avoids overflow of H_m.
    let mut prev = vec![0.0; n];
    let mut curr: Vec<f64> = xs.iter().map(|x| (-0.5 * x * x).exp()).collect();
    let mut family: Vec<DVector<Complex64>> = Vec::with_capacity(count);
    for order in 0..count {
        let mut v = DVector::from_iterator(n, curr.iter().map(|&a| Complex64::new(a, 0.0)));
        // Modified Gram-Schmidt, two passes.
        for _ in 0..2 {
            for q in &family {
                let proj = q.dotc(&v);
                v.axpy(-proj, q, Complex64::new(1.0, 0.0));
            }
        }
        let norm = v.norm();
        if !(norm > 1e-12) {
            return Err(Error::PoorlyResolved { truncated_mass: 1.0 - norm.min(1.0) });
        }
        v.unscale_mut(norm);
        family.push(v);

        let k = order as f64;
        let next: Vec<f64> = (0..n)
            .map(|i| (2.0 / (k + 1.0)).sqrt() * xs[i] * curr[i] - (k / (k + 1.0)).sqrt() * prev[i])
            .collect();
        prev = std::mem::replace(&mut curr, next);
    }
    Ok(family.into_iter().map(|v| WavePacket::from_unit_vector(grid.clone(), v)).collect())
}
