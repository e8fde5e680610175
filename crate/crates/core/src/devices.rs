//! Built-in beam-splitter transformations.
//!
//! Each device couples red mode `k` to exactly one blue mode `k`, so the
//! kernel is a direct sum of 2×2 rotations `[[τ, -ρ], [ρ, τ]]`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Band, FrequencyGrid};
use crate::kernel::BlockKernel;
use crate::state::ModeBasis;

/// Tolerance on `τ² + ρ² = 1`.
pub const COEFFICIENT_TOL: f64 = 1e-9;

/// Non-negative transmissivity and reflectivity with `τ² + ρ² = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitterCoefficients {
    tau: f64,
    rho: f64,
}

impl SplitterCoefficients {
    pub fn new(tau: f64, rho: f64) -> Result<Self> {
        if !(tau >= 0.0 && rho >= 0.0) || (tau * tau + rho * rho - 1.0).abs() > COEFFICIENT_TOL {
            return Err(Error::InvalidCoefficients { tau, rho });
        }
        Ok(Self { tau, rho })
    }

    /// `ρ = √(1 - τ²)`.
    pub fn from_transmissivity(tau: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&tau) {
            return Err(Error::InvalidCoefficients { tau, rho: f64::NAN });
        }
        Ok(Self { tau, rho: (1.0 - tau * tau).sqrt() })
    }

    /// τ = ρ = 1/√2.
    pub fn balanced() -> Self {
        Self { tau: std::f64::consts::FRAC_1_SQRT_2, rho: std::f64::consts::FRAC_1_SQRT_2 }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

/// Semi-transparent mirror moving at normalized speed `β = v/c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorParams {
    pub coefficients: SplitterCoefficients,
    pub beta: f64,
}

impl MirrorParams {
    pub fn new(coefficients: SplitterCoefficients, beta: f64) -> Result<Self> {
        if !(beta.abs() < 1.0) {
            return Err(Error::InvalidArgument(format!("mirror speed must satisfy |beta| < 1, got {beta}")));
        }
        Ok(Self { coefficients, beta })
    }

    /// Doppler factor `α = (1-β)/(1+β)` of a double reflection.
    pub fn doppler_factor(&self) -> f64 {
        (1.0 - self.beta) / (1.0 + self.beta)
    }
}

/// Continuous-wave Bragg-scattering frequency translator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BraggParams {
    pub coefficients: SplitterCoefficients,
    /// Pump frequency difference Ω (rad/s); blue = red + Ω.
    pub shift: f64,
}

fn pairwise(basis: ModeBasis, c: SplitterCoefficients) -> BlockKernel {
    let n = basis.band1().len();
    debug_assert_eq!(n, basis.band2().len());
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        m[(k, k)] = Complex64::new(c.tau, 0.0);
        m[(k, n + k)] = Complex64::new(-c.rho, 0.0);
        m[(n + k, k)] = Complex64::new(c.rho, 0.0);
        m[(n + k, n + k)] = Complex64::new(c.tau, 0.0);
    }
    BlockKernel::new(basis, m).expect("pairwise kernel matches its basis")
}

/// Energy- and spectrum-preserving splitter; both ports share `grid`.
pub fn passive_splitter(coefficients: SplitterCoefficients, grid: &FrequencyGrid) -> BlockKernel {
    let basis = ModeBasis::new(grid.with_band(Band::Port1), grid.with_band(Band::Port2));
    pairwise(basis, coefficients)
}

/// Moving mirror; the blue grid is the red grid scaled by `1/α`.
///
/// With amplitudes `c_k = φ(ω_k)√Δω` and `Δω_B = Δω_R/α`, the `√α` measure
/// factors of the continuum transformation cancel and each red/blue pair
/// mixes with plain `±ρ`.
pub fn moving_mirror(params: MirrorParams, red: &FrequencyGrid) -> Result<BlockKernel> {
    let alpha = params.doppler_factor();
    let blue = red.scaled(1.0 / alpha, Band::Blue)?;
    Ok(pairwise(ModeBasis::new(red.with_band(Band::Red), blue), params.coefficients))
}

/// CW four-wave-mixing Bragg scattering; the blue grid is the red grid shifted by `Ω`.
pub fn cw_bragg(params: BraggParams, red: &FrequencyGrid) -> Result<BlockKernel> {
    let width = red.last() - red.first();
    if !(params.shift.abs() > width) {
        return Err(Error::BandOverlap { shift: params.shift, width });
    }
    let blue = red.shifted(params.shift, Band::Blue)?;
    Ok(pairwise(ModeBasis::new(red.with_band(Band::Red), blue), params.coefficients))
}
