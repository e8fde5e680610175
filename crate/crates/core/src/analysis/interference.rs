//! Matched inputs and the interference-condition residual.

use num_complex::Complex64;

use crate::analysis::hom_kernel::{hom_kernel, schmidt_decompose, HomKernel};
use crate::error::{Error, Result};
use crate::kernel::BlockKernel;
use crate::packet::WavePacket;

/// Schmidt values at or below this count as zero when ranking modes.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct MatchedInputs {
    pub red: WavePacket,
    pub blue: WavePacket,
    /// Schmidt value σ_n of the selected mode pair.
    pub sigma: f64,
    /// `(τ² - ρ²)²` with `2τρ = σ`, `τ ≥ ρ`.
    pub predicted_coincidence: f64,
}

/// Splitter amplitudes `(τ, ρ)` with `2τρ = σ` on the branch `τ ≥ ρ`.
pub fn splitter_from_sigma(sigma: f64) -> (f64, f64) {
    let s = sigma.clamp(0.0, 1.0);
    let root = (1.0 - s * s).sqrt();
    (((1.0 + root) / 2.0).sqrt(), ((1.0 - root) / 2.0).sqrt())
}

/// Packets on Schmidt mode `mode` (0-based, σ descending) of the kernel's HOM kernel.
pub fn matched_inputs(kernel: &BlockKernel, mode: usize) -> Result<MatchedInputs> {
    let decomposition = schmidt_decompose(&hom_kernel(kernel)?);
    let rank = decomposition.rank(RANK_TOL);
    if mode >= rank {
        return Err(Error::RankExceeded { index: mode, rank });
    }
    let sigma = decomposition.values[mode];
    let (tau, rho) = splitter_from_sigma(sigma);
    let contrast = tau * tau - rho * rho;
    Ok(MatchedInputs {
        red: decomposition.red_modes[mode].clone(),
        blue: decomposition.blue_modes[mode].clone(),
        sigma,
        predicted_coincidence: contrast * contrast,
    })
}

/// Joint residual of `c_R = C·K c_B` and `C·c_B = K† c_R`, minimized over the scalar `C`.
///
/// Both conditions are linear in `C`, so the minimum is a single least-squares
/// projection of `[c_R; K†c_R]` onto `[K c_B; c_B]`.
pub fn interference_residual(red: &WavePacket, blue: &WavePacket, kernel: &HomKernel) -> Result<f64> {
    if red.grid() != kernel.red() || blue.grid() != kernel.blue() {
        return Err(Error::GridMismatch);
    }
    let k = kernel.matrix();
    let c_r = red.amplitudes();
    let c_b = blue.amplitudes();
    let x = k * c_b;
    let y = k.adjoint() * c_r;
    let basis_sq = x.norm_squared() + c_b.norm_squared();
    let overlap: Complex64 = x.dotc(c_r) + c_b.dotc(&y);
    let scale = overlap / basis_sq;
    let first = c_r - &x * scale;
    let second = &y - c_b * scale;
    Ok((first.norm_squared() + second.norm_squared()).sqrt())
}

/// [`interference_residual`] against the HOM kernel of `kernel`.
pub fn check_interference_condition(red: &WavePacket, blue: &WavePacket, kernel: &BlockKernel) -> Result<f64> {
    interference_residual(red, blue, &hom_kernel(kernel)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_inversion() {
        let (t, r) = splitter_from_sigma(0.96);
        assert!((t - 0.8).abs() < 1e-12 && (r - 0.6).abs() < 1e-12);
        let (t, r) = splitter_from_sigma(1.0);
        assert!((t - r).abs() < 1e-12);
        let (t, r) = splitter_from_sigma(0.0);
        assert_eq!((t, r), (1.0, 0.0));
    }
}
