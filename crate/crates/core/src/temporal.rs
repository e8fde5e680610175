//! Time-domain envelopes of spectral packets.
//!
//! Uses `φ̃(t) = ∫dω φ(ω) e^{iωt}` on the DFT-conjugate grid
//! `Δt = 2π/(n·Δω)`, `t_j = (j - ⌊n/2⌋)·Δt`, scaled so that `Σ|φ̃_j|²Δt = 1`.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::packet::WavePacket;

#[derive(Debug, Clone, PartialEq)]
pub struct TemporalAmplitude {
    times: Vec<f64>,
    spacing: f64,
    amps: Vec<Complex64>,
}

impl TemporalAmplitude {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// `Σ_j |φ̃_j|² Δt`.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.spacing
    }

    /// Time of the largest-magnitude sample.
    pub fn peak_time(&self) -> f64 {
        let (idx, _) = self
            .amps
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (j, a)| if a.norm() > best.1 { (j, a.norm()) } else { best });
        self.times[idx]
    }

    /// Intensity-weighted mean and rms width of `|φ̃(t)|²`.
    pub fn mean_and_rms(&self) -> (f64, f64) {
        let weights: Vec<f64> = self.amps.iter().map(|a| a.norm_sqr()).collect();
        let total: f64 = weights.iter().sum();
        let mean = self.times.iter().zip(&weights).map(|(t, w)| t * w).sum::<f64>() / total;
        let var = self
            .times
            .iter()
            .zip(&weights)
            .map(|(t, w)| (t - mean) * (t - mean) * w)
            .sum::<f64>()
            / total;
        (mean, var.sqrt())
    }

    /// Inverse transform back onto `grid`; exact inverse of [`to_time_domain`].
    pub fn to_spectrum(&self, grid: &FrequencyGrid) -> Result<WavePacket> {
        let n = self.amps.len();
        if n < grid.len() {
            return Err(Error::GridMismatch);
        }
        let expected = 2.0 * PI / (n as f64 * grid.spacing());
        if (expected - self.spacing).abs() > 1e-12 * expected {
            return Err(Error::GridMismatch);
        }
        let shift = (n / 2) as f64;
        let w0 = grid.first();
        // c_k = √(Δω/2π)·Δt·Σ_j φ̃_j e^{-iω_k t_j}; with ω_k = ω₀ + kΔω the sum is a forward DFT.
        let mut buf: Vec<Complex64> = self
            .amps
            .iter()
            .zip(&self.times)
            .map(|(a, &t)| a * Complex64::from_polar(1.0, -w0 * t))
            .collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let scale = (grid.spacing() / (2.0 * PI)).sqrt() * self.spacing;
        let amps = (0..grid.len())
            .map(|k| buf[k] * Complex64::from_polar(scale, 2.0 * PI * k as f64 * shift / n as f64))
            .collect::<Vec<_>>();
        Ok(WavePacket::from_unit_vector(grid.clone(), DVector::from_vec(amps)))
    }
}

/// Temporal envelope of `packet` sampled at `n_times ≥ N` points (zero-padded when larger).
pub fn to_time_domain(packet: &WavePacket, n_times: usize) -> Result<TemporalAmplitude> {
    let grid = packet.grid();
    let n = n_times;
    if n < grid.len() {
        return Err(Error::InvalidArgument(format!(
            "{n_times} time samples cannot represent a {}-point spectrum",
            grid.len()
        )));
    }
    let dw = grid.spacing();
    let dt = 2.0 * PI / (n as f64 * dw);
    let shift = (n / 2) as f64;
    let times: Vec<f64> = (0..n).map(|j| (j as f64 - shift) * dt).collect();

    // e^{iω_k t_j} = e^{iω₀ t_j} · e^{2πi k j/n} · e^{-2πi k ⌊n/2⌋/n}
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (k, c) in packet.amplitudes().iter().enumerate() {
        buf[k] = c * Complex64::from_polar(1.0, -2.0 * PI * k as f64 * shift / n as f64);
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let scale = (dw / (2.0 * PI)).sqrt();
    let w0 = grid.first();
    let amps = buf
        .iter()
        .zip(&times)
        .map(|(b, &t)| b * Complex64::from_polar(scale, w0 * t))
        .collect();
    Ok(TemporalAmplitude { times, spacing: dt, amps })
}
