//! Seeded random generators for packets, unitaries and Schmidt specs.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::grid::FrequencyGrid;
use crate::packet::WavePacket;
use crate::state::ModeBasis;
use crate::synthesis::{SchmidtEntry, SchmidtSpec};

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unitary (QR of a complex Ginibre matrix with phase correction).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| complex_normal(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Random unit-norm packet with complex Gaussian amplitudes.
pub fn random_packet<R: Rng + ?Sized>(rng: &mut R, grid: &FrequencyGrid) -> WavePacket {
    let amps = (0..grid.len()).map(|_| complex_normal(rng)).collect();
    WavePacket::from_amplitudes(grid.clone(), amps).expect("Gaussian sample has positive norm")
}

/// `count` random orthonormal packets on `grid`.
pub fn random_modes<R: Rng + ?Sized>(rng: &mut R, grid: &FrequencyGrid, count: usize) -> Vec<WavePacket> {
    let u = random_unitary(rng, grid.len());
    (0..count.min(grid.len()))
        .map(|j| WavePacket::from_amplitudes(grid.clone(), u.column(j).iter().copied().collect()).expect("unit column"))
        .collect()
}

/// Random spec over independent input/output mode sets.
///
/// τ values are drawn uniformly from `[0.05, 0.95]` and kept at least `min_gap`
/// apart, so the transmission spectrum (unit padding included) is non-degenerate.
pub fn random_schmidt_spec<R: Rng + ?Sized>(rng: &mut R, basis: &ModeBasis, count: usize, min_gap: f64) -> Result<SchmidtSpec> {
    let mut taus: Vec<f64> = Vec::with_capacity(count);
    let mut attempts = 0;
    while taus.len() < count {
        let tau = rng.random_range(0.05..0.95);
        if taus.iter().all(|t| (t - tau).abs() >= min_gap) {
            taus.push(tau);
        }
        attempts += 1;
        assert!(attempts < 100_000, "cannot place {count} τ values {min_gap} apart");
    }
    let red_in = random_modes(rng, basis.band1(), count);
    let red_out = random_modes(rng, basis.band1(), count);
    let blue_in = random_modes(rng, basis.band2(), count);
    let blue_out = random_modes(rng, basis.band2(), count);
    let entries = taus
        .into_iter()
        .enumerate()
        .map(|(n, tau)| SchmidtEntry {
            tau,
            phase: rng.random_range(0.0..2.0 * PI),
            red_in: red_in[n].clone(),
            red_out: red_out[n].clone(),
            blue_in: blue_in[n].clone(),
            blue_out: blue_out[n].clone(),
        })
        .collect();
    Ok(SchmidtSpec::new(entries))
}
