//! Propagation of packet pairs and HOM-dip delay scans.

use serde::{Deserialize, Serialize};

use crate::analysis::probabilities::{output_probabilities, OutputProbabilities};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::kernel::BlockKernel;
use crate::packet::WavePacket;
use crate::state::TwoPhotonState;

/// Coincidence probability at one relative delay of the blue photon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DipPoint {
    pub delay: f64,
    pub coincidence: f64,
}

/// One photon per band through `kernel`.
///
/// Uses the rank-two form of a product state: with `x = Mᵀu`, `y = Mᵀv` the output
/// pair matrix is `x yᵀ + y xᵀ`, so only two matrix-vector products are needed.
pub fn propagate(kernel: &BlockKernel, red: &WavePacket, blue: &WavePacket) -> Result<OutputProbabilities> {
    let basis = kernel.basis();
    if red.grid() != basis.band1() || blue.grid() != basis.band2() {
        return Err(Error::GridMismatch);
    }
    let split = basis.split();
    let dim = basis.len();
    let m = kernel.matrix();
    let x = m.rows(0, split).tr_mul(red.amplitudes());
    let y = m.rows(split, dim - split).tr_mul(blue.amplitudes());
    let block = |rows: std::ops::Range<usize>, cols: std::ops::Range<usize>| -> f64 {
        let mut total = 0.0;
        for k in rows {
            for l in cols.clone() {
                total += (x[k] * y[l] + y[k] * x[l]).norm_sqr();
            }
        }
        total
    };
    Ok(OutputProbabilities {
        rr: 0.5 * block(0..split, 0..split),
        rb: block(0..split, split..dim),
        bb: 0.5 * block(split..dim, split..dim),
    })
}

/// [`propagate`] through the full pair-amplitude matrix `Mᵀ S M`.
pub fn propagate_dense(kernel: &BlockKernel, red: &WavePacket, blue: &WavePacket) -> Result<OutputProbabilities> {
    let input = TwoPhotonState::product(kernel.basis(), red, blue)?;
    Ok(output_probabilities(&kernel.apply(&input)?))
}

/// [`propagate`] over many packet pairs.
pub fn propagate_batch(
    kernel: &BlockKernel,
    pairs: &[(WavePacket, WavePacket)],
    exec: Execution,
) -> Result<Vec<OutputProbabilities>> {
    exec.map(pairs, |(r, b)| propagate(kernel, r, b)).into_iter().collect()
}

/// `P_RB` as the blue packet is delayed by each entry of `delays`.
pub fn dip_scan(
    kernel: &BlockKernel,
    red: &WavePacket,
    blue: &WavePacket,
    delays: &[f64],
    exec: Execution,
) -> Result<Vec<DipPoint>> {
    if red.grid() != kernel.basis().band1() || blue.grid() != kernel.basis().band2() {
        return Err(Error::GridMismatch);
    }
    exec.map(delays, |&delay| {
        propagate(kernel, red, &blue.delayed(delay)).map(|p| DipPoint { delay, coincidence: p.rb })
    })
    .into_iter()
    .collect()
}
