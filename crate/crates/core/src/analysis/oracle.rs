//! Independent check of the pair-matrix pipeline by explicit Fock-space expansion.
//!
//! Shares no code with `BlockKernel::apply` or `output_probabilities`: the
//! output state is built by applying creation operators one term at a time
//! to occupation-number vectors, with `√(n+1)` factors written out.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::analysis::probabilities::OutputProbabilities;
use crate::error::{Error, Result};
use crate::kernel::BlockKernel;
use crate::packet::WavePacket;

/// Largest combined basis the oracle accepts.
pub const MAX_ORACLE_MODES: usize = 8;

type Occupation = Vec<u32>;
type FockState = BTreeMap<Occupation, Complex64>;

/// Applies `Σ_i c_i Σ_k M[i,k] a_k†` where `i` runs over `inputs` (combined indices).
fn create_photon(state: &FockState, inputs: &[(usize, Complex64)], matrix: &nalgebra::DMatrix<Complex64>) -> FockState {
    let mut out = FockState::new();
    for (occupation, amp) in state {
        for &(i, c) in inputs {
            for k in 0..matrix.ncols() {
                let coeff = matrix[(i, k)];
                if coeff == Complex64::new(0.0, 0.0) || c == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let mut next = occupation.clone();
                let bosonic = ((next[k] + 1) as f64).sqrt();
                next[k] += 1;
                *out.entry(next).or_insert(Complex64::new(0.0, 0.0)) += amp * c * coeff * bosonic;
            }
        }
    }
    out
}

/// Sector probabilities of the output state for one red and one blue photon.
pub fn brute_force_output(kernel: &BlockKernel, red: &WavePacket, blue: &WavePacket) -> Result<OutputProbabilities> {
    let basis = kernel.basis();
    let modes = basis.len();
    if modes > MAX_ORACLE_MODES {
        return Err(Error::TooLarge { modes });
    }
    if red.grid() != basis.band1() || blue.grid() != basis.band2() {
        return Err(Error::GridMismatch);
    }
    let split = basis.split();
    let red_inputs: Vec<(usize, Complex64)> = red.amplitudes().iter().enumerate().map(|(i, &c)| (i, c)).collect();
    let blue_inputs: Vec<(usize, Complex64)> =
        blue.amplitudes().iter().enumerate().map(|(j, &c)| (split + j, c)).collect();

    let vacuum: FockState = [(vec![0; modes], Complex64::new(1.0, 0.0))].into_iter().collect();
    let one = create_photon(&vacuum, &red_inputs, kernel.matrix());
    let two = create_photon(&one, &blue_inputs, kernel.matrix());

    let mut probs = OutputProbabilities { rr: 0.0, rb: 0.0, bb: 0.0 };
    for (occupation, amp) in &two {
        let reds: u32 = occupation[..split].iter().sum();
        let p = amp.norm_sqr();
        match reds {
            2 => probs.rr += p,
            1 => probs.rb += p,
            0 => probs.bb += p,
            _ => unreachable!("two photons in total"),
        }
    }
    Ok(probs)
}
