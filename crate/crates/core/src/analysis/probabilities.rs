use serde::{Deserialize, Serialize};

use crate::state::TwoPhotonState;

/// Probabilities of finding both photons red, one of each, or both blue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutputProbabilities {
    pub rr: f64,
    pub rb: f64,
    pub bb: f64,
}

impl OutputProbabilities {
    pub fn total(&self) -> f64 {
        self.rr + self.rb + self.bb
    }
}

/// Sector sums of `|S_kl|²` with the ½ weight on same-band pairs counted twice.
pub fn output_probabilities(state: &TwoPhotonState) -> OutputProbabilities {
    let split = state.basis().split();
    let dim = state.basis().len();
    let s = state.pair_amplitudes();
    let rr = 0.5 * s.view((0, 0), (split, split)).norm_squared();
    let bb = 0.5 * s.view((split, split), (dim - split, dim - split)).norm_squared();
    let rb = s.view((0, split), (split, dim - split)).norm_squared();
    OutputProbabilities { rr, rb, bb }
}
