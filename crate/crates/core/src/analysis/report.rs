//! Serializable summaries of decompositions.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::analysis::beam_splitter::{BeamSplitterDecomposition, SplitterMode};
use crate::analysis::hom_kernel::SchmidtDecomposition;

/// Writes a complex vector as `[[re, im], ...]`.
pub(crate) fn complex_vec<S: Serializer>(v: &DVector<Complex64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for c in v.iter() {
        seq.serialize_element(&[c.re, c.im])?;
    }
    seq.end()
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    /// Schmidt values of the HOM kernel, descending.
    pub sigmas: Vec<f64>,
    pub taus: Vec<f64>,
    pub rhos: Vec<f64>,
    /// Max-entry reconstruction error of the splitter decomposition.
    pub residual: f64,
    /// Max-entry error of `K` rebuilt from its Schmidt decomposition.
    pub schmidt_residual: f64,
    pub modes: Vec<SplitterMode>,
}

impl DecompositionReport {
    pub fn new(splitters: &BeamSplitterDecomposition, schmidt: &SchmidtDecomposition, schmidt_residual: f64) -> Self {
        Self {
            sigmas: schmidt.values.clone(),
            taus: splitters.alphas(),
            rhos: splitters.betas(),
            residual: splitters.residual,
            schmidt_residual,
            modes: splitters.modes.clone(),
        }
    }
}
