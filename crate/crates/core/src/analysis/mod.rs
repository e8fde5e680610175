//! HOM kernel, Schmidt and splitter decompositions, interference checks and scans.

pub mod beam_splitter;
pub mod hom_kernel;
pub mod interference;
pub mod oracle;
pub mod probabilities;
pub mod report;
pub mod scan;

pub use beam_splitter::{beam_splitter_decompose, BeamSplitterDecomposition, SplitterMode, DEGENERACY_TOL};
pub use hom_kernel::{hom_kernel, schmidt_decompose, HomKernel, SchmidtDecomposition, KERNEL_UNITARITY_TOL};
pub use interference::{check_interference_condition, interference_residual, matched_inputs, splitter_from_sigma, MatchedInputs};
pub use oracle::{brute_force_output, MAX_ORACLE_MODES};
pub use probabilities::{output_probabilities, OutputProbabilities};
pub use report::DecompositionReport;
pub use scan::{dip_scan, propagate, propagate_batch, propagate_dense, DipPoint};
