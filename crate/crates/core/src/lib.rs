//! Spectral two-photon interference through frequency-converting devices.
//!
//! Photons live on discrete frequency grids in a red and a blue band. A
//! device is a unitary block kernel on the combined basis; the crate
//! propagates two-photon states through it, computes colour-resolved
//! coincidence probabilities, and decomposes kernels into independent
//! two-mode splitters.

pub mod analysis;
pub mod devices;
pub mod error;
pub mod exec;
pub mod grid;
pub mod kernel;
pub mod linalg;
pub mod packet;
pub mod random;
pub mod state;
pub mod synthesis;
pub mod temporal;

pub use devices::{cw_bragg, moving_mirror, passive_splitter, BraggParams, MirrorParams, SplitterCoefficients};
pub use error::{Error, Result};
pub use exec::Execution;
pub use grid::{Band, FrequencyGrid};
pub use kernel::{BlockKernel, UnitarityReport};
pub use packet::{hermite_gauss_family, GaussianShape, WavePacket};
pub use state::{ModeBasis, TwoPhotonState};
pub use synthesis::{synthesize_kernel, SchmidtEntry, SchmidtSpec};
pub use temporal::{to_time_domain, TemporalAmplitude};
