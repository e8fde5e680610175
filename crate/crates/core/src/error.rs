use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-positive frequency {0} rad/s in grid")]
    NonPositiveFrequency(f64),

    #[error("packet poorly resolved: spectral mass {truncated_mass:.3e} lies outside the grid (limit 1e-6)")]
    PoorlyResolved { truncated_mass: f64 },

    #[error("wavepacket grid does not match the expected grid")]
    GridMismatch,

    #[error("state basis does not match kernel basis")]
    BasisMismatch,

    #[error("invalid splitter coefficients: tau={tau}, rho={rho} violate τ²+ρ²=1 with τ, ρ ≥ 0")]
    InvalidCoefficients { tau: f64, rho: f64 },

    #[error("shifted band overlaps the red band (shift {shift} rad/s, red band width {width} rad/s)")]
    BandOverlap { shift: f64, width: f64 },

    #[error("mode set is not orthonormal (Gram residual {residual:.3e})")]
    NonOrthonormalModes { residual: f64 },

    #[error("{requested} Schmidt entries exceed the {available} modes available per band")]
    TooManyModes { requested: usize, available: usize },

    #[error("kernel is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("degenerate spectrum could not be resolved (reconstruction residual {residual:.3e})")]
    DegenerateSpectrum { residual: f64 },

    #[error("mode index {index} exceeds Schmidt rank {rank}")]
    RankExceeded { index: usize, rank: usize },

    #[error("Fock expansion over {modes} modes exceeds the oracle limit of 8")]
    TooLarge { modes: usize },

    #[error("malformed document: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
