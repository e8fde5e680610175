//! Two-band mode bases and two-photon pure states.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::packet::WavePacket;

/// Concatenation of two band grids; combined mode `k < N₁` is band-1 mode `k`,
/// combined mode `N₁ + l` is band-2 mode `l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeBasis {
    band1: FrequencyGrid,
    band2: FrequencyGrid,
}

impl ModeBasis {
    pub fn new(band1: FrequencyGrid, band2: FrequencyGrid) -> Self {
        Self { band1, band2 }
    }

    pub fn band1(&self) -> &FrequencyGrid {
        &self.band1
    }

    pub fn band2(&self) -> &FrequencyGrid {
        &self.band2
    }

    pub fn len(&self) -> usize {
        self.band1.len() + self.band2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of band-1 modes; the block partition index.
    pub fn split(&self) -> usize {
        self.band1.len()
    }
}

/// `S_kl = ⟨vac| a_k a_l |Ψ⟩` over the combined basis.
///
/// The state is `|Ψ⟩ = ½ Σ_kl S_kl a_k† a_l† |vac⟩`; a doubly occupied mode
/// carries amplitude `S_kk/√2`, so its probability is `½|S_kk|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonState {
    basis: ModeBasis,
    pairs: DMatrix<Complex64>,
}

impl TwoPhotonState {
    /// One photon in each band: `S = u vᵀ + v uᵀ`.
    pub fn product(basis: &ModeBasis, band1: &WavePacket, band2: &WavePacket) -> Result<Self> {
        if band1.grid() != basis.band1() || band2.grid() != basis.band2() {
            return Err(Error::GridMismatch);
        }
        let split = basis.split();
        let dim = basis.len();
        let mut u = DVector::zeros(dim);
        let mut v = DVector::zeros(dim);
        u.rows_mut(0, split).copy_from(band1.amplitudes());
        v.rows_mut(split, dim - split).copy_from(band2.amplitudes());
        let pairs = &u * v.transpose() + &v * u.transpose();
        Ok(Self { basis: basis.clone(), pairs })
    }

    /// Wraps a pair-amplitude matrix; it must be square over `basis` and symmetric.
    pub fn from_pair_matrix(basis: &ModeBasis, pairs: DMatrix<Complex64>) -> Result<Self> {
        let dim = basis.len();
        if pairs.nrows() != dim || pairs.ncols() != dim {
            return Err(Error::BasisMismatch);
        }
        let asym = (&pairs - pairs.transpose()).camax();
        if asym > 1e-12 * pairs.camax().max(1.0) {
            return Err(Error::InvalidArgument(format!("pair matrix is not symmetric (residual {asym:.3e})")));
        }
        Ok(Self { basis: basis.clone(), pairs })
    }

    pub(crate) fn from_parts(basis: ModeBasis, pairs: DMatrix<Complex64>) -> Self {
        Self { basis, pairs }
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    pub fn pair_amplitudes(&self) -> &DMatrix<Complex64> {
        &self.pairs
    }

    /// `Σ_{k<l}|S_kl|² + ½Σ_k|S_kk|²`, i.e. `½ Σ_kl |S_kl|²`.
    pub fn norm_sqr(&self) -> f64 {
        0.5 * self.pairs.norm_squared()
    }

    /// Largest `|S_kl - S_lk|`.
    pub fn asymmetry(&self) -> f64 {
        (&self.pairs - self.pairs.transpose()).camax()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Band;
    use crate::packet::GaussianShape;

    #[test]
    fn minimal_two_mode_state() {
        let red = FrequencyGrid::uniform(100.0, 10.0, 1, Band::Red).unwrap();
        let blue = FrequencyGrid::uniform(300.0, 10.0, 1, Band::Blue).unwrap();
        let basis = ModeBasis::new(red.clone(), blue.clone());
        let one = vec![Complex64::new(1.0, 0.0)];
        let pr = WavePacket::from_amplitudes(red, one.clone()).unwrap();
        let pb = WavePacket::from_amplitudes(blue, one).unwrap();
        let s = TwoPhotonState::product(&basis, &pr, &pb).unwrap();
        let m = s.pair_amplitudes();
        assert_eq!(m[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(m[(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(m[(0, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(m[(1, 1)], Complex64::new(0.0, 0.0));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn product_structure() {
        let red = FrequencyGrid::uniform(100.0, 10.0, 16, Band::Red).unwrap();
        let blue = FrequencyGrid::uniform(300.0, 14.0, 12, Band::Blue).unwrap();
        let basis = ModeBasis::new(red.clone(), blue.clone());
        let pr = WavePacket::gaussian(&red, GaussianShape::new(100.0, 1.0).with_chirp(0.3)).unwrap();
        let pb = WavePacket::gaussian(&blue, GaussianShape::new(300.0, 1.2).with_delay(0.5)).unwrap();
        let s = TwoPhotonState::product(&basis, &pr, &pb).unwrap();
        let m = s.pair_amplitudes();
        assert_eq!(s.asymmetry(), 0.0);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        assert_eq!(m.view((0, 0), (16, 16)).camax(), 0.0);
        assert_eq!(m.view((16, 16), (12, 12)).camax(), 0.0);
        let outer = pr.amplitudes() * pb.amplitudes().transpose();
        assert_eq!(m.view((0, 16), (16, 12)).into_owned(), outer);
    }

    #[test]
    fn product_rejects_foreign_grid() {
        let red = FrequencyGrid::uniform(100.0, 10.0, 4, Band::Red).unwrap();
        let blue = FrequencyGrid::uniform(300.0, 10.0, 4, Band::Blue).unwrap();
        let basis = ModeBasis::new(red.clone(), blue.clone());
        let amps = vec![Complex64::new(1.0, 0.0); 4];
        let pr = WavePacket::from_amplitudes(red.clone(), amps.clone()).unwrap();
        let stray = WavePacket::from_amplitudes(red.shifted(1.0, Band::Blue).unwrap(), amps).unwrap();
        assert_eq!(TwoPhotonState::product(&basis, &pr, &stray), Err(Error::GridMismatch));
    }
}
