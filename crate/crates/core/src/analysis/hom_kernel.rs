//! The HOM kernel and its Schmidt decomposition.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::grid::FrequencyGrid;
use crate::kernel::BlockKernel;
use crate::linalg::{max_abs_diff, sorted_svd};
use crate::packet::WavePacket;

/// Unitarity residual above which the kernel's σ ≤ 1 guarantee is void.
pub const KERNEL_UNITARITY_TOL: f64 = 1e-8;

/// `K(red k, blue l)`: perfect HOM interference needs a unit singular value.
#[derive(Debug, Clone, PartialEq)]
pub struct HomKernel {
    red: FrequencyGrid,
    blue: FrequencyGrid,
    matrix: DMatrix<Complex64>,
}

impl HomKernel {
    pub fn new(red: FrequencyGrid, blue: FrequencyGrid, matrix: DMatrix<Complex64>) -> Self {
        assert_eq!(matrix.shape(), (red.len(), blue.len()), "HOM kernel shape must match its grids");
        Self { red, blue, matrix }
    }

    pub fn red(&self) -> &FrequencyGrid {
        &self.red
    }

    pub fn blue(&self) -> &FrequencyGrid {
        &self.blue
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Singular values, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        sorted_svd(&self.matrix).s
    }
}

/// `K[k,l] = Σ_m conj(G_RR[k,m]) G_BR[l,m] - Σ_m conj(G_RB[k,m]) G_BB[l,m]`.
pub fn hom_kernel(kernel: &BlockKernel) -> Result<HomKernel> {
    kernel.ensure_unitary(KERNEL_UNITARITY_TOL)?;
    let k = kernel.rr().conjugate() * kernel.br().transpose() - kernel.rb().conjugate() * kernel.bb().transpose();
    Ok(HomKernel::new(kernel.basis().band1().clone(), kernel.basis().band2().clone(), k))
}

/// `K = Σ_n σ_n R_n B_n†` with σ descending.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub values: Vec<f64>,
    pub red_modes: Vec<WavePacket>,
    pub blue_modes: Vec<WavePacket>,
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let rows = self.red_modes.first().map_or(0, |m| m.len());
        let cols = self.blue_modes.first().map_or(0, |m| m.len());
        let mut k = DMatrix::zeros(rows, cols);
        for ((s, r), b) in self.values.iter().zip(&self.red_modes).zip(&self.blue_modes) {
            k += r.amplitudes() * b.amplitudes().adjoint() * Complex64::new(*s, 0.0);
        }
        k
    }

    /// `‖K - Σ σ R B†‖_max`.
    pub fn residual(&self, kernel: &HomKernel) -> f64 {
        max_abs_diff(kernel.matrix(), &self.reconstruct())
    }

    /// Number of values above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.values.iter().filter(|&&s| s > tol).count()
    }
}

/// SVD of `K`; the largest-magnitude component of each `R_n` is real positive.
pub fn schmidt_decompose(kernel: &HomKernel) -> SchmidtDecomposition {
    let svd = sorted_svd(&kernel.matrix);
    let red_modes = svd
        .u
        .column_iter()
        .map(|c| WavePacket::from_unit_vector(kernel.red.clone(), c.into_owned()))
        .collect();
    let blue_modes = svd
        .v
        .column_iter()
        .map(|c| WavePacket::from_unit_vector(kernel.blue.clone(), c.into_owned()))
        .collect();
    SchmidtDecomposition { values: svd.s, red_modes, blue_modes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::devices::{passive_splitter, SplitterCoefficients};
    use crate::grid::Band;
    use crate::packet::hermite_gauss_family;
    use crate::state::ModeBasis;
    use crate::synthesis::{synthesize_kernel, SchmidtSpec};

    fn basis(n: usize) -> ModeBasis {
        ModeBasis::new(
            FrequencyGrid::uniform(100.0, 16.0, n, Band::Red).unwrap(),
            FrequencyGrid::uniform(300.0, 16.0, n, Band::Blue).unwrap(),
        )
    }

    fn synthesized(taus: &[f64], n: usize) -> BlockKernel {
        let b = basis(n);
        let r = hermite_gauss_family(b.band1(), 100.0, 1.0, taus.len()).unwrap();
        let bl = hermite_gauss_family(b.band2(), 300.0, 1.0, taus.len()).unwrap();
        synthesize_kernel(&SchmidtSpec::symmetric(taus, &r, &bl).unwrap(), &b).unwrap()
    }

    #[test]
    fn balanced_passive_kernel_is_identity() {
        let g = FrequencyGrid::uniform(200.0, 20.0, 6, Band::Red).unwrap();
        let k = hom_kernel(&passive_splitter(SplitterCoefficients::balanced(), &g)).unwrap();
        assert!((k.matrix() - DMatrix::<Complex64>::identity(6, 6)).camax() < 1e-15);
    }

    #[test]
    fn transmitting_kernel_is_zero() {
        let g = FrequencyGrid::uniform(200.0, 20.0, 6, Band::Red).unwrap();
        let k = hom_kernel(&passive_splitter(SplitterCoefficients::new(1.0, 0.0).unwrap(), &g)).unwrap();
        assert_eq!(k.matrix().camax(), 0.0);
    }

    #[test]
    fn unit_value_from_balanced_entry() {
        let k = hom_kernel(&synthesized(&[std::f64::consts::FRAC_1_SQRT_2], 16)).unwrap();
        let s = k.singular_values();
        assert!((s[0] - 1.0).abs() < 1e-10);
        assert!(s[1] < 1e-10);
    }

    #[test]
    fn values_are_two_tau_rho() {
        let taus = [0.8, 0.95, 0.3, 0.2];
        let k = hom_kernel(&synthesized(&taus, 20)).unwrap();
        let mut expected: Vec<f64> = taus.iter().map(|t| 2.0 * t * (1.0 - t * t).sqrt()).collect();
        expected.sort_by(|a, b| b.total_cmp(a));
        let s = k.singular_values();
        for (got, want) in s.iter().zip(&expected) {
            assert!((got - want).abs() < 1e-9);
        }
        assert!((s[0] - 0.96).abs() < 1e-10);
        assert!(s[taus.len()..].iter().all(|&x| x < 1e-10));
    }

    #[test]
    fn schmidt_reconstructs_with_phase_convention() {
        let k = hom_kernel(&synthesized(&[0.8, 0.4], 12)).unwrap();
        let d = schmidt_decompose(&k);
        assert!(d.residual(&k) < 1e-10);
        assert_eq!(d.rank(1e-10), 2);
        for m in &d.red_modes {
            let a = m.amplitudes();
            let i = (0..a.len()).fold(0, |b, k| if a[k].norm() > a[b].norm() { k } else { b });
            assert!(a[i].im.abs() < 1e-15 && a[i].re > 0.0);
        }
        assert!(d.values[0] <= 1.0 + 1e-10);
    }

    #[test]
    fn rejects_non_unitary() {
        let mut m = DMatrix::identity(4, 4);
        m[(0, 3)] = Complex64::new(1e-6, 0.0);
        let k = BlockKernel::new(basis(2), m).unwrap();
        assert!(matches!(hom_kernel(&k), Err(crate::Error::NotUnitary { .. })));
    }
}
