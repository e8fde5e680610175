//! Kernels assembled from Schmidt-mode beam-splitter data.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::kernel::BlockKernel;
use crate::linalg::{gram_residual, hstack, orthogonal_complement};
use crate::packet::WavePacket;
use crate::state::ModeBasis;

/// Orthonormality tolerance for Schmidt mode sets.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// One independent two-mode splitter acting between Schmidt modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtEntry {
    /// Color-preserving amplitude τ ∈ [0, 1]; ρ = √(1-τ²).
    pub tau: f64,
    /// Conversion phase θ (rad).
    pub phase: f64,
    /// Red input mode `V_n`.
    pub red_in: WavePacket,
    /// Red output mode `v_n`.
    pub red_out: WavePacket,
    /// Blue input mode `W_n`.
    pub blue_in: WavePacket,
    /// Blue output mode `w_n`.
    pub blue_out: WavePacket,
}

impl SchmidtEntry {
    pub fn rho(&self) -> f64 {
        (1.0 - self.tau * self.tau).max(0.0).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SchmidtSpec {
    pub entries: Vec<SchmidtEntry>,
}

impl SchmidtSpec {
    pub fn new(entries: Vec<SchmidtEntry>) -> Self {
        Self { entries }
    }

    /// Entries with the given τ values, sharing one set of modes for input and
    /// output in each band.
    pub fn symmetric(taus: &[f64], red_modes: &[WavePacket], blue_modes: &[WavePacket]) -> Result<Self> {
        if taus.len() > red_modes.len() || taus.len() > blue_modes.len() {
            return Err(Error::TooManyModes {
                requested: taus.len(),
                available: red_modes.len().min(blue_modes.len()),
            });
        }
        let entries = taus
            .iter()
            .enumerate()
            .map(|(n, &tau)| SchmidtEntry {
                tau,
                phase: 0.0,
                red_in: red_modes[n].clone(),
                red_out: red_modes[n].clone(),
                blue_in: blue_modes[n].clone(),
                blue_out: blue_modes[n].clone(),
            })
            .collect();
        Ok(Self { entries })
    }

    pub fn taus(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.tau).collect()
    }
}

fn mode_matrix<'a>(
    modes: impl Iterator<Item = &'a WavePacket>,
    grid: &FrequencyGrid,
) -> Result<DMatrix<Complex64>> {
    let columns: Vec<DVector<Complex64>> = modes
        .map(|p| if p.grid() == grid { Ok(p.amplitudes().clone()) } else { Err(Error::GridMismatch) })
        .collect::<Result<_>>()?;
    let q = hstack(&columns, grid.len());
    let residual = gram_residual(&q);
    if residual > ORTHONORMAL_TOL {
        return Err(Error::NonOrthonormalModes { residual });
    }
    Ok(q)
}

/// Builds
/// `G_RR = Σ τ V v†`, `G_RB = -Σ ρ e^{iθ} V w†`, `G_BR = Σ ρ e^{-iθ} W v†`, `G_BB = Σ τ W w†`,
/// and completes the unspanned subspaces with τ = 1 (pure transmission) pairs.
pub fn synthesize_kernel(spec: &SchmidtSpec, basis: &ModeBasis) -> Result<BlockKernel> {
    let red = basis.band1();
    let blue = basis.band2();
    let m = spec.entries.len();
    let available = red.len().min(blue.len());
    if m > available {
        return Err(Error::TooManyModes { requested: m, available });
    }
    for e in &spec.entries {
        if !(0.0..=1.0).contains(&e.tau) || !e.phase.is_finite() {
            return Err(Error::InvalidCoefficients { tau: e.tau, rho: e.rho() });
        }
    }
    let v_in = mode_matrix(spec.entries.iter().map(|e| &e.red_in), red)?;
    let v_out = mode_matrix(spec.entries.iter().map(|e| &e.red_out), red)?;
    let w_in = mode_matrix(spec.entries.iter().map(|e| &e.blue_in), blue)?;
    let w_out = mode_matrix(spec.entries.iter().map(|e| &e.blue_out), blue)?;

    let diag = |f: &dyn Fn(&SchmidtEntry) -> Complex64| {
        DMatrix::from_diagonal(&DVector::from_iterator(m, spec.entries.iter().map(f)))
    };
    let tau = diag(&|e| Complex64::new(e.tau, 0.0));
    let rho_fwd = diag(&|e| Complex64::from_polar(e.rho(), e.phase));
    let rho_bwd = diag(&|e| Complex64::from_polar(e.rho(), -e.phase));

    let red_in_rest = orthogonal_complement(&v_in);
    let red_out_rest = orthogonal_complement(&v_out);
    let blue_in_rest = orthogonal_complement(&w_in);
    let blue_out_rest = orthogonal_complement(&w_out);

    let rr = &v_in * &tau * v_out.adjoint() + &red_in_rest * red_out_rest.adjoint();
    let rb = -(&v_in * &rho_fwd * w_out.adjoint());
    let br = &w_in * &rho_bwd * v_out.adjoint();
    let bb = &w_in * &tau * w_out.adjoint() + &blue_in_rest * blue_out_rest.adjoint();
    BlockKernel::from_blocks(basis.clone(), &rr, &rb, &br, &bb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Band;
    use crate::linalg::sorted_svd;
    use crate::packet::hermite_gauss_family;

    fn basis(n: usize) -> ModeBasis {
        ModeBasis::new(
            FrequencyGrid::uniform(100.0, 16.0, n, Band::Red).unwrap(),
            FrequencyGrid::uniform(300.0, 16.0, n, Band::Blue).unwrap(),
        )
    }

    fn modes(b: &ModeBasis, m: usize) -> (Vec<WavePacket>, Vec<WavePacket>) {
        (
            hermite_gauss_family(b.band1(), 100.0, 1.0, m).unwrap(),
            hermite_gauss_family(b.band2(), 300.0, 1.0, m).unwrap(),
        )
    }

    #[test]
    fn synthesized_kernel_is_unitary() {
        let b = basis(24);
        let (r, bl) = modes(&b, 4);
        let mut spec = SchmidtSpec::symmetric(&[0.9, 0.7, 0.5, 0.1], &r, &bl).unwrap();
        spec.entries[1].phase = 0.7;
        spec.entries[2].red_out = spec.entries[3].red_in.clone();
        spec.entries[3].red_out = r[2].clone();
        let k = synthesize_kernel(&spec, &b).unwrap();
        assert!(k.verify_unitarity().max() < 1e-10);
    }

    #[test]
    fn transmission_spectrum_is_tau_with_unit_padding() {
        let b = basis(12);
        let (r, bl) = modes(&b, 3);
        let spec = SchmidtSpec::symmetric(&[0.8, 0.3, 0.55], &r, &bl).unwrap();
        let k = synthesize_kernel(&spec, &b).unwrap();
        let s = sorted_svd(&k.rr().into_owned()).s;
        let mut expected = vec![1.0; 9];
        expected.extend([0.8, 0.55, 0.3]);
        for (got, want) in s.iter().zip(&expected) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn full_transmission_is_block_diagonal() {
        let b = basis(8);
        let (r, bl) = modes(&b, 3);
        let spec = SchmidtSpec::symmetric(&[1.0, 1.0, 1.0], &r, &bl).unwrap();
        let k = synthesize_kernel(&spec, &b).unwrap();
        assert_eq!(k.rb().camax(), 0.0);
        assert_eq!(k.br().camax(), 0.0);
    }

    #[test]
    fn rejects_bad_specs() {
        let b = basis(4);
        let (r, bl) = modes(&b, 4);
        let mut spec = SchmidtSpec::symmetric(&[0.5, 0.5], &r, &bl).unwrap();
        spec.entries[1].red_in = r[0].clone();
        assert!(matches!(synthesize_kernel(&spec, &b), Err(Error::NonOrthonormalModes { .. })));

        let small = basis(3);
        let spec = SchmidtSpec::symmetric(&[0.5; 4], &r, &bl).unwrap();
        assert!(matches!(synthesize_kernel(&spec, &small), Err(Error::TooManyModes { requested: 4, available: 3 })));

        let mut spec = SchmidtSpec::symmetric(&[0.5], &r, &bl).unwrap();
        spec.entries[0].blue_in = r[1].clone();
        assert!(matches!(synthesize_kernel(&spec, &b), Err(Error::GridMismatch)));

        let spec = SchmidtSpec::symmetric(&[1.5], &r, &bl).unwrap();
        assert!(matches!(synthesize_kernel(&spec, &b), Err(Error::InvalidCoefficients { .. })));
    }

    #[test]
    fn empty_spec_is_identity() {
        let b = basis(5);
        let k = synthesize_kernel(&SchmidtSpec::default(), &b).unwrap();
        assert!((k.matrix() - DMatrix::<Complex64>::identity(10, 10)).camax() < 1e-12);
    }
}
