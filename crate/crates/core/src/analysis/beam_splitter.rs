//! Decomposition of a 2n-mode unitary into n independent two-mode splitters.
//!
//! Works on the transposed kernel `[[A, B], [C, D]] = Mᵀ`, i.e.
//! `A = G_RRᵀ`, `B = G_BRᵀ`, `C = G_RBᵀ`, `D = G_BBᵀ`, and produces
//!
//! ```text
//! Mᵀ = Σ_j [[ E1_j α_j F1_j†,  E1_j β_j F2_j† ],
//!           [-E2_j β_j F1_j†,  E2_j α_j F2_j† ]]
//! ```
//!
//! `α_j, E1_j, F1_j` come from the SVD of `A`. The remaining vectors follow
//! from the contractions `B†E1_j = β_j F2_j` and `C F1_j = -β_j E2_j`, which
//! stay consistent inside degenerate α-subspaces. Pairs with vanishing β
//! (pure transmission) take their blue vectors from an SVD of what remains of `D`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::hom_kernel::{HomKernel, KERNEL_UNITARITY_TOL};
use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::kernel::BlockKernel;
use crate::linalg::{leading_phase, max_abs_diff, sorted_svd};

/// Below this β a pair is treated as pure transmission.
const BETA_FLOOR: f64 = 1e-7;
/// Reconstruction residual beyond which the decomposition is rejected.
pub const DEGENERACY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitterMode {
    /// Transmission amplitude α_j (≡ τ_j), non-negative.
    pub alpha: f64,
    /// Conversion amplitude β_j (≡ ρ_j), non-negative.
    pub beta: f64,
    /// Red output vector.
    #[serde(serialize_with = "crate::analysis::report::complex_vec")]
    pub e1: DVector<Complex64>,
    /// Red input vector.
    #[serde(serialize_with = "crate::analysis::report::complex_vec")]
    pub f1: DVector<Complex64>,
    /// Blue output vector.
    #[serde(serialize_with = "crate::analysis::report::complex_vec")]
    pub e2: DVector<Complex64>,
    /// Blue input vector.
    #[serde(serialize_with = "crate::analysis::report::complex_vec")]
    pub f2: DVector<Complex64>,
}

#[derive(Debug, Clone)]
pub struct BeamSplitterDecomposition {
    pub red: FrequencyGrid,
    pub blue: FrequencyGrid,
    pub modes: Vec<SplitterMode>,
    /// `‖Mᵀ - M̂ᵀ‖_max` of the decomposition.
    pub residual: f64,
}

impl BeamSplitterDecomposition {
    /// Reassembled transposed kernel `[[A, B], [C, D]]`.
    pub fn reconstruct_transposed(&self) -> DMatrix<Complex64> {
        reassemble(&self.modes, 1.0)
    }

    /// Reassembled kernel matrix `M` in the maps-to convention.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        self.reconstruct_transposed().transpose()
    }

    /// `K = 2 Σ_j conj(α_j) β_j F1_j F2_j†`.
    pub fn hom_kernel(&self) -> HomKernel {
        let n1 = self.red.len();
        let n2 = self.blue.len();
        let mut k = DMatrix::zeros(n1, n2);
        for m in &self.modes {
            k += &m.f1 * m.f2.adjoint() * Complex64::new(2.0 * m.alpha * m.beta, 0.0);
        }
        HomKernel::new(self.red.clone(), self.blue.clone(), k)
    }

    pub fn alphas(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.alpha).collect()
    }

    pub fn betas(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.beta).collect()
    }
}

/// `Σ_j [[E1 α F1†, s E1 β F2†], [-s E2 β F1†, E2 α F2†]]`; `s = -1` gives the backward pattern.
pub(crate) fn reassemble(modes: &[SplitterMode], beta_sign: f64) -> DMatrix<Complex64> {
    let Some(first) = modes.first() else {
        return DMatrix::zeros(0, 0);
    };
    let n1 = first.e1.len();
    let n2 = first.e2.len();
    let mut m = DMatrix::zeros(n1 + n2, n1 + n2);
    for mode in modes {
        let a = Complex64::new(mode.alpha, 0.0);
        let b = Complex64::new(beta_sign * mode.beta, 0.0);
        let mut tl = m.view_mut((0, 0), (n1, n1));
        tl += &mode.e1 * mode.f1.adjoint() * a;
        let mut tr = m.view_mut((0, n1), (n1, n2));
        tr += &mode.e1 * mode.f2.adjoint() * b;
        let mut bl = m.view_mut((n1, 0), (n2, n1));
        bl -= &mode.e2 * mode.f1.adjoint() * b;
        let mut br = m.view_mut((n1, n1), (n2, n2));
        br += &mode.e2 * mode.f2.adjoint() * a;
    }
    m
}

pub fn beam_splitter_decompose(kernel: &BlockKernel) -> Result<BeamSplitterDecomposition> {
    let basis = kernel.basis();
    let n = basis.band1().len();
    if basis.band2().len() != n {
        return Err(Error::InvalidArgument("beam-splitter decomposition needs equal band sizes".into()));
    }
    kernel.ensure_unitary(KERNEL_UNITARITY_TOL)?;

    let a = kernel.rr().transpose();
    let b = kernel.br().transpose();
    let c = kernel.rb().transpose();
    let d = kernel.bb().transpose();

    let svd = sorted_svd(&a);
    let mut modes: Vec<SplitterMode> = Vec::with_capacity(n);
    let mut transmitting: Vec<usize> = Vec::new();
    for j in 0..n {
        let mut e1 = svd.u.column(j).into_owned();
        let mut f1 = svd.v.column(j).into_owned();
        let phase = leading_phase(&f1);
        e1 *= phase;
        f1 *= phase;

        let b_contraction = b.adjoint() * &e1;
        let beta = b_contraction.norm();
        let (e2, f2) = if beta > BETA_FLOOR {
            let f2 = b_contraction.unscale(beta);
            let c_contraction = -(&c * &f1);
            let e2 = c_contraction.unscale(c_contraction.norm());
            (e2, f2)
        } else {
            transmitting.push(j);
            (DVector::zeros(n), DVector::zeros(n))
        };
        modes.push(SplitterMode { alpha: svd.s[j], beta, e1, f1, e2, f2 });
    }

    if !transmitting.is_empty() {
        let mut rest = d.clone_owned();
        for m in &modes {
            if m.beta > BETA_FLOOR {
                rest -= &m.e2 * m.f2.adjoint() * Complex64::new(m.alpha, 0.0);
            }
        }
        let rest_svd = sorted_svd(&rest);
        for (slot, &j) in transmitting.iter().enumerate() {
            let mut e2 = rest_svd.u.column(slot).into_owned();
            let mut f2 = rest_svd.v.column(slot).into_owned();
            let phase = leading_phase(&f2);
            e2 *= phase;
            f2 *= phase;
            modes[j].e2 = e2;
            modes[j].f2 = f2;
        }
    }

    let residual = max_abs_diff(&kernel.matrix().transpose(), &reassemble(&modes, 1.0));
    if residual > DEGENERACY_TOL {
        return Err(Error::DegenerateSpectrum { residual });
    }
    Ok(BeamSplitterDecomposition {
        red: basis.band1().clone(),
        blue: basis.band2().clone(),
        modes,
        residual,
    })
}
