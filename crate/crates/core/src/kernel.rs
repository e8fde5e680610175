//! Unitary block kernels over a two-band mode basis.
//!
//! Row `i` of the matrix holds the image of input creation operator `a_i†`
//! in terms of output creation operators: `a_i† ↦ Σ_k M[i,k] a_k†`.

use nalgebra::{DMatrix, DMatrixView};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{ModeBasis, TwoPhotonState};

/// Residual below which a kernel counts as unitary.
pub const UNITARITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct BlockKernel {
    basis: ModeBasis,
    matrix: DMatrix<Complex64>,
}

/// Max-abs residuals of the unitarity conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitarityReport {
    /// `‖M M† - I‖_max`
    pub forward: f64,
    /// `‖M† M - I‖_max`
    pub backward: f64,
    /// `G_RR G_RR† + G_RB G_RB† - I`
    pub red_red: f64,
    /// `G_BR G_RR† + G_BB G_RB†`
    pub blue_red: f64,
    /// `G_BB G_BB† + G_BR G_BR† - I`
    pub blue_blue: f64,
    /// `G_RR G_BR† + G_RB G_BB†`
    pub red_blue: f64,
}

impl UnitarityReport {
    pub fn max(&self) -> f64 {
        [self.forward, self.backward, self.red_red, self.blue_red, self.blue_blue, self.red_blue]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self) -> bool {
        self.max() < UNITARITY_TOL
    }
}

fn identity_residual(m: &DMatrix<Complex64>) -> f64 {
    let mut r = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let target = if i == j { 1.0 } else { 0.0 };
            r = r.max((m[(i, j)] - target).norm());
        }
    }
    r
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

impl BlockKernel {
    /// Wraps `matrix` over `basis`; only dimensions are checked here.
    pub fn new(basis: ModeBasis, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = basis.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::InvalidArgument(format!(
                "kernel matrix is {}x{} but the basis has {dim} modes",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { basis, matrix })
    }

    /// Assembles `[[G_RR, G_RB], [G_BR, G_BB]]`.
    pub fn from_blocks(
        basis: ModeBasis,
        rr: &DMatrix<Complex64>,
        rb: &DMatrix<Complex64>,
        br: &DMatrix<Complex64>,
        bb: &DMatrix<Complex64>,
    ) -> Result<Self> {
        let n1 = basis.band1().len();
        let n2 = basis.band2().len();
        if rr.shape() != (n1, n1) || rb.shape() != (n1, n2) || br.shape() != (n2, n1) || bb.shape() != (n2, n2) {
            return Err(Error::InvalidArgument("block shapes do not match the basis".into()));
        }
        let mut m = DMatrix::zeros(n1 + n2, n1 + n2);
        m.view_mut((0, 0), (n1, n1)).copy_from(rr);
        m.view_mut((0, n1), (n1, n2)).copy_from(rb);
        m.view_mut((n1, 0), (n2, n1)).copy_from(br);
        m.view_mut((n1, n1), (n2, n2)).copy_from(bb);
        Ok(Self { basis, matrix: m })
    }

    /// Identity transformation (no conversion, no phase).
    pub fn identity(basis: ModeBasis) -> Self {
        let dim = basis.len();
        Self { basis, matrix: DMatrix::identity(dim, dim) }
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn sizes(&self) -> (usize, usize) {
        (self.basis.band1().len(), self.basis.band2().len())
    }

    /// Red-to-red transmission block.
    pub fn rr(&self) -> DMatrixView<'_, Complex64> {
        let (n1, _) = self.sizes();
        self.matrix.view((0, 0), (n1, n1))
    }

    /// Red-input to blue-output conversion block.
    pub fn rb(&self) -> DMatrixView<'_, Complex64> {
        let (n1, n2) = self.sizes();
        self.matrix.view((0, n1), (n1, n2))
    }

    /// Blue-input to red-output conversion block.
    pub fn br(&self) -> DMatrixView<'_, Complex64> {
        let (n1, n2) = self.sizes();
        self.matrix.view((n1, 0), (n2, n1))
    }

    /// Blue-to-blue transmission block.
    pub fn bb(&self) -> DMatrixView<'_, Complex64> {
        let (n1, n2) = self.sizes();
        self.matrix.view((n1, n1), (n2, n2))
    }

    pub fn verify_unitarity(&self) -> UnitarityReport {
        let m = &self.matrix;
        let forward = m * m.adjoint();
        let backward = m.adjoint() * m;
        let (n1, n2) = self.sizes();
        // The four block conditions are the blocks of M M†.
        UnitarityReport {
            forward: identity_residual(&forward),
            backward: identity_residual(&backward),
            red_red: identity_residual(&forward.view((0, 0), (n1, n1)).into_owned()),
            blue_red: max_abs(&forward.view((n1, 0), (n2, n1)).into_owned()),
            blue_blue: identity_residual(&forward.view((n1, n1), (n2, n2)).into_owned()),
            red_blue: max_abs(&forward.view((0, n1), (n1, n2)).into_owned()),
        }
    }

    /// Fails with `NotUnitary` when the worst residual exceeds `tol`.
    pub fn ensure_unitary(&self, tol: f64) -> Result<UnitarityReport> {
        let report = self.verify_unitarity();
        if report.max() > tol {
            return Err(Error::NotUnitary { residual: report.max() });
        }
        Ok(report)
    }

    /// `S_out = Mᵀ S_in M`.
    pub fn apply(&self, state: &TwoPhotonState) -> Result<TwoPhotonState> {
        if state.basis() != &self.basis {
            return Err(Error::BasisMismatch);
        }
        let s = state.pair_amplitudes();
        let mut out = self.matrix.transpose() * s * &self.matrix;
        // Restore exact symmetry lost to rounding.
        let dim = out.nrows();
        for i in 0..dim {
            for j in (i + 1)..dim {
                let avg = 0.5 * (out[(i, j)] + out[(j, i)]);
                out[(i, j)] = avg;
                out[(j, i)] = avg;
            }
        }
        Ok(TwoPhotonState::from_parts(self.basis.clone(), out))
    }

    /// The backward transformation `M†`.
    pub fn inverse(&self) -> Self {
        Self { basis: self.basis.clone(), matrix: self.matrix.adjoint() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&KernelDocument::from(self)).expect("kernel serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: KernelDocument = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        doc.try_into()
    }
}

/// On-disk form: `{basis: {band1, band2}, matrix: [[[re, im], ...], ...]}`, row-major.
#[derive(Serialize, Deserialize)]
struct KernelDocument {
    basis: ModeBasis,
    matrix: Vec<Vec<[f64; 2]>>,
}

impl From<&BlockKernel> for KernelDocument {
    fn from(k: &BlockKernel) -> Self {
        let m = &k.matrix;
        let matrix = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self { basis: k.basis.clone(), matrix }
    }
}

impl TryFrom<KernelDocument> for BlockKernel {
    type Error = Error;

    fn try_from(doc: KernelDocument) -> Result<Self> {
        let dim = doc.basis.len();
        if doc.matrix.len() != dim || doc.matrix.iter().any(|row| row.len() != dim) {
            return Err(Error::Format(format!("kernel matrix must be {dim}x{dim}")));
        }
        let matrix = DMatrix::from_fn(dim, dim, |i, j| {
            let [re, im] = doc.matrix[i][j];
            Complex64::new(re, im)
        });
        BlockKernel::new(doc.basis, matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Band, FrequencyGrid};

    fn basis(n: usize) -> ModeBasis {
        ModeBasis::new(
            FrequencyGrid::uniform(100.0, 10.0, n, Band::Red).unwrap(),
            FrequencyGrid::uniform(300.0, 10.0, n, Band::Blue).unwrap(),
        )
    }

    #[test]
    fn identity_has_zero_residuals() {
        let k = BlockKernel::identity(basis(3));
        let r = k.verify_unitarity();
        assert_eq!(r.max(), 0.0);
        assert!(r.is_unitary());
    }

    #[test]
    fn perturbed_entry_is_detected() {
        let mut m = DMatrix::identity(6, 6);
        m[(1, 4)] = Complex64::new(1e-3, 0.0);
        let k = BlockKernel::new(basis(3), m).unwrap();
        let r = k.verify_unitarity().max();
        assert!((1e-4..=1e-2).contains(&r), "{r}");
        assert!(matches!(k.ensure_unitary(1e-8), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn block_views_partition_matrix() {
        let m = DMatrix::from_fn(5, 5, |i, j| Complex64::new(i as f64, j as f64));
        let b = ModeBasis::new(
            FrequencyGrid::uniform(100.0, 10.0, 2, Band::Red).unwrap(),
            FrequencyGrid::uniform(300.0, 10.0, 3, Band::Blue).unwrap(),
        );
        let k = BlockKernel::new(b.clone(), m.clone()).unwrap();
        assert_eq!(k.rr().shape(), (2, 2));
        assert_eq!(k.rb().shape(), (2, 3));
        assert_eq!(k.br().shape(), (3, 2));
        assert_eq!(k.bb().shape(), (3, 3));
        assert_eq!(k.br()[(0, 1)], Complex64::new(2.0, 1.0));
        let rebuilt = BlockKernel::from_blocks(
            b,
            &k.rr().into_owned(),
            &k.rb().into_owned(),
            &k.br().into_owned(),
            &k.bb().into_owned(),
        )
        .unwrap();
        assert_eq!(rebuilt.matrix(), &m);
    }

    #[test]
    fn apply_rejects_other_basis() {
        let k = BlockKernel::identity(basis(2));
        let other = basis(3);
        let s = TwoPhotonState::from_pair_matrix(&other, DMatrix::zeros(6, 6)).unwrap();
        assert_eq!(k.apply(&s), Err(Error::BasisMismatch));
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let m = DMatrix::from_fn(4, 4, |i, j| {
            Complex64::new((i as f64 + 0.1).sqrt() / 3.0, -(j as f64 + 1.0).ln() * std::f64::consts::PI)
        });
        let k = BlockKernel::new(basis(2), m).unwrap();
        let back = BlockKernel::from_json(&k.to_json()).unwrap();
        for (a, b) in k.matrix().iter().zip(back.matrix().iter()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        assert_eq!(back.basis(), k.basis());
    }

    #[test]
    fn json_rejects_wrong_shape() {
        let text = BlockKernel::identity(basis(2)).to_json();
        let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        doc["matrix"].as_array_mut().unwrap().pop();
        assert!(matches!(BlockKernel::from_json(&doc.to_string()), Err(Error::Format(_))));
    }
}
