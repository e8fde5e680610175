//! Small complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Singular value decomposition `A = U diag(s) V†`.
///
/// Values are sorted descending (ties keep their original order) and each
/// pair of singular vectors is rephased so the largest-magnitude component
/// of the left vector is real and positive.
#[derive(Debug, Clone)]
pub struct SortedSvd {
    pub u: DMatrix<Complex64>,
    pub s: Vec<f64>,
    pub v: DMatrix<Complex64>,
}

pub fn sorted_svd(a: &DMatrix<Complex64>) -> SortedSvd {
    let (rows, cols) = a.shape();
    let k = rows.min(cols);
    if k == 0 {
        return SortedSvd { u: DMatrix::zeros(rows, 0), s: vec![], v: DMatrix::zeros(cols, 0) };
    }
    let mat = faer::Mat::<Complex64>::from_fn(rows, cols, |i, j| a[(i, j)]);
    let svd = mat.thin_svd().expect("SVD of a finite matrix converges");
    let (fu, fv) = (svd.U(), svd.V());
    let u_raw = DMatrix::from_fn(rows, k, |i, j| fu[(i, j)]);
    let v_raw = DMatrix::from_fn(cols, k, |i, j| fv[(i, j)]);
    let singular_values: Vec<f64> = svd.S().column_vector().iter().map(|c| c.re).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| singular_values[j].total_cmp(&singular_values[i]).then(i.cmp(&j)));

    let mut u = DMatrix::zeros(rows, k);
    let mut v = DMatrix::zeros(cols, k);
    let mut s = Vec::with_capacity(k);
    for (dst, &src) in order.iter().enumerate() {
        let mut uc = u_raw.column(src).into_owned();
        let mut vc = v_raw.column(src).into_owned();
        let phase = leading_phase(&uc);
        uc *= phase;
        vc *= phase;
        u.set_column(dst, &uc);
        v.set_column(dst, &vc);
        s.push(singular_values[src]);
    }
    SortedSvd { u, s, v }
}

/// Unit phase that makes the largest-magnitude component of `x` real positive.
pub fn leading_phase(x: &DVector<Complex64>) -> Complex64 {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, c) in x.iter().enumerate() {
        let mag = c.norm();
        if mag > best_mag {
            best = i;
            best_mag = mag;
        }
    }
    if best_mag > 0.0 {
        x[best].conj() / best_mag
    } else {
        Complex64::new(1.0, 0.0)
    }
}

/// Columns stacked into a matrix.
pub fn hstack(columns: &[DVector<Complex64>], rows: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(rows, columns.len());
    for (j, c) in columns.iter().enumerate() {
        m.set_column(j, c);
    }
    m
}

/// `‖Q†Q - I‖_max` for the columns of `q`.
pub fn gram_residual(q: &DMatrix<Complex64>) -> f64 {
    let g = q.adjoint() * q;
    let mut r = 0.0f64;
    for j in 0..g.ncols() {
        for i in 0..g.nrows() {
            let target = if i == j { 1.0 } else { 0.0 };
            r = r.max((g[(i, j)] - target).norm());
        }
    }
    r
}

/// Orthonormal basis of the orthogonal complement of the (orthonormal) columns of `q`.
pub fn orthogonal_complement(q: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (n, m) = q.shape();
    if m >= n {
        return DMatrix::zeros(n, 0);
    }
    // Householder QR of [q | I]: the trailing n-m columns of the full Q span the complement.
    let mut aug = DMatrix::zeros(n, m + n);
    aug.view_mut((0, 0), (n, m)).copy_from(q);
    aug.view_mut((0, m), (n, n)).fill_with_identity();
    let full_q = aug.qr().q();
    let mut c = full_q.columns(m, n - m).into_owned();
    // One projection pass against q cleans residual overlap.
    let overlap = q.adjoint() * &c;
    c -= q * overlap;
    for mut col in c.column_iter_mut() {
        let norm = col.norm();
        col.unscale_mut(norm);
    }
    c
}

/// `‖a - b‖_max`.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
