//! Dense complex linear algebra helpers shared by every module.
//!
//! All matrices are `DMatrix<Complex64>`. Multi-site operators use the
//! row-major convention: the first site in label order is the most
//! significant digit of the basis index.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Threshold on the anti-Hermitian part below which a matrix is symmetrized.
pub const HERMITICITY_TOL: f64 = 1e-10;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

pub fn real_diag(values: &[f64]) -> CMat {
    CMat::from_diagonal(&CVec::from_iterator(values.len(), values.iter().map(|&v| r(v))))
}

pub fn from_real_rows(rows: &[&[f64]]) -> CMat {
    let n = rows.len();
    let m = rows.first().map_or(0, |row| row.len());
    CMat::from_fn(n, m, |i, j| r(rows[i][j]))
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_all<'a>(ops: impl IntoIterator<Item = &'a CMat>) -> CMat {
    ops.into_iter().fold(identity(1), |acc, op| kron(&acc, op))
}

pub fn trace(m: &CMat) -> Complex64 {
    m.trace()
}

/// `tr[a b]` without forming the product.
pub fn trace_product(a: &CMat, b: &CMat) -> Complex64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    debug_assert_eq!(a.nrows(), b.ncols());
    let mut acc = ZERO;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Max-norm of the anti-Hermitian part `(m - m†)/2`.
pub fn anti_hermitian_deviation(m: &CMat) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max(((m[(i, j)] - m[(j, i)].conj()) * 0.5).norm());
        }
    }
    dev
}

/// Returns `(m + m†)/2` when the anti-Hermitian part is below `tol`.
pub fn hermitize(m: &CMat, tol: f64) -> Result<CMat> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let deviation = anti_hermitian_deviation(m);
    if deviation > tol || !deviation.is_finite() {
        return Err(Error::NotHermitian { deviation });
    }
    Ok((m + m.adjoint()) * r(0.5))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn eigvalsh(m: &CMat) -> Vec<f64> {
    let mut values: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues ascending and
/// eigenvectors in the matching columns.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMat::from_fn(m.nrows(), order.len(), |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_function(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (values, vectors) = eigh(m);
    let mut scaled = vectors.clone();
    for (j, &v) in values.iter().enumerate() {
        scaled.column_mut(j).scale_mut(f(v));
    }
    scaled * vectors.adjoint()
}

/// `exp(t * h)` for Hermitian `h`.
pub fn expm_hermitian(h: &CMat, t: f64) -> CMat {
    hermitian_function(h, |v| (t * v).exp())
}

/// Singular values, descending.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut values: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Largest singular value.
pub fn operator_norm(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Square root of a positive semidefinite Hermitian matrix (negative
/// eigenvalues from rounding are clipped to zero).
pub fn psd_sqrt(m: &CMat) -> CMat {
    hermitian_function(m, |v| v.max(0.0).sqrt())
}

/// Orthonormal basis of the column space, with rank cut at `rel_tol` of the
/// largest singular value.
pub fn column_basis(m: &CMat, rel_tol: f64) -> CMat {
    if m.ncols() == 0 {
        return CMat::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.iter().copied().fold(0.0_f64, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > rel_tol * smax && smax > 0.0)
        .collect();
    CMat::from_fn(m.nrows(), keep.len(), |i, j| u[(i, keep[j])])
}

/// Eigenvalues of a general square matrix from its complex Schur form,
/// sorted by decreasing modulus.
pub fn eigenvalues_general(m: &CMat) -> Option<Vec<Complex64>> {
    let schur = nalgebra::Schur::try_new(m.clone(), f64::EPSILON, 100_000)?;
    let (_, t) = schur.unpack();
    let mut values: Vec<Complex64> = (0..t.nrows()).map(|i| t[(i, i)]).collect();
    values.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(b.re.total_cmp(&a.re)).then(b.im.total_cmp(&a.im)));
    Some(values)
}

/// Decomposes a global index into per-site digits (most significant first).
pub fn digits(mut index: usize, base: usize, count: usize) -> Vec<usize> {
    let mut out = vec![0; count];
    for slot in out.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    out
}

/// Inverse of [`digits`].
pub fn from_digits(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * base + x)
}

/// Embeds an operator acting on the sites at `positions` (in the operator's
/// own tensor order) into a register of `site_count` sites of dimension
/// `local_dim`.
pub fn embed_operator(op: &CMat, positions: &[usize], local_dim: usize, site_count: usize) -> CMat {
    let dim = local_dim.pow(site_count as u32);
    let local = local_dim.pow(positions.len() as u32);
    assert_eq!(op.nrows(), local, "operator size does not match its support");
    let strides: Vec<usize> = positions
        .iter()
        .map(|&p| local_dim.pow((site_count - 1 - p) as u32))
        .collect();
    let mut out = CMat::zeros(dim, dim);
    for col in 0..dim {
        let mut base = col;
        let mut a = 0;
        for &s in &strides {
            let digit = (col / s) % local_dim;
            base -= digit * s;
            a = a * local_dim + digit;
        }
        for b in 0..local {
            let value = op[(b, a)];
            if value == ZERO {
                continue;
            }
            let mut row = base;
            let mut rem = b;
            for &s in strides.iter().rev() {
                row += (rem % local_dim) * s;
                rem /= local_dim;
            }
            out[(row, col)] += value;
        }
    }
    out
}

/// Ordinary least squares fit `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Pearson correlation coefficient of the samples.
    pub correlation: f64,
    pub points: usize,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let correlation = if syy == 0.0 { 1.0 } else { sxy / (sxx * syy).sqrt() };
    Some(LinearFit { slope, intercept: my - slope * mx, correlation, points: n })
}

pub mod paulis {
    use super::{c, from_real_rows, CMat};

    pub fn x() -> CMat {
        from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    pub fn y() -> CMat {
        CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
    }

    pub fn z() -> CMat {
        from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])
    }
}
