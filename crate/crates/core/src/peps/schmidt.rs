use crate::error::{Error, Result};
use crate::linalg::{self, r, CMat};

/// Relative cut below which singular values of the realigned operator are
/// treated as zero.
pub const RANK_CUT: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtFactor {
    /// Acts on the first site of the pair.
    pub left: CMat,
    /// Acts on the second site.
    pub right: CMat,
    pub weight: f64,
}

/// `O = Σ_α w_α left_α ⊗ right_α` with both factor families orthonormal in
/// the trace inner product.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSchmidt {
    local_dim: usize,
    factors: Vec<SchmidtFactor>,
}

impl OperatorSchmidt {
    /// Decomposes an arbitrary operator on two sites of dimension `d`.
    pub fn decompose(op: &CMat, local_dim: usize) -> Result<Self> {
        let d = local_dim;
        if d == 0 || op.shape() != (d * d, d * d) {
            return Err(Error::DimensionMismatch(format!(
                "two-site operator must be {0}x{0}, got {1:?}",
                d * d,
                op.shape()
            )));
        }
        // M[(i,j),(k,l)] = O[(i k),(j l)]
        let realigned = CMat::from_fn(d * d, d * d, |row, col| {
            let (i, j) = (row / d, row % d);
            let (k, l) = (col / d, col % d);
            op[(i * d + k, j * d + l)]
        });
        let svd = realigned.svd(true, true);
        let u = svd.u.expect("requested U");
        let v_t = svd.v_t.expect("requested V^H");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        let top = order.first().map_or(0.0, |&k| svd.singular_values[k]);
        let factors = order
            .into_iter()
            .filter(|&k| svd.singular_values[k] > RANK_CUT * top)
            .map(|k| SchmidtFactor {
                left: CMat::from_fn(d, d, |i, j| u[(i * d + j, k)]),
                right: CMat::from_fn(d, d, |i, j| v_t[(k, i * d + j)]),
                weight: svd.singular_values[k],
            })
            .collect();
        Ok(OperatorSchmidt { local_dim, factors })
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn factors(&self) -> &[SchmidtFactor] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.factors.iter().map(|f| f.weight).collect()
    }

    pub fn reconstruct(&self) -> CMat {
        let d = self.local_dim;
        let mut out = CMat::zeros(d * d, d * d);
        for f in &self.factors {
            out += linalg::kron(&f.left, &f.right) * r(f.weight);
        }
        out
    }

    /// `G_αβ = tr(left_α† left_β)`.
    pub fn left_gram(&self) -> CMat {
        gram(self.factors.iter().map(|f| &f.left).collect())
    }

    pub fn right_gram(&self) -> CMat {
        gram(self.factors.iter().map(|f| &f.right).collect())
    }

    /// Factor pairs with `√w` absorbed on each side.
    pub fn balanced(&self) -> Vec<(CMat, CMat)> {
        self.factors
            .iter()
            .map(|f| {
                let s = r(f.weight.sqrt());
                (&f.left * s, &f.right * s)
            })
            .collect()
    }
}

fn gram(ops: Vec<&CMat>) -> CMat {
    CMat::from_fn(ops.len(), ops.len(), |a, b| linalg::trace_product(&ops[a].adjoint(), ops[b]))
}

fn pair_dim(h: &CMat) -> Result<usize> {
    let n = h.nrows();
    let d = (n as f64).sqrt().round() as usize;
    if h.ncols() != n || d * d != n || d == 0 {
        return Err(Error::DimensionMismatch(format!("{:?} is not a two-site operator", h.shape())));
    }
    Ok(d)
}

/// Schmidt decomposition of the Boltzmann factor `exp(−βh/2)` of a
/// Hermitian two-site term.
pub fn operator_schmidt(h: &CMat, beta: f64) -> Result<OperatorSchmidt> {
    let d = pair_dim(h)?;
    crate::thermal::check_beta(beta)?;
    let deviation = linalg::anti_hermitian_deviation(h);
    if deviation > linalg::HERMITICITY_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    OperatorSchmidt::decompose(&linalg::expm_hermitian(h, -beta / 2.0), d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{paulis, ZERO};
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn is_diagonal(g: &CMat, tol: f64) -> bool {
        (0..g.nrows()).all(|i| (0..g.ncols()).all(|j| i == j || g[(i, j)].norm() <= tol))
    }

    #[test]
    fn zero_term_is_rank_one_identity() {
        let s = operator_schmidt(&CMat::zeros(4, 4), 1.3).unwrap();
        assert_eq!(s.rank(), 1);
        assert!((s.weights()[0] - 2.0).abs() < 1e-12);
        let f = &s.factors()[0];
        let product = linalg::kron(&f.left, &f.right) * r(f.weight);
        assert!(linalg::max_abs(&(product - linalg::identity(4))) < 1e-12);
    }

    #[test]
    fn zz_weights_are_cosh_and_sinh() {
        let zz = linalg::kron(&paulis::z(), &paulis::z());
        let s = operator_schmidt(&zz, 2.0).unwrap();
        assert_eq!(s.rank(), 2);
        // Normalized factors I/√2 and Z/√2 carry a factor 2.
        let w = s.weights();
        assert!((w[0] - 2.0 * 1f64.cosh()).abs() < 1e-12);
        assert!((w[1] - 2.0 * 1f64.sinh()).abs() < 1e-12);
        let expected = linalg::identity(4) * r(1f64.cosh()) - &zz * r(1f64.sinh());
        assert!(linalg::max_abs(&(s.reconstruct() - expected)) < 1e-12);
    }

    #[test]
    fn random_terms_reconstruct_with_orthogonal_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in [2, 3] {
            for _ in 0..10 {
                let h = random::hermitian(&mut rng, d * d);
                let s = operator_schmidt(&h, 0.8).unwrap();
                assert!(s.rank() <= d * d);
                let exact = linalg::expm_hermitian(&h, -0.4);
                assert!(linalg::max_abs(&(s.reconstruct() - &exact)) < 1e-10);
                assert!(is_diagonal(&s.left_gram(), 1e-10) && is_diagonal(&s.right_gram(), 1e-10));
                assert!(linalg::max_abs(&(s.left_gram() - linalg::identity(s.rank()))) < 1e-10);
                assert!(s.weights().windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }

    #[test]
    fn degenerate_block_rotation_keeps_reconstruction() {
        // Heisenberg exchange: the X, Y, Z components share one weight.
        let (x, y, z) = (paulis::x(), paulis::y(), paulis::z());
        let h = linalg::kron(&x, &x) + linalg::kron(&y, &y) + linalg::kron(&z, &z);
        let s = operator_schmidt(&h, 1.0).unwrap();
        assert_eq!(s.rank(), 4);
        let w = s.weights();
        let block: Vec<usize> = (0..4).filter(|&k| (w[k] - w[1]).abs() < 1e-10).collect();
        assert_eq!(block.len(), 3);
        // Rotate the degenerate left factors by a real orthogonal matrix and
        // the right factors by the same matrix: the sum is unchanged.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let q = random::ginibre(&mut rng, 3, 3).map(|z| r(z.re)).qr().q();
        let mut rotated = s.reconstruct() * ZERO;
        for (k, f) in s.factors().iter().enumerate() {
            if !block.contains(&k) {
                rotated += linalg::kron(&f.left, &f.right) * r(f.weight);
            }
        }
        for a in 0..3 {
            let mut left = CMat::zeros(2, 2);
            let mut right = CMat::zeros(2, 2);
            for (b, &k) in block.iter().enumerate() {
                left += &s.factors()[k].left * q[(b, a)];
                right += &s.factors()[k].right * q[(b, a)];
            }
            rotated += linalg::kron(&left, &right) * r(w[block[0]]);
        }
        assert!(linalg::max_abs(&(rotated - linalg::expm_hermitian(&h, -0.5))) < 1e-10);
    }

    #[test]
    fn rejects_non_hermitian_and_bad_shapes() {
        let mut m = CMat::zeros(4, 4);
        m[(0, 1)] = r(1.0);
        assert!(matches!(operator_schmidt(&m, 1.0), Err(Error::NotHermitian { .. })));
        assert!(operator_schmidt(&CMat::zeros(3, 3), 1.0).is_err());
        assert!(operator_schmidt(&CMat::zeros(4, 4), -1.0).is_err());
    }
}
