//! Named generators.

use rand::Rng;

use crate::error::Result;
use crate::linalg::{self, r, CMat};
use crate::random;

use super::{FcsDescriptor, QuantumChannel};

/// Isometry `|α⟩ ↦ Σ_{β,s} A^s_{βα} |β⟩|s⟩` built from MPS matrices.
pub fn isometry_from_mps(matrices: &[CMat]) -> CMat {
    let d = matrices.len();
    let bond = matrices[0].nrows();
    CMat::from_fn(bond * d, bond, |row, a| matrices[row % d][(row / d, a)])
}

/// `D = 1` generator emitting `cos(π/8)|0⟩ + sin(π/8)|1⟩` on every site.
pub fn product() -> Result<FcsDescriptor> {
    let t = std::f64::consts::FRAC_PI_8;
    let v = CMat::from_column_slice(2, 1, &[r(t.cos()), r(t.sin())]);
    FcsDescriptor::new(QuantumChannel::new(vec![v])?, 2)
}

/// `|α⟩ ↦ |α⟩|α⟩`, whose chain is the GHZ state. The transfer operator is
/// the dephasing channel, so the maximally mixed fixed point is supplied.
pub fn ghz() -> Result<FcsDescriptor> {
    let p0 = linalg::real_diag(&[1.0, 0.0]);
    let p1 = linalg::real_diag(&[0.0, 1.0]);
    let v = isometry_from_mps(&[p0, p1]);
    FcsDescriptor::with_fixed_point(QuantumChannel::new(vec![v])?, 2, linalg::identity(2) * r(0.5))
}

/// Spin-1 AKLT matrices for `m = +1, 0, −1`.
pub fn aklt_matrices() -> Vec<CMat> {
    let a = (2.0f64 / 3.0).sqrt();
    let b = (1.0f64 / 3.0).sqrt();
    vec![
        linalg::from_real_rows(&[&[0.0, a], &[0.0, 0.0]]),
        linalg::from_real_rows(&[&[-b, 0.0], &[0.0, b]]),
        linalg::from_real_rows(&[&[0.0, 0.0], &[-a, 0.0]]),
    ]
}

pub fn aklt() -> Result<FcsDescriptor> {
    FcsDescriptor::new(QuantumChannel::new(vec![isometry_from_mps(&aklt_matrices())])?, 3)
}

/// AKLT followed by a π rotation about z on the emitted spin with
/// probability `p`; the transfer operator is unchanged.
pub fn aklt_mixed(p: f64) -> Result<FcsDescriptor> {
    let v = isometry_from_mps(&aklt_matrices());
    let rotation = linalg::kron(&linalg::identity(2), &linalg::real_diag(&[-1.0, 1.0, -1.0]));
    let kraus = vec![&v * r((1.0 - p).sqrt()), rotation * &v * r(p.sqrt())];
    FcsDescriptor::new(QuantumChannel::new(kraus)?, 3)
}

/// Haar-like generator: a random isometry `C^D → C^D ⊗ C^d ⊗ C^K` split
/// into `K` Kraus operators.
pub fn random<R: Rng + ?Sized>(rng: &mut R, bond_dim: usize, phys_dim: usize, kraus_count: usize) -> Result<FcsDescriptor> {
    let out = bond_dim * phys_dim;
    let g = random::ginibre(rng, out * kraus_count, bond_dim);
    let q = g.qr().q();
    let kraus = (0..kraus_count)
        .map(|k| CMat::from_fn(out, bond_dim, |i, j| q[(k * out + i, j)]))
        .collect();
    FcsDescriptor::new(QuantumChannel::new(kraus)?, phys_dim)
}
