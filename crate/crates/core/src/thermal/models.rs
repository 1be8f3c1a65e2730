//! Named model families.

use rand::Rng;

use crate::error::Result;
use crate::linalg::{self, paulis, r, CMat};
use crate::random;

use super::{Geometry, LatticeHamiltonian, LocalTerm};

fn bond_model(geometry: Geometry, bond: impl Fn(usize, usize) -> LocalTerm) -> Vec<LocalTerm> {
    geometry.bonds().into_iter().map(|(a, b)| bond(a, b)).collect()
}

fn spin(x: usize) -> f64 {
    if x == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `E = −J Σ s_i s_j − h Σ s_i` with `s = +1` for state 0 and `−1` for state 1.
pub fn classical_ising(geometry: Geometry, j: f64, field: f64) -> Result<LatticeHamiltonian> {
    let table: Vec<f64> = (0..4).map(|x| -j * spin(x / 2) * spin(x % 2)).collect();
    let mut terms = bond_model(geometry, |a, b| LocalTerm::table(vec![a, b], table.clone()));
    if field != 0.0 {
        for s in 0..geometry.site_count() {
            terms.push(LocalTerm::table(vec![s], vec![-field, field]));
        }
    }
    LatticeHamiltonian::new(2, geometry, terms)
}

/// `E = −J Σ δ(x_i, x_j)` with `q` colors.
pub fn classical_potts(geometry: Geometry, q: usize, j: f64) -> Result<LatticeHamiltonian> {
    let table: Vec<f64> = (0..q * q).map(|x| if x / q == x % q { -j } else { 0.0 }).collect();
    let terms = bond_model(geometry, |a, b| LocalTerm::table(vec![a, b], table.clone()));
    LatticeHamiltonian::new(q, geometry, terms)
}

/// `H = −J Σ Z_i Z_j − g Σ X_i`.
pub fn transverse_ising(geometry: Geometry, j: f64, g: f64) -> Result<LatticeHamiltonian> {
    let zz = linalg::kron(&paulis::z(), &paulis::z()) * r(-j);
    let mut terms = bond_model(geometry, |a, b| LocalTerm::operator(vec![a, b], zz.clone()));
    for s in 0..geometry.site_count() {
        terms.push(LocalTerm::operator(vec![s], paulis::x() * r(-g)));
    }
    LatticeHamiltonian::new(2, geometry, terms)
}

/// `H = J Σ (X_i X_j + Y_i Y_j)`.
pub fn xx(geometry: Geometry, j: f64) -> Result<LatticeHamiltonian> {
    let h = (linalg::kron(&paulis::x(), &paulis::x()) + linalg::kron(&paulis::y(), &paulis::y())) * r(j);
    LatticeHamiltonian::new(2, geometry, bond_model(geometry, |a, b| LocalTerm::operator(vec![a, b], h.clone())))
}

/// `H = J Σ (X_i X_j + Y_i Y_j + Z_i Z_j)`.
pub fn heisenberg(geometry: Geometry, j: f64) -> Result<LatticeHamiltonian> {
    let h = (linalg::kron(&paulis::x(), &paulis::x())
        + linalg::kron(&paulis::y(), &paulis::y())
        + linalg::kron(&paulis::z(), &paulis::z()))
        * r(j);
    LatticeHamiltonian::new(2, geometry, bond_model(geometry, |a, b| LocalTerm::operator(vec![a, b], h.clone())))
}

/// `H = J Σ Z_i Z_j` as operator terms (commuting, but not a table).
pub fn zz(geometry: Geometry, j: f64) -> Result<LatticeHamiltonian> {
    let h = linalg::kron(&paulis::z(), &paulis::z()) * r(j);
    LatticeHamiltonian::new(2, geometry, bond_model(geometry, |a, b| LocalTerm::operator(vec![a, b], h.clone())))
}

/// Independent GUE bond terms, each rescaled to unit operator norm.
pub fn random_two_local<R: Rng + ?Sized>(rng: &mut R, geometry: Geometry) -> Result<LatticeHamiltonian> {
    let terms = geometry
        .bonds()
        .into_iter()
        .map(|(a, b)| {
            let h = random::hermitian(rng, 4);
            let norm = linalg::operator_norm(&h);
            LocalTerm::operator(vec![a, b], h / r(norm))
        })
        .collect();
    LatticeHamiltonian::new(2, geometry, terms)
}

/// Cluster Hamiltonian `H = −J Σ Z_{i−1} X_i Z_{i+1}` on a chain or ring.
pub fn cluster(geometry: Geometry, j: f64) -> Result<LatticeHamiltonian> {
    let n = geometry.site_count();
    let op: CMat = linalg::kron_all([&paulis::z(), &paulis::x(), &paulis::z()]) * r(-j);
    let centers: Vec<usize> = match geometry {
        Geometry::Ring { .. } => (0..n).collect(),
        _ => (1..n.saturating_sub(1)).collect(),
    };
    let terms = centers
        .into_iter()
        .map(|i| LocalTerm::operator(vec![(i + n - 1) % n, i, (i + 1) % n], op.clone()))
        .collect();
    LatticeHamiltonian::with_range(2, geometry, terms, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn classical_ising_energies() {
        let h = classical_ising(Geometry::Ring { sites: 4 }, 1.0, 0.5).unwrap();
        assert_eq!(h.energy(&[0, 0, 0, 0]).unwrap(), -4.0 - 2.0);
        assert_eq!(h.energy(&[0, 1, 0, 1]).unwrap(), 4.0);
    }

    #[test]
    fn potts_counts_agreeing_bonds() {
        let h = classical_potts(Geometry::Chain { sites: 3 }, 3, 2.0).unwrap();
        assert_eq!(h.energy(&[1, 1, 2]).unwrap(), -2.0);
    }

    #[test]
    fn cluster_terms_commute() {
        let h = cluster(Geometry::Ring { sites: 6 }, 1.0).unwrap();
        let mats: Vec<CMat> = h.terms().iter().map(|t| linalg::embed_operator(&t.local_matrix(), &t.support, 2, 6)).collect();
        for a in &mats {
            for b in &mats {
                assert!(linalg::max_abs(&linalg::commutator(a, b)) < 1e-12);
            }
        }
    }

    #[test]
    fn random_terms_have_unit_norm() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let h = random_two_local(&mut rng, Geometry::Chain { sites: 5 }).unwrap();
        assert_eq!(h.terms().len(), 4);
        for t in h.terms() {
            assert!((linalg::operator_norm(&t.local_matrix()) - 1.0).abs() < 1e-12);
        }
    }
}
