use num_complex::Complex64;

use crate::caps::{self, checked_power};
use crate::error::{Error, Result};
use crate::info::{self, Bipartition};
use crate::linalg::{self, CMat, CVec};
use crate::qstate::{DensityMatrix, SiteSpace};

use super::schmidt::{operator_schmidt, OperatorSchmidt};

/// Commutator max-norm above which terms count as non-commuting.
pub const COMMUTATION_TOLERANCE: f64 = 1e-10;

/// Largest patch contracted by exact summation over virtual indices.
pub const MAX_PATCH_SITES: usize = 6;

fn check_commute(a: &CMat, a_sites: [usize; 2], b: &CMat, b_sites: [usize; 2], d: usize) -> Result<()> {
    let ea = linalg::embed_operator(a, &a_sites, d, 3);
    let eb = linalg::embed_operator(b, &b_sites, d, 3);
    let norm = linalg::max_abs(&linalg::commutator(&ea, &eb));
    if norm > COMMUTATION_TOLERANCE {
        return Err(Error::NonCommuting { norm });
    }
    Ok(())
}

fn check_pair_shape(h: &CMat, d: usize) -> Result<()> {
    if d == 0 || h.shape() != (d * d, d * d) {
        return Err(Error::DimensionMismatch(format!("pair term must be {0}x{0}, got {1:?}", d * d, h.shape())));
    }
    Ok(())
}

/// Local operator of a site given the balanced factors of its bonds. Factors
/// of commuting two-site terms commute on a shared site, so the order of the
/// product is immaterial.
fn product(d: usize, factors: &[Option<&CMat>]) -> CMat {
    factors.iter().flatten().fold(linalg::identity(d), |acc, f| acc * *f)
}

/// Result of contracting a Gibbs network: the operator `M = exp(−βH/2)`
/// assembled from the tensors and the state `M M† / Z` obtained by tracing
/// the environment copies.
#[derive(Debug, Clone)]
pub struct ContractedNetwork {
    pub beta: f64,
    pub bond_dim: usize,
    /// Bonds of the lattice as site pairs.
    pub bonds: Vec<(usize, usize)>,
    pub half_boltzmann: CMat,
    pub state: DensityMatrix,
}

impl ContractedNetwork {
    fn new(beta: f64, d: usize, bonds: Vec<(usize, usize)>, sites: usize, half_boltzmann: CMat) -> Result<Self> {
        let rho = &half_boltzmann * half_boltzmann.adjoint();
        let state = DensityMatrix::from_unnormalized(SiteSpace::chain(d, sites)?, rho)?;
        Ok(ContractedNetwork { beta, bond_dim: d * d, bonds, half_boltzmann, state })
    }

    /// The pure network state before tracing: site `s` carries the pair
    /// `(i₁, i₂)` as labels `2s` (physical) and `2s + 1` (environment).
    pub fn purification(&self) -> Result<DensityMatrix> {
        let d = self.state.space().local_dim();
        let n = self.state.space().site_count();
        let dim = self.half_boltzmann.nrows();
        let mut psi = CVec::zeros(dim * dim);
        for row in 0..dim {
            let a = linalg::digits(row, d, n);
            for col in 0..dim {
                let b = linalg::digits(col, d, n);
                let interleaved: Vec<usize> = a.iter().zip(&b).flat_map(|(&x, &y)| [x, y]).collect();
                psi[linalg::from_digits(&interleaved, d)] = self.half_boltzmann[(row, col)];
            }
        }
        DensityMatrix::pure(SiteSpace::chain(d, 2 * n)?, &psi)
    }

    /// Number of bonds with exactly one end in `region`.
    pub fn cut_bonds(&self, region: &[usize]) -> usize {
        self.bonds.iter().filter(|(a, b)| region.contains(a) != region.contains(b)).count()
    }
}

/// Translation-invariant MPO for the Gibbs state of a ring with a commuting
/// nearest-neighbour pair term.
#[derive(Debug, Clone)]
pub struct GibbsMpo {
    local_dim: usize,
    beta: f64,
    schmidt: OperatorSchmidt,
    /// `A[l][r]` as `d x d` operators `[·]_{i₁,i₂}`.
    entries: Vec<Vec<CMat>>,
}

pub fn build_gibbs_tensor_1d(h_pair: &CMat, beta: f64, d: usize) -> Result<GibbsMpo> {
    check_pair_shape(h_pair, d)?;
    let schmidt = operator_schmidt(h_pair, beta)?;
    check_commute(h_pair, [0, 1], h_pair, [1, 2], d)?;
    let pairs = schmidt.balanced();
    let bond = d * d;
    let entries = (0..bond)
        .map(|l| {
            (0..bond)
                .map(|r| match (pairs.get(l), pairs.get(r)) {
                    // The bond on the left acts here with its second factor.
                    (Some((_, from_left)), Some((from_right, _))) => product(d, &[Some(from_left), Some(from_right)]),
                    _ => CMat::zeros(d, d),
                })
                .collect()
        })
        .collect();
    Ok(GibbsMpo { local_dim: d, beta, schmidt, entries })
}

impl GibbsMpo {
    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn bond_dim(&self) -> usize {
        self.local_dim * self.local_dim
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn schmidt(&self) -> &OperatorSchmidt {
        &self.schmidt
    }

    pub fn entry(&self, l: usize, r: usize) -> &CMat {
        &self.entries[l][r]
    }

    /// Contracts a ring of `n ≥ 3` tensors, bond `b` joining sites `b` and
    /// `b + 1 mod n`.
    pub fn contract_ring(&self, n: usize) -> Result<ContractedNetwork> {
        if n < 3 {
            return Err(Error::MalformedGeometry(format!("a ring needs at least 3 sites, got {n}")));
        }
        let d = self.local_dim;
        caps::global().check_dim(checked_power(d, n))?;
        let k = self.schmidt.rank();
        let dim = d.pow(n as u32);
        let mut total = CMat::zeros(dim, dim);
        for first in 0..k {
            let mut open: Vec<CMat> = (0..k).map(|r| self.entries[first][r].clone()).collect();
            for _ in 1..n - 1 {
                open = (0..k)
                    .map(|r| {
                        let mut acc = linalg::kron(&open[0], &self.entries[0][r]);
                        for (b, t) in open.iter().enumerate().skip(1) {
                            acc += linalg::kron(t, &self.entries[b][r]);
                        }
                        acc
                    })
                    .collect();
            }
            for (b, t) in open.iter().enumerate() {
                total += linalg::kron(t, &self.entries[b][first]);
            }
        }
        let bonds = (0..n).map(|b| (b, (b + 1) % n)).collect();
        ContractedNetwork::new(self.beta, d, bonds, n, total)
    }
}

/// Uniform PEPS tensor for a square lattice with commuting horizontal and
/// vertical pair terms. Virtual indices are ordered `r, l, u, d`: the bonds to
/// the right, left, above and below the site. The physical index is
/// `i = i₁·d + i₂` with `i₂` the environment copy.
#[derive(Debug, Clone)]
pub struct GibbsPepsTensor {
    local_dim: usize,
    beta: f64,
    horizontal: OperatorSchmidt,
    vertical: OperatorSchmidt,
    entries: Vec<CMat>,
}

/// `h_h` acts on (left, right) neighbours, `h_v` on (upper, lower).
pub fn build_gibbs_tensor_2d(h_h: &CMat, h_v: &CMat, beta: f64, d: usize) -> Result<GibbsPepsTensor> {
    check_pair_shape(h_h, d)?;
    check_pair_shape(h_v, d)?;
    let horizontal = operator_schmidt(h_h, beta)?;
    let vertical = operator_schmidt(h_v, beta)?;
    // Every way two terms can share a site; the shared site is 1.
    check_commute(h_h, [0, 1], h_h, [1, 2], d)?;
    check_commute(h_v, [0, 1], h_v, [1, 2], d)?;
    for h_sites in [[0, 1], [1, 0]] {
        for v_sites in [[1, 2], [2, 1]] {
            check_commute(h_h, h_sites, h_v, v_sites, d)?;
        }
    }
    let bond = d * d;
    let hp = horizontal.balanced();
    let vp = vertical.balanced();
    let mut entries = Vec::with_capacity(bond.pow(4));
    for r in 0..bond {
        for l in 0..bond {
            for u in 0..bond {
                for dn in 0..bond {
                    let factors = [hp.get(r).map(|p| &p.0), hp.get(l).map(|p| &p.1), vp.get(u).map(|p| &p.1), vp.get(dn).map(|p| &p.0)];
                    entries.push(if factors.iter().all(Option::is_some) { product(d, &factors) } else { CMat::zeros(d, d) });
                }
            }
        }
    }
    Ok(GibbsPepsTensor { local_dim: d, beta, horizontal, vertical, entries })
}

impl GibbsPepsTensor {
    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn bond_dim(&self) -> usize {
        self.local_dim * self.local_dim
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn horizontal(&self) -> &OperatorSchmidt {
        &self.horizontal
    }

    pub fn vertical(&self) -> &OperatorSchmidt {
        &self.vertical
    }

    /// `[d·d, D, D, D, D]`.
    pub fn shape(&self) -> [usize; 5] {
        let b = self.bond_dim();
        [self.local_dim * self.local_dim, b, b, b, b]
    }

    pub fn entry(&self, r: usize, l: usize, u: usize, dn: usize) -> &CMat {
        let b = self.bond_dim();
        &self.entries[((r * b + l) * b + u) * b + dn]
    }

    /// `A^i_{r,l,u,d}`.
    pub fn element(&self, r: usize, l: usize, u: usize, dn: usize, i: usize) -> Complex64 {
        let d = self.local_dim;
        self.entry(r, l, u, dn)[(i / d, i % d)]
    }

    /// Entries flattened row-major in the index order `r, l, u, d, i`.
    pub fn flattened(&self) -> Vec<Complex64> {
        let d = self.local_dim;
        self.entries
            .iter()
            .flat_map(|m| (0..d * d).map(move |i| m[(i / d, i % d)]))
            .collect()
    }

    /// Contracts an open `rows x cols` patch by summing over all virtual
    /// indices. Boundary sites carry no factor for missing bonds.
    pub fn contract_patch(&self, rows: usize, cols: usize) -> Result<ContractedNetwork> {
        let sites = rows * cols;
        if rows == 0 || cols == 0 {
            return Err(Error::MalformedGeometry(format!("empty {rows}x{cols} patch")));
        }
        if sites > MAX_PATCH_SITES {
            return Err(Error::PatchTooLarge { rows, cols, max_sites: MAX_PATCH_SITES });
        }
        let d = self.local_dim;
        caps::global().check_dim(checked_power(d, sites))?;
        let mut bonds = Vec::new();
        let mut vertical = Vec::new();
        for row in 0..rows {
            for col in 0..cols {
                let s = row * cols + col;
                if col + 1 < cols {
                    bonds.push((s, s + 1));
                    vertical.push(false);
                }
                if row + 1 < rows {
                    bonds.push((s, s + cols));
                    vertical.push(true);
                }
            }
        }
        let hp = self.horizontal.balanced();
        let vp = self.vertical.balanced();
        let radix: Vec<usize> = vertical.iter().map(|&v| if v { vp.len() } else { hp.len() }).collect();
        let dim = d.pow(sites as u32);
        let mut total = CMat::zeros(dim, dim);
        let mut index = vec![0usize; bonds.len()];
        loop {
            let mut local: Vec<Vec<&CMat>> = vec![Vec::new(); sites];
            for (k, &(a, b)) in bonds.iter().enumerate() {
                let (first, second) = if vertical[k] { &vp[index[k]] } else { &hp[index[k]] };
                local[a].push(first);
                local[b].push(second);
            }
            let ops: Vec<CMat> = local
                .iter()
                .map(|fs| product(d, &fs.iter().map(|f| Some(*f)).collect::<Vec<_>>()))
                .collect();
            total += linalg::kron_all(ops.iter());
            // Mixed-radix increment.
            let mut k = 0;
            while k < index.len() {
                index[k] += 1;
                if index[k] < radix[k] {
                    break;
                }
                index[k] = 0;
                k += 1;
            }
            if k == index.len() {
                break;
            }
        }
        ContractedNetwork::new(self.beta, d, bonds, sites, total)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PepsAreaReport {
    pub beta: f64,
    pub region_a: Vec<usize>,
    pub cut_bonds: usize,
    pub bond_dim: usize,
    pub mutual_information: f64,
    /// `2 |∂A| ln D`.
    pub bound: f64,
}

impl PepsAreaReport {
    pub fn slack(&self) -> f64 {
        self.bound - self.mutual_information
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.slack() >= -tol
    }
}

/// `I(A:B)` of a contracted network against the complement of `A`, with
/// `|∂A|` counted as cut bonds.
pub fn peps_area_check_mixed(network: &ContractedNetwork, region_a: &[usize]) -> Result<PepsAreaReport> {
    let space = network.state.space();
    let part = Bipartition::against_complement(space, region_a.to_vec())?;
    if part.region_b().is_empty() {
        return Err(Error::EmptyRegion);
    }
    let mutual_information = info::mutual_information(&network.state, &part)?;
    let cut_bonds = network.cut_bonds(region_a);
    Ok(PepsAreaReport {
        beta: network.beta,
        region_a: part.region_a().to_vec(),
        cut_bonds,
        bond_dim: network.bond_dim,
        mutual_information,
        bound: 2.0 * cut_bonds as f64 * (network.bond_dim as f64).ln(),
    })
}
