use crate::caps::{self, checked_power};
use crate::error::Result;
use crate::linalg::{self, CMat};
use crate::qstate::{compress_factor as compress, DensityMatrix, FactoredState, SiteSpace};

use super::FcsDescriptor;

/// `F` with `F F†` a state on memory ⊗ emitted sites, memory most
/// significant, newest site last.
struct MemoryFactor<'a> {
    fcs: &'a FcsDescriptor,
    sites: usize,
    factor: CMat,
}

impl<'a> MemoryFactor<'a> {
    fn stationary(fcs: &'a FcsDescriptor) -> Self {
        Self::starting_from(fcs, fcs.fixed_point())
    }

    fn starting_from(fcs: &'a FcsDescriptor, memory: &CMat) -> Self {
        let (values, vectors) = linalg::eigh(memory);
        let mut factor = vectors;
        for (j, v) in values.iter().enumerate() {
            factor.column_mut(j).scale_mut(v.max(0.0).sqrt());
        }
        MemoryFactor { fcs, sites: 0, factor: compress(factor) }
    }

    fn block_dim(&self) -> usize {
        self.fcs.phys_dim().pow(self.sites as u32)
    }

    /// Applies `T`, emitting one more site.
    fn emit(&mut self) {
        let d = self.fcs.phys_dim();
        let bond = self.fcs.bond_dim();
        let block = self.block_dim();
        let rank = self.factor.ncols();
        let kraus = self.fcs.generator().kraus();
        let mut next = CMat::zeros(bond * block * d, rank * kraus.len());
        for (k, op) in kraus.iter().enumerate() {
            for beta in 0..bond {
                for s in 0..d {
                    for alpha in 0..bond {
                        let w = op[(beta * d + s, alpha)];
                        if w == linalg::ZERO {
                            continue;
                        }
                        for x in 0..block {
                            let (src, dst) = (alpha * block + x, (beta * block + x) * d + s);
                            for c in 0..rank {
                                next[(dst, k * rank + c)] += w * self.factor[(src, c)];
                            }
                        }
                    }
                }
            }
        }
        self.sites += 1;
        self.factor = compress(next);
    }

    /// Applies `E` to the memory, leaving the emitted sites alone.
    fn propagate(&mut self) {
        let block = self.block_dim();
        let bond = self.fcs.bond_dim();
        let rank = self.factor.ncols();
        let blocks = self.fcs.memory_blocks();
        let mut next = CMat::zeros(bond * block, rank * blocks.len());
        for (j, a) in blocks.iter().enumerate() {
            for beta in 0..bond {
                for alpha in 0..bond {
                    let w = a[(beta, alpha)];
                    if w == linalg::ZERO {
                        continue;
                    }
                    for x in 0..block {
                        let (src, dst) = (alpha * block + x, beta * block + x);
                        for c in 0..rank {
                            next[(dst, j * rank + c)] += w * self.factor[(src, c)];
                        }
                    }
                }
            }
        }
        self.factor = compress(next);
    }

    /// Traces out the memory.
    fn into_sites(self, labels: Vec<usize>) -> Result<FactoredState> {
        let block = self.block_dim();
        let bond = self.fcs.bond_dim();
        let rank = self.factor.ncols();
        let f = CMat::from_fn(block, bond * rank, |x, col| self.factor[((col / rank) * block + x, col % rank)]);
        let space = SiteSpace::new(self.fcs.phys_dim(), labels)?;
        Ok(FactoredState::from_trusted(space, compress(f)))
    }
}

fn check_cap(fcs: &FcsDescriptor, sites: usize) -> Result<()> {
    caps::global().check_dim(checked_power(fcs.phys_dim(), sites).saturating_mul(fcs.bond_dim() as u128))
}

/// `ρ_A = tr_1[T^n(ϱ)]` on sites `0..n`, kept in factored form.
pub fn block_state_factored(fcs: &FcsDescriptor, n_sites: usize) -> Result<FactoredState> {
    if n_sites == 0 {
        return Ok(FactoredState::from_trusted(SiteSpace::trivial(fcs.phys_dim()), CMat::from_element(1, 1, linalg::ONE)));
    }
    check_cap(fcs, n_sites)?;
    let mut m = MemoryFactor::stationary(fcs);
    for _ in 0..n_sites {
        m.emit();
    }
    m.into_sites((0..n_sites).collect())
}

/// `tr_1[T^n(σ)]` for an arbitrary memory state `σ`, e.g. an open boundary.
pub fn block_state_from(fcs: &FcsDescriptor, memory: &CMat, n_sites: usize) -> Result<FactoredState> {
    if n_sites == 0 {
        return Err(crate::Error::EmptyRegion);
    }
    check_cap(fcs, n_sites)?;
    let mut m = MemoryFactor::starting_from(fcs, memory);
    for _ in 0..n_sites {
        m.emit();
    }
    m.into_sites((0..n_sites).collect())
}

/// Reduced state of `n_sites` contiguous sites. For `n_sites = 0` this is the
/// scalar `1` on the zero-site space.
pub fn block_state(fcs: &FcsDescriptor, n_sites: usize) -> Result<DensityMatrix> {
    Ok(block_state_factored(fcs, n_sites)?.to_density())
}

/// Blocks `A` (sites `0..n_a`) and `B` (sites `n_a+L..n_a+L+n_b`) separated
/// by `L` sites.
#[derive(Debug, Clone)]
pub struct BlockStates {
    pub gap: usize,
    pub rho_a: FactoredState,
    pub rho_b: FactoredState,
    pub rho_ab: FactoredState,
}

impl BlockStates {
    pub fn product(&self) -> Result<FactoredState> {
        self.rho_a.tensor(&self.rho_b)
    }

    /// `||ρ_AB − ρ_A ⊗ ρ_B||_1`.
    pub fn trace_distance(&self) -> Result<f64> {
        self.rho_ab.trace_distance(&self.product()?)
    }

    pub fn mutual_information(&self) -> Result<f64> {
        Ok((self.rho_a.entropy()? + self.rho_b.entropy()? - self.rho_ab.entropy()?).max(0.0))
    }

    pub fn densities(&self) -> (DensityMatrix, DensityMatrix, DensityMatrix) {
        (self.rho_a.to_density(), self.rho_b.to_density(), self.rho_ab.to_density())
    }
}

/// `ρ_AB = tr_1[T^{n_b} E^L T^{n_a}(ϱ)]`. Starting from the fixed point and
/// tracing the final memory realizes the half-infinite ends exactly.
pub fn separated_block_state(fcs: &FcsDescriptor, n_a: usize, gap: usize, n_b: usize) -> Result<BlockStates> {
    if n_a == 0 || n_b == 0 {
        return Err(crate::Error::EmptyRegion);
    }
    check_cap(fcs, n_a + n_b)?;
    let mut m = MemoryFactor::stationary(fcs);
    for _ in 0..n_a {
        m.emit();
    }
    for _ in 0..gap {
        m.propagate();
    }
    for _ in 0..n_b {
        m.emit();
    }
    let labels: Vec<usize> = (0..n_a).chain(n_a + gap..n_a + gap + n_b).collect();
    let rho_ab = m.into_sites(labels)?;
    let rho_a = rho_ab.partial_trace(&(0..n_a).collect::<Vec<_>>())?;
    let rho_b = rho_ab.partial_trace(&(n_a + gap..n_a + gap + n_b).collect::<Vec<_>>())?;
    Ok(BlockStates { gap, rho_a, rho_b, rho_ab })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fcs::presets;
    use crate::linalg::r;
    use crate::qstate::{self, trace_norm_distance};
    use rand::SeedableRng;

    /// Two-site AKLT state by explicit MPS contraction with open ends
    /// `ϱ = 1/2` on the left and the trace on the right.
    fn aklt_two_site_oracle() -> CMat {
        let a = presets::aklt_matrices();
        let mut rho = CMat::zeros(9, 9);
        for s1 in 0..3 {
            for s2 in 0..3 {
                for t1 in 0..3 {
                    for t2 in 0..3 {
                        let left = &a[s2] * &a[s1] * r(0.5);
                        let right = &a[t2] * &a[t1];
                        rho[(s1 * 3 + s2, t1 * 3 + t2)] = linalg::trace(&(left * right.adjoint()));
                    }
                }
            }
        }
        rho
    }

    #[test]
    fn aklt_two_sites_match_contraction() {
        let f = presets::aklt().unwrap();
        let rho = block_state(&f, 2).unwrap();
        assert!(linalg::max_abs(&(rho.matrix() - aklt_two_site_oracle())) < 1e-12);
    }

    #[test]
    fn empty_block_is_scalar_one() {
        let f = presets::aklt().unwrap();
        let rho = block_state(&f, 0).unwrap();
        assert_eq!(rho.dim(), 1);
        assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn product_generator_gives_product_blocks() {
        let f = presets::product().unwrap();
        let one = block_state(&f, 1).unwrap();
        let three = block_state(&f, 3).unwrap();
        let relabel = |site: usize| DensityMatrix::new(SiteSpace::new(2, vec![site]).unwrap(), one.matrix().clone()).unwrap();
        let expected = one.tensor(&relabel(1)).unwrap().tensor(&relabel(2)).unwrap();
        assert!(trace_norm_distance(&three, &expected).unwrap() < 1e-12);
        let blocks = separated_block_state(&f, 1, 0, 2).unwrap();
        assert!(blocks.trace_distance().unwrap() < 1e-12);
    }

    #[test]
    fn translational_and_marginal_consistency() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let f = presets::random(&mut rng, 3, 2, 2).unwrap();
        for n in 1..5 {
            let small = block_state(&f, n).unwrap();
            let big = block_state(&f, n + 1).unwrap();
            let keep_left: Vec<usize> = (0..n).collect();
            assert!(trace_norm_distance(&big.partial_trace(&keep_left).unwrap(), &small).unwrap() < 1e-10);
            let right = big.partial_trace(&(1..=n).collect::<Vec<_>>()).unwrap();
            let shifted = DensityMatrix::new(small.space().clone(), right.into_matrix()).unwrap();
            assert!(trace_norm_distance(&shifted, &small).unwrap() < 1e-10);
        }
        let blocks = separated_block_state(&f, 2, 3, 2).unwrap();
        let (a, b, _) = blocks.densities();
        let a_direct = block_state(&f, 2).unwrap();
        assert!(trace_norm_distance(&a, &a_direct).unwrap() < 1e-10);
        let b_relabeled = DensityMatrix::new(a_direct.space().clone(), b.into_matrix()).unwrap();
        assert!(trace_norm_distance(&b_relabeled, &a_direct).unwrap() < 1e-10);
    }

    #[test]
    fn gap_zero_is_a_contiguous_block() {
        let f = presets::aklt().unwrap();
        let blocks = separated_block_state(&f, 1, 0, 2).unwrap();
        let direct = block_state(&f, 3).unwrap();
        assert!(linalg::max_abs(&(blocks.rho_ab.to_density().into_matrix() - direct.into_matrix())) < 1e-12);
    }

    #[test]
    fn aklt_single_site_is_maximally_mixed() {
        let f = presets::aklt().unwrap();
        let rho = block_state(&f, 1).unwrap();
        assert!((qstate::von_neumann_entropy(&rho).unwrap() - 3f64.ln()).abs() < 1e-12);
    }
}
