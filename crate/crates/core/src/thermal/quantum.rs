use serde::{Deserialize, Serialize};

use crate::caps::{self, Caps};
use crate::error::{Error, Result};
use crate::info::{self, Bipartition};
use crate::linalg::{self, r, CMat};
use crate::qstate::{self, DensityMatrix};

use super::classical::{check_beta, ClassicalGibbs};
use super::{BoundarySplit, LatticeHamiltonian, LocalTerm};

/// Eigendecomposition of a lattice Hamiltonian, reusable across a β sweep.
#[derive(Debug, Clone)]
pub struct HamiltonianSpectrum {
    hamiltonian: LatticeHamiltonian,
    matrix: CMat,
    eigenvalues: Vec<f64>,
    eigenvectors: CMat,
}

impl HamiltonianSpectrum {
    pub fn new(h: &LatticeHamiltonian) -> Result<Self> {
        Self::with_caps(h, &caps::global())
    }

    pub fn with_caps(h: &LatticeHamiltonian, caps: &Caps) -> Result<Self> {
        caps.check_dim(caps::checked_power(h.local_dim(), h.site_count()))?;
        let matrix = h.matrix()?;
        let (eigenvalues, eigenvectors) = linalg::eigh(&matrix);
        Ok(HamiltonianSpectrum { hamiltonian: h.clone(), matrix, eigenvalues, eigenvectors })
    }

    pub fn hamiltonian(&self) -> &LatticeHamiltonian {
        &self.hamiltonian
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `ln Z(β)`, shifted by the ground energy to avoid overflow.
    pub fn log_partition(&self, beta: f64) -> f64 {
        let e0 = self.eigenvalues[0];
        let sum: f64 = self.eigenvalues.iter().map(|e| (-beta * (e - e0)).exp()).sum();
        sum.ln() - beta * e0
    }

    pub fn gibbs(&self, beta: f64) -> Result<QuantumGibbs> {
        check_beta(beta)?;
        let e0 = self.eigenvalues[0];
        let weights: Vec<f64> = self.eigenvalues.iter().map(|e| (-beta * (e - e0)).exp()).collect();
        let total: f64 = weights.iter().sum();
        let mut scaled = self.eigenvectors.clone();
        for (j, w) in weights.iter().enumerate() {
            scaled.column_mut(j).scale_mut(w / total);
        }
        let rho = &scaled * self.eigenvectors.adjoint();
        let rho = linalg::hermitize(&rho, 1e-8)?;
        let probabilities: Vec<f64> = weights.iter().map(|w| w / total).collect();
        Ok(QuantumGibbs {
            hamiltonian: self.hamiltonian.clone(),
            beta,
            rho: DensityMatrix::new(self.hamiltonian.space()?, rho)?,
            log_partition: total.ln() - beta * e0,
            entropy: qstate::entropy_of_spectrum(&probabilities)?,
        })
    }
}

/// `ρ = exp(-βH) / Z` by exact diagonalization.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumGibbs {
    pub hamiltonian: LatticeHamiltonian,
    pub beta: f64,
    pub rho: DensityMatrix,
    pub log_partition: f64,
    /// `S(ρ)` from the Boltzmann weights.
    pub entropy: f64,
}

impl QuantumGibbs {
    pub fn build(h: &LatticeHamiltonian, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        HamiltonianSpectrum::new(h)?.gibbs(beta)
    }

    pub fn partition_function(&self) -> f64 {
        self.log_partition.exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GibbsState {
    Quantum(QuantumGibbs),
    Classical(ClassicalGibbs),
}

impl GibbsState {
    pub fn beta(&self) -> f64 {
        match self {
            GibbsState::Quantum(g) => g.beta,
            GibbsState::Classical(g) => g.beta,
        }
    }

    pub fn log_partition(&self) -> f64 {
        match self {
            GibbsState::Quantum(g) => g.log_partition,
            GibbsState::Classical(g) => g.log_partition,
        }
    }

    /// The state as a density matrix (diagonal for classical states).
    pub fn density(&self) -> Result<DensityMatrix> {
        match self {
            GibbsState::Quantum(g) => Ok(g.rho.clone()),
            GibbsState::Classical(g) => g.distribution.to_density(),
        }
    }
}

/// Classical tables are enumerated; anything with an operator term is
/// diagonalized.
pub fn build_gibbs(h: &LatticeHamiltonian, beta: f64) -> Result<GibbsState> {
    if h.is_classical() {
        ClassicalGibbs::build(h, beta).map(GibbsState::Classical)
    } else {
        QuantumGibbs::build(h, beta).map(GibbsState::Quantum)
    }
}

/// `F(ρ) = tr[Hρ] − S(ρ)/β`.
pub fn free_energy(rho: &DensityMatrix, h: &LatticeHamiltonian, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if beta == 0.0 {
        return Err(Error::ZeroBeta);
    }
    let space = h.space()?;
    if rho.space() != &space {
        return Err(Error::DimensionMismatch(format!(
            "state on {:?}, Hamiltonian on {:?}",
            rho.space().labels(),
            space.labels()
        )));
    }
    let energy = rho.expectation(&h.matrix()?)?;
    Ok(energy - qstate::von_neumann_entropy(rho)? / beta)
}

/// Free energies of the Gibbs state and two competitors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeEnergyComparison {
    pub gibbs: f64,
    pub marginal_product: f64,
    pub maximally_mixed: f64,
    /// `−ln Z / β`.
    pub from_partition: f64,
}

impl FreeEnergyComparison {
    pub fn gibbs_is_minimal(&self, tol: f64) -> bool {
        self.gibbs <= self.marginal_product + tol && self.gibbs <= self.maximally_mixed + tol
    }
}

/// Evaluates the variational premise `F(ρ_AB) ≤ F(ρ_A ⊗ ρ_B)` for a split.
pub fn free_energy_comparison(g: &QuantumGibbs, region_a: &[usize]) -> Result<FreeEnergyComparison> {
    let h = &g.hamiltonian;
    let part = Bipartition::against_complement(g.rho.space(), region_a.to_vec())?;
    let product = g
        .rho
        .marginal(part.region_a())?
        .tensor(&g.rho.marginal(part.region_b())?)?
        .reordered(g.rho.space())?;
    let mixed = DensityMatrix::maximally_mixed(h.space()?);
    Ok(FreeEnergyComparison {
        gibbs: free_energy(&g.rho, h, g.beta)?,
        marginal_product: free_energy(&product, h, g.beta)?,
        maximally_mixed: free_energy(&mixed, h, g.beta)?,
        from_partition: -g.log_partition / g.beta,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumAreaReport {
    pub beta: f64,
    pub boundary_size: usize,
    pub i_ab: f64,
    /// `β tr[H_∂(ρ_A ⊗ ρ_B − ρ_AB)]`.
    pub rhs: f64,
    /// `2β ||h|| |∂A|` with `||h||` the largest crossing-term norm.
    pub simple_bound: f64,
    pub max_term_norm: f64,
    /// Every crossing term acts on two sites.
    pub two_site: bool,
    pub complementary: bool,
    /// `I(A:B) > |∂A| ln d`, impossible for classical states.
    pub exceeds_classical_cap: bool,
}

impl QuantumAreaReport {
    pub fn free_energy_slack(&self) -> f64 {
        self.rhs - self.i_ab
    }

    pub fn simple_slack(&self) -> f64 {
        self.simple_bound - self.rhs
    }

    /// The asserted inequalities: the free-energy bound for complementary
    /// splits, and the norm bound when all crossing terms are two-site.
    pub fn holds(&self, tol: f64) -> bool {
        let first = !self.complementary || self.free_energy_slack() >= -tol;
        let second = !(self.complementary && self.two_site) || self.simple_slack() >= -tol;
        first && second
    }
}

/// Mutual information across a split against the boundary free-energy bound.
///
/// For a split that does not cover the lattice the state is first reduced to
/// `A ∪ B` and only crossing terms supported there enter the right-hand side.
pub fn quantum_thermal_area_check(g: &QuantumGibbs, split: &BoundarySplit) -> Result<QuantumAreaReport> {
    let rho = &g.rho;
    let part = Bipartition::new(rho.space(), split.region_a.clone(), split.region_b.clone())?;
    let rho_a = rho.marginal(&split.region_a)?;
    let rho_b = rho.marginal(&split.region_b)?;
    let parts = if split.complementary {
        info::MutualInformation {
            s_a: qstate::von_neumann_entropy(&rho_a)?,
            s_b: qstate::von_neumann_entropy(&rho_b)?,
            s_ab: g.entropy,
        }
    } else {
        info::mutual_information_parts(rho, &part)?
    };
    let union = part.union();
    let crossing: Vec<&LocalTerm> = split.h_boundary.iter().filter(|t| t.within(&union)).collect();

    let mut gap = 0.0;
    let mut max_norm: f64 = 0.0;
    for term in &crossing {
        gap += product_minus_joint(rho, &rho_a, &rho_b, split, term)?;
        max_norm = max_norm.max(linalg::operator_norm(&term.local_matrix()));
    }
    let boundary_size = split.boundary_a.len();
    Ok(QuantumAreaReport {
        beta: g.beta,
        boundary_size,
        i_ab: parts.value(),
        rhs: g.beta * gap,
        simple_bound: 2.0 * g.beta * max_norm * boundary_size as f64,
        max_term_norm: max_norm,
        two_site: crossing.iter().all(|t| t.support.len() == 2),
        complementary: split.complementary,
        exceeds_classical_cap: parts.value()
            > boundary_size as f64 * (rho.space().local_dim() as f64).ln() + 1e-9,
    })
}

/// `tr[h (ρ_A ⊗ ρ_B)] − tr[h ρ_AB]` evaluated on the support of `h`.
fn product_minus_joint(
    rho: &DensityMatrix,
    rho_a: &DensityMatrix,
    rho_b: &DensityMatrix,
    split: &BoundarySplit,
    term: &LocalTerm,
) -> Result<f64> {
    let mut sorted = term.support.clone();
    sorted.sort_unstable();
    let in_a: Vec<usize> = sorted.iter().copied().filter(|s| split.region_a.contains(s)).collect();
    let in_b: Vec<usize> = sorted.iter().copied().filter(|s| split.region_b.contains(s)).collect();
    let joint = rho.marginal(&sorted)?;
    let product = rho_a.marginal(&in_a)?.tensor(&rho_b.marginal(&in_b)?)?.reordered(joint.space())?;
    let positions: Vec<usize> = term.support.iter().map(|s| sorted.iter().position(|t| t == s).unwrap()).collect();
    let d = rho.space().local_dim();
    let op = linalg::embed_operator(&term.local_matrix(), &positions, d, sorted.len());
    Ok(product.expectation(&op)? - joint.expectation(&op)?)
}

/// Reconstruction error `max |ρ − exp(−βH)/Z|` against a Taylor-series
/// exponential, for tests and diagnostics.
pub fn series_reconstruction_error(g: &QuantumGibbs) -> Result<f64> {
    let h = g.hamiltonian.matrix()?;
    let dim = h.nrows();
    // Scale and square: exp(A) = exp(A / 2^k)^(2^k).
    let a = &h * r(-g.beta);
    let norm = linalg::operator_norm(&a);
    let k = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
    let small = &a * r(0.5f64.powi(k));
    let mut term = linalg::identity(dim);
    let mut sum = linalg::identity(dim);
    for n in 1..30 {
        term = &term * &small * r(1.0 / n as f64);
        sum += &term;
    }
    for _ in 0..k {
        sum = &sum * &sum;
    }
    let z = linalg::trace(&sum).re;
    let expected = sum / r(z);
    Ok(linalg::max_abs(&(g.rho.matrix() - expected)))
}
