use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::caps::{self, Caps};
use crate::error::{Error, Result};
use crate::linalg;
use crate::qstate::{self, DensityMatrix, SiteSpace};

use super::{BoundarySplit, LatticeHamiltonian};

/// Probability vector over configurations of labeled `d`-level sites,
/// indexed row-major with the first label most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalDistribution {
    local_dim: usize,
    labels: Vec<usize>,
    probs: Vec<f64>,
}

impl ClassicalDistribution {
    pub fn new(local_dim: usize, labels: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        let expected = caps::checked_power(local_dim, labels.len());
        if expected != probs.len() as u128 {
            return Err(Error::DimensionMismatch(format!(
                "{} probabilities for {} sites of dimension {local_dim}",
                probs.len(),
                labels.len()
            )));
        }
        qstate::validate_probabilities(&probs, qstate::DEFAULT_TOLERANCE)?;
        Ok(ClassicalDistribution { local_dim, labels, probs })
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn entropy(&self) -> f64 {
        self.probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum::<f64>().max(0.0)
    }

    /// Marginal on `keep`, returned in ascending label order.
    pub fn marginal(&self, keep: &[usize]) -> Result<ClassicalDistribution> {
        if keep.is_empty() {
            return Err(Error::EmptyRegion);
        }
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        if kept.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateSite(kept.windows(2).find(|w| w[0] == w[1]).unwrap()[0]));
        }
        let n = self.labels.len();
        let d = self.local_dim;
        let strides: Vec<usize> = kept
            .iter()
            .map(|s| {
                self.labels
                    .iter()
                    .position(|l| l == s)
                    .map(|p| d.pow((n - 1 - p) as u32))
                    .ok_or(Error::UnknownSite(*s))
            })
            .collect::<Result<_>>()?;
        let mut out = vec![0.0; d.pow(kept.len() as u32)];
        for (x, &p) in self.probs.iter().enumerate() {
            let idx = strides.iter().fold(0, |acc, &s| acc * d + (x / s) % d);
            out[idx] += p;
        }
        Ok(ClassicalDistribution { local_dim: d, labels: kept, probs: out })
    }

    pub fn marginal_entropy(&self, keep: &[usize]) -> Result<f64> {
        Ok(self.marginal(keep)?.entropy())
    }

    pub fn mutual_information(&self, a: &[usize], b: &[usize]) -> Result<f64> {
        if let Some(s) = a.iter().find(|s| b.contains(s)) {
            return Err(Error::OverlappingRegions(*s));
        }
        let ab: Vec<usize> = a.iter().chain(b).copied().collect();
        let i = self.marginal_entropy(a)? + self.marginal_entropy(b)? - self.marginal_entropy(&ab)?;
        Ok(i.max(0.0))
    }

    /// The distribution as a diagonal density matrix.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let space = SiteSpace::new(self.local_dim, self.labels.clone())?;
        DensityMatrix::diagonal(space, &self.probs)
    }
}

/// `ρ(x) = exp(-βE(x)) / Z` by exhaustive enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalGibbs {
    pub hamiltonian: LatticeHamiltonian,
    pub beta: f64,
    pub distribution: ClassicalDistribution,
    /// `ln Z`, kept separately since `Z` overflows at low temperature.
    pub log_partition: f64,
}

impl ClassicalGibbs {
    pub fn build(h: &LatticeHamiltonian, beta: f64) -> Result<Self> {
        Self::build_with_caps(h, beta, &caps::global())
    }

    pub fn build_with_caps(h: &LatticeHamiltonian, beta: f64, caps: &Caps) -> Result<Self> {
        check_beta(beta)?;
        if !h.is_classical() {
            return Err(Error::InvalidHamiltonian("enumeration needs classical energy tables".into()));
        }
        let n = h.site_count();
        let d = h.local_dim();
        caps.check_enumeration(caps::checked_power(d, n))?;
        let count = d.pow(n as u32);
        let mut energies = Vec::with_capacity(count);
        let mut config = vec![0usize; n];
        for _ in 0..count {
            energies.push(h.energy(&config)?);
            for slot in config.iter_mut().rev() {
                *slot += 1;
                if *slot < d {
                    break;
                }
                *slot = 0;
            }
        }
        let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
        let weights: Vec<f64> = energies.iter().map(|e| (-beta * (e - e_min)).exp()).collect();
        let total: f64 = weights.iter().sum();
        let probs = weights.into_iter().map(|w| w / total).collect();
        Ok(ClassicalGibbs {
            hamiltonian: h.clone(),
            beta,
            distribution: ClassicalDistribution::new(d, h.sites(), probs)?,
            log_partition: total.ln() - beta * e_min,
        })
    }

    pub fn partition_function(&self) -> f64 {
        self.log_partition.exp()
    }
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::NegativeBeta(beta));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalAreaReport {
    pub beta: f64,
    pub boundary_a: Vec<usize>,
    pub boundary_b: Vec<usize>,
    pub i_ab: f64,
    pub i_boundary: f64,
    pub h_boundary: f64,
    /// `|∂A| ln d`.
    pub bound: f64,
}

impl ClassicalAreaReport {
    pub fn equality_gap(&self) -> f64 {
        (self.i_ab - self.i_boundary).abs()
    }

    /// Equality within `tol` and both inequalities within `tol`.
    pub fn holds(&self, tol: f64) -> bool {
        self.equality_gap() <= tol && self.i_boundary <= self.h_boundary + tol && self.h_boundary <= self.bound + tol
    }
}

/// `I(A:B) = I(∂A:∂B) ≤ H(∂A) ≤ |∂A| ln d` for a classical Gibbs state and a
/// split of the whole lattice.
pub fn classical_area_check(g: &ClassicalGibbs, split: &BoundarySplit) -> Result<ClassicalAreaReport> {
    if !split.complementary {
        return Err(Error::MalformedSplit("the classical boundary law needs A and B to cover the lattice".into()));
    }
    check_markov_premise(&g.hamiltonian, split)?;
    let dist = &g.distribution;
    let i_ab = dist.mutual_information(&split.region_a, &split.region_b)?;
    let (i_boundary, h_boundary) = if split.boundary_a.is_empty() {
        (0.0, 0.0)
    } else {
        (
            dist.mutual_information(&split.boundary_a, &split.boundary_b)?,
            dist.marginal_entropy(&split.boundary_a)?,
        )
    };
    Ok(ClassicalAreaReport {
        beta: g.beta,
        boundary_a: split.boundary_a.clone(),
        boundary_b: split.boundary_b.clone(),
        i_ab,
        i_boundary,
        h_boundary,
        bound: split.boundary_a.len() as f64 * (dist.local_dim() as f64).ln(),
    })
}

/// Rejects crossing terms that reach a site of `A` with no lattice neighbor in `B`.
fn check_markov_premise(h: &LatticeHamiltonian, split: &BoundarySplit) -> Result<()> {
    let geometry = h.geometry();
    for (k, term) in split.h_boundary.iter().enumerate() {
        for &site in term.support.iter().filter(|s| split.region_a.contains(s)) {
            let exposed = geometry.neighbors(site).iter().any(|nb| split.region_b.contains(nb));
            if !exposed {
                return Err(Error::MarkovPremise { term: k, site });
            }
        }
    }
    Ok(())
}

/// `max |ρ(x_A | x_C, x_B) − ρ(x_A | x_C)|` after checking that `C`
/// separates `A` from `B` in the interaction graph.
pub fn conditional_markov_check(g: &ClassicalGibbs, a: &[usize], c: &[usize], b: &[usize]) -> Result<f64> {
    if let Some(site) = separation_breach(&g.hamiltonian, a, c, b) {
        return Err(Error::SeparationViolated(site));
    }
    conditional_markov_deviation(&g.distribution, a, c, b)
}

/// First site of `B` reachable from `A` without passing through `C`.
fn separation_breach(h: &LatticeHamiltonian, a: &[usize], c: &[usize], b: &[usize]) -> Option<usize> {
    let adj = h.interaction_neighbors();
    let mut seen = vec![false; h.site_count()];
    let mut queue: VecDeque<usize> = a.iter().copied().filter(|s| *s < seen.len()).collect();
    for &s in &queue {
        seen[s] = true;
    }
    while let Some(s) = queue.pop_front() {
        if b.contains(&s) {
            return Some(s);
        }
        for &nb in &adj[s] {
            if !seen[nb] && !c.contains(&nb) {
                seen[nb] = true;
                queue.push_back(nb);
            }
        }
    }
    None
}

/// The conditional-independence deviation without the separation premise.
pub fn conditional_markov_deviation(
    dist: &ClassicalDistribution,
    a: &[usize],
    c: &[usize],
    b: &[usize],
) -> Result<f64> {
    for (x, y) in [(a, c), (a, b), (c, b)] {
        if let Some(s) = x.iter().find(|s| y.contains(s)) {
            return Err(Error::OverlappingRegions(*s));
        }
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let d = dist.local_dim();
    let (na, nc, nb) = (a.len(), c.len(), b.len());
    // Joint marginal laid out as (A, C, B) digit blocks.
    let order: Vec<usize> = a.iter().chain(c).chain(b).copied().collect();
    let joint = dist.marginal(&order)?;
    let sorted = joint.labels().to_vec();
    let pos: Vec<usize> = order.iter().map(|s| sorted.iter().position(|t| t == s).unwrap()).collect();
    let (size_a, size_c, size_b) = (d.pow(na as u32), d.pow(nc as u32), d.pow(nb as u32));
    let total_sites = order.len();
    let mut acb = vec![0.0; size_a * size_c * size_b];
    for (idx, &p) in joint.probs().iter().enumerate() {
        let digits = linalg::digits(idx, d, total_sites);
        let ordered: Vec<usize> = pos.iter().map(|&k| digits[k]).collect();
        let xa = linalg::from_digits(&ordered[..na], d);
        let xc = linalg::from_digits(&ordered[na..na + nc], d);
        let xb = linalg::from_digits(&ordered[na + nc..], d);
        acb[(xa * size_c + xc) * size_b + xb] = p;
    }
    let mut p_ac = vec![0.0; size_a * size_c];
    let mut p_cb = vec![0.0; size_c * size_b];
    let mut p_c = vec![0.0; size_c];
    for xa in 0..size_a {
        for xc in 0..size_c {
            for xb in 0..size_b {
                let p = acb[(xa * size_c + xc) * size_b + xb];
                p_ac[xa * size_c + xc] += p;
                p_cb[xc * size_b + xb] += p;
                p_c[xc] += p;
            }
        }
    }
    let mut worst: f64 = 0.0;
    for xc in 0..size_c {
        if p_c[xc] <= 0.0 {
            continue;
        }
        for xb in 0..size_b {
            let q = p_cb[xc * size_b + xb];
            if q <= 0.0 {
                continue;
            }
            for xa in 0..size_a {
                let full = acb[(xa * size_c + xc) * size_b + xb] / q;
                let reduced = p_ac[xa * size_c + xc] / p_c[xc];
                worst = worst.max((full - reduced).abs());
            }
        }
    }
    Ok(worst)
}
