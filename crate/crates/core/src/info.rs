//! Mutual information and the inequalities built from it.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::qstate::{von_neumann_entropy, DensityMatrix, Observable, SiteSpace};

/// Tolerance used when asserting the inequality checks.
pub const CHECK_TOL: f64 = 1e-9;

/// Two disjoint regions of a [`SiteSpace`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    space: SiteSpace,
    region_a: Vec<usize>,
    region_b: Vec<usize>,
}

impl Bipartition {
    pub fn new(space: &SiteSpace, region_a: Vec<usize>, region_b: Vec<usize>) -> Result<Self> {
        if region_a.is_empty() || region_b.is_empty() {
            return Err(Error::EmptyRegion);
        }
        for &label in region_a.iter().chain(&region_b) {
            space.position(label)?;
        }
        if let Some(&shared) = region_a.iter().find(|l| region_b.contains(l)) {
            return Err(Error::OverlappingRegions(shared));
        }
        Ok(Bipartition { space: space.clone(), region_a, region_b })
    }

    /// `A` against the rest of the space.
    pub fn against_complement(space: &SiteSpace, region_a: Vec<usize>) -> Result<Self> {
        let rest = space.complement(&region_a);
        Self::new(space, region_a, rest)
    }

    pub fn region_a(&self) -> &[usize] {
        &self.region_a
    }

    pub fn region_b(&self) -> &[usize] {
        &self.region_b
    }

    pub fn union(&self) -> Vec<usize> {
        let mut all = self.region_a.clone();
        all.extend_from_slice(&self.region_b);
        all
    }
}

/// Entropies entering `I(A:B) = S_A + S_B - S_AB`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutualInformation {
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
}

impl MutualInformation {
    pub fn value(&self) -> f64 {
        self.s_a + self.s_b - self.s_ab
    }
}

pub fn mutual_information_parts(rho: &DensityMatrix, part: &Bipartition) -> Result<MutualInformation> {
    if part.space.local_dim() != rho.space().local_dim() {
        return Err(Error::DimensionMismatch("bipartition built for another space".into()));
    }
    let joint = rho.marginal(&part.union())?;
    Ok(MutualInformation {
        s_a: von_neumann_entropy(&joint.partial_trace(&part.region_a)?)?,
        s_b: von_neumann_entropy(&joint.partial_trace(&part.region_b)?)?,
        s_ab: von_neumann_entropy(&joint)?,
    })
}

/// `I(A:B)` in nats; `rho` is first marginalized to `A ∪ B`.
pub fn mutual_information(rho: &DensityMatrix, part: &Bipartition) -> Result<f64> {
    Ok(mutual_information_parts(rho, part)?.value())
}

/// `S(ρ|σ)`; infinite when `ρ` has weight outside the support of `σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelativeEntropy {
    Finite(f64),
    Infinite,
}

impl RelativeEntropy {
    pub fn finite(self) -> Option<f64> {
        match self {
            RelativeEntropy::Finite(v) => Some(v),
            RelativeEntropy::Infinite => None,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

/// `S(ρ|σ) = tr[ρ ln ρ] - tr[ρ ln σ]`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<RelativeEntropy> {
    if rho.space() != sigma.space() {
        return Err(Error::DimensionMismatch("relative entropy of states on different spaces".into()));
    }
    let (mu, w) = linalg::eigh(sigma.matrix());
    let max = mu.last().copied().unwrap_or(0.0);
    let kernel_tol = rho.tolerance().max(1e-10);
    let mut cross = 0.0;
    for (j, &m) in mu.iter().enumerate() {
        let v = w.column(j);
        let weight = (v.adjoint() * rho.matrix() * v)[(0, 0)].re;
        if m <= crate::qstate::ZERO_CLIP_RELATIVE * max || m <= 0.0 {
            if weight > kernel_tol {
                return Ok(RelativeEntropy::Infinite);
            }
            continue;
        }
        cross += weight * m.ln();
    }
    let value = -von_neumann_entropy(rho)? - cross;
    Ok(RelativeEntropy::Finite(value.max(0.0)))
}

fn ensure_disjoint(a: &SiteSpace, b: &SiteSpace) -> Result<()> {
    if let Some(&shared) = a.labels().iter().find(|l| b.contains(**l)) {
        return Err(Error::OverlappingRegions(shared));
    }
    Ok(())
}

/// `⟨M_A ⊗ M_B⟩ - ⟨M_A⟩⟨M_B⟩`.
pub fn connected_correlator(rho: &DensityMatrix, ma: &Observable, mb: &Observable) -> Result<f64> {
    ensure_disjoint(ma.space(), mb.space())?;
    let mut labels = ma.space().labels().to_vec();
    labels.extend_from_slice(mb.space().labels());
    let joint = rho.marginal(&labels)?;
    let a = ma.embed(joint.space())?;
    let b = mb.embed(joint.space())?;
    let ab: CMat = &a * &b;
    Ok(joint.expectation(&ab)? - joint.expectation(&a)? * joint.expectation(&b)?)
}

/// A machine-readable inequality check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check_name: String,
    pub inputs_digest: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

/// SHA-256 over the little-endian bytes of a sequence of reals.
pub fn digest_values(values: impl IntoIterator<Item = f64>) -> String {
    let mut hasher = Sha256::new();
    for v in values {
        hasher.update(v.to_le_bytes());
    }
    hex::encode(hasher.finalize())
}

/// Digest of a state together with any operators it was checked against.
pub fn digest_matrices<'a>(matrices: impl IntoIterator<Item = &'a CMat>) -> String {
    digest_values(matrices.into_iter().flat_map(|m| {
        std::iter::once(m.nrows() as f64).chain(m.iter().flat_map(|z| [z.re, z.im]))
    }))
}

/// Lower bound `I(A:B) ≥ C(M_A, M_B)² / (2 ||M_A||² ||M_B||²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorBound {
    pub mutual_information: f64,
    pub correlator: f64,
    pub norm_a: f64,
    pub norm_b: f64,
    pub rhs: f64,
    /// `lhs - rhs`; nonnegative when the bound holds.
    pub slack: f64,
}

impl CorrelatorBound {
    pub fn holds(&self, tol: f64) -> bool {
        self.slack >= -tol
    }

    pub fn record(&self, inputs_digest: String) -> CheckRecord {
        CheckRecord {
            check_name: "correlator-bound".into(),
            inputs_digest,
            lhs: self.mutual_information,
            rhs: self.rhs,
            slack: self.slack,
            pass: self.holds(CHECK_TOL),
        }
    }
}

pub fn check_correlator_bound(
    rho: &DensityMatrix,
    ma: &Observable,
    mb: &Observable,
) -> Result<CorrelatorBound> {
    let correlator = connected_correlator(rho, ma, mb)?;
    let part = Bipartition::new(rho.space(), ma.space().labels().to_vec(), mb.space().labels().to_vec())?;
    let mutual_information = mutual_information(rho, &part)?;
    let (norm_a, norm_b) = (ma.operator_norm(), mb.operator_norm());
    let denominator = 2.0 * norm_a * norm_a * norm_b * norm_b;
    let rhs = if denominator > 0.0 { correlator * correlator / denominator } else { 0.0 };
    Ok(CorrelatorBound {
        mutual_information,
        correlator,
        norm_a,
        norm_b,
        rhs,
        slack: mutual_information - rhs,
    })
}

/// Inner region `A`, separating shell `C`, outer region `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShellGeometry {
    pub inner: Vec<usize>,
    pub shell: Vec<usize>,
    pub outer: Vec<usize>,
    /// Outer radius of the shell when built from a chain.
    pub outer_radius: Option<usize>,
}

impl ShellGeometry {
    pub fn new(inner: Vec<usize>, shell: Vec<usize>, outer: Vec<usize>) -> Result<Self> {
        if inner.is_empty() {
            return Err(Error::MalformedGeometry("inner region is empty".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for &label in inner.iter().chain(&shell).chain(&outer) {
            if !seen.insert(label) {
                return Err(Error::MalformedGeometry(format!("site {label} assigned twice")));
            }
        }
        Ok(ShellGeometry { inner, shell, outer, outer_radius: None })
    }

    /// Chain `0..n`: `A = [start, start + len)`, `C` the `thickness` sites on
    /// either side of `A` (clipped at the ends), `B` everything else.
    pub fn chain(n: usize, start: usize, len: usize, thickness: usize) -> Result<Self> {
        if len == 0 || start + len > n {
            return Err(Error::MalformedGeometry(format!(
                "block [{start}, {}) does not fit a chain of {n} sites",
                start + len
            )));
        }
        let lo = start.saturating_sub(thickness);
        let hi = (start + len + thickness).min(n);
        let inner: Vec<usize> = (start..start + len).collect();
        let shell: Vec<usize> = (lo..start).chain(start + len..hi).collect();
        let outer: Vec<usize> = (0..lo).chain(hi..n).collect();
        let mut geometry = Self::new(inner, shell, outer)?;
        geometry.outer_radius = Some(len.div_ceil(2) + thickness);
        Ok(geometry)
    }

    fn covers(&self, space: &SiteSpace) -> Result<()> {
        let total = self.inner.len() + self.shell.len() + self.outer.len();
        for &label in self.inner.iter().chain(&self.shell).chain(&self.outer) {
            space.position(label)?;
        }
        if total != space.site_count() {
            return Err(Error::MalformedGeometry(
                "shell regions must partition the state's sites".into(),
            ));
        }
        Ok(())
    }
}

/// `I(A:BC) ≤ I(A:B) + 2 S_C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellChain {
    pub i_a_bc: f64,
    pub i_a_b: f64,
    pub s_c: f64,
    /// `I(A:B) + 2 S_C - I(A:BC)`.
    pub slack: f64,
}

impl ShellChain {
    fn from_entropies(e: impl Fn(&[usize]) -> Result<f64>, g: &ShellGeometry) -> Result<Self> {
        let union = |x: &[usize], y: &[usize]| -> Vec<usize> { x.iter().chain(y).copied().collect() };
        let s_a = e(&g.inner)?;
        let s_b = e(&g.outer)?;
        let s_c = e(&g.shell)?;
        let s_bc = e(&union(&g.outer, &g.shell))?;
        let s_ab = e(&union(&g.inner, &g.outer))?;
        let s_abc = e(&union(&union(&g.inner, &g.outer), &g.shell))?;
        let i_a_bc = s_a + s_bc - s_abc;
        let i_a_b = s_a + s_b - s_ab;
        Ok(ShellChain { i_a_bc, i_a_b, s_c, slack: i_a_b + 2.0 * s_c - i_a_bc })
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.slack >= -tol
    }

    pub fn record(&self, inputs_digest: String) -> CheckRecord {
        CheckRecord {
            check_name: "shell-chain".into(),
            inputs_digest,
            lhs: self.i_a_bc,
            rhs: self.i_a_b + 2.0 * self.s_c,
            slack: self.slack,
            pass: self.holds(CHECK_TOL),
        }
    }
}

fn subset_entropy(rho: &DensityMatrix, labels: &[usize]) -> Result<f64> {
    if labels.is_empty() {
        return Ok(0.0);
    }
    von_neumann_entropy(&rho.marginal(labels)?)
}

pub fn check_shell_chain(rho: &DensityMatrix, geometry: &ShellGeometry) -> Result<ShellChain> {
    geometry.covers(rho.space())?;
    ShellChain::from_entropies(|labels| subset_entropy(rho, labels), geometry)
}

/// Entropies of every subset of a small state, computed once.
#[derive(Debug, Clone)]
pub struct SubsetEntropies {
    space: SiteSpace,
    by_mask: HashMap<u64, f64>,
}

impl SubsetEntropies {
    pub const MAX_SITES: usize = 16;

    pub fn new(rho: &DensityMatrix) -> Result<Self> {
        let space = rho.space().clone();
        let n = space.site_count();
        if n > Self::MAX_SITES {
            return Err(Error::DimensionCap { dim: n as u128, cap: Self::MAX_SITES as u128 });
        }
        let mut by_mask = HashMap::with_capacity(1 << n);
        by_mask.insert(0, 0.0);
        for mask in 1u64..(1u64 << n) {
            let labels: Vec<usize> =
                (0..n).filter(|p| mask & (1 << p) != 0).map(|p| space.labels()[p]).collect();
            by_mask.insert(mask, subset_entropy(rho, &labels)?);
        }
        Ok(SubsetEntropies { space, by_mask })
    }

    pub fn space(&self) -> &SiteSpace {
        &self.space
    }

    pub fn entropy(&self, labels: &[usize]) -> Result<f64> {
        let mut mask = 0u64;
        for &label in labels {
            mask |= 1 << self.space.position(label)?;
        }
        Ok(self.by_mask[&mask])
    }

    pub fn mutual_information(&self, a: &[usize], b: &[usize]) -> Result<f64> {
        let ab: Vec<usize> = a.iter().chain(b).copied().collect();
        Ok(self.entropy(a)? + self.entropy(b)? - self.entropy(&ab)?)
    }

    pub fn shell_chain(&self, geometry: &ShellGeometry) -> Result<ShellChain> {
        geometry.covers(&self.space)?;
        ShellChain::from_entropies(|labels| self.entropy(labels), geometry)
    }
}

/// Every assignment of the sites to (A, C, B) with `A` nonempty.
pub fn all_shell_geometries(labels: &[usize]) -> Vec<ShellGeometry> {
    let n = labels.len();
    let total = 3usize.pow(n as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let digits = linalg::digits(code, 3, n);
        let pick = |k: usize| -> Vec<usize> {
            labels.iter().zip(&digits).filter(|(_, &d)| d == k).map(|(&l, _)| l).collect()
        };
        let inner = pick(0);
        if inner.is_empty() {
            continue;
        }
        out.push(ShellGeometry { inner, shell: pick(1), outer: pick(2), outer_radius: None });
    }
    out
}

/// Block entropies `S(L)` of contiguous arcs on a ring.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyProfile {
    /// `S(L)` for `L = 0..=N`, averaged over the `N` block positions.
    pub entropies: Vec<f64>,
    /// Largest spread of `S(L)` across positions.
    pub position_spread: f64,
    pub translation_invariant: bool,
}

impl EntropyProfile {
    pub const INVARIANCE_TOL: f64 = 1e-8;

    pub fn ring_size(&self) -> usize {
        self.entropies.len() - 1
    }

    /// `S(L) - (S(L-1) + S(L+1))/2` for `L = 1..N-1`.
    pub fn concavity_slacks(&self) -> Vec<f64> {
        let s = &self.entropies;
        (1..s.len() - 1).map(|l| s[l] - 0.5 * (s[l - 1] + s[l + 1])).collect()
    }

    pub fn min_concavity_slack(&self) -> f64 {
        self.concavity_slacks().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn is_concave(&self, tol: f64) -> bool {
        self.min_concavity_slack() >= -tol
    }
}

/// Entropy of every contiguous block of a ring whose sites are the state's
/// labels in ring order.
pub fn block_entropy_profile(rho: &DensityMatrix) -> Result<EntropyProfile> {
    let labels = rho.space().labels();
    let n = labels.len();
    let mut entropies = vec![0.0; n + 1];
    let mut spread = 0.0_f64;
    for len in 1..n {
        let mut values = Vec::with_capacity(n);
        for start in 0..n {
            let block: Vec<usize> = (0..len).map(|k| labels[(start + k) % n]).collect();
            values.push(von_neumann_entropy(&rho.partial_trace(&block)?)?);
        }
        let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
        spread = spread.max(hi - lo);
        entropies[len] = values.iter().sum::<f64>() / n as f64;
    }
    entropies[n] = von_neumann_entropy(rho)?;
    Ok(EntropyProfile {
        entropies,
        position_spread: spread,
        translation_invariant: spread <= EntropyProfile::INVARIANCE_TOL,
    })
}

/// `I(L)` between a block and the rest of a ring, and its increments.
#[derive(Debug, Clone, PartialEq)]
pub struct RingIncrements {
    /// `I(L) = S(L) + S(N-L) - S(N)` for `L = 0..=N`.
    pub mutual_information: Vec<f64>,
    /// `I(L) - I(L-1) = [S(L)-S(L-1)] - [S(N-L+1)-S(N-L)]` for `L = 1..=N`.
    pub increments: Vec<f64>,
}

impl RingIncrements {
    /// Smallest increment over `L ≤ N/2`, where `I(L)` must be non-decreasing.
    pub fn min_increment_below_half(&self) -> f64 {
        let n = self.mutual_information.len() - 1;
        self.increments[..n / 2].iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_nondecreasing_below_half(&self, tol: f64) -> bool {
        self.min_increment_below_half() >= -tol
    }
}

pub fn ring_mi_increments(profile: &[f64]) -> Result<RingIncrements> {
    if profile.len() < 2 {
        return Err(Error::EmptyCurve);
    }
    let n = profile.len() - 1;
    let mutual_information =
        (0..=n).map(|l| profile[l] + profile[n - l] - profile[n]).collect::<Vec<_>>();
    let increments = (1..=n)
        .map(|l| (profile[l] - profile[l - 1]) - (profile[n - l + 1] - profile[n - l]))
        .collect();
    Ok(RingIncrements { mutual_information, increments })
}

/// Mutual-information correlation length on a sampled grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum XiM {
    Finite(usize),
    Infinite,
}

impl XiM {
    pub fn is_finite(self) -> bool {
        matches!(self, XiM::Finite(_))
    }

    pub fn as_f64(self) -> f64 {
        match self {
            XiM::Finite(l) => l as f64,
            XiM::Infinite => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct XiEstimate {
    pub xi_m: XiM,
    /// Sampled shell thicknesses.
    pub grid: Vec<usize>,
    /// `I` at the smallest sampled thickness.
    pub reference: f64,
    /// False when the samples increase somewhere (first crossing is still used).
    pub monotone: bool,
}

/// Smallest sampled `L` with `I_L ≤ I_0 / 2`, where `I_0` is the value at the
/// smallest sampled thickness.
pub fn xi_m_estimate(curve: &[(usize, f64)]) -> Result<XiEstimate> {
    if curve.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let mut samples = curve.to_vec();
    samples.sort_by_key(|&(l, _)| l);
    let (l0, reference) = samples[0];
    let monotone = samples.windows(2).all(|w| w[1].1 <= w[0].1 + CHECK_TOL);
    let xi_m = if reference <= 0.0 {
        XiM::Finite(l0)
    } else {
        samples[1..]
            .iter()
            .find(|&&(_, value)| value <= reference / 2.0)
            .map_or(XiM::Infinite, |&(l, _)| XiM::Finite(l))
    };
    Ok(XiEstimate { xi_m, grid: samples.iter().map(|&(l, _)| l).collect(), reference, monotone })
}

/// `ξ_M` required to work for every sampled radius: the largest per-radius
/// estimate, infinite if any radius has no crossing.
#[derive(Debug, Clone, PartialEq)]
pub struct XiOverRadii {
    pub xi_m: XiM,
    pub per_radius: Vec<(usize, XiM)>,
    pub max_radius: usize,
}

pub fn xi_m_for_all_radii(curves: &[(usize, Vec<(usize, f64)>)]) -> Result<XiOverRadii> {
    if curves.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let mut per_radius = Vec::with_capacity(curves.len());
    for (radius, curve) in curves {
        per_radius.push((*radius, xi_m_estimate(curve)?.xi_m));
    }
    let xi_m = per_radius.iter().fold(XiM::Finite(0), |acc, &(_, x)| match (acc, x) {
        (XiM::Finite(a), XiM::Finite(b)) => XiM::Finite(a.max(b)),
        _ => XiM::Infinite,
    });
    let max_radius = per_radius.iter().map(|&(r, _)| r).max().unwrap_or(0);
    Ok(XiOverRadii { xi_m, per_radius, max_radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{paulis, r, CVec};
    use crate::qstate::entropy_of_spectrum;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qubits(n: usize) -> SiteSpace {
        SiteSpace::chain(2, n).unwrap()
    }

    fn singlet() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(qubits(2), &CVec::from_vec(vec![r(0.0), r(s), r(-s), r(0.0)])).unwrap()
    }

    fn ghz(n: usize) -> DensityMatrix {
        let dim = 1 << n;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = CVec::zeros(dim);
        psi[0] = r(s);
        psi[dim - 1] = r(s);
        DensityMatrix::pure(qubits(n), &psi).unwrap()
    }

    fn z_on(site: usize) -> Observable {
        Observable::new(SiteSpace::new(2, vec![site]).unwrap(), paulis::z()).unwrap()
    }

    /// Entropy through singular values, independent of the Hermitian eigensolver.
    fn svd_entropy(m: &CMat) -> f64 {
        entropy_of_spectrum(&linalg::singular_values(m)).unwrap()
    }

    #[test]
    fn bipartition_validation() {
        let space = qubits(3);
        assert!(matches!(Bipartition::new(&space, vec![0, 1], vec![1]), Err(Error::OverlappingRegions(1))));
        assert!(matches!(Bipartition::new(&space, vec![0], vec![7]), Err(Error::UnknownSite(7))));
        assert!(matches!(Bipartition::new(&space, vec![], vec![1]), Err(Error::EmptyRegion)));
    }

    #[test]
    fn product_state_has_zero_information() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random::density_matrix(&mut rng, SiteSpace::new(2, vec![0]).unwrap(), None);
        let b = random::density_matrix(&mut rng, SiteSpace::new(2, vec![1]).unwrap(), None);
        let ab = a.tensor(&b).unwrap();
        let part = Bipartition::new(ab.space(), vec![0], vec![1]).unwrap();
        assert!(mutual_information(&ab, &part).unwrap().abs() < 1e-12);
    }

    #[test]
    fn singlet_information_is_twice_the_entropy() {
        let part = Bipartition::new(&qubits(2), vec![0], vec![1]).unwrap();
        let value = mutual_information(&singlet(), &part).unwrap();
        assert!((value - 2.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_matches_entropy_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let rho = random::density_matrix(&mut rng, qubits(4), None);
            let part = Bipartition::against_complement(rho.space(), vec![1, 2]).unwrap();
            let oracle = svd_entropy(rho.partial_trace(&[1, 2]).unwrap().matrix())
                + svd_entropy(rho.partial_trace(&[0, 3]).unwrap().matrix())
                - svd_entropy(rho.matrix());
            assert!((mutual_information(&rho, &part).unwrap() - oracle).abs() < 1e-10);
        }
    }

    #[test]
    fn information_properties_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in [4, 5] {
            for _ in 0..10 {
                let rho = random::density_matrix(&mut rng, qubits(n), Some(3));
                let table = SubsetEntropies::new(&rho).unwrap();
                let i_ab = table.mutual_information(&[0], &[1]).unwrap();
                let i_ba = table.mutual_information(&[1], &[0]).unwrap();
                assert!(i_ab >= -1e-10);
                assert!((i_ab - i_ba).abs() < 1e-12);
                let i_abc = table.mutual_information(&[0], &[1, 2]).unwrap();
                assert!(i_abc >= i_ab - 1e-10, "discarding increased information");
                let s_a = table.entropy(&[0]).unwrap();
                let s_b = table.entropy(&[1]).unwrap();
                assert!(i_ab <= 2.0 * s_a.min(s_b) + 1e-10);
                // Subadditivity and Araki-Lieb.
                let s_ab = table.entropy(&[0, 1]).unwrap();
                assert!(s_ab <= s_a + s_b + 1e-10);
                assert!((s_a - s_b).abs() <= s_ab + 1e-10);
            }
        }
    }

    #[test]
    fn relative_entropy_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let rho = random::density_matrix(&mut rng, qubits(3), None);
            assert!(relative_entropy(&rho, &rho).unwrap().as_f64().abs() < 1e-10);
            let a = rho.partial_trace(&[0]).unwrap();
            let bc = rho.partial_trace(&[1, 2]).unwrap();
            let product = a.tensor(&bc).unwrap();
            let s = relative_entropy(&rho, &product).unwrap().as_f64();
            let part = Bipartition::new(rho.space(), vec![0], vec![1, 2]).unwrap();
            assert!((s - mutual_information(&rho, &part).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn relative_entropy_support_violation_is_infinite() {
        let up = DensityMatrix::pure(qubits(1), &CVec::from_vec(vec![r(1.0), r(0.0)])).unwrap();
        let mixed = DensityMatrix::maximally_mixed(qubits(1));
        assert_eq!(relative_entropy(&mixed, &up).unwrap(), RelativeEntropy::Infinite);
        let finite = relative_entropy(&up, &mixed).unwrap().as_f64();
        assert!((finite - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn pinsker_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..1000 {
            let a = random::density_matrix(&mut rng, qubits(2), None);
            let b = random::density_matrix(&mut rng, qubits(2), None);
            let s = relative_entropy(&a, &b).unwrap().as_f64();
            let t = crate::qstate::trace_norm_distance(&a, &b).unwrap();
            assert!(s >= 0.5 * t * t - 1e-12);
        }
    }

    #[test]
    fn correlator_cases() {
        let rho = singlet();
        let c = connected_correlator(&rho, &z_on(0), &z_on(1)).unwrap();
        assert!((c + 1.0).abs() < 1e-12);
        assert!(matches!(
            connected_correlator(&rho, &z_on(0), &z_on(0)),
            Err(Error::OverlappingRegions(0))
        ));

        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = random::density_matrix(&mut rng, SiteSpace::new(2, vec![0]).unwrap(), None);
        let b = random::density_matrix(&mut rng, SiteSpace::new(2, vec![1]).unwrap(), None);
        let product = a.tensor(&b).unwrap();
        for _ in 0..5 {
            let ma = random::observable(&mut rng, SiteSpace::new(2, vec![0]).unwrap());
            let mb = random::observable(&mut rng, SiteSpace::new(2, vec![1]).unwrap());
            assert!(connected_correlator(&product, &ma, &mb).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn correlator_matches_trace_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..10 {
            let rho = random::density_matrix(&mut rng, qubits(3), None);
            let ma = random::observable(&mut rng, SiteSpace::new(2, vec![2]).unwrap());
            let mb = random::observable(&mut rng, SiteSpace::new(2, vec![0, 1]).unwrap());
            // Oracle: explicit Kronecker products in site order 0,1,2.
            let full_a = linalg::kron(&linalg::identity(4), ma.matrix());
            let full_b = linalg::kron(mb.matrix(), &linalg::identity(2));
            let ev = |op: &CMat| (rho.matrix() * op).trace().re;
            let oracle = ev(&(&full_a * &full_b)) - ev(&full_a) * ev(&full_b);
            let value = connected_correlator(&rho, &ma, &mb).unwrap();
            assert!((value - oracle).abs() < 1e-12);
            let bound = 2.0 * ma.operator_norm() * mb.operator_norm();
            assert!(value.abs() <= bound + 1e-12);
        }
    }

    #[test]
    fn correlator_bound_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let a = random::density_matrix(&mut rng, SiteSpace::new(2, vec![0]).unwrap(), None);
        let b = random::density_matrix(&mut rng, SiteSpace::new(2, vec![1]).unwrap(), None);
        let report = check_correlator_bound(&a.tensor(&b).unwrap(), &z_on(0), &z_on(1)).unwrap();
        assert!(report.mutual_information.abs() < 1e-12 && report.rhs.abs() < 1e-12);

        let report = check_correlator_bound(&singlet(), &z_on(0), &z_on(1)).unwrap();
        assert!((report.mutual_information - 4f64.ln()).abs() < 1e-12);
        assert!((report.rhs - 0.5).abs() < 1e-12);
        assert!(report.slack > 0.0);
        let record = report.record(digest_matrices([singlet().matrix()]));
        assert!(record.pass);
        assert_eq!(record.inputs_digest.len(), 64);
    }

    #[test]
    fn shell_chain_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        // C in a product state with AB.
        let ab = random::density_matrix(&mut rng, SiteSpace::new(2, vec![0, 2]).unwrap(), None);
        let c = random::density_matrix(&mut rng, SiteSpace::new(2, vec![1]).unwrap(), None);
        let rho = ab.tensor(&c).unwrap();
        let g = ShellGeometry::new(vec![0], vec![1], vec![2]).unwrap();
        let report = check_shell_chain(&rho, &g).unwrap();
        assert!((report.i_a_bc - report.i_a_b).abs() < 1e-10);
        assert!((report.slack - 2.0 * report.s_c).abs() < 1e-10);

        // Singlet between A and C, B uncorrelated: saturation.
        let b = random::density_matrix(&mut rng, SiteSpace::new(2, vec![2]).unwrap(), None);
        let rho = singlet().tensor(&b).unwrap();
        let g = ShellGeometry::new(vec![0], vec![1], vec![2]).unwrap();
        let report = check_shell_chain(&rho, &g).unwrap();
        assert!((report.i_a_bc - 4f64.ln()).abs() < 1e-10);
        assert!(report.i_a_b.abs() < 1e-10);
        assert!(report.slack.abs() < 1e-10);

        let bad = ShellGeometry::new(vec![0], vec![], vec![1]).unwrap();
        assert!(matches!(check_shell_chain(&rho, &bad), Err(Error::MalformedGeometry(_))));
        assert!(ShellGeometry::new(vec![0], vec![0], vec![1]).is_err());
    }

    #[test]
    fn shell_chain_over_all_splits_of_small_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..4 {
            let rho = random::density_matrix(&mut rng, qubits(5), Some(2));
            let table = SubsetEntropies::new(&rho).unwrap();
            let splits = all_shell_geometries(rho.space().labels());
            assert_eq!(splits.len(), 243 - 32);
            for g in &splits {
                assert!(table.shell_chain(g).unwrap().holds(CHECK_TOL));
            }
            // Direct evaluation agrees with the table.
            let direct = check_shell_chain(&rho, &splits[17]).unwrap();
            let cached = table.shell_chain(&splits[17]).unwrap();
            assert!((direct.slack - cached.slack).abs() < 1e-12);
        }
    }

    #[test]
    fn chain_shell_geometry() {
        let g = ShellGeometry::chain(10, 4, 2, 2).unwrap();
        assert_eq!(g.inner, vec![4, 5]);
        assert_eq!(g.shell, vec![2, 3, 6, 7]);
        assert_eq!(g.outer, vec![0, 1, 8, 9]);
        let g = ShellGeometry::chain(10, 0, 3, 0).unwrap();
        assert!(g.shell.is_empty());
        assert!(ShellGeometry::chain(4, 3, 2, 0).is_err());
    }

    #[test]
    fn profiles_of_trivial_rings() {
        let n = 6;
        let up = CVec::from_fn(1 << n, |i, _| if i == 0 { r(1.0) } else { r(0.0) });
        let product = DensityMatrix::pure(qubits(n), &up).unwrap();
        let profile = block_entropy_profile(&product).unwrap();
        assert!(profile.entropies.iter().all(|s| s.abs() < 1e-12));
        let inc = ring_mi_increments(&profile.entropies).unwrap();
        assert!(inc.increments.iter().all(|v| v.abs() < 1e-12));

        let profile = block_entropy_profile(&ghz(n)).unwrap();
        assert!(profile.translation_invariant);
        assert!(profile.entropies[0].abs() < 1e-12 && profile.entropies[n].abs() < 1e-12);
        for l in 1..n {
            assert!((profile.entropies[l] - 2f64.ln()).abs() < 1e-12);
        }
        assert!(profile.is_concave(1e-9));
        let inc = ring_mi_increments(&profile.entropies).unwrap();
        for l in 1..n {
            assert!((inc.mutual_information[l] - 4f64.ln()).abs() < 1e-12);
        }
        for l in 2..n {
            assert!(inc.increments[l - 1].abs() < 1e-12);
        }
        assert!(inc.is_nondecreasing_below_half(1e-9));
    }

    #[test]
    fn non_invariant_ring_is_averaged_and_concave() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let rho = random::density_matrix(&mut rng, qubits(5), Some(4));
        let profile = block_entropy_profile(&rho).unwrap();
        assert!(!profile.translation_invariant);
        assert!(profile.is_concave(1e-9));
    }

    #[test]
    fn xi_m_cases() {
        let halving: Vec<(usize, f64)> = (0..10).map(|l| (l, 0.8 * 0.5f64.powi(l as i32))).collect();
        assert_eq!(xi_m_estimate(&halving).unwrap().xi_m, XiM::Finite(1));
        let flat: Vec<(usize, f64)> = (0..10).map(|l| (l, 0.3)).collect();
        assert_eq!(xi_m_estimate(&flat).unwrap().xi_m, XiM::Infinite);
        assert!(matches!(xi_m_estimate(&[]), Err(Error::EmptyCurve)));
        let bumpy = vec![(0, 1.0), (1, 0.7), (2, 0.8), (3, 0.4)];
        let est = xi_m_estimate(&bumpy).unwrap();
        assert!(!est.monotone);
        assert_eq!(est.xi_m, XiM::Finite(3));

        let over = xi_m_for_all_radii(&[(10, halving.clone()), (20, flat)]).unwrap();
        assert_eq!(over.xi_m, XiM::Infinite);
        assert_eq!(over.max_radius, 20);
        let over = xi_m_for_all_radii(&[(10, halving.clone()), (20, halving)]).unwrap();
        assert_eq!(over.xi_m, XiM::Finite(1));
    }
}
