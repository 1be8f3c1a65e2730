use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::{self, XiEstimate};
use crate::linalg::{self, CMat, LinearFit};
use crate::qstate;

use super::{block_state_factored, block_state_from, separated_block_state, FcsDescriptor, QuantumChannel};

/// Local purification: a single-Kraus generator whose emitted site carries the
/// original physical index (most significant) and an ancilla of dimension
/// equal to the Kraus rank. The transfer operator is unchanged.
pub fn purify_channel(fcs: &FcsDescriptor) -> Result<FcsDescriptor> {
    let minimal = fcs.generator().minimal_kraus();
    let kraus_rank = minimal.len();
    let (d, bond) = (fcs.phys_dim(), fcs.bond_dim());
    let v = CMat::from_fn(bond * d * kraus_rank, bond, |row, a| {
        let beta = row / (d * kraus_rank);
        let p = row % (d * kraus_rank);
        let (s, k) = (p / kraus_rank, p % kraus_rank);
        minimal[k][(beta * d + s, a)]
    });
    let generator = QuantumChannel::new(vec![v])?;
    FcsDescriptor::with_fixed_point(generator, d * kraus_rank, fcs.fixed_point().clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub l: usize,
    pub trace_distance: f64,
    pub mutual_information: f64,
    /// `2[Δ ln(D² − 1) + H(Δ)]` with `Δ` the purified half trace distance.
    pub bound: f64,
    pub purified_mutual_information: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationCurve {
    pub n_a: usize,
    pub n_b: usize,
    pub eta: f64,
    pub points: Vec<CurvePoint>,
}

/// `c` fitted at the smallest gap and the resulting `4cη^L` check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormBoundFit {
    pub c: f64,
    pub fit_gap: usize,
    /// `(L, trace distance, 4cη^L)` for the remaining gaps.
    pub checks: Vec<(usize, f64, f64)>,
}

impl NormBoundFit {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|&(_, td, bound)| td <= bound * (1.0 + 1e-9) + 1e-13)
    }
}

impl FactorizationCurve {
    /// Log-linear fit of the trace distance over `range` (inclusive).
    pub fn trace_distance_fit(&self, range: (usize, usize)) -> Option<LinearFit> {
        self.log_fit(range, |p| p.trace_distance)
    }

    pub fn mutual_information_fit(&self, range: (usize, usize)) -> Option<LinearFit> {
        self.log_fit(range, |p| p.mutual_information)
    }

    fn log_fit(&self, (lo, hi): (usize, usize), value: impl Fn(&CurvePoint) -> f64) -> Option<LinearFit> {
        let (xs, ys): (Vec<f64>, Vec<f64>) = self
            .points
            .iter()
            .filter(|p| p.l >= lo && p.l <= hi && value(p) > 0.0)
            .map(|p| (p.l as f64, value(p).ln()))
            .unzip();
        linalg::linear_fit(&xs, &ys)
    }

    /// `||ρ_AB − ρ_A⊗ρ_B||_1 ≤ 4cη^L`, with `c` fitted at the smallest gap.
    pub fn norm_bound(&self) -> Result<NormBoundFit> {
        let first = self.points.first().ok_or(Error::EmptyCurve)?;
        let c = if self.eta > 0.0 {
            first.trace_distance / (4.0 * self.eta.powi(first.l as i32))
        } else {
            0.0
        };
        let checks = self.points[1..]
            .iter()
            .map(|p| (p.l, p.trace_distance, 4.0 * c * self.eta.powi(p.l as i32)))
            .collect();
        Ok(NormBoundFit { c, fit_gap: first.l, checks })
    }

    /// Mutual information below the purification bound at every gap.
    pub fn below_fannes_bound(&self, tol: f64) -> bool {
        self.points.iter().all(|p| p.mutual_information <= p.bound + tol)
    }

    /// Both columns non-increasing up to `tol`.
    pub fn monotone(&self, tol: f64) -> bool {
        self.points.windows(2).all(|w| {
            w[1].trace_distance <= w[0].trace_distance + tol && w[1].mutual_information <= w[0].mutual_information + tol
        })
    }

    pub fn xi_m(&self) -> Result<XiEstimate> {
        let curve: Vec<(usize, f64)> = self.points.iter().map(|p| (p.l, p.mutual_information)).collect();
        info::xi_m_estimate(&curve)
    }
}

/// Trace distance to the product, mutual information and the
/// purification + Fannes bound for every gap in `gaps`.
pub fn factorization_curve(fcs: &FcsDescriptor, n_a: usize, n_b: usize, gaps: &[usize]) -> Result<FactorizationCurve> {
    if gaps.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let eta = fcs.transfer_spectrum()?.eta;
    let purified = purify_channel(fcs)?;
    let support_dim = (fcs.bond_dim() * fcs.bond_dim()).max(2);
    let mut sorted = gaps.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let points = sorted
        .into_iter()
        .map(|l| {
            let blocks = separated_block_state(fcs, n_a, l, n_b)?;
            let pure_blocks = separated_block_state(&purified, n_a, l, n_b)?;
            let delta = (0.5 * pure_blocks.trace_distance()?).min(1.0);
            let bound = 2.0 * qstate::fannes_bound(delta, support_dim)?;
            Ok(CurvePoint {
                l,
                trace_distance: blocks.trace_distance()?,
                mutual_information: blocks.mutual_information()?,
                bound,
                purified_mutual_information: pure_blocks.mutual_information()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FactorizationCurve { n_a, n_b, eta, points })
}

/// Connected correlator `⟨M⊗M⟩ − ⟨M⟩²` of a single-site observable at
/// separation `L` (that is, `L` sites strictly between the two).
pub fn connected_correlation(fcs: &FcsDescriptor, observable: &CMat, gap: usize) -> Result<f64> {
    let blocks = separated_block_state(fcs, 1, gap, 1)?;
    let (a, b, ab) = blocks.densities();
    let joint = ab.expectation(&linalg::kron(observable, observable))?;
    Ok(joint - a.expectation(observable)? * b.expectation(observable)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockPosition {
    /// Two cut bonds.
    Interior,
    /// One cut bond, at the open end of a half-infinite chain.
    End,
}

impl BlockPosition {
    pub fn cuts(self) -> usize {
        match self {
            BlockPosition::Interior => 2,
            BlockPosition::End => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MpsAreaReport {
    pub block_length: usize,
    pub position: BlockPosition,
    pub block_entropy: f64,
    /// `I(A:B) = 2 S(A)` for the pure chain.
    pub mutual_information: f64,
    /// `2 · cuts · ln D`.
    pub bound: f64,
}

impl MpsAreaReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.mutual_information <= self.bound + tol
    }
}

/// Area law for a block of a pure FCS against the rest of the chain. An end
/// block starts from the dominant eigenvector of `ϱ` as a pure boundary.
pub fn mps_area_check(fcs: &FcsDescriptor, n: usize, position: BlockPosition) -> Result<MpsAreaReport> {
    if !fcs.is_pure() {
        return Err(Error::MixedGenerator { kraus: fcs.generator().kraus_count() });
    }
    if n == 0 {
        return Err(Error::EmptyRegion);
    }
    let entropy = match position {
        BlockPosition::Interior => block_state_factored(fcs, n)?.entropy()?,
        BlockPosition::End => {
            let (_, vectors) = linalg::eigh(fcs.fixed_point());
            let top = vectors.column(fcs.bond_dim() - 1).into_owned();
            let boundary = &top * top.adjoint();
            block_state_from(fcs, &boundary, n)?.entropy()?
        }
    };
    Ok(MpsAreaReport {
        block_length: n,
        position,
        block_entropy: entropy,
        mutual_information: 2.0 * entropy,
        bound: 2.0 * position.cuts() as f64 * (fcs.bond_dim() as f64).ln(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaturationReport {
    /// Smallest `L₀ ≤ N/2` with `|I(L₀) − I(L₀−1)| ≤ tol`.
    pub saturation_length: Option<usize>,
    /// `(L, S(L−1) + S(L+1) − 2S(L))` for `L ∈ [L₀, N−L₀]`.
    pub residuals: Vec<(usize, f64)>,
    /// All residuals within `tol`, as required of a quantum Markov chain.
    pub markov_consistent: bool,
}

pub const SATURATION_TOLERANCE: f64 = 1e-9;

/// Detects exact saturation of the ring mutual information `I(L)` from a
/// block-entropy profile `S(0..=N)`.
pub fn saturation_detect(profile: &[f64], tol: f64) -> Result<SaturationReport> {
    let increments = info::ring_mi_increments(profile)?;
    let n = profile.len() - 1;
    let saturation_length = (1..=n / 2).find(|&l| increments.increments[l - 1].abs() <= tol);
    let residuals: Vec<(usize, f64)> = match saturation_length {
        Some(l0) => (l0.max(1)..=(n - l0).min(n - 1))
            .map(|l| (l, profile[l - 1] + profile[l + 1] - 2.0 * profile[l]))
            .collect(),
        None => Vec::new(),
    };
    let markov_consistent = saturation_length.is_some() && residuals.iter().all(|&(_, r)| r.abs() <= tol);
    Ok(SaturationReport { saturation_length, residuals, markov_consistent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fcs::{block_state, presets};
    use crate::qstate::DensityMatrix;
    use rand::SeedableRng;

    #[test]
    fn purification_traces_back_and_keeps_transfer() {
        let f = presets::aklt_mixed(0.2).unwrap();
        let p = purify_channel(&f).unwrap();
        assert_eq!(p.phys_dim(), 6);
        assert!(linalg::max_abs(&(p.transfer_matrix() - f.transfer_matrix())) < 1e-12);
        for n in 1..=2 {
            let purified = block_state(&p, n).unwrap();
            let original = block_state(&f, n).unwrap();
            let traced = trace_ancillas(&purified, 3, 2, n);
            assert!(linalg::max_abs(&(traced - original.matrix())) < 1e-10);
        }
    }

    /// Sums over the ancilla digit of each site (physical index = s·K + k).
    fn trace_ancillas(rho: &DensityMatrix, d: usize, k: usize, n: usize) -> CMat {
        let dim = d.pow(n as u32);
        let mut out = CMat::zeros(dim, dim);
        let full = (d * k).pow(n as u32);
        for row in 0..full {
            for col in 0..full {
                let rd = linalg::digits(row, d * k, n);
                let cd = linalg::digits(col, d * k, n);
                if rd.iter().zip(&cd).all(|(a, b)| a % k == b % k) {
                    let r_phys: Vec<usize> = rd.iter().map(|x| x / k).collect();
                    let c_phys: Vec<usize> = cd.iter().map(|x| x / k).collect();
                    out[(linalg::from_digits(&r_phys, d), linalg::from_digits(&c_phys, d))] += rho.matrix()[(row, col)];
                }
            }
        }
        out
    }

    #[test]
    fn pure_generator_purifies_to_itself() {
        let f = presets::aklt().unwrap();
        let p = purify_channel(&f).unwrap();
        assert_eq!(p.phys_dim(), 3);
        let a = block_state(&f, 2).unwrap();
        let b = block_state(&p, 2).unwrap();
        assert!(linalg::max_abs(&(a.matrix() - b.matrix())) < 1e-12);
    }

    #[test]
    fn purified_mutual_information_dominates() {
        let f = presets::aklt_mixed(0.2).unwrap();
        let curve = factorization_curve(&f, 2, 2, &[1, 2, 3, 4]).unwrap();
        for p in &curve.points {
            assert!(p.mutual_information <= p.purified_mutual_information + 1e-10, "{p:?}");
            assert!(p.purified_mutual_information <= p.bound + 1e-10, "{p:?}");
        }
    }

    #[test]
    fn aklt_trace_distance_decays_as_one_third() {
        let f = presets::aklt().unwrap();
        let gaps: Vec<usize> = (1..=12).collect();
        let curve = factorization_curve(&f, 2, 2, &gaps).unwrap();
        let fit = curve.trace_distance_fit((2, 12)).unwrap();
        assert!((fit.slope + 3f64.ln()).abs() < 0.05 * 3f64.ln(), "{fit:?}");
        assert!(curve.norm_bound().unwrap().holds());
        assert!(curve.monotone(1e-9));
        assert!(curve.below_fannes_bound(1e-12));
    }

    #[test]
    fn product_curve_is_flat_zero() {
        let f = presets::product().unwrap();
        let curve = factorization_curve(&f, 2, 2, &[1, 2, 3]).unwrap();
        for p in &curve.points {
            assert!(p.trace_distance < 1e-12 && p.mutual_information < 1e-12);
        }
    }

    #[test]
    fn aklt_correlator_decays_with_eta() {
        let f = presets::aklt().unwrap();
        let sz = linalg::real_diag(&[1.0, 0.0, -1.0]);
        let (xs, ys): (Vec<f64>, Vec<f64>) = (1..=10)
            .map(|l| (l as f64, connected_correlation(&f, &sz, l).unwrap().abs().ln()))
            .unzip();
        let fit = linalg::linear_fit(&xs, &ys).unwrap();
        assert!((fit.slope + 3f64.ln()).abs() < 0.1 * 3f64.ln(), "{fit:?}");
    }

    #[test]
    fn area_checks() {
        let aklt = presets::aklt().unwrap();
        let report = mps_area_check(&aklt, 4, BlockPosition::Interior).unwrap();
        assert!(report.holds(1e-9) && report.mutual_information < report.bound, "{report:?}");
        assert!(report.bound - report.mutual_information > 1e-6);
        let ghz = presets::ghz().unwrap();
        let report = mps_area_check(&ghz, 3, BlockPosition::Interior).unwrap();
        assert!((report.mutual_information - 2.0 * 2f64.ln()).abs() < 1e-12);
        assert!((report.bound - 4.0 * 2f64.ln()).abs() < 1e-12);
        let end = mps_area_check(&aklt, 3, BlockPosition::End).unwrap();
        assert!(end.holds(1e-9) && end.bound == 2.0 * 2f64.ln());
        let product = mps_area_check(&presets::product().unwrap(), 3, BlockPosition::Interior).unwrap();
        assert!(product.mutual_information.abs() < 1e-12 && product.holds(1e-12));
        let mixed = presets::aklt_mixed(0.2).unwrap();
        assert_eq!(mps_area_check(&mixed, 2, BlockPosition::Interior), Err(Error::MixedGenerator { kraus: 2 }));
        assert!(mps_area_check(&purify_channel(&mixed).unwrap(), 2, BlockPosition::Interior).unwrap().holds(1e-9));
    }

    #[test]
    fn random_channel_has_finite_xi_m() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let f = presets::random(&mut rng, 2, 2, 1).unwrap();
        let xi = f.transfer_spectrum().unwrap().xi;
        let curve = factorization_curve(&f, 2, 2, &(1..=10).collect::<Vec<_>>()).unwrap();
        let estimate = curve.xi_m().unwrap();
        assert!(estimate.xi_m.is_finite());
        assert!(estimate.xi_m.as_f64() <= 5.0 * xi, "{estimate:?} xi={xi}");
    }

    #[test]
    fn saturation_on_trivial_profiles() {
        let ln2 = 2f64.ln();
        let ghz: Vec<f64> = (0..=8).map(|l| if l == 0 || l == 8 { 0.0 } else { ln2 }).collect();
        let report = saturation_detect(&ghz, SATURATION_TOLERANCE).unwrap();
        assert_eq!(report.saturation_length, Some(2));
        assert!(report.markov_consistent);
        assert_eq!(report.residuals.len(), 5);
        let product: Vec<f64> = (0..=8).map(|l| l as f64 * 0.3).collect();
        let report = saturation_detect(&product, SATURATION_TOLERANCE).unwrap();
        assert_eq!(report.saturation_length, Some(1));
        assert!(report.residuals.iter().all(|&(_, r)| r.abs() < 1e-12));
    }
}
