//! Random-singlet toy chain.
//!
//! Site `i` forms a singlet with site `j` with probability `f̃(|i − j|)`,
//! pairs being drawn independently and counted once per unordered pair. Each
//! crossing singlet contributes `2 ln 2` to `I(A:B)`, so the expected mutual
//! information is a double sum over the two regions.

use std::collections::BTreeSet;
use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::{xi_m_for_all_radii, XiM};
use crate::linalg::{linear_fit, LinearFit};

/// Minimum number of grid points for the regressions.
pub const MIN_GRID_POINTS: usize = 8;

/// Relative spread of `I_0(R)` below which it counts as constant.
pub const PLATEAU_TOLERANCE: f64 = 0.01;

/// Mutual information of one singlet, in nats.
pub const SINGLET_MI: f64 = 2.0 * LN_2;

/// Unnormalized pair-length profile `f(x)`, `x ≥ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Profile {
    /// `e^{−x/ξ}`.
    Exponential { xi: f64 },
    /// `1 / (x² + a²)`.
    Lorentzian { a: f64 },
    /// `values[x − 1] = f(x)`; zero beyond the table.
    Custom { values: Vec<f64> },
}

impl Profile {
    fn validate(&self) -> Result<()> {
        let ok = match self {
            Profile::Exponential { xi } => xi.is_finite() && *xi > 0.0,
            Profile::Lorentzian { a } => a.is_finite() && *a > 0.0,
            Profile::Custom { values } => {
                values.iter().all(|v| v.is_finite() && *v >= 0.0) && values.iter().any(|&v| v > 0.0)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidProfile(format!("{self:?}")))
        }
    }

    pub fn value(&self, x: usize) -> f64 {
        if x == 0 {
            return 0.0;
        }
        let xf = x as f64;
        match self {
            Profile::Exponential { xi } => (-xf / xi).exp(),
            Profile::Lorentzian { a } => 1.0 / (xf * xf + a * a),
            Profile::Custom { values } => values.get(x - 1).copied().unwrap_or(0.0),
        }
    }

    /// `20ξ`, `50a`, or the table length.
    pub fn default_cutoff(&self) -> usize {
        match self {
            Profile::Exponential { xi } => (20.0 * xi).ceil() as usize,
            Profile::Lorentzian { a } => (50.0 * a).ceil() as usize,
            Profile::Custom { values } => values.len(),
        }
    }

    /// Fraction of the untruncated mass `Σ_{x ≥ 1} f(x)` lying beyond `cutoff`.
    pub fn tail_fraction(&self, cutoff: usize) -> f64 {
        let c = cutoff as f64;
        match self {
            Profile::Exponential { xi } => (-c / xi).exp(),
            Profile::Lorentzian { a } => {
                let total = (PI * a / (PI * a).tanh() - 1.0) / (2.0 * a * a);
                let tail = (PI / 2.0 - ((c + 0.5) / a).atan()) / a;
                tail / total
            }
            Profile::Custom { values } => {
                let total: f64 = values.iter().sum();
                values.iter().skip(cutoff).sum::<f64>() / total
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingletModel {
    profile: Profile,
    /// `f̃(x)` at index `x − 1`, for `x ≤ cutoff`.
    weights: Vec<f64>,
}

impl SingletModel {
    pub fn new(profile: Profile) -> Result<Self> {
        profile.validate()?;
        let cutoff = profile.default_cutoff();
        Self::with_cutoff(profile, cutoff)
    }

    /// Truncates at `cutoff` and normalizes on the truncated support so that
    /// `Σ_{j≠i} f̃(|i − j|) = 1`.
    pub fn with_cutoff(profile: Profile, cutoff: usize) -> Result<Self> {
        profile.validate()?;
        if cutoff == 0 {
            return Err(Error::InvalidProfile("cutoff must be at least 1".into()));
        }
        let raw: Vec<f64> = (1..=cutoff).map(|x| profile.value(x)).collect();
        let both_sides = 2.0 * raw.iter().sum::<f64>();
        if !(both_sides > 0.0) {
            return Err(Error::InvalidProfile("profile vanishes on the truncated support".into()));
        }
        let weights = raw.into_iter().map(|v| v / both_sides).collect();
        Ok(SingletModel { profile, weights })
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn cutoff(&self) -> usize {
        self.weights.len()
    }

    pub fn truncation_error(&self) -> f64 {
        self.profile.tail_fraction(self.cutoff())
    }

    /// `f̃(x)`.
    pub fn pair_probability(&self, x: usize) -> f64 {
        if x == 0 {
            0.0
        } else {
            self.weights.get(x - 1).copied().unwrap_or(0.0)
        }
    }

    /// `Σ_{j≠i} f̃(|i − j|)`.
    pub fn site_normalization(&self) -> f64 {
        2.0 * self.weights.iter().sum::<f64>()
    }
}

/// `Σ_{i∈A, j∈B} f̃(|i − j|)`.
pub fn expected_crossings(model: &SingletModel, a: &[i64], b: &[i64]) -> Result<f64> {
    let a: BTreeSet<i64> = a.iter().copied().collect();
    let b: BTreeSet<i64> = b.iter().copied().collect();
    if let Some(&site) = a.intersection(&b).next() {
        return Err(Error::OverlappingChainSites(site));
    }
    // Pair counts per length keep the sum independent of the argument order.
    let reach = model.cutoff();
    let mut counts = vec![0u64; reach + 1];
    for &i in &a {
        for &j in b.range(i - reach as i64..=i + reach as i64) {
            counts[i.abs_diff(j) as usize] += 1;
        }
    }
    Ok(counts.iter().enumerate().map(|(x, &n)| n as f64 * model.pair_probability(x)).sum())
}

pub fn toy_mutual_information(model: &SingletModel, a: &[i64], b: &[i64]) -> Result<f64> {
    Ok(SINGLET_MI * expected_crossings(model, a, b)?)
}

/// `A = [−(R−L), R−L]` inside a shell of `L` sites on each side and `B` the
/// exterior `|j| > R`, cut at the reach of the profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellRegions {
    pub radius: usize,
    pub gap: usize,
}

impl ShellRegions {
    pub fn new(radius: usize, gap: usize) -> Result<Self> {
        if gap > radius {
            return Err(Error::OutOfRange { what: "shell gap", value: gap as f64 });
        }
        Ok(ShellRegions { radius, gap })
    }

    pub fn inner_length(&self) -> usize {
        2 * (self.radius - self.gap) + 1
    }

    pub fn sites(&self, reach: usize) -> (Vec<i64>, Vec<i64>) {
        let inner = (self.radius - self.gap) as i64;
        let r = self.radius as i64;
        let a = (-inner..=inner).collect();
        let b = (-(r + reach as i64)..-r).chain(r + 1..=r + reach as i64).collect();
        (a, b)
    }

    /// Crossing count by pair length: `2 · min(|A|, max(0, x − L))` pairs of
    /// length `x` join `A` to `B`.
    pub fn crossings(&self, model: &SingletModel) -> f64 {
        let len = self.inner_length();
        (1..=model.cutoff())
            .map(|x| model.pair_probability(x) * (2 * len.min(x.saturating_sub(self.gap))) as f64)
            .sum()
    }

    pub fn mutual_information(&self, model: &SingletModel) -> f64 {
        SINGLET_MI * self.crossings(model)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub radius: usize,
    pub gap: usize,
    pub crossings: f64,
    pub mutual_information: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AreaLaw {
    Holds,
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalingFamily {
    /// `I_L` decays exponentially in `L` and saturates in `R`.
    ExponentialDecay,
    /// `I_L(R)` grows like `ln(2R − L)`.
    LogarithmicGrowth,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub cutoff: usize,
    pub truncation_error: f64,
    /// Grid points with `L ≤ R`, radius-major.
    pub points: Vec<ScalingPoint>,
    /// `ln I_L` against `L` at the largest radius, over points with `I_L > 0`.
    pub decay_fit: Option<LinearFit>,
    /// `−1 / slope` of the decay fit.
    pub decay_length: Option<f64>,
    /// Per gap: `I_L(R)` against `ln(2R − L)` over the radii admitting `L`.
    pub log_fits: Vec<(usize, LinearFit)>,
    pub xi_m: XiM,
    pub xi_m_per_radius: Vec<(usize, XiM)>,
    /// `I_0(R)` over the radius grid.
    pub adjacent: Vec<(usize, f64)>,
    /// Relative spread of `I_0(R)` over the upper half of the radius grid.
    pub adjacent_spread: f64,
    pub area_law: AreaLaw,
    pub family: ScalingFamily,
}

impl ScalingReport {
    pub fn min_log_correlation(&self) -> Option<f64> {
        self.log_fits.iter().map(|(_, f)| f.correlation).reduce(f64::min)
    }
}

fn sorted_unique(grid: &[usize]) -> Vec<usize> {
    grid.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

/// Decides between saturating and growing behaviour of `I_L(R)`.
///
/// The area law holds when `I_0(R)` is constant to [`PLATEAU_TOLERANCE`] over
/// the upper half of the radius grid. `ξ_M` is infinite when some radius has
/// no halving thickness on the gap grid or when the per-radius estimate keeps
/// growing across the upper half of the radius grid.
pub fn scaling_analysis(model: &SingletModel, radii: &[usize], gaps: &[usize]) -> Result<ScalingReport> {
    let radii = sorted_unique(radii);
    let gaps = sorted_unique(gaps);
    for grid in [&radii, &gaps] {
        if grid.len() < MIN_GRID_POINTS {
            return Err(Error::InsufficientGrid { needed: MIN_GRID_POINTS, got: grid.len() });
        }
    }
    let mut points = Vec::new();
    for &radius in &radii {
        for &gap in gaps.iter().filter(|&&l| l <= radius) {
            let shell = ShellRegions { radius, gap };
            let crossings = shell.crossings(model);
            points.push(ScalingPoint { radius, gap, crossings, mutual_information: SINGLET_MI * crossings });
        }
    }
    let r_max = *radii.last().expect("grid checked non-empty");
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter(|p| p.radius == r_max && p.mutual_information > 0.0)
        .map(|p| (p.gap as f64, p.mutual_information.ln()))
        .unzip();
    let decay_fit = linear_fit(&xs, &ys);
    let decay_length = decay_fit.filter(|f| f.slope < 0.0).map(|f| -1.0 / f.slope);

    let mut log_fits = Vec::new();
    for &gap in &gaps {
        let (xs, ys): (Vec<f64>, Vec<f64>) = points
            .iter()
            .filter(|p| p.gap == gap)
            .map(|p| (((2 * p.radius - gap) as f64).ln(), p.mutual_information))
            .unzip();
        if xs.len() >= 3 {
            if let Some(fit) = linear_fit(&xs, &ys) {
                log_fits.push((gap, fit));
            }
        }
    }

    let curves: Vec<(usize, Vec<(usize, f64)>)> = radii
        .iter()
        .map(|&r| {
            let curve = points.iter().filter(|p| p.radius == r).map(|p| (p.gap, p.mutual_information)).collect();
            (r, curve)
        })
        .collect();
    let over_radii = xi_m_for_all_radii(&curves)?;
    let upper = &over_radii.per_radius[over_radii.per_radius.len() / 2..];
    let growing = upper.first().map(|f| f.1.as_f64()) < upper.last().map(|l| l.1.as_f64());
    let xi_m = if growing { XiM::Infinite } else { over_radii.xi_m };

    let adjacent: Vec<(usize, f64)> = radii
        .iter()
        .map(|&r| (r, ShellRegions { radius: r, gap: 0 }.mutual_information(model)))
        .collect();
    let tail = &adjacent[adjacent.len() / 2..];
    let hi = tail.iter().map(|p| p.1).fold(f64::MIN, f64::max);
    let lo = tail.iter().map(|p| p.1).fold(f64::MAX, f64::min);
    let adjacent_spread = if hi > 0.0 { (hi - lo) / hi } else { 0.0 };
    let area_law = if adjacent_spread <= PLATEAU_TOLERANCE { AreaLaw::Holds } else { AreaLaw::Violated };
    let family = match area_law {
        AreaLaw::Holds => ScalingFamily::ExponentialDecay,
        AreaLaw::Violated => ScalingFamily::LogarithmicGrowth,
    };
    Ok(ScalingReport {
        cutoff: model.cutoff(),
        truncation_error: model.truncation_error(),
        points,
        decay_fit,
        decay_length,
        log_fits,
        xi_m,
        xi_m_per_radius: over_radii.per_radius,
        adjacent,
        adjacent_spread,
        area_law,
        family,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn exponential(xi: f64) -> SingletModel {
        SingletModel::new(Profile::Exponential { xi }).unwrap()
    }

    fn lorentzian(a: f64, cutoff: usize) -> SingletModel {
        SingletModel::with_cutoff(Profile::Lorentzian { a }, cutoff).unwrap()
    }

    /// Plain double loop over every pair.
    fn double_sum(model: &SingletModel, a: &[i64], b: &[i64]) -> f64 {
        let mut total = 0.0;
        for &i in a {
            for &j in b {
                total += model.pair_probability(i.abs_diff(j) as usize);
            }
        }
        total
    }

    #[test]
    fn normalization_on_truncated_support() {
        for m in [exponential(3.0), lorentzian(2.0, 100), SingletModel::new(Profile::Custom { values: vec![1.0; 5] }).unwrap()] {
            assert!((m.site_normalization() - 1.0).abs() < 1e-12);
        }
        assert_eq!(exponential(3.0).cutoff(), 60);
        assert!((exponential(3.0).truncation_error() - (-20f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn nearest_neighbour_profile() {
        let m = SingletModel::new(Profile::Custom { values: vec![1.0] }).unwrap();
        assert_eq!(expected_crossings(&m, &[0, 1], &[3, 4]).unwrap(), 0.0);
        // One boundary pair, probability 1/2 each side.
        assert!((expected_crossings(&m, &[0, 1], &[2, 3]).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(toy_mutual_information(&m, &[0], &[5]).unwrap(), 0.0);
    }

    #[test]
    fn deterministic_singlet_gives_two_ln_two() {
        // Two isolated sites paired with certainty.
        let m = SingletModel::new(Profile::Custom { values: vec![2.0] }).unwrap();
        let total = toy_mutual_information(&m, &[0], &[1]).unwrap() + toy_mutual_information(&m, &[0], &[-1]).unwrap();
        assert!((total - 2.0 * LN_2).abs() < 1e-15);
    }

    #[test]
    fn overlapping_regions_are_rejected() {
        let m = exponential(2.0);
        assert_eq!(expected_crossings(&m, &[0, 1], &[1, 2]), Err(Error::OverlappingChainSites(1)));
    }

    #[test]
    fn shell_counts_match_double_sum() {
        let m = exponential(4.0);
        for gap in 0..=40 {
            let shell = ShellRegions::new(200, gap).unwrap();
            let (a, b) = shell.sites(m.cutoff());
            let oracle = double_sum(&m, &a, &b);
            assert!((shell.crossings(&m) - oracle).abs() < 1e-12);
            assert!((expected_crossings(&m, &a, &b).unwrap() - oracle).abs() < 1e-12);
        }
        let m = SingletModel::new(Profile::Lorentzian { a: 2.0 }).unwrap();
        let shell = ShellRegions::new(400, 10).unwrap();
        let (a, b) = shell.sites(m.cutoff());
        let oracle = SINGLET_MI * double_sum(&m, &a, &b);
        assert!((shell.mutual_information(&m) - oracle).abs() < 1e-12);
        assert!((toy_mutual_information(&m, &a, &b).unwrap() - oracle).abs() < 1e-12);
    }

    fn grid(lo: usize, hi: usize, n: usize) -> Vec<usize> {
        (0..n).map(|k| lo + (hi - lo) * k / (n - 1)).collect()
    }

    #[test]
    fn exponential_profile_obeys_area_law() {
        let xi = 3.0;
        let report = scaling_analysis(&exponential(xi), &grid(60, 480, 8), &grid(0, 40, 11)).unwrap();
        let length = report.decay_length.unwrap();
        assert!((length - xi).abs() <= 0.25 * xi, "{length}");
        assert!(report.xi_m.is_finite());
        assert_eq!(report.area_law, AreaLaw::Holds);
        assert_eq!(report.family, ScalingFamily::ExponentialDecay);
    }

    #[test]
    fn lorentzian_profile_violates_area_law() {
        let report = scaling_analysis(&lorentzian(1.0, 32_000), &grid(50, 800, 8), &grid(0, 40, 9)).unwrap();
        assert!(report.min_log_correlation().unwrap() >= 0.99);
        assert_eq!(report.xi_m, XiM::Infinite);
        assert_eq!(report.area_law, AreaLaw::Violated);
        assert!(report.adjacent.windows(2).all(|w| w[1].1 > w[0].1));
    }

    #[test]
    fn short_lorentzian_cutoff_saturates() {
        let report = scaling_analysis(&lorentzian(1.0, 50), &grid(50, 800, 8), &grid(0, 40, 9)).unwrap();
        assert_eq!(report.area_law, AreaLaw::Holds);
    }

    #[test]
    fn compact_support_vanishes_beyond_range() {
        let m = SingletModel::new(Profile::Custom { values: vec![1.0; 5] }).unwrap();
        let report = scaling_analysis(&m, &grid(20, 90, 8), &(0..12).collect::<Vec<_>>()).unwrap();
        for p in report.points.iter().filter(|p| p.gap >= 5) {
            assert_eq!(p.mutual_information, 0.0);
        }
        assert!(report.xi_m.as_f64() <= 5.0);
    }

    #[test]
    fn small_grids_are_rejected() {
        let m = exponential(2.0);
        assert_eq!(
            scaling_analysis(&m, &[10, 20, 30], &grid(0, 7, 8)).unwrap_err(),
            Error::InsufficientGrid { needed: 8, got: 3 }
        );
    }

    #[test]
    fn doubling_xi_doubles_decay_length() {
        let lengths: Vec<f64> = [2.0, 4.0]
            .iter()
            .map(|&xi| {
                scaling_analysis(&exponential(xi), &grid(200, 600, 8), &grid(0, 40, 9)).unwrap().decay_length.unwrap()
            })
            .collect();
        assert!((lengths[1] / lengths[0] - 2.0).abs() <= 0.2);
    }

    proptest! {
        #[test]
        fn monotone_in_gap_and_radius(xi in 0.5f64..8.0, a in 0.5f64..4.0, radius in 1usize..120, gap in 0usize..60) {
            prop_assume!(gap < radius);
            for m in [exponential(xi), lorentzian(a, 500)] {
                let here = ShellRegions::new(radius, gap).unwrap().crossings(&m);
                let wider = ShellRegions::new(radius, gap + 1).unwrap().crossings(&m);
                let larger = ShellRegions::new(radius + 1, gap).unwrap().crossings(&m);
                prop_assert!(wider <= here && here <= larger);
            }
        }

        #[test]
        fn crossings_are_symmetric(xi in 0.5f64..6.0, a in prop::collection::vec(-30i64..30, 1..12), shift in 60i64..90) {
            let m = exponential(xi);
            let b: Vec<i64> = a.iter().map(|x| x + shift).collect();
            let ab = expected_crossings(&m, &a, &b).unwrap();
            let ba = expected_crossings(&m, &b, &a).unwrap();
            prop_assert_eq!(ab, ba);
        }
    }
}
