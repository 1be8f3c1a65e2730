//! Labeled multi-site states: density matrices, observables, partial traces,
//! entropies, trace distance and the Fannes continuity bound.
//!
//! Index convention: a state on sites `[s0, s1, ..., s(n-1)]` (label order)
//! stores basis index `x = x0 * d^(n-1) + x1 * d^(n-2) + ... + x(n-1)`, i.e.
//! row-major with the first label most significant. Every reshuffle in this
//! crate (partial trace, embedding, permutation) follows that layout.
//!
//! Entropies are in nats.

use std::collections::HashSet;

use crate::caps::{self, checked_power};
use crate::error::{Error, Result};
use crate::linalg::{self, r, CMat, CVec, HERMITICITY_TOL};

/// Default validation tolerance for trace and positivity.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Eigenvalues below this fraction of the largest one contribute nothing to an entropy.
pub const ZERO_CLIP_RELATIVE: f64 = 1e-12;
/// Negative eigenvalues above `-NEGATIVE_CLIP` are rounding noise; below it, an error.
pub const NEGATIVE_CLIP: f64 = 1e-10;

/// An ordered set of `d`-dimensional sites.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SiteSpace {
    local_dim: usize,
    labels: Vec<usize>,
}

impl SiteSpace {
    pub fn new(local_dim: usize, labels: Vec<usize>) -> Result<Self> {
        if local_dim < 2 {
            return Err(Error::OutOfRange { what: "local dimension", value: local_dim as f64 });
        }
        if labels.is_empty() {
            return Err(Error::EmptyRegion);
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for &label in &labels {
            if !seen.insert(label) {
                return Err(Error::DuplicateSite(label));
            }
        }
        caps::global().check_dim(checked_power(local_dim, labels.len()))?;
        Ok(SiteSpace { local_dim, labels })
    }

    /// Sites labeled `0..n`.
    pub fn chain(local_dim: usize, n: usize) -> Result<Self> {
        Self::new(local_dim, (0..n).collect())
    }

    /// The zero-site space (dimension 1), used for empty blocks.
    pub fn trivial(local_dim: usize) -> Self {
        SiteSpace { local_dim, labels: Vec::new() }
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn site_count(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.labels.len() as u32)
    }

    pub fn contains(&self, label: usize) -> bool {
        self.labels.contains(&label)
    }

    pub fn position(&self, label: usize) -> Result<usize> {
        self.labels.iter().position(|&l| l == label).ok_or(Error::UnknownSite(label))
    }

    /// Positions of `subset` in this space, sorted in label order.
    pub fn positions(&self, subset: &[usize]) -> Result<Vec<usize>> {
        let mut seen = HashSet::with_capacity(subset.len());
        let mut out = Vec::with_capacity(subset.len());
        for &label in subset {
            if !seen.insert(label) {
                return Err(Error::DuplicateSite(label));
            }
            out.push(self.position(label)?);
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Sub-space on `subset`, keeping this space's order.
    pub fn restrict(&self, subset: &[usize]) -> Result<SiteSpace> {
        let positions = self.positions(subset)?;
        Ok(SiteSpace {
            local_dim: self.local_dim,
            labels: positions.iter().map(|&p| self.labels[p]).collect(),
        })
    }

    /// Labels not in `subset`, in this space's order.
    pub fn complement(&self, subset: &[usize]) -> Vec<usize> {
        self.labels.iter().copied().filter(|l| !subset.contains(l)).collect()
    }

    /// Concatenation of two disjoint spaces.
    pub fn join(&self, other: &SiteSpace) -> Result<SiteSpace> {
        if self.local_dim != other.local_dim {
            return Err(Error::DimensionMismatch(format!(
                "local dimensions {} and {}",
                self.local_dim, other.local_dim
            )));
        }
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        if labels.is_empty() {
            return Ok(SiteSpace::trivial(self.local_dim));
        }
        SiteSpace::new(self.local_dim, labels)
    }

    fn stride(&self, position: usize) -> usize {
        self.local_dim.pow((self.site_count() - 1 - position) as u32)
    }

    /// Basis offsets contributed by the sites at `positions` for each of
    /// their joint configurations (row-major over `positions`).
    fn offsets(&self, positions: &[usize]) -> Vec<usize> {
        let d = self.local_dim;
        let count = d.pow(positions.len() as u32);
        (0..count)
            .map(|k| {
                linalg::digits(k, d, positions.len())
                    .iter()
                    .zip(positions)
                    .map(|(&digit, &p)| digit * self.stride(p))
                    .sum()
            })
            .collect()
    }

    /// Basis permutation taking this space's order to `target`'s order:
    /// `new_index -> old_index`.
    fn permutation_to(&self, target: &SiteSpace) -> Result<Vec<usize>> {
        if target.local_dim != self.local_dim || target.site_count() != self.site_count() {
            return Err(Error::DimensionMismatch("spaces differ".into()));
        }
        let old_positions: Vec<usize> =
            target.labels.iter().map(|&l| self.position(l)).collect::<Result<_>>()?;
        let n = self.site_count();
        Ok((0..self.dim())
            .map(|new_index| {
                linalg::digits(new_index, self.local_dim, n)
                    .iter()
                    .zip(&old_positions)
                    .map(|(&digit, &p)| digit * self.stride(p))
                    .sum()
            })
            .collect())
    }
}

fn check_square(m: &CMat, dim: usize) -> Result<()> {
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "expected {dim}x{dim}, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// A Hermitian, positive semidefinite, unit-trace operator on a [`SiteSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: SiteSpace,
    matrix: CMat,
    tolerance: f64,
}

impl DensityMatrix {
    /// Validates and stores `matrix`. Small anti-Hermitian parts are
    /// symmetrized away; small negative eigenvalues are tolerated.
    pub fn new(space: SiteSpace, matrix: CMat) -> Result<Self> {
        Self::with_tolerance(space, matrix, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(space: SiteSpace, matrix: CMat, tolerance: f64) -> Result<Self> {
        check_square(&matrix, space.dim())?;
        let matrix = linalg::hermitize(&matrix, HERMITICITY_TOL)?;
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > tolerance.max(DEFAULT_TOLERANCE) {
            return Err(Error::TraceNotOne { trace });
        }
        let min = linalg::eigvalsh(&matrix).first().copied().unwrap_or(0.0);
        if min < -tolerance.max(NEGATIVE_CLIP) {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(DensityMatrix { space, matrix, tolerance })
    }

    /// Builds from a matrix already known to be a state (output of a
    /// positive trace-preserving operation on a valid state). Only the
    /// Hermitian projection is applied.
    pub(crate) fn from_trusted(space: SiteSpace, matrix: CMat) -> Self {
        debug_assert_eq!(matrix.nrows(), space.dim());
        let matrix = (&matrix + matrix.adjoint()) * r(0.5);
        DensityMatrix { space, matrix, tolerance: DEFAULT_TOLERANCE }
    }

    /// Normalizes a positive semidefinite matrix to unit trace.
    pub fn from_unnormalized(space: SiteSpace, matrix: CMat) -> Result<Self> {
        check_square(&matrix, space.dim())?;
        let trace = matrix.trace().re;
        if !(trace > 0.0) {
            return Err(Error::TraceNotOne { trace });
        }
        Self::new(space, matrix / r(trace))
    }

    /// `|psi><psi| / <psi|psi>`.
    pub fn pure(space: SiteSpace, psi: &CVec) -> Result<Self> {
        if psi.len() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state vector of length {} on a space of dimension {}",
                psi.len(),
                space.dim()
            )));
        }
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::TraceNotOne { trace: 0.0 });
        }
        let v = psi / r(norm);
        Ok(Self::from_trusted(space, &v * v.adjoint()))
    }

    pub fn maximally_mixed(space: SiteSpace) -> Self {
        let dim = space.dim();
        DensityMatrix {
            space,
            matrix: linalg::identity(dim) / r(dim as f64),
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(space: SiteSpace, probabilities: &[f64]) -> Result<Self> {
        if probabilities.len() != space.dim() {
            return Err(Error::DimensionMismatch("probability vector length".into()));
        }
        Self::new(space, linalg::real_diag(probabilities))
    }

    pub fn space(&self) -> &SiteSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix)
    }

    /// `tr[rho * op]` for an operator on the full space.
    pub fn expectation(&self, op: &CMat) -> Result<f64> {
        check_square(op, self.dim())?;
        Ok(linalg::trace_product(&self.matrix, op).re)
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        partial_trace(self, keep)
    }

    /// Marginal on `keep`, or `self` when `keep` covers every site.
    pub fn marginal(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.len() == self.space.site_count()
            && keep.iter().all(|&l| self.space.contains(l))
        {
            let mut unique = keep.to_vec();
            unique.sort_unstable();
            unique.dedup();
            if unique.len() == keep.len() {
                return Ok(self.clone());
            }
        }
        partial_trace(self, keep)
    }

    /// `self ⊗ other` on the concatenated label list.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let space = self.space.join(&other.space)?;
        Ok(DensityMatrix::from_trusted(space, linalg::kron(&self.matrix, &other.matrix)))
    }

    /// Same state with the sites reordered to `target`'s label order.
    pub fn reordered(&self, target: &SiteSpace) -> Result<DensityMatrix> {
        if target.labels() == self.space.labels() {
            return Ok(self.clone());
        }
        let perm = self.space.permutation_to(target)?;
        let matrix = CMat::from_fn(self.dim(), self.dim(), |i, j| self.matrix[(perm[i], perm[j])]);
        Ok(DensityMatrix { space: target.clone(), matrix, tolerance: self.tolerance })
    }

    /// `U rho U†` for a unitary on the full space.
    pub fn conjugate(&self, unitary: &CMat) -> Result<DensityMatrix> {
        check_square(unitary, self.dim())?;
        Ok(DensityMatrix::from_trusted(
            self.space.clone(),
            unitary * &self.matrix * unitary.adjoint(),
        ))
    }
}

/// A Hermitian operator on a [`SiteSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    space: SiteSpace,
    matrix: CMat,
}

impl Observable {
    pub fn new(space: SiteSpace, matrix: CMat) -> Result<Self> {
        check_square(&matrix, space.dim())?;
        let matrix = linalg::hermitize(&matrix, HERMITICITY_TOL)?;
        Ok(Observable { space, matrix })
    }

    pub fn space(&self) -> &SiteSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        linalg::operator_norm(&self.matrix)
    }

    /// The operator acting on `space` (identity elsewhere).
    pub fn embed(&self, space: &SiteSpace) -> Result<CMat> {
        if space.local_dim() != self.space.local_dim() {
            return Err(Error::DimensionMismatch("local dimensions differ".into()));
        }
        let positions: Vec<usize> =
            self.space.labels().iter().map(|&l| space.position(l)).collect::<Result<_>>()?;
        Ok(linalg::embed_operator(&self.matrix, &positions, space.local_dim(), space.site_count()))
    }
}

/// Marginal of `rho` on the sites `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let space = rho.space();
    let kept = space.positions(keep)?;
    let traced: Vec<usize> = (0..space.site_count()).filter(|p| !kept.contains(p)).collect();
    let keep_offsets = space.offsets(&kept);
    let trace_offsets = space.offsets(&traced);
    let m = rho.matrix();
    let out = CMat::from_fn(keep_offsets.len(), keep_offsets.len(), |a, b| {
        let (ra, rb) = (keep_offsets[a], keep_offsets[b]);
        trace_offsets.iter().map(|&t| m[(ra + t, rb + t)]).sum()
    });
    let labels = kept.iter().map(|&p| space.labels()[p]).collect();
    Ok(DensityMatrix {
        space: SiteSpace { local_dim: space.local_dim(), labels },
        matrix: out,
        tolerance: rho.tolerance(),
    })
}

/// `-Σ λ ln λ` over a spectrum, with the zero-clip and negativity rules.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    let max = eigenvalues.iter().copied().fold(0.0_f64, f64::max);
    let mut entropy = 0.0;
    for &lambda in eigenvalues {
        if lambda < -NEGATIVE_CLIP {
            return Err(Error::NotPositive { min_eigenvalue: lambda });
        }
        if lambda <= ZERO_CLIP_RELATIVE * max || lambda <= 0.0 {
            continue;
        }
        entropy -= lambda * lambda.ln();
    }
    Ok(entropy.max(0.0))
}

/// `S(rho) = -tr[rho ln rho]` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    entropy_of_spectrum(&rho.eigenvalues())
}

/// `H(p) = -Σ p ln p` in nats.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    validate_probabilities(p, DEFAULT_TOLERANCE)?;
    Ok(p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum::<f64>().max(0.0))
}

pub(crate) fn validate_probabilities(p: &[f64], tol: f64) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidProbability("empty vector".into()));
    }
    if let Some(&bad) = p.iter().find(|&&x| x < -tol || !x.is_finite()) {
        return Err(Error::InvalidProbability(format!("entry {bad}")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > tol.max(1e-9) {
        return Err(Error::InvalidProbability(format!("sum {total}")));
    }
    Ok(())
}

/// `H(p, 1-p)` in nats.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// `||a - b||_1`, the sum of singular values of the difference.
pub fn trace_norm_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.space() != b.space() {
        return Err(Error::DimensionMismatch(format!(
            "spaces {:?} and {:?}",
            a.space().labels(),
            b.space().labels()
        )));
    }
    let diff = a.matrix() - b.matrix();
    Ok(linalg::singular_values(&diff).iter().sum())
}

/// Fannes bound `Δ ln(δ - 1) + H(Δ, 1 - Δ)` on `|S(ρ) - S(σ)|` for
/// `Δ = ½||ρ - σ||_1` on a `δ`-dimensional space.
pub fn fannes_bound(delta: f64, dim: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::OutOfRange { what: "trace distance", value: delta });
    }
    if dim < 2 {
        return Err(Error::OutOfRange { what: "dimension", value: dim as f64 });
    }
    Ok(delta * ((dim - 1) as f64).ln() + binary_entropy(delta))
}

/// A state kept as `F F†` for a tall factor `F`.
///
/// Block states of finitely correlated states have rank far below their
/// dimension; spectra are taken from the smaller Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredState {
    space: SiteSpace,
    factor: CMat,
}

impl FactoredState {
    pub fn new(space: SiteSpace, factor: CMat) -> Result<Self> {
        if factor.nrows() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "factor has {} rows, space has dimension {}",
                factor.nrows(),
                space.dim()
            )));
        }
        let trace = factor.norm_squared();
        if (trace - 1.0).abs() > 1e-9 {
            return Err(Error::TraceNotOne { trace });
        }
        Ok(FactoredState { space, factor })
    }

    pub(crate) fn from_trusted(space: SiteSpace, factor: CMat) -> Self {
        debug_assert_eq!(factor.nrows(), space.dim());
        FactoredState { space, factor }
    }

    pub fn space(&self) -> &SiteSpace {
        &self.space
    }

    pub fn factor(&self) -> &CMat {
        &self.factor
    }

    /// Nonzero part of the spectrum (ascending).
    pub fn spectrum(&self) -> Vec<f64> {
        let f = &self.factor;
        if f.ncols() == 0 {
            return Vec::new();
        }
        if f.nrows() <= f.ncols() {
            linalg::eigvalsh(&(f * f.adjoint()))
        } else {
            linalg::eigvalsh(&(f.adjoint() * f))
        }
    }

    pub fn entropy(&self) -> Result<f64> {
        entropy_of_spectrum(&self.spectrum())
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_trusted(self.space.clone(), &self.factor * self.factor.adjoint())
    }

    /// Drops null directions of the factor.
    pub fn compressed(&self) -> FactoredState {
        FactoredState { space: self.space.clone(), factor: compress_factor(self.factor.clone()) }
    }

    pub fn tensor(&self, other: &FactoredState) -> Result<FactoredState> {
        let space = self.space.join(&other.space)?;
        Ok(FactoredState { space, factor: linalg::kron(&self.factor, &other.factor) })
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<FactoredState> {
        if keep.is_empty() {
            return Err(Error::EmptyRegion);
        }
        let kept = self.space.positions(keep)?;
        let traced: Vec<usize> =
            (0..self.space.site_count()).filter(|p| !kept.contains(p)).collect();
        let keep_offsets = self.space.offsets(&kept);
        let trace_offsets = self.space.offsets(&traced);
        let rank = self.factor.ncols();
        let factor = CMat::from_fn(keep_offsets.len(), trace_offsets.len() * rank, |a, col| {
            let (t, j) = (col / rank, col % rank);
            self.factor[(keep_offsets[a] + trace_offsets[t], j)]
        });
        let labels = kept.iter().map(|&p| self.space.labels()[p]).collect();
        Ok(FactoredState {
            space: SiteSpace { local_dim: self.space.local_dim(), labels },
            factor,
        }
        .compressed())
    }

    /// `||self - other||_1`, evaluated on the joint column space.
    pub fn trace_distance(&self, other: &FactoredState) -> Result<f64> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch("factored states on different spaces".into()));
        }
        let (fa, fb) = (&self.factor, &other.factor);
        if fa.ncols() + fb.ncols() >= fa.nrows() {
            let diff = fa * fa.adjoint() - fb * fb.adjoint();
            return Ok(linalg::eigvalsh(&diff).iter().map(|v| v.abs()).sum());
        }
        let mut joint = CMat::zeros(fa.nrows(), fa.ncols() + fb.ncols());
        joint.columns_mut(0, fa.ncols()).copy_from(fa);
        joint.columns_mut(fa.ncols(), fb.ncols()).copy_from(fb);
        let q = linalg::column_basis(&joint, 1e-14);
        let pa = q.adjoint() * fa;
        let pb = q.adjoint() * fb;
        let diff = &pa * pa.adjoint() - &pb * pb.adjoint();
        Ok(linalg::eigvalsh(&diff).iter().map(|v| v.abs()).sum())
    }
}

/// `G` of full column rank with `G G† = F F†`, dropping directions of
/// relative weight below `1e-15`.
pub(crate) fn compress_factor(f: CMat) -> CMat {
    let (rows, cols) = f.shape();
    if cols <= 1 {
        return f;
    }
    if cols <= rows {
        let (values, vectors) = linalg::eigh(&(f.adjoint() * &f));
        let max = values.last().copied().unwrap_or(0.0);
        let keep: Vec<usize> = (0..cols).filter(|&k| values[k] > 1e-15 * max && values[k] > 0.0).collect();
        let basis = CMat::from_fn(cols, keep.len(), |i, j| vectors[(i, keep[j])]);
        f * basis
    } else {
        let (values, vectors) = linalg::eigh(&(&f * f.adjoint()));
        let max = values.last().copied().unwrap_or(0.0);
        let keep: Vec<usize> = (0..rows).filter(|&k| values[k] > 1e-15 * max && values[k] > 0.0).collect();
        CMat::from_fn(rows, keep.len(), |i, j| vectors[(i, keep[j])] * values[keep[j]].sqrt())
    }
}
