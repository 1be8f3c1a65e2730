//! Random states, unitaries and operators for fuzzing.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, r, CMat, CVec};
use crate::qstate::{DensityMatrix, Observable, SiteSpace};

/// Matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Random state `G G† / tr`, with `G` of `rank` columns (full rank if `None`).
pub fn density_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    space: SiteSpace,
    rank: Option<usize>,
) -> DensityMatrix {
    let dim = space.dim();
    let g = ginibre(rng, dim, rank.unwrap_or(dim).max(1));
    let m = &g * g.adjoint();
    let t = m.trace().re;
    DensityMatrix::from_trusted(space, m / r(t))
}

pub fn pure_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVec {
    let g = ginibre(rng, dim, 1);
    let n = g.norm();
    CVec::from_iterator(dim, g.iter().map(|z| z / n))
}

/// Haar-random unitary (QR of a Ginibre matrix with the phase fix).
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMat {
    let qr = ginibre(rng, dim, dim).qr();
    let (q, rr) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..dim {
        let d = rr[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { r(1.0) };
        for i in 0..dim {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Hermitian matrix from the Gaussian unitary ensemble.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMat {
    let g = ginibre(rng, dim, dim);
    (&g + g.adjoint()) * r(0.5)
}

pub fn observable<R: Rng + ?Sized>(rng: &mut R, space: SiteSpace) -> Observable {
    let m = hermitian(rng, space.dim());
    Observable::new(space, m).expect("GUE sample is Hermitian")
}
