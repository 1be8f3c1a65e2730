use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, r, CMat};

use super::QuantumChannel;

/// Eigenvalues within this distance of the unit circle count as peripheral.
pub const PERIPHERAL_TOLERANCE: f64 = 1e-10;
/// `η` at or above `1 - ETA_SENTINEL` reports an infinite correlation length.
pub const ETA_SENTINEL: f64 = 1e-12;
/// Fixed-point residual `||E(ϱ) - ϱ||` allowed at construction.
pub const FIXED_POINT_TOLERANCE: f64 = 1e-10;

/// Spectrum of the transfer operator, sorted by decreasing modulus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferSpectrum {
    pub eigenvalues: Vec<(f64, f64)>,
    pub eta: f64,
    /// `-1 / ln η`; zero for `η = 0`, infinite near `η = 1`.
    pub xi: f64,
}

impl TransferSpectrum {
    pub fn moduli(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|&(re, im)| re.hypot(im)).collect()
    }
}

pub fn correlation_length(eta: f64) -> f64 {
    if eta <= 0.0 {
        0.0
    } else if eta >= 1.0 - ETA_SENTINEL {
        f64::INFINITY
    } else {
        -1.0 / eta.ln()
    }
}

/// A finitely correlated state: generator `T: B(C^D) → B(C^D ⊗ C^d)`
/// (output ordered memory ⊗ physical), its transfer operator and fixed point.
#[derive(Debug, Clone)]
pub struct FcsDescriptor {
    bond_dim: usize,
    phys_dim: usize,
    generator: QuantumChannel,
    /// `E` acting on row-major vectorized `D×D` matrices.
    transfer: CMat,
    fixed_point: CMat,
    eigenvalues: Vec<Complex64>,
}

impl FcsDescriptor {
    /// Requires the generic condition: exactly one eigenvalue of `E` on the
    /// unit circle. The fixed point is its eigenvector.
    pub fn new(generator: QuantumChannel, phys_dim: usize) -> Result<Self> {
        let (bond_dim, transfer) = transfer_matrix(&generator, phys_dim)?;
        let eigenvalues = spectrum_of(&transfer)?;
        let peripheral = peripheral_count(&eigenvalues);
        if peripheral != 1 {
            return Err(Error::DegeneratePeripheralSpectrum { count: peripheral });
        }
        let fixed_point = null_vector_state(&transfer, bond_dim)?;
        let descriptor = FcsDescriptor { bond_dim, phys_dim, generator, transfer, fixed_point, eigenvalues };
        descriptor.check_fixed_point()?;
        Ok(descriptor)
    }

    /// Accepts a non-generic generator together with an invariant state,
    /// e.g. the GHZ channel with `ϱ = 1/2`.
    pub fn with_fixed_point(generator: QuantumChannel, phys_dim: usize, fixed_point: CMat) -> Result<Self> {
        let (bond_dim, transfer) = transfer_matrix(&generator, phys_dim)?;
        if fixed_point.shape() != (bond_dim, bond_dim) {
            return Err(Error::DimensionMismatch(format!(
                "fixed point is {:?}, bond dimension {bond_dim}",
                fixed_point.shape()
            )));
        }
        let fixed_point = linalg::hermitize(&fixed_point, linalg::HERMITICITY_TOL)?;
        let trace = linalg::trace(&fixed_point).re;
        if (trace - 1.0).abs() > FIXED_POINT_TOLERANCE {
            return Err(Error::TraceNotOne { trace });
        }
        let min = linalg::eigvalsh(&fixed_point)[0];
        if min < -FIXED_POINT_TOLERANCE {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        let eigenvalues = spectrum_of(&transfer)?;
        let descriptor = FcsDescriptor { bond_dim, phys_dim, generator, transfer, fixed_point, eigenvalues };
        descriptor.check_fixed_point()?;
        Ok(descriptor)
    }

    fn check_fixed_point(&self) -> Result<()> {
        let image = self.apply_transfer(&self.fixed_point, 1);
        let deviation = linalg::max_abs(&(image - &self.fixed_point));
        if deviation > FIXED_POINT_TOLERANCE {
            return Err(Error::InvalidChannel(format!("ϱ is not invariant under E (deviation {deviation:e})")));
        }
        Ok(())
    }

    pub fn bond_dim(&self) -> usize {
        self.bond_dim
    }

    pub fn phys_dim(&self) -> usize {
        self.phys_dim
    }

    pub fn generator(&self) -> &QuantumChannel {
        &self.generator
    }

    pub fn transfer_matrix(&self) -> &CMat {
        &self.transfer
    }

    pub fn fixed_point(&self) -> &CMat {
        &self.fixed_point
    }

    pub fn is_pure(&self) -> bool {
        self.generator.kraus_count() == 1
    }

    /// `D × D` blocks `A_{k,s}` with `E(x) = Σ A_{k,s} x A_{k,s}†`.
    pub fn memory_blocks(&self) -> Vec<CMat> {
        memory_blocks(&self.generator, self.bond_dim, self.phys_dim)
    }

    /// `E^k(x)` for a `D × D` matrix.
    pub fn apply_transfer(&self, x: &CMat, k: usize) -> CMat {
        let blocks = self.memory_blocks();
        let mut y = x.clone();
        for _ in 0..k {
            let mut next = CMat::zeros(self.bond_dim, self.bond_dim);
            for a in &blocks {
                next += a * &y * a.adjoint();
            }
            y = next;
        }
        y
    }

    /// Sorted spectrum, `η` and `ξ`; fails unless exactly one eigenvalue
    /// lies on the unit circle.
    pub fn transfer_spectrum(&self) -> Result<TransferSpectrum> {
        let peripheral = peripheral_count(&self.eigenvalues);
        if peripheral != 1 {
            return Err(Error::DegeneratePeripheralSpectrum { count: peripheral });
        }
        let eta = self.eigenvalues.get(1).map_or(0.0, |z| z.norm());
        Ok(TransferSpectrum {
            eigenvalues: self.eigenvalues.iter().map(|z| (z.re, z.im)).collect(),
            eta,
            xi: correlation_length(eta),
        })
    }

    /// Raw eigenvalues of `E`, regardless of the generic condition.
    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }
}

fn peripheral_count(eigenvalues: &[Complex64]) -> usize {
    eigenvalues.iter().filter(|z| z.norm() >= 1.0 - PERIPHERAL_TOLERANCE).count()
}

fn spectrum_of(transfer: &CMat) -> Result<Vec<Complex64>> {
    linalg::eigenvalues_general(transfer)
        .ok_or_else(|| Error::InvalidChannel("Schur iteration did not converge".into()))
}

fn memory_blocks(generator: &QuantumChannel, bond_dim: usize, phys_dim: usize) -> Vec<CMat> {
    let mut blocks = Vec::with_capacity(generator.kraus_count() * phys_dim);
    for k in generator.kraus() {
        for s in 0..phys_dim {
            blocks.push(CMat::from_fn(bond_dim, bond_dim, |b, a| k[(b * phys_dim + s, a)]));
        }
    }
    blocks
}

fn transfer_matrix(generator: &QuantumChannel, phys_dim: usize) -> Result<(usize, CMat)> {
    let bond_dim = generator.input_dim();
    if phys_dim == 0 || generator.output_dim() != bond_dim * phys_dim {
        return Err(Error::InvalidChannel(format!(
            "generator maps dimension {} to {}, expected {} = D·d",
            bond_dim,
            generator.output_dim(),
            bond_dim * phys_dim
        )));
    }
    let mut e = CMat::zeros(bond_dim * bond_dim, bond_dim * bond_dim);
    for a in memory_blocks(generator, bond_dim, phys_dim) {
        e += linalg::kron(&a, &a.conjugate());
    }
    Ok((bond_dim, e))
}

/// Unit-trace state spanning the kernel of `E - 1`.
fn null_vector_state(transfer: &CMat, bond_dim: usize) -> Result<CMat> {
    let n = transfer.nrows();
    let shifted = transfer - linalg::identity(n);
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty spectrum");
    let row = v_t.row(idx);
    let m = CMat::from_fn(bond_dim, bond_dim, |i, j| row[i * bond_dim + j].conj());
    let trace = linalg::trace(&m);
    if trace.norm() < 1e-12 {
        return Err(Error::InvalidChannel("fixed point has zero trace".into()));
    }
    let m = m / trace;
    let herm = (&m + m.adjoint()) * r(0.5);
    Ok(herm)
}
