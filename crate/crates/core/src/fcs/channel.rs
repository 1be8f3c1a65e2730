use crate::error::{Error, Result};
use crate::linalg::{self, CMat};

/// Trace-preserving tolerance on `Σ K†K = 1`.
pub const TP_TOLERANCE: f64 = 1e-10;

/// A completely positive map in Kraus form, `x ↦ Σ_k K_k x K_k†`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    input_dim: usize,
    output_dim: usize,
    kraus: Vec<CMat>,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<CMat>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::InvalidChannel("empty Kraus family".into()))?;
        let (output_dim, input_dim) = first.shape();
        if input_dim == 0 || output_dim == 0 {
            return Err(Error::InvalidChannel("zero-dimensional Kraus operator".into()));
        }
        if let Some(k) = kraus.iter().position(|k| k.shape() != (output_dim, input_dim)) {
            return Err(Error::InvalidChannel(format!(
                "Kraus operator {k} is {:?}, expected {output_dim}x{input_dim}",
                kraus[k].shape()
            )));
        }
        if kraus.iter().any(|k| k.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())) {
            return Err(Error::InvalidChannel("non-finite Kraus entry".into()));
        }
        let mut sum = CMat::zeros(input_dim, input_dim);
        for k in &kraus {
            sum += k.adjoint() * k;
        }
        let deviation = linalg::max_abs(&(sum - linalg::identity(input_dim)));
        if deviation > TP_TOLERANCE {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(QuantumChannel { input_dim, output_dim, kraus })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    pub fn kraus_count(&self) -> usize {
        self.kraus.len()
    }

    pub fn apply(&self, x: &CMat) -> Result<CMat> {
        if x.shape() != (self.input_dim, self.input_dim) {
            return Err(Error::DimensionMismatch(format!(
                "channel input is {0}x{0}, got {1:?}",
                self.input_dim,
                x.shape()
            )));
        }
        let mut out = CMat::zeros(self.output_dim, self.output_dim);
        for k in &self.kraus {
            out += k * x * k.adjoint();
        }
        Ok(out)
    }

    /// Equivalent Kraus family of minimal length (the Kraus rank).
    pub fn minimal_kraus(&self) -> Vec<CMat> {
        let (rows, cols) = (self.output_dim, self.input_dim);
        let entries = rows * cols;
        let stacked = CMat::from_fn(entries, self.kraus.len(), |e, k| self.kraus[k][(e / cols, e % cols)]);
        let svd = stacked.svd(true, false);
        let u = svd.u.expect("requested U");
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        order
            .into_iter()
            .filter(|&j| svd.singular_values[j] > 1e-12 * smax)
            .map(|j| {
                let s = svd.singular_values[j];
                CMat::from_fn(rows, cols, |r, c| u[(r * cols + c, j)] * s)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, r};

    #[test]
    fn rejects_non_trace_preserving() {
        let k = linalg::identity(2) * r(0.9);
        assert!(matches!(QuantumChannel::new(vec![k]), Err(Error::NotTracePreserving { .. })));
        assert!(QuantumChannel::new(vec![]).is_err());
        assert!(QuantumChannel::new(vec![linalg::identity(2), linalg::identity(3)]).is_err());
    }

    #[test]
    fn minimal_kraus_merges_redundant_terms() {
        // Two copies of the same unitary, each weighted 1/2, are one Kraus operator.
        let u = CMat::from_fn(2, 2, |i, j| if i == j { c(0.0, 1.0) } else { r(0.0) });
        let ch = QuantumChannel::new(vec![&u * r(0.5f64.sqrt()), &u * r(0.5f64.sqrt())]).unwrap();
        let minimal = ch.minimal_kraus();
        assert_eq!(minimal.len(), 1);
        let merged = QuantumChannel::new(minimal).unwrap();
        let x = CMat::from_fn(2, 2, |i, j| c(i as f64 + 0.5, j as f64 - 0.25));
        assert!(linalg::max_abs(&(merged.apply(&x).unwrap() - ch.apply(&x).unwrap())) < 1e-14);
    }
}
