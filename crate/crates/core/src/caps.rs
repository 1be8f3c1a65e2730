//! Desk-scale size limits.

use crate::error::{Error, Result};

/// Default cap on dense Hilbert-space dimension.
pub const DEFAULT_DIM_CAP: u128 = 1 << 14;
/// Default cap on the number of enumerated classical configurations.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 24;

pub const DIM_CAP_ENV: &str = "AREALAW_DIM_CAP";
pub const ENUMERATION_CAP_ENV: &str = "AREALAW_ENUM_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub dim: u128,
    pub enumeration: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { dim: DEFAULT_DIM_CAP, enumeration: DEFAULT_ENUMERATION_CAP }
    }
}

impl Caps {
    /// Defaults overridden by `AREALAW_DIM_CAP` / `AREALAW_ENUM_CAP` when set.
    pub fn from_env() -> Self {
        let read = |key: &str, fallback: u128| {
            std::env::var(key).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(fallback)
        };
        Caps {
            dim: read(DIM_CAP_ENV, DEFAULT_DIM_CAP),
            enumeration: read(ENUMERATION_CAP_ENV, DEFAULT_ENUMERATION_CAP),
        }
    }

    pub fn check_dim(&self, dim: u128) -> Result<()> {
        if dim > self.dim {
            return Err(Error::DimensionCap { dim, cap: self.dim });
        }
        Ok(())
    }

    pub fn check_enumeration(&self, count: u128) -> Result<()> {
        if count > self.enumeration {
            return Err(Error::DimensionCap { dim: count, cap: self.enumeration });
        }
        Ok(())
    }
}

/// `base^exp` without overflow; saturates at `u128::MAX`.
pub fn checked_power(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

/// Process-wide caps, read once from the environment.
pub fn global() -> Caps {
    static CAPS: std::sync::OnceLock<Caps> = std::sync::OnceLock::new();
    *CAPS.get_or_init(Caps::from_env)
}
