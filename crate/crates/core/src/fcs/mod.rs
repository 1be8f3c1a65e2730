//! Finitely correlated states generated by a channel `T` from a
//! `D`-dimensional memory.

mod analysis;
mod blocks;
mod channel;
mod descriptor;
pub mod presets;

pub use analysis::{
    connected_correlation, factorization_curve, mps_area_check, purify_channel, saturation_detect, BlockPosition,
    CurvePoint, FactorizationCurve, MpsAreaReport, NormBoundFit, SaturationReport, SATURATION_TOLERANCE,
};
pub use blocks::{block_state, block_state_factored, block_state_from, separated_block_state, BlockStates};
pub use channel::{QuantumChannel, TP_TOLERANCE};
pub use descriptor::{correlation_length, FcsDescriptor, TransferSpectrum, ETA_SENTINEL, PERIPHERAL_TOLERANCE};
