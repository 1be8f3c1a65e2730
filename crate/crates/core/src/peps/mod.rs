//! Tensor-network form of Gibbs states of commuting pair interactions.
//!
//! Each Boltzmann factor `exp(−βh/2)` is split by an operator Schmidt
//! decomposition; collecting the factors acting on one site gives a tensor
//! with bond dimension `d²` and a physical index `(i₁, i₂)`, the second being
//! an environment copy that is traced out.

mod network;
mod schmidt;

pub use network::{
    build_gibbs_tensor_1d, build_gibbs_tensor_2d, peps_area_check_mixed, ContractedNetwork, GibbsMpo,
    GibbsPepsTensor, PepsAreaReport, COMMUTATION_TOLERANCE, MAX_PATCH_SITES,
};
pub use schmidt::{operator_schmidt, OperatorSchmidt, SchmidtFactor, RANK_CUT};
