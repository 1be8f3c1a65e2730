//! Gibbs states of finite-range lattice Hamiltonians and their boundary laws.

mod classical;
mod geometry;
mod hamiltonian;
pub mod models;
mod quantum;

pub use classical::{
    classical_area_check, conditional_markov_check, conditional_markov_deviation, ClassicalAreaReport,
    ClassicalDistribution, ClassicalGibbs,
};
pub(crate) use classical::check_beta;
pub use geometry::Geometry;
pub use hamiltonian::{BoundarySplit, Coupling, LatticeHamiltonian, LocalTerm};
pub use quantum::{
    build_gibbs, free_energy, free_energy_comparison, quantum_thermal_area_check, series_reconstruction_error,
    FreeEnergyComparison, GibbsState, HamiltonianSpectrum, QuantumAreaReport, QuantumGibbs,
};
