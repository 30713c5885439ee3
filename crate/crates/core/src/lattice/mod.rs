//! Bosonic two-level atoms in an optical lattice. A qubit is an aggregate
//! of `n` atoms on one site with `|0⟩ = (n, 0)` and `|1⟩ = (n − 1, 1)` in
//! `(n_a, n_b)` notation.

mod effective;
mod fock;
mod hamiltonian;
mod simulate;

pub use effective::{
    conditional_shift, delta_shift, effective_hamiltonian_2nd_order, effective_hamiltonian_unchecked,
    effective_qubit_model, effective_rabi, reduced_delta, EffectiveBlock, EffectiveQubitModel, DEFAULT_GAP_RATIO,
};
pub use fock::{build_fock_basis, qubit_projector, FockBasis, SiteOccupation};
pub use hamiltonian::{
    diagonal_energy, single_site_hamiltonian, single_site_hamiltonian_in, site_level_energy, two_site_hamiltonian,
    LatticeParams,
};
pub use simulate::{simulate_lattice_cnot, simulate_lattice_gate, LatticeReport, LatticeSetup, SimMode};
