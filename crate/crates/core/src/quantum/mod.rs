//! Dense state-vector kernel.

mod density;
mod ising;
mod operator;
mod propagator;
mod spectrum;
mod state;

pub use density::{
    bipartite_entropy, leading_block_density, reduced_density, von_neumann_entropy, DensityMatrix,
};
pub use ising::IsingOperator;
pub use operator::{expectation, DenseHermitian, Pauli, PauliString};
pub use propagator::{bessel_j_sequence, propagate, ChebyshevWorkspace};
pub use spectrum::{diagonalize, eigenvalues, evolve, Spectrum};
pub use state::{fidelity, haar_random_state, StateVector, MAX_QUBITS};

pub(crate) use state::{dim_for, inner_product, qubit_mask};
