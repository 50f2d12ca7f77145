//! Spin entanglement of massive particle pairs seen from Lorentz-boosted
//! frames.
//!
//! A rest-frame state `g(p, q) ⊗ |s⟩` is boosted along z, each spin picks
//! up its momentum-dependent Wigner rotation, and the momenta are traced
//! out to give a two-qubit spin density matrix whose concurrence and
//! entropies can then be compared across frames.

pub mod boost_engine;
pub mod distributions;
pub mod entanglement;
pub mod integrate;
pub mod kinematics;
pub mod protocol;
pub mod qmath;
pub mod spin;
mod support;

pub use boost_engine::{
    boost_amplitude, boosted_spin, reduce_single_spin, reduce_spin_density, BipartiteState, BoostError,
    BoostedAmplitude, Particle, SingleSpinDensity, SpinDensityMatrix,
};
pub use distributions::{DistributionError, DistributionKind, MomentumDistribution, RadialProfile};
pub use entanglement::{
    bell_fidelity, concurrence, marginal_entropy, von_neumann_entropy, ConcurrenceResult, EntanglementError, Entropy,
};
pub use integrate::{Backend, Estimate, IntegrationError, IntegratorSpec, RandomStream};
pub use kinematics::{FourMomentum, KinematicsError, Rapidity, WignerMatrix};
pub use protocol::{LogicalOperator, LogicalQubit, LogicalRegister, ProtocolError};
pub use qmath::{ComplexMat2, ComplexMat4, ComplexVec4, C64};
pub use spin::BellState;
