//! Exact dynamics of two entangled qubits, each coupled by energy exchange to
//! its own open XX spin chain.
//!
//! The single-qubit reduced dynamics is obtained from the Heisenberg evolution
//! of the qubit's Jordan-Wigner Majorana operators, which is linear and is
//! resummed through the singular value decomposition of the tridiagonal
//! hopping matrix of qubit + chain. Chain ground-state correlators come from
//! the free-fermion solution of the XX chain. The two-qubit state follows by
//! composing the two single-qubit channels.
//!
//! All numerical code is generic over the scalar type (`f32` or `f64`); the
//! `*64` aliases below are what the CLI and the tolerance-bearing tests use.

pub mod analytic;
pub mod chain;
pub mod channel;
pub mod entanglement;
mod error;
pub mod oracle;
mod scalar;
pub mod spectral;
pub mod special;

pub use error::{Error, Result};
pub use scalar::{cabs, Real};

pub use chain::{GroundStateCorrelators, ModeBasis};
pub use channel::{BlochAffineMap, ChannelTensor, SubsystemModel};
pub use entanglement::{BellKind, ConcurrenceTrace, PairModel, TwoQubitState};
pub use spectral::{HoppingMatrix, PropagatorCoefficients, SpectralDecomposition, SubsystemSpec};

pub type SubsystemSpec64 = SubsystemSpec<f64>;
pub type HoppingMatrix64 = HoppingMatrix<f64>;
pub type SpectralDecomposition64 = SpectralDecomposition<f64>;
pub type PropagatorCoefficients64 = PropagatorCoefficients<f64>;
pub type ModeBasis64 = ModeBasis<f64>;
pub type GroundStateCorrelators64 = GroundStateCorrelators<f64>;
pub type BlochAffineMap64 = BlochAffineMap<f64>;
pub type ChannelTensor64 = ChannelTensor<f64>;
pub type SubsystemModel64 = SubsystemModel<f64>;
pub type TwoQubitState64 = TwoQubitState<f64>;
pub type ConcurrenceTrace64 = ConcurrenceTrace<f64>;
pub type PairModel64 = PairModel<f64, SubsystemModel<f64>>;

pub type SubsystemSpec32 = SubsystemSpec<f32>;
pub type SubsystemModel32 = SubsystemModel<f32>;
