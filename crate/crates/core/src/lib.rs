//! Unambiguous identification of unknown quantum states.
//!
//! * [`coherent`] propagates coherent states through beamsplitter networks
//!   and samples ideal photodetectors.
//! * [`strategies`] holds the closed-form success curves of the competing
//!   identification schemes for coherent states.
//! * [`povm`] builds and certifies finite-dimensional measurements on three
//!   qudits.
//! * [`fock`] checks the coherent-state comparator in a truncated Fock space.
//! * [`database`] generalises the beamsplitter scheme to `N` references.
//! * [`verify`] bundles the certification checks into machine-readable
//!   reports.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`.

pub mod coherent;
pub mod database;
pub mod error;
pub mod fock;
pub mod povm;
pub mod rng;
pub mod scalar;
pub mod stats;
pub mod strategies;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Amplitude = coherent::ComplexAmplitude<f64>;
pub type Amplitude32 = coherent::ComplexAmplitude<f32>;
pub type Register = coherent::CoherentRegister<f64>;
pub type Register32 = coherent::CoherentRegister<f32>;
pub type Beamsplitter = coherent::BeamsplitterOp<f64>;
pub type OpticalCircuit = coherent::Circuit<f64>;
pub type OpticalCircuit32 = coherent::Circuit<f32>;
pub type Priors64 = strategies::Priors<f64>;
pub type Operator = povm::DenseOperator<f64>;
pub type Povm = povm::DensePovm<f64>;
pub type FockVec = fock::FockVector<f64>;
pub type FockOp = fock::FockOperator<f64>;
pub type Database = database::DatabaseSpec<f64>;
