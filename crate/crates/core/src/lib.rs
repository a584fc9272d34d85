//! Entanglement distribution in networks of pure two-qubit states.
//!
//! Bonds are pure states `sqrt(s0)|00> + sqrt(s1)|11>` with `s0 >= s1`.
//! The crate covers entanglement swapping with arbitrary projective
//! measurements, the best measurements for one and two repeaters and for a
//! small square cell, repeater chains, scalar recursions on hierarchical
//! lattices, and bond-percolation Monte Carlo.
//!
//! The closed forms are generic over [`scalar::Real`] (`f32`, `f64`). The
//! numeric searches and Monte Carlo run in `f64`. The aliases at the crate
//! root fix the scalar.

pub mod chain;
pub mod error;
pub mod hierarchical;
pub mod measurement;
pub mod merit;
pub mod percolation;
pub mod scalar;
pub mod states;

pub use error::{Error, Result};
pub use scalar::Real;

pub type PureState = states::PureState<f64>;
pub type TwoQubitVector = states::TwoQubitVector<f64>;
pub type ProjectiveMeasurement = measurement::ProjectiveMeasurement<f64>;
pub type SwapOutcome = measurement::SwapOutcome<f64>;
pub type OutcomeEnsemble = measurement::OutcomeEnsemble<f64>;
pub type MeritReport = merit::MeritReport<f64>;
pub type ChainSpec = chain::ChainSpec<f64>;
pub type RecursionMap = hierarchical::RecursionMap<f64>;

pub type PureState32 = states::PureState<f32>;
pub type ProjectiveMeasurement32 = measurement::ProjectiveMeasurement<f32>;
pub type OutcomeEnsemble32 = measurement::OutcomeEnsemble<f32>;
pub type MeritReport32 = merit::MeritReport<f32>;
