//! Bond percolation on 2D lattices, and the swap-based rewirings that beat
//! classical entanglement percolation.

mod lattice;
mod monte_carlo;

pub use lattice::{
    transform_asymmetric_triangular, transform_honeycomb_to_triangular, transform_square_doubling, Bond, Boundary,
    LatticeGraph, LatticeKind, MAX_L,
};
pub use monte_carlo::{
    central_pair, doubling_comparison, run_percolation, run_percolation_pair, tau_estimate, tau_estimate_with,
    tau_lower_bound, BondSampler, DoublingReport, Estimate, TauPair, TrialStats, MAX_TRIALS,
};

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Bond percolation threshold of `kind`.
pub fn classical_threshold(kind: LatticeKind) -> Result<f64> {
    let s = 2.0 * (PI / 18.0).sin();
    match kind {
        LatticeKind::Triangular => Ok(s),
        LatticeKind::Square | LatticeKind::SquareDoubledPair => Ok(0.5),
        LatticeKind::Honeycomb => Ok(1.0 - s),
        other => Err(Error::InvalidInput(format!("no closed-form threshold for {other:?}"))),
    }
}

/// Critical SCP `2 phi1` of a doubled honeycomb lattice under three
/// strategies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrategyThresholds {
    /// Each doubled bond used as two independent chances.
    pub naive: f64,
    /// Each doubled bond distilled to one bond first.
    pub cep: f64,
    /// Swaps at every other node giving a triangular lattice.
    pub quantum: f64,
}

impl StrategyThresholds {
    pub fn as_pairs(&self) -> [(&'static str, f64); 3] {
        [("naive", self.naive), ("cep", self.cep), ("quantum", self.quantum)]
    }
}

pub fn strategy_thresholds() -> StrategyThresholds {
    let s = (PI / 18.0).sin();
    StrategyThresholds {
        naive: 1.0 - (2.0 * s).sqrt(),
        cep: 2.0 * (1.0 - (0.5 + s).sqrt()),
        quantum: 2.0 * s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert!((classical_threshold(LatticeKind::Triangular).unwrap() - 0.34730).abs() < 1e-5);
        assert_eq!(classical_threshold(LatticeKind::Square).unwrap(), 0.5);
        assert!((classical_threshold(LatticeKind::Honeycomb).unwrap() - 0.65270).abs() < 1e-5);
        assert!(classical_threshold(LatticeKind::AsymmetricTriangular).is_err());
        let t = strategy_thresholds();
        assert!((t.naive - 0.41068).abs() < 1e-5);
        assert!((t.cep - 0.35848).abs() < 1e-5);
        assert!((t.quantum - 0.34730).abs() < 1e-5);
        assert!(t.quantum < t.cep && t.cep < t.naive);
    }
}
