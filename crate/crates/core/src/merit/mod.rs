//! Figures of merit of outcome ensembles and the optimal swapping
//! strategies for one repeater, two repeaters and the square cell.

mod optimize;
mod square;
mod two_repeater;

pub use optimize::{maximize_over_measurements, unitary_from_angles, OptimizerConfig, Optimum, Unitary4};
pub use square::{
    square_alpha0_star, square_bell_scp, square_crossover_phi0, square_numeric_scp, square_numeric_scp_with,
    square_phi0_star, square_plan, square_pstar, square_triangle_scp, SquarePlan,
};
pub use two_repeater::{
    two_repeater_bell_plan, two_repeater_bell_scp, two_repeater_h, two_repeater_numeric_scp,
    two_repeater_numeric_scp_with, two_repeater_objective, two_repeater_pstar, window_bounds, TableRow,
    TwoRepeaterPlan,
};

use crate::error::{Error, Result};
use crate::measurement::OutcomeEnsemble;
use crate::scalar::Real;
use crate::states::PureState;

/// Average concurrence, worst-case entanglement and singlet conversion
/// probability of an ensemble.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeritReport<S> {
    pub avg_concurrence: S,
    pub wce: S,
    pub scp: S,
}

/// `C = sum p C_m`, `W = 2 min lambda_m` over outcomes of nonzero
/// probability, `S = 2 sum p lambda_m`.
pub fn merits<S: Real>(e: &OutcomeEnsemble<S>) -> Result<MeritReport<S>> {
    if e.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let two = S::lit(2.0);
    let mut avg = S::zero();
    let mut scp = S::zero();
    let mut min_lambda = S::infinity();
    for o in e.iter() {
        avg = avg + o.prob * o.conc;
        scp = scp + o.prob * o.lambda;
        if o.prob > S::zero() {
            min_lambda = min_lambda.min(o.lambda);
        }
    }
    if min_lambda == S::infinity() {
        min_lambda = S::zero();
    }
    Ok(MeritReport {
        avg_concurrence: avg.unit_clamp(),
        wce: (two * min_lambda).unit_clamp(),
        scp: (two * scp).unit_clamp(),
    })
}

/// `4 sqrt(a0 a1 b0 b1)`, reached by every Bell measurement.
pub fn one_repeater_max_concurrence<S: Real>(a: &PureState<S>, b: &PureState<S>) -> S {
    (S::lit(4.0) * (a.s0() * a.s1() * b.s0() * b.s1()).sqrt()).unit_clamp()
}

/// `1 - sqrt(1 - 16 a0 a1 b0 b1)`, reached by the XZ Bell measurement.
pub fn one_repeater_max_wce<S: Real>(a: &PureState<S>, b: &PureState<S>) -> S {
    S::one_minus_sqrt_one_minus(S::lit(16.0) * a.s0() * a.s1() * b.s0() * b.s1())
}

/// `2 min{a1, b1}`, reached by the ZZ Bell measurement.
pub fn one_repeater_max_scp<S: Real>(a: &PureState<S>, b: &PureState<S>) -> S {
    (S::lit(2.0) * a.s1().min(b.s1())).unit_clamp()
}
