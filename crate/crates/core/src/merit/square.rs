//! The square cell: four copies of `phi` on a square, an entangled pair is
//! wanted on one diagonal. A first swap `M1` at one corner leaves `alpha`
//! on the diagonal, a second swap `M2` at the opposite corner leaves `beta`,
//! and the two are distilled with `psi0 = max{1/2, alpha0 beta0}`.
//!
//! For fixed `alpha` the second stage is a two-repeater problem:
//! `S_tri(alpha0) = 2 alpha1 + alpha0 S2(phi, phi, gamma0 = 1/(2 alpha0))`.

use super::optimize::{maximize_over_measurements, OptimizerConfig, Optimum};
use super::two_repeater::{bell_seeds, two_repeater_bell_scp, TableRow};
use crate::measurement::{bell_from_probabilities, prob_interval, swap, ProjectiveMeasurement};
use crate::scalar::Real;
use crate::states::PureState;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SquarePlan<S> {
    pub phi0: S,
    /// Largest `phi0` for which two XZ swaps and a distillation give a singlet.
    pub phi0_star65: S,
    /// Largest `phi0` for which three outcomes can sit at `p_star`.
    pub phi0_star664: S,
    pub pstar_sq: S,
    pub regime: TableRow,
    pub probs: [S; 4],
    pub scp_bell: S,
    pub scp_numeric: Option<S>,
}

/// `(1 + sqrt(1 - sqrt(2 (sqrt 2 - 1)))) / 2`.
pub fn square_phi0_star<S: Real>() -> S {
    let two = S::lit(2.0);
    (S::one() + (S::one() - (two * (two.sqrt() - S::one())).sqrt()).sqrt()) / two
}

/// `1 / (1 + sqrt(1 - (4 phi0 phi1)^2))`: below this `alpha0` the second
/// stage reaches a singlet with certainty.
pub fn square_alpha0_star<S: Real>(phi: &PureState<S>) -> S {
    let x = S::lit(4.0) * phi.s0() * phi.s1();
    S::one() / (S::one() + (S::one() - x * x).max(S::zero()).sqrt())
}

/// `phi0 phi1 / (2 sqrt(alpha0* alpha1*))`.
pub fn square_pstar<S: Real>(phi: &PureState<S>) -> S {
    let a0 = square_alpha0_star(phi);
    phi.s0() * phi.s1() / (S::lit(2.0) * (a0 * (S::one() - a0)).sqrt())
}

/// Best SCP of the second stage and distillation, given the first outcome
/// `alpha0`, over Bell measurements.
pub fn square_triangle_scp<S: Real>(alpha0: S, phi: &PureState<S>) -> S {
    let alpha0 = alpha0.max(S::lit(0.5)).min(S::one());
    if alpha0 <= square_alpha0_star(phi) + S::tolerance(1e-12) {
        return S::one();
    }
    let gamma = PureState::new(S::one() / (S::lit(2.0) * alpha0)).expect("1/(2 alpha0) lies in [1/2, 1]");
    let s2 = two_repeater_bell_scp(phi, phi, &gamma);
    (S::lit(2.0) * (S::one() - alpha0) + alpha0 * s2).unit_clamp()
}

/// SCP contributed by a Bell outcome of probability `p` in the first swap.
fn square_h<S: Real>(p: S, phi: &PureState<S>) -> S {
    if p <= S::zero() {
        return S::zero();
    }
    let c = (phi.s0() * phi.s1() / p).unit_clamp();
    let alpha1 = S::one_minus_sqrt_one_minus(c * c) / S::lit(2.0);
    p * square_triangle_scp(S::one() - alpha1, phi)
}

/// Crossover `phi0` where `1 - 3 p_star = pmax`, above which Bell
/// measurements stop being optimal.
pub fn square_crossover_phi0() -> f64 {
    let f = |x: f64| {
        let phi = PureState::new(x).expect("in range");
        let iv = prob_interval(&phi, &phi);
        1.0 - 3.0 * square_pstar(&phi) - iv.pmax
    };
    let (mut lo, mut hi) = (square_phi0_star::<f64>() + 1e-9, 1.0 - 1e-9);
    let flo = f(lo);
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if f(m).signum() == flo.signum() {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

pub fn square_plan<S: Real>(phi: &PureState<S>) -> SquarePlan<S> {
    let iv = prob_interval(phi, phi);
    let pstar = square_pstar(phi);
    let regime = TableRow::select(pstar, iv.pmin, iv.pmax);
    let probs = regime.probabilities(pstar, iv.pmin, iv.pmax);
    let scp = probs.iter().fold(S::zero(), |acc, &p| acc + square_h(p, phi));
    SquarePlan {
        phi0: phi.s0(),
        phi0_star65: square_phi0_star(),
        phi0_star664: S::lit(square_crossover_phi0()),
        pstar_sq: pstar,
        regime,
        probs,
        scp_bell: scp.unit_clamp(),
        scp_numeric: None,
    }
}

/// SCP of a first measurement `m`, each outcome followed by the best Bell
/// second stage.
pub fn square_bell_scp<S: Real>(phi: &PureState<S>, m: &ProjectiveMeasurement<S>) -> S {
    let e = swap(phi, phi, m);
    e.iter()
        .filter(|o| o.prob > S::zero())
        .fold(S::zero(), |acc, o| acc + o.prob * square_triangle_scp(o.state.s0(), phi))
        .unit_clamp()
}

/// Numeric optimum over general first measurements.
pub fn square_numeric_scp_with(phi: &PureState<f64>, cfg: &OptimizerConfig) -> Optimum {
    let plan = square_plan(phi);
    let seeds = bell_seeds(bell_from_probabilities(plan.probs, phi, phi).ok());
    maximize_over_measurements(|m| square_bell_scp(phi, m), &seeds, cfg)
}

pub fn square_numeric_scp(phi: &PureState<f64>) -> f64 {
    square_numeric_scp_with(phi, &OptimizerConfig::default()).value
}
