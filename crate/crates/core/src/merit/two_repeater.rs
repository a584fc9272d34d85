//! Two repeaters: states `a`, `b`, `c` in a line, first swap on `(a, b)`,
//! second swap in the ZZ basis with `c`.
//!
//! Over Bell measurements the SCP is `sum_m h(p_m)` with
//! `h(p) = min{2 c1 p, p - sqrt(p^2 - a0 a1 b0 b1)}`; the two branches
//! cross at `p* = sqrt(a0 a1 b0 b1 / (c0 c1)) / 2`.

use super::optimize::{maximize_over_measurements, unitary_of, OptimizerConfig, Optimum, Unitary4};
use crate::measurement::{bell_from_probabilities, prob_interval, swap, ProjectiveMeasurement};
use crate::scalar::Real;
use crate::states::PureState;

/// Which shape the optimal Bell distribution takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableRow {
    /// `{pmin, pmin, pmax, pmax}`: the ZZ basis.
    Endpoints,
    /// `{p*, p*, pmax, 1 - 2p* - pmax}`.
    PairAtPstar,
    /// `{p*, p*, p*, 1 - 3p*}`.
    TripleAtPstar,
    /// `{1/4, 1/4, 1/4, 1/4}`: the XZ basis.
    Uniform,
}

impl TableRow {
    pub fn index(self) -> usize {
        match self {
            TableRow::Endpoints => 1,
            TableRow::PairAtPstar => 2,
            TableRow::TripleAtPstar => 3,
            TableRow::Uniform => 4,
        }
    }

    /// Row selection for crossing point `pstar` in `[pmin, pmax]`; the
    /// boundaries belong to the lower row.
    pub(crate) fn select<S: Real>(pstar: S, pmin: S, pmax: S) -> Self {
        let quarter = S::lit(0.25);
        if pstar <= pmin {
            TableRow::Endpoints
        } else if pstar <= (S::one() - pmax) / S::lit(3.0) {
            TableRow::PairAtPstar
        } else if pstar <= quarter {
            TableRow::TripleAtPstar
        } else {
            TableRow::Uniform
        }
    }

    pub(crate) fn probabilities<S: Real>(self, pstar: S, pmin: S, pmax: S) -> [S; 4] {
        let one = S::one();
        match self {
            TableRow::Endpoints => [pmin, pmin, pmax, pmax],
            TableRow::PairAtPstar => [pstar, pstar, pmax, one - S::lit(2.0) * pstar - pmax],
            TableRow::TripleAtPstar => [pstar, pstar, pstar, one - S::lit(3.0) * pstar],
            TableRow::Uniform => [S::lit(0.25); 4],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoRepeaterPlan<S> {
    pub pstar: S,
    pub regime: TableRow,
    pub probs: [S; 4],
    pub scp_bell: S,
    pub scp_numeric: Option<S>,
}

/// `sqrt(a0 a1 b0 b1 / (c0 c1)) / 2`; infinite when `c` is a product state.
pub fn two_repeater_pstar<S: Real>(a: &PureState<S>, b: &PureState<S>, c: &PureState<S>) -> S {
    let num = a.s0() * a.s1() * b.s0() * b.s1();
    let den = c.s0() * c.s1();
    if den <= S::zero() {
        return S::infinity();
    }
    (num / den).sqrt() / S::lit(2.0)
}

/// SCP contributed by a Bell outcome of probability `p`.
pub fn two_repeater_h<S: Real>(p: S, a: &PureState<S>, b: &PureState<S>, c: &PureState<S>) -> S {
    let big_a = a.s0() * a.s1() * b.s0() * b.s1();
    let f = S::lit(2.0) * c.s1() * p;
    // p - sqrt(p^2 - A) without cancellation
    let root = (p * p - big_a).max(S::zero()).sqrt();
    let g = if p + root > S::zero() { big_a / (p + root) } else { S::zero() };
    f.min(g).max(S::zero())
}

pub fn two_repeater_bell_plan<S: Real>(a: &PureState<S>, b: &PureState<S>, c: &PureState<S>) -> TwoRepeaterPlan<S> {
    let iv = prob_interval(a, b);
    let pstar = two_repeater_pstar(a, b, c);
    let regime = TableRow::select(pstar, iv.pmin, iv.pmax);
    let probs = regime.probabilities(pstar, iv.pmin, iv.pmax);
    let scp = probs.iter().fold(S::zero(), |acc, &p| acc + two_repeater_h(p, a, b, c));
    TwoRepeaterPlan { pstar, regime, probs, scp_bell: scp.unit_clamp(), scp_numeric: None }
}

/// Best SCP over Bell measurements.
pub fn two_repeater_bell_scp<S: Real>(a: &PureState<S>, b: &PureState<S>, c: &PureState<S>) -> S {
    two_repeater_bell_plan(a, b, c).scp_bell
}

/// `2 sum_m p_m min{lambda_m, c1}` for first measurement `m`.
pub fn two_repeater_objective<S: Real>(
    a: &PureState<S>,
    b: &PureState<S>,
    c: &PureState<S>,
    m: &ProjectiveMeasurement<S>,
) -> S {
    let e = swap(a, b, m);
    let s = e.iter().fold(S::zero(), |acc, o| acc + o.prob * o.lambda.min(c.s1()));
    (S::lit(2.0) * s).unit_clamp()
}

/// Seeds shared by the numeric searches: the given Bell plan, ZZ and XZ.
pub(crate) fn bell_seeds(plan_measurement: Option<ProjectiveMeasurement<f64>>) -> Vec<Unitary4> {
    let mut seeds = Vec::new();
    if let Some(m) = plan_measurement {
        seeds.push(unitary_of(&m));
    }
    seeds.push(unitary_of(&ProjectiveMeasurement::zz()));
    seeds.push(unitary_of(&ProjectiveMeasurement::xz()));
    seeds
}

/// Numeric optimum over general first measurements.
pub fn two_repeater_numeric_scp_with(
    a: &PureState<f64>,
    b: &PureState<f64>,
    c: &PureState<f64>,
    cfg: &OptimizerConfig,
) -> Optimum {
    let plan = two_repeater_bell_plan(a, b, c);
    let seeds = bell_seeds(bell_from_probabilities(plan.probs, a, b).ok());
    maximize_over_measurements(|m| two_repeater_objective(a, b, c, m), &seeds, cfg)
}

pub fn two_repeater_numeric_scp(a: &PureState<f64>, b: &PureState<f64>, c: &PureState<f64>) -> f64 {
    two_repeater_numeric_scp_with(a, b, c, &OptimizerConfig::default()).value
}

/// Values of `a0` in `(1/2, 1)` bounding the region where Bell measurements
/// are not optimal: `p*(a1) = (1 - pmax(a1))/3` and `p*(a2) = pmin(a2)`.
/// `None` when either equation has no root.
pub fn window_bounds(b: &PureState<f64>, c: &PureState<f64>) -> Option<(f64, f64)> {
    let eval = |a0: f64| {
        let a = PureState::new(a0).expect("a0 in range");
        let iv = prob_interval(&a, b);
        let ps = two_repeater_pstar(&a, b, c);
        (ps - (1.0 - iv.pmax) / 3.0, ps - iv.pmin)
    };
    let root = |which: usize| {
        // a0 = 1/2 is always a trivial root; scan just above it
        let (lo, hi, n) = (0.5 + 1e-6, 1.0 - 1e-9, 4000);
        let pick = |x: f64| if which == 0 { eval(x).0 } else { eval(x).1 };
        let mut x0 = lo;
        let mut f0 = pick(x0);
        for i in 1..=n {
            let x1 = lo + (hi - lo) * i as f64 / n as f64;
            let f1 = pick(x1);
            if f0 == 0.0 {
                return Some(x0);
            }
            if f0.signum() != f1.signum() {
                let (mut l, mut r, mut fl) = (x0, x1, f0);
                for _ in 0..200 {
                    let m = 0.5 * (l + r);
                    let fm = pick(m);
                    if fm.signum() == fl.signum() {
                        l = m;
                        fl = fm;
                    } else {
                        r = m;
                    }
                    if r - l < 1e-15 {
                        break;
                    }
                }
                return Some(0.5 * (l + r));
            }
            x0 = x1;
            f0 = f1;
        }
        None
    };
    Some((root(0)?, root(1)?))
}
