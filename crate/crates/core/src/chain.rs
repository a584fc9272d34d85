//! Repeater chains: `N` repeaters joining `N + 1` identical bonds `phi`.
//!
//! Swaps are performed left to right. Each repeater measures in its basis
//! expressed in the Schmidt frames of the two states it joins, so an
//! outcome only matters through its Schmidt coefficients and equal states
//! can be merged.

use std::ops::RangeInclusive;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::measurement::{swap, OutcomeEnsemble, ProjectiveMeasurement, SwapOutcome};
use crate::scalar::Real;
use crate::states::PureState;

/// Largest chain accepted by [`enumerate_chain`].
pub const MAX_ENUMERATED_REPEATERS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainSpec<S> {
    pub n_repeaters: usize,
    pub state: PureState<S>,
}

impl<S: Real> ChainSpec<S> {
    pub fn new(n_repeaters: usize, state: PureState<S>) -> Self {
        Self { n_repeaters, state }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChainStrategy {
    /// Convert every bond to a singlet, then swap singlets.
    Cs,
    /// XZ swaps at every repeater.
    Xz,
    /// ZZ swaps at every repeater.
    Zz,
}

impl std::str::FromStr for ChainStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cs" => Ok(Self::Cs),
            "xz" => Ok(Self::Xz),
            "zz" => Ok(Self::Zz),
            other => Err(Error::InvalidInput(format!("unknown chain strategy '{other}' (cs, xz, zz)"))),
        }
    }
}

/// Exact outcome ensemble of the chain. `bases` holds one measurement per
/// repeater, or a single one used everywhere.
pub fn enumerate_chain<S: Real>(spec: &ChainSpec<S>, bases: &[ProjectiveMeasurement<S>]) -> Result<OutcomeEnsemble<S>> {
    let n = spec.n_repeaters;
    if n > MAX_ENUMERATED_REPEATERS {
        return Err(Error::TooLarge { what: "repeaters for exact enumeration", got: n, max: MAX_ENUMERATED_REPEATERS });
    }
    if n > 0 && bases.len() != 1 && bases.len() != n {
        return Err(Error::InvalidInput(format!("{} bases given for {n} repeaters", bases.len())));
    }
    let phi = spec.state;
    let mut ensemble = OutcomeEnsemble::certain(phi);
    for k in 0..n {
        let basis = if bases.len() == 1 { &bases[0] } else { &bases[k] };
        let mut next = Vec::with_capacity(ensemble.len() * 4);
        for o in ensemble.iter().filter(|o| o.prob > S::zero()) {
            for r in swap(&o.state, &phi, basis).iter() {
                next.push(SwapOutcome { prob: o.prob * r.prob, ..*r });
            }
        }
        ensemble = OutcomeEnsemble::new_unchecked(next).merged();
    }
    Ok(ensemble)
}

/// `C(2k, k)`.
fn central_binomial<S: Real>(k: usize) -> S {
    if k <= 30 {
        let mut c: u128 = 1;
        for i in 0..k as u128 {
            // C(2(i+1), i+1) = C(2i, i) (2i+1)(2i+2) / (i+1)^2
            c = c * (2 * i + 1) * (2 * i + 2) / ((i + 1) * (i + 1));
        }
        S::from_u128(c).expect("representable")
    } else {
        S::lit(ln_central_binomial(k).exp())
    }
}

fn ln_central_binomial(k: usize) -> f64 {
    ln_gamma(2.0 * k as f64 + 1.0) - 2.0 * ln_gamma(k as f64 + 1.0)
}

/// `(phi0 phi1)^k C(2k, k)`, the probability mass at a singlet after
/// `2k + 1` ZZ swaps.
fn zz_term<S: Real>(k: usize, x: S) -> S {
    if k <= 30 {
        x.powi(k as i32) * central_binomial::<S>(k)
    } else if x <= S::zero() {
        S::zero()
    } else {
        S::lit((k as f64 * x.as_f64().ln() + ln_central_binomial(k)).exp())
    }
}

/// `1 - (phi0 - phi1) sum_{k=0}^{[N/2]} (phi0 phi1)^k C(2k, k)`.
pub fn scp_zz_closed_form<S: Real>(n: usize, phi: &PureState<S>) -> S {
    let d = phi.s0() - phi.s1();
    if d <= S::zero() {
        return S::one();
    }
    let x = phi.s0() * phi.s1();
    let mut head = S::zero();
    for k in 0..=n / 2 {
        head = head + zz_term(k, x);
    }
    let s = S::one() - d * head;
    if s > S::lit(1e-6) {
        return s.unit_clamp();
    }
    // small values: sum the tail, the full series being 1/(phi0 - phi1)
    let mut tail = S::zero();
    let mut k = n / 2 + 1;
    loop {
        let t = zz_term(k, x);
        tail = tail + t;
        if t <= tail * S::epsilon() || k > n / 2 + 10_000_000 {
            break;
        }
        k += 1;
    }
    (d * tail).unit_clamp()
}

/// One label of the ZZ walk with its probability. Label `m` is the state
/// with Schmidt weights proportional to `(phi0^m, phi1^m)`; `m = 0` is a
/// singlet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZzWalkState<S> {
    pub m: usize,
    pub prob: S,
}

/// `phi1^m / (phi0^m + phi1^m)`, the smaller Schmidt coefficient of label `m`.
pub fn zz_label_s1<S: Real>(m: usize, phi: &PureState<S>) -> S {
    if phi.s0() <= S::zero() {
        return S::lit(0.5);
    }
    let r = (phi.s1() / phi.s0()).powi(m as i32);
    r / (S::one() + r)
}

/// Probability of stepping from label `m` to `m + 1`.
pub fn zz_p_plus<S: Real>(m: usize, phi: &PureState<S>) -> S {
    let r = (phi.s1() / phi.s0()).powi(m as i32);
    (phi.s0() + phi.s1() * r) / (S::one() + r)
}

/// Label distribution after `N` ZZ swaps, starting from label 1.
pub fn zz_walk<S: Real>(spec: &ChainSpec<S>) -> Vec<ZzWalkState<S>> {
    let n = spec.n_repeaters;
    let phi = &spec.state;
    let mut dist = vec![S::zero(); n + 2];
    dist[1] = S::one();
    for _ in 0..n {
        let mut next = vec![S::zero(); n + 2];
        for (m, &q) in dist.iter().enumerate() {
            if q == S::zero() {
                continue;
            }
            let up = zz_p_plus(m, phi);
            next[m + 1] = next[m + 1] + q * up;
            let down = if m == 0 { 1 } else { m - 1 };
            next[down] = next[down] + q * (S::one() - up);
        }
        dist = next;
    }
    dist.into_iter().enumerate().filter(|(_, p)| *p > S::zero()).map(|(m, prob)| ZzWalkState { m, prob }).collect()
}

/// `2 sum prob s1(m)` over a walk distribution.
pub fn zz_walk_scp<S: Real>(walk: &[ZzWalkState<S>], phi: &PureState<S>) -> S {
    let s = walk.iter().fold(S::zero(), |acc, w| acc + w.prob * zz_label_s1(w.m, phi));
    (S::lit(2.0) * s).unit_clamp()
}

/// SCP of the whole chain under a fixed strategy.
pub fn strategy_scp<S: Real>(spec: &ChainSpec<S>, strategy: ChainStrategy) -> S {
    let phi = &spec.state;
    let n = spec.n_repeaters;
    match strategy {
        ChainStrategy::Cs => phi.scp().powi(n as i32 + 1),
        ChainStrategy::Xz => {
            let w = S::lit(16.0) * phi.s0() * phi.s1();
            let mut lambda = phi.s1();
            for _ in 0..n {
                lambda = S::one_minus_sqrt_one_minus(w * lambda * (S::one() - lambda)) / S::lit(2.0);
            }
            (S::lit(2.0) * lambda).unit_clamp()
        }
        ChainStrategy::Zz => scp_zz_closed_form(n, phi),
    }
}

/// Least-squares slope of `ln S` against `N`, fitted over the upper half
/// of `n_range`.
pub fn decay_rate(strategy: ChainStrategy, phi: &PureState<f64>, n_range: RangeInclusive<usize>) -> Result<f64> {
    let (lo, hi) = (*n_range.start(), *n_range.end());
    if hi < lo || hi - lo + 1 < 10 {
        return Err(Error::InvalidInput(format!("n_range {lo}..={hi} must span at least 10 values")));
    }
    let start = lo + (hi - lo + 1) / 2;
    let pts: Vec<(f64, f64)> = (start..=hi)
        .map(|n| (n as f64, strategy_scp(&ChainSpec::new(n, *phi), strategy).ln()))
        .collect();
    if pts.iter().any(|p| !p.1.is_finite()) {
        return Err(Error::Infeasible(format!("SCP vanishes on {start}..={hi}; no finite log-slope")));
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / m, sy / m);
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + (p.0 - mx) * (p.1 - my), b + (p.0 - mx).powi(2)));
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::merit::merits;

    fn st(s0: f64) -> PureState<f64> {
        PureState::new(s0).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        assert!((scp_zz_closed_form(1, &st(0.7)) - 0.6).abs() < 1e-15);
        assert!((scp_zz_closed_form(2, &st(0.7)) - 0.432).abs() < 1e-15);
        assert!((scp_zz_closed_form(3, &st(0.7)) - 0.432).abs() < 1e-15);
        for n in [0, 1, 5, 40] {
            assert_eq!(scp_zz_closed_form(n, &st(0.5)), 1.0);
        }
    }

    #[test]
    fn enumeration_examples() {
        let zz = [ProjectiveMeasurement::zz()];
        let e = enumerate_chain(&ChainSpec::new(0, st(0.7)), &zz).unwrap();
        assert_eq!(e.len(), 1);
        let s = |n| merits(&enumerate_chain(&ChainSpec::new(n, st(0.7)), &zz).unwrap()).unwrap().scp;
        assert!((s(1) - 0.6).abs() < 1e-12);
        assert!((s(2) - 0.432).abs() < 1e-12);
        assert!(enumerate_chain(&ChainSpec::new(13, st(0.7)), &zz).is_err());
    }

    #[test]
    fn binomial_switchover_is_continuous() {
        for k in 25..=35 {
            let exact = ln_central_binomial(k).exp();
            let used: f64 = central_binomial(k);
            assert!((used / exact - 1.0).abs() < 1e-12, "k={k}");
        }
        assert_eq!(central_binomial::<f64>(30), 118264581564861424.0);
    }

    #[test]
    fn walk_examples() {
        let w = zz_walk(&ChainSpec::new(1, st(0.7)));
        let at0 = w.iter().find(|s| s.m == 0).unwrap().prob;
        assert!((at0 - 0.42).abs() < 1e-15);
        assert!((zz_p_plus(1, &st(0.7)) - 0.58).abs() < 1e-15);
        let w = zz_walk(&ChainSpec::new(7, st(1.0)));
        assert_eq!(w.len(), 1);
        assert_eq!(zz_walk_scp(&w, &st(1.0)), 0.0);
    }

    #[test]
    fn strategy_examples() {
        let spec = ChainSpec::new(3, st(0.7));
        assert!((strategy_scp(&spec, ChainStrategy::Cs) - 0.6f64.powi(4)).abs() < 1e-15);
        let spec = ChainSpec::new(2, st(0.7));
        let once = 1.0 - (1.0f64 - 16.0 * 0.21 * 0.21).sqrt();
        let psi1 = once / 2.0;
        let twice = 1.0 - (1.0 - 16.0 * 0.21 * psi1 * (1.0 - psi1)).sqrt();
        assert!((strategy_scp(&spec, ChainStrategy::Xz) - twice).abs() < 1e-12);
    }

    #[test]
    fn decay_rate_examples() {
        let r = decay_rate(ChainStrategy::Cs, &st(0.7), 1..=40).unwrap();
        assert!((r - 0.6f64.ln()).abs() < 1e-10);
        assert!(decay_rate(ChainStrategy::Cs, &st(0.7), 1..=5).is_err());
    }
}
