//! Projective two-qubit measurements and entanglement swapping.
//!
//! Swapping `|alpha>` (held by A, B) and `|beta>` (held by C, D) with a
//! projective measurement `{|u_m>}` on B, C leaves A and D in the
//! unnormalized state `X_m = hat(alpha) hat(u_m) hat(beta)`. Its
//! probability and entanglement only depend on the Schmidt coefficients and
//! on `|u_m,ij|^2`, `|det hat(u_m)|`:
//!
//! ```text
//! p_m      = sum_ij alpha_i beta_j |u_m,ij|^2
//! C_m      = 2 sqrt(alpha0 alpha1 beta0 beta1) |det hat(u_m)| / p_m
//! lambda_m = (1 - sqrt(1 - C_m^2)) / 2
//! ```

mod bell;
mod construct;

pub use bell::{
    bell_basis, bell_basis_pair, from_magic_basis, magic_basis_vectors, to_magic_basis, MagicBasisVector, Mat2,
};
pub use construct::bell_from_probabilities;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::states::{PureState, TwoQubitVector};

/// Four orthonormal two-qubit vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectiveMeasurement<S> {
    vectors: [TwoQubitVector<S>; 4],
}

impl<S: Real> ProjectiveMeasurement<S> {
    /// Validates orthonormality to `1e-10`.
    pub fn new(vectors: [TwoQubitVector<S>; 4]) -> Result<Self> {
        let m = Self { vectors };
        let dev = m.orthonormality_deviation();
        if !(dev <= S::tolerance(1e-10)) {
            return Err(Error::NotOrthonormal(dev.as_f64()));
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(vectors: [TwoQubitVector<S>; 4]) -> Self {
        Self { vectors }
    }

    /// Uses the columns of a 4x4 unitary (rows indexed `00, 01, 10, 11`).
    pub fn from_unitary_columns(u: &[[Complex<S>; 4]; 4]) -> Result<Self> {
        let col = |m: usize| TwoQubitVector::new([u[0][m], u[1][m], u[2][m], u[3][m]]);
        Self::new([col(0), col(1), col(2), col(3)])
    }

    /// Bell measurement in the computational (ZZ) basis: `Phi+, Phi-, Psi+, Psi-`.
    pub fn zz() -> Self {
        let h = S::FRAC_1_SQRT_2();
        let z = S::zero();
        Self::new_unchecked([
            TwoQubitVector::from_real([h, z, z, h]),
            TwoQubitVector::from_real([h, z, z, -h]),
            TwoQubitVector::from_real([z, h, h, z]),
            TwoQubitVector::from_real([z, h, -h, z]),
        ])
    }

    /// Bell measurement with the first qubit in the `sigma_x` eigenbasis.
    pub fn xz() -> Self {
        let h = S::FRAC_1_SQRT_2();
        let hadamard = [[c(h), c(h)], [c(h), c(-h)]];
        bell_basis(&hadamard).expect("hadamard is unitary")
    }

    pub fn vectors(&self) -> &[TwoQubitVector<S>; 4] {
        &self.vectors
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_deviation(&self) -> S {
        let mut dev = S::zero();
        for i in 0..4 {
            for j in i..4 {
                let g = self.vectors[i].inner(&self.vectors[j]);
                let target = if i == j { S::one() } else { S::zero() };
                dev = dev.max((g - Complex::new(target, S::zero())).norm());
            }
        }
        dev
    }

    /// True when every vector is maximally entangled within `tol`.
    pub fn is_bell(&self, tol: S) -> bool {
        self.vectors.iter().all(|v| (crate::states::concurrence(v) - S::one()).abs() <= tol)
    }

    /// Real magic-basis coordinates of the four vectors (one row per
    /// vector), available when every vector is a Bell state up to phase.
    pub fn magic_matrix(&self, tol: S) -> Option<[[S; 4]; 4]> {
        let mut rows = [[S::zero(); 4]; 4];
        for (row, v) in rows.iter_mut().zip(self.vectors.iter()) {
            *row = to_magic_basis(v).real_coordinates(tol)?;
        }
        Some(rows)
    }
}

#[inline]
pub(crate) fn c<S: Real>(x: S) -> Complex<S> {
    Complex::new(x, S::zero())
}

/// One outcome of a swap: probability, resulting state and its entanglement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SwapOutcome<S> {
    pub prob: S,
    pub state: PureState<S>,
    /// Smaller Schmidt coefficient of the outcome.
    pub lambda: S,
    pub conc: S,
}

impl<S: Real> SwapOutcome<S> {
    /// Outcome carrying `state` with probability `prob`.
    pub fn of_state(prob: S, state: PureState<S>) -> Self {
        Self { prob, state, lambda: state.s1(), conc: state.concurrence() }
    }

    /// Outcome with concurrence `conc`; `lambda` follows from it.
    pub fn from_concurrence(prob: S, conc: S) -> Self {
        let conc = conc.unit_clamp();
        let lambda = S::one_minus_sqrt_one_minus(conc * conc) / S::lit(2.0);
        Self { prob, state: PureState::from_lambda(lambda), lambda, conc }
    }

    pub(crate) fn from_parts(prob: S, lambda: S, conc: S) -> Self {
        Self { prob, state: PureState::from_lambda(lambda), lambda, conc }
    }
}

/// The list of outcomes left by one or more swaps.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeEnsemble<S> {
    outcomes: Vec<SwapOutcome<S>>,
}

impl<S: Real> OutcomeEnsemble<S> {
    /// Validates that probabilities sum to one within `1e-10`.
    pub fn new(outcomes: Vec<SwapOutcome<S>>) -> Result<Self> {
        let total = outcomes.iter().fold(S::zero(), |acc, o| acc + o.prob);
        if outcomes.iter().any(|o| !(o.prob >= S::zero())) || !((total - S::one()).abs() <= S::tolerance(1e-10)) {
            return Err(Error::Unnormalized(total.as_f64()));
        }
        Ok(Self { outcomes })
    }

    pub(crate) fn new_unchecked(outcomes: Vec<SwapOutcome<S>>) -> Self {
        Self { outcomes }
    }

    /// A single certain outcome.
    pub fn certain(state: PureState<S>) -> Self {
        Self { outcomes: vec![SwapOutcome::of_state(S::one(), state)] }
    }

    pub fn outcomes(&self) -> &[SwapOutcome<S>] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &SwapOutcome<S>> {
        self.outcomes.iter()
    }

    pub fn probabilities(&self) -> Vec<S> {
        self.outcomes.iter().map(|o| o.prob).collect()
    }

    pub fn total_probability(&self) -> S {
        self.outcomes.iter().fold(S::zero(), |acc, o| acc + o.prob)
    }

    /// Merges outcomes whose smaller Schmidt coefficients agree to a
    /// relative `1e-12`, summing their probabilities. Result is sorted by
    /// increasing `lambda`.
    pub fn merged(&self) -> Self {
        let mut sorted = self.outcomes.clone();
        sorted.sort_by(|a, b| a.lambda.partial_cmp(&b.lambda).unwrap_or(std::cmp::Ordering::Equal));
        let tol = S::tolerance(1e-12);
        let mut out: Vec<SwapOutcome<S>> = Vec::with_capacity(sorted.len());
        for o in sorted {
            match out.last_mut() {
                Some(last) if (o.lambda - last.lambda).abs() <= tol * o.lambda.max(last.lambda) => {
                    last.prob = last.prob + o.prob;
                }
                _ => out.push(o),
            }
        }
        Self { outcomes: out }
    }
}

/// Endpoints of the outcome probabilities reachable by Bell measurements.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbInterval<S> {
    pub pmin: S,
    pub pmax: S,
}

impl<S: Real> ProbInterval<S> {
    pub fn contains(&self, p: S, tol: S) -> bool {
        p >= self.pmin - tol && p <= self.pmax + tol
    }

    pub fn width(&self) -> S {
        self.pmax - self.pmin
    }
}

/// `pmin = (a0 b1 + a1 b0)/2`, `pmax = (a0 b0 + a1 b1)/2`.
pub fn prob_interval<S: Real>(alpha: &PureState<S>, beta: &PureState<S>) -> ProbInterval<S> {
    let two = S::lit(2.0);
    ProbInterval {
        pmin: (alpha.s0() * beta.s1() + alpha.s1() * beta.s0()) / two,
        pmax: (alpha.s0() * beta.s0() + alpha.s1() * beta.s1()) / two,
    }
}

/// Swaps `alpha` and `beta` with measurement `m`. Outcomes are returned
/// unmerged, in the order of the measurement vectors; an outcome of zero
/// probability carries a product state.
pub fn swap<S: Real>(alpha: &PureState<S>, beta: &PureState<S>, m: &ProjectiveMeasurement<S>) -> OutcomeEnsemble<S> {
    let a = [alpha.s0(), alpha.s1()];
    let b = [beta.s0(), beta.s1()];
    let root = (a[0] * a[1] * b[0] * b[1]).sqrt();
    let outcomes = m
        .vectors()
        .iter()
        .map(|u| {
            // H = X X^dagger for X = diag(sqrt a) conj(hat u) diag(sqrt b)
            let row = |i: usize| b[0] * u.get(i, 0).norm_sqr() + b[1] * u.get(i, 1).norm_sqr();
            let (h00, h11) = (a[0] * row(0), a[1] * row(1));
            let h01 = (a[0] * a[1]).sqrt()
                * (u.get(0, 0).conj() * u.get(1, 0) * c(b[0]) + u.get(0, 1).conj() * u.get(1, 1) * c(b[1])).norm();
            let p = h00 + h11;
            if p > S::zero() {
                let det = root * u.det_hat().norm();
                let disc = ((h00 - h11).powi(2) + S::lit(4.0) * h01 * h01).sqrt();
                // p lambda = (p - disc) / 2 without cancellation
                let lambda = (S::lit(2.0) * det * det / (p * (p + disc))).max(S::zero()).min(S::lit(0.5));
                SwapOutcome::from_parts(p, lambda, (S::lit(2.0) * det / p).unit_clamp())
            } else {
                SwapOutcome::of_state(S::zero(), PureState::product())
            }
        })
        .collect();
    OutcomeEnsemble::new_unchecked(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s0: f64) -> PureState<f64> {
        PureState::new(s0).unwrap()
    }

    #[test]
    fn singlets_swap_to_singlets() {
        let e = swap(&st(0.5), &st(0.5), &ProjectiveMeasurement::zz());
        assert_eq!(e.len(), 4);
        for o in e.iter() {
            assert!((o.prob - 0.25).abs() < 1e-15);
            assert!((o.lambda - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn zz_swap_of_equal_states() {
        let e = swap(&st(0.7), &st(0.7), &ProjectiveMeasurement::zz());
        let p: Vec<f64> = e.probabilities();
        let expect = [0.29, 0.29, 0.21, 0.21];
        for (x, y) in p.iter().zip(expect) {
            assert!((x - y).abs() < 1e-15);
        }
        let l = e.outcomes();
        assert!((l[0].lambda - 0.09 / 0.58).abs() < 1e-12);
        assert!((l[2].lambda - 0.21 / 0.42).abs() < 1e-12);
        for o in l {
            let lam = (1.0 - (1.0 - o.conc * o.conc).sqrt()) / 2.0;
            assert!((o.lambda - lam).abs() < 1e-12);
        }
    }

    #[test]
    fn xz_swap_is_uniform() {
        let e = swap(&st(0.7), &st(0.6), &ProjectiveMeasurement::xz());
        let two_lambda = 1.0 - (1.0f64 - 16.0 * 0.7 * 0.3 * 0.6 * 0.4).sqrt();
        assert!((two_lambda - 0.56).abs() < 1e-12);
        for o in e.iter() {
            assert!((o.prob - 0.25).abs() < 1e-15);
            assert!((2.0 * o.lambda - 0.56).abs() < 1e-12);
        }
    }

    #[test]
    fn interval_examples() {
        let iv = prob_interval(&st(0.7), &st(0.7));
        assert!((iv.pmin - 0.21).abs() < 1e-15 && (iv.pmax - 0.29).abs() < 1e-15);
        let iv = prob_interval(&st(0.5), &st(0.5));
        assert_eq!((iv.pmin, iv.pmax), (0.25, 0.25));
        let iv = prob_interval(&st(1.0), &st(0.7));
        assert!((iv.pmin - 0.15).abs() < 1e-15 && (iv.pmax - 0.35).abs() < 1e-15);
    }

    #[test]
    fn zero_probability_outcome_is_kept() {
        let e = swap(&st(1.0), &st(1.0), &ProjectiveMeasurement::zz());
        assert_eq!(e.len(), 4);
        assert_eq!(e.outcomes()[2].prob, 0.0);
        assert_eq!(e.outcomes()[2].lambda, 0.0);
        assert!((e.total_probability() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn merging_groups_equal_states() {
        let e = swap(&st(0.7), &st(0.7), &ProjectiveMeasurement::zz()).merged();
        assert_eq!(e.len(), 2);
        assert!((e.outcomes()[0].prob - 0.58).abs() < 1e-15);
        assert!(OutcomeEnsemble::new(vec![SwapOutcome::of_state(0.5, st(0.7))]).is_err());
    }

    #[test]
    fn non_orthonormal_rejected() {
        let v = TwoQubitVector::from_real([1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(ProjectiveMeasurement::new([v, v, v, v]), Err(Error::NotOrthonormal(_))));
    }
}
