//! Two-qubit pure states in Schmidt form, raw two-qubit vectors, and the
//! single-state figures of merit.
//!
//! A bond of the network holds `sqrt(s0)|00> + sqrt(s1)|11>` with
//! `s0 >= s1`; local rotations bring any pure state to this form, so the
//! pair `(s0, s1)` is all the crate keeps. The singlet conversion
//! probability (SCP) `E = 2 s1` is the scalar used by the recursion maps.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Entanglement measured by the singlet conversion probability, `E = 2 s1`.
pub type Ent<S> = S;

/// A two-qubit pure state `sqrt(s0)|00> + sqrt(s1)|11>`, `s0 >= s1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureState<S> {
    s0: S,
    s1: S,
}

impl<S: Real> PureState<S> {
    /// Builds a state from one Schmidt coefficient. Values below one half
    /// are reflected, so `new(0.3)` and `new(0.7)` are the same state.
    pub fn new(s0: S) -> Result<Self> {
        if !(s0 >= S::zero() && s0 <= S::one()) {
            return Err(Error::InvalidSchmidt(s0.as_f64()));
        }
        let s1 = S::one() - s0;
        Ok(if s0 >= s1 { Self { s0, s1 } } else { Self { s0: s1, s1: s0 } })
    }

    /// Builds a state from an unnormalized pair of squared amplitudes.
    pub fn from_weights(a: S, b: S) -> Result<Self> {
        if !(a >= S::zero() && b >= S::zero()) || !(a + b > S::zero()) || !(a + b).is_finite() {
            return Err(Error::InvalidInput(format!(
                "Schmidt weights ({}, {}) must be non-negative with a positive finite sum",
                a.as_f64(),
                b.as_f64()
            )));
        }
        let s1 = a.min(b) / (a + b);
        Ok(Self { s0: S::one() - s1, s1 })
    }

    /// The state whose singlet conversion probability is `e`.
    pub fn from_scp(e: Ent<S>) -> Result<Self> {
        if !(e >= S::zero() && e <= S::one()) {
            return Err(Error::InvalidInput(format!("SCP {} outside [0, 1]", e.as_f64())));
        }
        let s1 = e / S::lit(2.0);
        Ok(Self { s0: S::one() - s1, s1 })
    }

    /// The state with smaller Schmidt coefficient `lambda` (clamped to `[0, 1/2]`).
    pub(crate) fn from_lambda(lambda: S) -> Self {
        let s1 = lambda.max(S::zero()).min(S::lit(0.5));
        Self { s0: S::one() - s1, s1 }
    }

    pub fn singlet() -> Self {
        Self { s0: S::lit(0.5), s1: S::lit(0.5) }
    }

    pub fn product() -> Self {
        Self { s0: S::one(), s1: S::zero() }
    }

    #[inline]
    pub fn s0(&self) -> S {
        self.s0
    }

    #[inline]
    pub fn s1(&self) -> S {
        self.s1
    }

    #[inline]
    pub fn scp(&self) -> Ent<S> {
        scp(self)
    }

    /// `2 sqrt(s0 s1)`.
    #[inline]
    pub fn concurrence(&self) -> S {
        S::lit(2.0) * (self.s0 * self.s1).sqrt()
    }

    pub fn is_singlet(&self, tol: S) -> bool {
        (self.s0 - S::lit(0.5)).abs() <= tol
    }

    /// The amplitude vector `sqrt(s0)|00> + sqrt(s1)|11>`.
    pub fn to_vector(&self) -> TwoQubitVector<S> {
        let z = Complex::new(S::zero(), S::zero());
        TwoQubitVector::new([Complex::new(self.s0.sqrt(), S::zero()), z, z, Complex::new(self.s1.sqrt(), S::zero())])
    }
}

/// Four complex amplitudes indexed by `(i, j)` in `{0,1}^2`, stored as
/// `[a00, a01, a10, a11]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitVector<S> {
    pub a: [Complex<S>; 4],
}

impl<S: Real> TwoQubitVector<S> {
    pub fn new(a: [Complex<S>; 4]) -> Self {
        Self { a }
    }

    pub fn from_real(a: [S; 4]) -> Self {
        Self { a: a.map(|x| Complex::new(x, S::zero())) }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<S> {
        self.a[2 * i + j]
    }

    /// The 2x2 amplitude matrix `(a00 a01; a10 a11)`.
    pub fn hat(&self) -> [[Complex<S>; 2]; 2] {
        [[self.a[0], self.a[1]], [self.a[2], self.a[3]]]
    }

    pub fn det_hat(&self) -> Complex<S> {
        self.a[0] * self.a[3] - self.a[1] * self.a[2]
    }

    pub fn norm_sqr(&self) -> S {
        self.a.iter().fold(S::zero(), |acc, z| acc + z.norm_sqr())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex<S> {
        self.a.iter().zip(other.a.iter()).fold(Complex::new(S::zero(), S::zero()), |acc, (x, y)| acc + x.conj() * y)
    }

    pub fn scale(&self, k: Complex<S>) -> Self {
        Self { a: self.a.map(|z| z * k) }
    }
}

/// Concurrence `2 |det(hat v)|`.
pub fn concurrence<S: Real>(v: &TwoQubitVector<S>) -> S {
    S::lit(2.0) * v.det_hat().norm()
}

/// Singlet conversion probability `2 s1` of a single state.
pub fn scp<S: Real>(state: &PureState<S>) -> Ent<S> {
    (S::lit(2.0) * state.s1).unit_clamp()
}

/// Deterministic distillation of two states into one:
/// `s0 = max{1/2, a.s0 * b.s0}`.
pub fn distill_pair<S: Real>(a: &PureState<S>, b: &PureState<S>) -> PureState<S> {
    let s0 = (a.s0 * b.s0).max(S::lit(0.5));
    PureState { s0, s1: S::one() - s0 }
}

/// SCP of two copies of `phi`, `min{1, 2(1 - s0^2)}`.
pub fn double_state_scp<S: Real>(phi: &PureState<S>) -> Ent<S> {
    (S::lit(2.0) * (S::one() - phi.s0 * phi.s0)).unit_clamp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s0: f64) -> PureState<f64> {
        PureState::new(s0).unwrap()
    }

    #[test]
    fn concurrence_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = TwoQubitVector::from_real([h, 0.0, 0.0, h]);
        assert!((concurrence(&singlet) - 1.0).abs() < 1e-15);
        let product = TwoQubitVector::from_real([1.0, 0.0, 0.0, 0.0]);
        assert_eq!(concurrence(&product), 0.0);
        let c = concurrence(&st(0.7).to_vector());
        assert!((c - 2.0 * (0.7f64 * 0.3).sqrt()).abs() < 1e-15);
        assert!((c - 0.9165).abs() < 1e-4);
    }

    #[test]
    fn scp_examples() {
        assert_eq!(scp(&st(0.5)), 1.0);
        assert_eq!(scp(&st(1.0)), 0.0);
        assert!((scp(&st(0.7)) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn constructor_reflects_and_normalizes() {
        assert!((st(0.3).s0() - st(0.7).s0()).abs() < 1e-15);
        let w = PureState::<f64>::from_weights(3.0, 7.0).unwrap();
        assert!((w.s0() - 0.7).abs() < 1e-15);
        assert_eq!(w.s0() + w.s1(), 1.0);
        assert!(PureState::new(1.5).is_err());
        assert!(PureState::new(f64::NAN).is_err());
        assert!(PureState::from_weights(0.0, 0.0).is_err());
        assert!(PureState::from_weights(-1.0, 2.0).is_err());
    }

    #[test]
    fn distill_examples() {
        assert_eq!(distill_pair(&st(0.5), &st(0.5)).s0(), 0.5);
        assert_eq!(distill_pair(&st(0.6), &st(0.7)).s0(), 0.5);
        assert!((distill_pair(&st(0.9), &st(0.9)).s0() - 0.81).abs() < 1e-15);
    }

    #[test]
    fn double_state_examples() {
        assert_eq!(double_state_scp(&st(0.5)), 1.0);
        assert_eq!(double_state_scp(&st(1.0)), 0.0);
        let phi0 = (0.5 + (std::f64::consts::PI / 18.0).sin()).sqrt();
        assert!((phi0 - 0.82076).abs() < 1e-5);
        let honeycomb = 1.0 - 2.0 * (std::f64::consts::PI / 18.0).sin();
        assert!((double_state_scp(&st(phi0)) - honeycomb).abs() < 1e-12);
        assert!((double_state_scp(&st(0.82076)) - 0.65270).abs() < 1e-4);
    }

    #[test]
    fn from_scp_roundtrip() {
        let s = PureState::<f64>::from_scp(0.6).unwrap();
        assert!((s.s0() - 0.7).abs() < 1e-15);
        assert!(PureState::<f64>::from_scp(1.2).is_err());
    }

    #[test]
    fn single_precision_works() {
        let a = PureState::<f32>::new(0.7).unwrap();
        assert!((scp(&a) - 0.6).abs() < 1e-6);
        assert!((distill_pair(&a, &a).s0() - 0.5).abs() < 1e-6);
    }
}
