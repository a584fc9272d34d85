//! Bell bases built on rotated single-qubit bases, and the magic basis.

use num_complex::Complex;

use super::{c, ProjectiveMeasurement};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::states::TwoQubitVector;

/// A 2x2 complex matrix, row major.
pub type Mat2<S> = [[Complex<S>; 2]; 2];

fn unitarity_deviation<S: Real>(u: &Mat2<S>) -> S {
    let mut dev = S::zero();
    for i in 0..2 {
        for j in 0..2 {
            let g = u[i][0] * u[j][0].conj() + u[i][1] * u[j][1].conj();
            let target = if i == j { S::one() } else { S::zero() };
            dev = dev.max((g - c(target)).norm());
        }
    }
    dev
}

/// Bell measurement on the basis `(|up>, |down>) = u (|0>, |1>)` of the
/// first qubit and the computational basis of the second. The identity
/// gives the ZZ basis, a Hadamard the XZ basis.
pub fn bell_basis<S: Real>(u: &Mat2<S>) -> Result<ProjectiveMeasurement<S>> {
    let id = [[c(S::one()), c(S::zero())], [c(S::zero()), c(S::one())]];
    bell_basis_pair(u, &id)
}

/// Bell measurement with both single-qubit bases rotated:
/// `Phi± = (|up up> ± |dn dn>)/√2`, `Psi± = (|up dn> ± |dn up>)/√2`.
pub fn bell_basis_pair<S: Real>(u1: &Mat2<S>, u2: &Mat2<S>) -> Result<ProjectiveMeasurement<S>> {
    for u in [u1, u2] {
        let dev = unitarity_deviation(u);
        if !(dev <= S::tolerance(1e-10)) {
            return Err(Error::NotUnitary(dev.as_f64()));
        }
    }
    let h = c(S::FRAC_1_SQRT_2());
    let kron = |x: [Complex<S>; 2], y: [Complex<S>; 2]| [x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1]];
    let combine = |p: [Complex<S>; 4], q: [Complex<S>; 4], sign: S| {
        let mut a = [c(S::zero()); 4];
        for k in 0..4 {
            a[k] = (p[k] + q[k] * sign) * h;
        }
        TwoQubitVector::new(a)
    };
    let (up1, dn1) = (u1[0], u1[1]);
    let (up2, dn2) = (u2[0], u2[1]);
    let one = S::one();
    Ok(ProjectiveMeasurement::new_unchecked([
        combine(kron(up1, up2), kron(dn1, dn2), one),
        combine(kron(up1, up2), kron(dn1, dn2), -one),
        combine(kron(up1, dn2), kron(dn1, up2), one),
        combine(kron(up1, dn2), kron(dn1, up2), -one),
    ]))
}

/// The magic basis `(1, -i sz, i sy, -i sx)|Phi+>`, the operators acting
/// on the first qubit.
pub fn magic_basis_vectors<S: Real>() -> [TwoQubitVector<S>; 4] {
    let h = S::FRAC_1_SQRT_2();
    let z = Complex::new(S::zero(), S::zero());
    let re = |x: S| Complex::new(x, S::zero());
    let im = |x: S| Complex::new(S::zero(), x);
    [
        TwoQubitVector::new([re(h), z, z, re(h)]),
        TwoQubitVector::new([im(-h), z, z, im(h)]),
        TwoQubitVector::new([z, re(h), re(-h), z]),
        TwoQubitVector::new([z, im(-h), im(-h), z]),
    ]
}

/// Coordinates of a two-qubit vector in the magic basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MagicBasisVector<S> {
    pub mu: [Complex<S>; 4],
}

impl<S: Real> MagicBasisVector<S> {
    pub fn from_real(mu: [S; 4]) -> Self {
        Self { mu: mu.map(c) }
    }

    /// `|sum mu_i^2|`, equal to the concurrence of the vector.
    pub fn concurrence(&self) -> S {
        self.mu.iter().fold(c(S::zero()), |acc, z| acc + z * z).norm()
    }

    /// Real coordinates after removing a global phase, if the imaginary
    /// parts then vanish within `tol`. Maximally entangled states always
    /// qualify.
    pub fn real_coordinates(&self, tol: S) -> Option<[S; 4]> {
        let pivot = self
            .mu
            .iter()
            .copied()
            .max_by(|a, b| a.norm_sqr().partial_cmp(&b.norm_sqr()).unwrap_or(std::cmp::Ordering::Equal))?;
        if pivot.norm() == S::zero() {
            return Some([S::zero(); 4]);
        }
        let phase = pivot.conj() / pivot.norm();
        let rotated = self.mu.map(|z| z * phase);
        if rotated.iter().all(|z| z.im.abs() <= tol) {
            Some(rotated.map(|z| z.re))
        } else {
            None
        }
    }
}

pub fn to_magic_basis<S: Real>(v: &TwoQubitVector<S>) -> MagicBasisVector<S> {
    let basis = magic_basis_vectors::<S>();
    MagicBasisVector { mu: basis.map(|b| b.inner(v)) }
}

pub fn from_magic_basis<S: Real>(m: &MagicBasisVector<S>) -> TwoQubitVector<S> {
    let basis = magic_basis_vectors::<S>();
    let mut a = [c(S::zero()); 4];
    for (mu, b) in m.mu.iter().zip(basis.iter()) {
        for k in 0..4 {
            a[k] = a[k] + b.a[k] * mu;
        }
    }
    TwoQubitVector::new(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::concurrence;

    fn rotation(theta: f64, phi: f64) -> Mat2<f64> {
        let (s, co) = theta.sin_cos();
        let e = Complex::from_polar(1.0, phi);
        [[c(co), -e.conj() * s], [e * s, c(co)]]
    }

    #[test]
    fn identity_gives_zz() {
        let id = [[c(1.0), c(0.0)], [c(0.0), c(1.0)]];
        let m = bell_basis(&id).unwrap();
        assert_eq!(m, ProjectiveMeasurement::zz());
        assert!(m.is_bell(1e-12));
    }

    #[test]
    fn xz_matches_explicit_columns() {
        // columns of (1/2)[[-1,1,1,1],[1,-1,1,1],[1,1,-1,1],[1,1,1,-1]]
        let cols: [[f64; 4]; 4] =
            [[-0.5, 0.5, 0.5, 0.5], [0.5, -0.5, 0.5, 0.5], [0.5, 0.5, -0.5, 0.5], [0.5, 0.5, 0.5, -0.5]];
        let m = ProjectiveMeasurement::<f64>::xz();
        for v in m.vectors() {
            let hit = cols.iter().any(|col| {
                let w = TwoQubitVector::from_real(*col);
                (v.inner(&w).norm() - 1.0).abs() < 1e-12
            });
            assert!(hit, "{v:?} is not a column of the XZ matrix up to phase");
        }
    }

    #[test]
    fn rotated_bases_stay_maximally_entangled() {
        for k in 0..20 {
            let u = rotation(0.31 * k as f64, 0.77 * k as f64);
            let v = rotation(1.1 * k as f64, -0.4 * k as f64);
            let m = bell_basis_pair(&u, &v).unwrap();
            assert!(m.orthonormality_deviation() < 1e-12);
            for w in m.vectors() {
                assert!((concurrence(w) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn non_unitary_rejected() {
        let bad = [[c(1.0), c(1.0)], [c(0.0), c(1.0)]];
        assert!(matches!(bell_basis(&bad), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn magic_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phi_plus = TwoQubitVector::from_real([h, 0.0, 0.0, h]);
        let m = to_magic_basis(&phi_plus);
        let r = m.real_coordinates(1e-12).unwrap();
        assert!((r[0] - 1.0).abs() < 1e-15 && r[1..].iter().all(|x| x.abs() < 1e-15));
        let product = TwoQubitVector::from_real([1.0, 0.0, 0.0, 0.0]);
        assert!(to_magic_basis(&product).concurrence() < 1e-15);
    }

    #[test]
    fn bell_magic_matrix_is_orthogonal() {
        let m = bell_basis(&rotation(0.4, 1.3)).unwrap();
        let o = m.magic_matrix(1e-12).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let dot: f64 = (0..4).map(|k| o[i][k] * o[j][k]).sum();
                assert!((dot - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }
}
