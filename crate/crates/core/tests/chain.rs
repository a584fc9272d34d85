use entnet::chain::{
    enumerate_chain, scp_zz_closed_form, strategy_scp, zz_p_plus, zz_walk, zz_walk_scp, ChainSpec, ChainStrategy,
};
use entnet::measurement::ProjectiveMeasurement;
use entnet::merit::merits;
use entnet::states::PureState;
use num_complex::Complex64;

fn st(s0: f64) -> PureState<f64> {
    PureState::new(s0).unwrap()
}

type M2 = [[Complex64; 2]; 2];

fn mul(a: &M2, b: &M2) -> M2 {
    let mut r = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                r[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    r
}

/// Explicit amplitudes of all `4^N` outcome branches. Before each swap the
/// accumulated state is brought to its Schmidt form, since the repeater
/// measures in the Schmidt frames. Returns `(sum 2 s1, sum C)` weighted by
/// branch probability.
fn amplitude_oracle(n: usize, phi: &PureState<f64>, basis: &ProjectiveMeasurement<f64>) -> (f64, f64) {
    let d = |x: f64, y: f64| [[Complex64::new(x, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), Complex64::new(y, 0.0)]];
    let bond = d(phi.s0().sqrt(), phi.s1().sqrt());
    let hats: Vec<M2> = basis
        .vectors()
        .iter()
        .map(|u| [[u.get(0, 0).conj(), u.get(0, 1).conj()], [u.get(1, 0).conj(), u.get(1, 1).conj()]])
        .collect();
    let schmidt = |m: &M2| {
        let f: f64 = m.iter().flatten().map(|z| z.norm_sqr()).sum();
        let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).norm();
        let disc = (f * f - 4.0 * det * det).max(0.0).sqrt();
        ((f + disc) / 2.0, (f - disc) / 2.0, det)
    };
    let mut leaves = vec![bond];
    for _ in 0..n {
        let mut next = Vec::with_capacity(leaves.len() * 4);
        for m in &leaves {
            let (s0, s1, _) = schmidt(m);
            let frame = d(s0.sqrt(), s1.sqrt());
            for h in &hats {
                next.push(mul(&mul(&frame, h), &bond));
            }
        }
        leaves = next;
    }
    leaves.iter().fold((0.0, 0.0), |(s, c), m| {
        let (_, s1, det) = schmidt(m);
        (s + 2.0 * s1, c + 2.0 * det)
    })
}

#[test]
fn zz_closed_form_matches_amplitude_enumeration() {
    let zz = ProjectiveMeasurement::zz();
    for phi0 in [0.55, 0.7, 0.9] {
        let phi = st(phi0);
        for n in 0..=8 {
            let (oracle, _) = amplitude_oracle(n, &phi, &zz);
            let closed = scp_zz_closed_form(n, &phi);
            assert!((closed - oracle).abs() < 1e-12, "N={n} phi0={phi0}: {closed} vs {oracle}");
            let e = enumerate_chain(&ChainSpec::new(n, phi), &[zz]).unwrap();
            let s = merits(&e).unwrap().scp;
            assert!((s - oracle).abs() < 1e-12, "N={n} phi0={phi0}: enumerated {s} vs {oracle}");
        }
    }
}

#[test]
fn xz_iteration_matches_amplitude_enumeration() {
    let xz = ProjectiveMeasurement::xz();
    for phi0 in [0.55, 0.7, 0.9] {
        let phi = st(phi0);
        for n in 0..=6 {
            let (oracle, _) = amplitude_oracle(n, &phi, &xz);
            let it = strategy_scp(&ChainSpec::new(n, phi), ChainStrategy::Xz);
            assert!((it - oracle).abs() < 1e-12, "N={n}: {it} vs {oracle}");
        }
    }
}

#[test]
fn scp_never_exceeds_concurrence() {
    for basis in [ProjectiveMeasurement::zz(), ProjectiveMeasurement::xz()] {
        for phi0 in [0.55, 0.7, 0.9] {
            for n in 0..=7 {
                let (s, c) = amplitude_oracle(n, &st(phi0), &basis);
                assert!(s <= c + 1e-12);
                let r = merits(&enumerate_chain(&ChainSpec::new(n, st(phi0)), &[basis]).unwrap()).unwrap();
                assert!(r.scp <= r.avg_concurrence + 1e-12);
            }
        }
    }
}

#[test]
fn strategies_non_increasing_and_zz_drops_on_odd_steps_only() {
    for phi0 in [0.55, 0.7, 0.9, 0.99] {
        let phi = st(phi0);
        for strategy in [ChainStrategy::Cs, ChainStrategy::Xz, ChainStrategy::Zz] {
            let v: Vec<f64> = (0..=40).map(|n| strategy_scp(&ChainSpec::new(n, phi), strategy)).collect();
            assert!(v.windows(2).all(|w| w[1] <= w[0] + 1e-15), "{strategy:?} {phi0}");
        }
        for k in 0..=10 {
            let even = scp_zz_closed_form(2 * k, &phi);
            let odd = scp_zz_closed_form(2 * k + 1, &phi);
            assert_eq!(even, odd, "k={k}");
            assert!(scp_zz_closed_form(2 * k + 2, &phi) < odd);
        }
    }
}

#[test]
fn walk_agrees_with_closed_form() {
    let phi = st(0.7);
    for n in 0..=30 {
        let w = zz_walk(&ChainSpec::new(n, phi));
        assert!((zz_walk_scp(&w, &phi) - scp_zz_closed_form(n, &phi)).abs() < 1e-12);
    }
}

/// Every path from label 1 that first reaches 0 after `n` steps has the
/// same weight.
#[test]
fn walk_path_weight_depends_on_length_only() {
    let phi = st(0.7);
    fn paths(m: usize, left: usize, w: f64, phi: &PureState<f64>, out: &mut Vec<f64>) {
        if left == 0 {
            if m == 0 {
                out.push(w);
            }
            return;
        }
        if m == 0 {
            return;
        }
        let up = zz_p_plus(m, phi);
        paths(m + 1, left - 1, w * up, phi, out);
        paths(m - 1, left - 1, w * (1.0 - up), phi, out);
    }
    for n in 1..=9 {
        let mut w = Vec::new();
        paths(1, n, 1.0, &phi, &mut w);
        if n % 2 == 0 {
            assert!(w.is_empty());
            continue;
        }
        assert!(!w.is_empty());
        assert!(w.iter().all(|x| (x - w[0]).abs() < 1e-15 * w[0].max(1e-300) * 10.0), "n={n}: {w:?}");
    }
}
