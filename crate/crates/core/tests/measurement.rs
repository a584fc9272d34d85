use entnet::measurement::{
    bell_from_probabilities, from_magic_basis, prob_interval, swap, MagicBasisVector, ProjectiveMeasurement,
};
use entnet::merit::unitary_from_angles;
use entnet::states::{concurrence, PureState};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn state() -> impl Strategy<Value = PureState<f64>> {
    (0.5f64..=1.0).prop_map(|s0| PureState::new(s0).unwrap())
}

/// Random real orthogonal 4x4 matrix by Gram-Schmidt.
fn random_orthogonal(rng: &mut ChaCha8Rng) -> [[f64; 4]; 4] {
    loop {
        let mut rows = [[0.0; 4]; 4];
        let mut ok = true;
        for i in 0..4 {
            let mut v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            for r in rows.iter().take(i) {
                let d: f64 = v.iter().zip(r).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(r).for_each(|(a, b)| *a -= d * b);
            }
            let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if n < 1e-3 {
                ok = false;
                break;
            }
            rows[i] = v.map(|a| a / n);
        }
        if ok {
            return rows;
        }
    }
}

fn random_bell(rng: &mut ChaCha8Rng) -> ProjectiveMeasurement<f64> {
    let o = random_orthogonal(rng);
    ProjectiveMeasurement::new(o.map(|r| from_magic_basis(&MagicBasisVector::from_real(r)))).unwrap()
}

#[test]
fn roundtrip_through_random_bell_measurements() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let a = PureState::new(rng.gen_range(0.5..1.0)).unwrap();
        let b = PureState::new(rng.gen_range(0.5..1.0)).unwrap();
        let oracle = random_bell(&mut rng);
        let x: Vec<f64> = swap(&a, &b, &oracle).probabilities();
        let x = [x[0], x[1], x[2], x[3]];
        let m = bell_from_probabilities(x, &a, &b).unwrap();
        let got = swap(&a, &b, &m).probabilities();
        for i in 0..4 {
            assert!((got[i] - x[i]).abs() < 1e-8, "{x:?} -> {got:?}");
        }
        assert!(m.is_bell(1e-9));
    }
}

proptest! {
    #[test]
    fn probabilities_sum_to_one(a in state(), b in state(), angles in prop::array::uniform16(-3.2f64..3.2)) {
        let u = unitary_from_angles(&angles);
        let m = ProjectiveMeasurement::from_unitary_columns(&u).unwrap();
        prop_assert!((swap(&a, &b, &m).total_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_outcomes_inside_interval(a in state(), b in state(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_bell(&mut rng);
        let iv = prob_interval(&a, &b);
        for o in swap(&a, &b, &m).iter() {
            prop_assert!(iv.contains(o.prob, 1e-12));
            // the entanglement of a Bell outcome is fixed by its probability
            let c = (a.s0() * a.s1() * b.s0() * b.s1()).sqrt() / o.prob;
            if o.prob > 1e-9 {
                prop_assert!((o.conc - c.min(1.0)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn k_weights_sum_to_two(a in state(), b in state(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let iv = prob_interval(&a, &b);
        prop_assume!(iv.width() > 1e-9);
        let x = swap(&a, &b, &random_bell(&mut rng)).probabilities();
        let k: f64 = x.iter().map(|p| (iv.pmax - p) / iv.width()).sum();
        prop_assert!((k - 2.0).abs() < 1e-9);
    }

    #[test]
    fn magic_matrix_is_orthogonal(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_bell(&mut rng).magic_matrix(1e-9).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let d: f64 = (0..4).map(|k| m[i][k] * m[j][k]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                prop_assert!((d - target).abs() < 1e-10);
            }
        }
        for v in random_bell(&mut rng).vectors() {
            prop_assert!((concurrence(v) - 1.0).abs() < 1e-10);
        }
    }
}
