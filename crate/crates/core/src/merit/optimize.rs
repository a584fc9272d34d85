//! Derivative-free maximization over projective two-qubit measurements.
//!
//! A measurement is the set of columns of a 4x4 unitary. The search
//! moves by right-multiplying the current unitary with a local
//! parameterization `D(phases) G01 G02 G03 G12 G13 G23` (16 angles, the
//! identity at zero), so every step is taken around the current point.
//! Each sweep line-searches the 16 coordinate directions plus a few random
//! ones; the trust radius shrinks when a sweep stops improving.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::measurement::ProjectiveMeasurement;
use crate::states::TwoQubitVector;

/// 4x4 complex matrix, `u[row][col]`; measurement vectors are its columns.
pub type Unitary4 = [[Complex<f64>; 4]; 4];

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    /// Random starting points, in addition to the explicit seeds.
    pub restarts: usize,
    pub seed: u64,
    /// Convergence threshold on the objective and on the trust radius.
    pub tol: f64,
    pub max_sweeps: usize,
    pub random_directions: usize,
    /// Best starts that get a basin-hopping polish.
    pub polish_starts: usize,
    /// Random kicks per polished start.
    pub polish_kicks: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 50,
            seed: 42,
            tol: 1e-9,
            max_sweeps: 400,
            random_directions: 12,
            polish_starts: 4,
            polish_kicks: 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Optimum {
    pub value: f64,
    pub measurement: ProjectiveMeasurement<f64>,
    /// Index of the winning start: seeds first, then random restarts.
    pub start: usize,
}

fn identity() -> Unitary4 {
    let mut u = [[Complex::new(0.0, 0.0); 4]; 4];
    for (i, row) in u.iter_mut().enumerate() {
        row[i] = Complex::new(1.0, 0.0);
    }
    u
}

fn mul(a: &Unitary4, b: &Unitary4) -> Unitary4 {
    let mut out = [[Complex::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            for j in 0..4 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// Right-multiplies `u` in place by a Givens rotation on columns `(i, j)`.
fn rotate_columns(u: &mut Unitary4, i: usize, j: usize, theta: f64, phi: f64) {
    if theta == 0.0 {
        return;
    }
    let (s, c) = theta.sin_cos();
    let e = Complex::from_polar(1.0, phi);
    for row in u.iter_mut() {
        let (x, y) = (row[i], row[j]);
        row[i] = x * c + y * e * s;
        row[j] = -x * e.conj() * s + y * c;
    }
}

/// `D(a0..a3) G01(a4, a5) G02(a6, a7) ... G23(a14, a15)`.
pub fn unitary_from_angles(angles: &[f64; 16]) -> Unitary4 {
    let mut u = identity();
    for (k, row) in u.iter_mut().enumerate() {
        row[k] = Complex::from_polar(1.0, angles[k]);
    }
    for (n, &(i, j)) in PAIRS.iter().enumerate() {
        rotate_columns(&mut u, i, j, angles[4 + 2 * n], angles[5 + 2 * n]);
    }
    u
}

fn measurement_of(u: &Unitary4) -> ProjectiveMeasurement<f64> {
    let col = |m: usize| TwoQubitVector::new([u[0][m], u[1][m], u[2][m], u[3][m]]);
    ProjectiveMeasurement::new_unchecked([col(0), col(1), col(2), col(3)])
}

/// The unitary whose columns are the measurement vectors.
pub(crate) fn unitary_of(m: &ProjectiveMeasurement<f64>) -> Unitary4 {
    let mut u = [[Complex::new(0.0, 0.0); 4]; 4];
    for (c, v) in m.vectors().iter().enumerate() {
        for r in 0..4 {
            u[r][c] = v.a[r];
        }
    }
    u
}

/// Re-orthonormalizes columns (Gram-Schmidt) to stop drift.
fn reorthonormalize(u: &mut Unitary4) {
    for c in 0..4 {
        for p in 0..c {
            let dot: Complex<f64> = (0..4).map(|r| u[r][p].conj() * u[r][c]).sum();
            for r in 0..4 {
                let up = u[r][p];
                u[r][c] -= dot * up;
            }
        }
        let n = (0..4).map(|r| u[r][c].norm_sqr()).sum::<f64>().sqrt();
        for row in u.iter_mut() {
            row[c] /= n;
        }
    }
}

/// Maximizes `g` on `[-r, r]`: coarse scan, then golden section around the
/// best sample. Returns `(t, g(t))`; `g(0) = g0` is known.
fn line_max(g: &impl Fn(f64) -> f64, r: f64, g0: f64) -> (f64, f64) {
    const N: usize = 4;
    let mut ts = [0.0; 2 * N + 1];
    let mut vs = [0.0; 2 * N + 1];
    let (mut bi, mut bv) = (N, g0);
    for k in 0..=2 * N {
        let t = r * (k as f64 - N as f64) / N as f64;
        ts[k] = t;
        vs[k] = if k == N { g0 } else { g(t) };
        if vs[k] > bv {
            bi = k;
            bv = vs[k];
        }
    }
    let mut a = ts[bi.saturating_sub(1)];
    let mut b = ts[(bi + 1).min(2 * N)];
    let (mut best_t, mut best_v) = (ts[bi], bv);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..24 {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = g(x2);
        }
    }
    for (t, v) in [(x1, f1), (x2, f2)] {
        if v > best_v {
            best_t = t;
            best_v = v;
        }
    }
    (best_t, best_v)
}

fn local_search<F>(f: &F, start: Unitary4, rng: &mut ChaCha8Rng, cfg: &OptimizerConfig) -> (f64, Unitary4)
where
    F: Fn(&ProjectiveMeasurement<f64>) -> f64,
{
    let eval = |u: &Unitary4| f(&measurement_of(u));
    let mut base = start;
    let mut best = eval(&base);
    let mut radius = 0.5;
    let mut directions: Vec<[f64; 16]> = (0..16)
        .map(|k| {
            let mut d = [0.0; 16];
            d[k] = 1.0;
            d
        })
        .collect();
    directions.extend((0..cfg.random_directions).map(|_| [0.0; 16]));
    for _sweep in 0..cfg.max_sweeps {
        let before = best;
        for d in directions.iter_mut().skip(16) {
            let mut n2 = 0.0;
            for x in d.iter_mut() {
                *x = rng.gen_range(-1.0..1.0);
                n2 += *x * *x;
            }
            let n = n2.sqrt();
            d.iter_mut().for_each(|x| *x /= n);
        }
        for d in &directions {
            let step = |t: f64| {
                let mut a = [0.0; 16];
                for k in 0..16 {
                    a[k] = t * d[k];
                }
                mul(&base, &unitary_from_angles(&a))
            };
            let g = |t: f64| eval(&step(t));
            let (t, v) = line_max(&g, radius, best);
            if v > best {
                base = step(t);
                best = v;
            }
        }
        reorthonormalize(&mut base);
        best = eval(&base);
        if best - before <= cfg.tol * 1e-3 {
            radius *= 0.3;
            if radius < cfg.tol {
                break;
            }
        }
    }
    (best, base)
}

/// Kicks the point by random angles of shrinking size and keeps the local
/// optimum reached from the kicked point when it is better.
fn basin_hop<F>(f: &F, mut best: f64, mut u: Unitary4, rng: &mut ChaCha8Rng, cfg: &OptimizerConfig) -> (f64, Unitary4)
where
    F: Fn(&ProjectiveMeasurement<f64>) -> f64,
{
    for k in 0..cfg.polish_kicks {
        let size = 0.3 * 0.7f64.powi(k as i32);
        let mut a = [0.0; 16];
        for x in a.iter_mut() {
            *x = rng.gen_range(-size..size);
        }
        let (v, w) = local_search(f, mul(&u, &unitary_from_angles(&a)), rng, cfg);
        if v > best {
            best = v;
            u = w;
        }
    }
    (best, u)
}

/// Maximizes `objective` over projective measurements, starting from each
/// of `seeds` and from `cfg.restarts` random unitaries drawn from
/// `cfg.seed`. Ties go to the lowest start index, so the result does not
/// depend on thread scheduling.
pub fn maximize_over_measurements<F>(objective: F, seeds: &[Unitary4], cfg: &OptimizerConfig) -> Optimum
where
    F: Fn(&ProjectiveMeasurement<f64>) -> f64 + Sync,
{
    let total = seeds.len() + cfg.restarts;
    let results: Vec<(f64, usize, Unitary4)> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(idx as u64);
            let start = if idx < seeds.len() {
                seeds[idx]
            } else {
                let mut a = [0.0; 16];
                for x in a.iter_mut() {
                    *x = rng.gen_range(0.0..std::f64::consts::TAU);
                }
                unitary_from_angles(&a)
            };
            let (v, u) = local_search(&objective, start, &mut rng, cfg);
            (v, idx, u)
        })
        .collect();
    let mut ranked = results;
    ranked.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal).then(a.1.cmp(&b.1)));
    ranked.truncate(cfg.polish_starts.max(1));
    let polished: Vec<(f64, usize, Unitary4)> = ranked
        .into_par_iter()
        .map(|(v, idx, u)| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5bd1_e995);
            rng.set_stream(idx as u64);
            let (v, u) = basin_hop(&objective, v, u, &mut rng, cfg);
            (v, idx, u)
        })
        .collect();
    let (value, start, u) = polished
        .into_iter()
        .fold(None::<(f64, usize, Unitary4)>, |acc, r| match acc {
            Some(a) if a.0 > r.0 || (a.0 == r.0 && a.1 < r.1) => Some(a),
            _ => Some(r),
        })
        .expect("at least one start");
    Optimum { value, measurement: measurement_of(&u), start }
}
