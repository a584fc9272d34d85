//! Bell measurement with prescribed outcome probabilities.
//!
//! In magic-basis coordinates a Bell vector is a real unit row `mu` and the
//! swap outcome probability reads
//! `p = pmax (mu1^2 + mu2^2) + pmin (mu3^2 + mu4^2)`. With
//! `k = (pmax - p)/(pmax - pmin)` the row takes the form
//! `(sqrt(k') cos w, sqrt(k') sin w, sqrt(k) cos t, sqrt(k) sin t)`,
//! `k' = 1 - k`, and the four rows must be orthonormal. The solver fixes
//! the first row, reduces the orthogonality conditions among the first
//! three rows to one equation in two angles, and finds a root by grid scan
//! and bisection. The fourth row is the cofactor vector of the other three.

use super::{prob_interval, MagicBasisVector, ProjectiveMeasurement};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::states::PureState;

const EDGE: f64 = 1e-9;
const GRID: usize = 64;
const RESIDUAL: f64 = 1e-10;

/// Row in `(k part, k' part)` layout: `[sqrt(k) cos t, sqrt(k) sin t, sqrt(k') cos w, sqrt(k') sin w]`.
type Row = [f64; 4];

/// A Bell measurement whose outcome probabilities, when swapping `alpha`
/// and `beta`, are `x` in the given order.
pub fn bell_from_probabilities<S: Real>(
    x: [S; 4],
    alpha: &PureState<S>,
    beta: &PureState<S>,
) -> Result<ProjectiveMeasurement<S>> {
    let iv = prob_interval(alpha, beta);
    let (pmin, pmax) = (iv.pmin.as_f64(), iv.pmax.as_f64());
    let x = x.map(|v| v.as_f64());
    let total: f64 = x.iter().sum();
    if !((total - 1.0).abs() <= 1e-10) {
        return Err(Error::Infeasible(format!("probabilities sum to {total}, not 1")));
    }
    let tol = S::tolerance(1e-12).as_f64();
    if let Some(bad) = x.iter().find(|&&v| !(v >= pmin - tol && v <= pmax + tol)) {
        return Err(Error::Infeasible(format!("probability {bad} outside [{pmin}, {pmax}]")));
    }
    let width = pmax - pmin;
    if width <= 1e-12 {
        return Ok(ProjectiveMeasurement::xz());
    }
    let k = x.map(|v| ((pmax - v) / width).clamp(0.0, 1.0));
    debug_assert!((k.iter().sum::<f64>() - 2.0).abs() < 1e-6, "k sums to {}", k.iter().sum::<f64>());

    let rows = solve(k)?;
    let vectors = rows.map(|r| {
        // magic coordinates: pmax pair first, pmin pair second
        let mu = MagicBasisVector::from_real([r[2], r[3], r[0], r[1]].map(S::lit));
        super::from_magic_basis(&mu)
    });
    ProjectiveMeasurement::new(vectors)
}

/// Orthonormal rows realizing weights `k` (each in `[0, 1]`, sum 2), in
/// the order of `k`.
fn solve(k: [f64; 4]) -> Result<[Row; 4]> {
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| k[b].partial_cmp(&k[a]).unwrap());
    let sorted = order.map(|i| k[i]);

    let rows_sorted = if sorted[0] >= 1.0 - EDGE {
        solve_with_full_row(sorted)
    } else if sorted[3] <= EDGE {
        // complement weights put a full row first; swap the pairs back
        let comp = sorted.map(|v| 1.0 - v);
        let mut ord = [0usize, 1, 2, 3];
        ord.sort_by(|&a, &b| comp[b].partial_cmp(&comp[a]).unwrap());
        let rows = solve_with_full_row(ord.map(|i| comp[i]));
        let mut out = [[0.0; 4]; 4];
        for (r, &i) in rows.iter().zip(ord.iter()) {
            out[i] = [r[2], r[3], r[0], r[1]];
        }
        out
    } else {
        solve_interior(sorted)?
    };

    let mut rows = [[0.0; 4]; 4];
    for (r, &i) in rows_sorted.iter().zip(order.iter()) {
        rows[i] = *r;
    }
    Ok(rows)
}

/// Sorted weights with `k1 = 1`: the first row is `e1`, the next two lie
/// in the span of `e2, e3, e4`.
fn solve_with_full_row(k: [f64; 4]) -> [Row; 4] {
    let r1 = [1.0, 0.0, 0.0, 0.0];
    let (k2, k3) = (k[1].min(1.0), k[2].min(1.0));
    let (c2, c3) = (1.0 - k2, 1.0 - k3);
    let (r2, r3) = if c2 * c3 <= 1e-300 {
        // k2 = 1 forces k3 = k4 = 0
        ([0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0])
    } else {
        let ratio = (k2 * k3 / (c2 * c3)).sqrt().min(1.0);
        let w3 = (-ratio).acos();
        ([0.0, k2.sqrt(), c2.sqrt(), 0.0], [0.0, k3.sqrt(), c3.sqrt() * w3.cos(), c3.sqrt() * w3.sin()])
    };
    [r1, r2, r3, cofactor(&r1, &r2, &r3)]
}

fn row(k: f64, t: f64, w: f64) -> Row {
    let (a, b) = (k.sqrt(), (1.0 - k).sqrt());
    [a * t.cos(), a * t.sin(), b * w.cos(), b * w.sin()]
}

/// Sorted weights strictly inside `(0, 1)`.
fn solve_interior(k: [f64; 4]) -> Result<[Row; 4]> {
    let kp = k.map(|v| 1.0 - v);
    // cos w = -ratio cos t keeps row 1 orthogonal to rows 2 and 3
    let ra = (k[0] * k[1] / (kp[0] * kp[1])).sqrt();
    let rb = (k[0] * k[2] / (kp[0] * kp[2])).sqrt();
    let ta_min = if ra > 1.0 { (1.0 / ra).acos() } else { 0.0 };
    let tb_min = if rb > 1.0 { (1.0 / rb).acos() } else { 0.0 };
    let s23 = (k[1] * k[2]).sqrt();
    let c23 = (kp[1] * kp[2]).sqrt();

    // angles of rows 2 and 3 for box coordinates (ta, tb) and branch signs
    let angles = |ta: f64, tb: f64, st: f64, sw: f64| {
        let tb = st * tb;
        let wa = (-ra * ta.cos()).clamp(-1.0, 1.0).acos();
        let wb = sw * (-rb * tb.cos()).clamp(-1.0, 1.0).acos();
        (-ta, -wa, -tb, -wb)
    };
    let residual = |ta: f64, tb: f64, st: f64, sw: f64| {
        let (t2, w2, t3, w3) = angles(ta, tb, st, sw);
        s23 * (t2 - t3).cos() + c23 * (w2 - w3).cos()
    };

    let finish = |ta: f64, tb: f64, st: f64, sw: f64| {
        let (t2, w2, t3, w3) = angles(ta, tb, st, sw);
        let r1 = row(k[0], 0.0, 0.0);
        let r2 = row(k[1], t2, w2);
        let r3 = row(k[2], t3, w3);
        [r1, r2, r3, cofactor(&r1, &r2, &r3)]
    };

    let branches = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
    let mut best = (f64::INFINITY, 0.0, 0.0, 1.0, 1.0);
    let (mut lo_a, mut hi_a) = (ta_min, std::f64::consts::PI - ta_min);
    let (mut lo_b, mut hi_b) = (tb_min, std::f64::consts::PI - tb_min);
    for _zoom in 0..8 {
        let step_a = (hi_a - lo_a) / (GRID - 1) as f64;
        let step_b = (hi_b - lo_b) / (GRID - 1) as f64;
        for &(st, sw) in &branches {
            for i in 0..GRID {
                let ta = lo_a + step_a * i as f64;
                let mut prev = residual(ta, lo_b, st, sw);
                for j in 0..GRID {
                    let tb = lo_b + step_b * j as f64;
                    let r = if j == 0 { prev } else { residual(ta, tb, st, sw) };
                    if r.abs() < best.0 {
                        best = (r.abs(), ta, tb, st, sw);
                    }
                    if r.abs() <= RESIDUAL {
                        return Ok(finish(ta, tb, st, sw));
                    }
                    if j > 0 && prev.signum() != r.signum() {
                        let tb = bisect(|t| residual(ta, t, st, sw), tb - step_b, tb);
                        if residual(ta, tb, st, sw).abs() <= RESIDUAL {
                            return Ok(finish(ta, tb, st, sw));
                        }
                    }
                    prev = r;
                }
            }
        }
        // no bracket found: zoom on the best cell
        let (_, ta, tb, _, _) = best;
        let (wa, wb) = (2.0 * step_a, 2.0 * step_b);
        lo_a = (ta - wa).max(ta_min);
        hi_a = (ta + wa).min(std::f64::consts::PI - ta_min);
        lo_b = (tb - wb).max(tb_min);
        hi_b = (tb + wb).min(std::f64::consts::PI - tb_min);
    }
    Err(Error::Infeasible(format!("no Bell measurement found for weights {k:?} (residual {:e})", best.0)))
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 || (b - a).abs() < 1e-16 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Vector orthogonal to three rows such that the 4x4 matrix has determinant +1
/// (for orthonormal input).
fn cofactor(a: &Row, b: &Row, c: &Row) -> Row {
    let mut out = [0.0; 4];
    for (j, o) in out.iter_mut().enumerate() {
        let cols: Vec<usize> = (0..4).filter(|&x| x != j).collect();
        let minor = [a, b, c].map(|r| [r[cols[0]], r[cols[1]], r[cols[2]]]);
        // expansion along the last row of [a; b; c; out]
        let sign = if (j + 3) % 2 == 0 { 1.0 } else { -1.0 };
        *o = sign * det3(minor);
    }
    let n = out.iter().map(|v| v * v).sum::<f64>().sqrt();
    out.map(|v| v / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::swap;

    fn st(s0: f64) -> PureState<f64> {
        PureState::new(s0).unwrap()
    }

    fn check(x: [f64; 4], a: f64, b: f64) {
        let m = bell_from_probabilities(x, &st(a), &st(b)).unwrap();
        assert!(m.is_bell(1e-9), "not a Bell measurement for {x:?}");
        let p = swap(&st(a), &st(b), &m).probabilities();
        for (pi, xi) in p.iter().zip(x) {
            assert!((pi - xi).abs() < 1e-8, "{p:?} vs {x:?}");
        }
    }

    #[test]
    fn uniform() {
        check([0.25; 4], 0.7, 0.7);
        check([0.25; 4], 0.9, 0.6);
    }

    #[test]
    fn zz_endpoints() {
        check([0.29, 0.29, 0.21, 0.21], 0.7, 0.7);
        check([0.21, 0.29, 0.21, 0.29], 0.7, 0.7);
    }

    #[test]
    fn table_row_point() {
        check([0.229, 0.229, 0.29, 0.252], 0.7, 0.7);
    }

    #[test]
    fn single_endpoint_hits() {
        check([0.29, 0.25, 0.24, 0.22], 0.7, 0.7);
        check([0.21, 0.25, 0.26, 0.28], 0.7, 0.7);
    }

    #[test]
    fn singlet_inputs() {
        check([0.25; 4], 0.5, 0.5);
    }

    #[test]
    fn infeasible_rejected() {
        let e = bell_from_probabilities([0.4, 0.2, 0.2, 0.2], &st(0.7), &st(0.7)).unwrap_err();
        assert!(e.is_infeasible());
        let e = bell_from_probabilities([0.25, 0.25, 0.25, 0.3], &st(0.7), &st(0.7)).unwrap_err();
        assert!(e.is_infeasible());
        let e = bell_from_probabilities([0.3, 0.2, 0.25, 0.25], &st(0.5), &st(0.5)).unwrap_err();
        assert!(e.is_infeasible());
    }

    #[test]
    fn cofactor_completes_basis() {
        let r = solve([0.7, 0.6, 0.4, 0.3]).unwrap();
        let mut m = [[0.0; 4]; 4];
        m.copy_from_slice(&r);
        for i in 0..4 {
            for j in 0..4 {
                let d: f64 = (0..4).map(|c| m[i][c] * m[j][c]).sum();
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-9);
            }
        }
    }
}
