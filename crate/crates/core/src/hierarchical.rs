//! Scalar entanglement recursions `E -> E'` on hierarchical lattices, with
//! `E = 2 phi1` the SCP of a bond.
//!
//! All three maps chain two operations: an XZ swap, which turns SCPs
//! `a, b` into `W(a, b) = 1 - sqrt(1 - a(2-a) b(2-b))`, and the
//! deterministic distillation of two states, which gives
//! `min{1, 2(1 - (1 - a/2)(1 - b/2))}`.

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RecursionKind {
    Diamond,
    Tree,
    Centipede,
}

impl std::str::FromStr for RecursionKind {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "diamond" => Ok(Self::Diamond),
            "tree" => Ok(Self::Tree),
            "centipede" => Ok(Self::Centipede),
            other => Err(crate::error::Error::InvalidInput(format!(
                "unknown recursion kind '{other}' (diamond, tree, centipede)"
            ))),
        }
    }
}

/// SCP after an XZ swap of bonds with SCPs `a` and `b`.
pub fn wce_swap<S: Real>(a: S, b: S) -> S {
    let two = S::lit(2.0);
    S::one_minus_sqrt_one_minus(a * (two - a) * b * (two - b))
}

/// SCP after distilling bonds with SCPs `a` and `b`.
pub fn distill_scp<S: Real>(a: S, b: S) -> S {
    let half = S::lit(0.5);
    (S::lit(2.0) * (S::one() - (S::one() - a * half) * (S::one() - b * half))).unit_clamp()
}

/// `min{1, 1 + X/2 - sqrt(1 - X)}` with `X = (2 - E)^2 E^2`.
pub fn diamond_step<S: Real>(e: S) -> S {
    let e = e.unit_clamp();
    let x = ((S::lit(2.0) - e) * e).powi(2).min(S::one());
    (S::one() + x / S::lit(2.0) - (S::one() - x).sqrt()).unit_clamp()
}

/// Two swaps against `E0` bonds, then distillation of two branch copies.
pub fn tree_step<S: Real>(e: S, e0: S) -> S {
    let e_i = wce_swap(e0, e.unit_clamp());
    let e_ii = wce_swap(e0, e_i);
    distill_scp(e_ii, e_ii)
}

/// SCP entering the tree recursion: two `E0` bonds swapped, two such
/// results distilled.
pub fn tree_initial<S: Real>(e0: S) -> S {
    let e1 = wce_swap(e0, e0);
    distill_scp(e1, e1)
}

/// Two swaps against `E0` bonds, then distillation with a spare `E0` bond.
pub fn centipede_step<S: Real>(e: S, e0: S) -> S {
    let e_i = wce_swap(e0, e.unit_clamp());
    let e_ii = wce_swap(e0, e_i);
    distill_scp(e0, e_ii)
}

/// A recursion with its bond parameter. `e0` is ignored by the diamond.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecursionMap<S> {
    pub kind: RecursionKind,
    pub e0: S,
}

impl<S: Real> RecursionMap<S> {
    pub fn new(kind: RecursionKind, e0: S) -> Self {
        Self { kind, e0 }
    }

    pub fn diamond() -> Self {
        Self { kind: RecursionKind::Diamond, e0: S::zero() }
    }

    pub fn eval(&self, e: S) -> S {
        match self.kind {
            RecursionKind::Diamond => diamond_step(e),
            RecursionKind::Tree => tree_step(e, self.e0),
            RecursionKind::Centipede => centipede_step(e, self.e0),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stability {
    Stable,
    Unstable,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPoint {
    pub value: f64,
    pub stability: Stability,
    pub derivative: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointReport {
    pub fixed_points: Vec<FixedPoint>,
    pub reaches_one: bool,
    pub steps_to_one: Option<usize>,
    /// Iterates starting with the initial value.
    pub trace: Vec<f64>,
}

const GRID: usize = 10_000;
const DERIV_STEP: f64 = 1e-6;
const ONE_TOL: f64 = 1e-12;

fn bisect(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut ga = g(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if gm.signum() == ga.signum() {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
        if b - a < 1e-15 {
            break;
        }
    }
    0.5 * (a + b)
}

fn derivative(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    let h = DERIV_STEP;
    let fx = f(x);
    if x - h < 0.0 {
        return (f(x + h) - fx) / h;
    }
    if x + h > 1.0 {
        return (fx - f(x - h)) / h;
    }
    let (lo, hi) = (f(x - h), f(x + h));
    // at the clamp, use the saturated side
    if hi >= 1.0 && fx >= 1.0 {
        return (fx - lo) / h;
    }
    (hi - lo) / (2.0 * h)
}

/// Fixed points of `map` on `[0, 1]` and the orbit of `from`.
pub fn analyze(map: &RecursionMap<f64>, from: f64, max_iters: usize) -> FixedPointReport {
    let f = |e: f64| map.eval(e);
    let g = |e: f64| f(e) - e;
    let mut roots: Vec<f64> = Vec::new();
    let xs: Vec<f64> = (0..=GRID).map(|i| i as f64 / GRID as f64).collect();
    let gs: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    for i in 0..=GRID {
        if gs[i] == 0.0 {
            roots.push(xs[i]);
        } else if i < GRID && gs[i + 1] != 0.0 && gs[i].signum() != gs[i + 1].signum() {
            roots.push(bisect(g, xs[i], xs[i + 1]));
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-9);
    let fixed_points = roots
        .into_iter()
        .map(|value| {
            let d = derivative(f, value);
            let stability = if d.abs() < 1.0 { Stability::Stable } else { Stability::Unstable };
            FixedPoint { value, stability, derivative: d }
        })
        .collect();

    let mut trace = vec![from];
    let mut e = from;
    let mut steps_to_one = if e >= 1.0 - ONE_TOL { Some(0) } else { None };
    for i in 0..max_iters.max(1) {
        if steps_to_one.is_some() {
            break;
        }
        e = f(e);
        trace.push(e);
        if e >= 1.0 - ONE_TOL {
            steps_to_one = Some(i + 1);
        }
    }
    FixedPointReport { fixed_points, reaches_one: steps_to_one.is_some(), steps_to_one, trace }
}

/// `1 - sqrt(1 - sqrt(2 (sqrt 2 - 1)))`.
pub fn tree_threshold_closed_form() -> f64 {
    1.0 - (1.0 - (2.0 * (2f64.sqrt() - 1.0)).sqrt()).sqrt()
}

/// Singlet threshold of each lattice: the unstable fixed point for the
/// diamond; for tree and centipede the smallest `E0` for which `E = 1`
/// is a fixed point.
pub fn threshold(kind: RecursionKind) -> f64 {
    match kind {
        RecursionKind::Diamond => bisect(|e| diamond_step(e) - e, 0.1, 0.6),
        RecursionKind::Tree => {
            let raw = |e0: f64| {
                let e1 = wce_swap(e0, e0);
                2.0 * (1.0 - (1.0 - e1 / 2.0).powi(2)) - 1.0
            };
            bisect(raw, 0.3, 0.95)
        }
        RecursionKind::Centipede => {
            let raw = |e0: f64| 2.0 * (1.0 - (1.0 - e0 / 2.0) * (1.0 - wce_swap(e0, e0) / 2.0)) - 1.0;
            bisect(raw, 0.3, 0.95)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond_examples() {
        assert_eq!(diamond_step(1.0), 1.0);
        let th = threshold(RecursionKind::Diamond);
        assert!((th - 0.349).abs() < 1e-3);
        assert!((diamond_step(th) - th).abs() < 1e-10);
        assert!(diamond_step(0.2) < 0.2);
        assert_eq!(diamond_step(0.0), 0.0);
    }

    #[test]
    fn tree_examples() {
        let th = threshold(RecursionKind::Tree);
        assert!((th - tree_threshold_closed_form()).abs() < 1e-10);
        assert!((th - 0.70029).abs() < 1e-4);
        assert!(tree_step(0.5, 0.5) < 0.5);
        assert_eq!(tree_step(0.0, 0.6), 0.0);
        // just above threshold: the entering bond and E = 1 both give a singlet
        assert_eq!(tree_initial(th + 1e-9), 1.0);
        assert_eq!(tree_step(1.0, th + 1e-9), 1.0);
    }

    #[test]
    fn centipede_examples() {
        let th = threshold(RecursionKind::Centipede);
        assert!((th - 0.649).abs() < 1e-3);
        assert!((centipede_step(0.0, 0.3f64) - 0.3).abs() < 1e-15);
        assert_eq!(centipede_step(0.0, 0.0), 0.0);
    }

    #[test]
    fn diamond_fixed_points() {
        let r = analyze(&RecursionMap::diamond(), 0.5, 50);
        let v: Vec<(f64, Stability)> = r.fixed_points.iter().map(|p| (p.value, p.stability)).collect();
        assert_eq!(v.len(), 3, "{v:?}");
        assert_eq!(v[0], (0.0, Stability::Stable));
        assert!((v[1].0 - 0.349).abs() < 1e-3 && v[1].1 == Stability::Unstable);
        assert_eq!(v[2], (1.0, Stability::Stable));
        assert!(r.reaches_one);
    }

    #[test]
    fn tree_below_threshold_decays() {
        let r = analyze(&RecursionMap::new(RecursionKind::Tree, 0.3), 0.3, 200);
        assert_eq!(r.fixed_points.len(), 1);
        assert_eq!(r.fixed_points[0].value, 0.0);
        assert_eq!(r.fixed_points[0].stability, Stability::Stable);
        assert!(!r.reaches_one);
    }

    #[test]
    fn centipede_above_threshold_reaches_one() {
        let r = analyze(&RecursionMap::new(RecursionKind::Centipede, 0.65), 0.65, 1000);
        assert!(r.reaches_one);
        assert!(r.steps_to_one.unwrap() < 1000);
        assert_eq!(*r.trace.last().unwrap(), 1.0);
    }

    #[test]
    fn centipede_small_e0_stalls_below_one() {
        let r = analyze(&RecursionMap::new(RecursionKind::Centipede, 0.3), 0.3, 500);
        let stable: Vec<_> = r.fixed_points.iter().filter(|p| p.stability == Stability::Stable).collect();
        assert_eq!(stable.len(), 1);
        assert!(stable[0].value > 0.3 && stable[0].value < 1.0);
        assert!(!r.reaches_one);
    }
}
