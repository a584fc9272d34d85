//! Bond-percolation Monte Carlo.
//!
//! Bond `k` of trial `t` is open when a hash of `(seed, t, k)` falls below
//! its probability. Bonds can then be sampled lazily in any order, every
//! probability sees the same uniforms, and the result does not depend on
//! how trials are spread over threads.

use std::collections::VecDeque;

use petgraph::unionfind::UnionFind;
use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;

use super::lattice::{transform_square_doubling, Boundary, LatticeGraph, LatticeKind};
use crate::error::{Error, Result};

/// Upper bound on trials per call.
pub const MAX_TRIALS: u64 = 100_000_000;

fn mix(x: u64) -> u64 {
    SplitMix64::seed_from_u64(x).next_u64()
}

/// Open/closed state of every bond in one trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BondSampler {
    key: u64,
}

impl BondSampler {
    pub fn new(seed: u64, trial: u64) -> Self {
        Self { key: mix(mix(seed) ^ mix(trial.wrapping_add(0x6a09_e667_f3bc_c909))) }
    }

    /// Uniform in `[0, 1)` attached to `bond`.
    #[inline]
    pub fn uniform(&self, bond: u32) -> f64 {
        (mix(self.key ^ bond as u64) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    #[inline]
    pub fn is_open(&self, bond: u32, p: f64) -> bool {
        self.uniform(bond) < p
    }
}

/// A Bernoulli frequency and its standard error `sqrt(q(1-q)/n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_err: f64,
}

impl Estimate {
    pub fn from_counts(hits: u64, trials: u64) -> Self {
        let q = hits as f64 / trials as f64;
        Self { value: q, std_err: (q * (1.0 - q) / trials as f64).sqrt() }
    }
}

/// Monte Carlo estimates. `theta_hat`: designated node in the largest
/// cluster; `tau_hat`: `A` and `A'` connected; `pi_hat`: `A` or `A'` in the
/// largest cluster. Absent fields were not measured.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialStats {
    pub trials: u64,
    pub theta_hat: Option<Estimate>,
    pub tau_hat: Option<Estimate>,
    pub pi_hat: Option<Estimate>,
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    if trials > MAX_TRIALS {
        return Err(Error::TooLarge { what: "trials", got: trials as usize, max: MAX_TRIALS as usize });
    }
    Ok(())
}

/// Union-find clusters of one trial, with the root of the largest cluster
/// among `region` nodes (lowest root index on ties).
struct Clusters {
    uf: UnionFind<u32>,
    sizes: Vec<u32>,
}

impl Clusters {
    fn sample(g: &LatticeGraph, sampler: BondSampler) -> Self {
        let n = g.node_count();
        let mut uf = UnionFind::new(n);
        for (k, b) in g.bonds().iter().enumerate() {
            if sampler.is_open(k as u32, b.p) {
                uf.union(b.a, b.b);
            }
        }
        Self { uf, sizes: vec![0; n] }
    }

    fn largest_root(&mut self, region: std::ops::Range<u32>) -> u32 {
        self.sizes.iter_mut().for_each(|s| *s = 0);
        let mut best = (0u32, u32::MAX);
        for i in region {
            let r = self.uf.find_mut(i);
            self.sizes[r as usize] += 1;
            let s = self.sizes[r as usize];
            if s > best.0 || (s == best.0 && r < best.1) {
                best = (s, r);
            }
        }
        best.1
    }

    fn root(&mut self, node: u32) -> u32 {
        self.uf.find_mut(node)
    }
}

fn count_trials<F>(trials: u64, f: F) -> Vec<u64>
where
    F: Fn(u64) -> Vec<bool> + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|t| f(t).into_iter().map(u64::from).collect::<Vec<u64>>())
        .reduce(Vec::new, |a, b| {
            if a.is_empty() {
                return b;
            }
            if b.is_empty() {
                return a;
            }
            a.iter().zip(&b).map(|(x, y)| x + y).collect()
        })
}

/// `theta_hat` for the node returned by [`LatticeGraph::center`].
pub fn run_percolation(g: &LatticeGraph, seed: u64, trials: u64) -> Result<TrialStats> {
    check_trials(trials)?;
    let c = g.center();
    let n = g.node_count() as u32;
    let hits = count_trials(trials, |t| {
        let mut cl = Clusters::sample(g, BondSampler::new(seed, t));
        let big = cl.largest_root(0..n);
        vec![cl.root(c) == big]
    });
    Ok(TrialStats { trials, theta_hat: Some(Estimate::from_counts(hits[0], trials)), tau_hat: None, pi_hat: None })
}

/// `theta_hat` for `a` and `pi_hat` for the pair `(a, a2)`.
pub fn run_percolation_pair(g: &LatticeGraph, a: u32, a2: u32, seed: u64, trials: u64) -> Result<TrialStats> {
    check_trials(trials)?;
    let n = g.node_count() as u32;
    if a >= n || a2 >= n {
        return Err(Error::InvalidInput(format!("node index outside 0..{n}")));
    }
    let hits = count_trials(trials, |t| {
        let mut cl = Clusters::sample(g, BondSampler::new(seed, t));
        let big = cl.largest_root(0..n);
        let (ra, rb) = (cl.root(a), cl.root(a2));
        vec![ra == big, ra == big || rb == big]
    });
    Ok(TrialStats {
        trials,
        theta_hat: Some(Estimate::from_counts(hits[0], trials)),
        tau_hat: None,
        pi_hat: Some(Estimate::from_counts(hits[1], trials)),
    })
}

/// Which central pair `tau` refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum TauPair {
    /// `(c, c)` and `(c+1, c+1)`: the nodes that end up in different
    /// sublattices after doubling.
    #[default]
    Diagonal,
    /// `(c, c)` and `(c+1, c)`.
    Adjacent,
}

impl std::str::FromStr for TauPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "diagonal" => Ok(Self::Diagonal),
            "adjacent" => Ok(Self::Adjacent),
            other => Err(Error::InvalidInput(format!("unknown node pair '{other}' (diagonal, adjacent)"))),
        }
    }
}

/// The two central nodes of a square lattice for `pair`.
pub fn central_pair(g: &LatticeGraph, pair: TauPair) -> Result<(u32, u32)> {
    if g.kind() != LatticeKind::Square {
        return Err(Error::MalformedLattice("a square lattice is required".into()));
    }
    let c = (g.l() / 2) as i32;
    let d = match pair {
        TauPair::Diagonal => (1, 1),
        TauPair::Adjacent => (1, 0),
    };
    let a = g.node_at(c, c).expect("center");
    let b = g.node_at(c + d.0, c + d.1).ok_or_else(|| Error::InvalidInput("lattice too small".into()))?;
    Ok((a, b))
}

struct Bfs {
    mark: Vec<u32>,
    epoch: u32,
    queues: [VecDeque<u32>; 2],
}

impl Bfs {
    fn new(n: usize) -> Self {
        Self { mark: vec![0; n], epoch: 0, queues: [VecDeque::new(), VecDeque::new()] }
    }

    /// Grows the clusters of `a` and `b` alternately, always from the
    /// smaller frontier, until they meet or one is exhausted.
    fn connected(&mut self, g: &LatticeGraph, s: BondSampler, a: u32, b: u32) -> bool {
        if a == b {
            return true;
        }
        self.epoch += 1;
        let tag = |side: usize, epoch: u32| epoch * 2 + side as u32;
        for q in &mut self.queues {
            q.clear();
        }
        self.mark[a as usize] = tag(0, self.epoch);
        self.mark[b as usize] = tag(1, self.epoch);
        self.queues[0].push_back(a);
        self.queues[1].push_back(b);
        loop {
            if self.queues[0].is_empty() || self.queues[1].is_empty() {
                return false;
            }
            let side = usize::from(self.queues[1].len() < self.queues[0].len());
            let (own, other) = (tag(side, self.epoch), tag(1 - side, self.epoch));
            let u = self.queues[side].pop_front().expect("non-empty");
            for &(v, bond) in g.neighbors(u) {
                if !s.is_open(bond, g.bonds()[bond as usize].p) {
                    continue;
                }
                let m = self.mark[v as usize];
                if m == other {
                    return true;
                }
                if m != own {
                    self.mark[v as usize] = own;
                    self.queues[side].push_back(v);
                }
            }
        }
    }
}

/// `tau_hat` on an open square lattice, sampling bonds lazily.
pub fn tau_estimate(g: &LatticeGraph, seed: u64, trials: u64) -> Result<TrialStats> {
    tau_estimate_with(g, TauPair::Diagonal, seed, trials)
}

pub fn tau_estimate_with(g: &LatticeGraph, pair: TauPair, seed: u64, trials: u64) -> Result<TrialStats> {
    check_trials(trials)?;
    if g.boundary() != Boundary::Open {
        return Err(Error::InvalidInput("tau is measured on an open lattice".into()));
    }
    let (a, b) = central_pair(g, pair)?;
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map_init(|| Bfs::new(g.node_count()), |bfs, t| u64::from(bfs.connected(g, BondSampler::new(seed, t), a, b)))
        .sum();
    Ok(TrialStats { trials, theta_hat: None, tau_hat: Some(Estimate::from_counts(hits, trials)), pi_hat: None })
}

/// Short-path lower bound `2q - q^2`, `q = p^2 + 2p^4 - 2p^5`, on the
/// diagonal-pair connection probability.
pub fn tau_lower_bound(p: f64) -> f64 {
    let q = p * p + 2.0 * p.powi(4) - 2.0 * p.powi(5);
    2.0 * q - q * q
}

/// Single lattice versus its doubled pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoublingReport {
    pub p: f64,
    pub l: usize,
    pub trials: u64,
    /// Square torus of size `l`.
    pub theta: Estimate,
    pub pi: Estimate,
    /// Open square lattice of size `l`, diagonal pair.
    pub tau: Estimate,
    /// `theta` measured on one sublattice of the doubled pair.
    pub theta_doubled: Estimate,
    /// `theta_d^2 (2 - theta_d^2)`.
    pub p_double: f64,
    pub p_double_err: f64,
    pub pi_sq: f64,
    pub pi_sq_err: f64,
    /// `(2 - theta^2) - (2 - tau)^2`; non-negative when doubling loses.
    pub margin: f64,
    pub margin_err: f64,
}

impl DoublingReport {
    /// `(2 - tau)^2 <= 2 - theta^2` within `k` standard errors.
    pub fn inequality_holds(&self, k: f64) -> bool {
        self.margin + k * self.margin_err >= 0.0
    }
}

pub fn doubling_comparison(p: f64, l: usize, seed: u64, trials: u64) -> Result<DoublingReport> {
    if !(0.5..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!("doubling comparison needs p in [0.5, 1], got {p}")));
    }
    check_trials(trials)?;
    let torus = LatticeGraph::square(l, Boundary::Torus, p)?;
    let (a, a2) = central_pair(&torus, TauPair::Diagonal)?;
    let single = run_percolation_pair(&torus, a, a2, seed, trials)?;
    let open = LatticeGraph::square(l, Boundary::Open, p)?;
    let tau = tau_estimate(&open, seed, trials)?.tau_hat.expect("tau measured");

    let doubled = transform_square_doubling(&torus)?;
    let half = (doubled.node_count() / 2) as u32;
    let c = (l / 2) as i32;
    let c = c - c % 2;
    let a_d = doubled.node_at(c, c).expect("even sublattice node");
    let hits = count_trials(trials, |t| {
        let mut cl = Clusters::sample(&doubled, BondSampler::new(seed, t));
        let big = cl.largest_root(0..half);
        vec![cl.root(a_d) == big]
    });
    let theta_d = Estimate::from_counts(hits[0], trials);

    let theta = single.theta_hat.expect("theta measured");
    let pi = single.pi_hat.expect("pi measured");
    let (t, td, pv, tv) = (theta.value, theta_d.value, pi.value, tau.value);
    Ok(DoublingReport {
        p,
        l,
        trials,
        theta,
        pi,
        tau,
        theta_doubled: theta_d,
        p_double: td * td * (2.0 - td * td),
        p_double_err: (4.0 * td - 4.0 * td.powi(3)).abs() * theta_d.std_err,
        pi_sq: pv * pv,
        pi_sq_err: 2.0 * pv * pi.std_err,
        margin: (2.0 - t * t) - (2.0 - tv).powi(2),
        margin_err: (2.0 * t * theta.std_err).hypot(2.0 * (2.0 - tv) * tau.std_err),
    })
}
