//! Subcommand bodies. Every reported number comes from the library.

use entnet::chain::{decay_rate, enumerate_chain, strategy_scp, ChainStrategy};
use entnet::hierarchical::{analyze, threshold, RecursionKind, RecursionMap, Stability};
use entnet::measurement::{bell_from_probabilities, swap as do_swap, ProjectiveMeasurement};
use entnet::merit::{
    merits, square_crossover_phi0, square_numeric_scp_with, square_phi0_star, square_plan,
    two_repeater_bell_plan, two_repeater_numeric_scp_with, window_bounds, OptimizerConfig,
};
use entnet::percolation::{
    central_pair, classical_threshold, doubling_comparison, run_percolation, run_percolation_pair,
    strategy_thresholds, tau_estimate_with, transform_asymmetric_triangular, transform_honeycomb_to_triangular,
    transform_square_doubling, Boundary, LatticeGraph, LatticeKind, TauPair,
};
use entnet::PureState;

use crate::output::{Cell, Table};
use crate::{ChainArgs, CompareArgs, Global, PercolateArgs, RecursionArgs, SquareArgs, SwapArgs};

#[derive(Debug)]
pub enum CliError {
    Lib(entnet::Error),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_infeasible() => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(s) => write!(f, "{s}"),
        }
    }
}

impl From<entnet::Error> for CliError {
    fn from(e: entnet::Error) -> Self {
        CliError::Lib(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Usage(msg.into()))
}

/// `x`, `a:b:step` (inclusive) or `x,y,z`.
pub fn parse_values(s: &str) -> Result<Vec<f64>> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("not a number: '{t}'")));
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return usage(format!("sweep '{s}' must look like start:stop:step"));
        }
        let (a, b, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || !(b >= a) {
            return usage(format!("sweep '{s}' needs start <= stop and a positive step"));
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        if n > 10_000_000 {
            return usage(format!("sweep '{s}' has too many points"));
        }
        return Ok((0..=n).map(|i| a + i as f64 * step).collect());
    }
    s.split(',').map(num).collect()
}

/// `N`, `A..B` (inclusive) or `N,M,...`.
pub fn parse_counts(s: &str) -> Result<Vec<usize>> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("not a count: '{t}'")));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if b < a {
            return usage(format!("empty range '{s}'"));
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(num).collect()
}

fn state(s0: f64) -> Result<PureState> {
    Ok(PureState::new(s0)?)
}

fn in_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return usage(format!("{name} = {x} outside [0, 1]"));
    }
    Ok(())
}

pub fn swap(a: &SwapArgs) -> Result<Table> {
    let (alpha, beta) = (state(a.alpha0)?, state(a.beta0)?);
    let mut bases: Vec<(String, ProjectiveMeasurement<f64>)> = Vec::new();
    if let Some(p) = &a.probs {
        let x = parse_values(p)?;
        if x.len() != 4 {
            return usage("--probs needs four comma-separated values");
        }
        let m = bell_from_probabilities([x[0], x[1], x[2], x[3]], &alpha, &beta)?;
        bases.push(("custom".into(), m));
    } else {
        match a.basis.to_ascii_lowercase().as_str() {
            "zz" => bases.push(("zz".into(), ProjectiveMeasurement::zz())),
            "xz" => bases.push(("xz".into(), ProjectiveMeasurement::xz())),
            "all" => {
                bases.push(("zz".into(), ProjectiveMeasurement::zz()));
                bases.push(("xz".into(), ProjectiveMeasurement::xz()));
            }
            other => return usage(format!("unknown basis '{other}' (zz, xz, all)")),
        }
    }
    let mut t = Table::new(&["basis", "alpha0", "beta0", "p1", "p2", "p3", "p4", "avg_concurrence", "wce", "scp"]);
    for (name, m) in bases {
        let e = do_swap(&alpha, &beta, &m);
        let r = merits(&e)?;
        let p = e.probabilities();
        t.push(vec![
            name.into(),
            alpha.s0().into(),
            beta.s0().into(),
            p[0].into(),
            p[1].into(),
            p[2].into(),
            p[3].into(),
            r.avg_concurrence.into(),
            r.wce.into(),
            r.scp.into(),
        ]);
    }
    Ok(t)
}

pub fn chain(a: &ChainArgs) -> Result<Table> {
    let phi = state(a.phi0)?;
    let ns = parse_counts(&a.n)?;
    let strategies: Vec<ChainStrategy> = if a.strategy.eq_ignore_ascii_case("all") {
        vec![ChainStrategy::Cs, ChainStrategy::Xz, ChainStrategy::Zz]
    } else {
        vec![a.strategy.parse()?]
    };
    let mut t = Table::new(&["n", "strategy", "phi0", "scp", "scp_enumerated"]);
    for &strategy in &strategies {
        for &n in &ns {
            let spec = entnet::ChainSpec::new(n, phi);
            let enumerated = match (a.enumerate, strategy) {
                (Some(max), ChainStrategy::Xz | ChainStrategy::Zz) if n <= max => {
                    let basis =
                        if strategy == ChainStrategy::Xz { ProjectiveMeasurement::xz() } else { ProjectiveMeasurement::zz() };
                    Some(merits(&enumerate_chain(&spec, &[basis])?)?.scp)
                }
                _ => None,
            };
            let name = format!("{strategy:?}").to_ascii_lowercase();
            t.push(vec![n.into(), name.into(), phi.s0().into(), strategy_scp(&spec, strategy).into(), enumerated.into()]);
        }
    }
    Ok(t)
}

fn optimizer(restarts: usize, g: &Global) -> OptimizerConfig {
    OptimizerConfig { restarts, seed: g.seed, ..Default::default() }
}

pub fn square(a: &SquareArgs, g: &Global) -> Result<Table> {
    let cfg = optimizer(a.restarts, g);
    let mut t = Table::new(&["phi0", "regime", "pstar_sq", "p1", "p2", "p3", "p4", "scp_bell", "scp_numeric"]);
    for x in parse_values(&a.phi0)? {
        let phi = state(x)?;
        let plan = square_plan(&phi);
        let numeric = a.numeric.then(|| square_numeric_scp_with(&phi, &cfg).value);
        t.push(vec![
            phi.s0().into(),
            plan.regime.index().into(),
            plan.pstar_sq.into(),
            plan.probs[0].into(),
            plan.probs[1].into(),
            plan.probs[2].into(),
            plan.probs[3].into(),
            plan.scp_bell.into(),
            numeric.into(),
        ]);
    }
    Ok(t)
}

pub fn recursion(a: &RecursionArgs) -> Result<Table> {
    let kind: RecursionKind = a.kind.parse()?;
    in_unit("e0", a.e0)?;
    let map = RecursionMap::new(kind, a.e0);
    if a.fixed_points || a.orbit.is_some() {
        let from = a.orbit.unwrap_or(a.e0);
        in_unit("orbit", from)?;
        let r = analyze(&map, from, a.max_iters);
        if a.fixed_points {
            let mut t = Table::new(&["value", "stability", "derivative"]);
            for p in r.fixed_points {
                let s = if p.stability == Stability::Stable { "stable" } else { "unstable" };
                t.push(vec![p.value.into(), s.into(), p.derivative.into()]);
            }
            return Ok(t);
        }
        let mut t = Table::new(&["step", "e"]);
        for (i, e) in r.trace.into_iter().enumerate() {
            t.push(vec![i.into(), e.into()]);
        }
        return Ok(t);
    }
    let th = threshold(kind);
    let mut t = Table::new(&["e", "e_next", "grows", "threshold"]);
    for e in parse_values(&a.sweep)? {
        in_unit("sweep value", e)?;
        let next = map.eval(e);
        t.push(vec![e.into(), next.into(), (next > e).into(), th.into()]);
    }
    Ok(t)
}

fn with_threads<T: Send>(g: &Global, f: impl FnOnce() -> T + Send) -> Result<T> {
    match g.threads {
        None => Ok(f()),
        Some(0) => usage("--threads must be at least 1"),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn build_lattice(a: &PercolateArgs, p: f64) -> Result<LatticeGraph> {
    let kind: LatticeKind = a.lattice.parse()?;
    let boundary: Boundary = a.boundary.parse()?;
    let g = match kind {
        LatticeKind::Square => LatticeGraph::square(a.l, boundary, p)?,
        LatticeKind::Triangular => LatticeGraph::triangular(a.l, boundary, p)?,
        LatticeKind::Honeycomb => LatticeGraph::honeycomb(a.l, boundary, p)?,
        LatticeKind::HoneycombDoubled => LatticeGraph::honeycomb_doubled(a.l, boundary, p)?,
        LatticeKind::AsymmetricTriangular => {
            if boundary != Boundary::Torus {
                return usage("the asymmetric triangular lattice is built on a torus");
            }
            LatticeGraph::asymmetric_triangular(a.l, p, a.p_dashed)?
        }
        LatticeKind::SquareDoubledPair => transform_square_doubling(&LatticeGraph::square(a.l, boundary, p)?)?,
    };
    if !a.transform {
        return Ok(g);
    }
    Ok(match kind {
        LatticeKind::Square => transform_square_doubling(&g)?,
        LatticeKind::HoneycombDoubled => transform_honeycomb_to_triangular(&g)?,
        LatticeKind::AsymmetricTriangular => {
            transform_asymmetric_triangular(&g, &PureState::from_scp(p)?, &PureState::from_scp(a.p_dashed)?)?
        }
        other => return usage(format!("no transformation defined for {other:?}")),
    })
}

pub fn percolate(a: &PercolateArgs, g: &Global) -> Result<Table> {
    in_unit("p-dashed", a.p_dashed)?;
    let pair: TauPair = a.pair.parse()?;
    let measure = a.measure.to_ascii_lowercase();
    if !["theta", "pi", "tau"].contains(&measure.as_str()) {
        return usage(format!("unknown measure '{measure}' (theta, pi, tau)"));
    }
    let mut t = Table::new(&["lattice", "transform", "boundary", "L", "p", "trials", "seed", "measure", "estimate", "std_err"]);
    for p in parse_values(&a.p)? {
        in_unit("p", p)?;
        let lattice = build_lattice(a, p)?;
        let stats = with_threads(g, || -> entnet::Result<_> {
            Ok(match measure.as_str() {
                "theta" => run_percolation(&lattice, g.seed, a.trials)?.theta_hat,
                "pi" => {
                    let (x, y) = central_pair(&lattice, pair)?;
                    run_percolation_pair(&lattice, x, y, g.seed, a.trials)?.pi_hat
                }
                _ => tau_estimate_with(&lattice, pair, g.seed, a.trials)?.tau_hat,
            })
        })??
        .expect("requested estimate is measured");
        t.push(vec![
            a.lattice.to_ascii_lowercase().into(),
            a.transform.into(),
            a.boundary.to_ascii_lowercase().into(),
            a.l.into(),
            p.into(),
            a.trials.into(),
            g.seed.into(),
            measure.as_str().into(),
            stats.value.into(),
            stats.std_err.into(),
        ]);
    }
    Ok(t)
}

pub fn compare(a: &CompareArgs, g: &Global) -> Result<Table> {
    match a.mode.to_ascii_lowercase().as_str() {
        "thresholds" => {
            let mut t = Table::new(&["name", "value"]);
            for (name, kind) in
                [("square", LatticeKind::Square), ("triangular", LatticeKind::Triangular), ("honeycomb", LatticeKind::Honeycomb)]
            {
                t.push(vec![format!("classical_{name}").into(), classical_threshold(kind)?.into()]);
            }
            for (name, v) in strategy_thresholds().as_pairs() {
                t.push(vec![format!("honeycomb_doubled_{name}").into(), v.into()]);
            }
            for (name, kind) in
                [("diamond", RecursionKind::Diamond), ("tree", RecursionKind::Tree), ("centipede", RecursionKind::Centipede)]
            {
                t.push(vec![format!("recursion_{name}").into(), threshold(kind).into()]);
            }
            t.push(vec!["square_phi0_star".into(), square_phi0_star::<f64>().into()]);
            t.push(vec!["square_bell_crossover_phi0".into(), square_crossover_phi0().into()]);
            Ok(t)
        }
        "two-repeater" | "two_repeater" => {
            let (b, c) = (state(a.b0)?, state(a.c0)?);
            let cfg = optimizer(a.restarts, g);
            let window = window_bounds(&b, &c);
            let sweep = a.sweep.as_deref().unwrap_or("0.5:0.99:0.01");
            let mut t = Table::new(&[
                "a0", "b0", "c0", "regime", "pstar", "scp_bell", "scp_numeric", "window_lo", "window_hi",
            ]);
            for x in parse_values(sweep)? {
                let a_state = state(x)?;
                let plan = two_repeater_bell_plan(&a_state, &b, &c);
                let numeric = a.numeric.then(|| two_repeater_numeric_scp_with(&a_state, &b, &c, &cfg).value);
                t.push(vec![
                    a_state.s0().into(),
                    b.s0().into(),
                    c.s0().into(),
                    plan.regime.index().into(),
                    plan.pstar.into(),
                    plan.scp_bell.into(),
                    numeric.into(),
                    window.map(|w| w.0).into(),
                    window.map(|w| w.1).into(),
                ]);
            }
            Ok(t)
        }
        "decay" => {
            let phi = state(a.phi0)?;
            let ns = parse_counts(&a.n)?;
            let (lo, hi) = (ns[0], *ns.last().expect("non-empty"));
            let mut t = Table::new(&["strategy", "phi0", "n_from", "n_to", "slope"]);
            for s in [ChainStrategy::Cs, ChainStrategy::Xz, ChainStrategy::Zz] {
                let slope = decay_rate(s, &phi, lo..=hi)?;
                t.push(vec![format!("{s:?}").to_ascii_lowercase().into(), phi.s0().into(), lo.into(), hi.into(), slope.into()]);
            }
            Ok(t)
        }
        "doubling" => {
            let sweep = a.sweep.as_deref().unwrap_or("0.505,0.55,0.6");
            let mut t = Table::new(&[
                "p", "L", "trials", "theta", "theta_err", "tau", "tau_err", "pi", "pi_err", "theta_doubled",
                "p_double", "p_double_err", "pi_sq", "pi_sq_err", "margin", "margin_err", "inequality_holds_3sigma",
            ]);
            for p in parse_values(sweep)? {
                let r = with_threads(g, || doubling_comparison(p, a.l, g.seed, a.trials))??;
                t.push(vec![
                    r.p.into(),
                    r.l.into(),
                    r.trials.into(),
                    r.theta.value.into(),
                    r.theta.std_err.into(),
                    r.tau.value.into(),
                    r.tau.std_err.into(),
                    r.pi.value.into(),
                    r.pi.std_err.into(),
                    r.theta_doubled.value.into(),
                    r.p_double.into(),
                    r.p_double_err.into(),
                    r.pi_sq.into(),
                    r.pi_sq_err.into(),
                    r.margin.into(),
                    r.margin_err.into(),
                    Cell::Bool(r.inequality_holds(3.0)),
                ]);
            }
            Ok(t)
        }
        other => usage(format!("unknown mode '{other}' (thresholds, two-repeater, decay, doubling)")),
    }
}
