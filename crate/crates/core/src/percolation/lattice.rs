//! Lattice graphs with a singlet probability on every bond, and the
//! measurement-induced lattice transformations.

use crate::error::{Error, Result};

/// Largest accepted linear size.
pub const MAX_L: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LatticeKind {
    Square,
    Triangular,
    /// Brick-wall embedding: `(x, y)-(x+1, y)` always, `(x, y)-(x, y+1)`
    /// when `x + y` is even.
    Honeycomb,
    /// Honeycomb with every bond present twice.
    HoneycombDoubled,
    /// Triangular lattice whose bonds are either solid (`p_ok`) or dashed.
    AsymmetricTriangular,
    /// Two disjoint square lattices of twice the lattice constant.
    SquareDoubledPair,
}

impl std::str::FromStr for LatticeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "square" => Ok(Self::Square),
            "triangular" => Ok(Self::Triangular),
            "honeycomb" => Ok(Self::Honeycomb),
            "honeycomb_doubled" => Ok(Self::HoneycombDoubled),
            "asymmetric_triangular" => Ok(Self::AsymmetricTriangular),
            "square_doubled_pair" => Ok(Self::SquareDoubledPair),
            other => Err(Error::InvalidInput(format!("unknown lattice kind '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    Torus,
    Open,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "torus" | "periodic" => Ok(Self::Torus),
            "open" => Ok(Self::Open),
            other => Err(Error::InvalidInput(format!("unknown boundary '{other}' (torus, open)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bond {
    pub a: u32,
    pub b: u32,
    /// Probability that the bond holds a singlet.
    pub p: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeGraph {
    kind: LatticeKind,
    l: usize,
    boundary: Boundary,
    coords: Vec<(i32, i32)>,
    bonds: Vec<Bond>,
    offsets: Vec<u32>,
    /// `(neighbor, bond index)` per node, CSR layout.
    adjacency: Vec<(u32, u32)>,
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!("bond probability {p} outside [0, 1]")));
    }
    Ok(())
}

fn check_l(l: usize, boundary: Boundary, even: bool) -> Result<()> {
    if l < 2 {
        return Err(Error::InvalidInput(format!("lattice size {l} must be at least 2")));
    }
    if l > MAX_L {
        return Err(Error::TooLarge { what: "lattice size", got: l, max: MAX_L });
    }
    if even && boundary == Boundary::Torus && l % 2 == 1 {
        return Err(Error::InvalidInput(format!("lattice size {l} must be even on a torus")));
    }
    Ok(())
}

/// Node grid of an `l x l` lattice with the neighbor at offset `(dx, dy)`.
fn grid_bond(l: usize, boundary: Boundary, x: usize, y: usize, dx: i64, dy: i64) -> Option<u32> {
    let (nx, ny) = (x as i64 + dx, y as i64 + dy);
    let li = l as i64;
    match boundary {
        Boundary::Torus => Some((nx.rem_euclid(li) + ny.rem_euclid(li) * li) as u32),
        Boundary::Open => {
            if nx < 0 || ny < 0 || nx >= li || ny >= li {
                None
            } else {
                Some((nx + ny * li) as u32)
            }
        }
    }
}

impl LatticeGraph {
    /// Builds the CSR adjacency from a bond list.
    pub fn from_parts(
        kind: LatticeKind,
        l: usize,
        boundary: Boundary,
        coords: Vec<(i32, i32)>,
        bonds: Vec<Bond>,
    ) -> Result<Self> {
        let n = coords.len();
        let mut degree = vec![0u32; n + 1];
        for b in &bonds {
            check_p(b.p)?;
            if b.a as usize >= n || b.b as usize >= n || b.a == b.b {
                return Err(Error::MalformedLattice(format!("bond {}-{} invalid for {n} nodes", b.a, b.b)));
            }
            degree[b.a as usize] += 1;
            degree[b.b as usize] += 1;
        }
        let mut offsets = vec![0u32; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + degree[i];
        }
        let mut fill = offsets.clone();
        let mut adjacency = vec![(0u32, 0u32); offsets[n] as usize];
        for (k, b) in bonds.iter().enumerate() {
            adjacency[fill[b.a as usize] as usize] = (b.b, k as u32);
            fill[b.a as usize] += 1;
            adjacency[fill[b.b as usize] as usize] = (b.a, k as u32);
            fill[b.b as usize] += 1;
        }
        Ok(Self { kind, l, boundary, coords, bonds, offsets, adjacency })
    }

    fn grid(kind: LatticeKind, l: usize, boundary: Boundary, edges: impl Fn(usize, usize) -> Vec<(i64, i64, f64)>) -> Result<Self> {
        let coords = (0..l * l).map(|i| ((i % l) as i32, (i / l) as i32)).collect();
        let mut bonds = Vec::new();
        for y in 0..l {
            for x in 0..l {
                for (dx, dy, p) in edges(x, y) {
                    if let Some(b) = grid_bond(l, boundary, x, y, dx, dy) {
                        bonds.push(Bond { a: (x + y * l) as u32, b, p });
                    }
                }
            }
        }
        Self::from_parts(kind, l, boundary, coords, bonds)
    }

    pub fn square(l: usize, boundary: Boundary, p: f64) -> Result<Self> {
        check_l(l, boundary, false)?;
        check_p(p)?;
        if boundary == Boundary::Torus && l < 3 {
            return Err(Error::InvalidInput("a square torus needs l >= 3".into()));
        }
        Self::grid(LatticeKind::Square, l, boundary, |_, _| vec![(1, 0, p), (0, 1, p)])
    }

    /// Square lattice plus the `(1, 1)` diagonals.
    pub fn triangular(l: usize, boundary: Boundary, p: f64) -> Result<Self> {
        check_l(l, boundary, false)?;
        check_p(p)?;
        if boundary == Boundary::Torus && l < 3 {
            return Err(Error::InvalidInput("a triangular torus needs l >= 3".into()));
        }
        Self::grid(LatticeKind::Triangular, l, boundary, |_, _| vec![(1, 0, p), (0, 1, p), (1, 1, p)])
    }

    pub fn honeycomb(l: usize, boundary: Boundary, p: f64) -> Result<Self> {
        Self::honeycomb_with(LatticeKind::Honeycomb, 1, l, boundary, p)
    }

    pub fn honeycomb_doubled(l: usize, boundary: Boundary, p: f64) -> Result<Self> {
        Self::honeycomb_with(LatticeKind::HoneycombDoubled, 2, l, boundary, p)
    }

    fn honeycomb_with(kind: LatticeKind, copies: usize, l: usize, boundary: Boundary, p: f64) -> Result<Self> {
        check_l(l, boundary, true)?;
        check_p(p)?;
        if boundary == Boundary::Torus && l < 4 {
            return Err(Error::InvalidInput("a honeycomb torus needs l >= 4".into()));
        }
        Self::grid(kind, l, boundary, |x, y| {
            let mut e = vec![(1, 0, p)];
            if (x + y) % 2 == 0 {
                e.push((0, 1, p));
            }
            e.into_iter().flat_map(|b| std::iter::repeat(b).take(copies)).collect()
        })
    }

    /// Triangular torus where node `(x, y)` with both coordinates even is
    /// coarse. A bond along direction `d` is solid (`p_solid`) when one end
    /// is coarse and the other is the midpoint of two coarse nodes along
    /// `d`; every other bond is dashed (`p_dashed`).
    pub fn asymmetric_triangular(l: usize, p_solid: f64, p_dashed: f64) -> Result<Self> {
        check_l(l, Boundary::Torus, true)?;
        check_p(p_solid)?;
        check_p(p_dashed)?;
        if l < 4 {
            return Err(Error::InvalidInput("an asymmetric triangular torus needs l >= 4".into()));
        }
        Self::grid(LatticeKind::AsymmetricTriangular, l, Boundary::Torus, |x, y| {
            [(1i64, 0i64), (0, 1), (1, 1)]
                .into_iter()
                .map(|(dx, dy)| {
                    let (nx, ny) = ((x as i64 + dx).rem_euclid(l as i64), (y as i64 + dy).rem_euclid(l as i64));
                    let par = |a: i64, b: i64| (a.rem_euclid(2), b.rem_euclid(2));
                    let here = par(x as i64, y as i64);
                    let there = par(nx, ny);
                    let solid = (here == (0, 0) && there == (dx, dy)) || (there == (0, 0) && here == (dx, dy));
                    (dx, dy, if solid { p_solid } else { p_dashed })
                })
                .collect()
        })
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn node_count(&self) -> usize {
        self.coords.len()
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn coord(&self, node: u32) -> (i32, i32) {
        self.coords[node as usize]
    }

    #[inline]
    pub fn neighbors(&self, node: u32) -> &[(u32, u32)] {
        let (a, b) = (self.offsets[node as usize] as usize, self.offsets[node as usize + 1] as usize);
        &self.adjacency[a..b]
    }

    pub fn degree(&self, node: u32) -> usize {
        self.neighbors(node).len()
    }

    /// The node at lattice coordinates `(x, y)`, if present.
    pub fn node_at(&self, x: i32, y: i32) -> Option<u32> {
        if matches!(self.kind, LatticeKind::Square | LatticeKind::Triangular | LatticeKind::Honeycomb
            | LatticeKind::HoneycombDoubled | LatticeKind::AsymmetricTriangular)
        {
            let l = self.l as i32;
            if x < 0 || y < 0 || x >= l || y >= l {
                return None;
            }
            return Some((x + y * l) as u32);
        }
        self.coords.iter().position(|&c| c == (x, y)).map(|i| i as u32)
    }

    /// Node closest to the middle of the coordinate range.
    pub fn center(&self) -> u32 {
        let (mx, my) = self.coords.iter().fold((0i64, 0i64), |(a, b), &(x, y)| (a.max(x as i64), b.max(y as i64)));
        let target = ((mx / 2) as i32, (my / 2) as i32);
        let target = (target.0 - target.0 % 2, target.1 - target.1 % 2);
        self.node_at(target.0, target.1).unwrap_or_else(|| {
            (0..self.coords.len() as u32)
                .min_by_key(|&i| {
                    let (x, y) = self.coords[i as usize];
                    ((x - target.0).abs() + (y - target.1).abs(), i)
                })
                .expect("non-empty lattice")
        })
    }

    /// Same geometry with every bond probability replaced.
    pub fn with_uniform_p(&self, p: f64) -> Result<Self> {
        check_p(p)?;
        let mut g = self.clone();
        g.bonds.iter_mut().for_each(|b| b.p = p);
        Ok(g)
    }

    /// The common bond probability, if all bonds share one.
    pub fn uniform_p(&self) -> Option<f64> {
        let first = self.bonds.first()?.p;
        self.bonds.iter().all(|b| b.p == first).then_some(first)
    }
}

/// Replaces every odd node (`x + y` odd) of a doubled honeycomb torus by
/// the swaps pairing its six bond ends: each odd node links its three even
/// neighbors pairwise. Even nodes then form a triangular lattice with half
/// the nodes and `3V/2` bonds, each with the input singlet probability.
pub fn transform_honeycomb_to_triangular(g: &LatticeGraph) -> Result<LatticeGraph> {
    if g.kind() != LatticeKind::HoneycombDoubled || g.boundary() != Boundary::Torus {
        return Err(Error::MalformedLattice("expected a doubled honeycomb torus".into()));
    }
    let p = g.uniform_p().ok_or_else(|| Error::MalformedLattice("bond probabilities are not uniform".into()))?;
    let parity = |n: u32| {
        let (x, y) = g.coord(n);
        (x + y).rem_euclid(2)
    };
    let mut new_index = vec![u32::MAX; g.node_count()];
    let mut coords = Vec::with_capacity(g.node_count() / 2);
    for n in 0..g.node_count() as u32 {
        if parity(n) == 0 {
            new_index[n as usize] = coords.len() as u32;
            coords.push(g.coord(n));
        }
    }
    let mut bonds = Vec::with_capacity(3 * coords.len());
    for n in 0..g.node_count() as u32 {
        if parity(n) == 0 {
            continue;
        }
        let mut nb: Vec<u32> = g.neighbors(n).iter().map(|&(m, _)| m).collect();
        nb.sort_unstable();
        // doubled bonds: every neighbor appears twice
        if nb.len() != 6 || nb.chunks(2).any(|c| c[0] != c[1]) {
            return Err(Error::MalformedLattice(format!("node {n} does not carry three doubled bonds")));
        }
        let three = [nb[0], nb[2], nb[4]];
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            bonds.push(Bond { a: new_index[three[i] as usize], b: new_index[three[j] as usize], p });
        }
    }
    LatticeGraph::from_parts(LatticeKind::Triangular, g.l(), Boundary::Torus, coords, bonds)
}

/// Drops the dashed bonds of an asymmetric triangular torus and lets every
/// midpoint node swap its two solid bonds. Coarse nodes then form a
/// triangular lattice of half the linear size with bond probability
/// `p_ok = 2 phi1`. Requires `p_c < p_ok < sqrt(p_c)` for the triangular
/// threshold `p_c`, the window where the swap beats classical percolation,
/// and `phi_tilde` strictly less entangled than `phi`.
pub fn transform_asymmetric_triangular(
    g: &LatticeGraph,
    phi: &crate::states::PureState<f64>,
    phi_tilde: &crate::states::PureState<f64>,
) -> Result<LatticeGraph> {
    if g.kind() != LatticeKind::AsymmetricTriangular {
        return Err(Error::MalformedLattice("expected an asymmetric triangular lattice".into()));
    }
    let p_ok = phi.scp();
    let pc = super::classical_threshold(LatticeKind::Triangular)?;
    if !(pc < p_ok && p_ok < pc.sqrt()) {
        return Err(Error::Infeasible(format!(
            "p_ok = {p_ok} outside the window ({pc}, {}) where the transformation helps",
            pc.sqrt()
        )));
    }
    if !(phi_tilde.s1() < phi.s1()) {
        return Err(Error::InvalidInput("phi_tilde must be strictly less entangled than phi".into()));
    }
    let l = g.l() as i32;
    let mut new_index = vec![u32::MAX; g.node_count()];
    let mut coords = Vec::new();
    for n in 0..g.node_count() as u32 {
        let (x, y) = g.coord(n);
        if x % 2 == 0 && y % 2 == 0 {
            new_index[n as usize] = coords.len() as u32;
            coords.push((x / 2, y / 2));
        }
    }
    let mut bonds = Vec::with_capacity(3 * coords.len());
    for n in 0..g.node_count() as u32 {
        let (x, y) = g.coord(n);
        let d = (x.rem_euclid(2), y.rem_euclid(2));
        if d == (0, 0) {
            continue;
        }
        let back = g.node_at((x - d.0).rem_euclid(l), (y - d.1).rem_euclid(l)).expect("on lattice");
        let front = g.node_at((x + d.0).rem_euclid(l), (y + d.1).rem_euclid(l)).expect("on lattice");
        let solid = |m: u32| g.neighbors(n).iter().any(|&(k, b)| k == m && g.bonds()[b as usize].p == p_ok);
        if !(solid(back) && solid(front)) {
            return Err(Error::MalformedLattice(format!("midpoint {x},{y} lacks its two solid bonds")));
        }
        bonds.push(Bond { a: new_index[back as usize], b: new_index[front as usize], p: p_ok });
    }
    LatticeGraph::from_parts(LatticeKind::Triangular, g.l() / 2, Boundary::Torus, coords, bonds)
}

/// Splits a square torus into two square lattices of twice the lattice
/// constant: nodes with both coordinates even and nodes with both odd.
/// Every mixed node swaps its horizontal pair and its vertical pair, one
/// pair landing in each sublattice; the singlet probability is kept.
pub fn transform_square_doubling(g: &LatticeGraph) -> Result<LatticeGraph> {
    if g.kind() != LatticeKind::Square || g.boundary() != Boundary::Torus {
        return Err(Error::MalformedLattice("expected a square torus".into()));
    }
    let l = g.l() as i32;
    if l % 2 == 1 {
        return Err(Error::InvalidInput(format!("square doubling needs an even size, got {l}")));
    }
    if l < 4 {
        return Err(Error::InvalidInput(format!("square doubling needs l >= 4, got {l}")));
    }
    let p = g.uniform_p().ok_or_else(|| Error::MalformedLattice("bond probabilities are not uniform".into()))?;
    let mut new_index = vec![u32::MAX; g.node_count()];
    let mut coords = Vec::new();
    for want in [0, 1] {
        for n in 0..g.node_count() as u32 {
            let (x, y) = g.coord(n);
            if x % 2 == want && y % 2 == want {
                new_index[n as usize] = coords.len() as u32;
                coords.push((x, y));
            }
        }
    }
    let at = |x: i32, y: i32| new_index[g.node_at(x.rem_euclid(l), y.rem_euclid(l)).expect("on lattice") as usize];
    let mut bonds = Vec::with_capacity(g.node_count());
    for n in 0..g.node_count() as u32 {
        let (x, y) = g.coord(n);
        if (x + y) % 2 == 0 {
            continue;
        }
        bonds.push(Bond { a: at(x - 1, y), b: at(x + 1, y), p });
        bonds.push(Bond { a: at(x, y - 1), b: at(x, y + 1), p });
    }
    LatticeGraph::from_parts(LatticeKind::SquareDoubledPair, g.l(), Boundary::Torus, coords, bonds)
}
