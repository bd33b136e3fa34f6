//! `K3(s)`-free tripartite graphs with minimum degree above `n`.
//!
//! Both constructions take a `K2(s)`-free bipartite base graph on `n + n`
//! vertices (by default the incidence graph of PG(2, q)):
//!
//! * variant 1: `V1` is complete to `V2 ∪ V3` and the base sits between `V2` and `V3`;
//! * variant 2: `V2 = X2 ∪ Y2`, `V3 = X3 ∪ Y3` with `|X3| = |Y2|`, `|Y3| = |X2|`;
//!   the blocks `V1, X2, Y3, Y2, X3` form a blowup of `C5` and the base sits
//!   between `V1` and `Y2 ∪ Y3`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{self, Comparison};
use crate::error::{Error, Result};
use crate::graph::{
    find_k2s, find_k3s_with, BipartiteGraph, Bitset, FreenessReport, Layer, Parallelism, TripartiteGraph,
};
use crate::plane::ProjectivePlane;

/// Smallest integer `m` with `m >= sqrt(n)`.
pub fn ceil_sqrt(n: u64) -> u64 {
    let mut m = (n as f64).sqrt() as u64;
    while m * m < n {
        m += 1;
    }
    while m > 0 && (m - 1) * (m - 1) >= n {
        m -= 1;
    }
    m
}

fn plane_graph(q: u64) -> Result<BipartiteGraph> {
    Ok(ProjectivePlane::new(q)?.incidence_graph())
}

fn variant1(base: &BipartiteGraph) -> TripartiteGraph {
    let n = base.n_left();
    TripartiteGraph::from_layers(BipartiteGraph::complete(n, n), BipartiteGraph::complete(n, n), base.clone())
        .expect("square base graph")
}

/// `V1` complete to both other parts, PG(2, q) incidence between `V2` (points) and `V3` (lines).
pub fn construction1(q: u64) -> Result<TripartiteGraph> {
    Ok(variant1(&plane_graph(q)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Construction2Params {
    pub q: u64,
    pub x2_size: usize,
    pub partition_seed: u64,
    pub base_assignment_seed: u64,
}

/// Explicit block structure for the `C5` blowup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLayout {
    pub x2: Vec<usize>,
    pub y2: Vec<usize>,
    pub x3: Vec<usize>,
    pub y3: Vec<usize>,
    /// Base right vertex `j` is placed at `slots()[base_order[j]]`.
    pub base_order: Vec<usize>,
}

/// Where a slot of `Y2 ∪ Y3` lives in the tripartite graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    V2(usize),
    V3(usize),
}

impl BlockLayout {
    /// Seeded layout: shuffles `V2` and `V3` to pick the blocks, then shuffles the
    /// base's right side onto `Y2 ∪ Y3`.
    pub fn seeded(n: usize, x2_size: usize, partition_seed: u64, base_assignment_seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(partition_seed);
        let mut v2: Vec<usize> = (0..n).collect();
        v2.shuffle(&mut rng);
        let mut v3: Vec<usize> = (0..n).collect();
        v3.shuffle(&mut rng);
        let sorted = |s: &[usize]| {
            let mut v = s.to_vec();
            v.sort_unstable();
            v
        };
        let mut base_order: Vec<usize> = (0..n).collect();
        base_order.shuffle(&mut ChaCha8Rng::seed_from_u64(base_assignment_seed));
        BlockLayout {
            x2: sorted(&v2[..x2_size]),
            y2: sorted(&v2[x2_size..]),
            x3: sorted(&v3[..n - x2_size]),
            y3: sorted(&v3[n - x2_size..]),
            base_order,
        }
    }

    fn n(&self) -> usize {
        self.x2.len() + self.y2.len()
    }

    fn slots(&self) -> Vec<Slot> {
        self.y2.iter().map(|&v| Slot::V2(v)).chain(self.y3.iter().map(|&v| Slot::V3(v))).collect()
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        let covers = |a: &[usize], b: &[usize]| {
            let set = Bitset::from_indices(n, a.iter().chain(b).copied());
            set.count() == n && a.len() + b.len() == n
        };
        if !covers(&self.x2, &self.y2) || !covers(&self.x3, &self.y3) {
            return Err(Error::BadPartition("blocks must partition V2 and V3".into()));
        }
        if self.x3.len() != self.y2.len() {
            return Err(Error::BadPartition("|X3| must equal |Y2|".into()));
        }
        let mut order = self.base_order.clone();
        order.sort_unstable();
        if order != (0..n).collect::<Vec<_>>() {
            return Err(Error::BadPartition("base_order must be a permutation".into()));
        }
        Ok(())
    }
}

/// Wires the `C5` blowup around `base` (left side on `V1`, right side on `Y2 ∪ Y3`).
pub fn c5_blowup(base: &BipartiteGraph, layout: &BlockLayout) -> Result<TripartiteGraph> {
    let n = layout.n();
    if base.n_left() != n || base.n_right() != n {
        return Err(Error::SizeMismatch(format!("base is {}x{}, layout needs {n}x{n}", base.n_left(), base.n_right())));
    }
    layout.validate()?;
    let mut g = TripartiteGraph::new(n);
    for v1 in 0..n {
        for &x in &layout.x2 {
            g.add_edge(Layer::L12, v1, x);
        }
        for &x in &layout.x3 {
            g.add_edge(Layer::L13, v1, x);
        }
    }
    for &y3 in &layout.y3 {
        for &v2 in layout.x2.iter().chain(&layout.y2) {
            g.add_edge(Layer::L23, v2, y3);
        }
    }
    for &y2 in &layout.y2 {
        for &x3 in &layout.x3 {
            g.add_edge(Layer::L23, y2, x3);
        }
    }
    let slots = layout.slots();
    for (i, j) in base.edges() {
        match slots[layout.base_order[j]] {
            Slot::V2(v) => g.add_edge(Layer::L12, i, v),
            Slot::V3(v) => g.add_edge(Layer::L13, i, v),
        };
    }
    Ok(g)
}

/// The `C5`-blowup construction over PG(2, q).
pub fn construction2(params: &Construction2Params) -> Result<TripartiteGraph> {
    let base = plane_graph(params.q)?;
    let n = base.n_left();
    let lo = ceil_sqrt(n as u64) as usize;
    if params.x2_size < lo || params.x2_size > n / 2 {
        return Err(Error::BadPartition(format!(
            "x2_size must lie in [{lo}, {}] for n = {n}, got {}",
            n / 2,
            params.x2_size
        )));
    }
    let layout = BlockLayout::seeded(n, params.x2_size, params.partition_seed, params.base_assignment_seed);
    c5_blowup(&base, &layout)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    One,
    Two { x2_size: usize, partition_seed: u64, base_assignment_seed: u64 },
}

/// Either construction with an arbitrary `K2(s)`-free base graph.
///
/// The base is checked exhaustively. Variant 2 needs
/// `max(1, δ(base)) <= x2_size <= n/2` so that `δ(G) >= n + δ(base)`.
pub fn generalized_construction(base: &BipartiteGraph, s: usize, variant: Variant) -> Result<TripartiteGraph> {
    let n = base.n_left();
    if base.n_right() != n {
        return Err(Error::SizeMismatch(format!("base must be square, got {}x{}", n, base.n_right())));
    }
    if !find_k2s(base, s)?.is_free() {
        return Err(Error::BaseNotFree(s));
    }
    match variant {
        Variant::One => Ok(variant1(base)),
        Variant::Two { x2_size, partition_seed, base_assignment_seed } => {
            let lo = base.min_degree().max(1);
            if x2_size < lo || x2_size > n / 2 {
                return Err(Error::BadPartition(format!(
                    "x2_size must lie in [{lo}, {}] for this base, got {x2_size}",
                    n / 2
                )));
            }
            c5_blowup(base, &BlockLayout::seeded(n, x2_size, partition_seed, base_assignment_seed))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundComparisons {
    pub sqrt_n: f64,
    pub ceil_sqrt_n: u64,
    pub excess_vs_sqrt_n: Comparison,
    pub excess_at_least_ceil_sqrt_n: bool,
    /// `t(n, s, 0)`: the excess required by the degree threshold in the limit `eps -> 0`.
    pub thm_excess: f64,
    pub excess_vs_thm: Comparison,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub n: usize,
    pub s: usize,
    pub min_degree: usize,
    pub excess: i64,
    pub triangle_count: u64,
    pub freeness: FreenessReport,
    pub bound_comparisons: BoundComparisons,
}

pub fn audit(g: &TripartiteGraph, s: usize) -> Result<AuditReport> {
    audit_with(g, s, Parallelism::Single)
}

pub fn audit_with(g: &TripartiteGraph, s: usize, par: Parallelism) -> Result<AuditReport> {
    let n = g.n();
    let freeness = find_k3s_with(g, s, par)?;
    let min_degree = g.min_degree();
    let excess = min_degree as i64 - n as i64;
    let sqrt_n = (n as f64).sqrt();
    let ceil_sqrt_n = ceil_sqrt(n as u64);
    let thm_excess = bounds::t_value(n as u64, s as u64, 0.0)?;
    Ok(AuditReport {
        n,
        s,
        min_degree,
        excess,
        triangle_count: g.count_triangles(),
        freeness,
        bound_comparisons: BoundComparisons {
            sqrt_n,
            ceil_sqrt_n,
            excess_vs_sqrt_n: Comparison::of(excess as f64, sqrt_n),
            excess_at_least_ceil_sqrt_n: excess >= ceil_sqrt_n as i64,
            thm_excess,
            excess_vs_thm: Comparison::of(excess as f64, thm_excess),
        },
    })
}

/// Adjacency of `g` as a simple graph on `3n` vertices (`V1`, then `V2`, then `V3`).
pub fn flat_adjacency(g: &TripartiteGraph) -> Vec<Bitset> {
    let n = g.n();
    let mut adj = vec![Bitset::new(3 * n); 3 * n];
    for l in Layer::ALL {
        let (a, b) = l.parts();
        for (i, j) in g.layer(l).edges() {
            let (u, v) = (a.index() * n + i, b.index() * n + j);
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    adj
}

/// Number of 5-cycles (as subgraphs) in `g`.
pub fn five_cycle_count(g: &TripartiteGraph) -> u64 {
    let adj = flat_adjacency(g);
    let mut twice = 0u64;
    for v in 0..adj.len() {
        // v is the smallest vertex on the cycle; each cycle is seen in both directions
        for a in adj[v].iter().filter(|&a| a > v) {
            for b in adj[a].iter().filter(|&b| b > v) {
                for c in adj[b].iter().filter(|&c| c > v && c != a) {
                    twice += adj[c].intersection(&adj[v]).iter().filter(|&d| d > v && d != a && d != b).count() as u64;
                }
            }
        }
    }
    twice / 2
}
