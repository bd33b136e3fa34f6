//! Small-scale oracles: exact Zarankiewicz numbers, the exact maximum minimum
//! degree of `K3(s)`-free tripartite graphs, and a seeded hill-climbing lower
//! bound for sizes beyond exhaustive reach.
//!
//! Budgets are counted in search nodes, never wall time.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructions::construction1;
use crate::error::{Error, Result};
use crate::gf::prime_power;
use crate::graph::{
    encode_bg2, encode_tg3, find_k2s, find_k3s, k3s_through_edge, BipartiteGraph, Layer, Part, TripartiteGraph, Vertex,
};

/// Largest bipartite side searched without `force`.
pub const ZARANKIEWICZ_LIMIT: usize = 8;
/// Largest tripartite part searched without `force`.
pub const EXTREMAL_LIMIT: usize = 3;
/// Hard cap even with `force`: candidate rows are enumerated as bitmasks.
const ZARANKIEWICZ_HARD_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Bipartite(BipartiteGraph),
    Tripartite(TripartiteGraph),
}

impl Witness {
    pub fn format(&self) -> &'static str {
        match self {
            Witness::Bipartite(_) => "bg2",
            Witness::Tripartite(_) => "tg3",
        }
    }

    pub fn encode(&self) -> String {
        match self {
            Witness::Bipartite(b) => encode_bg2(b),
            Witness::Tripartite(g) => encode_tg3(g),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalResult {
    pub n: usize,
    pub s: usize,
    pub optimum: usize,
    pub witness: Witness,
    pub exhaustive: bool,
    pub nodes_explored: u64,
}

/// One line of the append-only results file.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRecord {
    pub n: usize,
    pub s: usize,
    pub optimum: usize,
    pub exhaustive: bool,
    pub nodes: u64,
    pub witness_format: &'static str,
    pub witness: String,
}

impl ExtremalResult {
    pub fn record(&self) -> ResultRecord {
        ResultRecord {
            n: self.n,
            s: self.s,
            optimum: self.optimum,
            exhaustive: self.exhaustive,
            nodes: self.nodes_explored,
            witness_format: self.witness.format(),
            witness: self.witness.encode(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.record()).expect("record serializes")
    }
}

struct ZState<'a> {
    s: usize,
    n: usize,
    cands: &'a [u64],
    rows: Vec<u64>,
    best: usize,
    best_rows: Vec<u64>,
    nodes: u64,
}

impl ZState<'_> {
    /// Every `s`-set of rows including `mask` has fewer than `s` common columns.
    fn compatible(&self, mask: u64) -> bool {
        fn rec(rows: &[u64], acc: u64, need: usize, s: usize) -> bool {
            if (acc.count_ones() as usize) < s {
                return true;
            }
            if need == 0 {
                return false;
            }
            (0..rows.len()).all(|k| rec(&rows[k + 1..], acc & rows[k], need - 1, s))
        }
        rec(&self.rows, mask, self.s - 1, self.s)
    }

    fn dfs(&mut self, from: usize, edges: usize) {
        self.nodes += 1;
        let placed = self.rows.len();
        if edges > self.best {
            self.best = edges;
            self.best_rows = self.rows.clone();
        }
        if placed == self.n {
            return;
        }
        for idx in from..self.cands.len() {
            let mask = self.cands[idx];
            let w = mask.count_ones() as usize;
            // rows are nonincreasing in weight, so the rest weigh at most w
            if edges + (self.n - placed) * w <= self.best {
                return;
            }
            if placed == 0 && mask != top_mask(self.n, w) {
                continue;
            }
            if self.compatible(mask) {
                self.rows.push(mask);
                self.dfs(idx, edges + w);
                self.rows.pop();
            }
        }
    }
}

/// The `w` highest of `n` column bits.
fn top_mask(n: usize, w: usize) -> u64 {
    ((1u64 << w) - 1) << (n - w)
}

/// Exact `z(n, s)`: most edges in a `K2(s)`-free bipartite graph with `n`
/// vertices per side.
///
/// Left neighborhoods are placed in nonincreasing (weight, mask) order, so a
/// row permutation is fixed; the first row is moved onto the top columns by a
/// column permutation. The witness is the first optimum in that order.
pub fn brute_force_zarankiewicz(n: usize, s: usize, force: bool) -> Result<ExtremalResult> {
    if n == 0 {
        return Err(Error::BadArgs("n must be positive".into()));
    }
    if s < 2 || s > n {
        return Err(Error::BadS { s, max: n });
    }
    if n > ZARANKIEWICZ_HARD_LIMIT || (n > ZARANKIEWICZ_LIMIT && !force) {
        return Err(Error::TooLarge { what: format!("exhaustive Zarankiewicz search with n = {n}") });
    }
    let mut cands: Vec<u64> = (0..1u64 << n).collect();
    cands.sort_by_key(|&m| std::cmp::Reverse((m.count_ones(), m)));
    let mut st = ZState { s, n, cands: &cands, rows: Vec::new(), best: 0, best_rows: Vec::new(), nodes: 0 };
    st.dfs(0, 0);
    let edges = st
        .best_rows
        .iter()
        .enumerate()
        .flat_map(|(i, &m)| (0..n).filter(move |&j| m >> j & 1 == 1).map(move |j| (i, j)));
    let witness = BipartiteGraph::from_edges(n, n, edges);
    debug_assert!(find_k2s(&witness, s).unwrap().is_free());
    Ok(ExtremalResult {
        n,
        s,
        optimum: st.best,
        witness: Witness::Bipartite(witness),
        exhaustive: true,
        nodes_explored: st.nodes,
    })
}

/// Edges in search order: each V1 vertex's row of layer (1,2) then of (1,3),
/// followed by layer (2,3) row by row.
fn edge_order(n: usize) -> Vec<(Layer, usize, usize)> {
    let mut out = Vec::with_capacity(3 * n * n);
    for i in 0..n {
        out.extend((0..n).map(|j| (Layer::L12, i, j)));
        out.extend((0..n).map(|j| (Layer::L13, i, j)));
    }
    for x in 0..n {
        out.extend((0..n).map(|y| (Layer::L23, x, y)));
    }
    out
}

struct EState {
    n: usize,
    s: usize,
    order: Vec<(Layer, usize, usize)>,
    g: TripartiteGraph,
    /// Present edges at each of the 3n vertices, then still-undecided edges.
    deg: Vec<usize>,
    open: Vec<usize>,
    best: usize,
    best_graph: Option<TripartiteGraph>,
    nodes: u64,
}

impl EState {
    fn vid(&self, part: Part, i: usize) -> usize {
        part.index() * self.n + i
    }

    fn ends(&self, (layer, i, j): (Layer, usize, usize)) -> (usize, usize) {
        let (a, b) = layer.parts();
        (self.vid(a, i), self.vid(b, j))
    }

    /// Row `i` of V1 would rise above row `i - 1` if position `k` took bit 1.
    fn breaks_row_order(&self, k: usize) -> bool {
        let (layer, i, _) = self.order[k];
        if layer == Layer::L23 || i == 0 {
            return false;
        }
        let row = 2 * self.n;
        let start = i * row;
        let pos = k - start;
        let bit = |r: usize, p: usize| {
            let (l, a, b) = self.order[r * row + p];
            self.g.has_edge(l, a, b)
        };
        (0..pos).all(|p| bit(i, p) == bit(i - 1, p)) && !bit(i - 1, pos)
    }

    fn dfs(&mut self, k: usize) -> Result<()> {
        self.nodes += 1;
        let bound = self.deg.iter().zip(&self.open).map(|(d, o)| d + o).min().unwrap_or(0);
        if bound <= self.best {
            return Ok(());
        }
        if k == self.order.len() {
            self.best = bound;
            self.best_graph = Some(self.g.clone());
            return Ok(());
        }
        let e = self.order[k];
        let (u, v) = self.ends(e);
        self.open[u] -= 1;
        self.open[v] -= 1;
        if !self.breaks_row_order(k) {
            let (layer, i, j) = e;
            self.g.add_edge(layer, i, j);
            if k3s_through_edge(&self.g, self.s, layer, i, j)?.is_none() {
                self.deg[u] += 1;
                self.deg[v] += 1;
                self.dfs(k + 1)?;
                self.deg[u] -= 1;
                self.deg[v] -= 1;
            }
            self.g.remove_edge(layer, i, j);
        }
        self.dfs(k + 1)?;
        self.open[u] += 1;
        self.open[v] += 1;
        Ok(())
    }
}

/// Exact maximum of the minimum degree over `K3(s)`-free tripartite graphs
/// with parts of size `n`.
///
/// Branch and bound over edges, present before absent, with V1 rows kept in
/// nonincreasing order. The witness is the optimal graph whose edge
/// indicator vector is lexicographically greatest in the search order.
pub fn extremal_min_degree(n: usize, s: usize, force: bool) -> Result<ExtremalResult> {
    if n == 0 {
        return Err(Error::BadArgs("n must be positive".into()));
    }
    if s < 2 {
        return Err(Error::BadS { s, max: n });
    }
    if s > n {
        // no room for K3(s): the complete graph is free
        return Ok(ExtremalResult {
            n,
            s,
            optimum: 2 * n,
            witness: Witness::Tripartite(TripartiteGraph::complete(n)),
            exhaustive: true,
            nodes_explored: 1,
        });
    }
    if n > EXTREMAL_LIMIT && !force {
        return Err(Error::TooLarge { what: format!("exhaustive extremal search with n = {n}") });
    }
    let mut st = EState {
        n,
        s,
        order: edge_order(n),
        g: TripartiteGraph::new(n),
        deg: vec![0; 3 * n],
        open: vec![2 * n; 3 * n],
        // a free graph with minimum degree n + 1 always exists, but starting
        // below it lets the search produce its own witness
        best: n,
        best_graph: None,
        nodes: 0,
    };
    st.dfs(0)?;
    let witness = st.best_graph.ok_or_else(|| Error::Invariant("no graph beats the matching construction".into()))?;
    Ok(ExtremalResult {
        n,
        s,
        optimum: st.best,
        witness: Witness::Tripartite(witness),
        exhaustive: true,
        nodes_explored: st.nodes,
    })
}

/// Layers (1,2) and (1,3) complete, (2,3) a perfect matching: `K3(2)`-free
/// with minimum degree `n + 1`.
pub fn matching_construction(n: usize) -> TripartiteGraph {
    let full = BipartiteGraph::complete(n, n);
    TripartiteGraph::from_layers(full.clone(), full, BipartiteGraph::perfect_matching(n))
        .expect("layers have matching sizes")
}

fn all_vertices(n: usize) -> impl Iterator<Item = Vertex> {
    Part::ALL.into_iter().flat_map(move |part| (0..n).map(move |index| Vertex { part, index }))
}

/// Layer and endpoint indices of the edge `uv`, oriented from the lower part.
fn layer_edge(u: Vertex, v: Vertex) -> (Layer, usize, usize) {
    let (a, b) = if u.part.index() < v.part.index() { (u, v) } else { (v, u) };
    (Layer::between(a.part, b.part).expect("distinct parts"), a.index, b.index)
}

/// Deletes edges of copies of `K3(s)` until none remain, sparing vertices
/// of low degree where possible.
fn repair<R: Rng>(g: &mut TripartiteGraph, s: usize, rng: &mut R) -> Result<()> {
    while let Some(cert) = find_k3s(g, s)?.witness {
        let mut cross = Vec::new();
        for (la, lb, layer) in [(0, 1, Layer::L12), (0, 2, Layer::L13), (1, 2, Layer::L23)] {
            for &i in &cert.parts[la] {
                for &j in &cert.parts[lb] {
                    cross.push((layer, i, j));
                }
            }
        }
        let (layer, i, j) = *cross.choose(rng).expect("certificate has edges");
        g.remove_edge(layer, i, j);
    }
    Ok(())
}

/// Seeded hill climbing for a lower bound on the extremal minimum degree.
///
/// Starts from the projective construction when `n = q^2 + q + 1`, else from
/// a repaired random graph. Each node adds an edge at a minimum-degree
/// vertex, preferring the partner of lowest degree; any `K3(s)` this creates
/// is broken by deleting one of its other edges with the best-off endpoints.
/// After a run of nodes without improvement the search restarts from the
/// best graph with a few random deletions.
pub fn local_search_lower_bound(n: usize, s: usize, seed: u64, budget: u64) -> Result<ExtremalResult> {
    if n == 0 {
        return Err(Error::BadArgs("n must be positive".into()));
    }
    if s < 2 {
        return Err(Error::BadS { s, max: n });
    }
    if s > n {
        return extremal_min_degree(n, s, false).map(|r| ExtremalResult { exhaustive: false, nodes_explored: 0, ..r });
    }
    const PATIENCE: u64 = 64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = match plane_order(n) {
        Some(q) => construction1(q)?,
        None => {
            let mut g = TripartiteGraph::random(n, [0.5; 3], &mut rng);
            repair(&mut g, s, &mut rng)?;
            g
        }
    };
    let mut best = g.clone();
    let mut best_delta = best.min_degree();
    let mut stale = 0;
    let mut nodes = 0;
    while nodes < budget {
        nodes += 1;
        let delta = g.min_degree();
        let v = all_vertices(n).find(|&v| g.degree(v) == delta).expect("graph has vertices");
        let mut partners: Vec<Vertex> = all_vertices(n).filter(|u| u.part != v.part && !g.adjacent(*u, v)).collect();
        if partners.is_empty() {
            // v is saturated; the graph is complete at v but the min degree is stuck
            stale = PATIENCE;
        } else {
            partners.shuffle(&mut rng);
            partners.sort_by_key(|&u| g.degree(u));
            let u = partners[0];
            let (layer, i, j) = layer_edge(v, u);
            g.add_edge(layer, i, j);
            while let Some(cert) = k3s_through_edge(&g, s, layer, i, j)? {
                let mut cross = Vec::new();
                for (la, lb, l) in [(0, 1, Layer::L12), (0, 2, Layer::L13), (1, 2, Layer::L23)] {
                    for &a in &cert.parts[la] {
                        for &b in &cert.parts[lb] {
                            if (l, a, b) != (layer, i, j) {
                                cross.push((l, a, b));
                            }
                        }
                    }
                }
                let cost = |&(l, a, b): &(Layer, usize, usize)| {
                    let (pa, pb) = l.parts();
                    let da = g.degree(Vertex { part: pa, index: a });
                    let db = g.degree(Vertex { part: pb, index: b });
                    std::cmp::Reverse(da.min(db))
                };
                cross.shuffle(&mut rng);
                cross.sort_by_key(cost);
                let (l, a, b) = cross[0];
                g.remove_edge(l, a, b);
            }
            let now = g.min_degree();
            if now > best_delta {
                best_delta = now;
                best = g.clone();
                stale = 0;
            } else {
                stale += 1;
            }
        }
        if stale >= PATIENCE {
            g = best.clone();
            let edges: Vec<_> = Layer::ALL
                .into_iter()
                .flat_map(|l| best.layer(l).edges().map(move |(i, j)| (l, i, j)).collect::<Vec<_>>())
                .collect();
            for &(l, i, j) in edges.choose_multiple(&mut rng, n.max(2)) {
                g.remove_edge(l, i, j);
            }
            stale = 0;
        }
    }
    if !find_k3s(&best, s)?.is_free() {
        return Err(Error::Invariant("local search produced a graph containing K3(s)".into()));
    }
    Ok(ExtremalResult {
        n,
        s,
        optimum: best_delta,
        witness: Witness::Tripartite(best),
        exhaustive: false,
        nodes_explored: nodes,
    })
}

/// `q` with `n = q^2 + q + 1` and `q` a prime power.
fn plane_order(n: usize) -> Option<u64> {
    let n = n as u64;
    (2..).take_while(|q| q * q + q < n).find(|q| q * q + q + 1 == n && prime_power(*q).is_some())
}
