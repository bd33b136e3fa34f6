//! Bipartite and tripartite graphs with bitset adjacency.
//!
//! A [`TripartiteGraph`] stores its three layers `(1,2)`, `(1,3)` and `(2,3)`
//! as [`BipartiteGraph`]s whose left side is always the lower-numbered part.

mod bitset;
mod detect;
mod io;

use rand::Rng;
use serde::Serialize;

pub use bitset::Bitset;
pub use detect::{
    find_k2s, find_k3s, find_k3s_with, k3s_through_edge, verify_certificate, Certificate, CertificateKind,
    FreenessReport, Parallelism,
};
pub use io::{decode_bg2, decode_tg3, encode_bg2, encode_tg3};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    n_right: usize,
    rows: Vec<Bitset>,
}

impl BipartiteGraph {
    pub fn new(n_left: usize, n_right: usize) -> Self {
        BipartiteGraph { n_right, rows: vec![Bitset::new(n_right); n_left] }
    }

    pub fn complete(n_left: usize, n_right: usize) -> Self {
        BipartiteGraph { n_right, rows: vec![Bitset::full(n_right); n_left] }
    }

    pub fn from_edges(n_left: usize, n_right: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(n_left, n_right);
        for (i, j) in edges {
            g.add_edge(i, j);
        }
        g
    }

    /// The 1-regular graph `{(i, i)}` on `n + n` vertices.
    pub fn perfect_matching(n: usize) -> Self {
        Self::from_edges(n, n, (0..n).map(|i| (i, i)))
    }

    pub fn random<R: Rng + ?Sized>(n_left: usize, n_right: usize, density: f64, rng: &mut R) -> Self {
        let mut g = Self::new(n_left, n_right);
        for i in 0..n_left {
            for j in 0..n_right {
                if rng.gen_bool(density) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn n_left(&self) -> usize {
        self.rows.len()
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> bool {
        self.rows[i].insert(j)
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) -> bool {
        self.rows[i].remove(j)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    /// Neighbourhood of left vertex `i`.
    pub fn row(&self, i: usize) -> &Bitset {
        &self.rows[i]
    }

    /// Neighbourhood of right vertex `j`.
    pub fn column(&self, j: usize) -> Bitset {
        Bitset::from_indices(self.n_left(), (0..self.n_left()).filter(|&i| self.has_edge(i, j)))
    }

    pub fn transpose(&self) -> BipartiteGraph {
        BipartiteGraph { n_right: self.n_left(), rows: (0..self.n_right).map(|j| self.column(j)).collect() }
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        self.rows.iter().map(Bitset::count).collect()
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_right];
        for row in &self.rows {
            for j in row.iter() {
                deg[j] += 1;
            }
        }
        deg
    }

    /// Minimum degree over both sides (0 for an empty side pair).
    pub fn min_degree(&self) -> usize {
        self.left_degrees().into_iter().chain(self.right_degrees()).min().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(Bitset::count).sum()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |j| (i, j)))
    }

    /// Induced subgraph on the given left and right vertices, renumbered in the
    /// order given.
    pub fn restrict(&self, left: &[usize], right: &[usize]) -> BipartiteGraph {
        BipartiteGraph { n_right: right.len(), rows: left.iter().map(|&i| self.rows[i].compress(right)).collect() }
    }
}

impl std::fmt::Debug for BipartiteGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BipartiteGraph({}x{}, {} edges)", self.n_left(), self.n_right, self.edge_count())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Part {
    V1,
    V2,
    V3,
}

impl Part {
    pub const ALL: [Part; 3] = [Part::V1, Part::V2, Part::V3];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Layer {
    L12,
    L13,
    L23,
}

impl Layer {
    pub const ALL: [Layer; 3] = [Layer::L12, Layer::L13, Layer::L23];

    pub fn parts(self) -> (Part, Part) {
        match self {
            Layer::L12 => (Part::V1, Part::V2),
            Layer::L13 => (Part::V1, Part::V3),
            Layer::L23 => (Part::V2, Part::V3),
        }
    }

    pub fn between(a: Part, b: Part) -> Option<Layer> {
        match (a.min(b), a.max(b)) {
            (Part::V1, Part::V2) => Some(Layer::L12),
            (Part::V1, Part::V3) => Some(Layer::L13),
            (Part::V2, Part::V3) => Some(Layer::L23),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Layer::L12 => "12",
            Layer::L13 => "13",
            Layer::L23 => "23",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Vertex {
    pub part: Part,
    pub index: usize,
}

impl Vertex {
    pub fn new(part: Part, index: usize) -> Self {
        Vertex { part, index }
    }
}

/// Tripartite graph `G_3(n)` with parts `V1, V2, V3` of size `n`.
#[derive(Clone, PartialEq, Eq)]
pub struct TripartiteGraph {
    n: usize,
    layers: [BipartiteGraph; 3],
}

impl TripartiteGraph {
    pub fn new(n: usize) -> Self {
        let empty = BipartiteGraph::new(n, n);
        TripartiteGraph { n, layers: [empty.clone(), empty.clone(), empty] }
    }

    pub fn complete(n: usize) -> Self {
        let full = BipartiteGraph::complete(n, n);
        TripartiteGraph { n, layers: [full.clone(), full.clone(), full] }
    }

    pub fn from_layers(l12: BipartiteGraph, l13: BipartiteGraph, l23: BipartiteGraph) -> Result<Self> {
        let n = l12.n_left();
        for (name, l) in [("(1,2)", &l12), ("(1,3)", &l13), ("(2,3)", &l23)] {
            if l.n_left() != n || l.n_right() != n {
                return Err(Error::SizeMismatch(format!(
                    "layer {name} is {}x{}, expected {n}x{n}",
                    l.n_left(),
                    l.n_right()
                )));
            }
        }
        Ok(TripartiteGraph { n, layers: [l12, l13, l23] })
    }

    /// Independent edges with a per-layer probability.
    pub fn random<R: Rng + ?Sized>(n: usize, density: [f64; 3], rng: &mut R) -> Self {
        TripartiteGraph { n, layers: density.map(|d| BipartiteGraph::random(n, n, d, rng)) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layer(&self, l: Layer) -> &BipartiteGraph {
        &self.layers[l as usize]
    }

    pub fn layer_mut(&mut self, l: Layer) -> &mut BipartiteGraph {
        &mut self.layers[l as usize]
    }

    pub fn add_edge(&mut self, l: Layer, i: usize, j: usize) -> bool {
        self.layers[l as usize].add_edge(i, j)
    }

    pub fn remove_edge(&mut self, l: Layer, i: usize, j: usize) -> bool {
        self.layers[l as usize].remove_edge(i, j)
    }

    pub fn has_edge(&self, l: Layer, i: usize, j: usize) -> bool {
        self.layers[l as usize].has_edge(i, j)
    }

    /// Whether `u` and `v` are adjacent (false for vertices in the same part).
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        match Layer::between(u.part, v.part) {
            Some(l) if u.part < v.part => self.has_edge(l, u.index, v.index),
            Some(l) => self.has_edge(l, v.index, u.index),
            None => false,
        }
    }

    /// Neighbours of `v` inside part `other`.
    pub fn neighbors(&self, v: Vertex, other: Part) -> Bitset {
        match Layer::between(v.part, other) {
            Some(l) if v.part < other => self.layer(l).row(v.index).clone(),
            Some(l) => self.layer(l).column(v.index),
            None => Bitset::new(self.n),
        }
    }

    pub fn edge_count(&self) -> usize {
        self.layers.iter().map(BipartiteGraph::edge_count).sum()
    }

    /// Total degree of every vertex, indexed by part.
    pub fn degrees(&self) -> [Vec<usize>; 3] {
        let add = |a: Vec<usize>, b: Vec<usize>| a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let [l12, l13, l23] = &self.layers;
        [
            add(l12.left_degrees(), l13.left_degrees()),
            add(l12.right_degrees(), l23.left_degrees()),
            add(l13.right_degrees(), l23.right_degrees()),
        ]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        Part::ALL.iter().filter(|&&p| p != v.part).map(|&p| self.neighbors(v, p).count()).sum()
    }

    /// Minimum total degree over all `3n` vertices.
    pub fn min_degree(&self) -> usize {
        self.degrees().iter().flatten().copied().min().unwrap_or(0)
    }

    /// Number of triangles, counted over the edges of the sparsest layer by
    /// intersecting the two endpoint neighbourhoods in the third part.
    pub fn count_triangles(&self) -> u64 {
        let sparsest = Layer::ALL.into_iter().min_by_key(|&l| self.layer(l).edge_count()).unwrap();
        let [l12, l13, l23] = &self.layers;
        let count = |base: &BipartiteGraph, left: &BipartiteGraph, right: &BipartiteGraph| -> u64 {
            base.edges().map(|(a, b)| left.row(a).intersection_count(right.row(b)) as u64).sum()
        };
        match sparsest {
            // rows of `left` are indexed by the base layer's left vertex, rows
            // of `right` by its right vertex; both range over the third part
            Layer::L12 => count(l12, l13, l23),
            Layer::L13 => count(l13, l12, &l23.transpose()),
            Layer::L23 => count(l23, &l12.transpose(), &l13.transpose()),
        }
    }

    /// Relabels parts: part `i` of the result is part `order[i]` of `self`.
    pub fn permute_parts(&self, order: [Part; 3]) -> TripartiteGraph {
        let mut out = TripartiteGraph::new(self.n);
        for l in Layer::ALL {
            let (a, b) = l.parts();
            let (src_a, src_b) = (order[a.index()], order[b.index()]);
            for i in 0..self.n {
                for j in 0..self.n {
                    if self.adjacent(Vertex::new(src_a, i), Vertex::new(src_b, j)) {
                        out.add_edge(l, i, j);
                    }
                }
            }
        }
        out
    }
}

impl std::fmt::Debug for TripartiteGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "TripartiteGraph(n={}, layers=[{}, {}, {}])",
            self.n,
            self.layers[0].edge_count(),
            self.layers[1].edge_count(),
            self.layers[2].edge_count()
        )
    }
}
