//! Exact detection of `K2(s)` and `K3(s)` with lexicographically smallest witnesses.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{BipartiteGraph, Bitset, Layer, TripartiteGraph};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CertificateKind {
    K2s,
    K3s,
}

impl CertificateKind {
    fn parts(self) -> usize {
        match self {
            CertificateKind::K2s => 2,
            CertificateKind::K3s => 3,
        }
    }
}

/// Embedding of `K2(s)` or `K3(s)`: one sorted vertex list of length `s` per part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub s: usize,
    pub parts: Vec<Vec<usize>>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })
    }

    fn well_formed(&self, part_size: impl Fn(usize) -> usize) -> bool {
        self.parts.len() == self.kind.parts()
            && self.parts.iter().enumerate().all(|(p, list)| {
                list.len() == self.s && list.windows(2).all(|w| w[0] < w[1]) && list.iter().all(|&v| v < part_size(p))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessReport {
    pub kind: CertificateKind,
    pub s: usize,
    pub exhaustive: bool,
    pub witness: Option<Certificate>,
}

impl FreenessReport {
    /// True when an exhaustive search found no copy.
    pub fn is_free(&self) -> bool {
        self.exhaustive && self.witness.is_none()
    }
}

/// Worker policy for the top-level subset enumeration. Results do not depend on it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parallelism {
    #[default]
    Single,
    Multi,
}

/// Depth-first enumeration of `s`-subsets of `cands` (sorted ascending) in
/// lexicographic order, threading an accumulator through `step`. A `None`
/// from `step` prunes every superset of the current prefix. The first
/// `Some` returned by `leaf` ends the search.
///
/// If `must` is given, only subsets containing it are visited.
#[allow(clippy::too_many_arguments)]
fn first_subset<A, R>(
    cands: &[usize],
    s: usize,
    must: Option<usize>,
    acc: &A,
    chosen: &mut Vec<usize>,
    start: usize,
    step: &impl Fn(&A, usize) -> Option<A>,
    leaf: &mut impl FnMut(&[usize], &A) -> Option<R>,
) -> Option<R> {
    let have_must = must.is_none_or(|m| chosen.contains(&m));
    if chosen.len() == s {
        return if have_must { leaf(chosen, acc) } else { None };
    }
    let need = s - chosen.len();
    for pos in start..cands.len() {
        if cands.len() - pos < need {
            break;
        }
        let v = cands[pos];
        if let Some(m) = must {
            if !have_must && v > m {
                break;
            }
        }
        let Some(next) = step(acc, v) else { continue };
        chosen.push(v);
        let found = first_subset(cands, s, must, &next, chosen, pos + 1, step, leaf);
        chosen.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

fn check_s(s: usize, max: usize) -> Result<()> {
    if s < 2 || s > max {
        return Err(Error::BadS { s, max });
    }
    Ok(())
}

/// Lexicographically smallest left `s`-set with at least `s` common neighbours.
fn first_left_biclique(b: &BipartiteGraph, s: usize) -> Option<(Vec<usize>, Bitset)> {
    let cands: Vec<usize> = (0..b.n_left()).filter(|&i| b.row(i).count() >= s).collect();
    let step = |acc: &Bitset, v: usize| {
        let next = acc.intersection(b.row(v));
        (next.count() >= s).then_some(next)
    };
    first_subset(
        &cands,
        s,
        None,
        &Bitset::full(b.n_right()),
        &mut Vec::with_capacity(s),
        0,
        &step,
        &mut |set: &[usize], common: &Bitset| Some((set.to_vec(), common.clone())),
    )
}

/// Exhaustive search for `K2(s)`.
///
/// Subsets of the smaller side are enumerated with intersection pruning. The
/// witness is the smallest by left set, then right set.
pub fn find_k2s(b: &BipartiteGraph, s: usize) -> Result<FreenessReport> {
    check_s(s, b.n_left().min(b.n_right()))?;
    let exists = if b.n_left() <= b.n_right() { None } else { Some(first_left_biclique(&b.transpose(), s).is_some()) };
    let witness = match exists {
        Some(false) => None,
        // left enumeration yields the canonical witness directly
        _ => first_left_biclique(b, s).map(|(left, common)| Certificate {
            kind: CertificateKind::K2s,
            s,
            parts: vec![left, common.iter().take(s).collect()],
        }),
    };
    Ok(FreenessReport { kind: CertificateKind::K2s, s, exhaustive: true, witness })
}

pub fn find_k3s(g: &TripartiteGraph, s: usize) -> Result<FreenessReport> {
    find_k3s_with(g, s, Parallelism::Single)
}

/// Exhaustive search for `K3(s)`.
///
/// For every `s`-subset of `V1` in lexicographic order (pruned once its common
/// neighbourhood in `V2` or `V3` has fewer than `s` vertices), the `(2,3)`
/// layer restricted to the two common neighbourhoods is searched for `K2(s)`.
/// The first hit is the lexicographically smallest copy, for any worker count.
pub fn find_k3s_with(g: &TripartiteGraph, s: usize, par: Parallelism) -> Result<FreenessReport> {
    check_s(s, g.n())?;
    let n = g.n();
    let (l12, l13, l23) = (g.layer(Layer::L12), g.layer(Layer::L13), g.layer(Layer::L23));
    let cands: Vec<usize> = (0..n).filter(|&i| l12.row(i).count() >= s && l13.row(i).count() >= s).collect();
    let step = |acc: &(Bitset, Bitset), v: usize| {
        let c2 = acc.0.intersection(l12.row(v));
        if c2.count() < s {
            return None;
        }
        let c3 = acc.1.intersection(l13.row(v));
        (c3.count() >= s).then_some((c2, c3))
    };
    let leaf = |set: &[usize], (c2, c3): &(Bitset, Bitset)| {
        let c2: Vec<usize> = c2.iter().collect();
        let c3: Vec<usize> = c3.iter().collect();
        let inner = find_k2s(&l23.restrict(&c2, &c3), s).expect("restriction has at least s vertices per side");
        inner.witness.map(|w| Certificate {
            kind: CertificateKind::K3s,
            s,
            parts: vec![
                set.to_vec(),
                w.parts[0].iter().map(|&i| c2[i]).collect(),
                w.parts[1].iter().map(|&j| c3[j]).collect(),
            ],
        })
    };
    let root = (Bitset::full(n), Bitset::full(n));
    let branch = |pos: usize| {
        let first = cands[pos];
        let acc = step(&root, first)?;
        let mut chosen = vec![first];
        first_subset(&cands, s, None, &acc, &mut chosen, pos + 1, &step, &mut { leaf })
    };
    let witness = match par {
        Parallelism::Single => (0..cands.len()).find_map(branch),
        Parallelism::Multi => (0..cands.len()).into_par_iter().find_map_first(branch),
    };
    Ok(FreenessReport { kind: CertificateKind::K3s, s, exhaustive: true, witness })
}

/// Some copy of `K3(s)` that uses the edge `(i, j)` of `layer`, if one exists.
pub fn k3s_through_edge(
    g: &TripartiteGraph,
    s: usize,
    layer: Layer,
    i: usize,
    j: usize,
) -> Result<Option<Certificate>> {
    check_s(s, g.n())?;
    if !g.has_edge(layer, i, j) {
        return Ok(None);
    }
    let forced = match layer {
        Layer::L12 => [Some(i), Some(j), None],
        Layer::L13 => [Some(i), None, Some(j)],
        Layer::L23 => [None, Some(i), Some(j)],
    };
    Ok(forced_k3s(g, s, forced))
}

/// Smallest copy of `K3(s)` containing every forced vertex.
fn forced_k3s(g: &TripartiteGraph, s: usize, forced: [Option<usize>; 3]) -> Option<Certificate> {
    let n = g.n();
    let (l12, l13, l23) = (g.layer(Layer::L12), g.layer(Layer::L13), g.layer(Layer::L23));
    let l12t = l12.transpose();
    let l13t = l13.transpose();
    let l23t = l23.transpose();

    // V1 candidates must see the forced vertices of V2 and V3
    let mut c1 = Bitset::full(n);
    if let Some(b) = forced[1] {
        c1.intersect_with(l12t.row(b));
    }
    if let Some(c) = forced[2] {
        c1.intersect_with(l13t.row(c));
    }
    if let Some(a) = forced[0] {
        if !c1.contains(a) {
            return None;
        }
    }
    let cands1: Vec<usize> = c1.iter().collect();
    let step1 = |acc: &(Bitset, Bitset), v: usize| {
        let c2 = acc.0.intersection(l12.row(v));
        let c3 = acc.1.intersection(l13.row(v));
        (c2.count() >= s && c3.count() >= s).then_some((c2, c3))
    };
    let mut leaf1 = |set1: &[usize], (c2, c3): &(Bitset, Bitset)| {
        let mut c2 = c2.clone();
        if let Some(c) = forced[2] {
            if !c3.contains(c) {
                return None;
            }
            c2.intersect_with(l23t.row(c));
        }
        if let Some(b) = forced[1] {
            if !c2.contains(b) {
                return None;
            }
        }
        let cands2: Vec<usize> = c2.iter().collect();
        let step2 = |acc: &Bitset, v: usize| {
            let next = acc.intersection(l23.row(v));
            (next.count() >= s).then_some(next)
        };
        let mut leaf2 = |set2: &[usize], c3: &Bitset| {
            let mut set3: Vec<usize> = forced[2].into_iter().collect();
            set3.extend(c3.iter().filter(|&v| Some(v) != forced[2]).take(s - set3.len()));
            set3.sort_unstable();
            Some(Certificate { kind: CertificateKind::K3s, s, parts: vec![set1.to_vec(), set2.to_vec(), set3] })
        };
        first_subset(&cands2, s, forced[1], c3, &mut Vec::new(), 0, &step2, &mut leaf2)
    };
    first_subset(&cands1, s, forced[0], &(Bitset::full(n), Bitset::full(n)), &mut Vec::new(), 0, &step1, &mut leaf1)
}

/// Graphs a certificate can be checked against.
pub trait CertificateHost {
    fn verify(&self, cert: &Certificate) -> bool;
}

impl CertificateHost for BipartiteGraph {
    fn verify(&self, cert: &Certificate) -> bool {
        if cert.kind != CertificateKind::K2s {
            return false;
        }
        let sizes = [self.n_left(), self.n_right()];
        cert.well_formed(|p| sizes[p])
            && cert.parts[0].iter().all(|&i| cert.parts[1].iter().all(|&j| self.has_edge(i, j)))
    }
}

impl CertificateHost for TripartiteGraph {
    fn verify(&self, cert: &Certificate) -> bool {
        if cert.kind != CertificateKind::K3s || !cert.well_formed(|_| self.n()) {
            return false;
        }
        Layer::ALL.iter().all(|&l| {
            let (a, b) = l.parts();
            cert.parts[a.index()].iter().all(|&i| cert.parts[b.index()].iter().all(|&j| self.has_edge(l, i, j)))
        })
    }
}

/// True iff the lists are sorted, in range, of length `s`, and every cross pair is an edge.
pub fn verify_certificate<H: CertificateHost + ?Sized>(host: &H, cert: &Certificate) -> bool {
    host.verify(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Part;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn subsets(n: usize, s: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(n: usize, s: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == s {
                out.push(cur.clone());
                return;
            }
            for v in start..n {
                cur.push(v);
                rec(n, s, v + 1, cur, out);
                cur.pop();
            }
        }
        rec(n, s, 0, &mut cur, &mut out);
        out
    }

    /// All copies in lexicographic order, by brute force over (C(n,s))^3 triples.
    fn naive_k3s(g: &TripartiteGraph, s: usize) -> Vec<Vec<Vec<usize>>> {
        let subs = subsets(g.n(), s);
        let mut out = Vec::new();
        for a in &subs {
            for b in &subs {
                for c in &subs {
                    let cert =
                        Certificate { kind: CertificateKind::K3s, s, parts: vec![a.clone(), b.clone(), c.clone()] };
                    if verify_certificate(g, &cert) {
                        out.push(cert.parts);
                    }
                }
            }
        }
        out
    }

    fn naive_k2s(b: &BipartiteGraph, s: usize) -> Option<Vec<Vec<usize>>> {
        for l in subsets(b.n_left(), s) {
            for r in subsets(b.n_right(), s) {
                let cert = Certificate { kind: CertificateKind::K2s, s, parts: vec![l.clone(), r] };
                if verify_certificate(b, &cert) {
                    return Some(cert.parts);
                }
            }
        }
        None
    }

    #[test]
    fn four_cycle_is_k22() {
        let c4 = BipartiteGraph::complete(2, 2);
        let rep = find_k2s(&c4, 2).unwrap();
        assert_eq!(rep.witness.unwrap().parts, vec![vec![0, 1], vec![0, 1]]);
        let k33 = BipartiteGraph::complete(3, 3);
        assert_eq!(find_k2s(&k33, 3).unwrap().witness.unwrap().parts, vec![vec![0, 1, 2]; 2]);
    }

    #[test]
    fn bad_s_is_rejected() {
        let b = BipartiteGraph::complete(3, 2);
        assert_eq!(find_k2s(&b, 3), Err(Error::BadS { s: 3, max: 2 }));
        assert_eq!(find_k2s(&b, 1), Err(Error::BadS { s: 1, max: 2 }));
        assert!(matches!(find_k3s(&TripartiteGraph::complete(2), 3), Err(Error::BadS { .. })));
    }

    #[test]
    fn k2s_matches_naive_and_is_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..400 {
            let nl = 2 + trial % 6;
            let nr = 2 + (trial / 6) % 6;
            let b = BipartiteGraph::random(nl, nr, 0.55, &mut rng);
            for s in 2..=nl.min(nr).min(3) {
                let got = find_k2s(&b, s).unwrap().witness.map(|c| c.parts);
                assert_eq!(got, naive_k2s(&b, s), "trial {trial} s {s}");
            }
        }
    }

    #[test]
    fn complete_tripartite_n2() {
        let g = TripartiteGraph::complete(2);
        let rep = find_k3s(&g, 2).unwrap();
        let w = rep.witness.unwrap();
        assert_eq!(w.parts, vec![vec![0, 1]; 3]);
        assert!(verify_certificate(&g, &w));
        let mut h = g.clone();
        h.remove_edge(Layer::L23, 1, 0);
        assert!(!verify_certificate(&h, &w));
        assert!(find_k3s(&h, 2).unwrap().is_free());
    }

    #[test]
    fn malformed_certificates_are_rejected() {
        let g = TripartiteGraph::complete(3);
        let mk = |parts: Vec<Vec<usize>>| Certificate { kind: CertificateKind::K3s, s: 2, parts };
        assert!(verify_certificate(&g, &mk(vec![vec![0, 1], vec![0, 2], vec![1, 2]])));
        assert!(!verify_certificate(&g, &mk(vec![vec![1, 0], vec![0, 2], vec![1, 2]])));
        assert!(!verify_certificate(&g, &mk(vec![vec![1, 1], vec![0, 2], vec![1, 2]])));
        assert!(!verify_certificate(&g, &mk(vec![vec![0, 3], vec![0, 2], vec![1, 2]])));
        assert!(!verify_certificate(&g, &mk(vec![vec![0, 1], vec![0, 2]])));
        assert!(!verify_certificate(&g, &mk(vec![vec![0], vec![0, 2], vec![1, 2]])));
        let k2 = Certificate { kind: CertificateKind::K2s, s: 2, parts: vec![vec![0, 1], vec![0, 1]] };
        assert!(!verify_certificate(&g, &k2));
    }

    #[test]
    fn k3s_exhaustive_for_n2() {
        // every graph on 12 potential edges
        for mask in 0u32..(1 << 12) {
            let mut g = TripartiteGraph::new(2);
            for (bit, l) in (0..12).map(|b| (b, Layer::ALL[b / 4])) {
                if mask >> bit & 1 == 1 {
                    g.add_edge(l, (bit % 4) / 2, bit % 2);
                }
            }
            let got = find_k3s(&g, 2).unwrap().witness.map(|c| c.parts);
            assert_eq!(got, naive_k3s(&g, 2).first().cloned(), "mask {mask:#x}");
        }
    }

    #[test]
    fn k3s_matches_naive_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for trial in 0..600 {
            let n = 2 + trial % 3;
            let d = 0.6 + 0.4 * (trial % 7) as f64 / 7.0;
            let g = TripartiteGraph::random(n, [d, d, d], &mut rng);
            let naive = naive_k3s(&g, 2);
            let single = find_k3s(&g, 2).unwrap();
            let multi = find_k3s_with(&g, 2, Parallelism::Multi).unwrap();
            assert_eq!(single, multi);
            assert_eq!(single.witness.map(|c| c.parts), naive.first().cloned(), "trial {trial}");
            if n >= 3 {
                let got = find_k3s(&g, 3).unwrap().witness.map(|c| c.parts);
                assert_eq!(got, naive_k3s(&g, 3).first().cloned());
            }
        }
    }

    #[test]
    fn through_edge_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for trial in 0..200 {
            let n = 2 + trial % 3;
            let g = TripartiteGraph::random(n, [0.85; 3], &mut rng);
            let all = naive_k3s(&g, 2);
            for l in Layer::ALL {
                let (pa, pb) = l.parts();
                for (i, j) in g.layer(l).edges().collect::<Vec<_>>() {
                    let expected = all.iter().any(|c| c[pa.index()].contains(&i) && c[pb.index()].contains(&j));
                    let got = k3s_through_edge(&g, 2, l, i, j).unwrap();
                    assert_eq!(got.is_some(), expected, "trial {trial} {l:?} ({i},{j})");
                    if let Some(c) = got {
                        assert!(verify_certificate(&g, &c));
                        assert!(c.parts[pa.index()].contains(&i) && c.parts[pb.index()].contains(&j));
                    }
                }
            }
        }
        let _ = Part::V1;
    }

    #[test]
    fn certificate_json_layout() {
        let c = Certificate { kind: CertificateKind::K3s, s: 2, parts: vec![vec![0, 1], vec![2, 3], vec![4, 5]] };
        assert_eq!(c.to_json(), r#"{"kind":"K3s","s":2,"parts":[[0,1],[2,3],[4,5]]}"#);
        assert_eq!(Certificate::from_json(&c.to_json()).unwrap(), c);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn tripartite(n: usize) -> impl Strategy<Value = TripartiteGraph> {
            proptest::collection::vec(any::<bool>(), 3 * n * n).prop_map(move |bits| {
                let mut g = TripartiteGraph::new(n);
                for (k, &on) in bits.iter().enumerate() {
                    if on {
                        g.add_edge(Layer::ALL[k / (n * n)], (k % (n * n)) / n, k % n);
                    }
                }
                g
            })
        }

        proptest! {
            #[test]
            fn witness_is_sound_and_adding_edges_keeps_it(g in tripartite(5), l in 0usize..3, i in 0usize..5, j in 0usize..5) {
                let before = find_k3s(&g, 2).unwrap();
                if let Some(w) = &before.witness {
                    prop_assert!(verify_certificate(&g, w));
                }
                let mut h = g.clone();
                h.add_edge(Layer::ALL[l], i, j);
                let after = find_k3s(&h, 2).unwrap();
                prop_assert!(before.is_free() || !after.is_free());
            }

            #[test]
            fn k2s_witness_round_trips(bits in proptest::collection::vec(any::<bool>(), 36)) {
                let b = BipartiteGraph::from_edges(6, 6, bits.iter().enumerate().filter(|(_, &x)| x).map(|(k, _)| (k / 6, k % 6)));
                if let Some(w) = find_k2s(&b, 2).unwrap().witness {
                    prop_assert!(verify_certificate(&b, &w));
                    let parsed = Certificate::from_json(&w.to_json()).unwrap();
                    prop_assert!(verify_certificate(&b, &parsed));
                }
            }
        }
    }
}
