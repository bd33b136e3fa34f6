//! The Desarguesian projective plane PG(2, q) and its point–line incidence graph.

use crate::error::{Error, Result};
use crate::gf::{FieldElem, FiniteField};
use crate::graph::{BipartiteGraph, Bitset};

pub type Triple = [FieldElem; 3];

#[derive(Clone, Debug)]
pub struct ProjectivePlane {
    q: u64,
    field: FiniteField,
    points: Vec<Triple>,
    lines: Vec<Triple>,
    /// For each line, its incident points in increasing index order.
    incidence: Vec<Vec<usize>>,
}

/// Every normalized nonzero triple (first nonzero coordinate equal to 1), sorted.
fn normalized_triples(f: &FiniteField) -> Vec<Triple> {
    let els: Vec<FieldElem> = f.elements().collect();
    let (zero, one) = (f.zero(), f.one());
    let mut out = Vec::new();
    for b in &els {
        for c in &els {
            out.push([one.clone(), b.clone(), c.clone()]);
        }
    }
    for c in &els {
        out.push([zero.clone(), one.clone(), c.clone()]);
    }
    out.push([zero.clone(), zero, one]);
    out.sort();
    out
}

fn dot(f: &FiniteField, a: &Triple, b: &Triple) -> FieldElem {
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        acc = f.add(&acc, &f.mul(x, y));
    }
    acc
}

impl ProjectivePlane {
    pub fn new(q: u64) -> Result<Self> {
        let field = FiniteField::of_order(q).map_err(|e| match e {
            Error::NotPrime(_) | Error::NotPrimePower(_) => Error::NotPrimePower(q),
            other => other,
        })?;
        let points = normalized_triples(&field);
        let lines = points.clone();
        let incidence = lines
            .iter()
            .map(|l| points.iter().enumerate().filter(|(_, p)| dot(&field, p, l).is_zero()).map(|(i, _)| i).collect())
            .collect();
        Ok(ProjectivePlane { q, field, points, lines, incidence })
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// Number of points, which equals the number of lines: `q^2 + q + 1`.
    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Triple] {
        &self.points
    }

    pub fn lines(&self) -> &[Triple] {
        &self.lines
    }

    pub fn points_on(&self, line: usize) -> &[usize] {
        &self.incidence[line]
    }

    /// Bipartite graph with points on the left and lines on the right.
    pub fn incidence_graph(&self) -> BipartiteGraph {
        let n = self.size();
        BipartiteGraph::from_edges(
            n,
            n,
            self.incidence.iter().enumerate().flat_map(|(l, pts)| pts.iter().map(move |&p| (p, l))),
        )
    }

    /// The dual structure: lines become points and vice versa.
    pub fn dual_incidence(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.size()];
        for (l, pts) in self.incidence.iter().enumerate() {
            for &p in pts {
                out[p].push(l);
            }
        }
        out
    }

    /// Checks the incidence axioms exhaustively, returning the first violation.
    pub fn check_axioms(&self) -> std::result::Result<(), String> {
        check_incidence_axioms(self.q as usize, self.size(), &self.incidence)
            .and_then(|_| check_incidence_axioms(self.q as usize, self.size(), &self.dual_incidence()))
    }
}

/// Axioms of an order-`q` plane for an incidence list `blocks[line] = points`:
/// `q^2+q+1` blocks over as many points, `q+1` points per block, and exactly one
/// block through every pair of distinct points.
fn check_incidence_axioms(q: usize, n_points: usize, blocks: &[Vec<usize>]) -> std::result::Result<(), String> {
    let n = q * q + q + 1;
    if n_points != n || blocks.len() != n {
        return Err(format!("expected {n} points and lines, found {n_points} and {}", blocks.len()));
    }
    let sets: Vec<Bitset> = blocks.iter().map(|b| Bitset::from_indices(n, b.iter().copied())).collect();
    for (l, set) in sets.iter().enumerate() {
        if set.count() != q + 1 {
            return Err(format!("line {l} has {} points, expected {}", set.count(), q + 1));
        }
    }
    // lines through each point
    let mut through: Vec<Bitset> = vec![Bitset::new(n); n];
    for (l, b) in blocks.iter().enumerate() {
        for &p in b {
            through[p].insert(l);
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            let common = through[a].intersection_count(&through[b]);
            if common != 1 {
                return Err(format!("points {a} and {b} share {common} lines"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::find_k2s;

    #[test]
    fn fano_plane() {
        let p = ProjectivePlane::new(2).unwrap();
        assert_eq!(p.size(), 7);
        assert!(p.incidence.iter().all(|l| l.len() == 3));
        p.check_axioms().unwrap();
        let g = p.incidence_graph();
        assert_eq!(g.edge_count(), 21);
        assert_eq!(g.min_degree(), 3);
        assert!(find_k2s(&g, 2).unwrap().is_free());
    }

    #[test]
    fn canonical_order() {
        let p = ProjectivePlane::new(2).unwrap();
        let coords: Vec<Vec<u32>> = p.points().iter().map(|t| t.iter().map(|e| e.coeffs()[0]).collect()).collect();
        assert_eq!(
            coords,
            vec![
                vec![0, 0, 1],
                vec![0, 1, 0],
                vec![0, 1, 1],
                vec![1, 0, 0],
                vec![1, 0, 1],
                vec![1, 1, 0],
                vec![1, 1, 1]
            ]
        );
        // the line (0,0,1) is z = 0
        assert_eq!(p.points_on(0), &[1, 3, 5]);
    }

    #[test]
    fn orders_three_and_four() {
        let p3 = ProjectivePlane::new(3).unwrap();
        assert_eq!(p3.size(), 13);
        p3.check_axioms().unwrap();
        let g3 = p3.incidence_graph();
        assert_eq!(g3.edge_count(), 52);
        assert!(find_k2s(&g3, 2).unwrap().is_free());

        let p4 = ProjectivePlane::new(4).unwrap();
        assert_eq!(p4.size(), 21);
        assert_eq!(p4.field().degree(), 2);
        p4.check_axioms().unwrap();
    }

    #[test]
    fn degree_exceeds_sqrt_n() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let n = (q * q + q + 1) as f64;
            assert!((q + 1) as f64 > n.sqrt());
        }
    }

    #[test]
    fn rejects_non_prime_powers() {
        for q in [0, 1, 6, 10, 12] {
            assert_eq!(ProjectivePlane::new(q).unwrap_err(), Error::NotPrimePower(q));
        }
    }

    #[test]
    fn axiom_checker_catches_damage() {
        let p = ProjectivePlane::new(2).unwrap();
        let mut blocks = p.incidence.clone();
        blocks[0][0] = blocks[1][0];
        assert!(check_incidence_axioms(2, 7, &blocks).is_err());
    }

    #[test]
    fn incidence_graphs_are_c4_free_up_to_16() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let p = ProjectivePlane::new(q).unwrap();
            let g = p.incidence_graph();
            assert_eq!(g.min_degree() as u64, q + 1);
            assert_eq!(g.left_degrees().into_iter().max().unwrap() as u64, q + 1);
            assert!(find_k2s(&g, 2).unwrap().is_free(), "q={q}");
        }
    }
}
