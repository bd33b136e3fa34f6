//! Constructive search for `K3(s)` along the triangle-link argument.
//!
//! 1. For each `i ∈ V1`, its triangle link `A_i ⊆ V2 × V3` is the set of pairs
//!    `(x, y)` with `{i, x, y}` a triangle.
//! 2. An exact branch-and-bound picks `s` links with the largest common
//!    intersection (the averaging lemma only promises `N (αw)^s`).
//! 3. The common intersection is read as a bipartite graph on `V2 × V3`; any
//!    `K2(s)` in it, together with the chosen `V1` vertices, spans a `K3(s)`.
//!
//! If step 3 comes up empty the pipeline falls back to the exhaustive detector.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds;
use crate::error::{Error, Result};
use crate::graph::{
    find_k2s, find_k3s_with, verify_certificate, BipartiteGraph, Bitset, Certificate, CertificateKind, Layer,
    Parallelism, TripartiteGraph,
};

pub const DEFAULT_EPS: f64 = 1.0;

/// Family of subsets `A_1..A_p` of a ground set of size `N`, with the density
/// `w`, slack `alpha` and target count `q` of the averaging lemma.
#[derive(Clone, Debug)]
pub struct IntersectionInstance {
    pub ground_size: usize,
    pub sets: Vec<Bitset>,
    pub w: Option<f64>,
    pub alpha: Option<f64>,
    pub q_target: usize,
}

impl IntersectionInstance {
    pub fn new(ground_size: usize, sets: Vec<Bitset>, q_target: usize) -> Self {
        IntersectionInstance { ground_size, sets, w: None, alpha: None, q_target }
    }

    pub fn p(&self) -> usize {
        self.sets.len()
    }

    pub fn total_size(&self) -> usize {
        self.sets.iter().map(Bitset::count).sum()
    }

    /// `Σ|A_i| >= p w N`, `(1 - α) w p >= q` and `0 < α < 1`; `None` while `w` or `α` is unset.
    pub fn hypotheses_hold(&self) -> Option<bool> {
        let (w, alpha) = (self.w?, self.alpha?);
        let p = self.p() as f64;
        let slack = 1.0 - 1e-12;
        let mass = self.total_size() as f64 >= slack * p * w * self.ground_size as f64;
        let count = (1.0 - alpha) * w * p >= slack * self.q_target as f64;
        Some(alpha > 0.0 && alpha < 1.0 && mass && count)
    }

    /// `N (α w)^q`; `None` while `w` or `α` is unset.
    pub fn guarantee(&self) -> Option<f64> {
        Some(self.ground_size as f64 * (self.alpha? * self.w?).powi(self.q_target as i32))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntersectionWitness {
    pub indices: Vec<usize>,
    pub intersection_size: usize,
    #[serde(skip)]
    pub intersection: Bitset,
    pub guarantee: Option<f64>,
    pub hypotheses_hold: bool,
    /// Whether the size reaches the guarantee; `None` when the lemma does not apply.
    pub meets_guarantee: Option<bool>,
}

/// Ground set `V2 × V3` indexed as `x * n + y`; `A_i` is the triangle link of `i ∈ V1`.
/// `w`, `alpha` and `q_target` are left for the caller.
pub fn triangle_links(g: &TripartiteGraph) -> IntersectionInstance {
    let n = g.n();
    let (l12, l13, l23) = (g.layer(Layer::L12), g.layer(Layer::L13), g.layer(Layer::L23));
    let sets = (0..n)
        .map(|i| {
            let mut link = Bitset::new(n * n);
            for x in l12.row(i).iter() {
                for y in l23.row(x).intersection(l13.row(i)).iter() {
                    link.insert(x * n + y);
                }
            }
            link
        })
        .collect();
    IntersectionInstance::new(n * n, sets, 0)
}

struct Best {
    size: usize,
    indices: Vec<usize>,
    intersection: Bitset,
}

/// Depth-first branch-and-bound below a fixed prefix. A subtree is cut when
/// its partial intersection cannot beat the branch incumbent (ties lose to the
/// earlier, lexicographically smaller, incumbent) or is strictly below the
/// best size any branch has reached so far.
fn bnb(
    sets: &[Bitset],
    q: usize,
    chosen: &mut Vec<usize>,
    acc: &Bitset,
    best: &mut Option<Best>,
    shared: &AtomicUsize,
) {
    let size = acc.count();
    if let Some(b) = best {
        if size <= b.size {
            return;
        }
    }
    if size < shared.load(Ordering::Relaxed) {
        return;
    }
    if chosen.len() == q {
        *best = Some(Best { size, indices: chosen.clone(), intersection: acc.clone() });
        shared.fetch_max(size, Ordering::Relaxed);
        return;
    }
    let start = chosen.last().map_or(0, |&l| l + 1);
    let need = q - chosen.len();
    for i in start..=sets.len() - need {
        chosen.push(i);
        bnb(sets, q, chosen, &acc.intersection(&sets[i]), best, shared);
        chosen.pop();
    }
}

pub fn large_intersection(inst: &IntersectionInstance) -> Result<IntersectionWitness> {
    large_intersection_with(inst, Parallelism::Single)
}

/// The `q_target` sets whose common intersection is largest, ties broken by the
/// lexicographically smallest index tuple.
pub fn large_intersection_with(inst: &IntersectionInstance, par: Parallelism) -> Result<IntersectionWitness> {
    let (p, q) = (inst.p(), inst.q_target);
    if q == 0 || q > p {
        return Err(Error::BadQ { q, p });
    }
    let shared = AtomicUsize::new(0);
    let branch = |first: usize| {
        let mut best = None;
        let mut chosen = vec![first];
        bnb(&inst.sets, q, &mut chosen, &inst.sets[first], &mut best, &shared);
        best
    };
    let firsts = 0..=p - q;
    let branches: Vec<Option<Best>> = match par {
        Parallelism::Single => firsts.map(branch).collect(),
        Parallelism::Multi => firsts.into_par_iter().map(branch).collect(),
    };
    // earliest branch wins ties
    let best = branches
        .into_iter()
        .flatten()
        .reduce(|a, b| if b.size > a.size { b } else { a })
        .expect("the first branch always records a candidate");
    let hypotheses_hold = inst.hypotheses_hold().unwrap_or(false);
    let guarantee = inst.guarantee();
    let meets_guarantee = match guarantee {
        Some(gu) if hypotheses_hold => Some(best.size as f64 >= gu * (1.0 - 1e-12)),
        _ => None,
    };
    Ok(IntersectionWitness {
        indices: best.indices,
        intersection_size: best.size,
        intersection: best.intersection,
        guarantee,
        hypotheses_hold,
        meets_guarantee,
    })
}

/// Machine-readable record of one pipeline run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineTrace {
    pub n: usize,
    pub s: usize,
    pub eps: f64,
    pub min_degree: usize,
    pub t_value: f64,
    pub degree_threshold: f64,
    pub degree_margin: f64,
    pub degree_hypothesis_holds: bool,
    pub triangle_count: u64,
    pub w: f64,
    pub alpha: f64,
    pub lemma_hypotheses_hold: bool,
    pub chosen_indices: Vec<usize>,
    pub intersection_size: usize,
    pub guarantee: f64,
    pub meets_guarantee: Option<bool>,
    pub kst_bound: f64,
    pub eqb_holds: bool,
    /// Degree threshold, the final counting inequality and the intersection
    /// guarantee all hold, so the intersection graph must contain `K2(s)`.
    pub premises_hold: bool,
    pub fallback: bool,
    pub certificate: Option<Certificate>,
}

/// Runs the pipeline. A graph without `K3(s)` yields a trace with no certificate.
pub fn run_pipeline(g: &TripartiteGraph, s: usize, eps: f64, par: Parallelism) -> Result<PipelineTrace> {
    let n = g.n();
    if s < 2 || s > n {
        return Err(Error::BadS { s, max: n });
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::BadArgs(format!("eps must be positive, got {eps}")));
    }
    let min_degree = g.min_degree();
    let t = bounds::t_value(n as u64, s as u64, eps)?;
    let degree_threshold = n as f64 + t;
    let degree_margin = min_degree as f64 - degree_threshold;
    let degree_hypothesis_holds = degree_margin >= 0.0;

    let mut inst = triangle_links(g);
    let triangle_count = inst.total_size() as u64;
    let w = triangle_count as f64 / (n as f64).powi(3);
    let alpha = 1.0 / (1.0 + eps);
    inst.w = Some(w);
    inst.alpha = Some(alpha);
    inst.q_target = s;
    let wit = large_intersection_with(&inst, par)?;

    let kst = bounds::kst_bound(n as u64, s as u64)?;
    let eqb_holds = bounds::eqb_check(n as u64, s as u64, eps);
    let premises_hold = degree_hypothesis_holds && eqb_holds && wit.meets_guarantee == Some(true);
    if premises_hold && wit.intersection_size as f64 <= kst {
        return Err(Error::Invariant(format!(
            "intersection {} does not exceed the KST bound {kst} although all premises hold",
            wit.intersection_size
        )));
    }

    let b = BipartiteGraph::from_edges(n, n, wit.intersection.iter().map(|e| (e / n, e % n)));
    let direct = find_k2s(&b, s)?.witness.map(|k2| Certificate {
        kind: CertificateKind::K3s,
        s,
        parts: vec![wit.indices.clone(), k2.parts[0].clone(), k2.parts[1].clone()],
    });
    if premises_hold && direct.is_none() {
        return Err(Error::Invariant("no K2(s) in an intersection graph above the KST bound".into()));
    }
    let fallback = direct.is_none();
    let certificate = match direct {
        Some(c) => Some(c),
        None => find_k3s_with(g, s, par)?.witness,
    };
    if let Some(c) = &certificate {
        if !verify_certificate(g, c) {
            return Err(Error::Invariant(format!("assembled certificate fails verification: {}", c.to_json())));
        }
    }
    Ok(PipelineTrace {
        n,
        s,
        eps,
        min_degree,
        t_value: t,
        degree_threshold,
        degree_margin,
        degree_hypothesis_holds,
        triangle_count,
        w,
        alpha,
        lemma_hypotheses_hold: wit.hypotheses_hold,
        chosen_indices: wit.indices,
        intersection_size: wit.intersection_size,
        guarantee: wit.guarantee.unwrap_or(0.0),
        meets_guarantee: wit.meets_guarantee,
        kst_bound: kst,
        eqb_holds,
        premises_hold,
        fallback,
        certificate,
    })
}

/// A verified `K3(s)` found by the pipeline, or [`Error::NotFound`].
pub fn extract_k3s(g: &TripartiteGraph, s: usize, eps: f64) -> Result<(Certificate, PipelineTrace)> {
    let trace = run_pipeline(g, s, eps, Parallelism::Single)?;
    match trace.certificate.clone() {
        Some(c) => Ok((c, trace)),
        None => Err(Error::NotFound),
    }
}
