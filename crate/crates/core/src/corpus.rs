//! Seeded generators for test and benchmark instances.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{ProofGraph, Vertex};
use crate::reductions::UndirectedGraph;

/// A random DAG on a random vertex count from `n`. Each forward pair of a
/// hidden random order becomes an arc with probability `p_arc`, and each arc
/// is a reference arc with probability `p_ref`.
pub fn random_proof_graph<R: Rng + ?Sized>(
    rng: &mut R,
    n: RangeInclusive<usize>,
    p_arc: f64,
    p_ref: f64,
) -> ProofGraph {
    let n = rng.gen_range(n);
    let mut label: Vec<Vertex> = (1..=n).collect();
    label.shuffle(rng);
    let (mut refs, mut vars) = (Vec::new(), Vec::new());
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p_arc) {
                let arc = (label[a], label[b]);
                if rng.gen_bool(p_ref) {
                    refs.push(arc);
                } else {
                    vars.push(arc);
                }
            }
        }
    }
    ProofGraph::build(n, &refs, &vars).expect("arcs follow a hidden order")
}

/// [`random_proof_graph`] conditioned on having a vertex incident only to
/// reference arcs, as script generation requires.
pub fn random_scriptable_graph<R: Rng + ?Sized>(
    rng: &mut R,
    n: RangeInclusive<usize>,
    p_arc: f64,
    p_ref: f64,
) -> ProofGraph {
    loop {
        let g = random_proof_graph(rng, n.clone(), p_arc, p_ref);
        if crate::codegen::thesis_vertex(&g).is_some() {
            return g;
        }
    }
}

/// A uniformly random linear extension.
pub fn random_order<R: Rng + ?Sized>(rng: &mut R, g: &ProofGraph) -> Vec<Vertex> {
    let n = g.vertex_count();
    let mut missing: Vec<usize> = (1..=n).map(|v| g.predecessors(v).len()).collect();
    let mut ready: Vec<Vertex> = (1..=n).filter(|&v| missing[v - 1] == 0).collect();
    let mut seq = Vec::with_capacity(n);
    while !ready.is_empty() {
        let k = rng.gen_range(0..ready.len());
        let v = ready.swap_remove(k);
        seq.push(v);
        for &w in g.successors(v) {
            missing[w - 1] -= 1;
            if missing[w - 1] == 0 {
                ready.push(w);
            }
        }
    }
    seq
}

pub fn random_undirected<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> UndirectedGraph {
    let edges: Vec<_> = (1..=n)
        .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    UndirectedGraph::new(n, edges).expect("edges are in range")
}

/// One representative of every connected graph on 1..=`max_n` vertices up
/// to isomorphism, smallest first. Practical for `max_n <= 6`.
pub fn connected_graphs(max_n: usize) -> Vec<UndirectedGraph> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        let perms = permutations(n);
        let mut seen = BTreeSet::new();
        for mask in 0u32..1 << pairs.len() {
            let canon = perms
                .iter()
                .map(|p| {
                    pairs.iter().enumerate().fold(0u32, |acc, (k, &(a, b))| {
                        if mask >> k & 1 == 0 {
                            return acc;
                        }
                        let (x, y) = (p[a].min(p[b]), p[a].max(p[b]));
                        let idx = pairs.iter().position(|&q| q == (x, y)).expect("pair");
                        acc | 1 << idx
                    })
                })
                .min()
                .expect("at least one permutation");
            if !seen.insert(canon) {
                continue;
            }
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| canon >> k & 1 == 1)
                .map(|(_, &(a, b))| (a + 1, b + 1));
            let g = UndirectedGraph::new(n, edges).expect("edges are in range");
            if g.is_connected() {
                out.push(g);
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}
