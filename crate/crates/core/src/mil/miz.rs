//! Polynomial-time minimization of the Mizar label count.
//!
//! Under the Mizar rule a step is labelled whenever it is cited more than once
//! or is both cited and used through a variable (`L1`). Every other cited step
//! has a single citing step, and among the steps citing into one vertex only
//! one can sit immediately before it, so all but one of them are labelled
//! (`L2`). The remaining citations form vertex-disjoint paths whose
//! concatenation in a topological order of their quotient attains `|L1| + |L2|`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::graph::{ProofGraph, Vertex};
use crate::order::TopoOrder;
use crate::partition::{order_from_partition, PathPartition};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MizDecomposition {
    pub label_count: usize,
    pub witness: TopoOrder,
    pub l1: BTreeSet<Vertex>,
    pub l2: BTreeSet<Vertex>,
    /// Maximal paths of the retained citations, in witness order.
    pub paths: Vec<Vec<Vertex>>,
}

pub fn mil5_miz_polynomial(g: &ProofGraph) -> MizDecomposition {
    let n = g.vertex_count();
    let l1: BTreeSet<Vertex> = g
        .vertices()
        .filter(|&v| {
            let r = g.ref_successors(v).len();
            r > 1 || (r == 1 && g.successors(v).len() > 1)
        })
        .collect();

    // retained citation into each vertex, chosen as the smallest tail
    let mut next: Vec<Option<Vertex>> = vec![None; n];
    let mut prev: Vec<Option<Vertex>> = vec![None; n];
    let mut l2 = BTreeSet::new();
    for v in g.vertices() {
        let mut tails = g
            .ref_predecessors(v)
            .iter()
            .copied()
            .filter(|u| !l1.contains(u));
        if let Some(keep) = tails.next() {
            prev[v - 1] = Some(keep);
            next[keep - 1] = Some(v);
            l2.extend(tails);
        }
    }

    let mut paths = Vec::new();
    for v in g.vertices().filter(|&v| prev[v - 1].is_none()) {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(w) = next[cur - 1] {
            path.push(w);
            cur = w;
        }
        paths.push(path);
    }
    let partition = PathPartition::new(n, paths).expect("retained citations form disjoint paths");
    let witness =
        order_from_partition(g, &partition).expect("paths leave only through their last vertex");
    let mut ordered: Vec<Vec<Vertex>> = partition.into_blocks();
    ordered.sort_by_key(|p| witness.position(p[0]));
    MizDecomposition {
        label_count: l1.len() + l2.len(),
        witness,
        l1,
        l2,
        paths: ordered,
    }
}
