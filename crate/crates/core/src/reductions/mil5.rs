//! Vertex cover to label minimization under the plain rule.
//!
//! Vertex `v` becomes a cited step `(v,0)` and its citing step `(v,1)`; each
//! edge `{v,u}` adds variable arcs `(v,0) -> (u,1)` and `(u,0) -> (v,1)`.
//! `(v,0)` can skip its label only by sitting right before `(v,1)`, which
//! forces every neighbour of `v` to label its own `(u,0)`.

use std::collections::BTreeSet;

use super::{ReductionArtifact, SplitRoles, UndirectedGraph};
use crate::error::{Error, Result};
use crate::graph::{ProofGraph, Vertex};
use crate::metrics::{label_set, LabelRule};
use crate::order::TopoOrder;
use crate::partition::{order_from_partition, PathPartition};

pub fn vc_to_mil5(ug: &UndirectedGraph) -> ReductionArtifact<ProofGraph, SplitRoles> {
    let roles = SplitRoles {
        source_vertices: ug.vertex_count(),
    };
    let refs: Vec<(Vertex, Vertex)> = (1..=ug.vertex_count())
        .map(|v| (roles.vertex(v, 0), roles.vertex(v, 1)))
        .collect();
    let vars: Vec<(Vertex, Vertex)> = ug
        .edges()
        .iter()
        .flat_map(|&(a, b)| {
            [
                (roles.vertex(a, 0), roles.vertex(b, 1)),
                (roles.vertex(b, 0), roles.vertex(a, 1)),
            ]
        })
        .collect();
    ReductionArtifact {
        instance: ProofGraph::build(2 * ug.vertex_count(), &refs, &vars)
            .expect("split vertices are in range"),
        roles,
    }
}

fn source_edges(g: &ProofGraph, roles: &SplitRoles) -> Vec<(Vertex, Vertex)> {
    g.non_reference_arcs()
        .map(|(a, b)| (roles.role(a).0, roles.role(b).0))
        .filter(|(a, b)| a < b)
        .collect()
}

/// Keeps `(v,0)` right before `(v,1)` for every `v` outside the cover.
pub fn cover_to_order(
    g: &ProofGraph,
    roles: &SplitRoles,
    cover: &BTreeSet<Vertex>,
) -> Result<TopoOrder> {
    if let Some(&(a, b)) = source_edges(g, roles)
        .iter()
        .find(|(a, b)| !cover.contains(a) && !cover.contains(b))
    {
        return Err(Error::NotACover(a, b));
    }
    let mut blocks = Vec::with_capacity(2 * roles.source_vertices);
    for v in 1..=roles.source_vertices {
        let (x, y) = (roles.vertex(v, 0), roles.vertex(v, 1));
        if cover.contains(&v) {
            blocks.push(vec![x]);
            blocks.push(vec![y]);
        } else {
            blocks.push(vec![x, y]);
        }
    }
    let p = PathPartition::new(g.vertex_count(), blocks)?;
    order_from_partition(g, &p)
}

/// Source vertices whose cited copy carries a label in `t`.
pub fn order_to_cover(
    g: &ProofGraph,
    roles: &SplitRoles,
    t: &TopoOrder,
) -> Result<BTreeSet<Vertex>> {
    let labels = label_set(g, t, LabelRule::Plain)?;
    Ok(labels
        .into_iter()
        .map(|x| roles.role(x))
        .filter(|&(_, side)| side == 0)
        .map(|(v, _)| v)
        .collect())
}
