//! The hardness reductions as executable constructions:
//! vertex cover to feedback arc set, feedback arc set to acyclic Hamiltonian
//! partition through grid gadgets, and vertex cover to label minimization.

mod gadget;
mod mil5;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, Vertex};

pub use gadget::{
    build_gadget, fas_from_partition, fas_to_ahp, gadget_orientation, normalize_orientation,
    normalize_orientation_traced, partition_from_fas, GadgetCoords, NormalizeReport, Orientation,
    RepairCase, Role,
};
pub use mil5::{cover_to_order, order_to_cover, vc_to_mil5};

/// Largest vertex count accepted by [`solve_vc_exact`].
pub const VC_MAX_VERTICES: usize = 24;
/// Largest vertex count accepted by [`solve_fas_exact`].
pub const FAS_MAX_VERTICES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct UndirectedGraph {
    n: usize,
    edges: BTreeSet<(Vertex, Vertex)>,
}

impl UndirectedGraph {
    /// Edges are stored with the smaller endpoint first.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v == 0 || v > n {
                    return Err(Error::OutOfRangeVertex { vertex: v, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoopInInput { vertex: a });
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(UndirectedGraph { n, edges: set })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(Vertex, Vertex)> {
        &self.edges
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![1];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if !seen[w - 1] {
                    seen[w - 1] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// First edge with neither endpoint in `cover`.
    pub fn uncovered_edge(&self, cover: &BTreeSet<Vertex>) -> Option<(Vertex, Vertex)> {
        self.edges
            .iter()
            .copied()
            .find(|(a, b)| !cover.contains(a) && !cover.contains(b))
    }

    pub fn is_cover(&self, cover: &BTreeSet<Vertex>) -> bool {
        self.uncovered_edge(cover).is_none()
    }
}

/// Role of a vertex in a split-vertex construction: source vertex `v` becomes
/// `(v, 0) = 2v - 1` and `(v, 1) = 2v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRoles {
    pub source_vertices: usize,
}

impl SplitRoles {
    pub fn vertex(&self, v: Vertex, side: u8) -> Vertex {
        2 * v - 1 + usize::from(side)
    }

    pub fn role(&self, x: Vertex) -> (Vertex, u8) {
        (x.div_ceil(2), u8::from(x.is_multiple_of(2)))
    }
}

/// A generated instance together with the map back to its source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionArtifact<G, R> {
    pub instance: G,
    pub roles: R,
}

/// Split each vertex into an in-copy and an out-copy joined by one arc; every
/// edge becomes two arcs from out-copies to in-copies.
pub fn vc_to_fas(ug: &UndirectedGraph) -> ReductionArtifact<Digraph, SplitRoles> {
    let roles = SplitRoles {
        source_vertices: ug.vertex_count(),
    };
    let mut arcs: Vec<(Vertex, Vertex)> = (1..=ug.vertex_count())
        .map(|v| (roles.vertex(v, 0), roles.vertex(v, 1)))
        .collect();
    for &(a, b) in ug.edges() {
        arcs.push((roles.vertex(a, 1), roles.vertex(b, 0)));
        arcs.push((roles.vertex(b, 1), roles.vertex(a, 0)));
    }
    ReductionArtifact {
        instance: Digraph::new(2 * ug.vertex_count(), arcs).expect("ids in range"),
        roles,
    }
}

/// Minimum vertex cover; among those of minimum size the lexicographically
/// smallest sorted vertex list.
pub fn solve_vc_exact(ug: &UndirectedGraph) -> Result<BTreeSet<Vertex>> {
    let n = ug.vertex_count();
    if n > VC_MAX_VERTICES {
        return Err(Error::ScaleCapExceeded {
            what: format!("{n} vertices; exact vertex cover handles at most {VC_MAX_VERTICES}"),
        });
    }
    let edge_masks: Vec<u32> = ug
        .edges()
        .iter()
        .map(|&(a, b)| 1 << (a - 1) | 1 << (b - 1))
        .collect();
    for k in 0..=n {
        let mut chosen = Vec::with_capacity(k);
        if let Some(mask) = first_cover(n, k, 0, 0, &mut chosen, &edge_masks) {
            return Ok((1..=n).filter(|v| mask >> (v - 1) & 1 == 1).collect());
        }
    }
    unreachable!("the full vertex set is a cover")
}

fn first_cover(
    n: usize,
    k: usize,
    from: usize,
    mask: u32,
    chosen: &mut Vec<usize>,
    edges: &[u32],
) -> Option<u32> {
    if chosen.len() == k {
        return edges.iter().all(|&e| e & mask != 0).then_some(mask);
    }
    for v in from..n {
        if n - v < k - chosen.len() {
            break;
        }
        chosen.push(v);
        let found = first_cover(n, k, v + 1, mask | 1 << v, chosen, edges);
        chosen.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Minimum feedback arc set by dynamic programming over vertex orderings:
/// the arcs pointing backwards in a best ordering, plus every self-loop.
pub fn solve_fas_exact(dg: &Digraph) -> Result<BTreeSet<(Vertex, Vertex)>> {
    let n = dg.vertex_count();
    if n > FAS_MAX_VERTICES {
        return Err(Error::ScaleCapExceeded {
            what: format!(
                "{n} vertices; exact feedback arc set handles at most {FAS_MAX_VERTICES}"
            ),
        });
    }
    let mut succ = vec![0u32; n];
    for &(a, b) in dg.arcs() {
        if a != b {
            succ[a - 1] |= 1 << (b - 1);
        }
    }
    let full = (1usize << n) - 1;
    // best[s]: fewest backward arcs among orderings that place s first
    let mut best = vec![u32::MAX; full + 1];
    let mut choice = vec![0u8; full + 1];
    best[0] = 0;
    for s in 0..=full {
        if best[s] == u32::MAX {
            continue;
        }
        for (v, &out) in succ.iter().enumerate() {
            if s >> v & 1 == 1 {
                continue;
            }
            let t = s | 1 << v;
            let cost = best[s] + (out & s as u32).count_ones();
            if cost < best[t] {
                best[t] = cost;
                choice[t] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = choice[s] as usize;
        order.push(v + 1);
        s &= !(1 << v);
    }
    order.reverse();
    let mut rank = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v - 1] = i;
    }
    Ok(dg
        .arcs()
        .iter()
        .copied()
        .filter(|&(a, b)| a == b || rank[a - 1] > rank[b - 1])
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> UndirectedGraph {
        UndirectedGraph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap()
    }

    /// Brute force over arc subsets, smallest first.
    fn fas_oracle(dg: &Digraph) -> usize {
        let arcs: Vec<_> = dg.arcs().iter().copied().collect();
        let m = arcs.len();
        (0..=m)
            .find(|&k| {
                (0u32..1 << m)
                    .filter(|s| s.count_ones() as usize == k)
                    .any(|s| {
                        let removed: Vec<_> = (0..m)
                            .filter(|i| s >> i & 1 == 1)
                            .map(|i| arcs[i])
                            .collect();
                        dg.without_arcs(&removed).is_acyclic()
                    })
            })
            .unwrap()
    }

    #[test]
    fn vc_small_cases() {
        assert_eq!(solve_vc_exact(&triangle()).unwrap(), BTreeSet::from([1, 2]));
        let edge = UndirectedGraph::new(2, [(1, 2)]).unwrap();
        assert_eq!(solve_vc_exact(&edge).unwrap(), BTreeSet::from([1]));
        let empty = UndirectedGraph::new(4, []).unwrap();
        assert!(solve_vc_exact(&empty).unwrap().is_empty());
        let big = UndirectedGraph::new(30, []).unwrap();
        assert!(matches!(
            solve_vc_exact(&big),
            Err(Error::ScaleCapExceeded { .. })
        ));
    }

    #[test]
    fn vc_to_fas_shapes() {
        let a = vc_to_fas(&triangle());
        assert_eq!(a.instance.vertex_count(), 6);
        assert_eq!(a.instance.arc_count(), 9);
        assert_eq!(solve_fas_exact(&a.instance).unwrap().len(), 2);
        assert_eq!(fas_oracle(&a.instance), 2);
        for x in 1..=6 {
            assert!(a.instance.in_degree(x) == 1 || a.instance.out_degree(x) == 1);
        }

        let e = vc_to_fas(&UndirectedGraph::new(2, [(1, 2)]).unwrap());
        assert_eq!((e.instance.vertex_count(), e.instance.arc_count()), (4, 4));
        assert_eq!(solve_fas_exact(&e.instance).unwrap().len(), 1);

        let none = vc_to_fas(&UndirectedGraph::new(3, []).unwrap());
        assert_eq!(
            (none.instance.vertex_count(), none.instance.arc_count()),
            (6, 3)
        );
        assert!(solve_fas_exact(&none.instance).unwrap().is_empty());
    }

    #[test]
    fn fas_small_cases() {
        let two = Digraph::new(2, [(1, 2), (2, 1)]).unwrap();
        assert_eq!(solve_fas_exact(&two).unwrap().len(), 1);
        let three = Digraph::new(3, [(1, 2), (2, 3), (3, 1)]).unwrap();
        assert_eq!(solve_fas_exact(&three).unwrap().len(), 1);
        let dag = Digraph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        assert!(solve_fas_exact(&dag).unwrap().is_empty());
        let looped = Digraph::new(2, [(1, 1), (1, 2)]).unwrap();
        assert_eq!(solve_fas_exact(&looped).unwrap(), BTreeSet::from([(1, 1)]));
    }

    #[test]
    fn fas_matches_subset_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..60 {
            let n = rng.gen_range(1..=5);
            let arcs: Vec<_> = (1..=n)
                .flat_map(|a| (1..=n).map(move |b| (a, b)))
                .filter(|(a, b)| a != b)
                .filter(|_| rng.gen_bool(0.35))
                .collect();
            let dg = Digraph::new(n, arcs).unwrap();
            let fas = solve_fas_exact(&dg).unwrap();
            assert!(dg.without_arcs(&fas).is_acyclic());
            assert_eq!(fas.len(), fas_oracle(&dg), "{dg:?}");
        }
    }

    #[test]
    fn split_roles() {
        let r = SplitRoles { source_vertices: 3 };
        for v in 1..=3 {
            for side in 0..2 {
                assert_eq!(r.role(r.vertex(v, side)), (v, side));
            }
        }
    }

    #[test]
    fn self_loops_rejected() {
        assert_eq!(
            UndirectedGraph::new(2, [(2, 2)]).unwrap_err(),
            Error::SelfLoopInInput { vertex: 2 }
        );
    }
}
