//! Partitions of the vertex set into paths, their quotient digraphs, and the
//! passage from an acyclic Hamiltonian partition back to a linear order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, ProofGraph, Vertex};
use crate::order::TopoOrder;

/// An ordered list of blocks, each stored as a vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<Vertex>>", try_from = "Vec<Vec<Vertex>>")]
pub struct PathPartition {
    blocks: Vec<Vec<Vertex>>,
    // block_index[v - 1] is the ordinal of the block holding v
    block_index: Vec<usize>,
}

impl PathPartition {
    /// Checks that `blocks` partitions `1..=n` into non-empty sequences.
    pub fn new(n: usize, blocks: Vec<Vec<Vertex>>) -> Result<Self> {
        let mut block_index = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::NotAPartition {
                    reason: format!("block {} is empty", b + 1),
                });
            }
            for &v in block {
                if v == 0 || v > n {
                    return Err(Error::NotAPartition {
                        reason: format!("vertex {v} is outside 1..={n}"),
                    });
                }
                if block_index[v - 1] != usize::MAX {
                    return Err(Error::NotAPartition {
                        reason: format!("vertex {v} is in two blocks"),
                    });
                }
                block_index[v - 1] = b;
            }
        }
        if let Some(v) = block_index.iter().position(|&b| b == usize::MAX) {
            return Err(Error::NotAPartition {
                reason: format!("vertex {} is in no block", v + 1),
            });
        }
        Ok(PathPartition {
            blocks,
            block_index,
        })
    }

    pub fn singletons(n: usize) -> Self {
        Self::new(n, (1..=n).map(|v| vec![v]).collect()).expect("singletons partition")
    }

    pub fn blocks(&self) -> &[Vec<Vertex>] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<Vec<Vertex>> {
        self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.block_index.len()
    }

    /// 0-based ordinal of the block containing `v`.
    pub fn block_of(&self, v: Vertex) -> usize {
        self.block_index[v - 1]
    }

    /// Same partition with blocks sorted, for comparison as a set of paths.
    pub fn canonical(&self) -> PathPartition {
        let mut blocks = self.blocks.clone();
        blocks.sort();
        Self::new(self.vertex_count(), blocks).expect("reordering keeps a partition")
    }

    /// True when both hold the same set of block sequences.
    pub fn same_blocks(&self, other: &PathPartition) -> bool {
        self.canonical().blocks == other.canonical().blocks
    }
}

impl From<PathPartition> for Vec<Vec<Vertex>> {
    fn from(p: PathPartition) -> Self {
        p.blocks
    }
}

impl TryFrom<Vec<Vec<Vertex>>> for PathPartition {
    type Error = Error;
    fn try_from(blocks: Vec<Vec<Vertex>>) -> Result<Self> {
        let n = blocks.iter().map(Vec::len).sum();
        Self::new(n, blocks)
    }
}

fn check_covers(g: &ProofGraph, p: &PathPartition) -> Result<()> {
    if p.vertex_count() != g.vertex_count() {
        return Err(Error::NotAPartition {
            reason: format!(
                "partition covers {} vertices, graph has {}",
                p.vertex_count(),
                g.vertex_count()
            ),
        });
    }
    Ok(())
}

/// The digraph `D_G(π)` on blocks: vertex `b + 1` stands for block `b`, with
/// an arc whenever some arc of `E` leaves one block for another.
pub fn quotient(g: &ProofGraph, p: &PathPartition) -> Result<Digraph> {
    check_covers(g, p)?;
    let arcs = g.arcs().iter().filter_map(|a| {
        let (x, y) = (p.block_of(a.tail), p.block_of(a.head));
        (x != y).then_some((x + 1, y + 1))
    });
    Digraph::new(p.len(), arcs)
}

/// Checks that every block follows arcs of `E` and the quotient is acyclic.
pub fn check_h_partition(g: &ProofGraph, p: &PathPartition) -> Result<()> {
    check_covers(g, p)?;
    for (b, block) in p.blocks().iter().enumerate() {
        for w in block.windows(2) {
            if !g.has_arc(w[0], w[1]) {
                return Err(Error::NotHPartition {
                    reason: format!(
                        "block {} steps from {} to {} without an arc",
                        b + 1,
                        w[0],
                        w[1]
                    ),
                });
            }
        }
    }
    if let Some(cycle) = quotient(g, p)?.find_cycle() {
        let named: Vec<String> = cycle
            .iter()
            .map(|&b| format!("[{}]", p.blocks()[b - 1][0]))
            .collect();
        return Err(Error::NotHPartition {
            reason: format!("quotient has the cycle {}", named.join(" -> ")),
        });
    }
    Ok(())
}

/// Flag form of [`check_h_partition`], with the failure reason when false.
pub fn is_h_partition(g: &ProofGraph, p: &PathPartition) -> (bool, Option<String>) {
    match check_h_partition(g, p) {
        Ok(()) => (true, None),
        Err(e) => (false, Some(e.to_string())),
    }
}

/// Concatenates the block paths in a topological order of the quotient,
/// preferring the block with the smallest vertex among those available.
pub fn order_from_partition(g: &ProofGraph, p: &PathPartition) -> Result<TopoOrder> {
    for (b, block) in p.blocks().iter().enumerate() {
        for w in block.windows(2) {
            if !g.has_arc(w[0], w[1]) {
                return Err(Error::NotHPartition {
                    reason: format!("block {} is not a path", b + 1),
                });
            }
        }
    }
    let q = quotient(g, p)?;
    let min_vertex: Vec<Vertex> = p
        .blocks()
        .iter()
        .map(|b| *b.iter().min().expect("non-empty block"))
        .collect();
    let block_order = q
        .topological_order_by_key(|b| min_vertex[b - 1])
        .ok_or(Error::QuotientCyclic)?;
    let seq = block_order
        .into_iter()
        .flat_map(|b| p.blocks()[b - 1].iter().copied())
        .collect();
    let t = TopoOrder::from_sequence_unchecked(seq);
    t.check(g)
        .map_err(|e| Error::InternalInvariantViolation(e.to_string()))?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn chain(n: usize) -> ProofGraph {
        let arcs: Vec<_> = (1..n).map(|v| (v, v + 1)).collect();
        ProofGraph::build(n, &arcs, &[]).unwrap()
    }

    #[test]
    fn rejects_non_partitions() {
        assert!(PathPartition::new(3, vec![vec![1, 2]]).is_err());
        assert!(PathPartition::new(2, vec![vec![1, 2], vec![2]]).is_err());
        assert!(PathPartition::new(2, vec![vec![1, 2], vec![]]).is_err());
        assert!(PathPartition::new(2, vec![vec![1, 3]]).is_err());
    }

    #[test]
    fn chain_single_block_gives_identity() {
        let g = chain(4);
        let p = PathPartition::new(4, vec![vec![1, 2, 3, 4]]).unwrap();
        assert!(is_h_partition(&g, &p).0);
        assert_eq!(
            order_from_partition(&g, &p).unwrap(),
            TopoOrder::identity(4)
        );
        assert_eq!(quotient(&g, &p).unwrap().vertex_count(), 1);
    }

    #[test]
    fn singletons_quotient_is_the_graph() {
        let g = chain(2);
        let q = quotient(&g, &PathPartition::singletons(2)).unwrap();
        assert!(q.has_arc(1, 2));
        assert_eq!(q.arc_count(), 1);
        let g6 = fixtures::fig6();
        assert!(is_h_partition(&g6, &PathPartition::singletons(17)).0);
    }

    #[test]
    fn broken_path_is_rejected() {
        let g = chain(3);
        let p = PathPartition::new(3, vec![vec![1, 3], vec![2]]).unwrap();
        let (ok, reason) = is_h_partition(&g, &p);
        assert!(!ok);
        assert!(reason.unwrap().contains("without an arc"));
    }

    #[test]
    fn cyclic_quotient_is_rejected() {
        // blocks [1,4] and [2,3] are paths, but 1->2 and 3->4 run both ways between them
        let g3 = ProofGraph::build(4, &[(1, 2), (3, 4), (1, 4), (2, 3)], &[]).unwrap();
        let p3 = PathPartition::new(4, vec![vec![1, 4], vec![2, 3]]).unwrap();
        assert!(!is_h_partition(&g3, &p3).0);
        assert!(matches!(
            order_from_partition(&g3, &p3),
            Err(Error::QuotientCyclic)
        ));
    }

    #[test]
    fn serde_round_trip() {
        let p = PathPartition::new(3, vec![vec![2, 3], vec![1]]).unwrap();
        let json = serde_json_like(&p);
        assert_eq!(json, vec![vec![2, 3], vec![1]]);
        let back = PathPartition::try_from(json).unwrap();
        assert_eq!(back, p);
    }

    fn serde_json_like(p: &PathPartition) -> Vec<Vec<Vertex>> {
        p.clone().into()
    }
}
