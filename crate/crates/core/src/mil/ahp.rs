//! Acyclic Hamiltonian partition by way of path-count minimization.
//!
//! The reasoning partition of any order is an acyclic Hamiltonian partition
//! of `⟨V, E⟩` once every arc is treated as a reference arc, and every such
//! partition is the reasoning partition of the order that concatenates its
//! blocks. Minimizing the path count with `E1 := E` therefore minimizes the
//! partition size, and distinct optimal partitions are the distinct reasoning
//! partitions among the optimal orders.

use std::collections::HashSet;

use serde::Serialize;

use super::{solve_exact, Criterion, SolveMode};
use crate::error::Result;
use crate::graph::{ProofGraph, Vertex};
use crate::metrics::reasoning_partition;
use crate::order::{fold_topo_orders, TopoOrder};
use crate::partition::PathPartition;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AhpResult {
    pub best_value: usize,
    pub witness_order: TopoOrder,
    pub witness_partition: PathPartition,
    /// Optimal orders; exhaustive mode only.
    pub optima_count: Option<u64>,
    /// Every minimum partition with blocks sorted; exhaustive mode only.
    pub optimal_partitions: Option<Vec<PathPartition>>,
    pub explored: u64,
}

pub fn solve_ahp(dag: &ProofGraph, mode: SolveMode, cap: Option<u64>) -> Result<AhpResult> {
    let g = dag.all_reference();
    let r = solve_exact(&g, Criterion::ThenPaths, mode, cap)?;
    let witness_partition = reasoning_partition(&g, &r.witness)?;
    let optimal_partitions = match mode {
        SolveMode::Exhaustive => Some(distinct_optimal_partitions(&g, r.best_value, cap)?),
        SolveMode::BranchAndBound => None,
    };
    Ok(AhpResult {
        best_value: r.best_value,
        witness_order: r.witness,
        witness_partition,
        optima_count: r.optima_count,
        optimal_partitions,
        explored: r.explored,
    })
}

fn distinct_optimal_partitions(
    g: &ProofGraph,
    best: usize,
    cap: Option<u64>,
) -> Result<Vec<PathPartition>> {
    let set = fold_topo_orders(
        g,
        cap,
        HashSet::<Vec<Vec<Vertex>>>::new,
        |set, seq| {
            let mut blocks: Vec<Vec<Vertex>> = Vec::new();
            for (k, &v) in seq.iter().enumerate() {
                match blocks.last_mut() {
                    Some(b) if k > 0 && g.is_reference_arc(seq[k - 1], v) => b.push(v),
                    _ => blocks.push(vec![v]),
                }
            }
            if blocks.len() == best {
                blocks.sort();
                set.insert(blocks);
            }
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    )?;
    let mut all: Vec<Vec<Vec<Vertex>>> = set.into_iter().collect();
    all.sort();
    all.into_iter()
        .map(|blocks| PathPartition::new(g.vertex_count(), blocks))
        .collect()
}
