//! Legibility measures of a single linearization.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ProofGraph, Vertex};
use crate::order::TopoOrder;
use crate::partition::PathPartition;

/// Which steps need a label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LabelRule {
    /// A step is labelled when some citing step is not its immediate successor.
    Plain,
    /// As `Plain`, and also when a step that is cited at all introduces a
    /// variable used elsewhere, since `then` cannot carry both.
    Miz,
}

/// All per-linearization measures at once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct LinearizationMetrics {
    pub then_count: usize,
    pub path_count: usize,
    pub cross_ref_count: usize,
    pub sum_distance: usize,
    pub max_distance: usize,
    pub label_count_plain: usize,
    pub label_count_miz: usize,
}

/// Steps `u` whose immediate predecessor in `t` is a reference in-neighbour.
pub fn then_step_set(g: &ProofGraph, t: &TopoOrder) -> Result<BTreeSet<Vertex>> {
    t.check(g)?;
    Ok(then_steps_unchecked(g, t).collect())
}

fn then_steps_unchecked<'a>(
    g: &'a ProofGraph,
    t: &'a TopoOrder,
) -> impl Iterator<Item = Vertex> + 'a {
    t.sequence()
        .windows(2)
        .filter(|w| g.is_reference_arc(w[0], w[1]))
        .map(|w| w[1])
}

/// Maximal runs of consecutive then-steps, in order of first rank.
pub fn reasoning_partition(g: &ProofGraph, t: &TopoOrder) -> Result<PathPartition> {
    t.check(g)?;
    let mut blocks: Vec<Vec<Vertex>> = Vec::new();
    let seq = t.sequence();
    for (k, &v) in seq.iter().enumerate() {
        match blocks.last_mut() {
            Some(b) if k > 0 && g.is_reference_arc(seq[k - 1], v) => b.push(v),
            _ => blocks.push(vec![v]),
        }
    }
    PathPartition::new(g.vertex_count(), blocks)
}

/// Reference arcs whose endpoints lie in different blocks.
pub fn cross_reference_count(g: &ProofGraph, p: &PathPartition) -> Result<usize> {
    covers(g, p)?;
    Ok(g.reference_arcs()
        .filter(|&(a, b)| p.block_of(a) != p.block_of(b))
        .count())
}

/// Reference arcs with both endpoints in one block.
pub fn internal_reference_count(g: &ProofGraph, p: &PathPartition) -> Result<usize> {
    covers(g, p)?;
    Ok(g.reference_arcs()
        .filter(|&(a, b)| p.block_of(a) == p.block_of(b))
        .count())
}

fn covers(g: &ProofGraph, p: &PathPartition) -> Result<()> {
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

/// `(max, sum)` of `τ(head) - τ(tail)` over reference arcs; both 0 without any.
pub fn distance_metrics(g: &ProofGraph, t: &TopoOrder) -> Result<(usize, usize)> {
    t.check(g)?;
    let mut max = 0;
    let mut sum = 0;
    for (a, b) in g.reference_arcs() {
        let d = t.position(b) - t.position(a);
        max = max.max(d);
        sum += d;
    }
    Ok((max, sum))
}

/// Steps that must carry a label under `rule`.
pub fn label_set(g: &ProofGraph, t: &TopoOrder, rule: LabelRule) -> Result<BTreeSet<Vertex>> {
    t.check(g)?;
    Ok(g.vertices()
        .filter(|&v| {
            let refs = g.ref_successors(v);
            if refs.is_empty() {
                return false;
            }
            let far = refs.iter().any(|&u| t.position(u) - t.position(v) > 1);
            match rule {
                LabelRule::Plain => far,
                LabelRule::Miz => far || !g.plain_successors(v).is_empty(),
            }
        })
        .collect())
}

/// True when some reference arc `v -> u` is paralleled by a reference path of
/// length at least 2.
pub fn has_e1_shortcut(g: &ProofGraph) -> bool {
    let n = g.vertex_count();
    let mut seen = vec![0usize; n];
    let mut stamp = 0;
    for (v, u) in g.reference_arcs() {
        stamp += 1;
        let mut stack: Vec<Vertex> = g
            .ref_successors(v)
            .iter()
            .copied()
            .filter(|&w| w != u)
            .collect();
        while let Some(w) = stack.pop() {
            if seen[w - 1] == stamp {
                continue;
            }
            seen[w - 1] = stamp;
            for &x in g.ref_successors(w) {
                if x == u {
                    return true;
                }
                stack.push(x);
            }
        }
    }
    false
}

/// All measures for one order.
pub fn analyze(g: &ProofGraph, t: &TopoOrder) -> Result<LinearizationMetrics> {
    t.check(g)?;
    Ok(Evaluator::new(g).eval(t.sequence()))
}

/// Reusable scratch space for evaluating many orders of one graph without
/// validation or allocation.
pub struct Evaluator<'g> {
    g: &'g ProofGraph,
    refs: Vec<(usize, usize)>,
    has_plain_out: Vec<bool>,
    pos: Vec<usize>,
    block: Vec<usize>,
}

impl<'g> Evaluator<'g> {
    pub fn new(g: &'g ProofGraph) -> Self {
        let n = g.vertex_count();
        Evaluator {
            g,
            refs: g.reference_arcs().map(|(a, b)| (a - 1, b - 1)).collect(),
            has_plain_out: (1..=n).map(|v| !g.plain_successors(v).is_empty()).collect(),
            pos: vec![0; n],
            block: vec![0; n],
        }
    }

    pub fn graph(&self) -> &'g ProofGraph {
        self.g
    }

    /// Measures of `seq`, which must be a topological order of the graph.
    pub fn eval(&mut self, seq: &[Vertex]) -> LinearizationMetrics {
        let n = seq.len();
        debug_assert_eq!(n, self.g.vertex_count());
        let mut then_count = 0;
        let mut b = 0;
        for (k, &v) in seq.iter().enumerate() {
            self.pos[v - 1] = k;
            if k > 0 {
                let prev = seq[k - 1];
                if self.g.ref_successors(prev).binary_search(&v).is_ok() {
                    then_count += 1;
                } else {
                    b += 1;
                }
            }
            self.block[v - 1] = b;
        }
        let mut m = LinearizationMetrics {
            then_count,
            path_count: n - then_count,
            ..Default::default()
        };
        for &(a, h) in &self.refs {
            let d = self.pos[h] - self.pos[a];
            m.sum_distance += d;
            m.max_distance = m.max_distance.max(d);
            if self.block[a] != self.block[h] {
                m.cross_ref_count += 1;
            }
        }
        for v in 1..=n {
            let succ = self.g.ref_successors(v);
            if succ.is_empty() {
                continue;
            }
            let far = succ.iter().any(|&u| self.pos[u - 1] - self.pos[v - 1] > 1);
            if far {
                m.label_count_plain += 1;
                m.label_count_miz += 1;
            } else if self.has_plain_out[v - 1] {
                m.label_count_miz += 1;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn fig8_order() -> TopoOrder {
        TopoOrder::new(&fixtures::fig6(), fixtures::TAU_FIG8.to_vec()).unwrap()
    }

    #[test]
    fn fig8_then_steps() {
        let g = fixtures::fig6();
        assert_eq!(then_step_set(&g, &fig8_order()).unwrap().len(), 12);
    }

    #[test]
    fn fig8_partition_blocks() {
        let g = fixtures::fig6();
        let p = reasoning_partition(&g, &fig8_order()).unwrap();
        assert_eq!(
            p.blocks(),
            &[
                vec![1],
                vec![3, 5, 7, 9, 11, 13],
                vec![6],
                vec![2, 10, 15],
                vec![4, 8, 12, 14, 16, 17]
            ]
        );
        assert_eq!(cross_reference_count(&g, &p).unwrap(), 5);
    }

    #[test]
    fn fig8_distances_and_labels() {
        let g = fixtures::fig6();
        let t = fig8_order();
        assert_eq!(distance_metrics(&g, &t).unwrap(), (7, 38));
        let plain = label_set(&g, &t, LabelRule::Plain).unwrap();
        assert_eq!(plain, BTreeSet::from([2, 6, 13, 15]));
        assert_eq!(label_set(&g, &t, LabelRule::Miz).unwrap(), plain);
    }

    #[test]
    fn evaluator_agrees_with_direct_functions() {
        let g = fixtures::fig6();
        let t = fig8_order();
        let m = analyze(&g, &t).unwrap();
        assert_eq!(
            m,
            LinearizationMetrics {
                then_count: 12,
                path_count: 5,
                cross_ref_count: 5,
                sum_distance: 38,
                max_distance: 7,
                label_count_plain: 4,
                label_count_miz: 4,
            }
        );
    }

    #[test]
    fn fig2_then_steps() {
        let g = fixtures::fig2();
        let t = TopoOrder::new(&g, vec![1, 2, 5, 3, 4, 6]).unwrap();
        assert_eq!(then_step_set(&g, &t).unwrap().len(), 3);
        assert_eq!(reasoning_partition(&g, &t).unwrap().len(), 3);
        assert_eq!(
            cross_reference_count(&g, &PathPartition::singletons(6)).unwrap(),
            5
        );
    }

    #[test]
    fn trivial_cases() {
        let chain = ProofGraph::build(2, &[(1, 2)], &[]).unwrap();
        let id = TopoOrder::identity(2);
        assert_eq!(then_step_set(&chain, &id).unwrap(), BTreeSet::from([2]));
        assert_eq!(distance_metrics(&chain, &id).unwrap(), (1, 1));
        assert!(!has_e1_shortcut(&chain));
        let one = PathPartition::new(2, vec![vec![1, 2]]).unwrap();
        assert_eq!(cross_reference_count(&chain, &one).unwrap(), 0);

        let vars = ProofGraph::build(3, &[], &[(1, 2), (1, 3)]).unwrap();
        let id3 = TopoOrder::identity(3);
        assert!(label_set(&vars, &id3, LabelRule::Plain).unwrap().is_empty());
        assert!(label_set(&vars, &id3, LabelRule::Miz).unwrap().is_empty());
        assert_eq!(distance_metrics(&vars, &id3).unwrap(), (0, 0));

        let single = ProofGraph::build(1, &[], &[]).unwrap();
        assert_eq!(
            reasoning_partition(&single, &TopoOrder::identity(1))
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn miz_rule_adds_cited_variable_steps() {
        // 1 cites into 2 and introduces a variable used by 3
        let g = ProofGraph::build(3, &[(1, 2)], &[(1, 3)]).unwrap();
        let t = TopoOrder::identity(3);
        assert!(label_set(&g, &t, LabelRule::Plain).unwrap().is_empty());
        assert_eq!(
            label_set(&g, &t, LabelRule::Miz).unwrap(),
            BTreeSet::from([1])
        );
    }

    #[test]
    fn shortcuts() {
        assert!(has_e1_shortcut(&fixtures::fig6()));
        assert!(!has_e1_shortcut(&fixtures::fig2()));
    }

    #[test]
    fn wrong_order_is_rejected() {
        let g = fixtures::fig2();
        let t = TopoOrder::from_permutation(6, vec![2, 1, 3, 4, 5, 6]).unwrap();
        assert!(matches!(
            then_step_set(&g, &t),
            Err(Error::OrderNotTopological { .. })
        ));
    }
}
