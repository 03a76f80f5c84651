use std::collections::BTreeMap;

use serde::Serialize;

use super::{bnb, Criterion, OptResult, SolveMode};
use crate::error::{Error, Result};
use crate::graph::{ProofGraph, Vertex};
use crate::metrics::{Evaluator, LinearizationMetrics};
use crate::order::{fold_topo_orders, TopoOrder};

/// Optimum of `c` over all linear extensions of `g`.
pub fn solve_exact(
    g: &ProofGraph,
    c: Criterion,
    mode: SolveMode,
    cap: Option<u64>,
) -> Result<OptResult> {
    match mode {
        SolveMode::Exhaustive => {
            let r = solve_lexicographic(g, &[c], cap)?;
            Ok(OptResult {
                best_value: r.values[0],
                witness: r.witness,
                optima_count: Some(r.optima_count),
                explored: r.explored,
            })
        }
        SolveMode::BranchAndBound => bnb::solve(g, c),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LexResult {
    /// Optimal value of each criterion, in priority order.
    pub values: Vec<usize>,
    pub witness: TopoOrder,
    pub optima_count: u64,
    pub explored: u64,
}

struct LexAcc<'g> {
    eval: Evaluator<'g>,
    best: Option<Vec<usize>>,
    witness: Vec<Vertex>,
    count: u64,
    explored: u64,
}

/// Minimizes `cs[0]`, then `cs[1]` among those optima, and so on.
pub fn solve_lexicographic(
    g: &ProofGraph,
    cs: &[Criterion],
    cap: Option<u64>,
) -> Result<LexResult> {
    if cs.is_empty() {
        return Err(Error::NoCriteria);
    }
    let acc = fold_topo_orders(
        g,
        cap,
        || LexAcc {
            eval: Evaluator::new(g),
            best: None,
            witness: Vec::new(),
            count: 0,
            explored: 0,
        },
        |acc, seq| {
            acc.explored += 1;
            let m = acc.eval.eval(seq);
            let key: Vec<usize> = cs.iter().map(|c| c.value(&m)).collect();
            match &acc.best {
                Some(b) if key > *b => {}
                Some(b) if key == *b => acc.count += 1,
                _ => {
                    acc.best = Some(key);
                    acc.witness = seq.to_vec();
                    acc.count = 1;
                }
            }
        },
        |left, right| {
            let explored = left.explored + right.explored;
            let mut out = match (&left.best, &right.best) {
                (_, None) => left,
                (None, Some(_)) => right,
                (Some(a), Some(b)) if b < a => right,
                (Some(a), Some(b)) if a == b => {
                    let count = left.count + right.count;
                    LexAcc { count, ..left }
                }
                _ => left,
            };
            out.explored = explored;
            out
        },
    )?;
    let values = acc.best.expect("every DAG has a linear extension");
    Ok(LexResult {
        values,
        witness: TopoOrder::from_sequence_unchecked(acc.witness),
        optima_count: acc.count,
        explored: acc.explored,
    })
}

/// The optimum of `c` and every order attaining it, in lexicographic order.
pub fn enumerate_optima(
    g: &ProofGraph,
    c: Criterion,
    cap: Option<u64>,
) -> Result<(usize, Vec<TopoOrder>)> {
    struct Acc<'g> {
        eval: Evaluator<'g>,
        best: usize,
        orders: Vec<Vec<Vertex>>,
    }
    let acc = fold_topo_orders(
        g,
        cap,
        || Acc {
            eval: Evaluator::new(g),
            best: usize::MAX,
            orders: Vec::new(),
        },
        |acc, seq| {
            let v = c.value(&acc.eval.eval(seq));
            if v < acc.best {
                acc.best = v;
                acc.orders.clear();
            }
            if v == acc.best {
                acc.orders.push(seq.to_vec());
            }
        },
        |mut left, right| {
            if right.best < left.best {
                return right;
            }
            if right.best == left.best {
                left.orders.extend(right.orders);
            }
            left
        },
    )?;
    Ok((
        acc.best,
        acc.orders
            .into_iter()
            .map(TopoOrder::from_sequence_unchecked)
            .collect(),
    ))
}

/// Whether some linearization has `c` at most `bound`.
pub fn decide(g: &ProofGraph, c: Criterion, bound: usize) -> Result<bool> {
    Ok(solve_exact(g, c, SolveMode::BranchAndBound, None)?.best_value <= bound)
}

/// How often each value of each measure occurs over all linear extensions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Distribution {
    pub orders: u64,
    pub then_count: BTreeMap<usize, u64>,
    pub path_count: BTreeMap<usize, u64>,
    pub cross_ref_count: BTreeMap<usize, u64>,
    pub sum_distance: BTreeMap<usize, u64>,
    pub max_distance: BTreeMap<usize, u64>,
    pub label_count_plain: BTreeMap<usize, u64>,
    pub label_count_miz: BTreeMap<usize, u64>,
}

impl Distribution {
    fn add(&mut self, m: &LinearizationMetrics) {
        self.orders += 1;
        *self.then_count.entry(m.then_count).or_default() += 1;
        *self.path_count.entry(m.path_count).or_default() += 1;
        *self.cross_ref_count.entry(m.cross_ref_count).or_default() += 1;
        *self.sum_distance.entry(m.sum_distance).or_default() += 1;
        *self.max_distance.entry(m.max_distance).or_default() += 1;
        *self
            .label_count_plain
            .entry(m.label_count_plain)
            .or_default() += 1;
        *self.label_count_miz.entry(m.label_count_miz).or_default() += 1;
    }

    fn merge(mut self, other: Distribution) -> Distribution {
        self.orders += other.orders;
        for (mine, theirs) in [
            (&mut self.then_count, other.then_count),
            (&mut self.path_count, other.path_count),
            (&mut self.cross_ref_count, other.cross_ref_count),
            (&mut self.sum_distance, other.sum_distance),
            (&mut self.max_distance, other.max_distance),
            (&mut self.label_count_plain, other.label_count_plain),
            (&mut self.label_count_miz, other.label_count_miz),
        ] {
            for (k, v) in theirs {
                *mine.entry(k).or_default() += v;
            }
        }
        self
    }
}

/// Streams every linear extension once; memory does not grow with their number.
pub fn metric_distribution(g: &ProofGraph, cap: Option<u64>) -> Result<Distribution> {
    let (_, d) = fold_topo_orders(
        g,
        cap,
        || (Evaluator::new(g), Distribution::default()),
        |(eval, d), seq| d.add(&eval.eval(seq)),
        |(e, a), (_, b)| (e, a.merge(b)),
    )?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fig2_then_paths() {
        let r = solve_exact(
            &fixtures::fig2(),
            Criterion::ThenPaths,
            SolveMode::Exhaustive,
            None,
        )
        .unwrap();
        assert_eq!(r.best_value, 3);
        assert_eq!(r.optima_count, Some(2));
        assert_eq!(r.explored, 6);
    }

    #[test]
    fn empty_graph_neutral_values() {
        let g = ProofGraph::build(0, &[], &[]).unwrap();
        for c in Criterion::ALL {
            for mode in [SolveMode::Exhaustive, SolveMode::BranchAndBound] {
                assert_eq!(solve_exact(&g, c, mode, None).unwrap().best_value, 0);
            }
            assert!(decide(&g, c, 0).unwrap());
        }
    }

    #[test]
    fn lexicographic_needs_criteria() {
        assert_eq!(
            solve_lexicographic(&fixtures::fig2(), &[], None).unwrap_err(),
            Error::NoCriteria
        );
    }

    #[test]
    fn optima_list_matches_count() {
        let g = fixtures::fig2();
        let (best, orders) = enumerate_optima(&g, Criterion::ThenPaths, None).unwrap();
        assert_eq!(best, 3);
        assert_eq!(orders.len(), 2);
        let r = solve_exact(&g, Criterion::ThenPaths, SolveMode::Exhaustive, None).unwrap();
        assert_eq!(orders[0], r.witness);
    }

    #[test]
    fn distribution_totals() {
        let d = metric_distribution(&fixtures::fig2(), None).unwrap();
        assert_eq!(d.orders, 6);
        assert_eq!(d.then_count.values().sum::<u64>(), 6);
    }
}
