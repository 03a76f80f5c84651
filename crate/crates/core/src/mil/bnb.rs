//! Exact search that avoids visiting every linear extension.
//!
//! For path count, label counts and total distance the cost of placing a
//! vertex depends only on the set already placed and on the previous vertex
//! (total distance is a sum of cut sizes over prefixes), so the optimum of
//! each suffix is memoized on that pair. Cross references and the maximum
//! distance lack this property and use depth-first branch and bound.

use std::collections::HashMap;

use super::{Criterion, OptResult};
use crate::error::{Error, Result};
use crate::graph::ProofGraph;
use crate::order::TopoOrder;

const MAX_VERTICES: usize = 128;
const MEMO_LIMIT: usize = 40_000_000;
const NO_LAST: u8 = u8::MAX;

pub(super) fn solve(g: &ProofGraph, c: Criterion) -> Result<OptResult> {
    let n = g.vertex_count();
    if n > MAX_VERTICES {
        return Err(Error::ScaleCapExceeded {
            what: format!("{n} vertices; branch and bound handles at most {MAX_VERTICES}"),
        });
    }
    let ctx = Ctx::new(g);
    match c {
        Criterion::ThenPaths
        | Criterion::SumDistance
        | Criterion::LabelsPlain
        | Criterion::LabelsMiz => Memo::new(ctx, c).run(),
        Criterion::CrossRefs | Criterion::MaxDistance => Dfs::new(ctx, c).run(),
    }
}

/// Bitmask view of the graph, 0-based.
struct Ctx {
    n: usize,
    full: u128,
    preds: Vec<u128>,
    ref_succ: Vec<u128>,
    plain_out: Vec<bool>,
    refs: Vec<(usize, usize)>,
}

impl Ctx {
    fn new(g: &ProofGraph) -> Self {
        let n = g.vertex_count();
        let mask = |vs: &[usize]| vs.iter().fold(0u128, |m, &v| m | 1u128 << (v - 1));
        Ctx {
            n,
            full: if n == 128 {
                u128::MAX
            } else {
                (1u128 << n) - 1
            },
            preds: (1..=n).map(|v| mask(g.predecessors(v))).collect(),
            ref_succ: (1..=n).map(|v| mask(g.ref_successors(v))).collect(),
            plain_out: (1..=n).map(|v| !g.plain_successors(v).is_empty()).collect(),
            refs: g.reference_arcs().map(|(a, b)| (a - 1, b - 1)).collect(),
        }
    }

    fn available(&self, placed: u128) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| placed >> v & 1 == 0 && self.preds[v] & !placed == 0)
    }
}

struct Memo {
    ctx: Ctx,
    c: Criterion,
    table: HashMap<(u128, u8), u32>,
}

impl Memo {
    fn new(ctx: Ctx, c: Criterion) -> Self {
        Memo {
            ctx,
            c,
            table: HashMap::new(),
        }
    }

    /// Cost charged when `v` follows `last` on top of `placed`.
    fn step_cost(&self, placed: u128, last: u8, v: usize) -> u32 {
        let ctx = &self.ctx;
        match self.c {
            Criterion::ThenPaths => {
                let then = last != NO_LAST && ctx.ref_succ[last as usize] >> v & 1 == 1;
                u32::from(!then)
            }
            Criterion::SumDistance => {
                let after = placed | 1u128 << v;
                let mut cut = 0;
                let mut rest = after;
                while rest != 0 {
                    let t = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    cut += (ctx.ref_succ[t] & !after).count_ones();
                }
                cut
            }
            Criterion::LabelsPlain | Criterion::LabelsMiz => {
                if last == NO_LAST {
                    return 0;
                }
                let l = last as usize;
                let succ = ctx.ref_succ[l];
                if succ == 0 {
                    return 0;
                }
                let far = succ & !(1u128 << v) != 0;
                let labelled = far || (self.c == Criterion::LabelsMiz && ctx.plain_out[l]);
                u32::from(labelled)
            }
            Criterion::CrossRefs | Criterion::MaxDistance => unreachable!(),
        }
    }

    fn key(&self, placed: u128, last: u8) -> (u128, u8) {
        if self.c == Criterion::SumDistance {
            (placed, NO_LAST)
        } else {
            (placed, last)
        }
    }

    fn best(&mut self, placed: u128, last: u8) -> Result<u32> {
        if placed == self.ctx.full {
            return Ok(0);
        }
        let key = self.key(placed, last);
        if let Some(&v) = self.table.get(&key) {
            return Ok(v);
        }
        let mut best = u32::MAX;
        let avail: Vec<usize> = self.ctx.available(placed).collect();
        for v in avail {
            let cost = self.step_cost(placed, last, v) + self.best(placed | 1u128 << v, v as u8)?;
            best = best.min(cost);
        }
        if self.table.len() >= MEMO_LIMIT {
            return Err(Error::ScaleCapExceeded {
                what: format!("more than {MEMO_LIMIT} search states"),
            });
        }
        self.table.insert(key, best);
        Ok(best)
    }

    fn run(mut self) -> Result<OptResult> {
        let total = self.best(0, NO_LAST)?;
        // walk down choosing the smallest vertex that keeps the optimum
        let mut seq = Vec::with_capacity(self.ctx.n);
        let (mut placed, mut last, mut remaining) = (0u128, NO_LAST, total);
        while placed != self.ctx.full {
            let avail: Vec<usize> = self.ctx.available(placed).collect();
            let mut chosen = None;
            for v in avail {
                let cost = self.step_cost(placed, last, v);
                if cost <= remaining && cost + self.best(placed | 1u128 << v, v as u8)? == remaining
                {
                    chosen = Some((v, cost));
                    break;
                }
            }
            let (v, cost) = chosen.ok_or_else(|| {
                Error::InternalInvariantViolation("memoized optimum has no realizing move".into())
            })?;
            seq.push(v + 1);
            placed |= 1u128 << v;
            last = v as u8;
            remaining -= cost;
        }
        Ok(OptResult {
            best_value: total as usize,
            witness: TopoOrder::from_sequence_unchecked(seq),
            optima_count: None,
            explored: self.table.len() as u64,
        })
    }
}

struct Dfs {
    ctx: Ctx,
    c: Criterion,
    // 1-based rank of each placed vertex, 0 when unplaced
    pos: Vec<usize>,
    block: Vec<usize>,
    seq: Vec<usize>,
    best: Option<usize>,
    best_seq: Vec<usize>,
    nodes: u64,
}

impl Dfs {
    fn new(ctx: Ctx, c: Criterion) -> Self {
        let n = ctx.n;
        Dfs {
            ctx,
            c,
            pos: vec![0; n],
            block: vec![0; n],
            seq: Vec::with_capacity(n),
            best: None,
            best_seq: Vec::new(),
            nodes: 0,
        }
    }

    /// Exact at a leaf, a lower bound on every completion elsewhere.
    fn bound(&self) -> usize {
        let k = self.seq.len();
        let current_block = self.seq.last().map(|&v| self.block[v]);
        let mut value = 0;
        for &(t, h) in &self.ctx.refs {
            if self.pos[t] == 0 {
                continue;
            }
            match self.c {
                Criterion::MaxDistance => {
                    let d = if self.pos[h] != 0 {
                        self.pos[h] - self.pos[t]
                    } else {
                        k + 1 - self.pos[t]
                    };
                    value = value.max(d);
                }
                _ => {
                    let crosses = if self.pos[h] != 0 {
                        self.block[t] != self.block[h]
                    } else {
                        Some(self.block[t]) != current_block
                    };
                    value += usize::from(crosses);
                }
            }
        }
        value
    }

    fn search(&mut self, placed: u128) {
        self.nodes += 1;
        let lb = self.bound();
        if self.best.is_some_and(|b| lb >= b) {
            return;
        }
        if placed == self.ctx.full {
            self.best = Some(lb);
            self.best_seq = self.seq.clone();
            return;
        }
        let avail: Vec<usize> = self.ctx.available(placed).collect();
        for v in avail {
            let b = match self.seq.last() {
                Some(&l) if self.ctx.ref_succ[l] >> v & 1 == 1 => self.block[l],
                Some(&l) => self.block[l] + 1,
                None => 0,
            };
            self.seq.push(v);
            self.pos[v] = self.seq.len();
            self.block[v] = b;
            self.search(placed | 1u128 << v);
            self.seq.pop();
            self.pos[v] = 0;
        }
    }

    fn run(mut self) -> Result<OptResult> {
        self.search(0);
        let best = self.best.expect("every DAG has a linear extension");
        Ok(OptResult {
            best_value: best,
            witness: TopoOrder::from_sequence_unchecked(
                self.best_seq.iter().map(|v| v + 1).collect(),
            ),
            optima_count: None,
            explored: self.nodes,
        })
    }
}
