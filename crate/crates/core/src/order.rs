//! Topological orders and linear-extension enumeration.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{ProofGraph, Vertex};
use crate::par;

/// Default bound on the number of linear extensions visited.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// A linear extension `τ`, stored both as the vertex sequence and as the rank map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TopoOrder {
    seq: Vec<Vertex>,
    // pos[v - 1] is the 1-based rank of v
    pos: Vec<usize>,
}

impl TopoOrder {
    /// Validates `seq` as a topological sorting of `g`.
    pub fn new(g: &ProofGraph, seq: Vec<Vertex>) -> Result<Self> {
        let t = Self::from_permutation(g.vertex_count(), seq)?;
        t.check(g)?;
        Ok(t)
    }

    /// Builds from a permutation of `1..=n` without checking any arcs.
    pub fn from_permutation(n: usize, seq: Vec<Vertex>) -> Result<Self> {
        if seq.len() != n {
            return Err(Error::OrderNotTopological {
                reason: format!("order has {} entries for {n} vertices", seq.len()),
            });
        }
        let mut pos = vec![0usize; n];
        for (i, &v) in seq.iter().enumerate() {
            if v == 0 || v > n {
                return Err(Error::OrderNotTopological {
                    reason: format!("vertex {v} is outside 1..={n}"),
                });
            }
            if pos[v - 1] != 0 {
                return Err(Error::OrderNotTopological {
                    reason: format!("vertex {v} appears twice"),
                });
            }
            pos[v - 1] = i + 1;
        }
        Ok(TopoOrder { seq, pos })
    }

    pub(crate) fn from_sequence_unchecked(seq: Vec<Vertex>) -> Self {
        let mut pos = vec![0usize; seq.len()];
        for (i, &v) in seq.iter().enumerate() {
            pos[v - 1] = i + 1;
        }
        TopoOrder { seq, pos }
    }

    /// The lexicographically smallest linear extension of `g`.
    pub fn smallest(g: &ProofGraph) -> Self {
        let n = g.vertex_count();
        let mut missing: Vec<usize> = (1..=n).map(|v| g.predecessors(v).len()).collect();
        let mut ready: BinaryHeap<Reverse<Vertex>> = (1..=n)
            .filter(|&v| missing[v - 1] == 0)
            .map(Reverse)
            .collect();
        let mut seq = Vec::with_capacity(n);
        while let Some(Reverse(v)) = ready.pop() {
            seq.push(v);
            for &w in g.successors(v) {
                missing[w - 1] -= 1;
                if missing[w - 1] == 0 {
                    ready.push(Reverse(w));
                }
            }
        }
        Self::from_sequence_unchecked(seq)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_sequence_unchecked((1..=n).collect())
    }

    /// Confirms that every arc of `g` goes forward in this order.
    pub fn check(&self, g: &ProofGraph) -> Result<()> {
        if self.seq.len() != g.vertex_count() {
            return Err(Error::OrderNotTopological {
                reason: format!(
                    "order has {} entries for {} vertices",
                    self.seq.len(),
                    g.vertex_count()
                ),
            });
        }
        for a in g.arcs() {
            if self.position(a.tail) >= self.position(a.head) {
                return Err(Error::OrderNotTopological {
                    reason: format!("arc {} -> {} goes backwards", a.tail, a.head),
                });
            }
        }
        Ok(())
    }

    pub fn is_valid_for(&self, g: &ProofGraph) -> bool {
        self.check(g).is_ok()
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn sequence(&self) -> &[Vertex] {
        &self.seq
    }

    pub fn into_sequence(self) -> Vec<Vertex> {
        self.seq
    }

    /// 1-based rank `τ(v)`.
    pub fn position(&self, v: Vertex) -> usize {
        self.pos[v - 1]
    }

    /// The vertex with rank `rank` (1-based).
    pub fn vertex_at(&self, rank: usize) -> Vertex {
        self.seq[rank - 1]
    }
}

impl Serialize for TopoOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.seq.serialize(s)
    }
}

/// Backtracking state shared by the sequential and parallel drivers.
struct Walker<'g> {
    g: &'g ProofGraph,
    indeg: Vec<usize>,
    placed: Vec<bool>,
    seq: Vec<Vertex>,
}

impl<'g> Walker<'g> {
    fn new(g: &'g ProofGraph) -> Self {
        let n = g.vertex_count();
        Walker {
            g,
            indeg: (1..=n).map(|v| g.predecessors(v).len()).collect(),
            placed: vec![false; n],
            seq: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, v: Vertex) {
        self.placed[v - 1] = true;
        self.seq.push(v);
        for &w in self.g.successors(v) {
            self.indeg[w - 1] -= 1;
        }
    }

    fn pop(&mut self) {
        let v = self.seq.pop().expect("non-empty prefix");
        self.placed[v - 1] = false;
        for &w in self.g.successors(v) {
            self.indeg[w - 1] += 1;
        }
    }

    fn available(&self) -> Vec<Vertex> {
        (1..=self.g.vertex_count())
            .filter(|&v| !self.placed[v - 1] && self.indeg[v - 1] == 0)
            .collect()
    }

    /// Visits every completion of the current prefix in lexicographic order.
    /// Returns `false` when `visit` asked to stop.
    fn run(&mut self, visit: &mut dyn FnMut(&[Vertex]) -> bool) -> bool {
        if self.seq.len() == self.g.vertex_count() {
            return visit(&self.seq);
        }
        for v in self.available() {
            self.push(v);
            let go_on = self.run(visit);
            self.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// Visits every linear extension of `g` in lexicographic order and returns
/// how many there were. Fails as soon as the count would exceed `cap`.
pub fn enumerate_topo_orders(
    g: &ProofGraph,
    cap: Option<u64>,
    mut visit: impl FnMut(&[Vertex]),
) -> Result<u64> {
    let cap = cap.unwrap_or(DEFAULT_CAP);
    let mut count = 0u64;
    let mut w = Walker::new(g);
    let finished = w.run(&mut |seq| {
        if count == cap {
            return false;
        }
        count += 1;
        visit(seq);
        true
    });
    if finished {
        Ok(count)
    } else {
        Err(Error::EnumerationCapExceeded { cap })
    }
}

/// Number of linear extensions of `g`.
pub fn count_topo_orders(g: &ProofGraph, cap: Option<u64>) -> Result<u64> {
    fold_topo_orders(g, cap, || 0u64, |c, _| *c += 1, |a, b| a + b)
}

/// Sequential fold over all linear extensions, in lexicographic order.
pub fn fold_topo_orders_seq<T>(
    g: &ProofGraph,
    cap: Option<u64>,
    init: impl Fn() -> T,
    step: impl Fn(&mut T, &[Vertex]),
) -> Result<T> {
    let mut acc = init();
    enumerate_topo_orders(g, cap, |seq| step(&mut acc, seq))?;
    Ok(acc)
}

/// Fold over all linear extensions. Subtrees below short prefixes are folded
/// independently (in parallel when the `parallel` feature is on) and merged
/// left to right in prefix order, so `merge` sees partial results in the same
/// lexicographic order as [`fold_topo_orders_seq`].
pub fn fold_topo_orders<T: Send>(
    g: &ProofGraph,
    cap: Option<u64>,
    init: impl Fn() -> T + Sync + Send,
    step: impl Fn(&mut T, &[Vertex]) + Sync + Send,
    merge: impl Fn(T, T) -> T,
) -> Result<T> {
    if !par::ENABLED || par::current_threads() <= 1 || g.vertex_count() < 8 {
        return fold_topo_orders_seq(g, cap, init, step);
    }
    let cap = cap.unwrap_or(DEFAULT_CAP);
    let prefixes = split_prefixes(g, 32 * par::current_threads());
    let total = AtomicU64::new(0);
    let aborted = AtomicBool::new(false);
    const BATCH: u64 = 1024;

    let parts = par::map_ordered(&prefixes, |prefix| {
        let mut acc = init();
        let mut w = Walker::new(g);
        for &v in prefix {
            w.push(v);
        }
        let mut local = 0u64;
        w.run(&mut |seq| {
            local += 1;
            if local == BATCH {
                let seen = total.fetch_add(local, Ordering::Relaxed) + local;
                local = 0;
                if seen > cap || aborted.load(Ordering::Relaxed) {
                    aborted.store(true, Ordering::Relaxed);
                    return false;
                }
            }
            step(&mut acc, seq);
            true
        });
        total.fetch_add(local, Ordering::Relaxed);
        acc
    });
    if aborted.load(Ordering::Relaxed) || total.load(Ordering::Relaxed) > cap {
        return Err(Error::EnumerationCapExceeded { cap });
    }
    let mut it = parts.into_iter();
    let first = it.next().unwrap_or_else(&init);
    Ok(it.fold(first, merge))
}

/// Expands prefixes level by level until there are at least `target` of
/// them or they are complete. The result is in lexicographic order.
fn split_prefixes(g: &ProofGraph, target: usize) -> Vec<Vec<Vertex>> {
    let n = g.vertex_count();
    let mut level: Vec<Vec<Vertex>> = vec![Vec::new()];
    let mut depth = 0;
    while level.len() < target && depth < n {
        let mut next = Vec::with_capacity(level.len() * 2);
        for prefix in &level {
            let mut w = Walker::new(g);
            for &v in prefix {
                w.push(v);
            }
            for v in w.available() {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        level = next;
        depth += 1;
    }
    level
}
