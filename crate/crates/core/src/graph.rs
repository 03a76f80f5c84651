//! Abstract proof graphs and plain digraphs.
//!
//! Vertices are dense 1-based integers `1..=n`. A [`ProofGraph`] is a DAG
//! whose arcs each carry a reference flag, a variable flag, or both; the
//! reference arcs form the distinguished subset `E1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Vertex identifier, `1..=n`.
pub type Vertex = usize;

/// One arc of a proof graph. An ordered pair appears at most once; the two
/// flags record whether it is a premise citation, a variable dependency, or both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProofArc {
    pub tail: Vertex,
    pub head: Vertex,
    pub is_reference: bool,
    pub is_variable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofGraph {
    n: usize,
    arcs: Vec<ProofArc>,
    // adjacency, indexed by vertex - 1
    out_all: Vec<Vec<Vertex>>,
    in_all: Vec<Vec<Vertex>>,
    out_ref: Vec<Vec<Vertex>>,
    in_ref: Vec<Vec<Vertex>>,
    out_plain: Vec<Vec<Vertex>>,
    in_plain: Vec<Vec<Vertex>>,
}

impl ProofGraph {
    /// Validates and builds a proof graph. A pair listed in both inputs
    /// becomes a single arc carrying both flags.
    pub fn build(
        n: usize,
        ref_arcs: &[(Vertex, Vertex)],
        var_arcs: &[(Vertex, Vertex)],
    ) -> Result<Self> {
        let mut merged: BTreeMap<(Vertex, Vertex), (bool, bool)> = BTreeMap::new();
        for &(t, h) in ref_arcs {
            check_endpoints(n, t, h)?;
            merged.entry((t, h)).or_default().0 = true;
        }
        for &(t, h) in var_arcs {
            check_endpoints(n, t, h)?;
            merged.entry((t, h)).or_default().1 = true;
        }
        let arcs = merged
            .into_iter()
            .map(|((tail, head), (r, v))| ProofArc {
                tail,
                head,
                is_reference: r,
                is_variable: v,
            })
            .collect();
        Self::from_arcs(n, arcs)
    }

    /// Builds from explicit arcs; flags of duplicate pairs are merged. An arc
    /// with neither flag set counts as a variable arc.
    pub fn from_arc_list(n: usize, arcs: &[ProofArc]) -> Result<Self> {
        let refs: Vec<_> = arcs
            .iter()
            .filter(|a| a.is_reference)
            .map(|a| (a.tail, a.head))
            .collect();
        let vars: Vec<_> = arcs
            .iter()
            .filter(|a| a.is_variable || !a.is_reference)
            .map(|a| (a.tail, a.head))
            .collect();
        Self::build(n, &refs, &vars)
    }

    fn from_arcs(n: usize, arcs: Vec<ProofArc>) -> Result<Self> {
        let mut g = ProofGraph {
            n,
            arcs,
            out_all: vec![Vec::new(); n],
            in_all: vec![Vec::new(); n],
            out_ref: vec![Vec::new(); n],
            in_ref: vec![Vec::new(); n],
            out_plain: vec![Vec::new(); n],
            in_plain: vec![Vec::new(); n],
        };
        for a in &g.arcs {
            g.out_all[a.tail - 1].push(a.head);
            g.in_all[a.head - 1].push(a.tail);
            if a.is_reference {
                g.out_ref[a.tail - 1].push(a.head);
                g.in_ref[a.head - 1].push(a.tail);
            } else {
                g.out_plain[a.tail - 1].push(a.head);
                g.in_plain[a.head - 1].push(a.tail);
            }
        }
        for list in [
            &mut g.out_all,
            &mut g.in_all,
            &mut g.out_ref,
            &mut g.in_ref,
            &mut g.out_plain,
            &mut g.in_plain,
        ] {
            for l in list.iter_mut() {
                l.sort_unstable();
            }
        }
        if let Some(cycle) = find_cycle(n, &g.out_all) {
            return Err(Error::CycleDetected { cycle });
        }
        Ok(g)
    }

    /// The same vertex set with every arc treated as a reference arc (`E1 := E`).
    pub fn all_reference(&self) -> ProofGraph {
        let arcs = self
            .arcs
            .iter()
            .map(|a| ProofArc {
                is_reference: true,
                ..*a
            })
            .collect();
        // acyclicity is unchanged
        Self::from_arcs(self.n, arcs).expect("same arc set")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + Clone {
        1..=self.n
    }

    /// All arcs sorted by `(tail, head)`.
    pub fn arcs(&self) -> &[ProofArc] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn reference_arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.arcs
            .iter()
            .filter(|a| a.is_reference)
            .map(|a| (a.tail, a.head))
    }

    pub fn reference_arc_count(&self) -> usize {
        self.arcs.iter().filter(|a| a.is_reference).count()
    }

    /// Arcs of `E \ E1`.
    pub fn non_reference_arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.arcs
            .iter()
            .filter(|a| !a.is_reference)
            .map(|a| (a.tail, a.head))
    }

    pub fn successors(&self, v: Vertex) -> &[Vertex] {
        &self.out_all[v - 1]
    }

    pub fn predecessors(&self, v: Vertex) -> &[Vertex] {
        &self.in_all[v - 1]
    }

    pub fn ref_successors(&self, v: Vertex) -> &[Vertex] {
        &self.out_ref[v - 1]
    }

    pub fn ref_predecessors(&self, v: Vertex) -> &[Vertex] {
        &self.in_ref[v - 1]
    }

    /// Successors along arcs of `E \ E1`.
    pub fn plain_successors(&self, v: Vertex) -> &[Vertex] {
        &self.out_plain[v - 1]
    }

    /// Predecessors along arcs of `E \ E1`.
    pub fn plain_predecessors(&self, v: Vertex) -> &[Vertex] {
        &self.in_plain[v - 1]
    }

    pub fn arc(&self, tail: Vertex, head: Vertex) -> Option<&ProofArc> {
        self.arcs
            .binary_search_by(|a| (a.tail, a.head).cmp(&(tail, head)))
            .ok()
            .map(|i| &self.arcs[i])
    }

    pub fn has_arc(&self, tail: Vertex, head: Vertex) -> bool {
        self.arc(tail, head).is_some()
    }

    pub fn is_reference_arc(&self, tail: Vertex, head: Vertex) -> bool {
        self.arc(tail, head).is_some_and(|a| a.is_reference)
    }

    /// Reference arcs as a set, convenient for structural comparison.
    pub fn reference_set(&self) -> BTreeSet<(Vertex, Vertex)> {
        self.reference_arcs().collect()
    }

    pub fn non_reference_set(&self) -> BTreeSet<(Vertex, Vertex)> {
        self.non_reference_arcs().collect()
    }

    /// True when `other` has the same `E1` and `E \ E1` after renaming each
    /// vertex `v` of `self` to `rename(v)`.
    pub fn is_isomorphic_via(&self, other: &ProofGraph, rename: impl Fn(Vertex) -> Vertex) -> bool {
        if self.n != other.n {
            return false;
        }
        let map = |set: BTreeSet<(Vertex, Vertex)>| -> BTreeSet<(Vertex, Vertex)> {
            set.into_iter()
                .map(|(t, h)| (rename(t), rename(h)))
                .collect()
        };
        map(self.reference_set()) == other.reference_set()
            && map(self.non_reference_set()) == other.non_reference_set()
    }
}

fn check_endpoints(n: usize, t: Vertex, h: Vertex) -> Result<()> {
    for v in [t, h] {
        if v == 0 || v > n {
            return Err(Error::OutOfRangeVertex { vertex: v, n });
        }
    }
    if t == h {
        return Err(Error::SelfLoop { vertex: t });
    }
    Ok(())
}

/// Iterative DFS; returns a witness cycle `v1 -> ... -> vk -> v1` (first vertex repeated at the end).
pub(crate) fn find_cycle(n: usize, out: &[Vec<Vertex>]) -> Option<Vec<Vertex>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black,
    }
    let mut mark = vec![Mark::White; n];
    let mut parent = vec![0usize; n];
    for root in 1..=n {
        if mark[root - 1] != Mark::White {
            continue;
        }
        let mut stack: Vec<(Vertex, usize)> = vec![(root, 0)];
        mark[root - 1] = Mark::Grey;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&w) = out[v - 1].get(*next) {
                *next += 1;
                match mark[w - 1] {
                    Mark::White => {
                        mark[w - 1] = Mark::Grey;
                        parent[w - 1] = v;
                        stack.push((w, 0));
                    }
                    Mark::Grey => {
                        let mut cycle = vec![v];
                        let mut x = v;
                        while x != w {
                            x = parent[x - 1];
                            cycle.push(x);
                        }
                        cycle.reverse();
                        cycle.push(w);
                        return Some(cycle);
                    }
                    Mark::Black => {}
                }
            } else {
                mark[v - 1] = Mark::Black;
                stack.pop();
            }
        }
    }
    None
}

/// A directed graph on `1..=n` that may contain cycles (and, unless an
/// operation says otherwise, self-loops).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Digraph {
    n: usize,
    arcs: BTreeSet<(Vertex, Vertex)>,
}

impl Digraph {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let arcs: BTreeSet<_> = arcs.into_iter().collect();
        for &(t, h) in &arcs {
            for v in [t, h] {
                if v == 0 || v > n {
                    return Err(Error::OutOfRangeVertex { vertex: v, n });
                }
            }
        }
        Ok(Digraph { n, arcs })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &BTreeSet<(Vertex, Vertex)> {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn has_arc(&self, t: Vertex, h: Vertex) -> bool {
        self.arcs.contains(&(t, h))
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.arcs.range((v, 0)..(v + 1, 0)).count()
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.arcs.iter().filter(|&&(_, h)| h == v).count()
    }

    pub fn successors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.arcs.range((v, 0)..(v + 1, 0)).map(|&(_, h)| h)
    }

    pub fn predecessors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.arcs
            .iter()
            .filter(move |&&(_, h)| h == v)
            .map(|&(t, _)| t)
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<Vertex>> {
        let mut out = vec![Vec::new(); self.n];
        for &(t, h) in &self.arcs {
            out[t - 1].push(h);
        }
        out
    }

    pub fn find_cycle(&self) -> Option<Vec<Vertex>> {
        if let Some(&(v, _)) = self.arcs.iter().find(|(t, h)| t == h) {
            return Some(vec![v, v]);
        }
        find_cycle(self.n, &self.adjacency())
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }

    /// Removes the given arcs (arcs not present are ignored).
    pub fn without_arcs<'a>(
        &self,
        removed: impl IntoIterator<Item = &'a (Vertex, Vertex)>,
    ) -> Digraph {
        let mut arcs = self.arcs.clone();
        for a in removed {
            arcs.remove(a);
        }
        Digraph { n: self.n, arcs }
    }

    /// Topological order with ties broken by `key` (smallest first); `None` if cyclic.
    pub fn topological_order_by_key<K: Ord>(
        &self,
        key: impl Fn(Vertex) -> K,
    ) -> Option<Vec<Vertex>> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        let adj = self.adjacency();
        let mut indeg = vec![0usize; self.n];
        for &(_, h) in &self.arcs {
            indeg[h - 1] += 1;
        }
        let mut heap: BinaryHeap<Reverse<(K, Vertex)>> = (1..=self.n)
            .filter(|&v| indeg[v - 1] == 0)
            .map(|v| Reverse((key(v), v)))
            .collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(Reverse((_, v))) = heap.pop() {
            order.push(v);
            for &w in &adj[v - 1] {
                indeg[w - 1] -= 1;
                if indeg[w - 1] == 0 {
                    heap.push(Reverse((key(w), w)));
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "digraph on {} vertices, {} arcs",
            self.n,
            self.arcs.len()
        )
    }
}
