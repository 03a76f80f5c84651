//! Grid gadgets and the DAG `D(G, e)` built from a digraph.
//!
//! Each source vertex `v` becomes an `(m+1) x (m+1)` grid whose rows (the
//! `↙` paths, family `L_v`) and columns (the `↘` paths, family `R_v`) are the
//! only two minimum path partitions. Each source arc `<v,u>` numbered `k`
//! becomes a glue vertex pointing at the start of row `k` of `v` and at the
//! start of column `k` of `u`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::ReductionArtifact;
use crate::error::{Error, Result};
use crate::graph::{Digraph, ProofGraph, Vertex};
use crate::partition::{check_h_partition, quotient, PathPartition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Role {
    Cell {
        v: Vertex,
        i: usize,
        j: usize,
    },
    Glue {
        tail: Vertex,
        head: Vertex,
        number: usize,
    },
}

/// Maps vertex ids of `D(G, e)` to gadget cells and glue vertices.
///
/// Cells come first, row-major per source vertex; glue vertex `k` is
/// `n (m+1)^2 + k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GadgetCoords {
    n: usize,
    m: usize,
    /// `numbered[k - 1]` is the source arc numbered `k`.
    numbered: Vec<(Vertex, Vertex)>,
    #[serde(skip)]
    number: BTreeMap<(Vertex, Vertex), usize>,
}

impl GadgetCoords {
    fn new(n: usize, m: usize, numbered: Vec<(Vertex, Vertex)>) -> Self {
        let number = numbered
            .iter()
            .enumerate()
            .map(|(k, &a)| (a, k + 1))
            .collect();
        GadgetCoords {
            n,
            m,
            numbered,
            number,
        }
    }

    pub fn source_vertex_count(&self) -> usize {
        self.n
    }

    /// Grid parameter; equals the source arc count for `fas_to_ahp` output.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Size of a minimum partition of every gadget together: `n (m+1)`.
    pub fn offset(&self) -> usize {
        self.n * (self.m + 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.n * (self.m + 1) * (self.m + 1) + self.numbered.len()
    }

    /// Source arcs in numbering order.
    pub fn numbered_arcs(&self) -> &[(Vertex, Vertex)] {
        &self.numbered
    }

    pub fn number_of(&self, tail: Vertex, head: Vertex) -> Option<usize> {
        self.number.get(&(tail, head)).copied()
    }

    pub fn source(&self) -> Digraph {
        Digraph::new(self.n, self.numbered.iter().copied()).expect("source arcs are in range")
    }

    pub fn cell(&self, v: Vertex, i: usize, j: usize) -> Vertex {
        let side = self.m + 1;
        (v - 1) * side * side + i * side + j + 1
    }

    pub fn glue(&self, k: usize) -> Vertex {
        self.n * (self.m + 1) * (self.m + 1) + k
    }

    pub fn glue_of(&self, tail: Vertex, head: Vertex) -> Option<Vertex> {
        self.number_of(tail, head).map(|k| self.glue(k))
    }

    pub fn role(&self, x: Vertex) -> Option<Role> {
        let side = self.m + 1;
        let cells = self.n * side * side;
        if x == 0 || x > self.vertex_count() {
            return None;
        }
        if x <= cells {
            let r = x - 1;
            let v = r / (side * side) + 1;
            let c = r % (side * side);
            Some(Role::Cell {
                v,
                i: c / side,
                j: c % side,
            })
        } else {
            let number = x - cells;
            let (tail, head) = self.numbered[number - 1];
            Some(Role::Glue { tail, head, number })
        }
    }

    fn gadget_of(&self, x: Vertex) -> Option<Vertex> {
        match self.role(x) {
            Some(Role::Cell { v, .. }) => Some(v),
            _ => None,
        }
    }

    /// Row `i` of gadget `v`, the `↙` path.
    pub fn row(&self, v: Vertex, i: usize) -> Vec<Vertex> {
        (0..=self.m).map(|j| self.cell(v, i, j)).collect()
    }

    /// Column `j` of gadget `v`, the `↘` path.
    pub fn column(&self, v: Vertex, j: usize) -> Vec<Vertex> {
        (0..=self.m).map(|i| self.cell(v, i, j)).collect()
    }

    /// The family `L_v`.
    pub fn rows(&self, v: Vertex) -> Vec<Vec<Vertex>> {
        (0..=self.m).map(|i| self.row(v, i)).collect()
    }

    /// The family `R_v`.
    pub fn columns(&self, v: Vertex) -> Vec<Vec<Vertex>> {
        (0..=self.m).map(|j| self.column(v, j)).collect()
    }

    /// Whether `a -> b` is a `↙` arc (inside a row).
    pub fn is_row_arc(&self, a: Vertex, b: Vertex) -> bool {
        matches!(
            (self.role(a), self.role(b)),
            (Some(Role::Cell { v, i, j }), Some(Role::Cell { v: w, i: k, j: l }))
                if v == w && i == k && j + 1 == l
        )
    }

    /// Whether `a -> b` is a `↘` arc (inside a column).
    pub fn is_column_arc(&self, a: Vertex, b: Vertex) -> bool {
        matches!(
            (self.role(a), self.role(b)),
            (Some(Role::Cell { v, i, j }), Some(Role::Cell { v: w, i: k, j: l }))
                if v == w && j == l && i + 1 == k
        )
    }
}

fn grid_arcs(c: &GadgetCoords, v: Vertex, arcs: &mut Vec<(Vertex, Vertex)>) {
    let m = c.m;
    for i in 0..=m {
        for j in 0..=m {
            if j < m {
                arcs.push((c.cell(v, i, j), c.cell(v, i, j + 1)));
            }
            if i < m {
                arcs.push((c.cell(v, i, j), c.cell(v, i + 1, j)));
            }
        }
    }
}

/// The bare gadget `N_r` with grid parameter `m`, as a single-gadget layout
/// without glue vertices. Every arc is a reference arc.
pub fn build_gadget(m: usize) -> (ProofGraph, GadgetCoords) {
    let coords = GadgetCoords::new(1, m, Vec::new());
    let mut arcs = Vec::new();
    grid_arcs(&coords, 1, &mut arcs);
    let g = ProofGraph::build(coords.vertex_count(), &arcs, &[]).expect("grid arcs are valid");
    (g, coords)
}

/// Builds `D(G, e)`. `numbering` lists the source arcs in the order of `e`;
/// without it arcs are numbered in lexicographic order from 1.
pub fn fas_to_ahp(
    dg: &Digraph,
    numbering: Option<&[(Vertex, Vertex)]>,
) -> Result<ReductionArtifact<ProofGraph, GadgetCoords>> {
    for &(a, b) in dg.arcs() {
        if a == b {
            return Err(Error::SelfLoopInInput { vertex: a });
        }
    }
    for v in 1..=dg.vertex_count() {
        let (din, dout) = (dg.in_degree(v), dg.out_degree(v));
        if din > 1 && dout > 1 {
            return Err(Error::DegreePreconditionViolated {
                vertex: v,
                in_degree: din,
                out_degree: dout,
            });
        }
    }
    let numbered: Vec<(Vertex, Vertex)> = match numbering {
        None => dg.arcs().iter().copied().collect(),
        Some(list) => {
            let given: BTreeSet<_> = list.iter().copied().collect();
            if given.len() != list.len() {
                return Err(Error::InvalidNumbering("an arc is numbered twice".into()));
            }
            if &given != dg.arcs() {
                let stray = given
                    .symmetric_difference(dg.arcs())
                    .next()
                    .expect("sets differ");
                return Err(Error::InvalidNumbering(format!(
                    "arc {} -> {} is not matched",
                    stray.0, stray.1
                )));
            }
            list.to_vec()
        }
    };
    let coords = GadgetCoords::new(dg.vertex_count(), numbered.len(), numbered);
    let mut arcs = Vec::new();
    for v in 1..=coords.n {
        grid_arcs(&coords, v, &mut arcs);
    }
    for (k, &(v, u)) in coords.numbered.iter().enumerate() {
        let k = k + 1;
        arcs.push((coords.glue(k), coords.cell(v, k, 0)));
        arcs.push((coords.glue(k), coords.cell(u, 0, k)));
    }
    let instance =
        ProofGraph::build(coords.vertex_count(), &arcs, &[]).expect("construction arcs are valid");
    Ok(ReductionArtifact {
        instance,
        roles: coords,
    })
}

/// The partition `π(F)`: glue-prefixed rows for arcs outside `F`, bare rows
/// elsewhere, and a singleton for the glue vertex of each arc in `F`.
pub fn partition_from_fas(
    d: &ProofGraph,
    coords: &GadgetCoords,
    f: &BTreeSet<(Vertex, Vertex)>,
) -> Result<PathPartition> {
    for &(a, b) in f {
        if coords.number_of(a, b).is_none() {
            return Err(Error::UnknownArc { tail: a, head: b });
        }
    }
    if let Some(cycle) = coords.source().without_arcs(f).find_cycle() {
        return Err(Error::NotFeedbackArcSet { cycle });
    }
    let mut blocks = Vec::with_capacity(coords.offset() + f.len());
    for v in 1..=coords.n {
        for i in 0..=coords.m {
            let mut block = Vec::with_capacity(coords.m + 2);
            if i >= 1 {
                let arc = coords.numbered[i - 1];
                if arc.0 == v && !f.contains(&arc) {
                    block.push(coords.glue(i));
                }
            }
            block.extend(coords.row(v, i));
            blocks.push(block);
        }
    }
    for (k, arc) in coords.numbered.iter().enumerate() {
        if f.contains(arc) {
            blocks.push(vec![coords.glue(k + 1)]);
        }
    }
    let p = PathPartition::new(d.vertex_count(), blocks)?;
    check_h_partition(d, &p).map_err(|e| Error::InternalInvariantViolation(e.to_string()))?;
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// Restriction to the gadget equals the rows `L_v`.
    LeftOriented,
    /// Restriction to the gadget equals the columns `R_v`.
    RightOriented,
    NotWellOriented,
}

impl Orientation {
    pub fn is_well_oriented(self) -> bool {
        self != Orientation::NotWellOriented
    }
}

fn orientation_of(coords: &GadgetCoords, blocks: &[Vec<Vertex>], v: Vertex) -> Orientation {
    let mut restricted: Vec<Vec<Vertex>> = blocks
        .iter()
        .map(|b| {
            b.iter()
                .copied()
                .filter(|&x| coords.gadget_of(x) == Some(v))
                .collect::<Vec<_>>()
        })
        .filter(|b| !b.is_empty())
        .collect();
    restricted.sort();
    let mut rows = coords.rows(v);
    rows.sort();
    if restricted == rows {
        return Orientation::LeftOriented;
    }
    let mut columns = coords.columns(v);
    columns.sort();
    if restricted == columns {
        Orientation::RightOriented
    } else {
        Orientation::NotWellOriented
    }
}

pub fn gadget_orientation(
    d: &ProofGraph,
    coords: &GadgetCoords,
    p: &PathPartition,
    v: Vertex,
) -> Result<Orientation> {
    check_h_partition(d, p)?;
    if v == 0 || v > coords.n {
        return Err(Error::OutOfRangeVertex {
            vertex: v,
            n: coords.n,
        });
    }
    Ok(orientation_of(coords, p.blocks(), v))
}

/// The four cases of the repair, numbered as in the proof.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RepairCase {
    /// The gadget's blocks hold glue on both sides.
    BothSides,
    /// They hold no glue.
    NoGlue,
    /// Glue only on the side that has several arcs.
    WideSideOnly,
    /// Glue only on the side that has a single arc.
    NarrowSideOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepairStep {
    pub vertex: Vertex,
    pub case: RepairCase,
    /// The case was taken through out-degree 1 rather than in-degree 1.
    pub mirrored: bool,
    pub family: Orientation,
    /// Glue vertex moved to a singleton block to break a quotient cycle.
    pub split: Option<Vertex>,
    pub size_before: usize,
    pub size_after: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct NormalizeReport {
    pub iterations: usize,
    pub steps: Vec<RepairStep>,
}

/// Rewrites `p` so every gadget is well-oriented without growing it.
pub fn normalize_orientation(
    d: &ProofGraph,
    coords: &GadgetCoords,
    p: &PathPartition,
) -> Result<PathPartition> {
    normalize_orientation_traced(d, coords, p).map(|(p, _)| p)
}

/// [`normalize_orientation`] together with the repairs it applied.
pub fn normalize_orientation_traced(
    d: &ProofGraph,
    coords: &GadgetCoords,
    p: &PathPartition,
) -> Result<(PathPartition, NormalizeReport)> {
    check_h_partition(d, p)?;
    let nv = d.vertex_count();
    let mut blocks = p.blocks().to_vec();
    let mut report = NormalizeReport::default();
    let source = coords.source();
    for u in 1..=coords.n {
        if orientation_of(coords, &blocks, u).is_well_oriented() {
            continue;
        }
        let before: Vec<Orientation> = (1..=coords.n)
            .map(|w| orientation_of(coords, &blocks, w))
            .collect();
        let (touching, rest): (Vec<Vec<Vertex>>, Vec<Vec<Vertex>>) = blocks
            .iter()
            .cloned()
            .partition(|b| b.iter().any(|&x| coords.gadget_of(x) == Some(u)));
        // glue vertices of arcs leaving u (set L) and entering u (set R)
        let mut left = BTreeSet::new();
        let mut right = BTreeSet::new();
        for &x in touching.iter().flatten() {
            if let Some(Role::Glue { tail, number, .. }) = coords.role(x) {
                if tail == u {
                    left.insert(number);
                } else {
                    right.insert(number);
                }
            }
        }
        let (i, j) = (left.len(), right.len());
        let (case, mirrored, family, split_arc) = if source.in_degree(u) <= 1 {
            let incoming = source.predecessors(u).next().map(|r| (r, u));
            match (i, j) {
                (_, 1) if i >= 1 => (
                    RepairCase::BothSides,
                    false,
                    Orientation::LeftOriented,
                    None,
                ),
                (0, 0) => (RepairCase::NoGlue, false, Orientation::LeftOriented, None),
                (_, 0) => (
                    RepairCase::WideSideOnly,
                    false,
                    Orientation::LeftOriented,
                    incoming,
                ),
                _ => (
                    RepairCase::NarrowSideOnly,
                    false,
                    Orientation::RightOriented,
                    incoming,
                ),
            }
        } else if source.out_degree(u) <= 1 {
            let outgoing = source.successors(u).next().map(|l| (u, l));
            match (i, j) {
                (1, _) if j >= 1 => (
                    RepairCase::BothSides,
                    true,
                    Orientation::RightOriented,
                    None,
                ),
                (0, 0) => (RepairCase::NoGlue, true, Orientation::RightOriented, None),
                (0, _) => (
                    RepairCase::WideSideOnly,
                    true,
                    Orientation::RightOriented,
                    outgoing,
                ),
                _ => (
                    RepairCase::NarrowSideOnly,
                    true,
                    Orientation::LeftOriented,
                    outgoing,
                ),
            }
        } else {
            return Err(Error::DegreePreconditionViolated {
                vertex: u,
                in_degree: source.in_degree(u),
                out_degree: source.out_degree(u),
            });
        };

        let mut next = rest;
        next.extend(replacement_family(coords, u, family, &left, &right));
        let mut candidate = PathPartition::new(nv, next.clone())
            .map_err(|e| Error::InternalInvariantViolation(e.to_string()))?;
        let mut split = None;
        if let Some(arc) = split_arc {
            if quotient(d, &candidate)?.find_cycle().is_some() {
                let g = coords.glue_of(arc.0, arc.1).expect("arc of the source");
                let b = candidate.block_of(g);
                next[b].retain(|&x| x != g);
                next.push(vec![g]);
                candidate = PathPartition::new(nv, next.clone())
                    .map_err(|e| Error::InternalInvariantViolation(e.to_string()))?;
                split = Some(g);
            }
        }
        if let Err(e) = check_h_partition(d, &candidate) {
            return Err(Error::InternalInvariantViolation(format!(
                "repair of gadget {u} left an invalid partition: {e}"
            )));
        }
        if candidate.len() > blocks.len() {
            return Err(Error::InternalInvariantViolation(format!(
                "repair of gadget {u} grew the partition from {} to {} blocks",
                blocks.len(),
                candidate.len()
            )));
        }
        for w in 1..=coords.n {
            let now = orientation_of(coords, candidate.blocks(), w);
            let kept = if w == u {
                now == family
            } else {
                !before[w - 1].is_well_oriented() || now == before[w - 1]
            };
            if !kept {
                return Err(Error::InternalInvariantViolation(format!(
                    "repair of gadget {u} changed gadget {w} to {now:?}"
                )));
            }
        }
        report.steps.push(RepairStep {
            vertex: u,
            case,
            mirrored,
            family,
            split,
            size_before: blocks.len(),
            size_after: candidate.len(),
        });
        report.iterations += 1;
        blocks = candidate.into_blocks();
    }
    let out = PathPartition::new(nv, blocks)?;
    Ok((out, report))
}

/// The families `L̂_u` (rows) and `R̂_u` (columns): glue from the matching
/// side prefixes its line, glue from the other side stands alone.
fn replacement_family(
    coords: &GadgetCoords,
    u: Vertex,
    family: Orientation,
    left: &BTreeSet<usize>,
    right: &BTreeSet<usize>,
) -> Vec<Vec<Vertex>> {
    let (lines, attached, alone) = match family {
        Orientation::LeftOriented => (coords.rows(u), left, right),
        _ => (coords.columns(u), right, left),
    };
    let mut out: Vec<Vec<Vertex>> = lines
        .into_iter()
        .enumerate()
        .map(|(k, line)| {
            if attached.contains(&k) {
                std::iter::once(coords.glue(k)).chain(line).collect()
            } else {
                line
            }
        })
        .collect();
    out.extend(alone.iter().map(|&k| vec![coords.glue(k)]));
    out
}

/// Reads a feedback arc set off a partition whose gadgets are all
/// well-oriented: the arcs whose glue vertex is a singleton block.
pub fn fas_from_partition(
    d: &ProofGraph,
    coords: &GadgetCoords,
    p: &PathPartition,
) -> Result<BTreeSet<(Vertex, Vertex)>> {
    check_h_partition(d, p)?;
    for v in 1..=coords.n {
        if !orientation_of(coords, p.blocks(), v).is_well_oriented() {
            return Err(Error::GadgetNotWellOriented { vertex: v });
        }
    }
    let f: BTreeSet<(Vertex, Vertex)> = coords
        .numbered
        .iter()
        .enumerate()
        .filter(|(k, _)| p.blocks()[p.block_of(coords.glue(k + 1))].len() == 1)
        .map(|(_, &a)| a)
        .collect();
    if let Some(cycle) = coords.source().without_arcs(&f).find_cycle() {
        return Err(Error::InternalInvariantViolation(format!(
            "singleton glue arcs leave the cycle {cycle:?}"
        )));
    }
    if f.len() + coords.offset() > p.len() {
        return Err(Error::InternalInvariantViolation(format!(
            "{} arcs exceed the bound {}",
            f.len(),
            p.len() - coords.offset()
        )));
    }
    Ok(f)
}
