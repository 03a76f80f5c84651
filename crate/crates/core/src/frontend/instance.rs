//! `.ug` and `.dg` reduction instances.
//!
//! ```text
//! ug            dg
//! nodes 3       nodes 2
//! edge 1 2      arc 1 2
//! edge 2 3      arc 2 1
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Digraph, Vertex};
use crate::reductions::UndirectedGraph;

use super::apg::syntax;
use super::lines::{parse_count, parse_vertex_pair, Lines};

fn parse_pairs(
    text: &str,
    header: &str,
    directive: &str,
) -> Result<(usize, Vec<(Vertex, Vertex)>)> {
    let mut lines = Lines::new(text);
    let (line, words) = lines.next_required("header")?;
    if words != [header] {
        return Err(syntax(line, format!("expected `{header}`")));
    }
    let (line, words) = lines.next_required("nodes line")?;
    let n = parse_count(line, &words, "nodes")?;
    let mut pairs = Vec::new();
    for (line, words) in lines {
        if words[0] != directive {
            return Err(syntax(line, format!("expected `{directive} U V`")));
        }
        let (a, b) = parse_vertex_pair(line, &words)?;
        for v in [a, b] {
            if v == 0 || v > n {
                return Err(Error::AtLine {
                    line,
                    source: Box::new(Error::OutOfRangeVertex { vertex: v, n }),
                });
            }
        }
        pairs.push((a, b));
    }
    Ok((n, pairs))
}

pub fn parse_ug(text: &str) -> Result<UndirectedGraph> {
    let (n, edges) = parse_pairs(text, "ug", "edge")?;
    UndirectedGraph::new(n, edges)
}

pub fn emit_ug(g: &UndirectedGraph) -> String {
    let mut out = format!("ug\nnodes {}\n", g.vertex_count());
    for &(a, b) in g.edges() {
        writeln!(out, "edge {a} {b}").unwrap();
    }
    out
}

pub fn parse_dg(text: &str) -> Result<Digraph> {
    let (n, arcs) = parse_pairs(text, "dg", "arc")?;
    Digraph::new(n, arcs)
}

pub fn emit_dg(g: &Digraph) -> String {
    let mut out = format!("dg\nnodes {}\n", g.vertex_count());
    for &(a, b) in g.arcs() {
        writeln!(out, "arc {a} {b}").unwrap();
    }
    out
}
