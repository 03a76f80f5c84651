//! The line-based `.apg` proof-graph format.
//!
//! ```text
//! apg 1
//! nodes 3
//! ref 1 2      # premise citation
//! var 1 3      # variable use
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{ProofGraph, Vertex};

use super::lines::{parse_count, parse_vertex_pair, Lines};

pub const APG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    Ref,
    Var,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArcDecl {
    pub line: usize,
    pub kind: ArcKind,
    pub tail: Vertex,
    pub head: Vertex,
}

/// A parsed `.apg` file before graph validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApgDocument {
    pub version: u32,
    pub nodes: usize,
    pub arcs: Vec<ArcDecl>,
}

impl ApgDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        let (line, words) = lines.next_required("apg header")?;
        if words.len() != 2 || words[0] != "apg" {
            return Err(syntax(line, "expected `apg <version>`"));
        }
        let version: u32 = words[1]
            .parse()
            .map_err(|_| syntax(line, "version must be an integer"))?;
        if version != APG_VERSION {
            return Err(syntax(line, format!("unsupported version {version}")));
        }
        let (line, words) = lines.next_required("nodes line")?;
        let nodes = parse_count(line, &words, "nodes")?;
        let mut arcs = Vec::new();
        for (line, words) in lines {
            let kind = match words[0] {
                "ref" => ArcKind::Ref,
                "var" => ArcKind::Var,
                other => return Err(syntax(line, format!("unknown directive `{other}`"))),
            };
            let (tail, head) = parse_vertex_pair(line, &words)?;
            check_arc(line, nodes, tail, head)?;
            arcs.push(ArcDecl {
                line,
                kind,
                tail,
                head,
            });
        }
        Ok(ApgDocument {
            version,
            nodes,
            arcs,
        })
    }

    pub fn to_graph(&self) -> Result<ProofGraph> {
        let pick = |k: ArcKind| -> Vec<(Vertex, Vertex)> {
            self.arcs
                .iter()
                .filter(|a| a.kind == k)
                .map(|a| (a.tail, a.head))
                .collect()
        };
        ProofGraph::build(self.nodes, &pick(ArcKind::Ref), &pick(ArcKind::Var))
    }
}

pub(super) fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

pub(super) fn check_arc(line: usize, n: usize, tail: Vertex, head: Vertex) -> Result<()> {
    let inner = if tail == 0 || tail > n {
        Error::OutOfRangeVertex { vertex: tail, n }
    } else if head == 0 || head > n {
        Error::OutOfRangeVertex { vertex: head, n }
    } else if tail == head {
        Error::SelfLoop { vertex: tail }
    } else {
        return Ok(());
    };
    Err(Error::AtLine {
        line,
        source: Box::new(inner),
    })
}

pub fn parse_apg(text: &str) -> Result<ProofGraph> {
    ApgDocument::parse(text)?.to_graph()
}

/// Canonical text: header, node count, sorted `ref` lines, then sorted `var` lines.
pub fn emit_apg(g: &ProofGraph) -> String {
    let mut out = format!("apg {APG_VERSION}\nnodes {}\n", g.vertex_count());
    for (t, h) in g.reference_arcs() {
        writeln!(out, "ref {t} {h}").unwrap();
    }
    for a in g.arcs().iter().filter(|a| a.is_variable) {
        writeln!(out, "var {} {}", a.tail, a.head).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph() {
        let g = parse_apg("apg 1\nnodes 0").unwrap();
        assert_eq!(g.vertex_count(), 0);
        assert_eq!(emit_apg(&g), "apg 1\nnodes 0\n");
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_apg("# hi\napg 1\n\nnodes 2 # two\nref 1 2\n").unwrap();
        assert_eq!(g.reference_arc_count(), 1);
    }

    #[test]
    fn self_loop_reports_line() {
        let err = parse_apg("apg 1\nnodes 2\nref 1 1\n").unwrap_err();
        assert_eq!(
            err,
            Error::AtLine {
                line: 3,
                source: Box::new(Error::SelfLoop { vertex: 1 })
            }
        );
    }

    #[test]
    fn syntax_errors_carry_lines() {
        for (text, line) in [
            ("ref 1 1", 1),
            ("apg 2\nnodes 1", 1),
            ("apg 1\nnodes x", 2),
            ("apg 1\nnodes 3\nref 1", 3),
            ("apg 1\nnodes 3\nfoo 1 2", 3),
            ("apg 1\nnodes 3\nref 1 2 3", 3),
        ] {
            match parse_apg(text).unwrap_err() {
                Error::Syntax { line: l, .. } => assert_eq!(l, line, "{text:?}"),
                e => panic!("{text:?}: {e:?}"),
            }
        }
        assert!(matches!(
            parse_apg("apg 1\nnodes 2\nvar 1 3").unwrap_err(),
            Error::AtLine { line: 3, .. }
        ));
        assert!(matches!(
            parse_apg("apg 1\nnodes 2\nref 1 2\nvar 2 1").unwrap_err(),
            Error::CycleDetected { .. }
        ));
    }

    #[test]
    fn doubly_flagged_arc_round_trips() {
        let g = ProofGraph::build(2, &[(1, 2)], &[(1, 2)]).unwrap();
        let text = emit_apg(&g);
        assert_eq!(text, "apg 1\nnodes 2\nref 1 2\nvar 1 2\n");
        assert_eq!(parse_apg(&text).unwrap(), g);
    }

    #[test]
    fn document_keeps_lines() {
        let doc = ApgDocument::parse("apg 1\nnodes 2\n\nvar 1 2\n").unwrap();
        assert_eq!(doc.arcs[0].line, 4);
        assert_eq!(doc.arcs[0].kind, ArcKind::Var);
    }
}
