use thiserror::Error;

use crate::graph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arc endpoint {vertex} is outside 1..={n}")]
    OutOfRangeVertex { vertex: Vertex, n: usize },
    #[error("self-loop on vertex {vertex}")]
    SelfLoop { vertex: Vertex },
    #[error("graph contains a cycle: {}", join_arrows(.cycle))]
    CycleDetected { cycle: Vec<Vertex> },
    #[error("order is not a topological sorting: {reason}")]
    OrderNotTopological { reason: String },
    #[error("not a partition of the vertex set: {reason}")]
    NotAPartition { reason: String },
    #[error("not an acyclic Hamiltonian partition: {reason}")]
    NotHPartition { reason: String },
    #[error("block quotient contains a cycle")]
    QuotientCyclic,
    #[error("more than {cap} linear extensions; raise the cap")]
    EnumerationCapExceeded { cap: u64 },
    #[error("instance too large for exact search: {what}")]
    ScaleCapExceeded { what: String },
    #[error("lexicographic optimization needs at least one criterion")]
    NoCriteria,
    #[error("input contains the self-loop {vertex} -> {vertex}")]
    SelfLoopInInput { vertex: Vertex },
    #[error("vertex {vertex} has in-degree {in_degree} and out-degree {out_degree}; one of them must be 1")]
    DegreePreconditionViolated {
        vertex: Vertex,
        in_degree: usize,
        out_degree: usize,
    },
    #[error("arc set is not a feedback arc set; residual cycle {}", join_arrows(.cycle))]
    NotFeedbackArcSet { cycle: Vec<Vertex> },
    #[error("arc {tail} -> {head} is not an arc of the source digraph")]
    UnknownArc { tail: Vertex, head: Vertex },
    #[error("arc numbering is not a bijection onto the source arcs: {0}")]
    InvalidNumbering(String),
    #[error("gadget of source vertex {vertex} is not well-oriented")]
    GadgetNotWellOriented { vertex: Vertex },
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("vertex set is not a cover; edge {{{0}, {1}}} is uncovered")]
    NotACover(Vertex, Vertex),
    #[error("no vertex is incident only to reference arcs")]
    NoThesisVertex,
    #[error("vertex {vertex} touches a non-reference arc and cannot carry the thesis")]
    InvalidThesis { vertex: Vertex },
    #[error("vertex {vertex} cites {count} premises, above the cap of {cap}")]
    ReferenceCapExceeded {
        vertex: Vertex,
        count: usize,
        cap: usize,
    },
    #[error("malformed script: {0}")]
    MalformedScript(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    AtLine { line: usize, source: Box<Error> },
    #[error("line {line}: unknown label {label}")]
    UnknownLabel { line: usize, label: String },
    #[error("line {line}: duplicate label {label}")]
    DuplicateLabel { line: usize, label: String },
}

fn join_arrows(cycle: &[Vertex]) -> String {
    cycle
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" -> ")
}
