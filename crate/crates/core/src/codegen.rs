//! Mizar-style proof scripts whose structure is a given proof graph.
//!
//! Step `v` at rank `r = t(v)` gets label `Ar`. Its statement mentions `xk`
//! for every variable in-neighbour at rank `k`, and its justification cites
//! `Ak` for every reference in-neighbour. Steps with an outgoing variable arc
//! are `consider` steps introducing `xr`. The statements are logically empty,
//! so the text is accepted by a checker whatever the graph.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frontend::identifier_tokens;
use crate::graph::{ProofGraph, Vertex};
use crate::metrics::LabelRule;
use crate::order::TopoOrder;

/// Per-step reference limit of the Mizar checker.
pub const MIZAR_REFERENCE_CAP: usize = 25;

const VERUM: &str = "not contradiction";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepKind {
    Plain,
    Consider,
    Thus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    /// Vertex of the source graph.
    pub vertex: Vertex,
    pub kind: StepKind,
    pub label: Option<String>,
    pub uses_then: bool,
    /// Full statement, including `xr = r &` on consider steps.
    pub statement: String,
    /// Cited labels in citation order.
    pub justification: Vec<String>,
}

impl Step {
    /// Variable introduced by a consider step.
    pub fn introduced(&self, rank: usize) -> Option<String> {
        (self.kind == StepKind::Consider).then(|| format!("x{rank}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Script {
    pub steps: Vec<Step>,
    pub thesis_vertex: Vertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum RenderStyle {
    /// Every step labelled, every reference cited by label.
    #[default]
    Verbose,
    /// `then` wherever the previous step is cited, labels only where needed.
    Legible,
}

/// Smallest vertex whose incident arcs are all reference arcs.
pub fn thesis_vertex(g: &ProofGraph) -> Option<Vertex> {
    g.vertices().find(|&v| is_thesis_candidate(g, v))
}

fn is_thesis_candidate(g: &ProofGraph, v: Vertex) -> bool {
    g.plain_successors(v).is_empty() && g.plain_predecessors(v).is_empty()
}

pub fn generate_script(g: &ProofGraph, t: &TopoOrder, strict_cap: bool) -> Result<Script> {
    let thesis = thesis_vertex(g).ok_or(Error::NoThesisVertex)?;
    generate_script_with_thesis(g, t, thesis, strict_cap)
}

/// As [`generate_script`] with a caller-chosen thesis step.
pub fn generate_script_with_thesis(
    g: &ProofGraph,
    t: &TopoOrder,
    thesis: Vertex,
    strict_cap: bool,
) -> Result<Script> {
    t.check(g)?;
    if thesis == 0 || thesis > g.vertex_count() {
        return Err(Error::OutOfRangeVertex {
            vertex: thesis,
            n: g.vertex_count(),
        });
    }
    if !is_thesis_candidate(g, thesis) {
        return Err(Error::InvalidThesis { vertex: thesis });
    }
    if strict_cap {
        for v in g.vertices() {
            let count = g.ref_predecessors(v).len();
            if count > MIZAR_REFERENCE_CAP {
                return Err(Error::ReferenceCapExceeded {
                    vertex: v,
                    count,
                    cap: MIZAR_REFERENCE_CAP,
                });
            }
        }
    }
    let ranks = |vs: &[Vertex]| -> Vec<usize> {
        let mut r: Vec<usize> = vs.iter().map(|&u| t.position(u)).collect();
        r.sort_unstable();
        r
    };
    let steps = t
        .sequence()
        .iter()
        .map(|&v| {
            let rank = t.position(v);
            let vars = ranks(g.plain_predecessors(v));
            let mut statement = if vars.is_empty() {
                VERUM.to_owned()
            } else {
                vars.iter()
                    .map(|k| format!("x{k} = x{k}"))
                    .collect::<Vec<_>>()
                    .join(" & ")
            };
            let kind = if v == thesis {
                StepKind::Thus
            } else if !g.plain_successors(v).is_empty() {
                statement = format!("x{rank} = {rank} & {statement}");
                StepKind::Consider
            } else {
                StepKind::Plain
            };
            Step {
                vertex: v,
                kind,
                label: Some(format!("A{rank}")),
                uses_then: false,
                statement,
                justification: ranks(g.ref_predecessors(v))
                    .into_iter()
                    .map(|k| format!("A{k}"))
                    .collect(),
            }
        })
        .collect();
    Ok(Script {
        steps,
        thesis_vertex: thesis,
    })
}

/// Ranks cited by each step (1-based), resolved leniently: citations of
/// unknown labels are dropped.
fn citations(s: &Script) -> Vec<BTreeSet<usize>> {
    let by_label: HashMap<&str, usize> = s
        .steps
        .iter()
        .enumerate()
        .filter_map(|(k, st)| st.label.as_deref().map(|l| (l, k + 1)))
        .collect();
    s.steps
        .iter()
        .enumerate()
        .map(|(k, st)| {
            let mut cited: BTreeSet<usize> = st
                .justification
                .iter()
                .filter_map(|l| by_label.get(l.as_str()).copied())
                .collect();
            if st.uses_then && k > 0 {
                cited.insert(k);
            }
            cited
        })
        .collect()
}

/// Ranks whose variable is used by some later step.
fn variable_users(s: &Script) -> Vec<bool> {
    let mut used = vec![false; s.steps.len()];
    let intro: HashMap<String, usize> = s
        .steps
        .iter()
        .enumerate()
        .filter_map(|(k, st)| st.introduced(k + 1).map(|x| (x, k)))
        .collect();
    for (k, st) in s.steps.iter().enumerate() {
        let own = st.introduced(k + 1);
        for tok in identifier_tokens(&st.statement) {
            if Some(&tok) != own.as_ref() {
                if let Some(&src) = intro.get(&tok) {
                    used[src] = true;
                }
            }
        }
    }
    used
}

pub fn render_script(s: &Script, style: RenderStyle, rule: LabelRule) -> String {
    let n = s.steps.len();
    let cited = citations(s);
    let then: Vec<bool> = (0..n)
        .map(|k| style == RenderStyle::Legible && k > 0 && cited[k].contains(&k))
        .collect();
    let labelled: Vec<bool> = match style {
        RenderStyle::Verbose => s.steps.iter().map(|st| st.label.is_some()).collect(),
        RenderStyle::Legible => {
            let used = variable_users(s);
            let mut cited_by: Vec<Vec<usize>> = vec![Vec::new(); n];
            for (k, c) in cited.iter().enumerate() {
                for &r in c {
                    cited_by[r - 1].push(k + 1);
                }
            }
            (0..n)
                .map(|k| {
                    let far = cited_by[k].iter().any(|&r| r != k + 2);
                    let needed =
                        far || (rule == LabelRule::Miz && !cited_by[k].is_empty() && used[k]);
                    needed && s.steps[k].label.is_some()
                })
                .collect()
        }
    };

    let mut out = String::from("not contradiction\nproof\n");
    for (k, st) in s.steps.iter().enumerate() {
        let mut refs: Vec<&str> = st.justification.iter().map(String::as_str).collect();
        if then[k] {
            let prev = s.steps[k - 1].label.as_deref();
            refs.retain(|&l| Some(l) != prev);
        }
        let label = match (&st.label, labelled[k]) {
            (Some(l), true) => format!("{l}: "),
            _ => String::new(),
        };
        let just = if refs.is_empty() {
            String::new()
        } else {
            format!(" by {}", refs.join(", "))
        };
        let then_kw = if then[k] { "then " } else { "" };
        match st.kind {
            StepKind::Consider => {
                let x = st.introduced(k + 1).expect("consider step");
                let _ = writeln!(out, "  {then_kw}consider {x} be set such that");
                let _ = writeln!(out, "    {label}{}{just};", st.statement);
            }
            StepKind::Thus => {
                let _ = writeln!(out, "  thus {then_kw}{label}{}{just};", st.statement);
            }
            StepKind::Plain => {
                let _ = writeln!(out, "  {then_kw}{label}{}{just};", st.statement);
            }
        }
    }
    out.push_str("end;\n");
    out
}

/// The proof graph a script describes, on ranks `1..=steps`: reference arcs
/// from citations and `then`, variable arcs from uses of introduced `xk`.
pub fn structure_of(s: &Script) -> Result<ProofGraph> {
    let mut labels: HashMap<&str, usize> = HashMap::new();
    let mut vars: HashMap<String, usize> = HashMap::new();
    let mut refs = Vec::new();
    let mut var_arcs = Vec::new();
    for (k, st) in s.steps.iter().enumerate() {
        let rank = k + 1;
        if st.uses_then {
            if rank == 1 {
                return Err(Error::MalformedScript("first step uses then".into()));
            }
            refs.push((rank - 1, rank));
        }
        for l in &st.justification {
            let &src = labels.get(l.as_str()).ok_or_else(|| {
                Error::MalformedScript(format!("step {rank} cites {l} before it is defined"))
            })?;
            refs.push((src, rank));
        }
        let own = st.introduced(rank);
        for tok in identifier_tokens(&st.statement) {
            if Some(&tok) == own.as_ref() {
                continue;
            }
            if let Some(&src) = vars.get(&tok) {
                var_arcs.push((src, rank));
            } else if tok.starts_with('x') && tok[1..].chars().all(|c| c.is_ascii_digit()) {
                return Err(Error::MalformedScript(format!(
                    "step {rank} uses {tok} before it is introduced"
                )));
            }
        }
        if let Some(l) = &st.label {
            if labels.insert(l, rank).is_some() {
                return Err(Error::MalformedScript(format!("label {l} defined twice")));
            }
        }
        if let Some(x) = own {
            vars.insert(x, rank);
        }
    }
    // a citation that also shares a variable is a reference arc only
    let ref_set: BTreeSet<_> = refs.iter().copied().collect();
    var_arcs.retain(|a| !ref_set.contains(a));
    ProofGraph::build(s.steps.len(), &refs, &var_arcs)
        .map_err(|e| Error::MalformedScript(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::metrics::{label_set, then_step_set};
    use crate::order::enumerate_topo_orders;

    #[test]
    fn single_vertex() {
        let g = ProofGraph::build(1, &[], &[]).unwrap();
        let s = generate_script(&g, &TopoOrder::identity(1), true).unwrap();
        assert_eq!(s.steps.len(), 1);
        assert_eq!(s.steps[0].kind, StepKind::Thus);
        assert_eq!(s.steps[0].statement, "not contradiction");
        assert_eq!(
            render_script(&s, RenderStyle::Verbose, LabelRule::Plain),
            "not contradiction\nproof\n  thus A1: not contradiction;\nend;\n"
        );
    }

    #[test]
    fn reference_cap() {
        let arcs: Vec<_> = (1..=26).map(|u| (u, 27)).collect();
        let g = ProofGraph::build(27, &arcs, &[]).unwrap();
        let t = TopoOrder::identity(27);
        assert_eq!(
            generate_script(&g, &t, true).unwrap_err(),
            Error::ReferenceCapExceeded {
                vertex: 27,
                count: 26,
                cap: 25
            }
        );
        assert_eq!(
            generate_script(&g, &t, false).unwrap().steps[26]
                .justification
                .len(),
            26
        );
        let arcs: Vec<_> = (1..=25).map(|u| (u, 26)).collect();
        let g = ProofGraph::build(26, &arcs, &[]).unwrap();
        assert!(generate_script(&g, &TopoOrder::identity(26), true).is_ok());
    }

    #[test]
    fn needs_a_thesis_vertex() {
        let g = ProofGraph::build(2, &[], &[(1, 2)]).unwrap();
        assert_eq!(
            generate_script(&g, &TopoOrder::identity(2), false).unwrap_err(),
            Error::NoThesisVertex
        );
        let g = fixtures::fig11();
        assert_eq!(
            generate_script_with_thesis(&g, &TopoOrder::identity(7), 1, false).unwrap_err(),
            Error::InvalidThesis { vertex: 1 }
        );
    }

    #[test]
    fn smallest_thesis_candidate() {
        assert_eq!(thesis_vertex(&fixtures::fig11()), Some(3));
    }

    #[test]
    fn fig8_legible_labels() {
        let g = fixtures::fig6();
        let t = TopoOrder::new(&g, fixtures::TAU_FIG8.to_vec()).unwrap();
        let thesis = *t.sequence().last().unwrap();
        let s = generate_script_with_thesis(&g, &t, thesis, true).unwrap();
        let text = render_script(&s, RenderStyle::Legible, LabelRule::Plain);
        let thens = text
            .lines()
            .filter(|l| l.split_whitespace().any(|w| w == "then"))
            .count();
        assert_eq!(thens, 12);
        let labelled: BTreeSet<Vertex> = s
            .steps
            .iter()
            .enumerate()
            .filter(|(k, _)| text.contains(&format!("A{}:", k + 1)))
            .map(|(_, st)| st.vertex)
            .collect();
        assert_eq!(labelled, BTreeSet::from([2, 6, 13, 15]));
    }

    #[test]
    fn chain_renders_without_labels() {
        let arcs: Vec<_> = (1..5).map(|v| (v, v + 1)).collect();
        let g = ProofGraph::build(5, &arcs, &[]).unwrap();
        let s = generate_script(&g, &TopoOrder::identity(5), false).unwrap();
        let text = render_script(&s, RenderStyle::Legible, LabelRule::Miz);
        assert!(!text.contains(':'));
        assert_eq!(text.matches("then").count(), 4);
        let verbose = render_script(&s, RenderStyle::Verbose, LabelRule::Miz);
        assert_eq!(verbose.matches(':').count(), 5);
    }

    #[test]
    fn round_trip_over_all_orders() {
        let g = fixtures::fig11();
        enumerate_topo_orders(&g, None, |seq| {
            let t = TopoOrder::from_sequence_unchecked(seq.to_vec());
            let s = generate_script(&g, &t, true).unwrap();
            let h = structure_of(&s).unwrap();
            assert!(g.is_isomorphic_via(&h, |v| t.position(v)));
            for rule in [LabelRule::Plain, LabelRule::Miz] {
                let text = render_script(&s, RenderStyle::Legible, rule);
                let thens = text.matches("then").count();
                assert_eq!(thens, then_step_set(&g, &t).unwrap().len());
                let labels = label_set(&g, &t, rule).unwrap();
                for st in &s.steps {
                    let l = format!("A{}:", t.position(st.vertex));
                    assert_eq!(text.contains(&l), labels.contains(&st.vertex));
                }
            }
        })
        .unwrap();
    }

    #[test]
    fn malformed_scripts() {
        let step = |label: &str, statement: &str, just: &[&str]| Step {
            vertex: 1,
            kind: StepKind::Plain,
            label: Some(label.into()),
            uses_then: false,
            statement: statement.into(),
            justification: just.iter().map(|s| s.to_string()).collect(),
        };
        let forward = Script {
            steps: vec![step("A1", VERUM, &["A2"]), step("A2", VERUM, &[])],
            thesis_vertex: 2,
        };
        assert!(matches!(
            structure_of(&forward),
            Err(Error::MalformedScript(_))
        ));
        let unbound = Script {
            steps: vec![step("A1", "x4 = x4", &[])],
            thesis_vertex: 1,
        };
        assert!(matches!(
            structure_of(&unbound),
            Err(Error::MalformedScript(_))
        ));
        let no_consider = Script {
            steps: vec![step("A1", VERUM, &[]), step("A2", VERUM, &["A1"])],
            thesis_vertex: 2,
        };
        let g = structure_of(&no_consider).unwrap();
        assert_eq!(g.reference_arc_count(), g.arc_count());
    }
}
