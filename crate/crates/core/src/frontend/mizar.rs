//! Extraction of an abstract proof graph from a flat Mizar-style proof.
//!
//! Supported step forms: `let`, `assume`, `consider ... be ... such that`,
//! plain labelled or unlabelled statements, and `thus`/`hence`, each optionally
//! prefixed by `then`. Steps end at `;` and may span lines. Citations that are
//! not a single local label (such as `VECTSP_1:def 6` or `def 10`) are ignored.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::graph::{ProofGraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKeyword {
    Let,
    Assume,
    Consider,
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MizarLiteStep {
    /// 1-based line where the step starts.
    pub line: usize,
    pub label: Option<String>,
    pub keyword: StepKeyword,
    pub then: bool,
    pub thus: bool,
    /// Identifiers introduced by `let` or `consider`.
    pub introduces: Vec<String>,
    /// Identifier tokens of the statement part.
    pub statement: Vec<String>,
    /// Local labels cited after `by`.
    pub by: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractedProof {
    pub graph: ProofGraph,
    pub steps: Vec<MizarLiteStep>,
    /// Starting line of each step mapped to its vertex.
    pub step_map: BTreeMap<usize, Vertex>,
}

pub fn parse_mizar_lite(text: &str) -> Result<ExtractedProof> {
    let raw = split_steps(text)?;
    let mut steps = Vec::with_capacity(raw.len());
    for (line, body) in raw {
        steps.push(parse_step(line, &body)?);
    }
    build(steps)
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

/// Maximal runs of identifier characters.
pub fn identifier_tokens(s: &str) -> Vec<String> {
    s.split(|c: char| !is_ident_char(c))
        .filter(|w| !w.is_empty())
        .map(str::to_owned)
        .collect()
}

/// Cuts the proof body into `;`-terminated steps with their starting lines.
fn split_steps(text: &str) -> Result<Vec<(usize, String)>> {
    let lines: Vec<String> = text
        .lines()
        .map(|l| match l.find("::") {
            Some(i) => l[..i].to_owned(),
            None => l.to_owned(),
        })
        .collect();

    // skip a theorem header up to the `proof` keyword, if there is one
    let start = lines
        .iter()
        .enumerate()
        .find_map(|(i, l)| find_word(l, "proof").map(|k| (i, k + "proof".len())))
        .unwrap_or((0, 0));

    let mut steps = Vec::new();
    let mut current = String::new();
    let mut current_line = 0;
    let mut closed = false;
    for (i, l) in lines.iter().enumerate().skip(start.0) {
        let mut rest: &str = if i == start.0 {
            &l[start.1.min(l.len())..]
        } else {
            l
        };
        while !rest.is_empty() {
            let (piece, tail, ends) = match rest.find(';') {
                Some(k) => (&rest[..k], &rest[k + 1..], true),
                None => (rest, "", false),
            };
            if closed {
                if !piece.trim().is_empty() {
                    return Err(syntax(i + 1, "text after the closing `end;`"));
                }
            } else {
                if current.trim().is_empty() && !piece.trim().is_empty() {
                    current_line = i + 1;
                }
                current.push(' ');
                current.push_str(piece);
                if ends {
                    let body = current.trim().to_owned();
                    if body.is_empty() {
                        return Err(syntax(i + 1, "empty step"));
                    }
                    if body == "end" {
                        closed = true;
                    } else if body.rsplit(char::is_whitespace).next() == Some("end") {
                        return Err(syntax(current_line, "step is missing its terminating `;`"));
                    } else {
                        steps.push((current_line, body));
                    }
                    current.clear();
                }
            }
            rest = tail;
        }
    }
    if !current.trim().is_empty() {
        let body = current.trim();
        if body != "end" {
            return Err(syntax(current_line, "step is missing its terminating `;`"));
        }
    }
    Ok(steps)
}

fn strip_word<'a>(s: &'a str, word: &str) -> Option<&'a str> {
    let s = s.trim_start();
    let rest = s.strip_prefix(word)?;
    match rest.chars().next() {
        Some(c) if is_ident_char(c) => None,
        _ => Some(rest),
    }
}

/// Byte offset of a standalone keyword outside parentheses.
fn find_word(s: &str, word: &str) -> Option<usize> {
    let mut depth = 0i32;
    let mut prev: Option<char> = None;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            _ => {}
        }
        if depth == 0
            && prev.is_none_or(|p| !is_ident_char(p))
            && s[i..].starts_with(word)
            && s[i + word.len()..]
                .chars()
                .next()
                .is_none_or(|c| !is_ident_char(c))
        {
            return Some(i);
        }
        prev = Some(c);
    }
    None
}

/// Splits `label: rest` when the step opens with a label.
fn take_label(s: &str) -> (Option<String>, &str) {
    let t = s.trim_start();
    let end = t.find(|c: char| !is_ident_char(c)).unwrap_or(t.len());
    if end > 0 {
        let after = t[end..].trim_start();
        if let Some(rest) = after.strip_prefix(':') {
            if !rest.starts_with('=') {
                return (Some(t[..end].to_owned()), rest);
            }
        }
    }
    (None, t)
}

fn parse_step(line: usize, body: &str) -> Result<MizarLiteStep> {
    let mut rest = body;
    let mut then = false;
    let mut thus = false;
    loop {
        if let Some(r) = strip_word(rest, "then") {
            then = true;
            rest = r;
        } else if let Some(r) = strip_word(rest, "thus") {
            thus = true;
            rest = r;
        } else if let Some(r) = strip_word(rest, "hence") {
            then = true;
            thus = true;
            rest = r;
        } else {
            break;
        }
    }

    let mut keyword = StepKeyword::Plain;
    let mut introduces = Vec::new();
    if let Some(r) = strip_word(rest, "let") {
        keyword = StepKeyword::Let;
        let decl = match find_word(r, "such") {
            Some(k) => &r[..k],
            None => r,
        };
        for part in decl.split(',') {
            if let Some(name) = identifier_tokens(part).into_iter().next() {
                introduces.push(name);
            }
        }
        if introduces.is_empty() {
            return Err(syntax(line, "`let` introduces no variable"));
        }
        rest = r;
    } else if let Some(r) = strip_word(rest, "assume") {
        keyword = StepKeyword::Assume;
        rest = r;
    } else if let Some(r) = strip_word(rest, "consider") {
        keyword = StepKeyword::Consider;
        let k =
            find_word(r, "such").ok_or_else(|| syntax(line, "`consider` without `such that`"))?;
        let decl = &r[..k];
        let names_end = find_word(decl, "be").unwrap_or(decl.len());
        for part in decl[..names_end].split(',') {
            if let Some(name) = identifier_tokens(part).into_iter().next() {
                introduces.push(name);
            }
        }
        if introduces.is_empty() {
            return Err(syntax(line, "`consider` introduces no variable"));
        }
        let after = &r[k + "such".len()..];
        rest = strip_word(after, "that")
            .ok_or_else(|| syntax(line, "expected `that` after `such`"))?;
    }

    let (label, rest) = match keyword {
        StepKeyword::Let => (None, rest),
        _ => take_label(rest),
    };
    let (stmt, just) = match find_word(rest, "by") {
        Some(k) => (&rest[..k], Some(&rest[k + 2..])),
        None => (rest, None),
    };
    let mut by = Vec::new();
    if let Some(just) = just {
        for item in just.split(',') {
            let item = item.trim();
            if item.is_empty() {
                return Err(syntax(line, "empty citation in `by` list"));
            }
            let local = item.chars().all(is_ident_char) && !item.contains(':');
            if local {
                by.push(item.to_owned());
            }
        }
    }
    let statement = identifier_tokens(stmt);
    if statement.is_empty() && keyword != StepKeyword::Let {
        return Err(syntax(line, "step has no statement"));
    }
    Ok(MizarLiteStep {
        line,
        label,
        keyword,
        then,
        thus,
        introduces,
        statement,
        by,
    })
}

fn build(steps: Vec<MizarLiteStep>) -> Result<ExtractedProof> {
    let n = steps.len();
    let mut labels: HashMap<&str, Vertex> = HashMap::new();
    let mut scope: HashMap<&str, Vertex> = HashMap::new();
    let mut refs = Vec::new();
    let mut vars = Vec::new();
    let mut step_map = BTreeMap::new();
    for (i, s) in steps.iter().enumerate() {
        let v = i + 1;
        step_map.insert(s.line, v);
        if s.then {
            if v == 1 {
                return Err(syntax(s.line, "`then` on the first step"));
            }
            refs.push((v - 1, v));
        }
        for l in &s.by {
            let &u = labels.get(l.as_str()).ok_or_else(|| Error::UnknownLabel {
                line: s.line,
                label: l.clone(),
            })?;
            refs.push((u, v));
        }
        let mut used: Vec<Vertex> = s
            .statement
            .iter()
            .filter_map(|t| scope.get(t.as_str()).copied())
            .collect();
        used.sort_unstable();
        used.dedup();
        vars.extend(used.into_iter().map(|u| (u, v)));
        if let Some(l) = &s.label {
            if labels.insert(l.as_str(), v).is_some() {
                return Err(Error::DuplicateLabel {
                    line: s.line,
                    label: l.clone(),
                });
            }
        }
        for name in &s.introduces {
            scope.insert(name.as_str(), v);
        }
    }
    let graph = ProofGraph::build(n, &refs, &vars)?;
    Ok(ExtractedProof {
        graph,
        steps,
        step_map,
    })
}
