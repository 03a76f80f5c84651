//! Shared tokenizer for the line-based instance formats.

use crate::error::Result;
use crate::graph::Vertex;

use super::apg::syntax;

/// Non-blank lines with `#` comments removed, split on whitespace, paired
/// with their 1-based line numbers.
pub(super) struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    consumed: usize,
}

impl<'a> Lines<'a> {
    pub(super) fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            consumed: 0,
        }
    }

    pub(super) fn next_required(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        match self.next() {
            Some(item) => Ok(item),
            None => Err(syntax(self.consumed.max(1), format!("missing {what}"))),
        }
    }
}

impl<'a> Iterator for Lines<'a> {
    type Item = (usize, Vec<&'a str>);

    fn next(&mut self) -> Option<Self::Item> {
        for (i, raw) in self.inner.by_ref() {
            self.consumed = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            let words: Vec<&str> = body.split_whitespace().collect();
            if !words.is_empty() {
                return Some((i + 1, words));
            }
        }
        None
    }
}

pub(super) fn parse_count(line: usize, words: &[&str], keyword: &str) -> Result<usize> {
    if words.len() != 2 || words[0] != keyword {
        return Err(syntax(line, format!("expected `{keyword} <count>`")));
    }
    words[1]
        .parse()
        .map_err(|_| syntax(line, format!("`{}` is not a count", words[1])))
}

pub(super) fn parse_vertex_pair(line: usize, words: &[&str]) -> Result<(Vertex, Vertex)> {
    if words.len() != 3 {
        return Err(syntax(
            line,
            format!("`{}` takes exactly two vertex ids", words[0]),
        ));
    }
    let num = |w: &str| -> Result<Vertex> {
        w.parse()
            .map_err(|_| syntax(line, format!("`{w}` is not a vertex id")))
    };
    Ok((num(words[1])?, num(words[2])?))
}
