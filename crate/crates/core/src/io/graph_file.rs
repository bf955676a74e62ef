//! Line-oriented graph format:
//!
//! ```text
//! # comment
//! n 4
//! 0 1        undirected edge
//! 1 > 2      directed edge 1 -> 2
//! ```

use std::fmt::Write;

use crate::error::{Result, SpxError};
use crate::graph::{Edge, Graph};

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> SpxError {
    SpxError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_index(tok: (usize, &str), line: usize) -> Result<usize> {
    tok.1
        .parse::<usize>()
        .map_err(|_| parse_err(line, tok.0, format!("expected a vertex index, found `{}`", tok.1)))
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        if toks.is_empty() {
            continue;
        }
        let Some(count) = n else {
            if toks[0].1 != "n" || toks.len() != 2 {
                return Err(parse_err(lineno, toks[0].0, "expected header `n <count>`"));
            }
            let c = toks[1]
                .1
                .parse::<usize>()
                .map_err(|_| parse_err(lineno, toks[1].0, "vertex count must be a non-negative integer"))?;
            if c == 0 {
                return Err(parse_err(lineno, toks[1].0, "vertex count must be at least 1"));
            }
            n = Some(c);
            continue;
        };

        let (edge, src_tok, tgt_tok) = match toks.as_slice() {
            [a, b] => (Edge::undirected(parse_index(*a, lineno)?, parse_index(*b, lineno)?), *a, *b),
            [a, (col, ">"), b] => {
                let _ = col;
                (Edge::directed(parse_index(*a, lineno)?, parse_index(*b, lineno)?), *a, *b)
            }
            [_, (col, op), _] => {
                return Err(parse_err(lineno, *col, format!("expected `>`, found `{op}`")));
            }
            _ => {
                return Err(parse_err(lineno, toks[0].0, "expected `u v` or `u > v`"));
            }
        };
        for (v, tok) in [(edge.source, src_tok), (edge.target, tgt_tok)] {
            if v >= count {
                return Err(parse_err(lineno, tok.0, format!("vertex {v} out of range 0..{count}")));
            }
        }
        if edge.source == edge.target {
            return Err(parse_err(lineno, src_tok.0, "self-loops are not allowed"));
        }
        let key = (edge.source.min(edge.target), edge.source.max(edge.target));
        if !seen.insert(key) {
            return Err(parse_err(lineno, src_tok.0, "duplicate edge"));
        }
        edges.push(edge);
    }
    let n = n.ok_or_else(|| parse_err(text.lines().count().max(1), 1, "missing header `n <count>`"))?;
    Graph::new(n, edges)
}

/// Normalized form: header, then one edge per line in stored order.
pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for e in g.edges() {
        if e.directed {
            writeln!(out, "{} > {}", e.source, e.target).unwrap();
        } else {
            writeln!(out, "{} {}", e.source, e.target).unwrap();
        }
    }
    out
}
