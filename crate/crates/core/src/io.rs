//! Text and JSON graph formats.
//!
//! Edge list: a header line `n m`, then `m` lines `i j` with 0-indexed
//! endpoints and `i < j`. Blank lines and `#` comments are skipped.
//! JSON mirror: `{"n": 4, "edges": [[0, 1], [1, 2]]}`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        Self { n: g.n(), edges: g.edges().map(|(i, j)| [i, j]).collect() }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Graph> {
        let mut g = Graph::empty(j.n)?;
        for [a, b] in j.edges {
            if a >= b {
                return Err(Error::InvalidGraph(format!("edge [{a}, {b}] must satisfy i < j")));
            }
            g.try_add_edge(a, b)?;
        }
        Ok(g)
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn two_numbers(line: usize, text: &str) -> Result<(usize, usize)> {
    let mut it = text.split_whitespace();
    let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
        return Err(parse_err(line, format!("expected two integers, got {text:?}")));
    };
    let num = |s: &str| s.parse::<usize>().map_err(|e| parse_err(line, format!("{s:?}: {e}")));
    Ok((num(a)?, num(b)?))
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header `n m`"))?;
    let (n, m) = two_numbers(hline, header)?;
    let mut g = Graph::empty(n).map_err(|e| parse_err(hline, e.to_string()))?;
    let mut seen = 0;
    for (line, text) in lines {
        if seen == m {
            return Err(parse_err(line, format!("more than the declared {m} edges")));
        }
        let (i, j) = two_numbers(line, text)?;
        if i >= j {
            return Err(parse_err(line, format!("edge ({i}, {j}) must satisfy i < j")));
        }
        g.try_add_edge(i, j).map_err(|e| parse_err(line, e.to_string()))?;
        seen += 1;
    }
    if seen != m {
        return Err(parse_err(hline, format!("header declares {m} edges, found {seen}")));
    }
    Ok(g)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (i, j) in g.edges() {
        let _ = writeln!(out, "{i} {j}");
    }
    out
}

pub fn parse_graph_json(text: &str) -> Result<Graph> {
    let j: GraphJson = serde_json::from_str(text)?;
    Graph::try_from(j)
}

/// Parses either format, choosing JSON when the first non-blank character is `{`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        parse_graph_json(text)
    } else {
        parse_edge_list(text)
    }
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    parse_graph(&std::fs::read_to_string(path)?)
}
