//! Edge-list text format ("u v" per line) and DOT export.

use std::fmt::Write as _;

use crate::error::{Error, Result};

use super::{BranchDecomposition, GraphView};

const PALETTE: [&str; 8] = ["lightblue", "palegreen", "lightsalmon", "plum", "khaki", "lightpink", "lightcyan", "wheat"];

/// Parses "u v" lines. Blank lines and lines starting with `#` are skipped.
/// The vertex count is `n` if given, otherwise one more than the largest label.
pub fn parse_edge_list(text: &str, n: Option<usize>) -> Result<GraphView> {
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace().map(str::parse::<usize>);
        match (parts.next(), parts.next(), parts.next()) {
            (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
            _ => return Err(Error::Parse(format!("line {}: expected \"u v\", got {line:?}", lineno + 1))),
        }
    }
    let n = n.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    GraphView::from_edges(n, edges)
}

pub fn to_edge_list(g: &GraphView) -> String {
    g.edges().fold(String::new(), |mut s, (u, v)| {
        let _ = writeln!(s, "{u} {v}");
        s
    })
}

/// DOT source for `g`; branch sets, if given, become filled clusters.
pub fn to_dot(g: &GraphView, witness: Option<&BranchDecomposition>) -> String {
    let mut s = String::from("graph G {\n  node [style=filled, fillcolor=white];\n");
    if let Some(w) = witness {
        for (i, set) in w.sets.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let _ = writeln!(s, "  subgraph cluster_{i} {{\n    label=\"B{i}\";\n    style=filled;\n    color={color};");
            for v in set {
                let _ = writeln!(s, "    {v} [fillcolor={color}];");
            }
            s.push_str("  }\n");
        }
    }
    for v in 0..g.n() {
        let _ = writeln!(s, "  {v};");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(s, "  {u} -- {v};");
    }
    s.push_str("}\n");
    s
}
