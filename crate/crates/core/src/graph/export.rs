//! Plain-text edge-list format for graph exports.
//!
//! ```text
//! satgraph <num_nodes> <num_edges>
//! kinds <one character per node: l|c|p>
//! <u> <v> <color tag>
//! ```
//!
//! Edges are written in normalized sorted order, so the output is
//! deterministic and usable in golden-file tests.

use thiserror::Error;

use super::types::{EdgeColor, NodeKind, SatGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphFormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("graph is structurally invalid: {0}")]
    Invalid(String),
}

fn malformed(line: usize, message: impl Into<String>) -> GraphFormatError {
    GraphFormatError::Malformed {
        line,
        message: message.into(),
    }
}

/// Serializes a graph in the edge-list format.
pub fn write_graph(g: &SatGraph) -> String {
    let mut out = format!("satgraph {} {}\n", g.num_nodes(), g.num_edges());
    out.push_str("kinds ");
    for kind in g.kinds() {
        out.push(kind.tag());
    }
    out.push('\n');
    for &(u, v, color) in g.edges() {
        out.push_str(&format!("{u} {v} {}\n", color.tag()));
    }
    out
}

/// Parses the edge-list format back into a graph.
pub fn parse_graph(text: &str) -> Result<SatGraph, GraphFormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());

    let (line_no, header) = lines.next().ok_or_else(|| malformed(1, "missing header"))?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some("satgraph") {
        return Err(malformed(
            line_no + 1,
            "expected `satgraph <nodes> <edges>`",
        ));
    }
    let num_nodes: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| malformed(line_no + 1, "bad node count"))?;
    let num_edges: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| malformed(line_no + 1, "bad edge count"))?;

    let (line_no, kinds_line) = lines
        .next()
        .ok_or_else(|| malformed(line_no + 2, "missing kinds line"))?;
    let kinds_str = kinds_line
        .strip_prefix("kinds ")
        .ok_or_else(|| malformed(line_no + 1, "expected `kinds <tags>`"))?;
    let kinds: Vec<NodeKind> = kinds_str
        .trim()
        .chars()
        .map(|c| {
            NodeKind::from_tag(c)
                .ok_or_else(|| malformed(line_no + 1, format!("unknown node kind {c:?}")))
        })
        .collect::<Result<_, _>>()?;
    if kinds.len() != num_nodes {
        return Err(malformed(
            line_no + 1,
            format!(
                "header declares {num_nodes} nodes, kinds line has {}",
                kinds.len()
            ),
        ));
    }

    let mut edges = Vec::with_capacity(num_edges);
    for (line_no, line) in lines {
        let mut parts = line.split_whitespace();
        let u: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| malformed(line_no + 1, "bad edge endpoint"))?;
        let v: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| malformed(line_no + 1, "bad edge endpoint"))?;
        let tag = parts
            .next()
            .ok_or_else(|| malformed(line_no + 1, "missing edge color tag"))?;
        let color = EdgeColor::from_tag(tag)
            .ok_or_else(|| malformed(line_no + 1, format!("unknown edge color {tag:?}")))?;
        if parts.next().is_some() {
            return Err(malformed(line_no + 1, "trailing tokens on edge line"));
        }
        edges.push((u, v, color));
    }
    if edges.len() != num_edges {
        return Err(GraphFormatError::Invalid(format!(
            "header declares {num_edges} edges, found {}",
            edges.len()
        )));
    }
    SatGraph::new(kinds, edges).map_err(|e| GraphFormatError::Invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::graph::build_lcn;

    #[test]
    fn round_trip_preserves_graph() {
        let g = build_lcn(&corpus::xor_triangle());
        let text = write_graph(&g);
        let back = parse_graph(&text).unwrap();
        assert_eq!(back, g);
        // Writing again is byte-identical.
        assert_eq!(write_graph(&back), text);
    }

    #[test]
    fn golden_bytes_for_a_small_instance() {
        use crate::cnf::{Clause, CnfFormula};
        let f = CnfFormula::new(
            2,
            vec![
                Clause::from_dimacs(&[1, 2]).unwrap(),
                Clause::from_dimacs(&[-1]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(
            write_graph(&build_lcn(&f)),
            "satgraph 6 5\n\
             kinds llllcc\n\
             0 1 ll\n\
             0 4 lc\n\
             1 5 lc\n\
             2 3 ll\n\
             2 4 lc\n"
        );
    }

    #[test]
    fn header_mismatch_is_reported() {
        let err = parse_graph("satgraph 2 1\nkinds pp\n").unwrap_err();
        assert!(matches!(err, GraphFormatError::Invalid(_)));
    }

    #[test]
    fn unknown_tag_is_reported() {
        let err = parse_graph("satgraph 2 1\nkinds pp\n0 1 zz\n").unwrap_err();
        assert!(matches!(err, GraphFormatError::Malformed { line: 3, .. }));
    }
}
