//! Plain-text graph and packing formats.
//!
//! Graph: header `n m [ell]`, then `m` lines `u v` (0-indexed).
//! Packing: one cycle per line as space-separated vertex ids.
//! In both formats blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use thiserror::Error;

use crate::cycles::{Cycle, CyclePacking};
use crate::graph::{Graph, GraphBuilder, GraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("missing header line")]
    MissingHeader,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("header announces {expected} edges but {found} were listed")]
    EdgeCount { expected: usize, found: usize },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_numbers(line: usize, text: &str) -> Result<Vec<usize>, FormatError> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| FormatError::Parse { line, message: format!("expected a non-negative integer, got {tok:?}") })
        })
        .collect()
}

/// Graph text with optional `#` comment lines before the header.
pub fn write_graph(g: &Graph, ell: Option<usize>, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    match ell {
        Some(l) => {
            let _ = writeln!(out, "{} {} {}", g.n(), g.edge_count(), l);
        }
        None => {
            let _ = writeln!(out, "{} {}", g.n(), g.edge_count());
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Parses the graph format; returns the graph and the optional `ell` field.
pub fn read_graph(text: &str) -> Result<(Graph, Option<usize>), FormatError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(FormatError::MissingHeader)?;
    let fields = parse_numbers(hline, header)?;
    let (n, m, ell) = match fields.as_slice() {
        [n, m] => (*n, *m, None),
        [n, m, l] => (*n, *m, Some(*l)),
        _ => {
            return Err(FormatError::Parse { line: hline, message: "header must be `n m` or `n m ell`".into() })
        }
    };
    let mut b = GraphBuilder::new(n);
    let mut found = 0;
    for (line, text) in lines {
        let pair = parse_numbers(line, text)?;
        let [u, v] = pair.as_slice() else {
            return Err(FormatError::Parse { line, message: "edge lines hold exactly two ids".into() });
        };
        b.add_edge(*u, *v).map_err(|source| FormatError::Graph { line, source })?;
        found += 1;
    }
    if found != m {
        return Err(FormatError::EdgeCount { expected: m, found });
    }
    Ok((b.build(), ell))
}

pub fn write_packing(p: &CyclePacking, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    for c in &p.cycles {
        let ids: Vec<String> = c.vertices().iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", ids.join(" "));
    }
    out
}

/// Parses a packing. Cycles are taken as written; use
/// [`crate::cycles::verify_packing`] to validate them against a graph.
pub fn read_packing(text: &str, ell: usize) -> Result<CyclePacking, FormatError> {
    let mut cycles = Vec::new();
    for (line, text) in content_lines(text) {
        cycles.push(Cycle::from_raw(parse_numbers(line, text)?));
    }
    Ok(CyclePacking::with_cycles(ell, cycles))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let g = Graph::petersen();
        let text = write_graph(&g, Some(5), &["petersen".to_string()]);
        assert!(text.starts_with("# petersen\n10 15 5\n"));
        let (back, ell) = read_graph(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(ell, Some(5));
        let (back, ell) = read_graph(&write_graph(&Graph::empty(3), None, &[])).unwrap();
        assert_eq!((back.n(), back.edge_count(), ell), (3, 0, None));
    }

    #[test]
    fn graph_errors_name_the_line() {
        assert_eq!(read_graph("# only a comment\n"), Err(FormatError::MissingHeader));
        assert_eq!(read_graph("3 2\n0 1\n"), Err(FormatError::EdgeCount { expected: 2, found: 1 }));
        assert!(matches!(read_graph("3 1\n0 7\n"), Err(FormatError::Graph { line: 2, .. })));
        assert!(matches!(read_graph("3 1\n0 x\n"), Err(FormatError::Parse { line: 2, .. })));
    }

    #[test]
    fn packing_round_trip() {
        let p = CyclePacking::with_cycles(3, vec![Cycle::from_raw(vec![0, 1, 2]), Cycle::from_raw(vec![3, 5, 4])]);
        let text = write_packing(&p, &[]);
        assert_eq!(text, "0 1 2\n3 5 4\n");
        assert_eq!(read_packing(&text, 3).unwrap(), p);
        assert!(read_packing("", 3).unwrap().is_empty());
    }
}
