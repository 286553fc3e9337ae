//! Plain-text edge lists: a header line `n m`, then `m` lines `u v` with
//! `u < v`, ASCII decimal. Writing emits edges in lexicographic order, so
//! `write_graph(parse_graph(s))` reproduces any canonical file byte-for-byte.

use std::fmt::Write as _;
use std::path::Path;

use super::{Edge, Graph};
use crate::error::{Error, Result};

pub fn write_graph(g: &Graph) -> String {
    let mut out = String::with_capacity(16 + 12 * g.edge_count());
    let _ = writeln!(out, "{} {}", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let (n, m) = parse_pair(header, 1)?;
    let mut edges: Vec<Edge> = Vec::with_capacity(m);
    for (idx, line) in lines {
        let line_no = idx + 1;
        let (u, v) = parse_pair(line, line_no)?;
        if u >= v {
            return Err(parse_err(line_no, format!("expected u < v, got {u} {v}")));
        }
        if v >= n {
            return Err(parse_err(line_no, format!("vertex {v} outside 0..{n}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(parse_err(
            1,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    let count = edges.len();
    let g = Graph::new(n, edges)?;
    if g.edge_count() != count {
        return Err(parse_err(1, "duplicate edge"));
    }
    Ok(g)
}

fn parse_pair(line: &str, line_no: usize) -> Result<(usize, usize)> {
    let mut it = line.split_ascii_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let tok = it.next().ok_or_else(|| parse_err(line_no, format!("missing {what}")))?;
        tok.parse()
            .map_err(|_| parse_err(line_no, format!("bad integer {tok:?}")))
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if it.next().is_some() {
        return Err(parse_err(line_no, "trailing fields"));
    }
    Ok((a, b))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_text() {
        let g = Graph::new(4, [(2, 3), (0, 1), (1, 2)]).unwrap();
        assert_eq!(write_graph(&g), "4 3\n0 1\n1 2\n2 3\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_graph("3 2\n0 1\n2 x\n") {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_graph("3 1\n1 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("3 2\n0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("2 1\n0 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_graph("").is_err());
    }

    proptest! {
        #[test]
        fn round_trip(n in 1usize..30, raw in prop::collection::vec((0usize..30, 0usize..30), 0..80)) {
            let edges: Vec<_> = raw.into_iter().filter(|&(u, v)| u < n && v < n && u != v).collect();
            let g = Graph::new(n, edges).unwrap();
            let text = write_graph(&g);
            let back = parse_graph(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(write_graph(&back), text);
        }
    }
}
