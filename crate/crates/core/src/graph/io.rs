//! Plain-text graph format.
//!
//! ```text
//! graph m=2 vertices=3
//! # comment
//! 0 1 a
//! 1 2 b'
//! ```
//!
//! An optional `names=x,y,q1` on the header replaces the default letter names.
//! Inverse letters are stored as the positive letter with the edge reversed.

use std::collections::HashSet;

use super::{Edge, LabeledGraph};
use crate::error::{Error, Result};
use crate::word::Alphabet;

pub fn serialize_graph(g: &LabeledGraph) -> String {
    let a = g.alphabet();
    let mut out = format!("graph m={} vertices={}", a.m(), g.vertex_count());
    if !a.has_default_names() {
        out.push_str(&format!(" names={}", a.names().join(",")));
    }
    out.push('\n');
    for e in g.edges() {
        out.push_str(&format!("{} {} {}\n", e.src, e.dst, a.names()[e.label as usize]));
    }
    out
}

/// Tokens of a line with their 1-based columns, comments stripped.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in body.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((body[..s].chars().count() + 1, &body[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((body[..s].chars().count() + 1, &body[s..]));
    }
    out
}

pub fn parse_graph(text: &str) -> Result<LabeledGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, tokens(l)))
        .filter(|(_, t)| !t.is_empty());
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, 1, "empty graph file"))?;
    if header[0].1 != "graph" {
        return Err(Error::parse(hline, header[0].0, "expected `graph` header"));
    }
    let mut m = None;
    let mut n = None;
    let mut names: Option<Vec<String>> = None;
    for &(col, tok) in &header[1..] {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| Error::parse(hline, col, format!("expected key=value, got `{tok}`")))?;
        let bad = |what: &str| Error::parse(hline, col, format!("invalid {what} `{value}`"));
        match key {
            "m" => m = Some(value.parse::<usize>().map_err(|_| bad("rank"))?),
            "vertices" => n = Some(value.parse::<usize>().map_err(|_| bad("vertex count"))?),
            "names" => names = Some(value.split(',').map(str::to_owned).collect()),
            _ => return Err(Error::parse(hline, col, format!("unknown header key `{key}`"))),
        }
    }
    let n = n.ok_or_else(|| Error::parse(hline, 1, "header lacks vertices="))?;
    let alphabet = match (names, m) {
        (Some(names), m) => {
            if m.is_some_and(|m| m != names.len()) {
                return Err(Error::parse(hline, 1, "m disagrees with names"));
            }
            Alphabet::with_names(names).map_err(|e| Error::parse(hline, 1, e.to_string()))?
        }
        (None, Some(m)) => Alphabet::bouquet(m).map_err(|e| Error::parse(hline, 1, e.to_string()))?,
        (None, None) => return Err(Error::parse(hline, 1, "header lacks m=")),
    };
    let mut g = LabeledGraph::with_vertices(alphabet, n);
    let mut seen = HashSet::new();
    for (line, toks) in lines {
        if toks.len() != 3 {
            return Err(Error::parse(line, toks[0].0, "expected `src dst letter`"));
        }
        let vertex = |(col, tok): (usize, &str)| -> Result<usize> {
            let v: usize = tok
                .parse()
                .map_err(|_| Error::parse(line, col, format!("invalid vertex `{tok}`")))?;
            if v >= n {
                return Err(Error::parse(line, col, format!("vertex {v} out of range")));
            }
            Ok(v)
        };
        let src = vertex(toks[0])?;
        let dst = vertex(toks[1])?;
        let letter = g
            .alphabet()
            .parse_letter(toks[2].1)
            .ok_or_else(|| Error::parse(line, toks[2].0, format!("unknown letter `{}`", toks[2].1)))?;
        let edge = if letter.is_inverse() {
            Edge { src: dst, dst: src, label: letter.generator() }
        } else {
            Edge { src, dst, label: letter.generator() }
        };
        if !seen.insert(edge) {
            return Err(Error::parse(line, toks[0].0, "duplicate edge"));
        }
        g.add_edge(edge.src, edge.dst, edge.label);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "graph m=2 vertices=3\n# a path\n0 1 a\n2 1 b'  # comment\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.edge(1), Edge { src: 1, dst: 2, label: 1 });
        assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
    }

    #[test]
    fn custom_names() {
        let text = "graph vertices=2 names=x,y,q1\n0 1 q1\n1 0 x'\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.alphabet().m(), 3);
        assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
    }

    #[test]
    fn errors_carry_positions() {
        let dup = parse_graph("graph m=2 vertices=2\n0 1 a\n1 0 a'\n").unwrap_err();
        assert!(matches!(dup, Error::Parse { line: 3, column: 1, .. }), "{dup}");
        let bad = parse_graph("graph m=2 vertices=2\n0 1 c\n").unwrap_err();
        assert!(matches!(bad, Error::Parse { line: 2, column: 5, .. }), "{bad}");
        let range = parse_graph("graph m=2 vertices=2\n0 7 a\n").unwrap_err();
        assert!(matches!(range, Error::Parse { line: 2, column: 3, .. }), "{range}");
        assert!(parse_graph("").is_err());
        assert!(parse_graph("grph m=2 vertices=1").is_err());
    }
}
