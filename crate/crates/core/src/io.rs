//! Text formats: graph6, DIMACS edge format, and a plain edge list.
//!
//! graph6 is the interchange format shared with external enumeration tools.
//! The edge list is meant for hand-written inputs: one `u v` pair per line,
//! `#` comments, and an optional `n=<k>` header to declare isolated vertices.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Graph6,
    Dimacs,
    Edgelist,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "graph6" | "g6" => Ok(Format::Graph6),
            "dimacs" | "col" => Ok(Format::Dimacs),
            "edgelist" | "edges" | "el" => Ok(Format::Edgelist),
            other => Err(format!("unknown graph format `{other}`")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{format:?} parse error at line {line}, offset {offset}: {message}")]
pub struct ParseError {
    pub format: Format,
    /// 1-based line number.
    pub line: usize,
    /// 0-based byte offset within the line.
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    fn new(format: Format, line: usize, offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            format,
            line,
            offset,
            message: message.into(),
        }
    }

    fn from_graph(format: Format, line: usize, err: GraphError) -> Self {
        ParseError::new(format, line, 0, err.to_string())
    }
}

pub fn parse_graph(text: &str, format: Format) -> Result<Graph, ParseError> {
    match format {
        Format::Graph6 => {
            let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
            let (idx, line) = lines
                .next()
                .ok_or_else(|| ParseError::new(format, 1, 0, "empty input"))?;
            if let Some((extra, _)) = lines.next() {
                return Err(ParseError::new(
                    format,
                    extra + 1,
                    0,
                    "expected a single graph; use parse_graph6_stream for streams",
                ));
            }
            parse_graph6_line(line, idx + 1)
        }
        Format::Dimacs => parse_dimacs(text),
        Format::Edgelist => parse_edgelist(text),
    }
}

pub fn serialize_graph(g: &Graph, format: Format) -> String {
    match format {
        Format::Graph6 => to_graph6(g),
        Format::Dimacs => {
            let mut out = format!("p edge {} {}\n", g.order(), g.num_edges());
            for (u, v) in g.edges() {
                let _ = writeln!(out, "e {} {}", u + 1, v + 1);
            }
            out
        }
        Format::Edgelist => {
            let mut out = format!("n={}\n", g.order());
            for (u, v) in g.edges() {
                let _ = writeln!(out, "{u} {v}");
            }
            out
        }
    }
}

/// Guesses the format of a text blob: DIMACS if it has a `p` line, edge list
/// if the first content line holds two integers or an `n=` header, otherwise
/// graph6.
pub fn sniff_format(text: &str) -> Format {
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if t.starts_with("p ") || t.starts_with("c ") || t == "c" {
            return Format::Dimacs;
        }
        if t.starts_with("n=") || t.split_whitespace().count() >= 2 {
            return Format::Edgelist;
        }
        if t.split_whitespace().count() == 1 && t.parse::<u64>().is_ok() && t.len() > 1 {
            return Format::Edgelist;
        }
        return Format::Graph6;
    }
    Format::Edgelist
}

// ---------------------------------------------------------------------------
// graph6

const G6_HEADER: &str = ">>graph6<<";

/// One graph6 record without header or newline. Deleted ids are encoded as
/// isolated vertices.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = String::new();
    encode_size(n, &mut out);
    let mut acc = 0u8;
    let mut bits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            bits += 1;
            if bits == 6 {
                out.push((acc + 63) as char);
                acc = 0;
                bits = 0;
            }
        }
    }
    if bits > 0 {
        out.push(((acc << (6 - bits)) + 63) as char);
    }
    out
}

fn encode_size(n: usize, out: &mut String) {
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else if n <= 258_047 {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push((((n >> shift) & 0x3f) as u8 + 63) as char);
        }
    } else {
        out.push_str("~~");
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push((((n >> shift) & 0x3f) as u8 + 63) as char);
        }
    }
}

/// Parses one graph6 record; `line_no` is only used for error reporting.
pub fn parse_graph6_line(line: &str, line_no: usize) -> Result<Graph, ParseError> {
    let fmt = Format::Graph6;
    let mut s = line.trim_end_matches(['\n', '\r']);
    let mut base = 0;
    if let Some(rest) = s.strip_prefix(G6_HEADER) {
        s = rest;
        base = G6_HEADER.len();
    }
    let bytes = s.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(ParseError::new(
                fmt,
                line_no,
                base + i,
                format!("byte {b:#04x} outside the graph6 range"),
            ));
        }
    }
    let (n, header_len) = match bytes {
        [] => return Err(ParseError::new(fmt, line_no, base, "missing vertex count")),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(ParseError::new(fmt, line_no, base, "truncated vertex count"));
            }
            let n = rest[..6].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, 8)
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(ParseError::new(fmt, line_no, base, "truncated vertex count"));
            }
            let n = rest[..3].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, 4)
        }
        [b, ..] => ((b - 63) as usize, 1),
    };
    let body = &bytes[header_len..];
    let total_bits = n * n.saturating_sub(1) / 2;
    let expected = total_bits.div_ceil(6);
    if body.len() != expected {
        return Err(ParseError::new(
            fmt,
            line_no,
            base + header_len + body.len().min(expected),
            format!("expected {expected} data bytes for n={n}, found {}", body.len()),
        ));
    }
    let mut g = Graph::new(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if (byte >> (5 - k % 6)) & 1 == 1 {
                g.add_edge(i, j).map_err(|e| ParseError::from_graph(fmt, line_no, e))?;
            }
            k += 1;
        }
    }
    if total_bits % 6 != 0 {
        let last = body[expected - 1] - 63;
        let pad = 6 - total_bits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(ParseError::new(
                fmt,
                line_no,
                base + header_len + expected - 1,
                "nonzero padding bits",
            ));
        }
    }
    Ok(g)
}

/// Iterates over a newline-separated graph6 stream, skipping blank lines.
pub fn parse_graph6_stream(text: &str) -> impl Iterator<Item = Result<Graph, ParseError>> + '_ {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_graph6_line(l.trim(), i + 1))
}

// ---------------------------------------------------------------------------
// DIMACS

fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let fmt = Format::Dimacs;
    let mut graph: Option<(Graph, usize, usize)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("p") => {
                if graph.is_some() {
                    return Err(ParseError::new(fmt, line_no, 0, "duplicate problem line"));
                }
                let kind = toks.next();
                if !matches!(kind, Some("edge") | Some("col")) {
                    return Err(ParseError::new(fmt, line_no, 2, "expected `p edge <n> <m>`"));
                }
                let n = parse_token::<usize>(toks.next(), fmt, line_no, raw)?;
                let m = parse_token::<usize>(toks.next(), fmt, line_no, raw)?;
                graph = Some((Graph::new(n), m, line_no));
            }
            Some("e") => {
                let (g, _, _) = graph
                    .as_mut()
                    .ok_or_else(|| ParseError::new(fmt, line_no, 0, "edge before problem line"))?;
                let u = parse_token::<usize>(toks.next(), fmt, line_no, raw)?;
                let v = parse_token::<usize>(toks.next(), fmt, line_no, raw)?;
                if u == 0 || v == 0 {
                    return Err(ParseError::new(fmt, line_no, 0, "DIMACS vertices are 1-based"));
                }
                g.add_edge(u - 1, v - 1)
                    .map_err(|e| ParseError::from_graph(fmt, line_no, e))?;
            }
            Some(tok) => {
                return Err(ParseError::new(
                    fmt,
                    line_no,
                    offset_of(raw, tok),
                    format!("unexpected line type `{tok}`"),
                ))
            }
            None => {}
        }
    }
    let (g, m, line_no) = graph.ok_or_else(|| ParseError::new(fmt, 1, 0, "missing `p edge` line"))?;
    if g.num_edges() != m {
        return Err(ParseError::new(
            fmt,
            line_no,
            0,
            format!("header declares {m} edges but {} were listed", g.num_edges()),
        ));
    }
    Ok(g)
}

// ---------------------------------------------------------------------------
// edge list

fn parse_edgelist(text: &str) -> Result<Graph, ParseError> {
    let fmt = Format::Edgelist;
    let mut declared: Option<usize> = None;
    let mut edges: Vec<(Vertex, Vertex, usize)> = Vec::new();
    let mut max_id: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("n=") {
            if declared.is_some() || !edges.is_empty() {
                return Err(ParseError::new(
                    fmt,
                    line_no,
                    0,
                    "`n=` header must come before any edge",
                ));
            }
            declared = Some(parse_token::<usize>(Some(rest.trim()), fmt, line_no, raw)?);
            continue;
        }
        let mut toks = line.split_whitespace();
        let u = parse_token::<usize>(toks.next(), fmt, line_no, raw)?;
        let v = parse_token::<usize>(toks.next(), fmt, line_no, raw)?;
        if let Some(extra) = toks.next() {
            return Err(ParseError::new(
                fmt,
                line_no,
                offset_of(raw, extra),
                "expected exactly two vertex ids",
            ));
        }
        max_id = Some(max_id.unwrap_or(0).max(u).max(v));
        edges.push((u, v, line_no));
    }
    let n = match (declared, max_id) {
        (Some(n), Some(m)) if m >= n => {
            let line = edges.iter().find(|e| e.0 >= n || e.1 >= n).map_or(1, |e| e.2);
            return Err(ParseError::new(
                fmt,
                line,
                0,
                format!("vertex {m} exceeds declared n={n}"),
            ));
        }
        (Some(n), _) => n,
        (None, Some(m)) => m + 1,
        (None, None) => 0,
    };
    let mut g = Graph::new(n);
    for (u, v, line_no) in edges {
        g.add_edge(u, v).map_err(|e| ParseError::from_graph(fmt, line_no, e))?;
    }
    Ok(g)
}

fn parse_token<T: FromStr>(tok: Option<&str>, fmt: Format, line_no: usize, raw: &str) -> Result<T, ParseError> {
    let tok = tok.ok_or_else(|| ParseError::new(fmt, line_no, raw.len(), "missing field"))?;
    tok.parse::<T>().map_err(|_| {
        ParseError::new(
            fmt,
            line_no,
            offset_of(raw, tok),
            format!("`{tok}` is not a nonnegative integer"),
        )
    })
}

fn offset_of(line: &str, tok: &str) -> usize {
    (tok.as_ptr() as usize).saturating_sub(line.as_ptr() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edgelist_path() {
        let g = parse_graph("0 1\n1 2", Format::Edgelist).unwrap();
        let degrees: Vec<_> = g.vertices().map(|v| g.degree(v)).collect();
        assert_eq!(degrees, vec![1, 2, 1]);
    }

    #[test]
    fn dimacs_cycle_matches_edgelist() {
        let text = "c five cycle\np edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n";
        let g = parse_graph(text, Format::Dimacs).unwrap();
        assert!(g.vertices().all(|v| g.degree(v) == 2));
        let h = parse_graph("0 1\n1 2\n2 3\n3 4\n4 0\n", Format::Edgelist).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn graph6_round_trip_bytes() {
        for s in ["D~{", "Dhc", "@", "?", "A_", "I?h]@eOWG"] {
            let g = parse_graph(s, Format::Graph6).unwrap();
            assert_eq!(serialize_graph(&g, Format::Graph6), s);
        }
    }

    #[test]
    fn graph6_known_encodings() {
        // C5 as 0-1-2-3-4-0.
        let c5 = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        assert_eq!(serialize_graph(&c5, Format::Graph6), "Dhc");
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(serialize_graph(&k4, Format::Graph6), "C~");
    }

    #[test]
    fn graph6_large_header() {
        let mut g = Graph::new(100);
        g.add_edge(0, 99).unwrap();
        let s = serialize_graph(&g, Format::Graph6);
        assert!(s.starts_with('~'));
        assert_eq!(parse_graph(&s, Format::Graph6).unwrap(), g);
    }

    #[test]
    fn empty_edgelist_has_header() {
        assert_eq!(serialize_graph(&Graph::new(0), Format::Edgelist), "n=0\n");
        let g = parse_graph("n=3\n", Format::Edgelist).unwrap();
        assert_eq!(g.num_vertices(), 3);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_graph("0 1\n1 x\n", Format::Edgelist).unwrap_err();
        assert_eq!((err.line, err.offset), (2, 2));
        let err = parse_graph("0 1\n1 0\n", Format::Edgelist).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("parallel"));
        let err = parse_graph("2 2\n", Format::Edgelist).unwrap_err();
        assert!(err.message.contains("self-loop"));
        let err = parse_graph("D~", Format::Graph6).unwrap_err();
        assert!(err.message.contains("data bytes"));
        let err = parse_graph("p edge 3 2\ne 1 2\n", Format::Dimacs).unwrap_err();
        assert!(err.message.contains("declares"));
    }

    #[test]
    fn sniffing() {
        assert_eq!(sniff_format("p edge 3 0\n"), Format::Dimacs);
        assert_eq!(sniff_format("0 1\n"), Format::Edgelist);
        assert_eq!(sniff_format("n=4\n"), Format::Edgelist);
        assert_eq!(sniff_format("Dhc\n"), Format::Graph6);
    }
}
