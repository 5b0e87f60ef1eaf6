//! Star colorings: verification, the forest 3-coloring, and an exact solver.
//!
//! A proper coloring is a star coloring iff no path on four vertices uses only
//! two colors. Both the verifier and the solver's pruning rely on that form.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StarError {
    #[error("vertex {0} has no color")]
    Uncolored(Vertex),
    #[error("color {color} of vertex {vertex} exceeds the palette size {palette}")]
    ColorOutOfPalette {
        vertex: Vertex,
        color: usize,
        palette: usize,
    },
    #[error("graph is not a forest")]
    NotAForest,
    #[error("at least one color is required")]
    NoColors,
    #[error("coloring line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coloring {
    /// Color per vertex id; `None` for ids without a color.
    pub colors: Vec<Option<usize>>,
    pub palette_size: usize,
}

impl Coloring {
    pub fn new(colors: Vec<Option<usize>>, palette_size: usize) -> Self {
        Coloring { colors, palette_size }
    }

    pub fn color(&self, v: Vertex) -> Option<usize> {
        self.colors.get(v).copied().flatten()
    }

    /// Number of distinct colors actually used.
    pub fn colors_used(&self) -> usize {
        let mut used: Vec<usize> = self.colors.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        used.len()
    }

    /// `vertex color` lines.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for (v, c) in self.colors.iter().enumerate() {
            if let Some(c) = c {
                let _ = writeln!(out, "{v} {c}");
            }
        }
        out
    }

    /// Parses `vertex color` lines (`#` starts a comment). The palette size is
    /// one more than the largest color seen.
    pub fn parse(text: &str) -> Result<Coloring, StarError> {
        let mut colors: Vec<Option<usize>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| StarError::Parse {
                line: idx + 1,
                message: message.to_string(),
            };
            let mut toks = line.split_whitespace();
            let v: usize = toks
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| err("expected a vertex id"))?;
            let c: usize = toks
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| err("expected a color index"))?;
            if toks.next().is_some() {
                return Err(err("expected exactly two fields"));
            }
            if colors.len() <= v {
                colors.resize(v + 1, None);
            }
            if colors[v].is_some() {
                return Err(err("vertex colored twice"));
            }
            colors[v] = Some(c);
        }
        let palette_size = colors.iter().flatten().max().map_or(0, |&c| c + 1);
        Ok(Coloring { colors, palette_size })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Adjacent vertices share a color.
    Improper { edge: (Vertex, Vertex) },
    /// A path `a-b-c-d` colored with two colors.
    BicoloredPath { path: [Vertex; 4] },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarVerdict {
    pub ok: bool,
    pub violation: Option<Violation>,
}

impl StarVerdict {
    fn from_violation(violation: Option<Violation>) -> Self {
        StarVerdict {
            ok: violation.is_none(),
            violation,
        }
    }
}

pub fn verify_star(g: &Graph, c: &Coloring) -> Result<StarVerdict, StarError> {
    for v in g.vertices() {
        let color = c.color(v).ok_or(StarError::Uncolored(v))?;
        if color >= c.palette_size {
            return Err(StarError::ColorOutOfPalette {
                vertex: v,
                color,
                palette: c.palette_size,
            });
        }
    }
    for (u, v) in g.edges() {
        if c.color(u) == c.color(v) {
            return Ok(StarVerdict::from_violation(Some(Violation::Improper { edge: (u, v) })));
        }
    }
    Ok(StarVerdict::from_violation(
        find_bicolored_p4(g, c).map(|path| Violation::BicoloredPath { path }),
    ))
}

/// Some 2-colored path `a-b-c-d`, scanning middle edges `b-c` in vertex
/// order. Assumes the coloring is proper on colored vertices; uncolored
/// vertices never take part in a path.
pub fn find_bicolored_p4(g: &Graph, c: &Coloring) -> Option<[Vertex; 4]> {
    for b in g.vertices() {
        let Some(cb) = c.color(b) else { continue };
        for &cc in g.neighbors(b) {
            let Some(ccc) = c.color(cc) else { continue };
            if ccc == cb {
                continue;
            }
            if let Some(path) = bicolored_through(g, &c.colors, b, cc) {
                return Some(path);
            }
        }
    }
    None
}

/// A 2-colored `P4` whose middle edge is `b-c`, if one exists.
fn bicolored_through(g: &Graph, colors: &[Option<usize>], b: Vertex, c: Vertex) -> Option<[Vertex; 4]> {
    let (cb, cc) = (colors[b]?, colors[c]?);
    let a = g
        .neighbors(b)
        .iter()
        .copied()
        .find(|&a| a != c && colors[a] == Some(cc))?;
    let d = g
        .neighbors(c)
        .iter()
        .copied()
        .find(|&d| d != b && colors[d] == Some(cb))?;
    Some([a, b, c, d])
}

/// Colors each tree by root distance: `(1 + depth) mod 3`, rooting every
/// component at its smallest vertex.
pub fn star_color_forest(g: &Graph) -> Result<Coloring, StarError> {
    if !g.is_forest() {
        return Err(StarError::NotAForest);
    }
    let mut colors = vec![None; g.order()];
    for root in g.vertices() {
        if colors[root].is_some() {
            continue;
        }
        let mut depth = vec![(root, 0usize)];
        colors[root] = Some(1);
        let mut queue = VecDeque::from([(root, 0usize)]);
        while let Some((u, d)) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if colors[w].is_none() {
                    colors[w] = Some((1 + d + 1) % 3);
                    queue.push_back((w, d + 1));
                    depth.push((w, d + 1));
                }
            }
        }
    }
    Ok(Coloring::new(colors, 3))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StarChromatic {
    /// The star chromatic number together with an optimal coloring.
    Exact { colors: usize, coloring: Coloring },
    /// No star coloring with at most the allowed number of colors.
    TooMany { max_colors: usize },
}

impl StarChromatic {
    pub fn value(&self) -> Option<usize> {
        match self {
            StarChromatic::Exact { colors, .. } => Some(*colors),
            StarChromatic::TooMany { .. } => None,
        }
    }
}

/// Smallest `k <= max_colors` with a star `k`-coloring.
pub fn exact_star_chromatic(g: &Graph, max_colors: usize) -> Result<StarChromatic, StarError> {
    star_chromatic_from(g, 1, max_colors)
}

/// Like [`exact_star_chromatic`] but starts at `lower`, which the caller
/// guarantees is a lower bound.
pub fn star_chromatic_from(g: &Graph, lower: usize, max_colors: usize) -> Result<StarChromatic, StarError> {
    if max_colors < 1 {
        return Err(StarError::NoColors);
    }
    for k in lower.max(1)..=max_colors {
        if let Some(coloring) = star_colorable(g, k) {
            let verdict = verify_star(g, &coloring)?;
            assert!(verdict.ok, "solver produced an invalid coloring: {verdict:?}");
            return Ok(StarChromatic::Exact { colors: k, coloring });
        }
    }
    Ok(StarChromatic::TooMany { max_colors })
}

/// A star coloring with at most `k` colors, if one exists.
///
/// Vertices are colored in a fixed order that starts at a maximum-degree
/// vertex and repeatedly takes the vertex with the most already-ordered
/// neighbors (ties: higher degree, then lower id). A vertex may only open the
/// next unused color, which removes color permutations. The first coloring
/// found is returned, so the result is deterministic.
pub fn star_colorable(g: &Graph, k: usize) -> Option<Coloring> {
    if g.is_empty() {
        return Some(Coloring::new(vec![None; g.order()], k));
    }
    if k == 0 {
        return None;
    }
    let order = solver_order(g);
    let mut colors: Vec<Option<usize>> = vec![None; g.order()];
    let mut solver = Solver {
        g,
        k,
        order: &order,
        colors: &mut colors,
    };
    if solver.search(0, 0) {
        Some(Coloring::new(colors, k))
    } else {
        None
    }
}

fn solver_order(g: &Graph) -> Vec<Vertex> {
    let n = g.order();
    let mut placed = vec![false; n];
    let mut weight = vec![0usize; n];
    let mut order = Vec::with_capacity(g.num_vertices());
    for _ in 0..g.num_vertices() {
        let next = g
            .vertices()
            .filter(|&v| !placed[v])
            .max_by(|&a, &b| (weight[a], g.degree(a)).cmp(&(weight[b], g.degree(b))).then(b.cmp(&a)))
            .unwrap();
        placed[next] = true;
        order.push(next);
        for &w in g.neighbors(next) {
            weight[w] += 1;
        }
    }
    order
}

struct Solver<'a> {
    g: &'a Graph,
    k: usize,
    order: &'a [Vertex],
    colors: &'a mut Vec<Option<usize>>,
}

impl Solver<'_> {
    fn search(&mut self, pos: usize, used: usize) -> bool {
        if pos == self.order.len() {
            return true;
        }
        let v = self.order[pos];
        let limit = (used + 1).min(self.k);
        for color in 0..limit {
            if self.g.neighbors(v).iter().any(|&w| self.colors[w] == Some(color)) {
                continue;
            }
            self.colors[v] = Some(color);
            if self.consistent(v) && self.search(pos + 1, used.max(color + 1)) {
                return true;
            }
            self.colors[v] = None;
        }
        false
    }

    /// No 2-colored `P4` through the freshly colored `v`. Every such path has
    /// its middle edge incident to `v` or to a neighbor of `v`.
    fn consistent(&self, v: Vertex) -> bool {
        let g = self.g;
        for &b in g.neighbors(v) {
            if self.colors[b].is_none() {
                continue;
            }
            if bicolored_through(g, self.colors, v, b).is_some() || bicolored_through(g, self.colors, b, v).is_some() {
                return false;
            }
            for &c in g.neighbors(b) {
                if c != v && self.colors[c] == self.colors[v] && bicolored_through(g, self.colors, b, c).is_some() {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn colors(cs: &[usize]) -> Coloring {
        Coloring::new(cs.iter().map(|&c| Some(c)).collect(), cs.iter().max().unwrap() + 1)
    }

    #[test]
    fn c5_bicolored_path() {
        let verdict = verify_star(&cycle(5), &colors(&[1, 2, 1, 2, 3])).unwrap();
        assert!(!verdict.ok);
        assert_eq!(verdict.violation, Some(Violation::BicoloredPath { path: [0, 1, 2, 3] }));
    }

    #[test]
    fn improper_edge() {
        let g = path(2);
        let verdict = verify_star(&g, &colors(&[1, 1])).unwrap();
        assert_eq!(verdict.violation, Some(Violation::Improper { edge: (0, 1) }));
    }

    #[test]
    fn uncolored_vertex_is_an_input_error() {
        let g = path(3);
        let c = Coloring::new(vec![Some(0), None, Some(0)], 2);
        assert_eq!(verify_star(&g, &c), Err(StarError::Uncolored(1)));
    }

    #[test]
    fn bicolored_search_cases() {
        assert_eq!(find_bicolored_p4(&path(4), &colors(&[1, 2, 1, 2])), Some([0, 1, 2, 3]));
        assert_eq!(find_bicolored_p4(&cycle(3), &colors(&[1, 2, 3])), None);
        assert_eq!(find_bicolored_p4(&cycle(6), &colors(&[1, 2, 3, 1, 2, 3])), None);
    }

    #[test]
    fn forest_coloring() {
        let single = star_color_forest(&Graph::new(1)).unwrap();
        assert_eq!(single.color(0), Some(1));
        let p4 = star_color_forest(&path(4)).unwrap();
        assert_eq!(p4.colors, vec![Some(1), Some(2), Some(0), Some(1)]);
        assert!(verify_star(&path(4), &p4).unwrap().ok);
        assert_eq!(star_color_forest(&cycle(3)), Err(StarError::NotAForest));
    }

    #[test]
    fn exact_small_values() {
        assert_eq!(exact_star_chromatic(&cycle(5), 5).unwrap().value(), Some(4));
        assert_eq!(exact_star_chromatic(&path(4), 5).unwrap().value(), Some(3));
        assert_eq!(exact_star_chromatic(&Graph::new(3), 5).unwrap().value(), Some(1));
        let stars = Graph::from_edges(7, [(0, 1), (0, 2), (0, 3), (4, 5), (4, 6)]).unwrap();
        assert_eq!(exact_star_chromatic(&stars, 5).unwrap().value(), Some(2));
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(exact_star_chromatic(&k4, 5).unwrap().value(), Some(4));
        assert_eq!(
            exact_star_chromatic(&k4, 3).unwrap(),
            StarChromatic::TooMany { max_colors: 3 }
        );
        assert_eq!(exact_star_chromatic(&k4, 0), Err(StarError::NoColors));
    }

    #[test]
    fn coloring_text_round_trip() {
        let c = colors(&[0, 2, 1]);
        assert_eq!(Coloring::parse(&c.to_lines()).unwrap(), c);
        assert!(Coloring::parse("0 1\n0 2\n").is_err());
    }
}
