//! Threads and thread-signature vertex profiles.
//!
//! A k-thread is a path with k internal vertices of degree 2. Tracing from a
//! vertex `v` through a neighbor walks along degree-2 vertices until it hits a
//! vertex whose degree is not 2, or comes back to `v` (a cycle). The thread
//! signature of `v` lists the number of internal vertices seen in each
//! direction, sorted ascending; a degree-3 vertex with signature `[0, 1, 2]`
//! is written `3_{0,1,2}`.

use std::fmt;

use serde::Serialize;

use crate::graph::{Graph, Vertex};

/// One direction out of a vertex: the first neighbor, the degree-2 vertices
/// passed through, and where the walk stopped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub first: Vertex,
    pub internals: Vec<Vertex>,
    pub end: Vertex,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.internals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.internals.is_empty()
    }
}

/// Follows degree-2 vertices from `start` through `first`.
pub fn trace(g: &Graph, start: Vertex, first: Vertex) -> Trace {
    let mut internals = Vec::new();
    let mut prev = start;
    let mut cur = first;
    while cur != start && g.degree(cur) == 2 {
        internals.push(cur);
        let nbrs = g.neighbors(cur);
        let next = if nbrs[0] == prev { nbrs[1] } else { nbrs[0] };
        prev = cur;
        cur = next;
    }
    Trace {
        first,
        internals,
        end: cur,
    }
}

/// Traces in every direction out of `v`, in neighbor order.
pub fn traces(g: &Graph, v: Vertex) -> Vec<Trace> {
    g.neighbors(v).iter().map(|&u| trace(g, v, u)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexProfile {
    pub vertex: Vertex,
    pub degree: usize,
    /// Thread lengths, sorted ascending; one entry per incident edge.
    pub signature: Vec<usize>,
}

impl VertexProfile {
    /// Whether this vertex is a `k_{pattern}`-vertex.
    ///
    /// Threads may be cut short, so a vertex starting a longer thread also
    /// starts every shorter one: the test is degree equality plus entrywise
    /// domination of the sorted pattern by the sorted signature.
    pub fn is(&self, k: usize, pattern: &[usize]) -> bool {
        self.degree == k && dominates(&self.signature, pattern)
    }

    /// Number of directions whose thread has at least `len` internal vertices.
    pub fn threads_at_least(&self, len: usize) -> usize {
        self.signature.iter().filter(|&&l| l >= len).count()
    }
}

impl fmt::Display for VertexProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.degree)?;
        if !self.signature.is_empty() {
            let parts: Vec<String> = self.signature.iter().map(|l| l.to_string()).collect();
            write!(f, "_{{{}}}", parts.join(","))?;
        }
        Ok(())
    }
}

/// Sorted `actual` dominates sorted `pattern` entrywise (equal lengths).
pub fn dominates(actual: &[usize], pattern: &[usize]) -> bool {
    actual.len() == pattern.len() && actual.iter().zip(pattern).all(|(a, p)| a >= p)
}

/// Pattern `[zeros x 0, ones x 1, twos x 2]` for the parametrised families.
pub fn pattern(zeros: usize, ones: usize, twos: usize) -> Vec<usize> {
    let mut p = vec![0; zeros];
    p.extend(std::iter::repeat_n(1, ones));
    p.extend(std::iter::repeat_n(2, twos));
    p
}

pub fn classify_vertex(g: &Graph, v: Vertex) -> VertexProfile {
    let mut signature: Vec<usize> = traces(g, v).iter().map(Trace::len).collect();
    signature.sort_unstable();
    VertexProfile {
        vertex: v,
        degree: g.degree(v),
        signature,
    }
}

/// Profiles for every id; deleted vertices get an empty profile.
pub fn profiles(g: &Graph) -> Vec<VertexProfile> {
    (0..g.order())
        .map(|v| {
            if g.is_alive(v) {
                classify_vertex(g, v)
            } else {
                VertexProfile {
                    vertex: v,
                    degree: 0,
                    signature: Vec::new(),
                }
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Thread {
    pub ends: (Vertex, Vertex),
    pub internals: Vec<Vertex>,
    /// Set for a component that is a bare cycle: both ends are the same
    /// degree-2 vertex and the internals are the rest of the cycle.
    pub cycle: bool,
}

/// All maximal threads, each listed once.
pub fn enumerate_threads(g: &Graph) -> Vec<Thread> {
    let mut out = Vec::new();
    let mut on_cycle_component = vec![false; g.order()];
    for comp in g.components() {
        if comp.len() >= 3 && comp.iter().all(|&v| g.degree(v) == 2) {
            let start = comp[0];
            let t = trace(g, start, g.neighbors(start)[0]);
            for &v in &comp {
                on_cycle_component[v] = true;
            }
            out.push(Thread {
                ends: (start, start),
                internals: t.internals,
                cycle: true,
            });
        }
    }
    for v in g.vertices() {
        if g.degree(v) == 2 || on_cycle_component[v] {
            continue;
        }
        for t in traces(g, v) {
            let last_step = *t.internals.last().unwrap_or(&v);
            // Keep one orientation of each thread.
            if (v, t.first) <= (t.end, last_step) {
                out.push(Thread {
                    ends: (v, t.end),
                    internals: t.internals,
                    cycle: false,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn isolated_four_cycle() {
        let g = cycle(4);
        for v in 0..4 {
            let p = classify_vertex(&g, v);
            assert_eq!(p.signature, vec![3, 3]);
            assert_eq!(p.to_string(), "2_{3,3}");
        }
    }

    #[test]
    fn spider_and_zero_threads() {
        // Center 0 with legs 0-1-2, 0-3-4, 0-5-6.
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
        assert_eq!(classify_vertex(&g, 0).to_string(), "3_{1,1,1}");
        // K5 minus nothing: every vertex has degree 4 with 0-threads.
        let k5 = Graph::from_edges(5, (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j)))).unwrap();
        assert_eq!(classify_vertex(&k5, 0).to_string(), "4_{0,0,0,0}");
        assert_eq!(classify_vertex(&Graph::new(1), 0).signature, Vec::<usize>::new());
    }

    #[test]
    fn domination_semantics() {
        let p = VertexProfile {
            vertex: 0,
            degree: 3,
            signature: vec![0, 2, 2],
        };
        assert!(p.is(3, &[0, 1, 1]));
        assert!(p.is(3, &[0, 1, 2]));
        assert!(p.is(3, &[0, 2, 2]));
        assert!(!p.is(3, &[1, 1, 1]));
        assert!(!p.is(4, &[0, 1, 1, 1]));
        assert_eq!(pattern(1, 1, 3), vec![0, 1, 2, 2, 2]);
    }

    #[test]
    fn path_threads() {
        let p4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let ts = enumerate_threads(&p4);
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].ends, (0, 3));
        assert_eq!(ts[0].internals, vec![1, 2]);
    }

    #[test]
    fn cycle_with_pendant() {
        // C5 on 0..4 with pendant 0-5.
        let mut g = cycle(5);
        let leaf = g.add_vertex();
        g.add_edge(0, leaf).unwrap();
        let mut ts = enumerate_threads(&g);
        ts.sort_by_key(|t| t.internals.len());
        assert_eq!(ts.len(), 2);
        assert_eq!(ts[0].ends, (0, 5));
        assert!(ts[0].internals.is_empty());
        assert_eq!(ts[1].ends, (0, 0));
        assert_eq!(ts[1].internals.len(), 4);
        assert!(!ts[1].cycle);
    }

    #[test]
    fn cubic_graph_has_only_zero_threads() {
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let ts = enumerate_threads(&k4);
        assert_eq!(ts.len(), 6);
        assert!(ts.iter().all(|t| t.internals.is_empty()));
    }

    #[test]
    fn bare_cycle_flagged() {
        let ts = enumerate_threads(&cycle(6));
        assert_eq!(ts.len(), 1);
        assert!(ts[0].cycle);
        assert_eq!(ts[0].ends, (0, 0));
        assert_eq!(ts[0].internals.len(), 5);
    }
}
