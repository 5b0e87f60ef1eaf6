//! Breadth-first queries: distances, girth, shortest cycles.
//!
//! `None` stands for an infinite distance or girth throughout.

use std::collections::VecDeque;

use crate::graph::{Graph, Vertex};

/// BFS distances from `source`, stopping at depth `limit` when given.
pub fn bfs_distances(g: &Graph, source: Vertex, limit: Option<usize>) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.order()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        if limit.is_some_and(|l| du >= l) {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

pub fn distance(g: &Graph, u: Vertex, v: Vertex) -> Option<usize> {
    if u == v {
        return Some(0);
    }
    bfs_distances(g, u, None)[v]
}

/// Length of a shortest cycle, or `None` for forests.
pub fn girth(g: &Graph) -> Option<usize> {
    shortest_cycle(g).map(|c| c.len())
}

/// Vertices of one shortest cycle, in cyclic order.
///
/// Runs a BFS from every vertex; a non-tree edge `xy` found from root `r`
/// closes a closed walk of length `d(x) + d(y) + 1`, and the minimum over all
/// roots is the girth (the walk is a genuine cycle when minimal).
pub fn shortest_cycle(g: &Graph) -> Option<Vec<Vertex>> {
    let n = g.order();
    let mut best: Option<(usize, Vertex, Vertex, Vertex)> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut touched = Vec::new();
    for root in g.vertices() {
        if g.degree(root) < 2 {
            continue;
        }
        for &t in &touched {
            dist[t] = usize::MAX;
            parent[t] = usize::MAX;
        }
        touched.clear();
        dist[root] = 0;
        touched.push(root);
        let mut queue = VecDeque::from([root]);
        'bfs: while let Some(u) = queue.pop_front() {
            if let Some((len, ..)) = best {
                if 2 * dist[u] + 1 >= len {
                    break;
                }
            }
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    if best.is_none_or(|(b, ..)| len < b) {
                        best = Some((len, root, u, w));
                    }
                    if dist[w] <= dist[u] {
                        break 'bfs;
                    }
                }
            }
        }
    }
    let (_, root, x, y) = best?;
    // Rebuild the two root paths with a fresh BFS from the winning root.
    let (dist, parent) = bfs_tree(g, root);
    debug_assert!(dist[x].is_some() && dist[y].is_some());
    let path_to = |mut v: Vertex| {
        let mut p = vec![v];
        while v != root {
            v = parent[v];
            p.push(v);
        }
        p
    };
    let px = path_to(x);
    let mut py = path_to(y);
    // Walk from x up to the root and back down to y. The tree paths may
    // share a prefix when the BFS tree differs from the first pass.
    let mut cycle: Vec<Vertex> = px;
    cycle.pop();
    py.reverse();
    cycle.extend(py);
    let cycle = trim_to_simple_cycle(g, cycle);
    Some(cycle)
}

fn bfs_tree(g: &Graph, root: Vertex) -> (Vec<Option<usize>>, Vec<Vertex>) {
    let mut dist = vec![None; g.order()];
    let mut parent = vec![usize::MAX; g.order()];
    dist[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(dist[u].unwrap() + 1);
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    (dist, parent)
}

/// Turns a closed walk `c[0] .. c[k-1] (c[0])` into a simple cycle by
/// cutting out repeated vertices. For a minimum-length walk this is a no-op.
fn trim_to_simple_cycle(g: &Graph, walk: Vec<Vertex>) -> Vec<Vertex> {
    let mut pos = std::collections::HashMap::new();
    for (i, &v) in walk.iter().enumerate() {
        if let Some(&j) = pos.get(&v) {
            let inner: Vec<Vertex> = walk[j..i].to_vec();
            if inner.len() >= 3 {
                return trim_to_simple_cycle(g, inner);
            }
            let mut rest = walk[..j].to_vec();
            rest.extend_from_slice(&walk[i..]);
            return trim_to_simple_cycle(g, rest);
        }
        pos.insert(v, i);
    }
    debug_assert!(walk.len() >= 3);
    debug_assert!((0..walk.len()).all(|i| g.has_edge(walk[i], walk[(i + 1) % walk.len()])));
    walk
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn girth_of_cycles_and_trees() {
        for n in 3..10 {
            assert_eq!(girth(&cycle(n)), Some(n));
            let c = shortest_cycle(&cycle(n)).unwrap();
            assert_eq!(c.len(), n);
        }
        let tree = Graph::from_edges(5, [(0, 1), (0, 2), (2, 3), (2, 4)]).unwrap();
        assert_eq!(girth(&tree), None);
        assert_eq!(girth(&Graph::new(0)), None);
    }

    #[test]
    fn girth_picks_shortest() {
        // A 6-cycle with a chord making a 4-cycle.
        let mut g = cycle(6);
        g.add_edge(0, 3).unwrap();
        assert_eq!(girth(&g), Some(4));
        let c = shortest_cycle(&g).unwrap();
        assert_eq!(c.len(), 4);
        for i in 0..4 {
            assert!(g.has_edge(c[i], c[(i + 1) % 4]));
        }
    }

    #[test]
    fn distances() {
        let p4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(distance(&p4, 2, 2), Some(0));
        assert_eq!(distance(&p4, 0, 3), Some(3));
        let c6 = cycle(6);
        assert_eq!(distance(&c6, 0, 3), Some(3));
        let two = Graph::new(2);
        assert_eq!(distance(&two, 0, 1), None);
        assert_eq!(bfs_distances(&p4, 0, Some(1))[2], None);
    }
}
