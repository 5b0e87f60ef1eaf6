//! Simple undirected graphs with stable vertex ids.
//!
//! Vertex deletion only clears an alive flag and unlinks the vertex from its
//! neighbors, so ids never shift. Reductions that delete a configuration and
//! later restore it can therefore keep referring to the same ids.

use std::collections::VecDeque;

use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} is out of range for a graph on {1} vertices")]
    OutOfRange(Vertex, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("parallel edge {0}-{1}")]
    ParallelEdge(Vertex, Vertex),
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    alive: Vec<bool>,
    num_alive: usize,
    num_edges: usize,
}

impl Graph {
    /// Edgeless graph on vertices `0..n`.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            alive: vec![true; n],
            num_alive: n,
            num_edges: 0,
        }
    }

    /// Builds a graph, rejecting loops and repeated edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        let n = self.adj.len();
        if u >= n {
            return Err(GraphError::OutOfRange(u, n));
        }
        if v >= n {
            return Err(GraphError::OutOfRange(v, n));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if !self.alive[u] || !self.alive[v] {
            return Err(GraphError::OutOfRange(if self.alive[u] { v } else { u }, n));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Err(GraphError::ParallelEdge(u.min(v), u.max(v))),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.num_edges += 1;
                Ok(())
            }
        }
    }

    /// Appends a fresh isolated vertex and returns its id.
    pub fn add_vertex(&mut self) -> Vertex {
        self.adj.push(Vec::new());
        self.alive.push(true);
        self.num_alive += 1;
        self.adj.len() - 1
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        if u >= self.adj.len() || v >= self.adj.len() {
            return false;
        }
        match self.adj[u].binary_search(&v) {
            Ok(pos) => {
                self.adj[u].remove(pos);
                let pos = self.adj[v].binary_search(&u).expect("adjacency is symmetric");
                self.adj[v].remove(pos);
                self.num_edges -= 1;
                true
            }
            Err(_) => false,
        }
    }

    /// Size of the id space (alive and deleted vertices).
    pub fn order(&self) -> usize {
        self.adj.len()
    }

    /// Number of alive vertices.
    pub fn num_vertices(&self) -> usize {
        self.num_alive
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn is_empty(&self) -> bool {
        self.num_alive == 0
    }

    pub fn is_alive(&self, v: Vertex) -> bool {
        self.alive.get(v).copied().unwrap_or(false)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.adj.len()).filter(move |&v| self.alive[v])
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.vertices().map(|v| self.degree(v)).min()
    }

    /// Deletes `v` and returns the neighbors it had, in ascending order.
    pub fn remove_vertex(&mut self, v: Vertex) -> Vec<Vertex> {
        assert!(self.is_alive(v), "vertex {v} is not alive");
        let nbrs = std::mem::take(&mut self.adj[v]);
        for &u in &nbrs {
            let pos = self.adj[u].binary_search(&v).expect("adjacency is symmetric");
            self.adj[u].remove(pos);
        }
        self.num_edges -= nbrs.len();
        self.alive[v] = false;
        self.num_alive -= 1;
        nbrs
    }

    /// Undoes [`Graph::remove_vertex`]; every neighbor must be alive.
    pub fn restore_vertex(&mut self, v: Vertex, nbrs: &[Vertex]) {
        assert!(!self.is_alive(v), "vertex {v} is already alive");
        self.alive[v] = true;
        self.num_alive += 1;
        for &u in nbrs {
            self.add_edge(v, u).expect("restored edge must be valid");
        }
    }

    /// Copy of `self` keeping only the vertices in `keep` (ids unchanged).
    pub fn induced(&self, keep: &[Vertex]) -> Graph {
        let mut mask = vec![false; self.order()];
        for &v in keep {
            if self.is_alive(v) {
                mask[v] = true;
            }
        }
        let adj: Vec<Vec<Vertex>> = self
            .adj
            .iter()
            .enumerate()
            .map(|(u, nbrs)| {
                if mask[u] {
                    nbrs.iter().copied().filter(|&w| mask[w]).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        let num_edges = adj.iter().map(Vec::len).sum::<usize>() / 2;
        Graph {
            adj,
            num_alive: mask.iter().filter(|&&b| b).count(),
            alive: mask,
            num_edges,
        }
    }

    /// Relabels the alive vertices to `0..num_vertices()` preserving order.
    pub fn compacted(&self) -> Graph {
        let mut index = vec![usize::MAX; self.order()];
        for (i, v) in self.vertices().enumerate() {
            index[v] = i;
        }
        Graph::from_edges(self.num_vertices(), self.edges().map(|(u, v)| (index[u], index[v])))
            .expect("relabelling preserves simplicity")
    }

    /// Connected components of the alive vertices, each sorted, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_forest(&self) -> bool {
        self.num_edges + self.components().len() == self.num_alive
    }

    /// Checks the structural invariants; used by tests and debug builds.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut degree_sum = 0;
        for (u, nbrs) in self.adj.iter().enumerate() {
            if !self.alive[u] && !nbrs.is_empty() {
                return Err(format!("deleted vertex {u} still has neighbors"));
            }
            if nbrs.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("neighbor list of {u} is not strictly sorted"));
            }
            for &v in nbrs {
                if v == u {
                    return Err(format!("self-loop at {u}"));
                }
                if !self.alive[v] {
                    return Err(format!("edge {u}-{v} reaches a deleted vertex"));
                }
                if self.adj[v].binary_search(&u).is_err() {
                    return Err(format!("edge {u}-{v} is not symmetric"));
                }
            }
            degree_sum += nbrs.len();
        }
        if degree_sum != 2 * self.num_edges {
            return Err(format!(
                "degree sum {degree_sum} differs from twice the edge count {}",
                self.num_edges
            ));
        }
        if self.alive.iter().filter(|&&b| b).count() != self.num_alive {
            return Err("alive count out of sync".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_multi_edges() {
        assert_eq!(Graph::from_edges(2, [(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert_eq!(
            Graph::from_edges(2, [(0, 1), (1, 0)]),
            Err(GraphError::ParallelEdge(0, 1))
        );
        assert_eq!(Graph::from_edges(2, [(0, 2)]), Err(GraphError::OutOfRange(2, 2)));
    }

    #[test]
    fn remove_and_restore_round_trip() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let mut h = g.clone();
        let nbrs = h.remove_vertex(2);
        assert_eq!(nbrs, vec![0, 1, 3]);
        assert_eq!(h.num_edges(), 2);
        assert_eq!(h.num_vertices(), 3);
        h.check_invariants().unwrap();
        h.restore_vertex(2, &nbrs);
        assert_eq!(h, g);
    }

    #[test]
    fn forest_detection() {
        let path = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(path.is_forest());
        let cycle = Graph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(!cycle.is_forest());
        assert!(Graph::new(0).is_forest());
    }

    #[test]
    fn induced_keeps_ids() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let h = g.induced(&[1, 2, 3]);
        assert!(!h.is_alive(0));
        assert_eq!(h.num_edges(), 2);
        assert_eq!(h.neighbors(1), &[2]);
        let c = h.compacted();
        assert_eq!(c.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }
}
