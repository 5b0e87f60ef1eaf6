//! Dinic max-flow on small dense-ish networks, used by the densest-subgraph
//! feasibility test.

use std::collections::VecDeque;

#[derive(Clone, Debug)]
struct Arc {
    to: usize,
    cap: i128,
}

#[derive(Clone, Debug)]
pub(crate) struct FlowNetwork {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
        }
    }

    /// Adds `u -> v` with capacity `cap` and `v -> u` with capacity `rev_cap`.
    pub fn add_edge(&mut self, u: usize, v: usize, cap: i128, rev_cap: i128) {
        debug_assert!(cap >= 0 && rev_cap >= 0);
        self.out[u].push(self.arcs.len());
        self.arcs.push(Arc { to: v, cap });
        self.out[v].push(self.arcs.len());
        self.arcs.push(Arc { to: u, cap: rev_cap });
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> i128 {
        let n = self.out.len();
        let mut total = 0;
        let mut level = vec![usize::MAX; n];
        let mut iter = vec![0usize; n];
        loop {
            level.iter_mut().for_each(|l| *l = usize::MAX);
            level[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &a in &self.out[u] {
                    let arc = &self.arcs[a];
                    if arc.cap > 0 && level[arc.to] == usize::MAX {
                        level[arc.to] = level[u] + 1;
                        queue.push_back(arc.to);
                    }
                }
            }
            if level[t] == usize::MAX {
                return total;
            }
            iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let pushed = self.augment(s, t, i128::MAX, &level, &mut iter);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn augment(&mut self, u: usize, t: usize, limit: i128, level: &[usize], iter: &mut [usize]) -> i128 {
        if u == t {
            return limit;
        }
        while iter[u] < self.out[u].len() {
            let a = self.out[u][iter[u]];
            let (to, cap) = (self.arcs[a].to, self.arcs[a].cap);
            if cap > 0 && level[to] == level[u] + 1 {
                let pushed = self.augment(to, t, limit.min(cap), level, iter);
                if pushed > 0 {
                    self.arcs[a].cap -= pushed;
                    self.arcs[a ^ 1].cap += pushed;
                    return pushed;
                }
            }
            iter[u] += 1;
        }
        0
    }

    /// Nodes reachable from `s` in the residual network (the minimal
    /// source side of a minimum cut after `max_flow`).
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &a in &self.out[u] {
                let arc = &self.arcs[a];
                if arc.cap > 0 && !seen[arc.to] {
                    seen[arc.to] = true;
                    stack.push(arc.to);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_network() {
        // Six-node textbook network with max flow 23.
        let mut f = FlowNetwork::new(6);
        for (u, v, c) in [
            (0, 1, 16),
            (0, 2, 13),
            (1, 3, 12),
            (2, 1, 4),
            (2, 4, 14),
            (3, 2, 9),
            (3, 5, 20),
            (4, 3, 7),
            (4, 5, 4),
        ] {
            f.add_edge(u, v, c, 0);
        }
        assert_eq!(f.max_flow(0, 5), 23);
        let side = f.source_side(0);
        assert!(side[0] && !side[5]);
    }
}
