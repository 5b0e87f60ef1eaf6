//! Exact maximum average degree.
//!
//! `Mad(G)` is twice the maximum edge density `|E(H)| / |V(H)|` over
//! non-empty subgraphs. The maximum is attained on an induced subgraph, so the
//! computation is a densest-subgraph problem. [`mad_exact`] solves it with
//! Goldberg's min-cut construction and a bisection on the density that stops
//! once the search interval can hold only one fraction with denominator at
//! most `n`; [`mad_bruteforce`] enumerates subsets and is the oracle for it.

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::flow::FlowNetwork;
use crate::graph::{Graph, Vertex};

pub type Rational = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DensityError {
    #[error("maximum average degree is undefined for a graph without vertices")]
    EmptyGraph,
    #[error("brute force limited to {limit} vertices, graph has {actual}")]
    TooLarge { limit: usize, actual: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MadResult {
    #[serde(serialize_with = "serialize_ratio")]
    pub value: Rational,
    /// A vertex set whose induced subgraph has average degree `value`.
    pub witness: Vec<Vertex>,
}

/// `p/q` with an explicit denominator, e.g. `2/1`.
pub fn format_ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a plain integer.
pub fn parse_ratio(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().ok()?;
            let q: i64 = q.trim().parse().ok()?;
            (q != 0).then(|| Rational::new(p, q))
        }
        None => s.parse::<i64>().ok().map(Rational::from_integer),
    }
}

pub fn serialize_ratio<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_ratio(r))
}

pub fn serialize_ratios<S: serde::Serializer>(rs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(format_ratio))
}

/// Average degree `2|E(G[set])| / |set|` of the subgraph induced by `set`.
pub fn induced_average_degree(g: &Graph, set: &[Vertex]) -> Option<Rational> {
    if set.is_empty() {
        return None;
    }
    let mut mask = vec![false; g.order()];
    for &v in set {
        mask[v] = true;
    }
    let twice_edges: usize = set
        .iter()
        .map(|&v| g.neighbors(v).iter().filter(|&&w| mask[w]).count())
        .sum();
    Some(Rational::new(twice_edges as i64, set.len() as i64))
}

pub fn mad_exact(g: &Graph) -> Result<MadResult, DensityError> {
    let n = g.num_vertices();
    if n == 0 {
        return Err(DensityError::EmptyGraph);
    }
    let m = g.num_edges();
    if m == 0 {
        return Ok(MadResult {
            value: Rational::from_integer(0),
            witness: vec![g.vertices().next().unwrap()],
        });
    }
    let solver = DensestSubgraph::new(g);
    // Invariant: some subgraph has density > lo, none has density > hi.
    let mut lo = Ratio::<i128>::from_integer(0);
    let mut hi = Ratio::<i128>::from_integer(n as i128);
    let gap = Ratio::new(1, (n as i128) * (n as i128));
    while hi - lo >= gap {
        let mid = (lo + hi) / 2;
        if solver.denser_than(&mid).is_some() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Two distinct fractions with denominators <= n differ by at least
    // 1/n^2, so (lo, hi] holds exactly one candidate: the optimum.
    let density = (1..=n as i128)
        .find_map(|k| {
            let edges = (hi * k).floor();
            let r = edges / k;
            (r > lo).then_some(r)
        })
        .expect("the optimal density lies in (lo, hi]");
    let witness = solver.denser_than(&lo).expect("lo stays below the optimum");
    let value = Rational::new(2 * *density.numer() as i64, *density.denom() as i64);
    debug_assert_eq!(induced_average_degree(g, &witness), Some(value));
    Ok(MadResult { value, witness })
}

struct DensestSubgraph<'a> {
    g: &'a Graph,
    ids: Vec<Vertex>,
    index: Vec<usize>,
}

impl<'a> DensestSubgraph<'a> {
    fn new(g: &'a Graph) -> Self {
        let ids: Vec<Vertex> = g.vertices().collect();
        let mut index = vec![usize::MAX; g.order()];
        for (i, &v) in ids.iter().enumerate() {
            index[v] = i;
        }
        DensestSubgraph { g, ids, index }
    }

    /// Returns the minimal vertex set maximising `|E(S)| - lambda |S|` if that
    /// maximum is positive, i.e. if some subgraph has density above `lambda`.
    ///
    /// With `lambda = p/q` the network has arcs `s -> v` of capacity `q m`,
    /// `v -> t` of capacity `q m + 2p - q d(v)`, and `q` in both directions on
    /// every edge; a cut with source side `S` costs
    /// `q m n + 2 (p |S| - q |E(S)|)`.
    fn denser_than(&self, lambda: &Ratio<i128>) -> Option<Vec<Vertex>> {
        let n = self.ids.len();
        let m = self.g.num_edges() as i128;
        let (p, q) = (*lambda.numer(), *lambda.denom());
        let (s, t) = (n, n + 1);
        let mut net = FlowNetwork::new(n + 2);
        for (i, &v) in self.ids.iter().enumerate() {
            let d = self.g.degree(v) as i128;
            net.add_edge(s, i, q * m, 0);
            net.add_edge(i, t, q * m + 2 * p - q * d, 0);
            for &w in self.g.neighbors(v) {
                let j = self.index[w];
                if i < j {
                    net.add_edge(i, j, q, q);
                }
            }
        }
        let cut = net.max_flow(s, t);
        if cut >= q * m * n as i128 {
            return None;
        }
        let side = net.source_side(s);
        let set: Vec<Vertex> = (0..n).filter(|&i| side[i]).map(|i| self.ids[i]).collect();
        debug_assert!(!set.is_empty());
        Some(set)
    }
}

/// Exhaustive maximum over all non-empty vertex subsets.
pub fn mad_bruteforce(g: &Graph, max_n: usize) -> Result<MadResult, DensityError> {
    let ids: Vec<Vertex> = g.vertices().collect();
    let n = ids.len();
    if n == 0 {
        return Err(DensityError::EmptyGraph);
    }
    if n > max_n || n >= 63 {
        return Err(DensityError::TooLarge {
            limit: max_n.min(62),
            actual: n,
        });
    }
    let mut index = vec![usize::MAX; g.order()];
    for (i, &v) in ids.iter().enumerate() {
        index[v] = i;
    }
    let masks: Vec<u64> = ids
        .iter()
        .map(|&v| g.neighbors(v).iter().fold(0u64, |acc, &w| acc | (1 << index[w])))
        .collect();
    let mut best = (0i64, 1i64, 1u64);
    for set in 1u64..(1u64 << n) {
        let mut twice_edges = 0i64;
        let mut bits = set;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            twice_edges += (masks[i] & set).count_ones() as i64;
            bits &= bits - 1;
        }
        let size = set.count_ones() as i64;
        if twice_edges * best.1 > best.0 * size {
            best = (twice_edges, size, set);
        }
    }
    let witness = (0..n).filter(|&i| best.2 >> i & 1 == 1).map(|i| ids[i]).collect();
    Ok(MadResult {
        value: Rational::new(best.0, best.1),
        witness,
    })
}

/// `Mad(g) < bound`, exactly, with a single min-cut. The empty graph counts
/// as below every bound.
///
/// With `bound / 2 = p/q`, every density `e/k` (`k <= n`) below `p/q` is at
/// most `p/q - 1/(qn)`, so testing for density above `p/q - 1/(2qn)`
/// separates the two cases.
pub fn mad_below(g: &Graph, bound: Rational) -> bool {
    let n = g.num_vertices();
    if n == 0 {
        return true;
    }
    if g.num_edges() == 0 {
        return bound > Rational::from_integer(0);
    }
    let half = bound / 2;
    let (p, q) = (*half.numer() as i128, *half.denom() as i128);
    let lambda = Ratio::<i128>::new(p, q) - Ratio::new(1, 2 * q * n as i128);
    if lambda < Ratio::from_integer(0) {
        return false;
    }
    DensestSubgraph::new(g).denser_than(&lambda).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    #[test]
    fn small_values() {
        let c5 = cycle(5);
        assert_eq!(mad_exact(&c5).unwrap().value, Rational::from_integer(2));
        assert_eq!(mad_exact(&Graph::new(4)).unwrap().value, Rational::from_integer(0));
        let p4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(mad_exact(&p4).unwrap().value, Rational::new(3, 2));
        assert_eq!(mad_exact(&complete(4)).unwrap().value, Rational::from_integer(3));
        assert_eq!(mad_exact(&Graph::new(0)), Err(DensityError::EmptyGraph));
    }

    #[test]
    fn brute_force_values() {
        let r = mad_bruteforce(&cycle(5), 16).unwrap();
        assert_eq!(r.value, Rational::from_integer(2));
        assert_eq!(r.witness, vec![0, 1, 2, 3, 4]);
        let star = Graph::from_edges(6, (1..6).map(|i| (0, i))).unwrap();
        assert_eq!(mad_bruteforce(&star, 16).unwrap().value, Rational::new(5, 3));
        assert!(matches!(
            mad_bruteforce(&Graph::new(20), 16),
            Err(DensityError::TooLarge { .. })
        ));
    }

    #[test]
    fn witness_is_densest_part() {
        // K4 with a long pendant path: the K4 is the densest part.
        let mut g = complete(4);
        let mut prev = 3;
        for _ in 0..6 {
            let v = g.add_vertex();
            g.add_edge(prev, v).unwrap();
            prev = v;
        }
        let r = mad_exact(&g).unwrap();
        assert_eq!(r.value, Rational::from_integer(3));
        assert_eq!(r.witness, vec![0, 1, 2, 3]);
    }

    #[test]
    fn strict_comparisons() {
        let c5 = cycle(5);
        assert!(mad_below(&c5, Rational::new(26, 11)));
        assert!(!mad_below(&c5, Rational::from_integer(2)));
        assert!(!mad_below(&complete(4), Rational::new(8, 3)));
        assert!(!mad_below(&complete(4), Rational::from_integer(3)));
        assert!(mad_below(&complete(4), Rational::new(31, 10)));
        assert!(mad_below(&Graph::new(3), Rational::new(1, 2)));
        assert!(!mad_below(&c5, Rational::new(-1, 2)));
    }

    #[test]
    fn ratio_text() {
        assert_eq!(format_ratio(&Rational::from_integer(2)), "2/1");
        assert_eq!(parse_ratio("26/11"), Some(Rational::new(26, 11)));
        assert_eq!(parse_ratio("3"), Some(Rational::from_integer(3)));
        assert_eq!(parse_ratio("1/0"), None);
    }
}
