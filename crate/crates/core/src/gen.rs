//! Instance supply: a catalog of named graphs, seeded sparse generators that
//! re-check their Mad and girth targets, configuration-free instances for the
//! discharging audit, and the small-graph extremal search.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::config::{detect, Family};
use crate::density::{format_ratio, induced_average_degree, mad_below, mad_exact, serialize_ratio, Rational};
use crate::graph::{Graph, Vertex};
use crate::io::{parse_graph6_line, to_graph6};
use crate::star::{star_chromatic_from, star_colorable, StarChromatic};
use crate::traversal::{bfs_distances, girth, shortest_cycle};

/// Identifier of the seeded generator behind every random construction.
pub const RNG_ALGORITHM: &str = "chacha8";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("unknown graph name `{0}`")]
    UnknownName(String),
    #[error("infeasible specification: {0}")]
    BadSpec(String),
    #[error("no graph met the specification after {attempts} attempts")]
    Timeout { attempts: usize },
}

// ---------------------------------------------------------------------------
// named graphs

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("n >= 3")
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::from_edges(a + b, (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j)))).unwrap()
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap()
}

pub fn heawood() -> Graph {
    let rim = (0..14).map(|i| (i, (i + 1) % 14));
    let chords = (0..14).step_by(2).map(|i| (i, (i + 5) % 14));
    Graph::from_edges(14, rim.chain(chords)).unwrap()
}

/// `legs` paths of `len` vertices each, joined at center 0.
pub fn spider(legs: usize, len: usize) -> Graph {
    let mut g = Graph::new(1);
    for _ in 0..legs {
        let mut prev = 0;
        for _ in 0..len {
            let v = g.add_vertex();
            g.add_edge(prev, v).unwrap();
            prev = v;
        }
    }
    g
}

/// Replaces `uv` by a path `u w v` and returns `w`.
pub fn subdivide_edge(g: &mut Graph, u: Vertex, v: Vertex) -> Vertex {
    assert!(g.remove_edge(u, v), "{u}-{v} is not an edge");
    let w = g.add_vertex();
    g.add_edge(u, w).unwrap();
    g.add_edge(w, v).unwrap();
    w
}

/// Every edge replaced by a path with `k` internal vertices.
pub fn subdivided(g: &Graph, k: usize) -> Graph {
    let mut h = g.clone();
    for (u, v) in g.edges().collect::<Vec<_>>() {
        h.remove_edge(u, v);
        let mut prev = u;
        for _ in 0..k {
            let w = h.add_vertex();
            h.add_edge(prev, w).unwrap();
            prev = w;
        }
        h.add_edge(prev, v).unwrap();
    }
    h
}

/// Catalog: `Cn`, `Pn`, `Kn`, `Ka,b` (or `K_{a,b}`), `En` (edgeless),
/// `petersen`, `heawood`, `spider(legs,len)` and `subdivided(NAME,k)`.
pub fn named(name: &str) -> Result<Graph, GenError> {
    let unknown = || GenError::UnknownName(name.to_string());
    let s = name.trim();
    let lower = s.to_ascii_lowercase();
    if let Some(args) = lower.strip_prefix("subdivided(").and_then(|r| r.strip_suffix(')')) {
        let (inner, k) = args.rsplit_once(',').ok_or_else(unknown)?;
        let k: usize = k.trim().parse().map_err(|_| unknown())?;
        return Ok(subdivided(&named(inner)?, k));
    }
    if let Some(args) = lower.strip_prefix("spider(").and_then(|r| r.strip_suffix(')')) {
        let (a, b) = args.split_once(',').ok_or_else(unknown)?;
        let legs = a.trim().parse().map_err(|_| unknown())?;
        let len = b.trim().parse().map_err(|_| unknown())?;
        return Ok(spider(legs, len));
    }
    match lower.as_str() {
        "petersen" => return Ok(petersen()),
        "heawood" => return Ok(heawood()),
        _ => {}
    }
    let (head, rest) = lower.split_at(1.min(lower.len()));
    let rest = rest
        .trim_start_matches('_')
        .trim_start_matches('{')
        .trim_end_matches('}');
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| unknown());
    match head {
        "c" => {
            let n = num(rest)?;
            if n < 3 {
                return Err(unknown());
            }
            Ok(cycle(n))
        }
        "p" => Ok(path(num(rest)?)),
        "e" => Ok(Graph::new(num(rest)?)),
        "k" => match rest.split_once(',') {
            Some((a, b)) => Ok(complete_bipartite(num(a)?, num(b)?)),
            None => Ok(complete(num(rest)?)),
        },
        _ => Err(unknown()),
    }
}

// ---------------------------------------------------------------------------
// random sparse graphs

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Subdivision,
    Rejection,
    ThreadGraft,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Subdivision, Method::Rejection, Method::ThreadGraft];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Subdivision => "subdivision",
            Method::Rejection => "rejection",
            Method::ThreadGraft => "thread_graft",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "subdivision" => Ok(Method::Subdivision),
            "rejection" => Ok(Method::Rejection),
            "thread_graft" | "graft" => Ok(Method::ThreadGraft),
            _ => Err(format!(
                "unknown method `{s}` (expected subdivision, rejection or thread_graft)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorSpec {
    /// Target vertex count; generators may overshoot slightly.
    pub n: usize,
    #[serde(serialize_with = "serialize_ratio")]
    pub mad_bound: Rational,
    pub girth_min: usize,
    pub seed: u64,
    pub method: Method,
}

impl GeneratorSpec {
    pub fn new(n: usize, mad_bound: Rational, girth_min: usize, seed: u64, method: Method) -> Self {
        GeneratorSpec {
            n,
            mad_bound,
            girth_min,
            seed,
            method,
        }
    }

    /// Spec matching a family's hypothesis.
    pub fn for_family(family: Family, n: usize, seed: u64, method: Method) -> Self {
        GeneratorSpec::new(n, family.mad_bound(), family.girth_min(), seed, method)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generated {
    #[serde(serialize_with = "serialize_graph6")]
    pub graph: Graph,
    pub spec: GeneratorSpec,
    pub rng: &'static str,
    #[serde(serialize_with = "serialize_ratio")]
    pub mad: Rational,
    pub girth: Option<usize>,
}

fn serialize_graph6<S: serde::Serializer>(g: &Graph, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&to_graph6(g))
}

const MAX_ATTEMPTS: usize = 50;

pub fn random_sparse(spec: &GeneratorSpec) -> Result<Graph, GenError> {
    generate(spec).map(|g| g.graph)
}

/// [`random_sparse`] with the verified Mad and girth attached.
pub fn generate(spec: &GeneratorSpec) -> Result<Generated, GenError> {
    if spec.mad_bound <= Rational::from_integer(0) {
        return Err(GenError::BadSpec(format!(
            "Mad bound {} leaves no graph",
            format_ratio(&spec.mad_bound)
        )));
    }
    let mut rng = rng(spec.seed);
    for _ in 0..MAX_ATTEMPTS {
        let g = if spec.mad_bound <= Rational::from_integer(2) {
            bounded_forest(spec, &mut rng)
        } else {
            match spec.method {
                Method::Subdivision => by_subdivision(spec, &mut rng),
                Method::Rejection => by_rejection(spec, &mut rng),
                Method::ThreadGraft => by_thread_graft(spec, &mut rng),
            }
        };
        let Some(g) = g else { continue };
        let mad = mad_exact(&g).map(|r| r.value).unwrap_or(Rational::from_integer(0));
        let gi = girth(&g);
        if mad < spec.mad_bound && gi.is_none_or(|x| x >= spec.girth_min) {
            return Ok(Generated {
                graph: g,
                spec: spec.clone(),
                rng: RNG_ALGORITHM,
                mad,
                girth: gi,
            });
        }
    }
    Err(GenError::Timeout { attempts: MAX_ATTEMPTS })
}

/// Forest whose trees are small enough for `Mad < bound <= 2`.
fn bounded_forest(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Option<Graph> {
    // A tree on k vertices has Mad 2 - 2/k, below `b` iff k < 2 / (2 - b).
    let b = spec.mad_bound;
    let two = Rational::from_integer(2);
    let cap = if b == two {
        usize::MAX
    } else {
        let limit = two / (two - b);
        (limit.ceil().to_integer() as usize).saturating_sub(1).max(1)
    };
    let mut g = Graph::new(spec.n);
    let mut size = vec![1usize; spec.n];
    let mut comp: Vec<usize> = (0..spec.n).collect();
    for v in 1..spec.n {
        let u = rng.gen_range(0..v);
        let (cu, cv) = (find(&mut comp, u), find(&mut comp, v));
        if size[cu] + size[cv] <= cap && rng.gen_bool(0.8) {
            g.add_edge(u, v).unwrap();
            comp[cv] = cu;
            size[cu] += size[cv];
        }
    }
    Some(g)
}

fn find(comp: &mut [usize], mut x: usize) -> usize {
    while comp[x] != x {
        comp[x] = comp[comp[x]];
        x = comp[x];
    }
    x
}

/// Random multigraph-free base with degrees drawn from `lo..=hi`, built by
/// pairing stubs and dropping loops and repeated pairs.
fn stub_graph(b: usize, lo: usize, hi: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut stubs = Vec::new();
    for v in 0..b {
        for _ in 0..rng.gen_range(lo..=hi) {
            stubs.push(v);
        }
    }
    stubs.shuffle(rng);
    let mut g = Graph::new(b);
    for pair in stubs.chunks_exact(2) {
        let (u, v) = (pair[0], pair[1]);
        if u != v && !g.has_edge(u, v) {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

/// Subdivides edges of shortest cycles until the girth target holds, then
/// edges inside the densest part until the Mad target holds, then random
/// edges until the vertex target is reached. Subdividing never lowers the
/// girth and never raises Mad above `max(Mad, 2)`.
fn by_subdivision(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Option<Graph> {
    let bound = spec.mad_bound;
    let excess = (bound - Rational::from_integer(2)).min(Rational::from_integer(2));
    let frac = *excess.numer() as f64 / *excess.denom() as f64;
    let b = ((spec.n as f64 * frac / 2.0).round() as usize).max(4);
    let mut g = stub_graph(b, 3, 6, rng);
    while let Some(c) = shortest_cycle(&g).filter(|c| c.len() < spec.girth_min) {
        let i = rng.gen_range(0..c.len());
        subdivide_edge(&mut g, c[i], c[(i + 1) % c.len()]);
    }
    loop {
        let r = mad_exact(&g).ok()?;
        if r.value < bound {
            break;
        }
        // Subdivisions needed so that 2(e + s) / (k + s) < bound.
        let k = r.witness.len() as i64;
        let e = (r.value * Rational::from_integer(k) / 2).to_integer();
        let need = (Rational::from_integer(2 * e) - bound * k) / (bound - 2);
        let s = need.floor().to_integer().max(0) as usize + 1;
        let mut mask = vec![false; g.order()];
        for &v in &r.witness {
            mask[v] = true;
        }
        let inner: Vec<(Vertex, Vertex)> = g.edges().filter(|&(u, v)| mask[u] && mask[v]).collect();
        for _ in 0..s.min(inner.len()) {
            let &(u, v) = inner.choose(rng)?;
            if g.has_edge(u, v) {
                subdivide_edge(&mut g, u, v);
            }
        }
    }
    while g.num_vertices() < spec.n {
        let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
        let &(u, v) = edges.choose(rng)?;
        subdivide_edge(&mut g, u, v);
    }
    Some(g)
}

/// Adds random edges one at a time, rejecting any that would break the girth
/// or Mad target, until the edge budget or the rejection budget runs out.
fn by_rejection(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Option<Graph> {
    let n = spec.n.max(2);
    let mut g = Graph::new(n);
    let target = (n as f64 * 1.4) as usize;
    let mut rejected = 0;
    while g.num_edges() < target && rejected < 4 * n {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v || g.has_edge(u, v) || !girth_allows(&g, u, v, 1, spec.girth_min) {
            rejected += 1;
            continue;
        }
        g.add_edge(u, v).unwrap();
        if !mad_below(&g, spec.mad_bound) {
            g.remove_edge(u, v);
            rejected += 1;
        }
    }
    Some(g)
}

/// Whether joining `u` and `v` by a path of `len` edges keeps the girth at
/// least `girth_min`.
fn girth_allows(g: &Graph, u: Vertex, v: Vertex, len: usize, girth_min: usize) -> bool {
    if girth_min <= 3 && len == 1 {
        return true;
    }
    let limit = girth_min.saturating_sub(len + 1);
    match bfs_distances(g, u, Some(limit))[v] {
        Some(d) => d + len >= girth_min,
        None => true,
    }
}

/// Starts from a cycle and grafts threads (paths of 0 to 3 internal
/// vertices) between random vertices while the girth and Mad targets hold.
fn by_thread_graft(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Option<Graph> {
    let start = spec.girth_min.max(3) + rng.gen_range(0..3);
    let mut g = cycle(start);
    let mut rejected = 0;
    while g.num_vertices() < spec.n && rejected < 20 * spec.n.max(8) {
        let n = g.order();
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let internal = rng.gen_range(0..=3usize);
        if u == v || (internal == 0 && g.has_edge(u, v)) || !girth_allows(&g, u, v, internal + 1, spec.girth_min) {
            rejected += 1;
            continue;
        }
        let mut added = Vec::new();
        let mut prev = u;
        for _ in 0..internal {
            let w = g.add_vertex();
            g.add_edge(prev, w).unwrap();
            added.push(w);
            prev = w;
        }
        g.add_edge(prev, v).unwrap();
        if !mad_below(&g, spec.mad_bound) {
            g.remove_edge(prev, v);
            for w in added.into_iter().rev() {
                g.remove_vertex(w);
            }
            g = g.compacted();
            rejected += 1;
        }
    }
    Some(g)
}

/// `G(n, p)` with the seeded generator.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = rng(seed);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Random forest: each vertex joins a random earlier vertex with
/// probability 0.9.
pub fn random_forest(n: usize, seed: u64) -> Graph {
    let mut rng = rng(seed);
    let mut g = Graph::new(n);
    for v in 1..n {
        if rng.gen_bool(0.9) {
            g.add_edge(rng.gen_range(0..v), v).unwrap();
        }
    }
    g
}

// ---------------------------------------------------------------------------
// configuration-free instances

/// A graph containing none of `family`'s configurations, or `None` if the
/// attempt produced nothing usable. The base has minimum degree 3 (girth at
/// least 6 for the families that require it) and random subdivisions are
/// kept only while the detector still finds nothing. Such graphs have Mad at
/// least the family bound, so they exercise the discharging rules.
pub fn config_free_instance(family: Family, base: usize, seed: u64) -> Option<Graph> {
    let mut rng = rng(seed);
    let hi = rng.gen_range(3..=7);
    let mut g = sparse_core(base, hi, family.girth_min(), &mut rng)?;
    if detect(&g, family).is_some() {
        return None;
    }
    let tries = 2 * g.num_edges();
    for _ in 0..tries {
        let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
        let &(u, v) = edges.choose(&mut rng)?;
        let w = subdivide_edge(&mut g, u, v);
        if detect(&g, family).is_some() {
            g.remove_vertex(w);
            g.add_edge(u, v).unwrap();
            g = g.compacted();
        }
    }
    debug_assert!(detect(&g, family).is_none());
    Some(g)
}

/// Random graph of minimum degree 3 and girth at least `girth_min`: greedy
/// random edges between deficient vertices, then the 3-core.
fn sparse_core(n: usize, hi: usize, girth_min: usize, rng: &mut ChaCha8Rng) -> Option<Graph> {
    let want: Vec<usize> = (0..n).map(|_| rng.gen_range(3..=hi)).collect();
    let mut g = Graph::new(n);
    let mut stalls = 0;
    while stalls < 40 * n {
        let open: Vec<Vertex> = (0..n).filter(|&v| g.degree(v) < want[v]).collect();
        if open.len() < 2 {
            break;
        }
        let u = *open.choose(rng)?;
        let v = *open.choose(rng)?;
        if u == v || g.has_edge(u, v) || !girth_allows(&g, u, v, 1, girth_min) {
            stalls += 1;
            continue;
        }
        g.add_edge(u, v).unwrap();
    }
    loop {
        let low: Vec<Vertex> = g.vertices().filter(|&v| g.degree(v) < 3).collect();
        if low.is_empty() {
            break;
        }
        for v in low {
            g.remove_vertex(v);
        }
    }
    let g = g.compacted();
    (g.num_vertices() >= 4).then_some(g)
}

// ---------------------------------------------------------------------------
// extremal search

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalRecord {
    #[serde(serialize_with = "serialize_graph6")]
    pub graph: Graph,
    #[serde(serialize_with = "serialize_ratio")]
    pub mad: Rational,
    /// Exact value, or `None` when it exceeds the solver cap.
    pub star_chromatic: Option<usize>,
}

impl ExtremalRecord {
    /// `graph6<TAB>p/q<TAB>chi`, with `>cap` when the value exceeds the cap.
    pub fn to_line(&self, cap: usize) -> String {
        let chi = match self.star_chromatic {
            Some(c) => c.to_string(),
            None => format!(">{cap}"),
        };
        format!("{}\t{}\t{chi}", to_graph6(&self.graph), format_ratio(&self.mad))
    }
}

/// Keeps the graphs whose star chromatic number exceeds `target_colors`,
/// computing it exactly up to `color_cap`, sorted by Mad then graph6.
pub fn extremal_search<I>(graphs: I, target_colors: usize, color_cap: usize) -> Vec<ExtremalRecord>
where
    I: IntoIterator<Item = Graph>,
    I::IntoIter: Send,
{
    let mut records: Vec<ExtremalRecord> = graphs
        .into_iter()
        .par_bridge()
        .filter_map(|g| extremal_record(&g, target_colors, color_cap))
        .collect();
    sort_records(&mut records);
    records
}

fn sort_records(records: &mut [ExtremalRecord]) {
    records.sort_by_cached_key(|r| (r.mad, r.graph.num_vertices(), to_graph6(&r.graph)));
}

fn extremal_record(g: &Graph, target: usize, cap: usize) -> Option<ExtremalRecord> {
    if g.is_empty() || star_colorable(g, target).is_some() {
        return None;
    }
    let chi = match star_chromatic_from(g, target + 1, cap.max(target + 1)) {
        Ok(StarChromatic::Exact { colors, .. }) => Some(colors),
        _ => None,
    };
    let mad = mad_exact(g).ok()?.value;
    Some(ExtremalRecord {
        graph: g.clone(),
        mad,
        star_chromatic: chi,
    })
}

/// Largest order for [`all_graphs`].
pub const ENUMERATION_LIMIT: usize = 7;

/// Every labeled graph on `n` vertices (`n <= ENUMERATION_LIMIT`).
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> + Send {
    assert!(
        n <= ENUMERATION_LIMIT,
        "labeled enumeration limited to {ENUMERATION_LIMIT} vertices"
    );
    let pairs: Vec<(Vertex, Vertex)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        Graph::from_edges(
            n,
            pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e),
        )
        .unwrap()
    })
}

/// Smallest graph6 string over all relabelings.
pub fn canonical_graph6(g: &Graph) -> String {
    let g = g.compacted();
    let n = g.order();
    assert!(n <= 16, "canonical form limited to 16 vertices");
    let adj: Vec<u16> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u16, |m, &u| m | 1 << u))
        .collect();
    // graph6 packs the upper triangle column by column, so comparing these
    // keys as integers orders the strings of equal length.
    let key = |perm: &[usize]| {
        let mut k = 0u128;
        for j in 1..n {
            for i in 0..j {
                k = k << 1 | u128::from(adj[perm[i]] >> perm[j] & 1);
            }
        }
        k
    };
    let mut perm: Vec<usize> = (0..n).collect();
    let (mut best, mut best_perm) = (key(&perm), perm.clone());
    // Heap's algorithm over all permutations.
    let mut c = vec![0; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            let k = key(&perm);
            if k < best {
                best = k;
                best_perm.clone_from(&perm);
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    // best_perm[i] is the old vertex placed at position i.
    let mut at = vec![0; n];
    for (pos, &v) in best_perm.iter().enumerate() {
        at[v] = pos;
    }
    to_graph6(&Graph::from_edges(n, g.edges().map(|(u, v)| (at[u], at[v]))).unwrap())
}

/// [`extremal_search`] over the internal enumeration of all graphs with
/// 1 to `max_n` vertices, one record per isomorphism class in canonical
/// labeling.
///
/// Only labelings without isolated vertices and with non-decreasing degrees
/// are searched: every class has one, and an isolated vertex changes neither
/// Mad nor the star chromatic number of a graph with an edge.
pub fn extremal_search_small(max_n: usize, target_colors: usize, color_cap: usize) -> Vec<ExtremalRecord> {
    let mut records: Vec<ExtremalRecord> = (1..=max_n.min(ENUMERATION_LIMIT))
        .flat_map(|n| extremal_search(all_graphs(n).filter(degree_sorted), target_colors, color_cap))
        .collect();
    let mut seen = std::collections::HashSet::new();
    records.retain_mut(|r| {
        let canon = canonical_graph6(&r.graph);
        r.graph = parse_graph6_line(&canon, 1).expect("canonical form parses");
        seen.insert(canon)
    });
    sort_records(&mut records);
    records
}

fn degree_sorted(g: &Graph) -> bool {
    let n = g.order();
    (n == 1 || g.min_degree().is_some_and(|d| d > 0)) && (1..n).all(|v| g.degree(v - 1) <= g.degree(v))
}

/// Average degree of the whole graph, a cheap lower bound on Mad.
pub fn average_degree(g: &Graph) -> Option<Rational> {
    induced_average_degree(g, &g.vertices().collect::<Vec<_>>())
}
