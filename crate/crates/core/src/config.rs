//! Detectors for the reducible configurations of the three families.
//!
//! A match names its vertices by role and lists the vertices to delete for the
//! reduction. Profiles use the "at least" reading of thread signatures (see
//! [`VertexProfile::is`]), so for example every 2-vertex with a degree-2
//! neighbor is a `2_{0,1}`-vertex.
//!
//! The `k`-parametrised families of [`Family::L5`] scan every vertex of degree
//! at least 5. In items 6 and 8 the `k'_{0,1,1,2,...,2}` partner may also be a
//! `3_{0,1,1}`-vertex (`k' = 3`); without that a `5_{0,1,2,2,2}`- or
//! `5_{0,0,2,2,2}`-vertex next to a `3_{0,1,1}`-vertex ends below the
//! discharging threshold.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::density::{mad_exact, Rational};
use crate::graph::{Graph, Vertex};
use crate::threads::{classify_vertex, dominates, pattern, profiles, traces, VertexProfile};
use crate::traversal::girth;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    L2,
    L3,
    L5,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::L2, Family::L3, Family::L5];

    /// The strict upper bound on `Mad` under which the family is unavoidable.
    pub fn mad_bound(self) -> Rational {
        match self {
            Family::L2 => Rational::new(26, 11),
            Family::L3 => Rational::new(18, 7),
            Family::L5 => Rational::new(8, 3),
        }
    }

    /// Girth required by the family's hypothesis (3 means "none").
    pub fn girth_min(self) -> usize {
        match self {
            Family::L2 => 3,
            Family::L3 | Family::L5 => 6,
        }
    }

    pub fn num_kinds(self) -> usize {
        match self {
            Family::L2 => 6,
            Family::L3 => 14,
            Family::L5 => 8,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::L2 => "L2",
            Family::L3 => "L3",
            Family::L5 => "L5",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "L2" => Ok(Family::L2),
            "L3" => Ok(Family::L3),
            "L5" => Ok(Family::L5),
            _ => Err(format!("unknown family `{s}` (expected L2, L3 or L5)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigurationMatch {
    pub family: Family,
    /// Index within the family. For [`Family::L2`], kind 0 is a `<=1`-vertex
    /// and kinds 1 to 5 are its other configurations; the other families number their
    /// items from 1.
    pub kind: usize,
    pub name: String,
    pub roles: BTreeMap<String, Vertex>,
    pub deletion_set: Vec<Vertex>,
}

impl ConfigurationMatch {
    pub fn role(&self, name: &str) -> Option<Vertex> {
        self.roles.get(name).copied()
    }
}

impl fmt::Display for ConfigurationMatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} kind {} ({})", self.family, self.kind, self.name)
    }
}

/// Name and pattern helpers shared by detection and validation.
fn kind_name(family: Family, kind: usize) -> &'static str {
    match (family, kind) {
        (Family::L2, 0) | (Family::L3, 1) | (Family::L5, 1) => "<=1-vertex",
        (Family::L2, 1) | (Family::L3, 2) => "2_{1,1}-vertex",
        (Family::L2, 2) => "3_{1,1,2}-vertex",
        (Family::L2, 3) => "4_{2,2,2,2}-vertex",
        (Family::L2, 4) => "3_{0,1,2}-vertex adjacent to a bad 3-vertex",
        (Family::L2, 5) => "J-cycle through a vertex of J-degree 3",
        (Family::L3, 3) => "3_{1,1,1}-vertex",
        (Family::L3, 4) => "3_{0,0,2}-vertex",
        (Family::L3, 5) => "3_{0,1,1}-vertex adjacent to a 3_{0,1,1}-vertex",
        (Family::L3, 6) => "3_{0,0,1}-vertex adjacent to two 3_{0,1,1}-vertices",
        (Family::L3, 7) => "4_{1,1,1,2}-vertex",
        (Family::L3, 8) => "4_{0,2,2,2}-vertex adjacent to a 3-vertex",
        (Family::L3, 9) => "4_{0,1,1,1}-vertex adjacent to a 3_{0,1,1}-vertex",
        (Family::L3, 10) => "4_{0,1,1,1}-vertex adjacent to a 4_{0,2,2,2}-vertex",
        (Family::L3, 11) => "4_{0,0,2,2}-vertex adjacent to two 4_{0,2,2,2}-vertices",
        (Family::L3, 12) => "4_{0,0,2,2}-vertex adjacent to a 4_{0,2,2,2}-vertex and a 3_{0,1,1}-vertex",
        (Family::L3, 13) => "5_{1,2,2,2,2}-vertex",
        (Family::L3, 14) => "5_{0,2,2,2,2}-vertex adjacent to a 4_{0,2,2,2}-vertex",
        (Family::L5, 2) => "2_{0,1}-vertex adjacent to only <=4-vertices",
        (Family::L5, 3) => "3_{0,1,1}-vertex adjacent to only <=3-vertices",
        (Family::L5, 4) => "k_{1,1,2,...,2}-vertex, k>=5",
        (Family::L5, 5) => "k_{0,2,...,2}-vertex adjacent to a 3-vertex, k>=5",
        (Family::L5, 6) => "k_{0,1,2,...,2}-vertex adjacent to a k'_{0,1,1,2,...,2}-vertex",
        (Family::L5, 7) => "k_{0,0,2,...,2}-vertex adjacent to two 3_{0,1,1}-vertices",
        (Family::L5, 8) => "k_{0,0,2,...,2}-vertex adjacent to a k'_{0,1,1,2,...,2}- and a k''_{0,1,2,...,2}-vertex",
        _ => "unknown",
    }
}

/// `k_{1,1,2,...,2}`
fn p_1122(k: usize) -> Vec<usize> {
    pattern(0, 2, k - 2)
}
/// `k_{0,2,...,2}`
fn p_022(k: usize) -> Vec<usize> {
    pattern(1, 0, k - 1)
}
/// `k_{0,1,2,...,2}`
fn p_0122(k: usize) -> Vec<usize> {
    pattern(1, 1, k - 2)
}
/// `k_{0,1,1,2,...,2}`
fn p_01122(k: usize) -> Vec<usize> {
    pattern(1, 2, k - 3)
}
/// `k_{0,0,2,...,2}`
fn p_0022(k: usize) -> Vec<usize> {
    pattern(2, 0, k - 2)
}

fn is_profile(p: &VertexProfile, k: usize, pat: &[usize]) -> bool {
    p.is(k, pat)
}

/// `k_{pattern(k)}` for some `k >= min_k`.
fn is_family(p: &VertexProfile, min_k: usize, pat: fn(usize) -> Vec<usize>) -> bool {
    p.degree >= min_k && dominates(&p.signature, &pat(p.degree))
}

/// Partner of items 6 and 8: `k'_{0,1,1,2,...,2}` with `k' >= 5`, or a
/// `3_{0,1,1}`-vertex.
fn is_l5_partner(p: &VertexProfile) -> bool {
    is_family(p, 5, p_01122) || is_profile(p, 3, &[0, 1, 1])
}

fn is_light_3(p: &VertexProfile) -> bool {
    is_profile(p, 3, &[0, 1, 1])
}

fn is_4_0222(p: &VertexProfile) -> bool {
    is_profile(p, 4, &[0, 2, 2, 2])
}

/// A 3-vertex on a triangle with two 2-vertices.
pub fn is_bad_3_vertex(g: &Graph, v: Vertex) -> bool {
    bad_triangle(g, v).is_some()
}

fn bad_triangle(g: &Graph, v: Vertex) -> Option<(Vertex, Vertex)> {
    if g.degree(v) != 3 {
        return None;
    }
    let nbrs = g.neighbors(v);
    for (i, &w) in nbrs.iter().enumerate() {
        for &x in &nbrs[i + 1..] {
            if g.degree(w) == 2 && g.degree(x) == 2 && g.has_edge(w, x) {
                return Some((w, x));
            }
        }
    }
    None
}

/// The subgraph induced by the set `A`: `2_{0,1}`-vertices, `3_{0,2,2}`-vertices,
/// and `3_{0,1,2}`-vertices adjacent to another `3_{0,1,2}`-vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JSubgraph {
    pub members: Vec<Vertex>,
    pub edges: Vec<(Vertex, Vertex)>,
    in_a: Vec<bool>,
    degree: Vec<usize>,
}

impl JSubgraph {
    pub fn contains(&self, v: Vertex) -> bool {
        self.in_a.get(v).copied().unwrap_or(false)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.degree.get(v).copied().unwrap_or(0)
    }

    pub fn neighbors<'a>(&'a self, g: &'a Graph, v: Vertex) -> impl Iterator<Item = Vertex> + 'a {
        let inside = self.contains(v);
        g.neighbors(v).iter().copied().filter(move |&w| inside && self.in_a[w])
    }

    /// The induced subgraph as a [`Graph`] on the same ids.
    pub fn as_graph(&self, g: &Graph) -> Graph {
        g.induced(&self.members)
    }

    /// Whether every component of `J` is a tree or a cycle.
    pub fn components_are_trees_or_cycles(&self, g: &Graph) -> bool {
        let j = self.as_graph(g);
        j.components().iter().all(|comp| {
            let edges: usize = comp.iter().map(|&v| j.degree(v)).sum::<usize>() / 2;
            edges + 1 == comp.len() || (edges == comp.len() && comp.iter().all(|&v| j.degree(v) == 2))
        })
    }

    /// `(leaves, vertices of J-degree 3)`.
    pub fn leaf_and_branch_counts(&self) -> (usize, usize) {
        let leaves = self.members.iter().filter(|&&v| self.degree[v] == 1).count();
        let branches = self.members.iter().filter(|&&v| self.degree[v] == 3).count();
        (leaves, branches)
    }
}

pub fn build_j(g: &Graph) -> JSubgraph {
    let prof = profiles(g);
    build_j_from(g, &prof)
}

fn build_j_from(g: &Graph, prof: &[VertexProfile]) -> JSubgraph {
    let n = g.order();
    let is_0_1_2 = |v: Vertex| is_profile(&prof[v], 3, &[0, 1, 2]);
    let mut in_a = vec![false; n];
    for v in g.vertices() {
        in_a[v] = is_profile(&prof[v], 2, &[0, 1])
            || is_profile(&prof[v], 3, &[0, 2, 2])
            || (is_0_1_2(v) && g.neighbors(v).iter().any(|&w| is_0_1_2(w)));
    }
    let members: Vec<Vertex> = g.vertices().filter(|&v| in_a[v]).collect();
    let mut degree = vec![0; n];
    let mut edges = Vec::new();
    for &v in &members {
        for &w in g.neighbors(v) {
            if in_a[w] {
                degree[v] += 1;
                if v < w {
                    edges.push((v, w));
                }
            }
        }
    }
    JSubgraph {
        members,
        edges,
        in_a,
        degree,
    }
}

/// Shortest cycle of `J` through `r`, starting at `r`.
fn shortest_j_cycle_through(g: &Graph, j: &JSubgraph, r: Vertex) -> Option<Vec<Vertex>> {
    let n = g.order();
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut branch = vec![usize::MAX; n];
    dist[r] = 0;
    let mut queue = VecDeque::from([r]);
    let mut best: Option<(usize, Vertex, Vertex)> = None;
    while let Some(u) = queue.pop_front() {
        for w in j.neighbors(g, u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                parent[w] = u;
                branch[w] = if u == r { w } else { branch[u] };
                queue.push_back(w);
            } else if u != r && w != r && branch[u] != branch[w] {
                let len = dist[u] + dist[w] + 1;
                if best.is_none_or(|(b, ..)| len < b) {
                    best = Some((len, u, w));
                }
            }
        }
    }
    let (_, a, b) = best?;
    let up = |mut v: Vertex| {
        let mut p = Vec::new();
        while v != r {
            p.push(v);
            v = parent[v];
        }
        p
    };
    let mut cycle = vec![r];
    let mut from_a = up(a);
    from_a.reverse();
    cycle.extend(from_a);
    cycle.extend(up(b));
    Some(cycle)
}

struct Builder {
    roles: BTreeMap<String, Vertex>,
    deletion: Vec<Vertex>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            roles: BTreeMap::new(),
            deletion: Vec::new(),
        }
    }

    fn role(mut self, name: &str, v: Vertex) -> Self {
        self.roles.insert(name.to_string(), v);
        self
    }

    fn delete(mut self, name: &str, v: Vertex) -> Self {
        self.roles.insert(name.to_string(), v);
        if !self.deletion.contains(&v) {
            self.deletion.push(v);
        }
        self
    }

    /// Deletes `v` and, per direction, the first `p` internal vertices of its
    /// thread, pairing the longest threads with the largest pattern entries.
    /// Internal vertices are named `{name}{i}.{j}`.
    fn center(mut self, g: &Graph, name: &str, v: Vertex, pat: &[usize]) -> Self {
        self = self.delete(name, v);
        let mut ts = traces(g, v);
        ts.sort_by(|a, b| b.len().cmp(&a.len()).then(a.first.cmp(&b.first)));
        let mut want: Vec<usize> = pat.to_vec();
        want.sort_unstable_by(|a, b| b.cmp(a));
        for (i, (t, &p)) in ts.iter().zip(&want).enumerate() {
            for (jdx, &x) in t.internals.iter().take(p).enumerate() {
                self = self.delete(&format!("{name}{}.{}", i + 1, jdx + 1), x);
            }
        }
        self
    }

    /// Roles for the neighbors of `v` that are not deleted, named `{name}1..`.
    fn outer(mut self, g: &Graph, name: &str, v: Vertex) -> Self {
        let outside: Vec<Vertex> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|w| !self.deletion.contains(w))
            .collect();
        for (i, w) in outside.into_iter().enumerate() {
            self.roles.insert(format!("{name}{}", i + 1), w);
        }
        self
    }

    fn finish(self, family: Family, kind: usize) -> ConfigurationMatch {
        ConfigurationMatch {
            family,
            kind,
            name: kind_name(family, kind).to_string(),
            roles: self.roles,
            deletion_set: self.deletion,
        }
    }
}

struct Ctx<'a> {
    g: &'a Graph,
    prof: Vec<VertexProfile>,
}

impl<'a> Ctx<'a> {
    fn new(g: &'a Graph) -> Self {
        Ctx { g, prof: profiles(g) }
    }

    fn deg(&self, v: Vertex) -> usize {
        self.g.degree(v)
    }

    fn is(&self, v: Vertex, k: usize, pat: &[usize]) -> bool {
        is_profile(&self.prof[v], k, pat)
    }

    fn nbrs(&self, v: Vertex) -> &'a [Vertex] {
        self.g.neighbors(v)
    }

    fn first_vertex(&self, pred: impl Fn(Vertex) -> bool) -> Option<Vertex> {
        self.g.vertices().find(|&v| pred(v))
    }

    /// First `(v, w)` with `w` a neighbor of `v`, both satisfying their tests.
    fn first_edge(&self, pv: impl Fn(Vertex) -> bool, pw: impl Fn(Vertex, Vertex) -> bool) -> Option<(Vertex, Vertex)> {
        self.g
            .vertices()
            .filter(|&v| pv(v))
            .find_map(|v| self.nbrs(v).iter().copied().find(|&w| pw(v, w)).map(|w| (v, w)))
    }

    /// First `(v, a, b)` with distinct neighbors `a < b` of `v` (in neighbor
    /// order) such that `a` satisfies `pa` and `b` satisfies `pb`, in either
    /// assignment of the two tests.
    fn first_pair(
        &self,
        pv: impl Fn(Vertex) -> bool,
        pa: impl Fn(Vertex) -> bool,
        pb: impl Fn(Vertex) -> bool,
    ) -> Option<(Vertex, Vertex, Vertex)> {
        for v in self.g.vertices().filter(|&v| pv(v)) {
            let nb = self.nbrs(v);
            for &a in nb {
                if !pa(a) {
                    continue;
                }
                if let Some(&b) = nb.iter().find(|&&b| b != a && pb(b)) {
                    return Some((v, a, b));
                }
            }
        }
        None
    }
}

pub fn detect(g: &Graph, family: Family) -> Option<ConfigurationMatch> {
    match family {
        Family::L2 => detect_l2(g),
        Family::L3 => detect_l3(g),
        Family::L5 => detect_l5(g),
    }
}

fn small_vertex(cx: &Ctx, family: Family, kind: usize) -> Option<ConfigurationMatch> {
    let v = cx.first_vertex(|v| cx.deg(v) <= 1)?;
    Some(Builder::new().delete("v", v).outer(cx.g, "u", v).finish(family, kind))
}

pub fn detect_l2(g: &Graph) -> Option<ConfigurationMatch> {
    let cx = Ctx::new(g);
    const F: Family = Family::L2;
    if let Some(m) = small_vertex(&cx, F, 0) {
        return Some(m);
    }
    if let Some(x) = cx.first_vertex(|v| cx.is(v, 2, &[1, 1])) {
        let nb = cx.nbrs(x);
        return Some(
            Builder::new()
                .delete("x", x)
                .delete("a", nb[0])
                .delete("b", nb[1])
                .finish(F, 1),
        );
    }
    if let Some((x, y)) = cx.first_edge(|v| cx.is(v, 3, &[1, 1, 2]), |_, w| cx.is(w, 2, &[0, 1])) {
        let mut b = Builder::new().delete("x", x).delete("y", y);
        let z = cx.nbrs(y).iter().copied().find(|&z| z != x).unwrap();
        b = b.delete("z", z);
        for (i, &a) in cx.nbrs(x).iter().filter(|&&a| a != y && a != z).enumerate() {
            b = b.delete(&format!("a{}", i + 1), a);
        }
        // z may also neighbor x (triangle); its other neighbor is then y's.
        return Some(b.finish(F, 2));
    }
    if let Some(x) = cx.first_vertex(|v| cx.is(v, 4, &[2, 2, 2, 2])) {
        let mut b = Builder::new().delete("x", x);
        for (i, &a) in cx.nbrs(x).iter().enumerate() {
            b = b.delete(&format!("a{}", i + 1), a);
        }
        for (i, &a) in cx.nbrs(x).iter().enumerate() {
            for &s in cx.nbrs(a).iter().filter(|&&s| s != x) {
                b = b.delete(&format!("s{}", i + 1), s);
            }
        }
        return Some(b.finish(F, 3));
    }
    if let Some((u, v)) = cx.first_edge(|v| cx.is(v, 3, &[0, 1, 2]), |_, w| is_bad_3_vertex(g, w)) {
        let (w, x) = bad_triangle(g, v).unwrap();
        return Some(
            Builder::new()
                .role("u", u)
                .delete("v", v)
                .delete("w", w)
                .delete("x", x)
                .finish(F, 4),
        );
    }
    let j = build_j_from(g, &cx.prof);
    let mut best: Option<Vec<Vertex>> = None;
    for &r in j.members.iter().filter(|&&r| j.degree(r) == 3) {
        if let Some(c) = shortest_j_cycle_through(g, &j, r) {
            if best.as_ref().is_none_or(|b| c.len() < b.len()) {
                best = Some(c);
            }
        }
    }
    let cycle = best?;
    let mut b = Builder::new().role("r", cycle[0]);
    for (i, &c) in cycle.iter().enumerate() {
        b = b.delete(&format!("c{i}"), c);
    }
    Some(b.finish(F, 5))
}

pub fn detect_l3(g: &Graph) -> Option<ConfigurationMatch> {
    let cx = Ctx::new(g);
    const F: Family = Family::L3;
    let p = &cx.prof;
    if let Some(m) = small_vertex(&cx, F, 1) {
        return Some(m);
    }
    // 2: the 2_{1,1}-vertex w and its neighbors v, x.
    if let Some(w) = cx.first_vertex(|v| cx.is(v, 2, &[1, 1])) {
        let nb = cx.nbrs(w);
        let b = Builder::new().delete("w", w).delete("v", nb[0]).delete("x", nb[1]);
        let u = cx.nbrs(nb[0]).iter().copied().find(|&a| a != w).unwrap();
        let y = cx.nbrs(nb[1]).iter().copied().find(|&a| a != w).unwrap();
        return Some(b.role("u", u).role("y", y).finish(F, 2));
    }
    // 3: center w with 2-neighbors v, x, z and far ends u, y, t.
    if let Some(w) = cx.first_vertex(|v| cx.is(v, 3, &[1, 1, 1])) {
        let mut b = Builder::new().delete("w", w);
        for (&name, &a) in ["v", "x", "z"].iter().zip(cx.nbrs(w)) {
            b = b.delete(name, a);
        }
        for (&name, &a) in ["u", "y", "t"].iter().zip(cx.nbrs(w)) {
            let far = cx.nbrs(a).iter().copied().find(|&f| f != w).unwrap();
            b = b.role(name, far);
        }
        return Some(b.finish(F, 3));
    }
    // 4: u heads a thread u-w-v-x; y, z are u's other neighbors.
    if let Some(u) = cx.first_vertex(|v| cx.is(v, 3, &[0, 0, 2])) {
        let mut ts = traces(g, u);
        ts.sort_by(|a, b| b.len().cmp(&a.len()).then(a.first.cmp(&b.first)));
        let (w, v) = (ts[0].internals[0], ts[0].internals[1]);
        let x = cx.nbrs(v).iter().copied().find(|&a| a != w).unwrap();
        let mut b = Builder::new().role("u", u).delete("w", w).delete("v", v).role("x", x);
        for (&name, &a) in ["y", "z"].iter().zip(cx.nbrs(u).iter().filter(|&&a| a != w)) {
            b = b.role(name, a);
        }
        return Some(b.finish(F, 4));
    }
    // 5: adjacent 3_{0,1,1}-vertices w and r.
    if let Some((w, r)) = cx.first_edge(|v| is_light_3(&p[v]), |_, r| is_light_3(&p[r])) {
        return Some(
            Builder::new()
                .center(g, "w", w, &[0, 1, 1])
                .center(g, "r", r, &[0, 1, 1])
                .finish(F, 5),
        );
    }
    if let Some((c, a, bb)) = cx.first_pair(
        |v| cx.is(v, 3, &[0, 0, 1]),
        |a| is_light_3(&p[a]),
        |b| is_light_3(&p[b]),
    ) {
        return Some(
            Builder::new()
                .center(g, "v", c, &[0, 0, 1])
                .center(g, "a", a, &[0, 1, 1])
                .center(g, "b", bb, &[0, 1, 1])
                .finish(F, 6),
        );
    }
    if let Some(v) = cx.first_vertex(|v| cx.is(v, 4, &[1, 1, 1, 2])) {
        return Some(Builder::new().center(g, "v", v, &[1, 1, 1, 2]).finish(F, 7));
    }
    // 8: w is the 4-vertex, x its 3-neighbor with other neighbors y, z.
    if let Some((w, x)) = cx.first_edge(|v| is_4_0222(&p[v]), |_, x| cx.deg(x) == 3) {
        let b = Builder::new().center(g, "w", w, &[0, 2, 2, 2]).role("x", x);
        return Some(b.outer(g, "y", x).finish(F, 8));
    }
    if let Some((u, v)) = cx.first_edge(|v| cx.is(v, 4, &[0, 1, 1, 1]), |_, w| is_light_3(&p[w])) {
        return Some(
            Builder::new()
                .center(g, "u", u, &[0, 1, 1, 1])
                .center(g, "v", v, &[0, 1, 1])
                .finish(F, 9),
        );
    }
    if let Some((u, v)) = cx.first_edge(|v| cx.is(v, 4, &[0, 1, 1, 1]), |_, w| is_4_0222(&p[w])) {
        let b = Builder::new()
            .center(g, "u", u, &[0, 1, 1, 1])
            .center(g, "v", v, &[0, 2, 2, 2]);
        return Some(b.finish(F, 10));
    }
    if let Some((c, a, bb)) = cx.first_pair(
        |v| cx.is(v, 4, &[0, 0, 2, 2]),
        |a| is_4_0222(&p[a]),
        |b| is_4_0222(&p[b]),
    ) {
        return Some(
            Builder::new()
                .center(g, "w", c, &[0, 0, 2, 2])
                .center(g, "u", a, &[0, 2, 2, 2])
                .center(g, "v", bb, &[0, 2, 2, 2])
                .finish(F, 11),
        );
    }
    if let Some((c, a, bb)) = cx.first_pair(
        |v| cx.is(v, 4, &[0, 0, 2, 2]),
        |a| is_4_0222(&p[a]),
        |b| is_light_3(&p[b]),
    ) {
        return Some(
            Builder::new()
                .center(g, "w", c, &[0, 0, 2, 2])
                .center(g, "u", a, &[0, 2, 2, 2])
                .center(g, "v", bb, &[0, 1, 1])
                .finish(F, 12),
        );
    }
    if let Some(u) = cx.first_vertex(|v| cx.is(v, 5, &[1, 2, 2, 2, 2])) {
        return Some(Builder::new().center(g, "u", u, &[1, 2, 2, 2, 2]).finish(F, 13));
    }
    if let Some((u, v)) = cx.first_edge(|v| cx.is(v, 5, &[0, 2, 2, 2, 2]), |_, w| is_4_0222(&p[w])) {
        return Some(
            Builder::new()
                .center(g, "u", u, &[0, 2, 2, 2, 2])
                .center(g, "v", v, &[0, 2, 2, 2])
                .finish(F, 14),
        );
    }
    None
}

pub fn detect_l5(g: &Graph) -> Option<ConfigurationMatch> {
    let cx = Ctx::new(g);
    const F: Family = Family::L5;
    let p = &cx.prof;
    if let Some(m) = small_vertex(&cx, F, 1) {
        return Some(m);
    }
    // 2: w is the 2_{0,1}-vertex, v its 2-neighbor, u and x the outer ends.
    if let Some(w) = cx.first_vertex(|v| cx.is(v, 2, &[0, 1]) && cx.nbrs(v).iter().all(|&a| cx.deg(a) <= 4)) {
        let nb = cx.nbrs(w);
        let (v, u) = if cx.deg(nb[0]) == 2 {
            (nb[0], nb[1])
        } else {
            (nb[1], nb[0])
        };
        let x = cx.nbrs(v).iter().copied().find(|&a| a != w).unwrap();
        let b = Builder::new().delete("w", w).delete("v", v).role("u", u).role("x", x);
        return Some(b.outer(g, "y", u).finish(F, 2));
    }
    // 3: center w, 2-neighbors v and z, the third neighbor x.
    if let Some(w) = cx.first_vertex(|v| is_light_3(&p[v]) && cx.nbrs(v).iter().all(|&a| cx.deg(a) <= 3)) {
        let mut b = Builder::new().delete("w", w);
        let two: Vec<Vertex> = cx.nbrs(w).iter().copied().filter(|&a| cx.deg(a) == 2).collect();
        for (i, &a) in two.iter().enumerate() {
            b = b.delete(["v", "z", "t"][i], a);
        }
        if let Some(&x) = cx.nbrs(w).iter().find(|&&a| cx.deg(a) != 2) {
            b = b.role("x", x);
        }
        return Some(b.finish(F, 3));
    }
    if let Some(x) = cx.first_vertex(|v| is_family(&p[v], 5, p_1122)) {
        return Some(Builder::new().center(g, "x", x, &p_1122(cx.deg(x))).finish(F, 4));
    }
    // 5: the 3-neighbor v stays in the graph.
    if let Some((x, v)) = cx.first_edge(|v| is_family(&p[v], 5, p_022), |_, w| cx.deg(w) == 3) {
        let b = Builder::new().center(g, "x", x, &p_022(cx.deg(x))).role("v", v);
        return Some(b.outer(g, "v", v).finish(F, 5));
    }
    if let Some((v, u)) = cx.first_edge(|v| is_family(&p[v], 5, p_0122), |_, w| is_l5_partner(&p[w])) {
        let upat = if cx.deg(u) == 3 {
            vec![0, 1, 1]
        } else {
            p_01122(cx.deg(u))
        };
        return Some(
            Builder::new()
                .center(g, "v", v, &p_0122(cx.deg(v)))
                .center(g, "u", u, &upat)
                .finish(F, 6),
        );
    }
    if let Some((x, r, s)) = cx.first_pair(
        |v| is_family(&p[v], 5, p_0022),
        |a| is_light_3(&p[a]),
        |b| is_light_3(&p[b]),
    ) {
        return Some(
            Builder::new()
                .center(g, "x", x, &p_0022(cx.deg(x)))
                .center(g, "r", r, &[0, 1, 1])
                .center(g, "s", s, &[0, 1, 1])
                .finish(F, 7),
        );
    }
    if let Some((x, u, v)) = cx.first_pair(
        |v| is_family(&p[v], 5, p_0022),
        |a| is_l5_partner(&p[a]),
        |b| is_family(&p[b], 5, p_0122),
    ) {
        let upat = if cx.deg(u) == 3 {
            vec![0, 1, 1]
        } else {
            p_01122(cx.deg(u))
        };
        return Some(
            Builder::new()
                .center(g, "x", x, &p_0022(cx.deg(x)))
                .center(g, "u", u, &upat)
                .center(g, "v", v, &p_0122(cx.deg(v)))
                .finish(F, 8),
        );
    }
    None
}

/// Re-checks a match against `g` from scratch: profiles are recomputed, the
/// kind's defining conditions are tested on the role vertices, and the
/// deletion set must consist of alive role vertices.
pub fn validate_match(g: &Graph, m: &ConfigurationMatch) -> Result<(), String> {
    if m.deletion_set.is_empty() {
        return Err("empty deletion set".into());
    }
    let role_vertices: Vec<Vertex> = m.roles.values().copied().collect();
    for &v in &m.deletion_set {
        if !g.is_alive(v) {
            return Err(format!("deleted vertex {v} is not in the graph"));
        }
        if !role_vertices.contains(&v) {
            return Err(format!("deleted vertex {v} has no role"));
        }
    }
    let r = |name: &str| m.role(name).ok_or_else(|| format!("missing role {name}"));
    let prof = |v: Vertex| classify_vertex(g, v);
    let is = |v: Vertex, k: usize, pat: &[usize]| prof(v).is(k, pat);
    let adj = |a: Vertex, b: Vertex| g.has_edge(a, b);
    let ok = match (m.family, m.kind) {
        (Family::L2, 0) | (Family::L3, 1) | (Family::L5, 1) => g.degree(r("v")?) <= 1,
        (Family::L2, 1) => is(r("x")?, 2, &[1, 1]),
        (Family::L2, 2) => {
            let (x, y) = (r("x")?, r("y")?);
            is(x, 3, &[1, 1, 2]) && is(y, 2, &[0, 1]) && adj(x, y)
        }
        (Family::L2, 3) => is(r("x")?, 4, &[2, 2, 2, 2]),
        (Family::L2, 4) => {
            let (u, v, w, x) = (r("u")?, r("v")?, r("w")?, r("x")?);
            is(u, 3, &[0, 1, 2])
                && adj(u, v)
                && g.degree(v) == 3
                && g.degree(w) == 2
                && g.degree(x) == 2
                && adj(v, w)
                && adj(v, x)
                && adj(w, x)
        }
        (Family::L2, 5) => {
            let j = build_j(g);
            let c = &m.deletion_set;
            let distinct = {
                let mut s = c.clone();
                s.sort_unstable();
                s.dedup();
                s.len() == c.len()
            };
            distinct
                && c.len() >= 3
                && c.iter().all(|&v| j.contains(v))
                && (0..c.len()).all(|i| adj(c[i], c[(i + 1) % c.len()]))
                && c.iter().any(|&v| j.degree(v) == 3)
        }
        (Family::L3, 2) => is(r("w")?, 2, &[1, 1]),
        (Family::L3, 3) => is(r("w")?, 3, &[1, 1, 1]),
        (Family::L3, 4) => {
            let (u, w, v) = (r("u")?, r("w")?, r("v")?);
            is(u, 3, &[0, 0, 2]) && adj(u, w) && adj(w, v) && g.degree(w) == 2 && g.degree(v) == 2
        }
        (Family::L3, 5) => {
            let (w, x) = (r("w")?, r("r")?);
            is(w, 3, &[0, 1, 1]) && is(x, 3, &[0, 1, 1]) && adj(w, x)
        }
        (Family::L3, 6) => {
            let (v, a, b) = (r("v")?, r("a")?, r("b")?);
            is(v, 3, &[0, 0, 1]) && a != b && adj(v, a) && adj(v, b) && is(a, 3, &[0, 1, 1]) && is(b, 3, &[0, 1, 1])
        }
        (Family::L3, 7) => is(r("v")?, 4, &[1, 1, 1, 2]),
        (Family::L3, 8) => {
            let (w, x) = (r("w")?, r("x")?);
            is(w, 4, &[0, 2, 2, 2]) && adj(w, x) && g.degree(x) == 3
        }
        (Family::L3, 9) => {
            let (u, v) = (r("u")?, r("v")?);
            is(u, 4, &[0, 1, 1, 1]) && is(v, 3, &[0, 1, 1]) && adj(u, v)
        }
        (Family::L3, 10) => {
            let (u, v) = (r("u")?, r("v")?);
            is(u, 4, &[0, 1, 1, 1]) && is(v, 4, &[0, 2, 2, 2]) && adj(u, v)
        }
        (Family::L3, 11) | (Family::L3, 12) => {
            let (w, u, v) = (r("w")?, r("u")?, r("v")?);
            let second = if m.kind == 11 {
                is(v, 4, &[0, 2, 2, 2])
            } else {
                is(v, 3, &[0, 1, 1])
            };
            is(w, 4, &[0, 0, 2, 2]) && u != v && adj(w, u) && adj(w, v) && is(u, 4, &[0, 2, 2, 2]) && second
        }
        (Family::L3, 13) => is(r("u")?, 5, &[1, 2, 2, 2, 2]),
        (Family::L3, 14) => {
            let (u, v) = (r("u")?, r("v")?);
            is(u, 5, &[0, 2, 2, 2, 2]) && is(v, 4, &[0, 2, 2, 2]) && adj(u, v)
        }
        (Family::L5, 2) => {
            let w = r("w")?;
            is(w, 2, &[0, 1]) && g.neighbors(w).iter().all(|&a| g.degree(a) <= 4)
        }
        (Family::L5, 3) => {
            let w = r("w")?;
            is(w, 3, &[0, 1, 1]) && g.neighbors(w).iter().all(|&a| g.degree(a) <= 3)
        }
        (Family::L5, 4) => is_family(&prof(r("x")?), 5, p_1122),
        (Family::L5, 5) => {
            let (x, v) = (r("x")?, r("v")?);
            is_family(&prof(x), 5, p_022) && adj(x, v) && g.degree(v) == 3
        }
        (Family::L5, 6) => {
            let (v, u) = (r("v")?, r("u")?);
            is_family(&prof(v), 5, p_0122) && is_l5_partner(&prof(u)) && adj(u, v)
        }
        (Family::L5, 7) => {
            let (x, a, b) = (r("x")?, r("r")?, r("s")?);
            is_family(&prof(x), 5, p_0022)
                && a != b
                && adj(x, a)
                && adj(x, b)
                && is(a, 3, &[0, 1, 1])
                && is(b, 3, &[0, 1, 1])
        }
        (Family::L5, 8) => {
            let (x, u, v) = (r("x")?, r("u")?, r("v")?);
            is_family(&prof(x), 5, p_0022)
                && u != v
                && adj(x, u)
                && adj(x, v)
                && is_l5_partner(&prof(u))
                && is_family(&prof(v), 5, p_0122)
        }
        _ => return Err(format!("unknown kind {} for {}", m.kind, m.family)),
    };
    if ok {
        Ok(())
    } else {
        Err(format!("{m} does not hold for its role vertices"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnavoidabilityReport {
    pub family: Family,
    /// Whether the graph meets the family's hypotheses.
    pub in_hypothesis: bool,
    #[serde(serialize_with = "crate::density::serialize_ratio")]
    pub mad: Rational,
    pub girth: Option<usize>,
    pub matched: Option<ConfigurationMatch>,
    /// False only for an in-hypothesis graph without a match.
    pub pass: bool,
}

/// Runs the family detector and checks it against the hypotheses
/// `Mad(g) < mad_bound` and `girth(g) >= girth_min`.
pub fn assert_unavoidable(g: &Graph, family: Family, mad_bound: Rational, girth_min: usize) -> UnavoidabilityReport {
    let mad = mad_exact(g)
        .map(|r| r.value)
        .unwrap_or_else(|_| Rational::from_integer(0));
    let gi = girth(g);
    let in_hypothesis = mad < mad_bound && gi.is_none_or(|x| x >= girth_min);
    let matched = detect(g, family);
    if let Some(m) = &matched {
        debug_assert_eq!(validate_match(g, m), Ok(()));
    }
    let pass = !in_hypothesis || matched.is_some() || g.is_empty();
    UnavoidabilityReport {
        family,
        in_hypothesis,
        mad,
        girth: gi,
        matched,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    /// Attaches a path with `len` new vertices to `v`, returning its far end.
    fn pendant_path(g: &mut Graph, v: Vertex, len: usize) -> Vertex {
        let mut prev = v;
        for _ in 0..len {
            let x = g.add_vertex();
            g.add_edge(prev, x).unwrap();
            prev = x;
        }
        prev
    }

    /// The Heawood graph: cubic, girth 6.
    fn heawood() -> Graph {
        let mut edges: Vec<(usize, usize)> = (0..14).map(|i| (i, (i + 1) % 14)).collect();
        for i in (0..14).step_by(2) {
            edges.push((i, (i + 5) % 14));
        }
        Graph::from_edges(14, edges).unwrap()
    }

    #[test]
    fn j_of_graph_without_2_vertices_is_empty() {
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(build_j(&k4).members.is_empty());
    }

    #[test]
    fn j_contains_2_01_and_3_022() {
        // v = 0 with two 2-threads closing a cycle and a K4 on the third side.
        let mut g = Graph::new(1);
        let a = pendant_path(&mut g, 0, 2);
        let b = pendant_path(&mut g, 0, 2);
        let hub = g.add_vertex();
        g.add_edge(a, hub).unwrap();
        g.add_edge(b, hub).unwrap();
        let c = g.add_vertex();
        g.add_edge(0, c).unwrap();
        let d = g.add_vertex();
        let e = g.add_vertex();
        for (x, y) in [(c, d), (c, e), (d, e), (hub, d)] {
            g.add_edge(x, y).unwrap();
        }
        let j = build_j(&g);
        assert!(j.contains(0));
        assert!(j.contains(1) && j.contains(2));
        assert!(j.edges.contains(&(0, 1)));
        assert!(!j.contains(c));
    }

    #[test]
    fn trees_hit_small_vertex() {
        let tree = Graph::from_edges(4, [(0, 1), (1, 2), (1, 3)]).unwrap();
        for fam in Family::ALL {
            let m = detect(&tree, fam).unwrap();
            assert_eq!(m.name, "<=1-vertex");
            assert_eq!(m.deletion_set, vec![0]);
        }
    }

    #[test]
    fn kind_1_on_long_cycle() {
        let m = detect_l2(&cycle(7)).unwrap();
        assert_eq!(m.kind, 1);
        assert_eq!(m.deletion_set, vec![0, 1, 6]);
        validate_match(&cycle(7), &m).unwrap();
    }

    #[test]
    fn kind_2_on_triangle() {
        // Triangle x=0, y=1, z=2 plus a pendant 1-thread 0-3-4, with 4 on K4.
        let mut g = cycle(3);
        let far = pendant_path(&mut g, 0, 2);
        let k = [far, g.add_vertex(), g.add_vertex(), g.add_vertex()];
        for i in 0..4 {
            for j in i + 1..4 {
                g.add_edge(k[i], k[j]).unwrap();
            }
        }
        let m = detect_l2(&g).unwrap();
        assert_eq!(m.kind, 2);
        assert_eq!(m.role("x"), Some(0));
        assert_eq!(m.role("y"), Some(1));
        validate_match(&g, &m).unwrap();
    }

    #[test]
    fn l3_examples() {
        // Center 0 with three 1-threads, each ending on a triangle.
        let mut spider = Graph::new(1);
        for _ in 0..3 {
            let end = pendant_path(&mut spider, 0, 2);
            let a = spider.add_vertex();
            let b = spider.add_vertex();
            spider.add_edge(end, a).unwrap();
            spider.add_edge(end, b).unwrap();
            spider.add_edge(a, b).unwrap();
        }
        let m = detect_l3(&spider).unwrap();
        assert_eq!((m.kind, m.role("w")), (3, Some(0)), "{m}");
        validate_match(&spider, &m).unwrap();

        assert_eq!(detect_l3(&heawood()), None);
    }

    #[test]
    fn l3_kind_4() {
        // K4 on 0..3, then 0 heads a 2-thread to another K4.
        let mut g = Graph::from_edges(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (0, 3)]).unwrap();
        g.remove_edge(0, 3);
        let far = pendant_path(&mut g, 0, 3);
        let others: Vec<usize> = (0..3).map(|_| g.add_vertex()).collect();
        for &o in &others {
            g.add_edge(far, o).unwrap();
        }
        g.add_edge(others[0], others[1]).unwrap();
        g.add_edge(others[1], others[2]).unwrap();
        g.add_edge(others[0], others[2]).unwrap();
        // 0 now has degree 3 with a 2-thread 0-4-5-6.
        let m = detect_l3(&g).unwrap();
        assert_eq!(m.kind, 4, "{m}");
        assert_eq!(m.role("u"), Some(0));
        assert_eq!(m.deletion_set, vec![4, 5]);
        validate_match(&g, &m).unwrap();
    }

    #[test]
    fn l5_kind_4_k5() {
        // Degree-5 center with four 2-threads and one 1-thread into a K6.
        let mut g = Graph::new(1);
        let mut ends = Vec::new();
        for len in [1, 2, 2, 2, 2] {
            ends.push(pendant_path(&mut g, 0, len));
        }
        let k: Vec<usize> = (0..6).map(|_| g.add_vertex()).collect();
        for i in 0..6 {
            for j in i + 1..6 {
                g.add_edge(k[i], k[j]).unwrap();
            }
        }
        for (i, &e) in ends.iter().enumerate() {
            g.add_edge(e, k[i]).unwrap();
        }
        assert_eq!(classify_vertex(&g, 0).to_string(), "5_{1,2,2,2,2}");
        let m = detect_l5(&g).unwrap();
        assert_eq!(m.kind, 4, "{m}");
        assert_eq!(m.role("x"), Some(0));
        // The pattern is 5_{1,1,2,2,2}: one internal on one 2-thread stays.
        assert_eq!(m.deletion_set.len(), 1 + 2 + 3 * 2);
        validate_match(&g, &m).unwrap();
    }

    #[test]
    fn kind_5_cycle() {
        // Two 3_{0,2,2}-vertices 0 and 1, adjacent, with 2-threads between
        // them forming J-cycles, and a heavy part to keep other configs away.
        let mut g = Graph::new(2);
        g.add_edge(0, 1).unwrap();
        for _ in 0..2 {
            let a = g.add_vertex();
            let b = g.add_vertex();
            g.add_edge(0, a).unwrap();
            g.add_edge(a, b).unwrap();
            g.add_edge(b, 1).unwrap();
        }
        // 0 and 1 have degree 3 and signature [0,2,2].
        let j = build_j(&g);
        assert_eq!(j.degree(0), 3);
        let m = detect_l2(&g).unwrap();
        assert_eq!(m.kind, 5, "{m}");
        assert_eq!(m.deletion_set.len(), 4);
        validate_match(&g, &m).unwrap();
    }

    #[test]
    fn unavoidable_on_c5() {
        let rep = assert_unavoidable(&cycle(5), Family::L2, Rational::new(26, 11), 3);
        assert!(rep.in_hypothesis && rep.pass);
        assert!(rep.matched.is_some());
    }

    #[test]
    fn family_text() {
        assert_eq!("l3".parse::<Family>(), Ok(Family::L3));
        assert!("L4".parse::<Family>().is_err());
        assert_eq!(Family::L5.to_string(), "L5");
    }
}
