//! Vertex partitions into an induced forest `F` and distance-constrained
//! independent classes, built by reduce-and-extend: delete a reducible
//! configuration, partition what is left, then place the deleted vertices
//! back.
//!
//! Placement first tries the configuration's explicit rule (a short list of
//! templates naming which vertices go to an independent class, everything else
//! going to `F`), then a backtracking search over the deleted vertices, then
//! the same search over growing balls around them. Every step is checked by
//! exact incremental bookkeeping, and the final partition by
//! [`verify_partition`].

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::Serialize;
use thiserror::Error;

use crate::config::{detect, validate_match, ConfigurationMatch, Family};
use crate::density::{format_ratio, mad_exact};
use crate::graph::{Graph, Vertex};
use crate::io::to_graph6;
use crate::traversal::girth;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Scheme {
    FI,
    FI1I2,
    FI1I2I3,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::FI, Scheme::FI1I2, Scheme::FI1I2I3];

    pub fn independent_classes(self) -> &'static [Class] {
        match self {
            Scheme::FI => &[Class::I1],
            Scheme::FI1I2 => &[Class::I1, Class::I2],
            Scheme::FI1I2I3 => &[Class::I1, Class::I2, Class::I3],
        }
    }

    /// All classes, `F` first.
    pub fn classes(self) -> &'static [Class] {
        match self {
            Scheme::FI => &[Class::F, Class::I1],
            Scheme::FI1I2 => &[Class::F, Class::I1, Class::I2],
            Scheme::FI1I2I3 => &[Class::F, Class::I1, Class::I2, Class::I3],
        }
    }

    /// Search order: independent classes first, then `F`.
    fn search_order(self) -> &'static [Class] {
        match self {
            Scheme::FI => &[Class::I1, Class::F],
            Scheme::FI1I2 => &[Class::I1, Class::I2, Class::F],
            Scheme::FI1I2I3 => &[Class::I1, Class::I2, Class::I3, Class::F],
        }
    }

    /// The configuration family whose reductions build this scheme.
    pub fn family(self) -> Family {
        match self {
            Scheme::FI => Family::L2,
            Scheme::FI1I2 => Family::L3,
            Scheme::FI1I2I3 => Family::L5,
        }
    }

    pub fn for_family(family: Family) -> Scheme {
        match family {
            Family::L2 => Scheme::FI,
            Family::L3 => Scheme::FI1I2,
            Family::L5 => Scheme::FI1I2I3,
        }
    }

    /// Colors used by a star coloring assembled from such a partition.
    pub fn colors(self) -> usize {
        3 + self.independent_classes().len()
    }

    /// Whether `I1` is measured inside `G[F ∪ I1]` rather than in `G`.
    fn i1_in_forest_part(self) -> bool {
        self == Scheme::FI1I2
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::FI => "FI",
            Scheme::FI1I2 => "FI1I2",
            Scheme::FI1I2I3 => "FI1I2I3",
        })
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "FI" => Ok(Scheme::FI),
            "FI1I2" => Ok(Scheme::FI1I2),
            "FI1I2I3" => Ok(Scheme::FI1I2I3),
            _ => Err(format!("unknown scheme `{s}` (expected FI, FI1I2 or FI1I2I3)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Class {
    F,
    I1,
    I2,
    I3,
}

impl Class {
    /// Slot of an independent class in the counter arrays.
    fn slot(self) -> usize {
        match self {
            Class::F => unreachable!("F has no independence slot"),
            Class::I1 => 0,
            Class::I2 => 1,
            Class::I3 => 2,
        }
    }

    /// Text label; the single independent class of [`Scheme::FI`] is `I`.
    pub fn label(self, scheme: Scheme) -> &'static str {
        match (self, scheme) {
            (Class::F, _) => "F",
            (Class::I1, Scheme::FI) => "I",
            (Class::I1, _) => "I1",
            (Class::I2, _) => "I2",
            (Class::I3, _) => "I3",
        }
    }

    fn from_label(s: &str) -> Option<Class> {
        match s {
            "F" => Some(Class::F),
            "I" | "I1" => Some(Class::I1),
            "I2" => Some(Class::I2),
            "I3" => Some(Class::I3),
            _ => None,
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label(Scheme::FI1I2I3))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("vertex {vertex} has no class")]
    Uncovered { vertex: Vertex },
    #[error("vertex {vertex} has a class but is not in the graph")]
    NotAVertex { vertex: Vertex },
    #[error("vertex {vertex} is in class {class}, which scheme {scheme} does not have")]
    ClassNotInScheme {
        vertex: Vertex,
        class: Class,
        scheme: Scheme,
    },
    #[error("Mad = {mad} is not below {bound}")]
    MadTooLarge { mad: String, bound: String },
    #[error("girth {girth} is below the required {required}")]
    GirthTooSmall { girth: usize, required: usize },
    #[error("no {family} configuration found in a non-empty graph: {graph6}")]
    NoConfiguration { family: Family, graph6: String },
    #[error("no extension over {deleted:?} after {matched}: {graph6}")]
    ExtensionNotFound {
        matched: String,
        deleted: Vec<Vertex>,
        graph6: String,
    },
    #[error("partial partition is invalid at vertex {vertex}")]
    InvalidPartial { vertex: Vertex },
    #[error("assembled partition failed verification: {0}")]
    Unsound(String),
    #[error("partition parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Class per vertex id; `None` for ids outside the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub scheme: Scheme,
    pub assignment: Vec<Option<Class>>,
}

impl Partition {
    pub fn new(scheme: Scheme, order: usize) -> Self {
        Partition {
            scheme,
            assignment: vec![None; order],
        }
    }

    /// Every vertex of `g` in `F`.
    pub fn all_forest(g: &Graph, scheme: Scheme) -> Self {
        let mut p = Partition::new(scheme, g.order());
        for v in g.vertices() {
            p.assignment[v] = Some(Class::F);
        }
        p
    }

    pub fn class_of(&self, v: Vertex) -> Option<Class> {
        self.assignment.get(v).copied().flatten()
    }

    pub fn set(&mut self, v: Vertex, c: Class) {
        if v >= self.assignment.len() {
            self.assignment.resize(v + 1, None);
        }
        self.assignment[v] = Some(c);
    }

    pub fn members(&self, c: Class) -> Vec<Vertex> {
        (0..self.assignment.len())
            .filter(|&v| self.assignment[v] == Some(c))
            .collect()
    }

    /// Class label to members, for every class of the scheme.
    pub fn classes(&self) -> BTreeMap<&'static str, Vec<Vertex>> {
        self.scheme
            .classes()
            .iter()
            .map(|&c| (c.label(self.scheme), self.members(c)))
            .collect()
    }

    /// `scheme NAME` followed by one `LABEL v v ...` line per class.
    pub fn to_lines(&self) -> String {
        let mut out = format!("scheme {}\n", self.scheme);
        for &c in self.scheme.classes() {
            out.push_str(c.label(self.scheme));
            for v in self.members(c) {
                out.push_str(&format!(" {v}"));
            }
            out.push('\n');
        }
        out
    }

    /// Inverse of [`Partition::to_lines`]; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, DecomposeError> {
        let err = |line: usize, message: String| DecomposeError::Parse { line, message };
        let mut scheme = None;
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().unwrap();
            if head == "scheme" {
                let name = words.next().ok_or_else(|| err(i + 1, "missing scheme name".into()))?;
                scheme = Some(name.parse::<Scheme>().map_err(|e| err(i + 1, e))?);
                continue;
            }
            let class = Class::from_label(head).ok_or_else(|| err(i + 1, format!("unknown class `{head}`")))?;
            for w in words {
                let v: Vertex = w.parse().map_err(|_| err(i + 1, format!("bad vertex `{w}`")))?;
                pairs.push((v, class, i + 1));
            }
        }
        let scheme = scheme.ok_or_else(|| err(1, "missing `scheme` line".into()))?;
        let order = pairs.iter().map(|&(v, ..)| v + 1).max().unwrap_or(0);
        let mut p = Partition::new(scheme, order);
        for (v, c, line) in pairs {
            if p.assignment[v].is_some() {
                return Err(err(line, format!("vertex {v} listed twice")));
            }
            p.assignment[v] = Some(c);
        }
        Ok(p)
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Partition", 2)?;
        st.serialize_field("scheme", &self.scheme)?;
        st.serialize_field("classes", &self.classes())?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PartitionViolation {
    /// `G[F]` contains this cycle.
    ForestCycle { cycle: Vec<Vertex> },
    /// `a` and `b` share class `class` but are within distance 2 where the
    /// scheme forbids it.
    TooClose { class: Class, a: Vertex, b: Vertex },
}

impl fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionViolation::ForestCycle { cycle } => write!(f, "F contains the cycle {cycle:?}"),
            PartitionViolation::TooClose { class, a, b } => {
                write!(f, "{a} and {b} in {class} are within distance 2")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionVerdict {
    pub ok: bool,
    pub violation: Option<PartitionViolation>,
}

/// Checks the scheme's conditions from scratch: `G[F]` is acyclic, and each
/// independent class has pairwise distance greater than 2 in `G`, except `I1`
/// of [`Scheme::FI1I2`], which is measured in `G[F ∪ I1]`.
pub fn verify_partition(g: &Graph, p: &Partition) -> Result<PartitionVerdict, DecomposeError> {
    let class = |v: Vertex| p.class_of(v);
    for v in 0..p.assignment.len().max(g.order()) {
        let alive = v < g.order() && g.is_alive(v);
        match (alive, class(v)) {
            (true, None) => return Err(DecomposeError::Uncovered { vertex: v }),
            (false, Some(_)) => return Err(DecomposeError::NotAVertex { vertex: v }),
            (true, Some(c)) if !p.scheme.classes().contains(&c) => {
                return Err(DecomposeError::ClassNotInScheme {
                    vertex: v,
                    class: c,
                    scheme: p.scheme,
                })
            }
            _ => {}
        }
    }
    let bad = |violation| {
        Ok(PartitionVerdict {
            ok: false,
            violation: Some(violation),
        })
    };
    if let Some(cycle) = forest_cycle(g, |v| class(v) == Some(Class::F)) {
        return bad(PartitionViolation::ForestCycle { cycle });
    }
    for &c in p.scheme.independent_classes() {
        let in_h = p.scheme.i1_in_forest_part() && c == Class::I1;
        for z in g.vertices() {
            if in_h && !matches!(class(z), Some(Class::F | Class::I1)) {
                continue;
            }
            let mut hit = None;
            for u in std::iter::once(z).chain(g.neighbors(z).iter().copied()) {
                if class(u) == Some(c) {
                    match hit {
                        Some(a) => return bad(PartitionViolation::TooClose { class: c, a, b: u }),
                        None => hit = Some(u),
                    }
                }
            }
        }
    }
    Ok(PartitionVerdict {
        ok: true,
        violation: None,
    })
}

/// A cycle of the subgraph induced by the vertices satisfying `keep`.
fn forest_cycle(g: &Graph, keep: impl Fn(Vertex) -> bool) -> Option<Vec<Vertex>> {
    let mut dsu = Dsu::new(g.order());
    let (u, v) = g
        .edges()
        .filter(|&(u, v)| keep(u) && keep(v))
        .find(|&(u, v)| !dsu.union(u, v))?;
    // Path from u to v avoiding the edge uv closes the cycle.
    let mut parent = vec![usize::MAX; g.order()];
    parent[u] = u;
    let mut queue = VecDeque::from([u]);
    while let Some(a) = queue.pop_front() {
        for &b in g.neighbors(a) {
            if keep(b) && parent[b] == usize::MAX && !(a == u && b == v) {
                parent[b] = a;
                queue.push_back(b);
            }
        }
    }
    let mut cycle = vec![v];
    let mut x = v;
    while x != u {
        x = parent[x];
        cycle.push(x);
    }
    Some(cycle)
}

/// Union-find with union by size and undo.
#[derive(Clone, Debug)]
struct Dsu {
    parent: Vec<usize>,
    size: Vec<u32>,
    history: Vec<(usize, usize)>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            size: vec![1; n],
            history: Vec::new(),
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.history.push((rb, ra));
        true
    }

    fn rollback(&mut self, k: usize) {
        for _ in 0..k {
            let (child, root) = self.history.pop().expect("rollback past start");
            self.parent[child] = child;
            self.size[root] -= self.size[child];
        }
    }
}

/// Partial assignment with exact incremental legality checks.
///
/// `near[s][z]` counts vertices of independent class `s` in the closed
/// neighborhood of `z`; `i1_nbrs[z]` counts `I1`-neighbors of `z` (used when
/// `I1` is measured in `G[F ∪ I1]`).
#[derive(Clone, Debug)]
struct State {
    scheme: Scheme,
    assign: Vec<Option<Class>>,
    near: [Vec<u32>; 3],
    i1_nbrs: Vec<u32>,
    dsu: Dsu,
    log: Vec<(Vertex, usize)>,
}

impl State {
    fn new(scheme: Scheme, order: usize) -> Self {
        State {
            scheme,
            assign: vec![None; order],
            near: [vec![0; order], vec![0; order], vec![0; order]],
            i1_nbrs: vec![0; order],
            dsu: Dsu::new(order),
            log: Vec::new(),
        }
    }

    /// Rebuilds the bookkeeping for `assign`, failing at the first vertex
    /// whose class conflicts with earlier ones.
    fn from_assignment(g: &Graph, scheme: Scheme, assign: &[Option<Class>]) -> Result<Self, Vertex> {
        let mut st = State::new(scheme, g.order());
        for v in g.vertices() {
            if let Some(c) = assign.get(v).copied().flatten() {
                if !st.try_put(g, v, c) {
                    return Err(v);
                }
            }
        }
        Ok(st)
    }

    fn measured_in_h(&self, c: Class) -> bool {
        self.scheme.i1_in_forest_part() && c == Class::I1
    }

    /// Recomputes the counters of freshly restored, unassigned vertices.
    fn attach(&mut self, g: &Graph, vs: &[Vertex]) {
        for &v in vs {
            debug_assert!(self.assign[v].is_none());
            for s in 0..3 {
                self.near[s][v] = 0;
            }
            self.i1_nbrs[v] = 0;
            for &w in g.neighbors(v) {
                if let Some(c) = self.assign[w] {
                    if c != Class::F {
                        self.near[c.slot()][v] += 1;
                    }
                    if c == Class::I1 {
                        self.i1_nbrs[v] += 1;
                    }
                }
            }
        }
    }

    fn can(&self, g: &Graph, v: Vertex, c: Class) -> bool {
        debug_assert!(self.assign[v].is_none());
        match c {
            Class::F => {
                if self.scheme.i1_in_forest_part() && self.i1_nbrs[v] >= 2 {
                    return false;
                }
                let mut roots: Vec<usize> = Vec::new();
                for &w in g.neighbors(v) {
                    if self.assign[w] == Some(Class::F) {
                        let r = self.dsu.find(w);
                        if roots.contains(&r) {
                            return false;
                        }
                        roots.push(r);
                    }
                }
                true
            }
            _ if self.measured_in_h(c) => {
                self.i1_nbrs[v] == 0
                    && g.neighbors(v)
                        .iter()
                        .all(|&w| !(self.assign[w] == Some(Class::F) && self.i1_nbrs[w] > 0))
            }
            _ => {
                let near = &self.near[c.slot()];
                near[v] == 0 && g.neighbors(v).iter().all(|&w| near[w] == 0)
            }
        }
    }

    fn put(&mut self, g: &Graph, v: Vertex, c: Class) {
        let mut unions = 0;
        if c == Class::F {
            for &w in g.neighbors(v) {
                if self.assign[w] == Some(Class::F) && self.dsu.union(v, w) {
                    unions += 1;
                }
            }
        } else {
            let s = c.slot();
            self.near[s][v] += 1;
            for &w in g.neighbors(v) {
                self.near[s][w] += 1;
                if c == Class::I1 {
                    self.i1_nbrs[w] += 1;
                }
            }
        }
        self.assign[v] = Some(c);
        self.log.push((v, unions));
    }

    fn try_put(&mut self, g: &Graph, v: Vertex, c: Class) -> bool {
        let ok = self.can(g, v, c);
        if ok {
            self.put(g, v, c);
        }
        ok
    }

    fn undo(&mut self, g: &Graph) {
        let (v, unions) = self.log.pop().expect("undo past start");
        let c = self.assign[v].take().expect("logged vertex is assigned");
        if c == Class::F {
            self.dsu.rollback(unions);
        } else {
            let s = c.slot();
            self.near[s][v] -= 1;
            for &w in g.neighbors(v) {
                self.near[s][w] -= 1;
                if c == Class::I1 {
                    self.i1_nbrs[w] -= 1;
                }
            }
        }
    }

    fn undo_n(&mut self, g: &Graph, k: usize) {
        for _ in 0..k {
            self.undo(g);
        }
    }

    fn partition(&self) -> Partition {
        Partition {
            scheme: self.scheme,
            assignment: self.assign.clone(),
        }
    }
}

/// Depth-first search assigning `vars` in order, independent classes before
/// `F`. Each class tried costs one unit of `budget`.
fn search(g: &Graph, st: &mut State, vars: &[Vertex], budget: &mut u64) -> bool {
    fn rec(g: &Graph, st: &mut State, vars: &[Vertex], i: usize, budget: &mut u64) -> bool {
        let Some(&v) = vars.get(i) else {
            return true;
        };
        for &c in st.scheme.search_order() {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            if st.can(g, v, c) {
                st.put(g, v, c);
                if rec(g, st, vars, i + 1, budget) {
                    return true;
                }
                st.undo(g);
            }
        }
        false
    }
    rec(g, st, vars, 0, budget)
}

/// Where a template sends a designated vertex.
#[derive(Clone, Copy, Debug)]
enum Slot {
    /// The first independent class that is legal.
    AnyI,
    F,
}

type Template = Vec<(Vertex, Slot)>;

/// The explicit placement rules of a configuration, as templates tried in
/// order; vertices a template does not mention go to `F`.
fn templates(m: &ConfigurationMatch) -> Option<Vec<Template>> {
    let r = |name: &str| m.role(name);
    let one = |name: &str| -> Template { r(name).map(|v| vec![(v, Slot::AnyI)]).unwrap_or_default() };
    match (m.family, m.kind) {
        (Family::L2, 0) | (Family::L3, 1) | (Family::L5, 1) => Some(vec![vec![]]),
        (Family::L2, 1) => Some(vec![one("x"), vec![]]),
        (Family::L2, 2) => Some(vec![one("x"), vec![], one("y")]),
        (Family::L2, 3) => Some(vec![one("x")]),
        (Family::L2, 4) => Some(vec![one("x"), one("w")]),
        (Family::L2, _) => None,
        (family, kind) => {
            let names: &[&str] = match (family, kind) {
                (Family::L3, 2) | (Family::L3, 3) | (Family::L3, 8) => &["w"],
                (Family::L3, 4) => &["w", "v"],
                (Family::L3, 5) => &["w", "r"],
                (Family::L3, 6) => &["v", "a", "b"],
                (Family::L3, 7) => &["v"],
                (Family::L3, 9) | (Family::L3, 10) | (Family::L3, 14) => &["u", "v"],
                (Family::L3, 11) | (Family::L3, 12) => &["w", "u", "v"],
                (Family::L3, 13) => &["u"],
                (Family::L5, 2) => &["w", "v"],
                (Family::L5, 3) => &["w"],
                (Family::L5, 4) | (Family::L5, 5) => &["x"],
                (Family::L5, 6) => &["v", "u"],
                (Family::L5, 7) => &["x", "r", "s"],
                (Family::L5, 8) => &["x", "u", "v"],
                _ => return None,
            };
            let designated: Vec<Vertex> = names
                .iter()
                .filter_map(|&n| r(n))
                .filter(|v| m.deletion_set.contains(v))
                .collect();
            // Every I/F combination of the designated vertices, I first.
            let k = designated.len();
            Some(
                (0..1usize << k)
                    .map(|mask| {
                        designated
                            .iter()
                            .enumerate()
                            .map(|(i, &v)| {
                                (
                                    v,
                                    if mask >> (k - 1 - i) & 1 == 0 {
                                        Slot::AnyI
                                    } else {
                                        Slot::F
                                    },
                                )
                            })
                            .collect()
                    })
                    .collect(),
            )
        }
    }
}

fn apply_template(g: &Graph, st: &mut State, deleted: &[Vertex], t: &Template) -> bool {
    let mut done = 0;
    let mut place = |st: &mut State, v: Vertex, slot: Slot| -> bool {
        let ok = match slot {
            Slot::F => st.try_put(g, v, Class::F),
            Slot::AnyI => st.scheme.independent_classes().iter().any(|&c| st.try_put(g, v, c)),
        };
        done += usize::from(ok);
        ok
    };
    let mut ok = t.iter().all(|&(v, slot)| place(st, v, slot));
    if ok {
        ok = deleted
            .iter()
            .filter(|v| !t.iter().any(|(w, _)| w == *v))
            .all(|&v| place(st, v, Slot::F));
    }
    if !ok {
        st.undo_n(g, done);
    }
    ok
}

type Removed = Vec<(Vertex, Vec<Vertex>)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum ExtensionMethod {
    /// The configuration's explicit rule, template number `template`.
    FastPath { template: usize },
    /// Backtracking over the deleted vertices.
    Search,
    /// Backtracking over the deleted vertices plus a ball of the given radius
    /// around them (`None`: the whole graph).
    Repair { radius: Option<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub matched: ConfigurationMatch,
    /// Deleted vertices with the neighbors they had at deletion time.
    pub removed: Vec<(Vertex, Vec<Vertex>)>,
    pub placements: Vec<(Vertex, Class)>,
    /// Earlier vertices whose class changed during this step.
    pub reassigned: Vec<(Vertex, Class)>,
    #[serde(flatten)]
    pub method: ExtensionMethod,
    /// With cross-checking on small graphs: whether plain search also
    /// extends the state the fast path started from.
    pub search_agrees: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub family: Family,
    pub order: usize,
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    /// Rebuilds the input graph by undoing the deletions in reverse.
    pub fn replay(&self) -> Graph {
        let mut g = Graph::new(self.order);
        for v in 0..self.order {
            g.remove_vertex(v);
        }
        for step in self.steps.iter().rev() {
            for (v, nbrs) in step.removed.iter().rev() {
                g.restore_vertex(*v, nbrs);
            }
        }
        g
    }

    pub fn count(&self, pred: impl Fn(&ExtensionMethod) -> bool) -> usize {
        self.steps.iter().filter(|s| pred(&s.method)).count()
    }
}

#[derive(Clone, Debug)]
pub struct DecomposeOptions {
    pub require_girth: bool,
    /// Refuse inputs outside the Mad/girth hypothesis.
    pub check_preconditions: bool,
    /// On graphs with at most 14 vertices, also run plain search wherever a
    /// fast path fired and record whether it succeeds.
    pub cross_check: bool,
    /// Search nodes allowed per extension attempt.
    pub node_budget: u64,
    /// Largest graph on which the last repair searches every vertex.
    pub full_repair_limit: usize,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            require_girth: true,
            check_preconditions: true,
            cross_check: false,
            node_budget: 2_000_000,
            full_repair_limit: 30,
        }
    }
}

pub fn decompose_fi(g: &Graph) -> Result<(Partition, ReductionTrace), DecomposeError> {
    decompose_with(g, Scheme::FI, &DecomposeOptions::default())
}

pub fn decompose_fi1i2(g: &Graph, require_girth: bool) -> Result<(Partition, ReductionTrace), DecomposeError> {
    let opts = DecomposeOptions {
        require_girth,
        ..Default::default()
    };
    decompose_with(g, Scheme::FI1I2, &opts)
}

pub fn decompose_fi1i2i3(g: &Graph, require_girth: bool) -> Result<(Partition, ReductionTrace), DecomposeError> {
    let opts = DecomposeOptions {
        require_girth,
        ..Default::default()
    };
    decompose_with(g, Scheme::FI1I2I3, &opts)
}

/// Dispatches on the scheme with default options.
pub fn decompose(
    g: &Graph,
    scheme: Scheme,
    require_girth: bool,
) -> Result<(Partition, ReductionTrace), DecomposeError> {
    let opts = DecomposeOptions {
        require_girth,
        ..Default::default()
    };
    decompose_with(g, scheme, &opts)
}

/// Checks the Mad bound (and girth, when required) of the scheme's family.
pub fn check_hypothesis(g: &Graph, scheme: Scheme, require_girth: bool) -> Result<(), DecomposeError> {
    let family = scheme.family();
    if let Ok(r) = mad_exact(g) {
        if r.value >= family.mad_bound() {
            return Err(DecomposeError::MadTooLarge {
                mad: format_ratio(&r.value),
                bound: format_ratio(&family.mad_bound()),
            });
        }
    }
    if require_girth && family.girth_min() > 3 {
        if let Some(gi) = girth(g) {
            if gi < family.girth_min() {
                return Err(DecomposeError::GirthTooSmall {
                    girth: gi,
                    required: family.girth_min(),
                });
            }
        }
    }
    Ok(())
}

pub fn decompose_with(
    g: &Graph,
    scheme: Scheme,
    opts: &DecomposeOptions,
) -> Result<(Partition, ReductionTrace), DecomposeError> {
    if opts.check_preconditions {
        check_hypothesis(g, scheme, opts.require_girth)?;
    }
    let family = scheme.family();
    let mut h = g.clone();
    // Each match with its deleted vertices and their neighbors at deletion.
    let mut reductions: Vec<(ConfigurationMatch, Removed)> = Vec::new();
    while !h.is_empty() {
        let m = detect(&h, family).ok_or_else(|| DecomposeError::NoConfiguration {
            family,
            graph6: to_graph6(&h),
        })?;
        debug_assert_eq!(validate_match(&h, &m), Ok(()));
        let removed = m.deletion_set.iter().map(|&v| (v, h.remove_vertex(v))).collect();
        reductions.push((m, removed));
    }

    let mut st = State::new(scheme, g.order());
    let mut steps = Vec::with_capacity(reductions.len());
    while let Some((m, removed)) = reductions.pop() {
        for (v, nbrs) in removed.iter().rev() {
            h.restore_vertex(*v, nbrs);
        }
        st.attach(&h, &m.deletion_set);
        let before = st.assign.clone();
        let (method, search_agrees) = extend(&h, &mut st, &m, opts)?;
        debug_assert!(verify_partition(&h, &st.partition()).is_ok_and(|v| v.ok));
        let placements = m
            .deletion_set
            .iter()
            .map(|&v| (v, st.assign[v].expect("extension places every deleted vertex")))
            .collect();
        let reassigned = h
            .vertices()
            .filter(|&v| before[v].is_some() && before[v] != st.assign[v])
            .map(|v| (v, st.assign[v].unwrap()))
            .collect();
        steps.push(TraceStep {
            matched: m,
            removed,
            placements,
            reassigned,
            method,
            search_agrees,
        });
    }
    steps.reverse();
    let partition = st.partition();
    let verdict = verify_partition(g, &partition)?;
    if let Some(v) = verdict.violation {
        return Err(DecomposeError::Unsound(v.to_string()));
    }
    let trace = ReductionTrace {
        family,
        order: g.order(),
        steps,
    };
    Ok((partition, trace))
}

fn extend(
    g: &Graph,
    st: &mut State,
    m: &ConfigurationMatch,
    opts: &DecomposeOptions,
) -> Result<(ExtensionMethod, Option<bool>), DecomposeError> {
    let deleted = &m.deletion_set;
    if m.family == Family::L2 && m.kind == 5 {
        settle_low_degree(g, st, deleted);
    }
    if let Some(ts) = templates(m) {
        let start = (opts.cross_check && g.num_vertices() <= 14).then(|| st.clone());
        for (i, t) in ts.iter().enumerate() {
            if apply_template(g, st, deleted, t) {
                let agrees = start.map(|mut s| search(g, &mut s, deleted, &mut opts.node_budget.clone()));
                return Ok((ExtensionMethod::FastPath { template: i }, agrees));
            }
        }
    }
    if search(g, st, deleted, &mut opts.node_budget.clone()) {
        return Ok((ExtensionMethod::Search, None));
    }
    let mut radii: Vec<Option<usize>> = (1..=3).map(Some).collect();
    if g.num_vertices() <= opts.full_repair_limit {
        radii.push(None);
    }
    for radius in radii {
        if repair(g, st, deleted, radius, opts.node_budget) {
            return Ok((ExtensionMethod::Repair { radius }, None));
        }
    }
    Err(DecomposeError::ExtensionNotFound {
        matched: m.to_string(),
        deleted: deleted.clone(),
        graph6: to_graph6(g),
    })
}

/// Moves vertices of degree 1 in `G - deleted`, and 2-vertices next to them,
/// into `F` wherever that stays legal.
fn settle_low_degree(g: &Graph, st: &mut State, deleted: &[Vertex]) {
    let outside = |v: Vertex| !deleted.contains(&v);
    let deg = |v: Vertex| g.neighbors(v).iter().filter(|&&w| outside(w)).count();
    let candidates: Vec<Vertex> = g
        .vertices()
        .filter(|&v| outside(v))
        .filter(|&v| deg(v) == 1 || (deg(v) == 2 && g.neighbors(v).iter().any(|&w| outside(w) && deg(w) == 1)))
        .collect();
    for v in candidates {
        if st.assign[v] == Some(Class::F) {
            continue;
        }
        let mut assign = st.assign.clone();
        assign[v] = Some(Class::F);
        if let Ok(next) = State::from_assignment(g, st.scheme, &assign) {
            *st = next;
        }
    }
}

/// Clears the ball of `radius` around `deleted` and searches over it together
/// with `deleted`. Leaves `st` unchanged on failure.
fn repair(g: &Graph, st: &mut State, deleted: &[Vertex], radius: Option<usize>, budget: u64) -> bool {
    let mut dist = vec![usize::MAX; g.order()];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    for &v in deleted {
        dist[v] = 0;
        order.push(v);
        queue.push_back(v);
    }
    while let Some(u) = queue.pop_front() {
        if radius.is_some_and(|r| dist[u] >= r) {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    if radius.is_none() {
        order.extend(g.vertices().filter(|&v| dist[v] == usize::MAX));
    }
    let mut assign = st.assign.clone();
    for &v in &order {
        assign[v] = None;
    }
    let Ok(mut next) = State::from_assignment(g, st.scheme, &assign) else {
        return false;
    };
    if search(g, &mut next, &order, &mut budget.clone()) {
        *st = next;
        true
    } else {
        false
    }
}

/// Assigns the `deleted` vertices of `partial` (their current classes are
/// ignored) by backtracking, keeping every other vertex where it is.
pub fn extend_by_search(g: &Graph, partial: &Partition, deleted: &[Vertex]) -> Result<Partition, DecomposeError> {
    let mut assign = partial.assignment.clone();
    assign.resize(g.order(), None);
    for &v in deleted {
        assign[v] = None;
    }
    if let Some(v) = g.vertices().find(|&v| assign[v].is_none() && !deleted.contains(&v)) {
        return Err(DecomposeError::Uncovered { vertex: v });
    }
    let mut st = State::from_assignment(g, partial.scheme, &assign)
        .map_err(|vertex| DecomposeError::InvalidPartial { vertex })?;
    if search(g, &mut st, deleted, &mut DecomposeOptions::default().node_budget) {
        Ok(st.partition())
    } else {
        Err(DecomposeError::ExtensionNotFound {
            matched: "search".into(),
            deleted: deleted.to_vec(),
            graph6: to_graph6(g),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::Rational;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn partition(scheme: Scheme, classes: &[(Class, &[Vertex])]) -> Partition {
        let mut p = Partition::new(scheme, 0);
        for &(c, vs) in classes {
            for &v in vs {
                p.set(v, c);
            }
        }
        p
    }

    /// Brute-force oracle: pairwise distances and an explicit cycle search.
    fn oracle_ok(g: &Graph, p: &Partition) -> bool {
        use crate::traversal::distance;
        let f: Vec<Vertex> = p.members(Class::F);
        if !g.induced(&f).is_forest() {
            return false;
        }
        for &c in p.scheme.independent_classes() {
            let members = p.members(c);
            let host = if p.scheme.i1_in_forest_part() && c == Class::I1 {
                let mut keep = f.clone();
                keep.extend(&members);
                g.induced(&keep)
            } else {
                g.clone()
            };
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    if distance(&host, a, b).is_some_and(|d| d <= 2) {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn verify_examples() {
        let c5 = cycle(5);
        let p = partition(Scheme::FI, &[(Class::F, &[1, 2, 3, 4]), (Class::I1, &[0])]);
        assert!(verify_partition(&c5, &p).unwrap().ok);
        let all_f = Partition::all_forest(&c5, Scheme::FI);
        let v = verify_partition(&c5, &all_f).unwrap();
        assert!(matches!(v.violation, Some(PartitionViolation::ForestCycle { ref cycle }) if cycle.len() == 5));
        // Two I2 vertices with a common neighbor.
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let p = partition(Scheme::FI1I2, &[(Class::F, &[1]), (Class::I2, &[0, 2])]);
        assert!(!verify_partition(&path, &p).unwrap().ok);
        // I1 at distance 2 through an I2 vertex is fine in G[F ∪ I1].
        let p = partition(Scheme::FI1I2, &[(Class::I2, &[1]), (Class::I1, &[0, 2])]);
        assert!(verify_partition(&path, &p).unwrap().ok);
        let missing = partition(Scheme::FI, &[(Class::F, &[0, 1])]);
        assert_eq!(
            verify_partition(&path, &missing),
            Err(DecomposeError::Uncovered { vertex: 2 })
        );
        let wrong = partition(Scheme::FI, &[(Class::F, &[0, 1]), (Class::I3, &[2])]);
        assert!(matches!(
            verify_partition(&path, &wrong),
            Err(DecomposeError::ClassNotInScheme { vertex: 2, .. })
        ));
    }

    #[test]
    fn trees_stay_in_forest() {
        let tree = Graph::from_edges(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]).unwrap();
        for scheme in Scheme::ALL {
            let (p, trace) = decompose(&tree, scheme, true).unwrap();
            assert_eq!(p.members(Class::F).len(), 7, "{scheme}");
            assert_eq!(trace.replay(), tree);
        }
    }

    #[test]
    fn c5_gets_one_independent_vertex() {
        let c5 = cycle(5);
        let (p, trace) = decompose_fi(&c5).unwrap();
        assert_eq!(p.members(Class::I1).len(), 1);
        assert_eq!(p.members(Class::F).len(), 4);
        assert!(oracle_ok(&c5, &p));
        assert_eq!(trace.replay(), c5);
    }

    #[test]
    fn kind_1_puts_x_in_i() {
        // x = 0 with neighbors 1, 6 of degree 2; second neighbors 2, 5 in F.
        let c7 = cycle(7);
        let m = detect(&c7, Family::L2).unwrap();
        assert_eq!(m.deletion_set, vec![0, 1, 6]);
        let mut partial = partition(Scheme::FI, &[(Class::F, &[2, 4, 5]), (Class::I1, &[3])]);
        partial.assignment.resize(7, None);
        let mut st = State::from_assignment(&c7, Scheme::FI, &partial.assignment).unwrap();
        let g = c7;
        let (method, _) = extend(&g, &mut st, &m, &DecomposeOptions::default()).unwrap();
        assert_eq!(method, ExtensionMethod::FastPath { template: 0 });
        assert_eq!(st.assign[0], Some(Class::I1));
        assert_eq!(st.assign[1], Some(Class::F));
        assert_eq!(st.assign[6], Some(Class::F));
    }

    #[test]
    fn extend_by_search_examples() {
        let c7 = cycle(7);
        let partial = partition(Scheme::FI, &[(Class::F, &[2, 4, 5]), (Class::I1, &[3])]);
        let p = extend_by_search(&c7, &partial, &[0, 1, 6]).unwrap();
        assert_eq!(p.class_of(0), Some(Class::I1));
        assert!(verify_partition(&c7, &p).unwrap().ok);
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let partial = partition(Scheme::FI, &[(Class::F, &[0, 1])]);
        let p = extend_by_search(&path, &partial, &[2]).unwrap();
        assert!(verify_partition(&path, &p).unwrap().ok);
        let bad = partition(Scheme::FI, &[(Class::I1, &[0, 1])]);
        assert!(matches!(
            extend_by_search(&path, &bad, &[2]),
            Err(DecomposeError::InvalidPartial { .. })
        ));
    }

    #[test]
    fn girth_six_schemes() {
        let c6 = cycle(6);
        for scheme in [Scheme::FI1I2, Scheme::FI1I2I3] {
            let (p, _) = decompose(&c6, scheme, true).unwrap();
            assert!(oracle_ok(&c6, &p));
        }
        // K4 with every edge subdivided twice.
        let mut g = Graph::new(4);
        for (a, b) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            let x = g.add_vertex();
            let y = g.add_vertex();
            g.add_edge(a, x).unwrap();
            g.add_edge(x, y).unwrap();
            g.add_edge(y, b).unwrap();
        }
        assert_eq!(girth(&g), Some(9));
        assert!(mad_exact(&g).unwrap().value < Rational::new(8, 3));
        let (p, trace) = decompose_fi1i2i3(&g, true).unwrap();
        assert!(oracle_ok(&g, &p));
        assert_eq!(trace.replay(), g);
    }

    #[test]
    fn preconditions_refuse() {
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(matches!(decompose_fi(&k4), Err(DecomposeError::MadTooLarge { .. })));
        assert!(matches!(
            decompose_fi1i2(&cycle(5), true),
            Err(DecomposeError::GirthTooSmall { girth: 5, required: 6 })
        ));
        let (p, _) = decompose_fi1i2(&cycle(5), false).unwrap();
        assert!(oracle_ok(&cycle(5), &p));
    }

    #[test]
    fn text_round_trip() {
        let p = partition(
            Scheme::FI1I2,
            &[(Class::F, &[0, 2]), (Class::I1, &[1]), (Class::I2, &[3])],
        );
        let text = p.to_lines();
        assert_eq!(text, "scheme FI1I2\nF 0 2\nI1 1\nI2 3\n");
        assert_eq!(Partition::parse(&text).unwrap(), p);
        let fi = partition(Scheme::FI, &[(Class::F, &[0]), (Class::I1, &[1])]);
        assert_eq!(fi.to_lines(), "scheme FI\nF 0\nI 1\n");
        assert_eq!(Partition::parse(&fi.to_lines()).unwrap(), fi);
        assert!(Partition::parse("F 0\n").is_err());
        assert!(Partition::parse("scheme FI\nF 0\nI 0\n").is_err());
    }

    #[test]
    fn incremental_checks_match_oracle() {
        // Every assignment of a small graph: State accepts iff the oracle does.
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 1)]).unwrap();
        for scheme in Scheme::ALL {
            let k = scheme.classes().len();
            for code in 0..k.pow(6) {
                let mut p = Partition::new(scheme, 6);
                let mut x = code;
                for v in 0..6 {
                    p.set(v, scheme.classes()[x % k]);
                    x /= k;
                }
                let inc = State::from_assignment(&g, scheme, &p.assignment).is_ok();
                assert_eq!(inc, oracle_ok(&g, &p), "{scheme} {:?}", p.assignment);
                assert_eq!(verify_partition(&g, &p).unwrap().ok, inc);
            }
        }
    }
}
