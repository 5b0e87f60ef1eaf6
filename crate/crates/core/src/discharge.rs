//! Discharging replay: every vertex starts with charge `d(v)`, the family's
//! rules move charge around (through a bank for [`Family::L2`]), and the audit
//! checks the final charges against the family threshold.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::config::{build_j, detect, is_bad_3_vertex, ConfigurationMatch, Family, JSubgraph};
use crate::density::{serialize_ratio, serialize_ratios, Rational};
use crate::graph::{Graph, Vertex};
use crate::threads::{profiles, VertexProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Party {
    Vertex(Vertex),
    Bank,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::Vertex(v) => write!(f, "{v}"),
            Party::Bank => f.write_str("bank"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transfer {
    pub from: Party,
    pub to: Party,
    #[serde(serialize_with = "serialize_ratio")]
    pub amount: Rational,
    pub rule: &'static str,
}

impl Transfer {
    fn touches(&self, v: Vertex) -> bool {
        self.from == Party::Vertex(v) || self.to == Party::Vertex(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChargeLedger {
    pub family: Family,
    /// Initial charge per vertex id (the degree; zero for deleted ids).
    #[serde(serialize_with = "serialize_ratios")]
    pub initial: Vec<Rational>,
    #[serde(serialize_with = "serialize_ratios")]
    pub final_charge: Vec<Rational>,
    #[serde(serialize_with = "serialize_ratio")]
    pub bank: Rational,
    pub transfers: Vec<Transfer>,
}

impl ChargeLedger {
    fn new(g: &Graph, family: Family) -> Self {
        let initial: Vec<Rational> = (0..g.order())
            .map(|v| Rational::from_integer(if g.is_alive(v) { g.degree(v) as i64 } else { 0 }))
            .collect();
        ChargeLedger {
            family,
            final_charge: initial.clone(),
            initial,
            bank: Rational::from_integer(0),
            transfers: Vec::new(),
        }
    }

    fn give(&mut self, from: Party, to: Party, amount: Rational, rule: &'static str) {
        for (p, sign) in [(from, -1), (to, 1)] {
            let delta = amount * Rational::from_integer(sign);
            match p {
                Party::Vertex(v) => self.final_charge[v] += delta,
                Party::Bank => self.bank += delta,
            }
        }
        self.transfers.push(Transfer { from, to, amount, rule });
    }

    pub fn total_initial(&self) -> Rational {
        self.initial.iter().copied().sum()
    }

    pub fn total_final(&self) -> Rational {
        self.final_charge.iter().copied().sum()
    }

    /// Transfers into or out of `v`.
    pub fn transfers_of(&self, v: Vertex) -> Vec<Transfer> {
        self.transfers.iter().filter(|t| t.touches(v)).cloned().collect()
    }
}

/// `sum of final charges + bank == sum of initial charges`, exactly.
pub fn charge_identity(ledger: &ChargeLedger) -> bool {
    ledger.total_final() + ledger.bank == ledger.total_initial()
}

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

/// Family-independent facts about `g` that the rules consult.
struct View<'a> {
    g: &'a Graph,
    prof: Vec<VertexProfile>,
}

impl<'a> View<'a> {
    fn new(g: &'a Graph) -> Self {
        View { g, prof: profiles(g) }
    }

    fn deg(&self, v: Vertex) -> usize {
        self.g.degree(v)
    }

    fn has_2_neighbor(&self, v: Vertex) -> bool {
        self.g.neighbors(v).iter().any(|&w| self.deg(w) == 2)
    }

    fn is_2_01(&self, v: Vertex) -> bool {
        self.prof[v].is(2, &[0, 1])
    }

    fn is(&self, v: Vertex, k: usize, pat: &[usize]) -> bool {
        self.prof[v].is(k, pat)
    }
}

/// 2-vertices nearby the `>=3`-vertex `v`: adjacent ones, and those sharing a
/// common neighbor of degree 2 with `v`.
pub fn nearby_2_vertices(g: &Graph, v: Vertex) -> Vec<Vertex> {
    let mut out = BTreeSet::new();
    for &a in g.neighbors(v) {
        if g.degree(a) != 2 {
            continue;
        }
        out.insert(a);
        for &w in g.neighbors(a) {
            if w != v && g.degree(w) == 2 {
                out.insert(w);
            }
        }
    }
    out.into_iter().collect()
}

pub fn apply_rules(g: &Graph, family: Family) -> ChargeLedger {
    let view = View::new(g);
    let mut ledger = ChargeLedger::new(g, family);
    match family {
        Family::L2 => rules_l2(&view, &build_j(g), &mut ledger),
        Family::L3 => rules_l3(&view, &mut ledger),
        Family::L5 => rules_l5(&view, &mut ledger),
    }
    ledger
}

fn rules_l2(view: &View, j: &JSubgraph, ledger: &mut ChargeLedger) {
    let g = view.g;
    for v in g.vertices().filter(|&v| view.deg(v) >= 3) {
        let amount = if is_bad_3_vertex(g, v) { r(4, 11) } else { r(2, 11) };
        for w in nearby_2_vertices(g, v) {
            ledger.give(Party::Vertex(v), Party::Vertex(w), amount, "R1");
        }
    }
    for v in g.vertices().filter(|&v| view.is(v, 3, &[0, 1, 1])) {
        for &u in g.neighbors(v) {
            if view.deg(u) >= 3 && !is_bad_3_vertex(g, u) && !j.contains(u) {
                ledger.give(Party::Vertex(u), Party::Vertex(v), r(1, 11), "R2");
            }
        }
    }
    for v in g.vertices().filter(|&v| j.degree(v) == 3) {
        ledger.give(Party::Bank, Party::Vertex(v), r(1, 11), "R3");
    }
    for v in g.vertices().filter(|&v| !j.contains(v)) {
        let k = g.neighbors(v).iter().filter(|&&w| view.is_2_01(w)).count();
        if k > 0 {
            ledger.give(Party::Vertex(v), Party::Bank, r(k as i64, 11), "R4");
        }
    }
}

fn rules_l3(view: &View, ledger: &mut ChargeLedger) {
    let g = view.g;
    for v in g.vertices().filter(|&v| view.deg(v) >= 3) {
        for &w in g.neighbors(v) {
            let rule = match view.deg(w) {
                2 if !view.has_2_neighbor(w) => Some((r(2, 7), "R1")),
                2 => Some((r(4, 7), "R2")),
                3 if view.is(w, 3, &[0, 1, 1]) => Some((r(1, 7), "R3")),
                4 if view.is(w, 4, &[0, 2, 2, 2]) => Some((r(2, 7), "R4")),
                _ => None,
            };
            if let Some((amount, name)) = rule {
                ledger.give(Party::Vertex(v), Party::Vertex(w), amount, name);
            }
        }
    }
}

fn rules_l5(view: &View, ledger: &mut ChargeLedger) {
    let g = view.g;
    for v in g.vertices().filter(|&v| view.deg(v) >= 3) {
        let dv = view.deg(v);
        for &w in g.neighbors(v) {
            let rule = match view.deg(w) {
                2 if view.has_2_neighbor(w) => (dv >= 5).then_some((r(2, 3), "R1")),
                2 => Some((r(1, 3), "R2")),
                3 if dv >= 4 && view.is(w, 3, &[0, 1, 1]) => Some((r(1, 3), "R3")),
                5 if dv >= 4 && view.is(w, 5, &[0, 2, 2, 2, 2]) => Some((r(1, 3), "R3")),
                _ => None,
            };
            if let Some((amount, name)) = rule {
                ledger.give(Party::Vertex(v), Party::Vertex(w), amount, name);
            }
        }
    }
}

/// Re-derives from `g` whether a logged transfer satisfies its rule.
pub fn transfer_is_justified(g: &Graph, family: Family, t: &Transfer) -> bool {
    let prof = |v: Vertex| crate::threads::classify_vertex(g, v);
    let deg = |v: Vertex| g.degree(v);
    let two_nbr = |v: Vertex| g.neighbors(v).iter().any(|&w| deg(w) == 2);
    match (family, t.rule, t.from, t.to) {
        (Family::L2, "R1", Party::Vertex(v), Party::Vertex(w)) => {
            let want = if is_bad_3_vertex(g, v) { r(4, 11) } else { r(2, 11) };
            deg(v) >= 3 && nearby_2_vertices(g, v).contains(&w) && t.amount == want
        }
        (Family::L2, "R2", Party::Vertex(u), Party::Vertex(v)) => {
            let j = build_j(g);
            g.has_edge(u, v)
                && prof(v).is(3, &[0, 1, 1])
                && deg(u) >= 3
                && !is_bad_3_vertex(g, u)
                && !j.contains(u)
                && t.amount == r(1, 11)
        }
        (Family::L2, "R3", Party::Bank, Party::Vertex(v)) => build_j(g).degree(v) == 3 && t.amount == r(1, 11),
        (Family::L2, "R4", Party::Vertex(v), Party::Bank) => {
            let k = g.neighbors(v).iter().filter(|&&w| prof(w).is(2, &[0, 1])).count();
            !build_j(g).contains(v) && k > 0 && t.amount == r(k as i64, 11)
        }
        (Family::L3, rule, Party::Vertex(v), Party::Vertex(w)) => {
            deg(v) >= 3
                && g.has_edge(v, w)
                && match rule {
                    "R1" => deg(w) == 2 && !two_nbr(w) && t.amount == r(2, 7),
                    "R2" => deg(w) == 2 && two_nbr(w) && t.amount == r(4, 7),
                    "R3" => prof(w).is(3, &[0, 1, 1]) && t.amount == r(1, 7),
                    "R4" => prof(w).is(4, &[0, 2, 2, 2]) && t.amount == r(2, 7),
                    _ => false,
                }
        }
        (Family::L5, rule, Party::Vertex(v), Party::Vertex(w)) => {
            g.has_edge(v, w)
                && t.amount
                    == match rule {
                        "R1" => r(2, 3),
                        _ => r(1, 3),
                    }
                && match rule {
                    "R1" => deg(v) >= 5 && deg(w) == 2 && two_nbr(w),
                    "R2" => deg(v) >= 3 && deg(w) == 2 && !two_nbr(w),
                    "R3" => deg(v) >= 4 && (prof(w).is(3, &[0, 1, 1]) || prof(w).is(5, &[0, 2, 2, 2, 2])),
                    _ => false,
                }
        }
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChargeViolation {
    pub vertex: Vertex,
    pub profile: String,
    #[serde(serialize_with = "serialize_ratio")]
    pub charge: Rational,
    pub transfers: Vec<Transfer>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub family: Family,
    #[serde(serialize_with = "serialize_ratio")]
    pub threshold: Rational,
    /// The detector found a configuration, so the threshold is not owed.
    pub vacuous: bool,
    pub matched: Option<ConfigurationMatch>,
    #[serde(serialize_with = "serialize_opt_ratio")]
    pub min_charge: Option<Rational>,
    #[serde(serialize_with = "serialize_ratio")]
    pub bank: Rational,
    pub conserved: bool,
    pub violations: Vec<ChargeViolation>,
    pub pass: bool,
}

fn serialize_opt_ratio<S: serde::Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => serialize_ratio(r, s),
        None => s.serialize_none(),
    }
}

/// Replays the rules and, when `g` contains none of the family's
/// configurations, checks every final charge against the threshold (and the
/// bank against zero for [`Family::L2`]).
pub fn audit_discharging(g: &Graph, family: Family) -> AuditReport {
    let ledger = apply_rules(g, family);
    let matched = detect(g, family);
    audit_ledger(g, &ledger, matched)
}

/// [`audit_discharging`] for an existing ledger and detector result.
pub fn audit_ledger(g: &Graph, ledger: &ChargeLedger, matched: Option<ConfigurationMatch>) -> AuditReport {
    let family = ledger.family;
    let threshold = family.mad_bound();
    let min_charge = g.vertices().map(|v| ledger.final_charge[v]).min();
    let conserved = charge_identity(ledger);
    let vacuous = matched.is_some();
    let mut violations = Vec::new();
    if !vacuous {
        let prof = profiles(g);
        for v in g.vertices() {
            if ledger.final_charge[v] < threshold {
                violations.push(ChargeViolation {
                    vertex: v,
                    profile: prof[v].to_string(),
                    charge: ledger.final_charge[v],
                    transfers: ledger.transfers_of(v),
                });
            }
        }
    }
    let bank_ok = vacuous || family != Family::L2 || ledger.bank >= Rational::from_integer(0);
    AuditReport {
        family,
        threshold,
        vacuous,
        matched,
        min_charge,
        bank: ledger.bank,
        conserved,
        pass: conserved && bank_ok && violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete_on(g: &mut Graph, vs: &[Vertex]) {
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                g.add_edge(vs[i], vs[j]).unwrap();
            }
        }
    }

    fn fresh(g: &mut Graph, k: usize) -> Vec<Vertex> {
        (0..k).map(|_| g.add_vertex()).collect()
    }

    fn thread(g: &mut Graph, a: Vertex, b: Vertex, len: usize) -> Vec<Vertex> {
        let inner = fresh(g, len);
        let mut prev = a;
        for &x in &inner {
            g.add_edge(prev, x).unwrap();
            prev = x;
        }
        g.add_edge(prev, b).unwrap();
        inner
    }

    #[test]
    fn two_regular_keeps_charge() {
        let c = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        let l = apply_rules(&c, Family::L2);
        assert!(l.transfers.is_empty());
        assert!(l.final_charge.iter().all(|&x| x == Rational::from_integer(2)));
        assert_eq!(l.bank, Rational::from_integer(0));
        assert!(audit_discharging(&c, Family::L2).vacuous);
    }

    #[test]
    fn bad_vertex_ends_at_26_11() {
        // Triangle 0,1,2 with 1 and 2 of degree 2; 0 joins a K4 vertex 3.
        let mut g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let k = fresh(&mut g, 4);
        complete_on(&mut g, &k);
        g.add_edge(0, k[0]).unwrap();
        assert!(is_bad_3_vertex(&g, 0));
        let l = apply_rules(&g, Family::L2);
        assert_eq!(l.final_charge[0], r(26, 11));
        assert_eq!(l.final_charge[1], r(26, 11));
        assert!(charge_identity(&l));
        for t in &l.transfers {
            assert!(transfer_is_justified(&g, Family::L2, t), "{t:?}");
        }
    }

    #[test]
    fn l3_two_vertex_and_four_vertex() {
        // K4 with edge 0-1 subdivided by s.
        let mut g = Graph::from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let s = thread(&mut g, 0, 1, 1)[0];
        let l = apply_rules(&g, Family::L3);
        assert_eq!(l.final_charge[s], r(18, 7));

        // v with three 2-threads into K5s and a fourth neighbor in a K5.
        let mut g = Graph::new(1);
        for len in [2, 2, 2, 0] {
            let k = fresh(&mut g, 5);
            complete_on(&mut g, &k);
            thread(&mut g, 0, k[0], len);
        }
        let l = apply_rules(&g, Family::L3);
        assert_eq!(l.final_charge[0], r(18, 7));
        assert!(charge_identity(&l));
    }

    #[test]
    fn l5_equalities() {
        // 2_{0,1}-vertex next to a K6 vertex.
        let mut g = Graph::new(0);
        let a = fresh(&mut g, 6);
        let b = fresh(&mut g, 6);
        complete_on(&mut g, &a);
        complete_on(&mut g, &b);
        let inner = thread(&mut g, a[0], b[0], 2);
        let l = apply_rules(&g, Family::L5);
        assert_eq!(l.final_charge[inner[0]], r(8, 3));

        // Light 5-vertex: four 2-threads and a neighbor of degree 6.
        let mut g = Graph::new(1);
        for len in [2, 2, 2, 2, 0] {
            let k = fresh(&mut g, 6);
            complete_on(&mut g, &k);
            thread(&mut g, 0, k[0], len);
        }
        let l = apply_rules(&g, Family::L5);
        assert_eq!(l.final_charge[0], r(8, 3));
        for t in &l.transfers {
            assert!(transfer_is_justified(&g, Family::L5, t), "{t:?}");
        }
    }

    #[test]
    fn cubic_girth_six_is_config_free_and_passes() {
        let mut edges: Vec<(usize, usize)> = (0..14).map(|i| (i, (i + 1) % 14)).collect();
        for i in (0..14).step_by(2) {
            edges.push((i, (i + 5) % 14));
        }
        let heawood = Graph::from_edges(14, edges).unwrap();
        for fam in [Family::L3, Family::L5] {
            let rep = audit_discharging(&heawood, fam);
            assert!(!rep.vacuous && rep.pass, "{fam}: {rep:?}");
            assert_eq!(rep.min_charge, Some(Rational::from_integer(3)));
        }
    }

    #[test]
    fn nearby_relation() {
        // 0 (degree 3) - 1 - 2 - 3 (degree 3).
        let mut g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let a = fresh(&mut g, 4);
        g.add_edge(0, a[0]).unwrap();
        g.add_edge(0, a[1]).unwrap();
        g.add_edge(3, a[2]).unwrap();
        g.add_edge(3, a[3]).unwrap();
        assert_eq!(nearby_2_vertices(&g, 0), vec![1, 2]);
    }

    #[test]
    fn bad_3_vertex_next_to_3_012_vertex_is_reducible() {
        // R2 does not exclude a 3_{0,1,2}-vertex paying a bad 3-vertex; such a
        // pair is itself a configuration, so no audited graph has one.
        let mut g = Graph::new(0);
        let k4 = fresh(&mut g, 4);
        complete_on(&mut g, &k4);
        let [u, v, w, x] = [0; 4].map(|_| g.add_vertex());
        complete_on(&mut g, &[v, w, x]);
        g.add_edge(u, v).unwrap();
        thread(&mut g, u, k4[0], 1);
        thread(&mut g, u, k4[1], 2);
        assert!(is_bad_3_vertex(&g, v));
        assert!(crate::threads::classify_vertex(&g, u).is(3, &[0, 1, 2]));
        let report = audit_discharging(&g, Family::L2);
        assert!(report.vacuous && report.pass, "{report:?}");
        let m = report.matched.unwrap();
        assert_eq!((m.kind, m.role("u"), m.role("v")), (4, Some(u), Some(v)));
    }
}
