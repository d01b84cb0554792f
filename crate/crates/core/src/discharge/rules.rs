use std::collections::BTreeSet;

use crate::planar::{Cluster, ClusterId, FaceId, PlaneGraph};

use super::ledger::{Account, ChargeLedger, Quarters, Rule};
use super::typing::VertexTyping;

/// Everything the rules read. Amounts depend only on this structure, never
/// on running balances, so the rules commute.
pub struct RuleContext<'a> {
    pub pg: &'a PlaneGraph,
    pub clusters: &'a [Cluster],
    pub typing: &'a VertexTyping,
    face_cluster: Vec<Option<ClusterId>>,
}

/// Side notes produced while applying the rules.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleNotes {
    /// (vertex, cluster) pairs paid through the 4-face branch of R2 only.
    pub four_face_branch: Vec<(usize, ClusterId)>,
    /// Clusters with eight or more faces: no rule feeds them.
    pub uncovered_clusters: Vec<ClusterId>,
}

impl<'a> RuleContext<'a> {
    pub fn new(pg: &'a PlaneGraph, clusters: &'a [Cluster], typing: &'a VertexTyping) -> Self {
        let mut face_cluster = vec![None; pg.faces().len()];
        for c in clusters {
            for &f in &c.faces {
                face_cluster[f] = Some(c.id);
            }
        }
        RuleContext { pg, clusters, typing, face_cluster }
    }

    fn internal(&self, v: usize) -> bool {
        self.typing.internal[v]
    }

    fn is_outer(&self, f: FaceId) -> bool {
        f == self.pg.outer_id()
    }

    /// Quarters owed to `v` by R1a: 1/4 per incident edge of an 8+-face
    /// that lies on no 3-face, counted once per such face side.
    fn r1a_income(&self, v: usize) -> Quarters {
        let mut q = 0;
        for f in self.pg.faces() {
            if self.is_outer(f.id) || f.degree() < 8 {
                continue;
            }
            for (a, b) in f.darts() {
                if (a == v || b == v) && self.edge_free_of_triangles(a, b) {
                    q += 1;
                }
            }
        }
        q
    }

    fn edge_free_of_triangles(&self, a: usize, b: usize) -> bool {
        let g = self.pg.face_of_dart(b, a);
        let h = self.pg.face_of_dart(a, b);
        self.pg.face(g).degree() != 3 && self.pg.face(h).degree() != 3
    }

    /// Cluster receiving R1b from an internal 4-vertex, if any.
    fn pass_through_target(&self, v: usize) -> Option<ClusterId> {
        if !self.internal(v) || self.pg.degree(v) != 4 {
            return None;
        }
        self.typing.of_vertex(v).find(|e| e.i_type >= 3).map(|e| e.cluster)
    }

    fn on_four_face_adjacent_to(&self, v: usize, c: &Cluster) -> bool {
        self.pg.faces_around(v).into_iter().any(|g| {
            let face = self.pg.face(g);
            !self.is_outer(g)
                && face.degree() == 4
                && face.darts().any(|(a, b)| self.face_cluster[self.pg.face_of_dart(b, a)] == Some(c.id))
        })
    }

    fn three_type_fives(&self, c: &Cluster) -> usize {
        c.vertices
            .iter()
            .filter(|&&v| self.internal(v) && self.pg.degree(v) == 5 && c.edges_at(v) == 3)
            .count()
    }

    /// Amount `v` owes `c` under R2–R4, and whether it came only through the
    /// 4-face branch of R2.
    pub fn vertex_to_cluster(&self, v: usize, c: &Cluster) -> (Quarters, bool) {
        let d = self.pg.degree(v);
        if !self.internal(v) || d < 5 {
            return (0, false);
        }
        let Some(entry) = self.typing.entry(v, c.id) else { return (0, false) };
        let (t, good) = (entry.i_type, entry.good);
        match c.k() {
            1..=5 => match t {
                2 if good => (2, false),
                2 if self.on_four_face_adjacent_to(v, c) => (2, true),
                3 if d == 5 && good => (4, false),
                3 => (2, false),
                4 => (6, false),
                _ => (0, false),
            },
            6 => match t {
                3 if d == 5 && good => (4, false),
                3 if d == 5 => (2, false),
                3 => (6, false),
                4 if d >= 6 && good && self.three_type_fives(c) >= 2 => (8, false),
                4 => (6, false),
                _ => (0, false),
            },
            7 => match d {
                5 => (6, false),
                6 if self.typing.special6[v] => (6, false),
                6 => (8, false),
                _ => (10, false),
            },
            _ => (0, false),
        }
    }

    pub fn apply(&self, rule: Rule, ledger: &mut ChargeLedger, notes: &mut RuleNotes) {
        match rule {
            Rule::R5 => self.r5(ledger),
            Rule::R1 | Rule::R1a | Rule::R1b => self.r1(ledger),
            Rule::R2 => self.vertex_rule(1..=5, Rule::R2, ledger, notes),
            Rule::R3 => self.vertex_rule(6..=6, Rule::R3, ledger, notes),
            Rule::R4 => self.vertex_rule(7..=7, Rule::R4, ledger, notes),
        }
    }

    fn r5(&self, ledger: &mut ChargeLedger) {
        let outer: BTreeSet<usize> = self.pg.outer_vertices();
        for &v in &outer {
            let mu = 4 * (self.pg.degree(v) as Quarters - 4);
            if mu >= 0 {
                ledger.record(Rule::R5, Account::Vertex(v), Account::Outer, mu);
            } else {
                ledger.record(Rule::R5, Account::Outer, Account::Vertex(v), -mu);
            }
        }
        for f in self.pg.interior_triangles() {
            if f.walk.iter().any(|v| outer.contains(v)) {
                let c = self.face_cluster[f.id].expect("interior triangles are clustered");
                ledger.record(Rule::R5, Account::Outer, Account::Cluster(c), 4);
            }
        }
    }

    fn r1(&self, ledger: &mut ChargeLedger) {
        for f in self.pg.faces() {
            if self.is_outer(f.id) || f.degree() < 5 {
                continue;
            }
            for (a, b) in f.darts() {
                let g = self.pg.face_of_dart(b, a);
                if let Some(c) = self.face_cluster[g] {
                    ledger.record(Rule::R1, Account::Face(f.id), Account::Cluster(c), 2);
                } else if f.degree() >= 8 && self.edge_free_of_triangles(a, b) {
                    for x in [a, b] {
                        if self.internal(x) {
                            ledger.record(Rule::R1a, Account::Face(f.id), Account::Vertex(x), 1);
                        }
                    }
                }
            }
        }
        for v in 0..self.pg.n() {
            if let Some(c) = self.pass_through_target(v) {
                ledger.record(Rule::R1b, Account::Vertex(v), Account::Cluster(c), self.r1a_income(v));
            }
        }
    }

    fn vertex_rule(
        &self,
        sizes: std::ops::RangeInclusive<usize>,
        rule: Rule,
        ledger: &mut ChargeLedger,
        notes: &mut RuleNotes,
    ) {
        for c in self.clusters.iter().filter(|c| sizes.contains(&c.k())) {
            for &v in &c.vertices {
                let (q, via_four_face) = self.vertex_to_cluster(v, c);
                if via_four_face {
                    notes.four_face_branch.push((v, c.id));
                }
                ledger.record(rule, Account::Vertex(v), Account::Cluster(c.id), q);
            }
        }
        if rule == Rule::R4 {
            notes.uncovered_clusters.extend(self.clusters.iter().filter(|c| c.k() >= 8).map(|c| c.id));
        }
    }
}

/// Applies the rules in the given order to a ledger with folded clusters.
pub fn apply_rules_in_order(ctx: &RuleContext<'_>, ledger: &mut ChargeLedger, order: &[Rule]) -> RuleNotes {
    let mut notes = RuleNotes::default();
    for &r in order {
        ctx.apply(r, ledger, &mut notes);
    }
    notes
}

/// Applies R5, R1, R2, R3, R4.
pub fn apply_rules(ctx: &RuleContext<'_>, ledger: &mut ChargeLedger) -> RuleNotes {
    apply_rules_in_order(ctx, ledger, &Rule::ORDER)
}
