use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::planar::{
    butterfly_pattern, contains_pattern, cycle_predicates_with, extract_clusters_with, find_cycle_of_length, Cluster,
    ClusterCatalog, Edge, PatternGraph, PlaneGraph,
};

use super::ledger::{fraction, initial_charges, Account, ChargeLedger, Quarters, Rule, Transfer};
use super::rules::{apply_rules, RuleContext};
use super::typing::{cluster_is_internal, vertex_typing, VertexTyping};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub hypothesis: String,
    pub witness: Vec<usize>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Violation {
    fn new(hypothesis: &str, witness: Vec<usize>, detail: impl Into<String>) -> Self {
        Violation { hypothesis: hypothesis.to_string(), witness, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OuterIdentity {
    /// Edges with exactly one end on the outer face.
    pub e: i64,
    /// Interior 3-faces touching the outer face.
    pub f3: i64,
    /// 1 + e - f3, in quarters.
    pub value: Quarters,
    pub ledger: Quarters,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapViolation {
    pub vertex: usize,
    pub cluster: usize,
    pub i_type: usize,
    pub degree: usize,
    pub given: Quarters,
    pub cap: Quarters,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AuditVerdict {
    /// Every internal account is nonnegative and the outer face positive.
    Discharged,
    /// Hypotheses hold yet some account ends negative.
    NegativeCharge,
    /// A structural lemma's conclusion fails; no charge verdict.
    PreconditionFailed,
    /// Not in the class (7-cycle, butterfly, or outer face not a good 3-cycle).
    OutsideClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub class_checks: Vec<Violation>,
    pub lemma_preconditions: Vec<Violation>,
    pub initial: BTreeMap<Account, Quarters>,
    pub accounts: BTreeMap<Account, Quarters>,
    pub transfers: Vec<Transfer>,
    pub outer_identity: OuterIdentity,
    pub cap_violations: Vec<CapViolation>,
    pub negative: Vec<Account>,
    /// (vertex, cluster) pairs paid only through the 4-face branch of R2.
    pub four_face_branch: Vec<(usize, usize)>,
    pub verdict: AuditVerdict,
}

impl AuditReport {
    pub fn sum(&self) -> Quarters {
        self.accounts.values().sum()
    }

    pub fn initial_sum(&self) -> Quarters {
        self.initial.values().sum()
    }
}

/// Structural facts the rules need, independent of the charges.
fn class_checks(pg: &PlaneGraph, clusters: &[Cluster], catalog: &ClusterCatalog, butterfly: &PatternGraph) -> Vec<Violation> {
    let g = pg.graph();
    let mut out = Vec::new();
    if let Some(c) = find_cycle_of_length(g, 7) {
        out.push(Violation::new("no-7-cycle", c, ""));
    }
    if let Some(m) = contains_pattern(g, butterfly) {
        out.push(Violation::new("no-butterfly", m, ""));
    }
    let walk = pg.outer_face().walk.clone();
    let good = walk.len() == 3
        && cycle_predicates_with(pg, [walk[0], walk[1], walk[2]], catalog).map(|p| p.good).unwrap_or(false);
    if !good {
        out.push(Violation::new("outer-good-3-cycle", walk, ""));
    }
    for c in clusters {
        if c.code().is_none() {
            out.push(Violation::new("cluster-catalog", c.vertices.clone(), format!("H{} is not a catalog shape", c.id)));
        }
        if c.k() >= 3 {
            for f in pg.faces() {
                if f.id == pg.outer_id() || f.degree() != 4 {
                    continue;
                }
                if f.darts().any(|(a, b)| c.faces.contains(&pg.face_of_dart(b, a))) {
                    out.push(Violation::new(
                        "3+-cluster-not-on-4-face",
                        f.walk.clone(),
                        format!("4-face f{} touches H{}", f.id, c.id),
                    ));
                }
            }
        }
    }
    out
}

fn lemma_preconditions(
    pg: &PlaneGraph,
    clusters: &[Cluster],
    typing: &VertexTyping,
    catalog: &ClusterCatalog,
) -> Vec<Violation> {
    let g = pg.graph();
    let n = pg.n();
    let internal = &typing.internal;
    let d = |v: usize| pg.degree(v);
    let mut out = Vec::new();

    for v in 0..n {
        if internal[v] && d(v) < 4 {
            out.push(Violation::new("min-degree", vec![v], format!("internal vertex of degree {}", d(v))));
        }
    }

    let outer: BTreeSet<usize> = pg.outer_vertices();
    for a in 0..n {
        for &b in g.neighbors(a).iter().filter(|&&b| b > a) {
            for &c in g.neighbors(b).iter().filter(|&&c| c > b) {
                if !g.has_edge(a, c) {
                    continue;
                }
                let is_outer = [a, b, c].iter().all(|v| outer.contains(v)) && pg.outer_face().degree() == 3;
                if is_outer {
                    continue;
                }
                if let Ok(p) = cycle_predicates_with(pg, [a, b, c], catalog) {
                    if p.separating && p.good {
                        out.push(Violation::new("no-separating-good-3-cycle", vec![a, b, c], ""));
                    }
                }
            }
        }
    }

    let is_444 = |t: &[usize]| t.iter().all(|&v| internal[v] && d(v) == 4);
    let tris: Vec<&crate::planar::Face> = pg.interior_triangles().collect();
    for (i, s) in tris.iter().enumerate() {
        for t in &tris[i + 1..] {
            if !is_444(&s.walk) || !is_444(&t.walk) {
                continue;
            }
            let shared: Vec<Edge> = s.edges().filter(|e| t.edges().any(|f| f == *e)).collect();
            if shared.len() != 1 {
                continue;
            }
            let x = *s.walk.iter().find(|v| !shared[0].contains(**v)).expect("triangle apex");
            let y = *t.walk.iter().find(|v| !shared[0].contains(**v)).expect("triangle apex");
            if !g.has_edge(x, y) {
                out.push(Violation::new("diamond", vec![shared[0].lo, shared[0].hi, x, y], ""));
            }
        }
    }

    for v in 0..n {
        if !internal[v] || d(v) != 5 {
            continue;
        }
        let special: Vec<usize> = typing.of_vertex(v).filter(|e| e.good).map(|e| e.cluster).collect();
        if special.len() >= 2 {
            out.push(Violation::new("special-5", vec![v], format!("on special clusters {special:?}")));
        }
    }

    for c in clusters {
        if !cluster_is_internal(c, pg) {
            continue;
        }
        match c.code() {
            Some(10) if typing.special_cluster[c.id] => {
                for map in &c.classification.roles {
                    let (u, v, w) = (map.get("u").unwrap(), map.get("v").unwrap(), map.get("w").unwrap());
                    if d(u) == 5 && d(w) == 5 && (d(v) <= 5 || typing.special6[v]) {
                        out.push(Violation::new("six-cluster-555", vec![u, v, w], format!("H{}", c.id)));
                        break;
                    }
                }
            }
            Some(11) => {
                let map = c.classification.canonical().expect("classified");
                let uvw = [map.get("u").unwrap(), map.get("v").unwrap(), map.get("w").unwrap()];
                if uvw.iter().all(|&v| d(v) <= 6) {
                    let low: Vec<usize> =
                        uvw.iter().copied().filter(|&v| d(v) == 5 || typing.special6[v]).collect();
                    if low.len() >= 2 {
                        out.push(Violation::new("seven-cluster-556", low, format!("H{}", c.id)));
                    }
                }
            }
            _ => {}
        }
    }
    out
}

fn cap(i_type: usize, degree: usize) -> Option<Quarters> {
    match (i_type, degree) {
        (2, _) => Some(2),
        (3, 5) => Some(4),
        (4, 5) | (3, _) => Some(6),
        (4, 6) => Some(8),
        (4, _) => Some(10),
        _ => None,
    }
}

fn cap_violations(pg: &PlaneGraph, typing: &VertexTyping, ledger: &ChargeLedger) -> Vec<CapViolation> {
    let mut given: BTreeMap<(usize, usize), Quarters> = BTreeMap::new();
    for t in ledger.transfers() {
        if let (Rule::R2 | Rule::R3 | Rule::R4, Account::Vertex(v), Account::Cluster(c)) = (t.rule, t.from, t.to) {
            *given.entry((v, c)).or_insert(0) += t.quarters;
        }
    }
    let mut out = Vec::new();
    for e in &typing.entries {
        let v = e.vertex;
        if !typing.internal[v] || pg.degree(v) < 5 {
            continue;
        }
        // The caps only speak about 2-, 3- and 4-type vertices.
        let Some(limit) = cap(e.i_type, pg.degree(v)) else { continue };
        let q = given.get(&(v, e.cluster)).copied().unwrap_or(0);
        if q > limit {
            out.push(CapViolation {
                vertex: v,
                cluster: e.cluster,
                i_type: e.i_type,
                degree: pg.degree(v),
                given: q,
                cap: limit,
            });
        }
    }
    out
}

/// 1 + e - f3 computed from the embedding alone.
fn outer_identity(pg: &PlaneGraph, ledger: &ChargeLedger) -> OuterIdentity {
    let outer = pg.outer_vertices();
    let e = pg.graph().edges().iter().filter(|e| outer.contains(&e.lo) != outer.contains(&e.hi)).count() as i64;
    let f3 = pg.interior_triangles().filter(|f| f.walk.iter().any(|v| outer.contains(v))).count() as i64;
    let value = 4 * (1 + e - f3);
    let got = ledger.get(Account::Outer);
    OuterIdentity { e, f3, value, ledger: got, holds: value == got }
}

/// Runs the whole discharging procedure on `pg` and reports every account.
pub fn audit(pg: &PlaneGraph) -> AuditReport {
    audit_with(pg, ClusterCatalog::builtin(), &butterfly_pattern())
}

/// [`audit`] against a given cluster catalog and butterfly pattern.
pub fn audit_with(pg: &PlaneGraph, catalog: &ClusterCatalog, butterfly: &PatternGraph) -> AuditReport {
    let clusters = extract_clusters_with(pg, catalog);
    let typing = vertex_typing(pg, &clusters);
    let class = class_checks(pg, &clusters, catalog, butterfly);
    let lemmas = lemma_preconditions(pg, &clusters, &typing, catalog);

    let mut ledger = initial_charges(pg);
    ledger.fold_clusters(&clusters);
    let initial = ledger.accounts().clone();
    let ctx = RuleContext::new(pg, &clusters, &typing);
    let notes = apply_rules(&ctx, &mut ledger);

    let negative: Vec<Account> = ledger
        .accounts()
        .iter()
        .filter(|(a, &q)| match a {
            Account::Outer => q <= 0,
            Account::Vertex(v) => typing.internal[*v] && q < 0,
            _ => q < 0,
        })
        .map(|(a, _)| *a)
        .collect();
    let verdict = if !class.is_empty() {
        AuditVerdict::OutsideClass
    } else if !lemmas.is_empty() {
        AuditVerdict::PreconditionFailed
    } else if negative.is_empty() {
        AuditVerdict::Discharged
    } else {
        AuditVerdict::NegativeCharge
    };
    AuditReport {
        class_checks: class,
        lemma_preconditions: lemmas,
        initial,
        outer_identity: outer_identity(pg, &ledger),
        cap_violations: cap_violations(pg, &typing, &ledger),
        accounts: ledger.accounts().clone(),
        transfers: ledger.transfers().to_vec(),
        negative,
        four_face_branch: notes.four_face_branch,
        verdict,
    }
}

/// Transfer history of one account, one line per transfer.
pub fn explain(report: &AuditReport, a: Account) -> String {
    let mut out = String::new();
    let start = report.initial.get(&a).copied().unwrap_or(0);
    let _ = writeln!(out, "{a}: initial {}", fraction(start));
    for t in report.transfers.iter().filter(|t| t.from == a || t.to == a) {
        let (sign, other) = if t.to == a { ("+", t.from) } else { ("-", t.to) };
        let _ = writeln!(out, "  {:?} {sign}{} {} {other}", t.rule, fraction(t.quarters), if t.to == a { "from" } else { "to" });
    }
    let end = report.accounts.get(&a).copied().unwrap_or(0);
    let _ = writeln!(out, "{a}: final {}", fraction(end));
    out
}
