use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::{Color, ColorSet};
use crate::format::CoverFile;
use crate::planar::Edge;

use super::bits::Bits;
use super::config::{ConfigKind, Configuration, GreedyRule};
use super::engine::{frame, witness_file, EngineOptions, Status, Verdict};
use super::space::{pair_bit, residual_tuples, TupleSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("order must list every non-pivot vertex exactly once")]
    BadOrder,
    #[error("pivot vertex {0} appears twice or is also in the order")]
    RepeatedPivot(usize),
    #[error("configuration is not a precoloring-margin configuration")]
    NotMargin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub holds: bool,
    pub instances: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CoverFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginReport {
    pub holds: bool,
    pub instances: u64,
    /// Largest number of center colors that block the triangle.
    pub max_bad: u8,
    /// Instances with exactly one blocking color.
    pub tight: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CoverFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tight_example: Option<CoverFile>,
}

/// Visits every instance of the reduced space (all orbit-representative
/// residual tuples, every injection on every free edge). The visitor gets the
/// colorings that survive all conflicts and returns true to stop.
fn for_each_instance(
    cfg: &Configuration,
    mut visit: impl FnMut(&TupleSpace, &Bits, &[usize]) -> bool,
) -> (u64, Option<(TupleSpace, Vec<usize>)>) {
    let (tree, free) = frame(cfg, true);
    let (tuples, _) = residual_tuples(cfg.k, &cfg.floors, true);
    let mut count = 0;
    for lists in tuples {
        let space = TupleSpace::new(cfg.k, lists, &tree, &free);
        let mut choice = vec![0; space.free.len()];
        let acc = Bits::zeros(space.colorings.len());
        if walk(&space, 0, &acc, &mut choice, &mut count, &mut visit) {
            return (count, Some((space, choice)));
        }
    }
    (count, None)
}

fn walk(
    space: &TupleSpace,
    depth: usize,
    acc: &Bits,
    choice: &mut [usize],
    count: &mut u64,
    visit: &mut impl FnMut(&TupleSpace, &Bits, &[usize]) -> bool,
) -> bool {
    if depth == space.free.len() {
        *count += 1;
        let mut left = Bits::zeros(space.colorings.len());
        left.assign_andnot(&space.base, acc);
        return visit(space, &left, choice);
    }
    let mut next = acc.clone();
    for j in 0..space.free[depth].injections.len() {
        next.clone_from(acc);
        next.or_assign(&space.free[depth].kills[j]);
        choice[depth] = j;
        if walk(space, depth + 1, &next, choice, count, visit) {
            return true;
        }
    }
    false
}

/// Checks a "select, then color in order" argument on every instance.
///
/// Each pivot colors its vertex with a color leaving the successor at least
/// `min_left` colors; such a color must exist, and every such color is
/// tried. The remaining vertices are then colored in `order`, every
/// available color being tried at every step.
pub fn check_greedy_certificate(cfg: &Configuration, rule: &GreedyRule) -> Result<CertificateReport, RuleError> {
    let mut seen = vec![false; cfg.n()];
    for p in &rule.pivots {
        if seen[p.vertex] {
            return Err(RuleError::RepeatedPivot(p.vertex));
        }
        seen[p.vertex] = true;
    }
    for &v in &rule.order {
        if v >= cfg.n() || seen[v] {
            return Err(RuleError::BadOrder);
        }
        seen[v] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(RuleError::BadOrder);
    }
    let (instances, bad) = for_each_instance(cfg, |space, _, choice| {
        let rel = space.relation(choice);
        let mut colors = vec![None; cfg.n()];
        !run_rule(space, &rel, rule, 0, &mut colors)
    });
    Ok(CertificateReport {
        holds: bad.is_none(),
        instances,
        counterexample: bad.map(|(space, choice)| witness_file(cfg, &space.instance(&cfg.graph, &choice))),
    })
}

fn available(space: &TupleSpace, rel: &[(Edge, u64)], colors: &[Option<Color>], v: usize) -> ColorSet {
    let mut s = space.lists[v];
    for &(e, pairs) in rel {
        if !e.contains(v) {
            continue;
        }
        let w = e.other(v);
        let Some(cw) = colors[w] else { continue };
        for c in s.iter() {
            let p = if v == e.lo { pair_bit(c, cw) } else { pair_bit(cw, c) };
            if pairs & (1 << p) != 0 {
                s.remove(c);
            }
        }
    }
    s
}

// True when the rule succeeds from step `step` for every allowed choice.
fn run_rule(space: &TupleSpace, rel: &[(Edge, u64)], rule: &GreedyRule, step: usize, colors: &mut Vec<Option<Color>>) -> bool {
    let np = rule.pivots.len();
    if step < np {
        let p = &rule.pivots[step];
        let mut candidates = Vec::new();
        for c in available(space, rel, colors, p.vertex).iter() {
            colors[p.vertex] = Some(c);
            if available(space, rel, colors, p.successor).len() >= p.min_left as usize {
                candidates.push(c);
            }
            colors[p.vertex] = None;
        }
        if candidates.is_empty() {
            return false;
        }
        for c in candidates {
            colors[p.vertex] = Some(c);
            let ok = run_rule(space, rel, rule, step + 1, colors);
            colors[p.vertex] = None;
            if !ok {
                return false;
            }
        }
        return true;
    }
    let i = step - np;
    if i == rule.order.len() {
        return true;
    }
    let v = rule.order[i];
    let avail = available(space, rel, colors, v);
    if avail.is_empty() {
        return false;
    }
    for c in avail.iter() {
        colors[v] = Some(c);
        let ok = run_rule(space, rel, rule, step + 1, colors);
        colors[v] = None;
        if !ok {
            return false;
        }
    }
    true
}

/// For a margin configuration: in every instance, at most one color of the
/// center leaves the triangle uncolorable.
pub fn check_precolor_margin(cfg: &Configuration) -> Result<MarginReport, RuleError> {
    let ConfigKind::PrecolorMargin { center, .. } = cfg.kind else {
        return Err(RuleError::NotMargin);
    };
    let mut max_bad = 0u8;
    let mut tight = 0u64;
    let mut tight_example = None;
    let (instances, bad) = for_each_instance(cfg, |space, left, choice| {
        let mut alive = ColorSet::EMPTY;
        for i in left.ones() {
            alive.insert(space.colorings[i][center]);
        }
        let blocked = (space.lists[center].len() - alive.len()) as u8;
        max_bad = max_bad.max(blocked);
        if blocked == 1 {
            tight += 1;
            if tight_example.is_none() {
                tight_example = Some(witness_file(cfg, &space.instance(&cfg.graph, choice)));
            }
        }
        blocked > 1
    });
    Ok(MarginReport {
        holds: bad.is_none(),
        instances,
        max_bad,
        tight,
        counterexample: bad.map(|(space, choice)| witness_file(cfg, &space.instance(&cfg.graph, &choice))),
        tight_example,
    })
}

pub(crate) fn margin_verdict(cfg: &Configuration, _center: usize, _triangle: [usize; 3], _opts: &EngineOptions) -> Verdict {
    let report = check_precolor_margin(cfg).expect("margin configuration");
    Verdict {
        label: cfg.label.clone(),
        status: if report.holds { Status::Reducible } else { Status::NotReducible },
        witness: report.counterexample,
        enumerated: report.instances,
        pruned: 0,
        seconds: 0.0,
        note: Some(format!("at most {} blocking color(s); {} tight instances", report.max_bad, report.tight)),
    }
}
