//! Structural check of the case analysis for the 7-cluster with two low
//! vertices among u, v, w.
//!
//! The frame: `v` keeps colors {1, 2}, `x`, `y`, `z` keep all four, `u` and
//! `w` keep three each; `uv`, `vw`, `vy`, `yx` are straight. The matchings on
//! `uw`, `ux`, `wx`, `uy` are enumerated (maximal injections between the
//! residual sets); those on `vz`, `wz`, `xz`, `yz` stay unknown, so every
//! coloring step below is judged by a lower bound that holds for all of them.
//!
//! Every instance must either be settled by one of the early moves of the
//! argument, or reduce (after swapping colors 1 and 2) to one of the two
//! patterns (b), (c), where the case split on the neighbor of (u,2) in y
//! finishes the coloring.

use serde::{Deserialize, Serialize};

use crate::cover::{Color, ColorSet};

use super::space::{maximal_injections, pair_bit};

const U: usize = 0;
const V: usize = 1;
const W: usize = 2;
const X: usize = 3;
const Y: usize = 4;
const Z: usize = 5;
const NAMES: [&str; 6] = ["u", "v", "w", "x", "y", "z"];

/// Cluster edges; `true` marks a matching that is not pinned down.
const EDGES: [(usize, usize, bool); 12] = [
    (U, V, false),
    (U, W, false),
    (U, X, false),
    (U, Y, false),
    (V, W, false),
    (V, Y, false),
    (V, Z, true),
    (W, X, false),
    (W, Z, true),
    (X, Y, false),
    (X, Z, true),
    (Y, Z, true),
];

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub instances: u64,
    pub early_exits: u64,
    pub pattern_b: u64,
    pub pattern_c: u64,
    /// Instances reaching neither an early move nor a pattern.
    pub unmatched: u64,
    /// Pattern instances where the case's coloring does not go through.
    pub case_failures: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub examples: Vec<String>,
}

impl CaseReport {
    pub fn holds(&self) -> bool {
        self.unmatched == 0 && self.case_failures == 0
    }
}

#[derive(Clone)]
struct Frame {
    lists: [ColorSet; 6],
    /// Conflicting pairs per edge (lo, hi) for pinned edges.
    rel: [[Option<u64>; 6]; 6],
    adj: [[bool; 6]; 6],
}

fn straight() -> u64 {
    (1..=4).fold(0, |m, c| m | 1 << pair_bit(c, c))
}

impl Frame {
    fn conflict(&self, a: usize, ca: Color, b: usize, cb: Color) -> Option<bool> {
        let (lo, clo, hi, chi) = if a < b { (a, ca, b, cb) } else { (b, cb, a, ca) };
        self.rel[lo][hi].map(|m| m & (1 << pair_bit(clo, chi)) != 0)
    }

    fn pinned(&self, a: usize, b: usize) -> bool {
        self.rel[a.min(b)][a.max(b)].is_some()
    }

    fn has(&self, a: usize, ca: Color, b: usize, cb: Color) -> bool {
        self.conflict(a, ca, b, cb) == Some(true)
    }

    /// Same instance with colors 1 and 2 exchanged everywhere.
    fn swapped(&self) -> Frame {
        let s = |c: Color| match c {
            1 => 2,
            2 => 1,
            c => c,
        };
        let mut out = self.clone();
        for v in 0..6 {
            out.lists[v] = ColorSet::from_colors(self.lists[v].iter().map(s));
        }
        for a in 0..6 {
            for b in a + 1..6 {
                if let Some(m) = self.rel[a][b] {
                    let mut n = 0u64;
                    for ca in 1..=4 {
                        for cb in 1..=4 {
                            if m & (1 << pair_bit(ca, cb)) != 0 {
                                n |= 1 << pair_bit(s(ca), s(cb));
                            }
                        }
                    }
                    out.rel[a][b] = Some(n);
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Open,
    Fixed(Color),
    /// Colored greedily; the color is not tracked.
    Some,
}

#[derive(Debug, Clone)]
struct Move {
    select: Vec<(usize, Color)>,
    pivot: Option<(usize, usize, usize)>,
    order: Vec<usize>,
}

fn mv(select: &[(usize, Color)], order: &[usize]) -> Move {
    Move { select: select.to_vec(), pivot: None, order: order.to_vec() }
}

/// Known available colors at `t` and the number of further colors that may
/// be lost to neighbors whose effect is not pinned down.
fn bound(f: &Frame, st: &[State; 6], t: usize) -> (ColorSet, usize) {
    let mut set = f.lists[t];
    let mut unknown = 0;
    for s in 0..6 {
        if !f.adj[t][s] {
            continue;
        }
        match st[s] {
            State::Open => {}
            State::Some => unknown += 1,
            State::Fixed(c) => {
                if !f.pinned(s, t) {
                    unknown += 1;
                    continue;
                }
                for d in f.lists[t].iter() {
                    if f.has(s, c, t, d) {
                        set.remove(d);
                    }
                }
            }
        }
    }
    (set, unknown)
}

fn run(f: &Frame, m: &Move) -> bool {
    let mut st = [State::Open; 6];
    for (i, &(t, c)) in m.select.iter().enumerate() {
        if !f.lists[t].contains(c) {
            return false;
        }
        for &(s, d) in &m.select[..i] {
            if f.adj[s][t] && f.conflict(s, d, t, c) != Some(false) {
                return false;
            }
        }
        st[t] = State::Fixed(c);
    }
    let Some((p, succ, need)) = m.pivot else {
        return greedy(f, &mut st, &m.order);
    };
    let (set, unknown) = bound(f, &st, p);
    if unknown > 0 || !f.pinned(p, succ) {
        return false;
    }
    let mut any = false;
    for c in set.iter() {
        st[p] = State::Fixed(c);
        let (s, u) = bound(f, &st, succ);
        if s.len() >= need + u {
            any = true;
            if !greedy(f, &mut st.clone(), &m.order) {
                return false;
            }
        }
    }
    any
}

fn greedy(f: &Frame, st: &mut [State; 6], order: &[usize]) -> bool {
    for &t in order {
        let (set, unknown) = bound(f, st, t);
        if set.len() <= unknown {
            return false;
        }
        st[t] = State::Some;
    }
    true
}

fn extra(set: ColorSet) -> Vec<Color> {
    set.iter().filter(|&c| c > 2).collect()
}

fn early_moves(f: &Frame) -> Vec<Move> {
    let mut out = Vec::new();
    let (aa, bb) = (extra(f.lists[U]), extra(f.lists[W]));
    for &a in &aa {
        for &b in &bb {
            if !f.has(U, a, W, b) {
                out.push(Move { select: vec![(U, a), (W, b)], pivot: Some((Y, V, 2)), order: vec![X, Z, V] });
            }
        }
    }
    for i in 1..=2 {
        for order in [[W, U, Z, Y], [U, W, Z, Y], [W, Z, U, Y]] {
            out.push(mv(&[(X, i), (V, i)], &order));
        }
        for &b in &bb {
            out.push(mv(&[(U, i), (W, b)], &[V, Y, Z, X]));
        }
        for &a in &aa {
            out.push(mv(&[(U, a), (W, i)], &[V, Y, Z, X]));
        }
    }
    out
}

/// Pattern (b) or (c) for some choice of a, b; returns (is_c, a, b).
fn pattern(f: &Frame) -> Vec<(bool, Color, Color)> {
    let mut out = Vec::new();
    if !(f.has(U, 2, X, 1) && f.has(W, 2, X, 1)) {
        return out;
    }
    let (aa, bb) = (extra(f.lists[U]), extra(f.lists[W]));
    if f.has(U, 1, X, 2) && f.has(W, 1, X, 2) {
        for &a in &aa {
            for &b in &bb {
                out.push((false, a, b));
            }
        }
    }
    for &a in &aa {
        for &b in &bb {
            if f.has(U, a, X, 2) && f.has(W, b, X, 2) {
                out.push((true, a, b));
            }
        }
    }
    out
}

fn finish(f: &Frame, is_c: bool, a: Color, b: Color) -> bool {
    let Some(j) = (1..=4).find(|&j| f.has(U, 2, Y, j)) else { return false };
    match j {
        1 => run(f, &mv(&[(U, 2), (V, 1), (W, b)], &[X, Z, Y])),
        3 | 4 => run(f, &mv(&[(X, 1), (V, 2), (Y, j)], &[Z, W, U])),
        _ if !is_c => run(f, &mv(&[(V, 1), (X, 2), (U, 2)], &[W, Z, Y])),
        _ => match (1..=4).find(|&j| f.has(U, a, Y, j)) {
            Some(1 | 2) => run(f, &mv(&[(U, a), (V, 2), (X, 1)], &[W, Z, Y])),
            Some(j) => run(f, &mv(&[(U, a), (X, j)], &[W, V, Z, Y])),
            None => false,
        },
    }
}

fn describe(f: &Frame) -> String {
    let mut parts = Vec::new();
    for (v, name) in NAMES.iter().enumerate() {
        parts.push(format!("{name}{:?}", f.lists[v].iter().collect::<Vec<_>>()));
    }
    for &(a, b, unknown) in &EDGES {
        if unknown {
            continue;
        }
        let m = f.rel[a][b].unwrap_or(0);
        let pairs: Vec<String> = (1..=4u8)
            .flat_map(|ca| (1..=4u8).map(move |cb| (ca, cb)))
            .filter(|&(ca, cb)| m & (1 << pair_bit(ca, cb)) != 0)
            .map(|(ca, cb)| format!("{ca}{cb}"))
            .collect();
        if m != straight() {
            parts.push(format!("{}{}:{}", NAMES[a], NAMES[b], pairs.join(",")));
        }
    }
    parts.join(" ")
}

/// Runs the structural check over every instance of the frame.
pub fn check_seven_cluster_cases() -> CaseReport {
    let mut report = CaseReport::default();
    let full = ColorSet::full(4);
    let triples: Vec<ColorSet> = (0u16..16).filter(|m| m.count_ones() == 3).map(ColorSet).collect();
    let mut base = Frame {
        lists: [full, ColorSet::from_colors([1, 2]), full, full, full, full],
        rel: [[None; 6]; 6],
        adj: [[false; 6]; 6],
    };
    for &(a, b, _) in &EDGES {
        base.adj[a][b] = true;
        base.adj[b][a] = true;
    }
    for (a, b) in [(U, V), (V, W), (V, Y), (X, Y)] {
        base.rel[a][b] = Some(straight());
    }
    let mask = |inj: &[(Color, Color)]| inj.iter().fold(0u64, |m, &(p, q)| m | 1 << pair_bit(p, q));
    for &ru in &triples {
        for &rw in &triples {
            let mut f = base.clone();
            f.lists[U] = ru;
            f.lists[W] = rw;
            let uw = maximal_injections(ru, rw);
            let ux = maximal_injections(ru, full);
            let wx = maximal_injections(rw, full);
            for i1 in &uw {
                f.rel[U][W] = Some(mask(i1));
                for i2 in &ux {
                    f.rel[U][X] = Some(mask(i2));
                    for i3 in &wx {
                        f.rel[W][X] = Some(mask(i3));
                        for i4 in &ux {
                            f.rel[U][Y] = Some(mask(i4));
                            classify(&f, &mut report);
                        }
                    }
                }
            }
        }
    }
    report
}

fn classify(f: &Frame, report: &mut CaseReport) {
    report.instances += 1;
    let images = [f.clone(), f.swapped()];
    if images.iter().any(|g| early_moves(g).iter().any(|m| run(g, m))) {
        report.early_exits += 1;
        return;
    }
    let mut matched = false;
    let mut finished = false;
    let mut is_c = false;
    for g in &images {
        for (c, a, b) in pattern(g) {
            matched = true;
            is_c |= c;
            if finish(g, c, a, b) {
                finished = true;
            }
        }
    }
    if !matched {
        report.unmatched += 1;
    } else {
        if is_c {
            report.pattern_c += 1;
        } else {
            report.pattern_b += 1;
        }
        if !finished {
            report.case_failures += 1;
        }
    }
    if (!matched || !finished) && report.examples.len() < 8 {
        report.examples.push(describe(f));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_matches_catalog_shape() {
        let cat = super::super::config_catalog();
        let c = &cat["L8-556"];
        assert_eq!(c.graph.edge_count(), EDGES.len());
        for &(a, b, _) in &EDGES {
            let (i, j) = (c.index(NAMES[a]).unwrap(), c.index(NAMES[b]).unwrap());
            assert!(c.graph.has_edge(i, j), "{}{}", NAMES[a], NAMES[b]);
        }
    }

    #[test]
    fn unknown_neighbors_cost_one_color_each() {
        let mut f = Frame {
            lists: [ColorSet::full(4); 6],
            rel: [[None; 6]; 6],
            adj: [[false; 6]; 6],
        };
        for &(a, b, _) in &EDGES {
            f.adj[a][b] = true;
            f.adj[b][a] = true;
        }
        f.rel[V][Y] = Some(straight());
        let mut st = [State::Open; 6];
        st[Y] = State::Fixed(3);
        st[Z] = State::Fixed(1);
        let (set, unknown) = bound(&f, &st, V);
        assert_eq!(set, ColorSet::from_colors([1, 2, 4]));
        assert_eq!(unknown, 1);
    }
}
