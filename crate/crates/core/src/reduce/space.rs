//! The finite instance space of a configuration after the standard
//! reductions: residual lists of exactly floor size, a spanning forest made
//! straight, and on every other edge only the maximal partial injections
//! between the two residual lists.

use crate::cover::{Color, ColorSet, CoverInstance, ListAssignment, MatchingAssignment, Perm};
use crate::planar::{Dsu, Edge};

use super::bits::Bits;
use super::config::Configuration;

/// Pair `(a, b)` of colors on an edge, as a bit position.
pub(crate) fn pair_bit(a: Color, b: Color) -> u32 {
    (a as u32 - 1) * 8 + (b as u32 - 1)
}

/// Number of maximal partial injections between lists of sizes `p` and `q`.
pub(crate) fn injection_count(p: usize, q: usize) -> usize {
    let (hi, lo) = if p >= q { (p, q) } else { (q, p) };
    (hi - lo + 1..=hi).product()
}

/// Extends `forced` to a spanning forest, preferring edges that carry the
/// most injections (they would be the costliest to enumerate).
pub(crate) fn extend_forest(cfg: &Configuration, forced: &[Edge]) -> Vec<Edge> {
    let mut dsu = Dsu::new(cfg.n());
    let mut tree = Vec::new();
    for e in forced {
        if dsu.union(e.lo, e.hi) {
            tree.push(*e);
        }
    }
    loop {
        let best = cfg
            .graph
            .edges()
            .iter()
            .filter(|e| dsu.find(e.lo) != dsu.find(e.hi))
            .max_by(|a, b| {
                let ca = injection_count(cfg.floors[a.lo] as usize, cfg.floors[a.hi] as usize);
                let cb = injection_count(cfg.floors[b.lo] as usize, cfg.floors[b.hi] as usize);
                ca.cmp(&cb).then_with(|| b.cmp(a))
            })
            .copied();
        let Some(e) = best else { break };
        dsu.union(e.lo, e.hi);
        tree.push(e);
    }
    tree
}

/// All subsets of `1..=k` of size `f`, ascending by bitmask.
pub(crate) fn subsets_of_size(k: u8, f: u8) -> Vec<ColorSet> {
    (0u16..(1 << k)).filter(|m| m.count_ones() == f as u32).map(ColorSet).collect()
}

/// Every floor-exact residual tuple, optionally only the lexicographically
/// least member of each orbit under renaming all colors at once.
/// Returns the tuples and the number skipped.
pub(crate) fn residual_tuples(k: u8, floors: &[u8], symmetry: bool) -> (Vec<Vec<ColorSet>>, u64) {
    let choices: Vec<Vec<ColorSet>> = floors.iter().map(|&f| subsets_of_size(k, f)).collect();
    let perms = if symmetry { Perm::all(k) } else { Vec::new() };
    let mut out = Vec::new();
    let mut skipped = 0;
    let mut idx = vec![0usize; floors.len()];
    loop {
        let tuple: Vec<ColorSet> = idx.iter().enumerate().map(|(v, &i)| choices[v][i]).collect();
        let canonical = perms.iter().all(|p| {
            let image: Vec<ColorSet> = tuple.iter().map(|&s| p.apply_set(s)).collect();
            image >= tuple
        });
        if canonical {
            out.push(tuple);
        } else {
            skipped += 1;
        }
        let mut pos = floors.len();
        loop {
            if pos == 0 {
                return (out, skipped);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Maximal partial injections between `a` and `b`, as lists of pairs.
pub(crate) fn maximal_injections(a: ColorSet, b: ColorSet) -> Vec<Vec<(Color, Color)>> {
    let av: Vec<Color> = a.iter().collect();
    let bv: Vec<Color> = b.iter().collect();
    let mut out = Vec::new();
    if av.len() <= bv.len() {
        let mut cur = Vec::new();
        injections(&av, &bv, &mut vec![false; bv.len()], &mut cur, &mut out, false);
    } else {
        let mut cur = Vec::new();
        injections(&bv, &av, &mut vec![false; av.len()], &mut cur, &mut out, true);
    }
    out
}

fn injections(
    dom: &[Color],
    ran: &[Color],
    used: &mut Vec<bool>,
    cur: &mut Vec<(Color, Color)>,
    out: &mut Vec<Vec<(Color, Color)>>,
    flip: bool,
) {
    if cur.len() == dom.len() {
        let mut pairs = cur.clone();
        if flip {
            pairs = pairs.into_iter().map(|(x, y)| (y, x)).collect();
            pairs.sort_unstable();
        }
        out.push(pairs);
        return;
    }
    let a = dom[cur.len()];
    for (j, &b) in ran.iter().enumerate() {
        if used[j] {
            continue;
        }
        used[j] = true;
        cur.push((a, b));
        injections(dom, ran, used, cur, out, flip);
        cur.pop();
        used[j] = false;
    }
}

/// Completes a partial injection to a bijection on `1..=k`, sending the
/// unmatched colors to the unused images in ascending order.
pub(crate) fn complete_to_bijection(k: u8, pairs: &[(Color, Color)]) -> Perm {
    let mut images = vec![0; k as usize];
    let mut used = vec![false; k as usize + 1];
    for &(a, b) in pairs {
        images[(a - 1) as usize] = b;
        used[b as usize] = true;
    }
    let mut free = (1..=k).filter(|&c| !used[c as usize]);
    for img in images.iter_mut() {
        if *img == 0 {
            *img = free.next().expect("counts match");
        }
    }
    Perm::new(images).expect("completion is a bijection")
}

pub(crate) struct FreeEdge {
    pub edge: Edge,
    pub injections: Vec<Vec<(Color, Color)>>,
    pub pair_masks: Vec<u64>,
    pub kills: Vec<Bits>,
    /// Injections containing each pair bit.
    pub by_pair: Vec<Vec<usize>>,
}

/// All instances sharing one residual tuple.
pub(crate) struct TupleSpace {
    pub k: u8,
    pub lists: Vec<ColorSet>,
    pub colorings: Vec<Vec<Color>>,
    /// Colorings proper on every straight edge.
    pub base: Bits,
    pub tree: Vec<Edge>,
    pub free: Vec<FreeEdge>,
}

impl TupleSpace {
    pub fn new(k: u8, lists: Vec<ColorSet>, tree: &[Edge], free_edges: &[Edge]) -> Self {
        let per: Vec<Vec<Color>> = lists.iter().map(|s| s.iter().collect()).collect();
        let mut colorings = Vec::new();
        let mut idx = vec![0usize; lists.len()];
        if per.iter().all(|l| !l.is_empty()) {
            loop {
                colorings.push(idx.iter().enumerate().map(|(v, &i)| per[v][i]).collect::<Vec<_>>());
                let mut pos = lists.len();
                let mut done = false;
                loop {
                    if pos == 0 {
                        done = true;
                        break;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < per[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                }
                if done {
                    break;
                }
            }
        }
        let n = colorings.len();
        let mut base = Bits::zeros(n);
        for (i, col) in colorings.iter().enumerate() {
            if tree.iter().all(|e| col[e.lo] != col[e.hi]) {
                base.set(i);
            }
        }
        let free = free_edges
            .iter()
            .map(|&edge| {
                let injections = maximal_injections(lists[edge.lo], lists[edge.hi]);
                let mut pair_kill: Vec<Bits> = vec![Bits::zeros(n); 64];
                for (i, col) in colorings.iter().enumerate() {
                    pair_kill[pair_bit(col[edge.lo], col[edge.hi]) as usize].set(i);
                }
                let mut pair_masks = Vec::new();
                let mut kills = Vec::new();
                let mut by_pair = vec![Vec::new(); 64];
                for (j, inj) in injections.iter().enumerate() {
                    let mut mask = 0u64;
                    let mut kill = Bits::zeros(n);
                    for &(a, b) in inj {
                        let p = pair_bit(a, b);
                        mask |= 1 << p;
                        kill.or_assign(&pair_kill[p as usize]);
                        by_pair[p as usize].push(j);
                    }
                    pair_masks.push(mask);
                    kills.push(kill);
                }
                FreeEdge { edge, injections, pair_masks, kills, by_pair }
            })
            .collect();
        TupleSpace { k, lists, colorings, base, tree: tree.to_vec(), free }
    }

    /// The cover instance with the given injection index on each free edge.
    pub fn instance(&self, graph: &crate::planar::Graph, choice: &[usize]) -> CoverInstance {
        let lists = ListAssignment::from_sets(self.k, self.lists.clone()).expect("lists fit k");
        let mut m = MatchingAssignment::identity(graph, self.k);
        for (fe, &j) in self.free.iter().zip(choice) {
            let perm = complete_to_bijection(self.k, &fe.injections[j]);
            m.set_perm(fe.edge.lo, fe.edge.hi, perm).expect("free edge is local");
        }
        CoverInstance::new(graph.clone(), lists, m).expect("instance is consistent")
    }

    /// Pairs in conflict on every local edge for one choice of injections:
    /// identity on straight edges.
    pub fn relation(&self, choice: &[usize]) -> Vec<(Edge, u64)> {
        let mut rel: Vec<(Edge, u64)> = self
            .tree
            .iter()
            .map(|&e| (e, (1..=self.k).fold(0u64, |m, c| m | 1 << pair_bit(c, c))))
            .collect();
        for (fe, &j) in self.free.iter().zip(choice) {
            rel.push((fe.edge, fe.pair_masks[j]));
        }
        rel
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn injection_counts() {
        assert_eq!(injection_count(4, 4), 24);
        assert_eq!(injection_count(3, 4), 24);
        assert_eq!(injection_count(2, 4), 12);
        assert_eq!(injection_count(2, 3), 6);
        let a = ColorSet::from_colors([1, 2]);
        let b = ColorSet::from_colors([2, 3, 4]);
        assert_eq!(maximal_injections(a, b).len(), 6);
        assert_eq!(maximal_injections(b, a).len(), 6);
        for inj in maximal_injections(b, a) {
            assert!(inj.iter().all(|&(x, y)| b.contains(x) && a.contains(y)));
        }
    }

    #[test]
    fn completion_restricts_to_the_injection() {
        let a = ColorSet::from_colors([1, 3]);
        let b = ColorSet::from_colors([1, 2, 4]);
        for inj in maximal_injections(a, b) {
            let p = complete_to_bijection(4, &inj);
            let restricted: Vec<(u8, u8)> = a.iter().map(|c| (c, p.apply(c))).filter(|&(_, d)| b.contains(d)).collect();
            assert_eq!(restricted, inj);
        }
    }

    #[test]
    fn orbit_representatives() {
        let (all, skipped) = residual_tuples(4, &[2, 2], false);
        assert_eq!((all.len(), skipped), (36, 0));
        let (reps, skipped) = residual_tuples(4, &[2, 2], true);
        // orbits: equal, meeting in one color, disjoint
        assert_eq!(reps.len(), 3);
        assert_eq!(skipped, 33);
    }
}
