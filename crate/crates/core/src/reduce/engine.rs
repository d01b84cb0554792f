use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cover::{exhaustive_transversals, ColorSet, CoverInstance, ListAssignment, MatchingAssignment, Perm};
use crate::format::CoverFile;
use crate::planar::Edge;

use super::bits::Bits;
use super::config::{ConfigKind, Configuration};
use super::space::{extend_forest, residual_tuples, subsets_of_size, TupleSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Reducible,
    NotReducible,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Full,
    Sampled { seed: u64, count: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Pick a surviving coloring and branch on which edge kills it.
    Branch,
    /// Walk the whole product of injections.
    Product,
}

#[derive(Debug, Clone, Copy)]
pub struct EngineOptions {
    pub straighten: bool,
    pub symmetry: bool,
    pub strategy: Strategy,
    /// Search nodes allowed before giving up.
    pub budget: u64,
    pub workers: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { straighten: true, symmetry: true, strategy: Strategy::Branch, budget: 2_000_000_000, workers: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub label: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<CoverFile>,
    pub enumerated: u64,
    pub pruned: u64,
    pub seconds: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Decides whether every instance of `cfg` has a transversal.
///
/// Full mode enumerates floor-exact residual lists (larger lists only add
/// transversals), straightens a spanning forest, and on the remaining edges
/// tries the maximal partial injections between residual lists (extra
/// conflicts only remove transversals). A node budget overrun gives
/// `Inconclusive`, never a guess.
pub fn check_reducible(cfg: &Configuration, mode: Mode, opts: &EngineOptions) -> Verdict {
    let start = Instant::now();
    let mut verdict = match (&cfg.kind, mode) {
        (ConfigKind::Gadget(inst), _) => gadget_verdict(cfg, inst),
        (ConfigKind::PrecolorMargin { center, triangle }, Mode::Full) => {
            super::certificate::margin_verdict(cfg, *center, *triangle, opts)
        }
        (_, Mode::Sampled { seed, count }) => sampled(cfg, seed, count),
        (ConfigKind::Reducible, Mode::Full) => full(cfg, opts),
    };
    verdict.seconds = start.elapsed().as_secs_f64();
    verdict
}

fn gadget_verdict(cfg: &Configuration, inst: &CoverInstance) -> Verdict {
    let (count, _) = exhaustive_transversals(inst);
    let total: u64 = (0..inst.n()).map(|v| inst.lists().mask(v).len() as u64).product();
    let (status, witness) = if count == 0 {
        (Status::NotReducible, Some(witness_file(cfg, inst)))
    } else {
        (Status::Reducible, None)
    };
    Verdict { label: cfg.label.clone(), status, witness, enumerated: total, pruned: 0, seconds: 0.0, note: None }
}

pub(crate) fn witness_file(cfg: &Configuration, inst: &CoverInstance) -> CoverFile {
    CoverFile::from_instance(inst, Some(cfg.label.clone()), Some(cfg.names.clone()))
}

/// Forest and free edges used by the full enumeration.
pub(crate) fn frame(cfg: &Configuration, straighten: bool) -> (Vec<Edge>, Vec<Edge>) {
    let tree = if straighten { extend_forest(cfg, &cfg.tree) } else { Vec::new() };
    let free = cfg.graph.edges().iter().copied().filter(|e| !tree.contains(e)).collect();
    (tree, free)
}

struct Shared {
    nodes: AtomicU64,
    over_budget: AtomicBool,
    budget: u64,
}

enum TupleResult {
    Colorable,
    Counterexample(Vec<usize>),
    Aborted,
}

fn full(cfg: &Configuration, opts: &EngineOptions) -> Verdict {
    let (tree, free) = frame(cfg, opts.straighten);
    let (tuples, skipped) = residual_tuples(cfg.k, &cfg.floors, opts.symmetry);
    let shared = Shared { nodes: AtomicU64::new(0), over_budget: AtomicBool::new(false), budget: opts.budget };
    let workers = opts.workers.max(1);
    let mut results: Vec<Option<TupleResult>> = (0..tuples.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let (tuples, tree, free, shared) = (&tuples, &tree, &free, &shared);
                scope.spawn(move || {
                    let mut local = Vec::new();
                    for (i, lists) in tuples.iter().enumerate().skip(w).step_by(workers) {
                        if shared.over_budget.load(Ordering::Relaxed) {
                            local.push((i, TupleResult::Aborted));
                            continue;
                        }
                        let space = TupleSpace::new(cfg.k, lists.clone(), tree, free);
                        local.push((i, solve_tuple(&space, opts.strategy, shared)));
                    }
                    local
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker panicked") {
                results[i] = Some(r);
            }
        }
    });
    let nodes = shared.nodes.load(Ordering::Relaxed);
    let mut verdict = Verdict {
        label: cfg.label.clone(),
        status: Status::Reducible,
        witness: None,
        enumerated: nodes,
        pruned: skipped,
        seconds: 0.0,
        note: Some(format!(
            "{} residual tuples, {} straight edges, {} free edges",
            tuples.len(),
            tree.len(),
            free.len()
        )),
    };
    // the first counterexample by tuple order wins, whatever the worker count
    for (i, r) in results.into_iter().enumerate() {
        match r.expect("every tuple was visited") {
            TupleResult::Colorable => {}
            TupleResult::Counterexample(choice) => {
                let space = TupleSpace::new(cfg.k, tuples[i].clone(), &tree, &free);
                let inst = space.instance(&cfg.graph, &choice);
                verdict.status = Status::NotReducible;
                verdict.witness = Some(witness_file(cfg, &inst));
                return verdict;
            }
            TupleResult::Aborted => verdict.status = Status::Inconclusive,
        }
    }
    if shared.over_budget.load(Ordering::Relaxed) {
        verdict.status = Status::Inconclusive;
    }
    verdict
}

fn solve_tuple(space: &TupleSpace, strategy: Strategy, shared: &Shared) -> TupleResult {
    let mut ctx = Ctx { space, shared, local_nodes: 0, aborted: false };
    let m = space.free.len();
    let mut choice = vec![usize::MAX; m];
    let found = match strategy {
        Strategy::Branch => {
            let mut forbidden = vec![0u64; m];
            ctx.branch(&space.base, &mut choice, &mut forbidden)
        }
        Strategy::Product => {
            let acc = Bits::zeros(space.colorings.len());
            ctx.product(0, &acc, &mut choice)
        }
    };
    ctx.flush();
    if ctx.aborted {
        return TupleResult::Aborted;
    }
    if found {
        for c in choice.iter_mut() {
            if *c == usize::MAX {
                *c = 0;
            }
        }
        TupleResult::Counterexample(choice)
    } else {
        TupleResult::Colorable
    }
}

struct Ctx<'a> {
    space: &'a TupleSpace,
    shared: &'a Shared,
    local_nodes: u64,
    aborted: bool,
}

impl Ctx<'_> {
    fn flush(&mut self) {
        let total = self.shared.nodes.fetch_add(self.local_nodes, Ordering::Relaxed) + self.local_nodes;
        self.local_nodes = 0;
        if total > self.shared.budget {
            self.shared.over_budget.store(true, Ordering::Relaxed);
        }
    }

    fn tick(&mut self) -> bool {
        self.local_nodes += 1;
        if self.local_nodes >= 4096 {
            self.flush();
        }
        if self.shared.over_budget.load(Ordering::Relaxed) {
            self.aborted = true;
        }
        !self.aborted
    }

    // True when some completion of `choice` kills every coloring in
    // `survivors`. Injections on an edge must avoid its `forbidden` pairs.
    fn branch(&mut self, survivors: &Bits, choice: &mut [usize], forbidden: &mut [u64]) -> bool {
        let Some(s) = survivors.first_one() else { return true };
        if !self.tick() {
            return false;
        }
        let col = &self.space.colorings[s];
        let saved: Vec<u64> = forbidden.to_vec();
        let mut next = Bits::zeros(self.space.colorings.len());
        for e in 0..self.space.free.len() {
            if choice[e] != usize::MAX {
                continue;
            }
            let fe = &self.space.free[e];
            let p = super::space::pair_bit(col[fe.edge.lo], col[fe.edge.hi]);
            if forbidden[e] & (1 << p) != 0 {
                continue;
            }
            for &j in &fe.by_pair[p as usize] {
                if fe.pair_masks[j] & forbidden[e] != 0 {
                    continue;
                }
                choice[e] = j;
                next.assign_andnot(survivors, &fe.kills[j]);
                if self.branch(&next, choice, forbidden) {
                    return true;
                }
                choice[e] = usize::MAX;
                if self.aborted {
                    forbidden.copy_from_slice(&saved);
                    return false;
                }
            }
            // later branches: this edge does not kill `s`
            forbidden[e] |= 1 << p;
        }
        forbidden.copy_from_slice(&saved);
        false
    }

    fn product(&mut self, depth: usize, acc: &Bits, choice: &mut [usize]) -> bool {
        if !self.tick() {
            return false;
        }
        let mut left = Bits::zeros(self.space.colorings.len());
        left.assign_andnot(&self.space.base, acc);
        if left.is_zero() {
            return true;
        }
        if depth == self.space.free.len() {
            return false;
        }
        let fe = &self.space.free[depth];
        let mut next = acc.clone();
        for j in 0..fe.injections.len() {
            next.clone_from(acc);
            next.or_assign(&fe.kills[j]);
            choice[depth] = j;
            if self.product(depth + 1, &next, choice) {
                return true;
            }
            if self.aborted {
                return false;
            }
        }
        choice[depth] = usize::MAX;
        false
    }
}

fn sampled(cfg: &Configuration, seed: u64, count: u64) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let choices: Vec<Vec<ColorSet>> = cfg.floors.iter().map(|&f| subsets_of_size(cfg.k, f)).collect();
    let perms = Perm::all(cfg.k);
    let mut verdict = Verdict {
        label: cfg.label.clone(),
        status: Status::Inconclusive,
        witness: None,
        enumerated: 0,
        pruned: 0,
        seconds: 0.0,
        note: Some(format!("seed {seed}, {count} samples")),
    };
    for _ in 0..count {
        let sets: Vec<ColorSet> = choices.iter().map(|c| *c.choose(&mut rng).expect("floor fits k")).collect();
        let lists = ListAssignment::from_sets(cfg.k, sets).expect("subsets of 1..k");
        let mut m = MatchingAssignment::identity(&cfg.graph, cfg.k);
        for e in cfg.graph.edges() {
            let p = perms.choose(&mut rng).expect("k >= 1").clone();
            m.set_perm(e.lo, e.hi, p).expect("local edge");
        }
        let inst = CoverInstance::new(cfg.graph.clone(), lists, m).expect("consistent sample");
        verdict.enumerated += 1;
        if exhaustive_transversals(&inst).0 == 0 {
            verdict.status = Status::NotReducible;
            verdict.witness = Some(witness_file(cfg, &inst));
            break;
        }
    }
    verdict
}
