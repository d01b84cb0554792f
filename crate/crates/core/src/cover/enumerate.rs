use std::collections::BTreeMap;
use std::ops::Range;

use crate::planar::{Edge, Graph};

use super::types::{MatchingAssignment, Perm};

/// Streams every matching assignment of `g` that agrees with `fixed`.
///
/// Free edges are taken in ascending order and each runs through all `k!`
/// bijections lexicographically, the last free edge varying fastest.
/// `first` restricts the bijection index of the first free edge, which lets
/// workers take disjoint slices of the stream; concatenating the slices in
/// order reproduces the full stream.
#[derive(Debug, Clone)]
pub struct MatchingStream {
    base: MatchingAssignment,
    free: Vec<Edge>,
    perms: Vec<Perm>,
    counter: Vec<usize>,
    first: Range<usize>,
    done: bool,
}

pub fn enumerate_matchings(g: &Graph, k: u8, fixed: &BTreeMap<Edge, Perm>) -> MatchingStream {
    let total = Perm::all(k).len();
    enumerate_matchings_range(g, k, fixed, 0..total)
}

pub fn enumerate_matchings_range(g: &Graph, k: u8, fixed: &BTreeMap<Edge, Perm>, first: Range<usize>) -> MatchingStream {
    let mut base = MatchingAssignment::identity(g, k);
    for (e, p) in fixed {
        base.set_perm(e.lo, e.hi, p.clone()).expect("fixed edges belong to the graph");
    }
    let free: Vec<Edge> = g.edges().iter().copied().filter(|e| !fixed.contains_key(e)).collect();
    let perms = Perm::all(k);
    let mut counter = vec![0; free.len()];
    let done = if free.is_empty() {
        first.start > 0 || first.is_empty()
    } else {
        counter[0] = first.start;
        first.start >= first.end.min(perms.len())
    };
    MatchingStream { base, free, perms, counter, first, done }
}

impl MatchingStream {
    /// Number of assignments the full (unsliced) stream yields.
    pub fn full_len(&self) -> u128 {
        (self.perms.len() as u128).pow(self.free.len() as u32)
    }
}

impl Iterator for MatchingStream {
    type Item = MatchingAssignment;

    fn next(&mut self) -> Option<MatchingAssignment> {
        if self.done {
            return None;
        }
        let mut m = self.base.clone();
        for (e, &i) in self.free.iter().zip(&self.counter) {
            m.set_perm(e.lo, e.hi, self.perms[i].clone()).expect("free edges belong to the graph");
        }
        // advance, last edge fastest
        let mut pos = self.free.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.counter[pos] += 1;
            let limit = if pos == 0 { self.first.end.min(self.perms.len()) } else { self.perms.len() };
            if self.counter[pos] < limit {
                break;
            }
            if pos == 0 {
                self.done = true;
                break;
            }
            self.counter[pos] = 0;
        }
        Some(m)
    }
}
