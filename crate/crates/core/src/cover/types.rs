use std::fmt;

use thiserror::Error;

use crate::planar::{Edge, Graph};

/// Largest supported list size.
pub const MAX_K: u8 = 8;

pub type Color = u8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("k = {0} is outside 1..={MAX_K}")]
    KOutOfRange(u8),
    #[error("color {color} is outside 1..={k}")]
    ColorOutOfRange { color: Color, k: u8 },
    #[error("{0:?} is not a bijection on 1..k")]
    NotABijection(Vec<Color>),
    #[error("{0}-{1} is not an edge of the graph")]
    UnknownEdge(usize, usize),
    #[error("vertex {0} does not exist")]
    UnknownVertex(usize),
    #[error("matching assignment does not cover exactly the graph's edges")]
    EdgeMismatch,
    #[error("list size {lists} differs from matching size {matchings}")]
    SizeMismatch { lists: u8, matchings: u8 },
    #[error("vertex {0} is already colored")]
    AlreadyColored(usize),
    #[error("edges {0:?} contain a cycle")]
    NotAForest(Vec<Edge>),
    #[error("partial coloring is not independent at edge {0}")]
    NotIndependent(Edge),
    #[error("vertex {vertex} is colored {color}, which is not available to it")]
    Unavailable { vertex: usize, color: Color },
}

fn check_k(k: u8) -> Result<(), CoverError> {
    if (1..=MAX_K).contains(&k) {
        Ok(())
    } else {
        Err(CoverError::KOutOfRange(k))
    }
}

/// A set of colors from `1..=8`; bit `c - 1` stands for color `c`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ColorSet(pub u16);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    pub fn full(k: u8) -> Self {
        ColorSet((1u16 << k) - 1)
    }

    pub fn from_colors(colors: impl IntoIterator<Item = Color>) -> Self {
        let mut s = ColorSet::EMPTY;
        for c in colors {
            s.insert(c);
        }
        s
    }

    pub fn contains(self, c: Color) -> bool {
        c >= 1 && self.0 & (1 << (c - 1)) != 0
    }

    pub fn insert(&mut self, c: Color) {
        self.0 |= 1 << (c - 1);
    }

    pub fn remove(&mut self, c: Color) {
        self.0 &= !(1 << (c - 1));
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: ColorSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Colors in ascending order.
    pub fn iter(self) -> impl Iterator<Item = Color> {
        (1..=16u8).filter(move |&c| self.contains(c))
    }

    pub fn min(self) -> Option<Color> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as u8 + 1)
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A bijection on `1..=k`, stored as the images of `1, 2, .., k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<Color>,
}

impl Perm {
    pub fn identity(k: u8) -> Self {
        Perm { images: (1..=k).collect() }
    }

    pub fn new(images: Vec<Color>) -> Result<Self, CoverError> {
        let k = images.len();
        check_k(k as u8).map_err(|_| CoverError::NotABijection(images.clone()))?;
        let mut seen = 0u16;
        for &c in &images {
            if c == 0 || c as usize > k || seen & (1 << (c - 1)) != 0 {
                return Err(CoverError::NotABijection(images));
            }
            seen |= 1 << (c - 1);
        }
        Ok(Perm { images })
    }

    pub fn k(&self) -> u8 {
        self.images.len() as u8
    }

    pub fn apply(&self, c: Color) -> Color {
        self.images[(c - 1) as usize]
    }

    pub fn images(&self) -> &[Color] {
        &self.images
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.images.len()];
        for (i, &c) in self.images.iter().enumerate() {
            inv[(c - 1) as usize] = i as Color + 1;
        }
        Perm { images: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm { images: other.images.iter().map(|&c| self.apply(c)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &c)| c as usize == i + 1)
    }

    pub fn apply_set(&self, s: ColorSet) -> ColorSet {
        ColorSet::from_colors(s.iter().map(|c| self.apply(c)))
    }

    /// All `k!` permutations in lexicographic order of their image vectors.
    pub fn all(k: u8) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<Color> = (1..=k).collect();
        loop {
            out.push(Perm { images: cur.clone() });
            // next permutation
            let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else { break };
            let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }
}

/// Available colors per vertex, all drawn from `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListAssignment {
    k: u8,
    avail: Vec<ColorSet>,
}

impl ListAssignment {
    pub fn full(n: usize, k: u8) -> Self {
        ListAssignment { k, avail: vec![ColorSet::full(k); n] }
    }

    pub fn from_sets(k: u8, sets: Vec<ColorSet>) -> Result<Self, CoverError> {
        check_k(k)?;
        for s in &sets {
            if !s.is_subset(ColorSet::full(k)) {
                let color = s.iter().find(|&c| c > k).unwrap_or(0);
                return Err(CoverError::ColorOutOfRange { color, k });
            }
        }
        Ok(ListAssignment { k, avail: sets })
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.avail.len()
    }

    pub fn set(&mut self, v: usize, colors: &[Color]) -> Result<(), CoverError> {
        if v >= self.avail.len() {
            return Err(CoverError::UnknownVertex(v));
        }
        for &c in colors {
            if c == 0 || c > self.k {
                return Err(CoverError::ColorOutOfRange { color: c, k: self.k });
            }
        }
        self.avail[v] = ColorSet::from_colors(colors.iter().copied());
        Ok(())
    }

    pub fn set_mask(&mut self, v: usize, s: ColorSet) {
        assert!(s.is_subset(ColorSet::full(self.k)));
        self.avail[v] = s;
    }

    pub fn mask(&self, v: usize) -> ColorSet {
        self.avail[v]
    }

    pub fn colors(&self, v: usize) -> Vec<Color> {
        self.avail[v].iter().collect()
    }

    pub fn contains(&self, v: usize, c: Color) -> bool {
        self.avail[v].contains(c)
    }
}

/// One bijection per edge. `sigma(u, v)` maps colors at `u` to the colors at
/// `v` they conflict with; the reverse direction is the inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingAssignment {
    k: u8,
    edges: Vec<Edge>,
    sigma: Vec<Perm>,
}

impl MatchingAssignment {
    pub fn identity(g: &Graph, k: u8) -> Self {
        MatchingAssignment { k, edges: g.edges().to_vec(), sigma: vec![Perm::identity(k); g.edge_count()] }
    }

    /// Builds from `(edge, sigma_lo_hi)` pairs; the edge list must be sorted
    /// and match the graph exactly.
    pub fn from_parts(k: u8, edges: Vec<Edge>, sigma: Vec<Perm>) -> Result<Self, CoverError> {
        check_k(k)?;
        if edges.len() != sigma.len() || sigma.iter().any(|p| p.k() != k) {
            return Err(CoverError::EdgeMismatch);
        }
        Ok(MatchingAssignment { k, edges, sigma })
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    fn index(&self, a: usize, b: usize) -> Result<usize, CoverError> {
        self.edges.binary_search(&Edge::new(a, b)).map_err(|_| CoverError::UnknownEdge(a, b))
    }

    /// Sets `sigma(a, b)` from the images of `1..k` at `b`.
    pub fn set(&mut self, a: usize, b: usize, images: &[Color]) -> Result<(), CoverError> {
        let p = Perm::new(images.to_vec())?;
        if p.k() != self.k {
            return Err(CoverError::NotABijection(images.to_vec()));
        }
        self.set_perm(a, b, p)
    }

    pub fn set_perm(&mut self, a: usize, b: usize, p: Perm) -> Result<(), CoverError> {
        let i = self.index(a, b)?;
        self.sigma[i] = if a < b { p } else { p.inverse() };
        Ok(())
    }

    /// The bijection read from `a` to `b`.
    pub fn sigma(&self, a: usize, b: usize) -> Result<Perm, CoverError> {
        let i = self.index(a, b)?;
        Ok(if a < b { self.sigma[i].clone() } else { self.sigma[i].inverse() })
    }

    /// Stored bijection of edge `e`, read from `e.lo` to `e.hi`.
    pub fn sigma_of(&self, e: Edge) -> Option<&Perm> {
        self.edges.binary_search(&e).ok().map(|i| &self.sigma[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, &Perm)> + '_ {
        self.edges.iter().copied().zip(self.sigma.iter())
    }
}

/// A graph with lists and matchings: the data of a cover graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverInstance {
    graph: Graph,
    lists: ListAssignment,
    matchings: MatchingAssignment,
    // per vertex: (neighbor, sigma from the vertex to that neighbor)
    incident: Vec<Vec<(usize, Perm)>>,
}

impl CoverInstance {
    pub fn new(graph: Graph, lists: ListAssignment, matchings: MatchingAssignment) -> Result<Self, CoverError> {
        if matchings.edges() != graph.edges() || lists.n() != graph.n() {
            return Err(CoverError::EdgeMismatch);
        }
        if lists.k() != matchings.k() {
            return Err(CoverError::SizeMismatch { lists: lists.k(), matchings: matchings.k() });
        }
        let mut incident = vec![Vec::new(); graph.n()];
        for (e, p) in matchings.iter() {
            incident[e.lo].push((e.hi, p.clone()));
            incident[e.hi].push((e.lo, p.inverse()));
        }
        for list in &mut incident {
            list.sort_by_key(|(w, _)| *w);
        }
        Ok(CoverInstance { graph, lists, matchings, incident })
    }

    /// Full lists and straight matchings: plain `k`-coloring.
    pub fn straight(graph: Graph, k: u8) -> Self {
        let lists = ListAssignment::full(graph.n(), k);
        let m = MatchingAssignment::identity(&graph, k);
        CoverInstance::new(graph, lists, m).expect("identity assignment fits its graph")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn lists(&self) -> &ListAssignment {
        &self.lists
    }

    pub fn matchings(&self) -> &MatchingAssignment {
        &self.matchings
    }

    pub fn k(&self) -> u8 {
        self.lists.k()
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Neighbors of `v` with the bijection read from `v`.
    pub fn incident(&self, v: usize) -> &[(usize, Perm)] {
        &self.incident[v]
    }

    pub fn with_lists(&self, lists: ListAssignment) -> Result<Self, CoverError> {
        CoverInstance::new(self.graph.clone(), lists, self.matchings.clone())
    }

    /// True iff `(u, cu)` and `(v, cv)` are joined in the cover graph.
    pub fn conflicts(&self, u: usize, cu: Color, v: usize, cv: Color) -> bool {
        self.incident[u]
            .binary_search_by_key(&v, |(w, _)| *w)
            .map(|i| self.incident[u][i].1.apply(cu) == cv)
            .unwrap_or(false)
    }
}

/// A possibly partial choice of one color per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transversal {
    colors: Vec<Option<Color>>,
}

impl Transversal {
    pub fn empty(n: usize) -> Self {
        Transversal { colors: vec![None; n] }
    }

    pub fn from_colors(colors: Vec<Option<Color>>) -> Self {
        Transversal { colors }
    }

    pub fn complete(colors: &[Color]) -> Self {
        Transversal { colors: colors.iter().map(|&c| Some(c)).collect() }
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn get(&self, v: usize) -> Option<Color> {
        self.colors[v]
    }

    pub fn set(&mut self, v: usize, c: Option<Color>) {
        self.colors[v] = c;
    }

    pub fn colors(&self) -> &[Option<Color>] {
        &self.colors
    }

    pub fn is_complete(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    /// Checks availability of every chosen color and independence on every
    /// edge with both ends chosen.
    pub fn check(&self, inst: &CoverInstance) -> Result<(), CoverError> {
        for (v, c) in self.colors.iter().enumerate() {
            if let Some(c) = *c {
                if !inst.lists().contains(v, c) {
                    return Err(CoverError::Unavailable { vertex: v, color: c });
                }
            }
        }
        for e in inst.graph().edges() {
            if let (Some(a), Some(b)) = (self.colors[e.lo], self.colors[e.hi]) {
                if inst.conflicts(e.lo, a, e.hi, b) {
                    return Err(CoverError::NotIndependent(*e));
                }
            }
        }
        Ok(())
    }

    /// A complete, independent choice of available colors.
    pub fn is_valid_for(&self, inst: &CoverInstance) -> bool {
        self.n() == inst.n() && self.is_complete() && self.check(inst).is_ok()
    }
}
