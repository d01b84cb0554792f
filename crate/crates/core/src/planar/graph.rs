use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({0}, {0}) is a loop")]
    Loop(usize),
    #[error("edge ({0}, {1}) appears more than once")]
    ParallelEdge(usize, usize),
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    VertexOutOfRange(usize, usize, usize),
}

/// An undirected edge stored with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub lo: usize,
    pub hi: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        if a < b {
            Edge { lo: a, hi: b }
        } else {
            Edge { lo: b, hi: a }
        }
    }

    pub fn other(&self, v: usize) -> usize {
        if v == self.lo {
            self.hi
        } else {
            self.lo
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.lo == v || self.hi == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::VertexOutOfRange(a, b, n));
            }
            if a == b {
                return Err(GraphError::Loop(a));
            }
            let e = Edge::new(a, b);
            if !set.insert(e) {
                return Err(GraphError::ParallelEdge(e.lo, e.hi));
            }
        }
        let edges: Vec<Edge> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.lo].push(e.hi);
            adj[e.hi].push(e.lo);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    pub fn cycle(n: usize) -> Self {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle on >= 3 vertices is simple")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
        Graph::new(n, edges).expect("complete graph is simple")
    }

    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Graph::new(10, outer.chain(spokes).chain(inner)).expect("Petersen graph is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in ascending `(lo, hi)` order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && self.adj[a].binary_search(&b).is_ok()
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&Edge::new(a, b)).ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.components().len() == 1
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Subgraph induced by `keep`, relabelled `0..keep.len()` in the given order.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| pos[e.lo] != usize::MAX && pos[e.hi] != usize::MAX)
            .map(|e| (pos[e.lo], pos[e.hi]));
        Graph::new(keep.len(), edges).expect("induced subgraph of a simple graph is simple")
    }

    /// True iff `edges` (a subset of this graph's edges) contains no cycle.
    pub fn is_forest(&self, edges: &[Edge]) -> bool {
        let mut dsu = Dsu::new(self.n);
        edges.iter().all(|e| dsu.union(e.lo, e.hi))
    }
}

/// Disjoint-set union with path halving.
#[derive(Debug, Clone)]
pub struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}
