use thiserror::Error;

use super::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("pattern graph must be connected and non-empty")]
    NotConnected,
}

/// A small connected template searched for as a (not necessarily induced)
/// subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternGraph {
    name: String,
    graph: Graph,
    order: Vec<usize>,
}

impl PatternGraph {
    pub fn new(name: impl Into<String>, graph: Graph) -> Result<Self, PatternError> {
        if graph.n() == 0 || !graph.is_connected() {
            return Err(PatternError::NotConnected);
        }
        let order = search_order(&graph);
        Ok(PatternGraph { name: name.into(), graph, order })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// The 7-cycle template.
    pub fn cycle7() -> Self {
        PatternGraph::new("C7", Graph::cycle(7)).expect("C7 is connected")
    }
}

// Highest degree first, then always the vertex with most placed neighbors.
fn search_order(p: &Graph) -> Vec<usize> {
    let n = p.n();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let first = (0..n).max_by_key(|&v| (p.degree(v), std::cmp::Reverse(v))).unwrap();
    placed[first] = true;
    order.push(first);
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let links = p.neighbors(v).iter().filter(|&&w| placed[w]).count();
                (links, p.degree(v), std::cmp::Reverse(v))
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    order
}

/// Finds an injective map from pattern vertices to graph vertices carrying
/// every pattern edge onto a graph edge. `witness[i]` is the image of
/// pattern vertex `i`.
pub fn contains_pattern(g: &Graph, p: &PatternGraph) -> Option<Vec<usize>> {
    let pg = &p.graph;
    if pg.n() > g.n() || pg.edge_count() > g.edge_count() {
        return None;
    }
    let mut image = vec![usize::MAX; pg.n()];
    let mut used = vec![false; g.n()];
    if place(g, p, 0, &mut image, &mut used) {
        Some(image)
    } else {
        None
    }
}

fn place(g: &Graph, p: &PatternGraph, depth: usize, image: &mut [usize], used: &mut [bool]) -> bool {
    let pg = &p.graph;
    if depth == p.order.len() {
        return true;
    }
    let pv = p.order[depth];
    let anchor = pg.neighbors(pv).iter().copied().find(|&w| image[w] != usize::MAX);
    let candidates: Vec<usize> = match anchor {
        Some(a) => g.neighbors(image[a]).to_vec(),
        None => (0..g.n()).collect(),
    };
    for gv in candidates {
        if used[gv] || g.degree(gv) < pg.degree(pv) {
            continue;
        }
        let fits = pg
            .neighbors(pv)
            .iter()
            .all(|&w| image[w] == usize::MAX || g.has_edge(gv, image[w]));
        if !fits {
            continue;
        }
        image[pv] = gv;
        used[gv] = true;
        if place(g, p, depth + 1, image, used) {
            return true;
        }
        used[gv] = false;
        image[pv] = usize::MAX;
    }
    false
}
