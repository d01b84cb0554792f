use super::graph::Graph;

/// True iff `g` has a cycle through exactly `len` distinct vertices.
pub fn has_cycle_of_length(g: &Graph, len: usize) -> bool {
    find_cycle_of_length(g, len).is_some()
}

/// A cycle on exactly `len` vertices, listed from its smallest vertex.
///
/// Searches simple paths that start at their smallest vertex, so each cycle
/// is found from one anchor only. `len` must be at least 3.
pub fn find_cycle_of_length(g: &Graph, len: usize) -> Option<Vec<usize>> {
    assert!(len >= 3, "cycle length must be at least 3");
    if len > g.n() {
        return None;
    }
    let mut on_path = vec![false; g.n()];
    let mut path = Vec::with_capacity(len);
    for s in 0..g.n() {
        path.clear();
        path.push(s);
        on_path[s] = true;
        let found = extend(g, len, s, &mut path, &mut on_path);
        on_path[s] = false;
        if found {
            return Some(path);
        }
    }
    None
}

fn extend(g: &Graph, len: usize, start: usize, path: &mut Vec<usize>, on_path: &mut [bool]) -> bool {
    let last = *path.last().unwrap();
    if path.len() == len {
        return g.has_edge(last, start);
    }
    for &w in g.neighbors(last) {
        if w <= start || on_path[w] {
            continue;
        }
        // the closing edge back to `start` must exist for the final vertex
        if path.len() + 1 == len && !g.has_edge(w, start) {
            continue;
        }
        on_path[w] = true;
        path.push(w);
        if extend(g, len, start, path, on_path) {
            return true;
        }
        path.pop();
        on_path[w] = false;
    }
    false
}
