use crate::planar::{Dsu, Edge};

use super::types::{Color, ColorSet, CoverError, CoverInstance, ListAssignment, MatchingAssignment, Perm, Transversal};

/// True iff the matching on `a-b` is the identity.
pub fn is_straight(inst: &CoverInstance, a: usize, b: usize) -> Result<bool, CoverError> {
    Ok(inst.matchings().sigma(a, b)?.is_identity())
}

/// Result of renaming colors along a forest.
#[derive(Debug, Clone)]
pub struct Straightened {
    pub instance: CoverInstance,
    /// `renaming[v]` sends an old color name at `v` to its new name.
    pub renaming: Vec<Perm>,
}

impl Straightened {
    /// Translates a transversal of the renamed instance back to old names.
    pub fn map_back(&self, t: &Transversal) -> Transversal {
        let colors = (0..t.n())
            .map(|v| t.get(v).map(|c| self.renaming[v].inverse().apply(c)))
            .collect();
        Transversal::from_colors(colors)
    }

    pub fn map_forward(&self, t: &Transversal) -> Transversal {
        let colors = (0..t.n()).map(|v| t.get(v).map(|c| self.renaming[v].apply(c))).collect();
        Transversal::from_colors(colors)
    }
}

/// Renames colors so that every edge of `forest` becomes straight.
///
/// Each tree is rooted at its smallest vertex, whose names are kept. A child
/// `c` of `p` gets `pi_c = pi_p ∘ sigma(p, c)⁻¹`; every other edge becomes
/// `pi_v ∘ sigma(u, v) ∘ pi_u⁻¹`, and lists are renamed with their vertex.
pub fn straighten(inst: &CoverInstance, forest: &[Edge]) -> Result<Straightened, CoverError> {
    let g = inst.graph();
    let n = g.n();
    let mut dsu = Dsu::new(n);
    let mut adj = vec![Vec::new(); n];
    for e in forest {
        if !g.has_edge(e.lo, e.hi) {
            return Err(CoverError::UnknownEdge(e.lo, e.hi));
        }
        if !dsu.union(e.lo, e.hi) {
            return Err(CoverError::NotAForest(forest.to_vec()));
        }
        adj[e.lo].push(e.hi);
        adj[e.hi].push(e.lo);
    }
    let k = inst.k();
    let mut renaming: Vec<Option<Perm>> = vec![None; n];
    for root in 0..n {
        if renaming[root].is_some() {
            continue;
        }
        renaming[root] = Some(Perm::identity(k));
        let mut stack = vec![root];
        while let Some(p) = stack.pop() {
            let pi_p = renaming[p].clone().unwrap();
            let mut children = adj[p].clone();
            children.sort_unstable();
            for c in children {
                if renaming[c].is_some() {
                    continue;
                }
                let sigma = inst.matchings().sigma(p, c)?;
                renaming[c] = Some(pi_p.compose(&sigma.inverse()));
                stack.push(c);
            }
        }
    }
    let renaming: Vec<Perm> = renaming.into_iter().map(Option::unwrap).collect();
    let mut m = MatchingAssignment::identity(g, k);
    for (e, sigma) in inst.matchings().iter() {
        let p = renaming[e.hi].compose(sigma).compose(&renaming[e.lo].inverse());
        m.set_perm(e.lo, e.hi, p)?;
    }
    let lists = ListAssignment::from_sets(k, (0..n).map(|v| renaming[v].apply_set(inst.lists().mask(v))).collect())?;
    let instance = CoverInstance::new(g.clone(), lists, m)?;
    Ok(Straightened { instance, renaming })
}

/// Colors still usable at the uncolored vertex `v` under `partial`.
pub fn residual(inst: &CoverInstance, partial: &Transversal, v: usize) -> Result<ColorSet, CoverError> {
    if v >= inst.n() {
        return Err(CoverError::UnknownVertex(v));
    }
    if partial.get(v).is_some() {
        return Err(CoverError::AlreadyColored(v));
    }
    let mut s = inst.lists().mask(v);
    for (w, sigma_vw) in inst.incident(v) {
        if let Some(c) = partial.get(*w) {
            let blocked: Color = sigma_vw.inverse().apply(c);
            s.remove(blocked);
        }
    }
    Ok(s)
}
