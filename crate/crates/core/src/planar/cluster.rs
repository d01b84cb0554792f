use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::OnceLock;

use crate::format::{FormatError, GraphFile, LoadedGraph};

use super::embedding::{FaceId, PlaneGraph};
use super::graph::{Dsu, Edge};

pub type ClusterId = usize;

/// Assignment of catalog role names (`u`, `v`, ...) to host vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RoleMap {
    roles: Vec<(String, usize)>,
}

impl RoleMap {
    pub fn get(&self, role: &str) -> Option<usize> {
        self.roles.iter().find(|(r, _)| r == role).map(|&(_, v)| v)
    }

    /// Role of host vertex `v`, if it has one.
    pub fn role_of(&self, v: usize) -> Option<&str> {
        self.roles.iter().find(|&&(_, w)| w == v).map(|(r, _)| r.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.roles.iter().map(|(r, v)| (r.as_str(), *v))
    }

    fn images(&self) -> Vec<usize> {
        self.roles.iter().map(|&(_, v)| v).collect()
    }
}

/// Result of matching a cluster against the catalog.
///
/// `roles` holds every labeling compatible with the catalog drawing (one per
/// automorphism of the shape), ordered by the image vector; the first is the
/// canonical one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub code: Option<u8>,
    pub roles: Vec<RoleMap>,
}

impl Classification {
    pub fn unclassified() -> Self {
        Classification { code: None, roles: Vec::new() }
    }

    pub fn canonical(&self) -> Option<&RoleMap> {
        self.roles.first()
    }
}

/// A maximal set of interior 3-faces connected through shared edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    pub id: ClusterId,
    pub faces: Vec<FaceId>,
    pub vertices: Vec<usize>,
    pub edges: Vec<Edge>,
    /// Vertex triples of the member faces, each sorted.
    pub triangles: Vec<[usize; 3]>,
    pub distinct_vertices: bool,
    pub classification: Classification,
}

impl Cluster {
    /// Number of 3-faces; a k-cluster has k of them.
    pub fn k(&self) -> usize {
        self.faces.len()
    }

    pub fn code(&self) -> Option<u8> {
        self.classification.code
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Number of cluster edges at `v`: the `i` in "i-type".
    pub fn edges_at(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub code: u8,
    pub labels: Vec<String>,
    pub triangles: Vec<[usize; 3]>,
    pub plane: PlaneGraph,
}

/// The eleven cluster shapes with distinct vertices, with role labels.
#[derive(Debug, Clone)]
pub struct ClusterCatalog {
    entries: Vec<CatalogEntry>,
}

const BUILTIN: [&str; 11] = [
    include_str!("../../assets/clusters/c01.json"),
    include_str!("../../assets/clusters/c02.json"),
    include_str!("../../assets/clusters/c03.json"),
    include_str!("../../assets/clusters/c04.json"),
    include_str!("../../assets/clusters/c05.json"),
    include_str!("../../assets/clusters/c06.json"),
    include_str!("../../assets/clusters/c07.json"),
    include_str!("../../assets/clusters/c08.json"),
    include_str!("../../assets/clusters/c09.json"),
    include_str!("../../assets/clusters/c10.json"),
    include_str!("../../assets/clusters/c11.json"),
];

impl ClusterCatalog {
    /// Catalog compiled into the binary.
    pub fn builtin() -> &'static ClusterCatalog {
        static CATALOG: OnceLock<ClusterCatalog> = OnceLock::new();
        CATALOG.get_or_init(|| {
            let files = BUILTIN.iter().map(|s| GraphFile::from_json(s).expect("builtin catalog asset parses"));
            ClusterCatalog::from_files(files).expect("builtin catalog is valid")
        })
    }

    /// Reads `c01.json` .. `c11.json` from `dir`.
    pub fn from_dir(dir: &Path) -> Result<ClusterCatalog, FormatError> {
        let mut files = Vec::new();
        for code in 1..=11 {
            let path = dir.join(format!("c{code:02}.json"));
            let text = std::fs::read_to_string(&path)
                .map_err(|e| FormatError::field(path.display().to_string(), e.to_string()))?;
            files.push(GraphFile::from_json(&text)?);
        }
        ClusterCatalog::from_files(files)
    }

    fn from_files(files: impl IntoIterator<Item = GraphFile>) -> Result<ClusterCatalog, FormatError> {
        let mut entries = Vec::new();
        for file in files {
            let code = file.code.ok_or_else(|| FormatError::field("code", "catalog asset needs a code"))?;
            let labels = file
                .labels
                .clone()
                .ok_or_else(|| FormatError::field("labels", "catalog asset needs labels"))?;
            let LoadedGraph::Plane(plane) = file.load()? else {
                return Err(FormatError::field("rotation", "catalog asset needs a rotation"));
            };
            let triangles = plane.interior_triangles().map(|f| sorted_triple(&f.walk)).collect();
            entries.push(CatalogEntry { code, labels, triangles, plane });
        }
        entries.sort_by_key(|e| e.code);
        Ok(ClusterCatalog { entries })
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn entry(&self, code: u8) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.code == code)
    }

    /// Matches a set of triangles on `vertices` against every shape.
    pub fn classify(&self, vertices: &[usize], triangles: &[[usize; 3]]) -> Classification {
        let host: BTreeSet<[usize; 3]> = triangles.iter().copied().collect();
        for entry in &self.entries {
            if entry.labels.len() != vertices.len() || entry.triangles.len() != host.len() {
                continue;
            }
            let mut maps = Vec::new();
            let mut image = vec![usize::MAX; vertices.len()];
            let mut used = vec![false; vertices.len()];
            assign(entry, vertices, &host, 0, &mut image, &mut used, &mut maps);
            if !maps.is_empty() {
                let mut roles: Vec<RoleMap> = maps
                    .into_iter()
                    .map(|img| RoleMap { roles: entry.labels.iter().cloned().zip(img).collect() })
                    .collect();
                roles.sort_by_key(|r| r.images());
                return Classification { code: Some(entry.code), roles };
            }
        }
        Classification::unclassified()
    }
}

// Assigns catalog vertex `i` and checks every catalog triangle whose
// vertices are all placed.
fn assign(
    entry: &CatalogEntry,
    vertices: &[usize],
    host: &BTreeSet<[usize; 3]>,
    i: usize,
    image: &mut [usize],
    used: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    if i == vertices.len() {
        out.push(image.to_vec());
        return;
    }
    for (j, &hv) in vertices.iter().enumerate() {
        if used[j] {
            continue;
        }
        image[i] = hv;
        let ok = entry.triangles.iter().filter(|t| t.iter().all(|&a| a <= i) && t.contains(&i)).all(|t| {
            host.contains(&sorted_triple(&[image[t[0]], image[t[1]], image[t[2]]]))
        });
        if ok {
            used[j] = true;
            assign(entry, vertices, host, i + 1, image, used, out);
            used[j] = false;
        }
    }
    image[i] = usize::MAX;
}

fn sorted_triple(w: &[usize]) -> [usize; 3] {
    let mut t = [w[0], w[1], w[2]];
    t.sort_unstable();
    t
}

/// Groups interior 3-faces into clusters and classifies them with the
/// builtin catalog.
pub fn extract_clusters(pg: &PlaneGraph) -> Vec<Cluster> {
    extract_clusters_with(pg, ClusterCatalog::builtin())
}

pub fn extract_clusters_with(pg: &PlaneGraph, catalog: &ClusterCatalog) -> Vec<Cluster> {
    let tri: Vec<FaceId> = pg.interior_triangles().map(|f| f.id).collect();
    let mut is_tri = vec![false; pg.faces().len()];
    for &f in &tri {
        is_tri[f] = true;
    }
    let mut dsu = Dsu::new(pg.faces().len());
    for &f in &tri {
        for (a, b) in pg.face(f).darts() {
            let g = pg.face_of_dart(b, a);
            if g != f && is_tri[g] {
                dsu.union(f, g);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<FaceId>> = BTreeMap::new();
    for &f in &tri {
        groups.entry(dsu.find(f)).or_default().push(f);
    }
    let mut groups: Vec<Vec<FaceId>> = groups.into_values().collect();
    groups.sort_by_key(|g| g[0]);
    groups
        .into_iter()
        .enumerate()
        .map(|(id, faces)| build_cluster(pg, catalog, id, faces))
        .collect()
}

fn build_cluster(pg: &PlaneGraph, catalog: &ClusterCatalog, id: ClusterId, faces: Vec<FaceId>) -> Cluster {
    let mut vertices = BTreeSet::new();
    let mut edges = BTreeSet::new();
    let mut triangles = Vec::new();
    for &f in &faces {
        let face = pg.face(f);
        vertices.extend(face.walk.iter().copied());
        edges.extend(face.edges());
        triangles.push(sorted_triple(&face.walk));
    }
    let vertices: Vec<usize> = vertices.into_iter().collect();
    let edges: Vec<Edge> = edges.into_iter().collect();
    let distinct_vertices = boundary_is_cycle(pg, &faces, &edges);
    let classification = if distinct_vertices {
        catalog.classify(&vertices, &triangles)
    } else {
        Classification::unclassified()
    };
    Cluster { id, faces, vertices, edges, triangles, distinct_vertices, classification }
}

// The cluster is a disk with distinct boundary vertices when its boundary
// edges (those with a non-member face on one side) form a single cycle.
fn boundary_is_cycle(pg: &PlaneGraph, faces: &[FaceId], edges: &[Edge]) -> bool {
    let member = |f: FaceId| faces.contains(&f);
    let boundary: Vec<Edge> = edges
        .iter()
        .copied()
        .filter(|&e| {
            let (a, b) = pg.faces_of_edge(e);
            !(member(a) && member(b))
        })
        .collect();
    let mut deg: BTreeMap<usize, usize> = BTreeMap::new();
    for e in &boundary {
        *deg.entry(e.lo).or_default() += 1;
        *deg.entry(e.hi).or_default() += 1;
    }
    if deg.values().any(|&d| d != 2) || deg.len() != boundary.len() {
        return false;
    }
    let mut dsu = Dsu::new(pg.n());
    let mut comps = deg.len();
    for e in &boundary {
        if dsu.union(e.lo, e.hi) {
            comps -= 1;
        }
    }
    comps == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::Graph;

    fn load(text: &str) -> PlaneGraph {
        match GraphFile::from_json(text).unwrap().load().unwrap() {
            LoadedGraph::Plane(pg) => pg,
            LoadedGraph::Abstract(_) => panic!("expected an embedding"),
        }
    }

    #[test]
    fn catalog_assets_classify_as_their_own_code() {
        for (i, text) in BUILTIN.iter().enumerate() {
            let pg = load(text);
            let clusters = extract_clusters(&pg);
            assert_eq!(clusters.len(), 1, "asset {}", i + 1);
            assert_eq!(clusters[0].code(), Some(i as u8 + 1));
        }
    }

    #[test]
    fn canonical_roles_follow_asset_labels() {
        let pg = load(BUILTIN[9]);
        let c = &extract_clusters(&pg)[0];
        let roles = c.classification.canonical().unwrap();
        // the asset's own labeling is the identity, which sorts first
        for (i, name) in ["u", "v", "w", "x", "y", "z"].iter().enumerate() {
            assert_eq!(roles.get(name), Some(i));
        }
    }

    #[test]
    fn k4_interior_is_one_three_cluster() {
        let g = Graph::complete(4);
        let rot = vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]];
        let pg = PlaneGraph::new(g, rot, Some(&[0, 2, 1])).unwrap();
        let clusters = extract_clusters(&pg);
        assert_eq!(clusters.len(), 1);
        assert_eq!(clusters[0].k(), 3);
        // three triangles around a degree-3 vertex are not a catalog shape
        assert_eq!(clusters[0].code(), None);
    }

    #[test]
    fn bowtie_gives_two_single_triangles() {
        let g = Graph::new(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]).unwrap();
        let rot = vec![vec![1, 2, 3, 4], vec![2, 0], vec![0, 1], vec![4, 0], vec![0, 3]];
        let pg = PlaneGraph::new(g, rot, None).unwrap();
        let clusters = extract_clusters(&pg);
        assert_eq!(clusters.len(), 2);
        assert!(clusters.iter().all(|c| c.k() == 1 && c.code() == Some(1)));
    }

    #[test]
    fn triangle_drawn_alone_has_one_interior_face() {
        let pg = load(BUILTIN[0]);
        assert_eq!(pg.faces().len(), 2);
        assert_eq!(extract_clusters(&pg).len(), 1);
    }

    #[test]
    fn diamond_has_two_labelings() {
        let pg = load(BUILTIN[1]);
        let c = &extract_clusters(&pg)[0];
        assert_eq!(c.classification.roles.len(), 4);
        assert_eq!(c.edges_at(0), 3);
    }
}
