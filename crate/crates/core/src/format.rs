//! JSON shapes shared by the asset loader and the command-line front end.
//!
//! Graph files look like
//! `{"n": 4, "edges": [[0,1],...], "rotation": {"0": [1,3,2], ...}, "outer_face": [0,2,1]}`
//! where `rotation` and `outer_face` are optional. Asset files may also carry
//! `labels` (one name per vertex) and a catalog `code`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::{CoverInstance, ListAssignment, MatchingAssignment};
use crate::planar::{EmbeddingError, Graph, GraphError, PlaneGraph};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("field `edges`: {0}")]
    Graph(#[from] GraphError),
    #[error("field `rotation`: {0}")]
    Embedding(#[from] EmbeddingError),
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

impl FormatError {
    pub(crate) fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        FormatError::Field { field: field.into(), message: message.into() }
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<BTreeMap<String, Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_face: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<u8>,
}

/// A parsed graph file: embedded when a rotation was supplied.
#[derive(Debug, Clone)]
pub enum LoadedGraph {
    Plane(PlaneGraph),
    Abstract(Graph),
}

impl LoadedGraph {
    pub fn graph(&self) -> &Graph {
        match self {
            LoadedGraph::Plane(pg) => pg.graph(),
            LoadedGraph::Abstract(g) => g,
        }
    }

    pub fn plane(&self) -> Option<&PlaneGraph> {
        match self {
            LoadedGraph::Plane(pg) => Some(pg),
            LoadedGraph::Abstract(_) => None,
        }
    }
}

impl GraphFile {
    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph file serializes")
    }

    pub fn graph(&self) -> Result<Graph, FormatError> {
        Ok(Graph::new(self.n, self.edges.iter().map(|e| (e[0], e[1])))?)
    }

    pub fn rotation_vec(&self) -> Result<Option<Vec<Vec<usize>>>, FormatError> {
        let Some(map) = &self.rotation else { return Ok(None) };
        let mut rot = vec![None; self.n];
        for (key, list) in map {
            let v: usize = key
                .parse()
                .map_err(|_| FormatError::field(format!("rotation.{key}"), "key is not a vertex id"))?;
            if v >= self.n {
                return Err(FormatError::field(format!("rotation.{key}"), "vertex out of range"));
            }
            rot[v] = Some(list.clone());
        }
        let rot = rot
            .into_iter()
            .enumerate()
            .map(|(v, r)| r.ok_or_else(|| FormatError::field("rotation", format!("vertex {v} has no rotation"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Some(rot))
    }

    pub fn load(&self) -> Result<LoadedGraph, FormatError> {
        if let Some(labels) = &self.labels {
            if labels.len() != self.n {
                return Err(FormatError::field("labels", format!("expected {} labels", self.n)));
            }
        }
        let graph = self.graph()?;
        match self.rotation_vec()? {
            Some(rot) => Ok(LoadedGraph::Plane(PlaneGraph::new(graph, rot, self.outer_face.as_deref())?)),
            None => {
                if self.outer_face.is_some() {
                    return Err(FormatError::field("outer_face", "requires a rotation"));
                }
                Ok(LoadedGraph::Abstract(graph))
            }
        }
    }

    pub fn from_plane(pg: &PlaneGraph) -> Self {
        let mut file = GraphFile::from_graph(pg.graph());
        file.rotation = Some(
            pg.rotations()
                .iter()
                .enumerate()
                .map(|(v, r)| (v.to_string(), r.clone()))
                .collect(),
        );
        file.outer_face = Some(pg.outer_face().walk.clone());
        file
    }

    pub fn from_graph(g: &Graph) -> Self {
        GraphFile {
            n: g.n(),
            edges: g.edges().iter().map(|e| [e.lo, e.hi]).collect(),
            rotation: None,
            outer_face: None,
            labels: None,
            code: None,
        }
    }
}

/// Matching-assignment file: `{"k": 4, "sigma": {"0-1": [2,1,3,4], ...}}`
/// with keys `u-v`, `u < v`, and the images of colors `1..k` at `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingFile {
    pub k: u8,
    pub sigma: BTreeMap<String, Vec<u8>>,
}

impl MatchingFile {
    pub fn from_assignment(m: &MatchingAssignment) -> Self {
        MatchingFile {
            k: m.k(),
            sigma: m.iter().map(|(e, s)| (format!("{}-{}", e.lo, e.hi), s.images().to_vec())).collect(),
        }
    }

    pub fn to_assignment(&self, g: &Graph) -> Result<MatchingAssignment, FormatError> {
        let mut m = MatchingAssignment::identity(g, self.k);
        for (key, images) in &self.sigma {
            let (a, b) = key
                .split_once('-')
                .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
                .ok_or_else(|| FormatError::field(format!("sigma.{key}"), "expected `u-v`"))?;
            if a >= b {
                return Err(FormatError::field(format!("sigma.{key}"), "keys use the u < v convention"));
            }
            m.set(a, b, images)
                .map_err(|e| FormatError::field(format!("sigma.{key}"), e.to_string()))?;
        }
        Ok(m)
    }
}

/// A complete cover instance: graph, availability lists and matchings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub graph: GraphFile,
    pub k: u8,
    /// Available colors per vertex; vertices not listed get `1..k`.
    #[serde(default)]
    pub available: BTreeMap<String, Vec<u8>>,
    pub sigma: BTreeMap<String, Vec<u8>>,
}

impl CoverFile {
    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("cover file serializes")
    }

    pub fn from_instance(inst: &CoverInstance, label: Option<String>, vertex_labels: Option<Vec<String>>) -> Self {
        let mut graph = GraphFile::from_graph(inst.graph());
        graph.labels = vertex_labels;
        let k = inst.k();
        CoverFile {
            label,
            graph,
            k,
            available: (0..inst.graph().n())
                .map(|v| (v.to_string(), inst.lists().colors(v)))
                .collect(),
            sigma: MatchingFile::from_assignment(inst.matchings()).sigma,
        }
    }

    pub fn to_instance(&self) -> Result<CoverInstance, FormatError> {
        let g = self.graph.graph()?;
        let mut lists = ListAssignment::full(g.n(), self.k);
        for (key, colors) in &self.available {
            let v: usize = key
                .parse()
                .ok()
                .filter(|&v| v < g.n())
                .ok_or_else(|| FormatError::field(format!("available.{key}"), "not a vertex id"))?;
            lists
                .set(v, colors)
                .map_err(|e| FormatError::field(format!("available.{key}"), e.to_string()))?;
        }
        let matchings = MatchingFile { k: self.k, sigma: self.sigma.clone() }.to_assignment(&g)?;
        CoverInstance::new(g, lists, matchings).map_err(|e| FormatError::field("sigma", e.to_string()))
    }
}
