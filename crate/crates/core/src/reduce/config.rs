use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::CoverInstance;
use crate::format::{CoverFile, FormatError, GraphFile};
use crate::planar::{Edge, Graph, GraphError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown vertex name `{0}`")]
    UnknownName(String),
    #[error("floor {floor} at `{vertex}` exceeds k = {k}")]
    FloorTooLarge { vertex: String, floor: u8, k: u8 },
    #[error("floors list has {got} entries for {n} vertices")]
    FloorCount { got: usize, n: usize },
    #[error("tree edge {0} is not a local edge")]
    TreeEdgeMissing(String),
    #[error("tree edges contain a cycle")]
    TreeCycle,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

/// One step of a greedy proof: color `vertex` with some color that leaves
/// `successor` at least `min_left` available colors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PivotStep {
    pub vertex: usize,
    pub successor: usize,
    pub min_left: u8,
}

/// A "select ..., then color ... in order" certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyRule {
    #[serde(default)]
    pub pivots: Vec<PivotStep>,
    pub order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigKind {
    /// Every instance meeting the floors must have a transversal.
    Reducible,
    /// `center` has a full list; at most one of its colors may leave the
    /// triangle uncolorable.
    PrecolorMargin { center: usize, triangle: [usize; 3] },
    /// A fixed instance claimed to have no transversal.
    Gadget(Box<CoverInstance>),
}

/// A local configuration: the deleted vertex set with its induced edges,
/// and lower bounds on the residual list sizes left by the rest of the
/// graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub label: String,
    pub names: Vec<String>,
    pub graph: Graph,
    pub floors: Vec<u8>,
    /// Edges assumed straight; extended to a spanning forest by the engine.
    pub tree: Vec<Edge>,
    pub k: u8,
    pub proof: Option<GreedyRule>,
    pub kind: ConfigKind,
}

impl Configuration {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn index(&self, name: &str) -> Result<usize, ConfigError> {
        self.names.iter().position(|n| n == name).ok_or_else(|| ConfigError::UnknownName(name.to_string()))
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.floors.len() != self.names.len() {
            return Err(ConfigError::FloorCount { got: self.floors.len(), n: self.names.len() });
        }
        for (v, &f) in self.floors.iter().enumerate() {
            if f > self.k {
                return Err(ConfigError::FloorTooLarge { vertex: self.names[v].clone(), floor: f, k: self.k });
            }
        }
        for e in &self.tree {
            if !self.graph.has_edge(e.lo, e.hi) {
                return Err(ConfigError::TreeEdgeMissing(format!("{}-{}", self.names[e.lo], self.names[e.hi])));
            }
        }
        if !self.graph.is_forest(&self.tree) {
            return Err(ConfigError::TreeCycle);
        }
        Ok(())
    }
}

/// User-facing configuration file, using vertex names throughout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigFile {
    pub label: String,
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    pub floors: BTreeMap<String, u8>,
    #[serde(default)]
    pub tree: Vec<[String; 2]>,
    #[serde(default = "default_k")]
    pub k: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proof: Option<NamedRule>,
}

fn default_k() -> u8 {
    4
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedPivot {
    pub vertex: String,
    pub successor: String,
    pub min_left: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedRule {
    #[serde(default)]
    pub pivots: Vec<NamedPivot>,
    pub order: Vec<String>,
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text).map_err(FormatError::from)?)
    }

    pub fn build(&self) -> Result<Configuration, ConfigError> {
        let idx = |name: &str| {
            self.vertices.iter().position(|n| n == name).ok_or_else(|| ConfigError::UnknownName(name.to_string()))
        };
        let mut edges = Vec::new();
        for [a, b] in &self.edges {
            edges.push((idx(a)?, idx(b)?));
        }
        let graph = Graph::new(self.vertices.len(), edges)?;
        let mut floors = vec![0; self.vertices.len()];
        for (name, &f) in &self.floors {
            floors[idx(name)?] = f;
        }
        let mut tree = Vec::new();
        for [a, b] in &self.tree {
            tree.push(Edge::new(idx(a)?, idx(b)?));
        }
        let proof = match &self.proof {
            None => None,
            Some(rule) => Some(GreedyRule {
                pivots: rule
                    .pivots
                    .iter()
                    .map(|p| Ok(PivotStep { vertex: idx(&p.vertex)?, successor: idx(&p.successor)?, min_left: p.min_left }))
                    .collect::<Result<_, ConfigError>>()?,
                order: rule.order.iter().map(|n| idx(n)).collect::<Result<_, _>>()?,
            }),
        };
        let cfg = Configuration {
            label: self.label.clone(),
            names: self.vertices.clone(),
            graph,
            floors,
            tree,
            k: self.k,
            proof,
            kind: ConfigKind::Reducible,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn local(
    label: &str,
    names: &[&str],
    edges: &[(&str, &str)],
    floors: &[(&str, u8)],
    tree: &[(&str, &str)],
    proof: Option<(Vec<(&str, &str, u8)>, Vec<&str>)>,
) -> Configuration {
    let file = ConfigFile {
        label: label.to_string(),
        vertices: names.iter().map(|s| s.to_string()).collect(),
        edges: edges.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect(),
        floors: floors.iter().map(|(n, f)| (n.to_string(), *f)).collect(),
        tree: tree.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect(),
        k: 4,
        proof: proof.map(|(pivots, order)| NamedRule {
            pivots: pivots
                .into_iter()
                .map(|(v, s, m)| NamedPivot { vertex: v.into(), successor: s.into(), min_left: m })
                .collect(),
            order: order.into_iter().map(String::from).collect(),
        }),
    };
    file.build().expect("builtin configuration is valid")
}

const C10: &str = include_str!("../../assets/clusters/c10.json");
const C11: &str = include_str!("../../assets/clusters/c11.json");
const CE6: &str = include_str!("../../assets/ce6.json");
const CE7: &str = include_str!("../../assets/ce7.json");

// Local graph of a catalog shape, with its role labels as names.
fn shape(text: &str) -> (Vec<String>, Vec<(String, String)>) {
    let file = GraphFile::from_json(text).expect("catalog asset parses");
    let names = file.labels.clone().expect("catalog asset has labels");
    let edges = file.edges.iter().map(|e| (names[e[0]].clone(), names[e[1]].clone())).collect();
    (names, edges)
}

fn on_shape(label: &str, text: &str, floors: &[(&str, u8)], tree: &[(&str, &str)]) -> Configuration {
    let (names, edges) = shape(text);
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let edges: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    local(label, &names, &edges, floors, tree, None)
}

/// Loads a gadget instance file as a configuration.
pub fn gadget_from_cover(label: &str, file: &CoverFile) -> Result<Configuration, ConfigError> {
    let inst = file.to_instance()?;
    let names = file
        .graph
        .labels
        .clone()
        .unwrap_or_else(|| (0..inst.n()).map(|v| v.to_string()).collect());
    let floors = (0..inst.n()).map(|v| inst.lists().mask(v).len() as u8).collect();
    Ok(Configuration {
        label: label.to_string(),
        names,
        graph: inst.graph().clone(),
        floors,
        tree: Vec::new(),
        k: inst.k(),
        proof: None,
        kind: ConfigKind::Gadget(Box::new(inst)),
    })
}

/// The built-in configurations keyed by label.
pub fn config_catalog() -> BTreeMap<String, Configuration> {
    let mut out = BTreeMap::new();
    let mut add = |c: Configuration| {
        out.insert(c.label.clone(), c);
    };

    add(local("L2", &["v"], &[], &[("v", 1)], &[], Some((vec![], vec!["v"]))));

    add(local(
        "L4-diamond",
        &["u", "v", "x", "y"],
        &[("u", "v"), ("u", "x"), ("v", "x"), ("u", "y"), ("v", "y")],
        &[("u", 3), ("v", 3), ("x", 2), ("y", 2)],
        &[],
        Some((vec![("v", "x", 2)], vec!["y", "u", "x"])),
    ));

    add(local(
        "L5-special5",
        &["v", "v1", "v2", "v3", "v4", "v12", "v34"],
        &[
            ("v", "v1"),
            ("v", "v2"),
            ("v", "v3"),
            ("v", "v4"),
            ("v1", "v2"),
            ("v1", "v12"),
            ("v2", "v12"),
            ("v3", "v4"),
            ("v3", "v34"),
            ("v4", "v34"),
        ],
        &[("v", 3), ("v1", 3), ("v2", 3), ("v3", 3), ("v4", 3), ("v12", 2), ("v34", 2)],
        &[],
        Some((vec![("v1", "v12", 2), ("v3", "v34", 2)], vec!["v", "v4", "v34", "v2", "v12"])),
    ));

    let mut l6 = local(
        "L6-precolor",
        &["v", "x'", "y'", "z'"],
        &[("v", "y'"), ("v", "z'"), ("x'", "y'"), ("y'", "z'"), ("x'", "z'")],
        &[("v", 4), ("x'", 2), ("y'", 3), ("z'", 3)],
        &[],
        None,
    );
    l6.kind = ConfigKind::PrecolorMargin { center: 0, triangle: [1, 2, 3] };
    add(l6);

    add(on_shape(
        "L7-555",
        C10,
        &[("u", 2), ("x", 4), ("y", 4), ("w", 2), ("z", 4), ("v", 3)],
        &[("u", "v"), ("v", "w"), ("v", "y"), ("y", "x")],
    ));

    add(on_shape(
        "L8-556",
        C11,
        &[("v", 2), ("x", 4), ("y", 4), ("z", 4), ("u", 3), ("w", 3)],
        &[("u", "v"), ("v", "w"), ("v", "y"), ("y", "x")],
    ));

    for (label, text) in [("CE-6", CE6), ("CE-7", CE7)] {
        let file = CoverFile::from_json(text).expect("gadget asset parses");
        add(gadget_from_cover(label, &file).expect("gadget asset is valid"));
    }
    out
}
