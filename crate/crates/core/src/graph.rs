//! Finite directed graphs: validation, vertex classification and finite paths.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The on-disk graph schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDef {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDef {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    NoVertices,
    DuplicateVertex(String),
    DuplicateEdge(String),
    DanglingSource { edge: String, vertex: String },
    DanglingTarget { edge: String, vertex: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "graph has no vertices"),
            Violation::DuplicateVertex(v) => write!(f, "duplicate vertex id `{v}`"),
            Violation::DuplicateEdge(e) => write!(f, "duplicate edge id `{e}`"),
            Violation::DanglingSource { edge, vertex } => {
                write!(f, "edge `{edge}` has unknown source `{vertex}`")
            }
            Violation::DanglingTarget { edge, vertex } => {
                write!(f, "edge `{edge}` has unknown target `{vertex}`")
            }
        }
    }
}

impl GraphDef {
    pub fn new<V, E>(vertices: V, edges: E) -> GraphDef
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (&'static str, &'static str, &'static str)>,
    {
        GraphDef {
            vertices: vertices.into_iter().map(Into::into).collect(),
            edges: edges
                .into_iter()
                .map(|(id, src, dst)| EdgeDef { id: id.into(), src: src.into(), dst: dst.into() })
                .collect(),
        }
    }

    /// Every broken invariant; empty for a valid graph.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.vertices.is_empty() {
            out.push(Violation::NoVertices);
        }
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v.as_str()) {
                out.push(Violation::DuplicateVertex(v.clone()));
            }
        }
        let mut edge_ids = BTreeSet::new();
        for e in &self.edges {
            if !edge_ids.insert(e.id.as_str()) {
                out.push(Violation::DuplicateEdge(e.id.clone()));
            }
            if !seen.contains(e.src.as_str()) {
                out.push(Violation::DanglingSource { edge: e.id.clone(), vertex: e.src.clone() });
            }
            if !seen.contains(e.dst.as_str()) {
                out.push(Violation::DanglingTarget { edge: e.id.clone(), vertex: e.dst.clone() });
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexClass {
    Sink,
    Source,
    Isolated,
    Regular,
    /// Never produced: graphs here are finite.
    InfiniteEmitter,
}

#[derive(Debug, PartialEq, Eq)]
struct Edge {
    id: String,
    src: VertexId,
    dst: VertexId,
}

#[derive(Debug)]
struct Inner {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
}

/// An immutable finite directed graph. Vertex and edge ids are stored sorted,
/// so comparing `VertexId`/`EdgeId` values is comparing ids lexicographically.
/// Cloning is cheap.
#[derive(Debug, Clone)]
pub struct Graph(Arc<Inner>);

impl PartialEq for Graph {
    fn eq(&self, other: &Graph) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.vertices == other.0.vertices && self.0.edges == other.0.edges)
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new(def: &GraphDef) -> Result<Graph> {
        let violations = def.validate();
        if !violations.is_empty() {
            return Err(Error::InvalidGraph(violations));
        }
        let mut vertices = def.vertices.clone();
        vertices.sort();
        let vertex_index: HashMap<String, VertexId> =
            vertices.iter().enumerate().map(|(i, v)| (v.clone(), VertexId(i as u32))).collect();
        let sorted: BTreeMap<&str, &EdgeDef> = def.edges.iter().map(|e| (e.id.as_str(), e)).collect();
        let edges: Vec<Edge> = sorted
            .values()
            .map(|e| Edge { id: e.id.clone(), src: vertex_index[&e.src], dst: vertex_index[&e.dst] })
            .collect();
        let edge_index =
            edges.iter().enumerate().map(|(i, e)| (e.id.clone(), EdgeId(i as u32))).collect();
        let mut out_edges = vec![Vec::new(); vertices.len()];
        let mut in_edges = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            out_edges[e.src.0 as usize].push(EdgeId(i as u32));
            in_edges[e.dst.0 as usize].push(EdgeId(i as u32));
        }
        Ok(Graph(Arc::new(Inner { vertices, edges, out_edges, in_edges, vertex_index, edge_index })))
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        let def: GraphDef = serde_json::from_str(text)?;
        Graph::new(&def)
    }

    pub fn to_spec(&self) -> GraphDef {
        GraphDef {
            vertices: self.0.vertices.clone(),
            edges: self
                .0
                .edges
                .iter()
                .map(|e| EdgeDef {
                    id: e.id.clone(),
                    src: self.vertex_name(e.src).to_string(),
                    dst: self.vertex_name(e.dst).to_string(),
                })
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.0.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.0.edges.len()
    }

    pub fn vertices(&self) -> impl DoubleEndedIterator<Item = VertexId> + ExactSizeIterator + '_ {
        (0..self.vertex_count() as u32).map(VertexId)
    }

    pub fn edges(&self) -> impl DoubleEndedIterator<Item = EdgeId> + ExactSizeIterator + '_ {
        (0..self.edge_count() as u32).map(EdgeId)
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.0.vertex_index.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.into()))
    }

    pub fn edge(&self, name: &str) -> Result<EdgeId> {
        self.0.edge_index.get(name).copied().ok_or_else(|| Error::UnknownEdge(name.into()))
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        (v.0 as usize) < self.vertex_count()
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        (e.0 as usize) < self.edge_count()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.0.vertices[v.0 as usize]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.0.edges[e.0 as usize].id
    }

    pub fn src(&self, e: EdgeId) -> VertexId {
        self.0.edges[e.0 as usize].src
    }

    pub fn dst(&self, e: EdgeId) -> VertexId {
        self.0.edges[e.0 as usize].dst
    }

    /// Outgoing edges of `v` in id order.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.0.out_edges[v.0 as usize]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.0.in_edges[v.0 as usize]
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.out_edges(v).is_empty()
    }

    pub fn is_source(&self, v: VertexId) -> bool {
        self.in_edges(v).is_empty()
    }

    pub fn is_isolated(&self, v: VertexId) -> bool {
        self.is_sink(v) && self.is_source(v)
    }

    /// Emits finitely many and at least one edge.
    pub fn is_regular(&self, v: VertexId) -> bool {
        !self.is_sink(v)
    }

    pub fn classify(&self, v: VertexId) -> Result<VertexClass> {
        if !self.has_vertex(v) {
            return Err(Error::UnknownVertex(format!("#{}", v.0)));
        }
        Ok(match (self.is_sink(v), self.is_source(v)) {
            (true, true) => VertexClass::Isolated,
            (true, false) => VertexClass::Sink,
            (false, true) => VertexClass::Source,
            (false, false) => VertexClass::Regular,
        })
    }

    pub fn classify_named(&self, name: &str) -> Result<VertexClass> {
        self.classify(self.vertex(name)?)
    }

    pub fn is_composable(&self, edges: &[EdgeId]) -> bool {
        edges.iter().all(|&e| self.has_edge(e))
            && edges.windows(2).all(|w| self.dst(w[0]) == self.src(w[1]))
    }

    /// All paths of length at most `max_len`: vertices first, then edge
    /// sequences in lexicographic order.
    pub fn paths_up_to(&self, max_len: usize) -> Vec<FinPath> {
        let mut out: Vec<FinPath> = self.vertices().map(FinPath::Vertex).collect();
        let mut stack: Vec<Vec<EdgeId>> = Vec::new();
        if max_len > 0 {
            for e in self.edges().rev() {
                stack.push(vec![e]);
            }
        }
        // depth-first in id order yields lexicographic order
        while let Some(p) = stack.pop() {
            if p.len() < max_len {
                let end = self.dst(*p.last().expect("nonempty"));
                for &e in self.out_edges(end).iter().rev() {
                    let mut q = p.clone();
                    q.push(e);
                    stack.push(q);
                }
            }
            out.push(FinPath::Edges(p));
        }
        out
    }

    pub fn path_name(&self, edges: &[EdgeId]) -> String {
        edges.iter().map(|&e| self.edge_name(e)).collect::<Vec<_>>().join(".")
    }
}

/// A vertex (length 0) or a nonempty composable edge sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FinPath {
    Vertex(VertexId),
    Edges(Vec<EdgeId>),
}

impl FinPath {
    pub fn len(&self) -> usize {
        match self {
            FinPath::Vertex(_) => 0,
            FinPath::Edges(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edges(&self) -> &[EdgeId] {
        match self {
            FinPath::Vertex(_) => &[],
            FinPath::Edges(p) => p,
        }
    }

    pub fn source(&self, g: &Graph) -> VertexId {
        match self {
            FinPath::Vertex(v) => *v,
            FinPath::Edges(p) => g.src(p[0]),
        }
    }

    pub fn range(&self, g: &Graph) -> VertexId {
        match self {
            FinPath::Vertex(v) => *v,
            FinPath::Edges(p) => g.dst(*p.last().expect("nonempty")),
        }
    }

    /// Builds a path from edges, falling back to the vertex `at` when empty.
    pub fn from_edges(edges: Vec<EdgeId>, at: VertexId) -> FinPath {
        if edges.is_empty() {
            FinPath::Vertex(at)
        } else {
            FinPath::Edges(edges)
        }
    }

    pub fn is_valid(&self, g: &Graph) -> bool {
        match self {
            FinPath::Vertex(v) => g.has_vertex(*v),
            FinPath::Edges(p) => !p.is_empty() && g.is_composable(p),
        }
    }

    pub fn display(&self, g: &Graph) -> String {
        match self {
            FinPath::Vertex(v) => g.vertex_name(*v).to_string(),
            FinPath::Edges(p) => g.path_name(p),
        }
    }
}
