//! Labelled graphs with connection: the GKM graph data model.
//!
//! Vertices and undirected edges are stored in lexicographic order of their
//! ids, so index order is the deterministic "smallest first" order used by
//! every algorithm downstream. Each undirected edge `i` yields two directed
//! edges, `2i` (as given) and `2i + 1` (its reverse, named `id~`).

mod check;
mod document;
mod infer;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::exactla::QVector;

pub use check::{
    check_connection_compat, check_effective, check_gkm_k, check_manifold_integrality,
    connection_coefficients, gkm_order, validate_document, validate_structure, Check, CompatReport,
    PqEntry, ValidationReport,
};
pub use document::{ConnectionRecord, EdgeRecord, GraphDocument};
pub use infer::infer_connection;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("malformed graph document: {0}")]
    Parse(String),
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate edge id {0:?}")]
    DuplicateEdge(String),
    #[error("edge id {0:?} is empty or ends with '~'")]
    BadEdgeId(String),
    #[error("edge {edge:?} references unknown vertex {vertex:?}")]
    UnknownVertex { edge: String, vertex: String },
    #[error("unknown directed edge {0:?}")]
    UnknownEdge(String),
    #[error("edge {edge:?} has weight of length {got}, torus rank is {expected}")]
    WeightRank {
        edge: String,
        expected: usize,
        got: usize,
    },
    #[error("edge {0:?} has zero weight")]
    ZeroWeight(String),
    #[error("edge {0:?} is a loop")]
    Loop(String),
    #[error("torus rank must be positive")]
    ZeroRank,
    #[error("connection along {along:?}: {detail}")]
    BadConnection { along: String, detail: String },
    #[error("graph has no connection")]
    MissingConnection,
    #[error("k = {k} is outside 2..={valence}")]
    KOutOfRange { k: usize, valence: usize },
    #[error("ambiguous connection along {along:?} for {edge:?}: candidates {candidates:?}")]
    AmbiguousConnection {
        along: String,
        edge: String,
        candidates: Vec<String>,
    },
    #[error("no connection candidate along {along:?} for {edge:?}")]
    NoCandidate { along: String, edge: String },
    #[error("inferred connection along {0:?} is not a bijection")]
    NotBijective(String),
}

/// Evidence for a failed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub detail: String,
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
}

impl Witness {
    pub fn new(detail: impl Into<String>) -> Self {
        Witness {
            detail: detail.into(),
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn at(mut self, g: &GkmGraph, v: usize) -> Self {
        self.vertices.push(g.vertex_name(v).to_string());
        self
    }

    pub fn with_edges(mut self, g: &GkmGraph, edges: impl IntoIterator<Item = DirEdge>) -> Self {
        self.edges.extend(edges.into_iter().map(|e| g.edge_name(e)));
        self
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.detail)?;
        if !self.vertices.is_empty() {
            write!(f, " [vertices {}]", self.vertices.join(", "))?;
        }
        if !self.edges.is_empty() {
            write!(f, " [edges {}]", self.edges.join(", "))?;
        }
        Ok(())
    }
}

/// Outcome of a yes/no check; failures carry evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W = Witness> {
    Pass,
    Fail(W),
}

impl<W> Verdict<W> {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(w) => Some(w),
        }
    }
}

/// Directed edge handle: `2i` runs along undirected edge `i` as given,
/// `2i + 1` runs against it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirEdge(usize);

impl DirEdge {
    pub fn forward(edge: usize) -> Self {
        DirEdge(2 * edge)
    }

    pub fn backward(edge: usize) -> Self {
        DirEdge(2 * edge + 1)
    }

    pub fn from_index(index: usize) -> Self {
        DirEdge(index)
    }

    pub fn index(self) -> usize {
        self.0
    }

    pub fn edge(self) -> usize {
        self.0 / 2
    }

    pub fn is_forward(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn reverse(self) -> Self {
        DirEdge(self.0 ^ 1)
    }
}

/// Per directed edge `e`, the image `∇_e f` of each edge `f` in the star of
/// the source of `e`, indexed by the position of `f` in that star. `None`
/// marks a hole in user-supplied data.
pub type ConnectionTable = Vec<Vec<Option<DirEdge>>>;

#[derive(Clone, Debug)]
struct EdgeData {
    id: String,
    source: usize,
    target: usize,
}

/// Labelled graph `(Γ, α, ∇)`. The connection may be absent until inferred or
/// supplied; weights are stored once per undirected edge, sign-canonical.
#[derive(Clone, Debug)]
pub struct GkmGraph {
    rank: usize,
    vertices: Vec<String>,
    edges: Vec<EdgeData>,
    weights: Vec<QVector>,
    stars: Vec<Vec<DirEdge>>,
    star_pos: Vec<usize>,
    connection: Option<ConnectionTable>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
}

/// Input edge for [`GkmGraph::new`].
#[derive(Clone, Debug)]
pub struct EdgeSpec {
    pub id: String,
    pub source: String,
    pub target: String,
    pub weight: QVector,
}

impl EdgeSpec {
    pub fn new(
        id: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
        weight: QVector,
    ) -> Self {
        EdgeSpec {
            id: id.into(),
            source: source.into(),
            target: target.into(),
            weight,
        }
    }
}

impl GkmGraph {
    /// Builds the graph without a connection. Ids are sorted; weights are
    /// sign-canonicalized.
    pub fn new(
        rank: usize,
        vertices: Vec<String>,
        edges: Vec<EdgeSpec>,
    ) -> Result<Self, GraphError> {
        if rank == 0 {
            return Err(GraphError::ZeroRank);
        }
        let mut vertices = vertices;
        vertices.sort();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0].clone()));
        }
        let vertex_index: HashMap<String, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut edges = edges;
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = edges.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(GraphError::DuplicateEdge(w[0].id.clone()));
        }
        let mut data = Vec::with_capacity(edges.len());
        let mut weights = Vec::with_capacity(edges.len());
        for e in &edges {
            if e.id.is_empty() || e.id.ends_with('~') {
                return Err(GraphError::BadEdgeId(e.id.clone()));
            }
            let lookup = |v: &String| {
                vertex_index
                    .get(v)
                    .copied()
                    .ok_or_else(|| GraphError::UnknownVertex {
                        edge: e.id.clone(),
                        vertex: v.clone(),
                    })
            };
            let source = lookup(&e.source)?;
            let target = lookup(&e.target)?;
            if source == target {
                return Err(GraphError::Loop(e.id.clone()));
            }
            if e.weight.len() != rank {
                return Err(GraphError::WeightRank {
                    edge: e.id.clone(),
                    expected: rank,
                    got: e.weight.len(),
                });
            }
            if e.weight.is_zero() {
                return Err(GraphError::ZeroWeight(e.id.clone()));
            }
            data.push(EdgeData {
                id: e.id.clone(),
                source,
                target,
            });
            weights.push(e.weight.sign_canonical());
        }
        let edge_index = data
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.clone(), i))
            .collect();
        let mut stars = vec![Vec::new(); vertices.len()];
        for (i, e) in data.iter().enumerate() {
            stars[e.source].push(DirEdge::forward(i));
            stars[e.target].push(DirEdge::backward(i));
        }
        for s in &mut stars {
            s.sort();
        }
        let mut star_pos = vec![0; 2 * data.len()];
        for s in &stars {
            for (p, e) in s.iter().enumerate() {
                star_pos[e.index()] = p;
            }
        }
        Ok(GkmGraph {
            rank,
            vertices,
            edges: data,
            weights,
            stars,
            star_pos,
            connection: None,
            vertex_index,
            edge_index,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge_id(&self, edge: usize) -> &str {
        &self.edges[edge].id
    }

    pub fn edge_name(&self, e: DirEdge) -> String {
        let id = &self.edges[e.edge()].id;
        if e.is_forward() {
            id.clone()
        } else {
            format!("{id}~")
        }
    }

    pub fn dir_edge_by_name(&self, name: &str) -> Option<DirEdge> {
        match name.strip_suffix('~') {
            Some(id) => self.edge_index.get(id).map(|&i| DirEdge::backward(i)),
            None => self.edge_index.get(name).map(|&i| DirEdge::forward(i)),
        }
    }

    pub fn source(&self, e: DirEdge) -> usize {
        let d = &self.edges[e.edge()];
        if e.is_forward() {
            d.source
        } else {
            d.target
        }
    }

    pub fn target(&self, e: DirEdge) -> usize {
        self.source(e.reverse())
    }

    /// Directed edges leaving `v`, in index order.
    pub fn star(&self, v: usize) -> &[DirEdge] {
        &self.stars[v]
    }

    pub fn star_position(&self, e: DirEdge) -> usize {
        self.star_pos[e.index()]
    }

    pub fn dir_edges(&self) -> impl Iterator<Item = DirEdge> + '_ {
        (0..2 * self.edges.len()).map(DirEdge)
    }

    /// Valence of vertex 0 (the common valence when the graph is regular).
    pub fn valence(&self) -> usize {
        self.stars.first().map_or(0, Vec::len)
    }

    pub fn is_regular(&self) -> bool {
        let n = self.valence();
        self.stars.iter().all(|s| s.len() == n)
    }

    /// Sign-canonical weight of the undirected edge under `e`.
    pub fn weight(&self, e: DirEdge) -> &QVector {
        &self.weights[e.edge()]
    }

    pub fn weights(&self) -> &[QVector] {
        &self.weights
    }

    /// Same graph and connection with new per-undirected-edge weights.
    pub fn with_weights(&self, rank: usize, weights: Vec<QVector>) -> Result<Self, GraphError> {
        assert_eq!(weights.len(), self.edges.len(), "one weight per edge");
        let mut g = self.clone();
        g.rank = rank;
        for (i, w) in weights.iter().enumerate() {
            if w.len() != rank {
                return Err(GraphError::WeightRank {
                    edge: self.edges[i].id.clone(),
                    expected: rank,
                    got: w.len(),
                });
            }
            if w.is_zero() {
                return Err(GraphError::ZeroWeight(self.edges[i].id.clone()));
            }
        }
        g.weights = weights.into_iter().map(|w| w.sign_canonical()).collect();
        Ok(g)
    }

    pub fn has_connection(&self) -> bool {
        self.connection.is_some()
    }

    pub fn connection_table(&self) -> Option<&ConnectionTable> {
        self.connection.as_ref()
    }

    /// Installs a connection table without checking it.
    pub fn with_connection_table(&self, table: ConnectionTable) -> Self {
        assert_eq!(
            table.len(),
            2 * self.edges.len(),
            "one row per directed edge"
        );
        let mut g = self.clone();
        g.connection = Some(table);
        g
    }

    /// Installs the connection `(e, f) ↦ ∇_e f` computed by `rule`.
    pub fn with_connection(&self, mut rule: impl FnMut(DirEdge, DirEdge) -> DirEdge) -> Self {
        let table = self
            .dir_edges()
            .map(|e| {
                self.star(self.source(e))
                    .iter()
                    .map(|&f| Some(rule(e, f)))
                    .collect()
            })
            .collect();
        self.with_connection_table(table)
    }

    pub fn without_connection(&self) -> Self {
        let mut g = self.clone();
        g.connection = None;
        g
    }

    /// `∇_e f`, for `f` in the star of the source of `e`. Panics when the
    /// connection is absent or has a hole there; validated graphs have none.
    pub fn nabla(&self, e: DirEdge, f: DirEdge) -> DirEdge {
        debug_assert_eq!(self.source(e), self.source(f), "f must start where e does");
        self.connection.as_ref().expect("graph has a connection")[e.index()]
            [self.star_pos[f.index()]]
        .expect("connection is total")
    }

    /// `true` if the connection is present, total and lands in the right stars.
    pub fn connection_is_total(&self) -> bool {
        let Some(table) = &self.connection else {
            return false;
        };
        self.dir_edges().all(|e| {
            let t = self.target(e);
            table[e.index()].len() == self.star(self.source(e)).len()
                && table[e.index()]
                    .iter()
                    .all(|x| x.is_some_and(|f| self.source(f) == t))
        })
    }

    /// Breadth-first distances from `start`; unreachable vertices get `None`.
    pub fn distances(&self, start: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = std::collections::VecDeque::new();
        dist[start] = Some(0);
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &e in self.star(v) {
                let w = self.target(e);
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.distances(0).iter().all(Option::is_some)
    }
}
