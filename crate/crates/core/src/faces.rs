//! Faces: connected, l-valent, connection-invariant subgraphs, and the
//! combinatorics of graphs whose three-dimensional faces are small.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use itertools::Itertools;
use serde::{Serialize, Serializer};

use crate::covering::Factor;
use crate::exactla::{QMatrix, QVector, Rational};
use crate::graph::{gkm_order, DirEdge, GkmGraph, Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FaceError {
    #[error("graph has no connection")]
    MissingConnection,
    #[error("invalid seed: {0}")]
    InvalidSeed(String),
    #[error("span closure failed: {0}")]
    SpanViolation(Witness),
    #[error("no face through the given edges: {0}")]
    NotAFace(Witness),
    #[error("simplex partition inconsistent: {0}")]
    PartitionInconsistent(Witness),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceType {
    Point,
    Edge,
    Biangle,
    Triangle,
    Square,
    Simplex3,
    Sigma3,
    TriangleTimesInterval,
    BiangleTimesInterval,
    Cube,
    Other(usize),
}

impl fmt::Display for FaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaceType::Point => write!(f, "Point"),
            FaceType::Edge => write!(f, "Edge"),
            FaceType::Biangle => write!(f, "Biangle"),
            FaceType::Triangle => write!(f, "Triangle"),
            FaceType::Square => write!(f, "Square"),
            FaceType::Simplex3 => write!(f, "Δ³"),
            FaceType::Sigma3 => write!(f, "Σ³"),
            FaceType::TriangleTimesInterval => write!(f, "Δ²×I"),
            FaceType::BiangleTimesInterval => write!(f, "Σ²×I"),
            FaceType::Cube => write!(f, "I³"),
            FaceType::Other(l) => write!(f, "Other({l})"),
        }
    }
}

impl Serialize for FaceType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A face, identified by its vertex set and undirected edge set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub dim: usize,
    pub kind: FaceType,
}

impl Face {
    pub fn key(&self) -> (&[usize], &[usize]) {
        (&self.vertices, &self.edges)
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, e: DirEdge) -> bool {
        self.edges.binary_search(&e.edge()).is_ok()
    }

    /// Face edges leaving `v`.
    pub fn star(&self, g: &GkmGraph, v: usize) -> Vec<DirEdge> {
        g.star(v)
            .iter()
            .copied()
            .filter(|&e| self.contains_edge(e))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceReport {
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    pub dim: usize,
    #[serde(rename = "type")]
    pub kind: FaceType,
}

impl FaceReport {
    pub fn new(g: &GkmGraph, f: &Face) -> Self {
        FaceReport {
            vertices: f
                .vertices
                .iter()
                .map(|&v| g.vertex_name(v).to_string())
                .collect(),
            edges: f.edges.iter().map(|&e| g.edge_id(e).to_string()).collect(),
            dim: f.dim,
            kind: f.kind,
        }
    }
}

fn check_seed(g: &GkmGraph, v: usize, edges: &[DirEdge]) -> Result<(), FaceError> {
    if !g.has_connection() {
        return Err(FaceError::MissingConnection);
    }
    if let Some(e) = edges.iter().find(|&&e| g.source(e) != v) {
        return Err(FaceError::InvalidSeed(format!(
            "{} does not start at {}",
            g.edge_name(*e),
            g.vertex_name(v)
        )));
    }
    if edges.iter().duplicates().next().is_some() {
        return Err(FaceError::InvalidSeed("repeated edge".into()));
    }
    Ok(())
}

fn in_span(basis: &[QVector], w: &QVector) -> bool {
    let rows: Vec<Vec<Rational>> = basis.iter().map(|b| b.entries().to_vec()).collect();
    let r = QMatrix::from_rows(&rows).rank();
    let mut with = rows;
    with.push(w.entries().to_vec());
    QMatrix::from_rows(&with).rank() == r
}

/// Collects a face from per-vertex edge sets and tags its type.
fn assemble(g: &GkmGraph, stars: &HashMap<usize, BTreeSet<DirEdge>>, dim: usize) -> Face {
    let vertices: Vec<usize> = stars.keys().copied().sorted().collect();
    let edges: Vec<usize> = stars
        .values()
        .flatten()
        .map(|e| e.edge())
        .sorted()
        .dedup()
        .collect();
    let mut face = Face {
        vertices,
        edges,
        dim,
        kind: FaceType::Other(dim),
    };
    face.kind = match dim {
        0 => FaceType::Point,
        1 => FaceType::Edge,
        2 => classify_two_face(&face),
        _ => FaceType::Other(dim),
    };
    if dim == 3 {
        face.kind = classify_three_face(g, &face);
    }
    face
}

/// The unique face through `edges` (all leaving `v`). Below the GKM order the
/// face is grown through edges whose weights lie in the span of the seeds;
/// otherwise it is the smallest connection-closed subgraph containing them,
/// which is the face whenever it is `l`-valent.
pub fn face_through_edges(g: &GkmGraph, v: usize, edges: &[DirEdge]) -> Result<Face, FaceError> {
    check_seed(g, v, edges)?;
    let l = edges.len();
    if l < gkm_order(g) {
        span_face(g, v, edges)
    } else {
        closure_face(g, v, edges)
    }
}

fn span_face(g: &GkmGraph, v: usize, edges: &[DirEdge]) -> Result<Face, FaceError> {
    let l = edges.len();
    let basis: Vec<QVector> = edges.iter().map(|&e| g.weight(e).clone()).collect();
    let mut stars: HashMap<usize, BTreeSet<DirEdge>> = HashMap::new();
    let mut queue = VecDeque::from([v]);
    while let Some(w) = queue.pop_front() {
        if stars.contains_key(&w) {
            continue;
        }
        let inside: BTreeSet<DirEdge> = g
            .star(w)
            .iter()
            .copied()
            .filter(|&e| in_span(&basis, g.weight(e)))
            .collect();
        if inside.len() != l {
            return Err(FaceError::SpanViolation(
                Witness::new(format!(
                    "{} incident edges in the span, expected {l}",
                    inside.len()
                ))
                .at(g, w)
                .with_edges(g, inside.iter().copied()),
            ));
        }
        for &e in &inside {
            queue.push_back(g.target(e));
        }
        stars.insert(w, inside);
    }
    for (w, star) in &stars {
        for &e in star {
            for &f in star {
                let image = g.nabla(e, f);
                if !stars[&g.target(e)].contains(&image) {
                    return Err(FaceError::SpanViolation(
                        Witness::new("span closure is not connection-invariant")
                            .at(g, *w)
                            .with_edges(g, [e, f, image]),
                    ));
                }
            }
        }
    }
    Ok(assemble(g, &stars, l))
}

/// Smallest connection-closed subgraph containing `edges`, required to be
/// `edges.len()`-valent. Uses only the connection, never the labels.
pub fn closure_face(g: &GkmGraph, v: usize, edges: &[DirEdge]) -> Result<Face, FaceError> {
    check_seed(g, v, edges)?;
    let l = edges.len();
    let mut stars: HashMap<usize, BTreeSet<DirEdge>> = HashMap::new();
    stars.insert(v, edges.iter().copied().collect());
    let mut queue: VecDeque<usize> = VecDeque::from([v]);
    while let Some(w) = queue.pop_front() {
        let star: Vec<DirEdge> = stars[&w].iter().copied().collect();
        for &e in &star {
            let t = g.target(e);
            let images: Vec<DirEdge> = star.iter().map(|&f| g.nabla(e, f)).collect();
            let entry = stars.entry(t).or_default();
            let before = entry.len();
            entry.extend(images);
            if entry.len() != before {
                if entry.len() > l {
                    return Err(FaceError::NotAFace(
                        Witness::new(format!("closure has more than {l} edges at a vertex"))
                            .at(g, t)
                            .with_edges(g, entry.iter().copied()),
                    ));
                }
                queue.push_back(t);
            }
        }
    }
    if let Some((w, s)) = stars.iter().find(|(_, s)| s.len() != l) {
        return Err(FaceError::NotAFace(
            Witness::new(format!(
                "closure has {} edges at a vertex, expected {l}",
                s.len()
            ))
            .at(g, *w)
            .with_edges(g, s.iter().copied()),
        ));
    }
    Ok(assemble(g, &stars, l))
}

/// All `l`-faces, each once, sorted by (vertex set, edge set).
pub fn enumerate_faces(g: &GkmGraph, l: usize) -> Result<Vec<Face>, FaceError> {
    let mut seen: HashMap<(Vec<usize>, Vec<usize>), Face> = HashMap::new();
    for v in 0..g.vertex_count() {
        for subset in g.star(v).iter().copied().combinations(l) {
            // seeds covered by a known face add nothing
            if seen.values().any(|f| {
                f.contains_vertex(v) && subset.iter().all(|&e| f.contains_edge(e)) && f.dim == l
            }) {
                continue;
            }
            let face = face_through_edges(g, v, &subset)?;
            seen.insert((face.vertices.clone(), face.edges.clone()), face);
        }
    }
    let mut faces: Vec<Face> = seen.into_values().collect();
    faces.sort_by(|a, b| a.key().cmp(&b.key()));
    Ok(faces)
}

pub fn classify_two_face(f: &Face) -> FaceType {
    match (f.vertices.len(), f.edges.len()) {
        (2, 2) => FaceType::Biangle,
        (3, 3) => FaceType::Triangle,
        (4, 4) => FaceType::Square,
        _ => FaceType::Other(2),
    }
}

/// Two-faces of a three-face, from its connection.
fn two_faces_of(g: &GkmGraph, f: &Face) -> Option<Vec<Face>> {
    let mut seen: HashMap<(Vec<usize>, Vec<usize>), Face> = HashMap::new();
    for &v in &f.vertices {
        for pair in f.star(g, v).into_iter().combinations(2) {
            let face = closure_face(g, v, &pair).ok()?;
            seen.entry((face.vertices.clone(), face.edges.clone()))
                .or_insert(face);
        }
    }
    Some(seen.into_values().collect())
}

pub fn classify_three_face(g: &GkmGraph, f: &Face) -> FaceType {
    let Some(two) = two_faces_of(g, f) else {
        return FaceType::Other(3);
    };
    let count = |t: FaceType| two.iter().filter(|x| x.kind == t).count();
    let (b, t, s) = (
        count(FaceType::Biangle),
        count(FaceType::Triangle),
        count(FaceType::Square),
    );
    if b + t + s != two.len() {
        return FaceType::Other(3);
    }
    match (f.vertices.len(), f.edges.len(), b, t, s) {
        (4, 6, 0, 4, 0) => FaceType::Simplex3,
        (2, 3, 3, 0, 0) => FaceType::Sigma3,
        (6, 9, 0, 2, 3) => FaceType::TriangleTimesInterval,
        (4, 6, 2, 0, 2) => FaceType::BiangleTimesInterval,
        (8, 12, 0, 0, 6) => FaceType::Cube,
        _ => FaceType::Other(3),
    }
}

/// Every triple of edges at every vertex spans a unique three-face, of one
/// of the five small types.
pub fn check_small_three_faces(g: &GkmGraph) -> Verdict {
    if !g.has_connection() {
        return Verdict::Fail(Witness::new("graph has no connection"));
    }
    let mut known: HashMap<(Vec<usize>, Vec<usize>), FaceType> = HashMap::new();
    for v in 0..g.vertex_count() {
        for triple in g.star(v).iter().copied().combinations(3) {
            let face = match closure_face(g, v, &triple) {
                Ok(f) => f,
                Err(FaceError::NotAFace(w)) => {
                    return Verdict::Fail(Witness {
                        detail: format!("edges span no three-face: {}", w.detail),
                        vertices: vec![g.vertex_name(v).to_string()],
                        edges: triple.iter().map(|&e| g.edge_name(e)).collect(),
                    })
                }
                Err(e) => return Verdict::Fail(Witness::new(e.to_string())),
            };
            let kind = *known
                .entry((face.vertices.clone(), face.edges.clone()))
                .or_insert(face.kind);
            if matches!(kind, FaceType::Other(_)) {
                return Verdict::Fail(
                    Witness::new(format!(
                        "three-face with {} vertices and {} edges is not of a small type",
                        face.vertices.len(),
                        face.edges.len()
                    ))
                    .at(g, v)
                    .with_edges(g, triple),
                );
            }
        }
    }
    Verdict::Pass
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub edges: Vec<DirEdge>,
    /// `Simplex(k)` for a Δ-block of k edges, `Sigma(m)` for a Σ-block.
    pub kind: Factor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexPartition {
    pub vertex: usize,
    /// Ordered by smallest edge.
    pub blocks: Vec<Block>,
}

impl SimplexPartition {
    pub fn block_of(&self, e: DirEdge) -> Option<usize> {
        self.blocks.iter().position(|b| b.edges.contains(&e))
    }
}

fn pair_type(g: &GkmGraph, v: usize, e: DirEdge, f: DirEdge) -> Result<FaceType, FaceError> {
    Ok(closure_face(g, v, &[e, f])?.kind)
}

/// Blocks of edges at `v`: edges spanning a triangle share a Δ-block, edges
/// spanning a biangle share a Σ-block, edges spanning a square are apart.
pub fn maximal_simplex_partition(g: &GkmGraph, v: usize) -> Result<SimplexPartition, FaceError> {
    if !g.has_connection() {
        return Err(FaceError::MissingConnection);
    }
    let star = g.star(v).to_vec();
    let n = star.len();
    let mut types = vec![vec![FaceType::Point; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let t = pair_type(g, v, star[i], star[j])?;
            if !matches!(t, FaceType::Triangle | FaceType::Biangle | FaceType::Square) {
                return Err(FaceError::PartitionInconsistent(
                    Witness::new(format!("edges span a two-face of type {t}"))
                        .at(g, v)
                        .with_edges(g, [star[i], star[j]]),
                ));
            }
            types[i][j] = t;
            types[j][i] = t;
        }
    }
    let mut block_of: Vec<Option<usize>> = vec![None; n];
    let mut blocks: Vec<Block> = Vec::new();
    for i in 0..n {
        if block_of[i].is_some() {
            continue;
        }
        let members: Vec<usize> = (0..n)
            .filter(|&j| j == i || types[i][j] != FaceType::Square)
            .collect();
        let tri = members
            .iter()
            .any(|&j| j != i && types[i][j] == FaceType::Triangle);
        let bi = members
            .iter()
            .any(|&j| j != i && types[i][j] == FaceType::Biangle);
        if tri && bi {
            return Err(FaceError::PartitionInconsistent(
                Witness::new("an edge spans both triangles and biangles")
                    .at(g, v)
                    .with_edges(g, members.iter().map(|&j| star[j])),
            ));
        }
        let want = if bi {
            FaceType::Biangle
        } else {
            FaceType::Triangle
        };
        for &a in &members {
            for &b in &members {
                if a != b && types[a][b] != want {
                    return Err(FaceError::PartitionInconsistent(
                        Witness::new("block relation is not transitive")
                            .at(g, v)
                            .with_edges(g, [star[a], star[b]]),
                    ));
                }
            }
            if block_of[a].is_some() {
                return Err(FaceError::PartitionInconsistent(
                    Witness::new("blocks overlap")
                        .at(g, v)
                        .with_edges(g, [star[a]]),
                ));
            }
            block_of[a] = Some(blocks.len());
        }
        let kind = if bi {
            Factor::Sigma(members.len())
        } else {
            Factor::Simplex(members.len())
        };
        blocks.push(Block {
            edges: members.iter().map(|&j| star[j]).collect(),
            kind,
        });
    }
    Ok(SimplexPartition { vertex: v, blocks })
}

/// The biangle identity `∇_e f = ∇_{e'} f`, the square identity
/// `∇_{e₁'}∇_e f = ∇_{e₁}∇_{e'} f`, and `∇_e` mapping blocks to blocks of the
/// same type.
pub fn check_connection_identities(g: &GkmGraph) -> Verdict {
    if !g.has_connection() {
        return Verdict::Fail(Witness::new("graph has no connection"));
    }
    let mut partitions = Vec::with_capacity(g.vertex_count());
    for v in 0..g.vertex_count() {
        match maximal_simplex_partition(g, v) {
            Ok(p) => partitions.push(p),
            Err(e) => return Verdict::Fail(Witness::new(e.to_string()).at(g, v)),
        }
    }
    for v in 0..g.vertex_count() {
        let star = g.star(v);
        for (&e, &e2) in star.iter().tuple_combinations() {
            let kind = match closure_face(g, v, &[e, e2]) {
                Ok(f) => f.kind,
                Err(err) => return Verdict::Fail(Witness::new(err.to_string()).at(g, v)),
            };
            match kind {
                FaceType::Biangle => {
                    for &f in star {
                        if g.nabla(e, f) != g.nabla(e2, f) {
                            return Verdict::Fail(
                                Witness::new("biangle identity fails")
                                    .at(g, v)
                                    .with_edges(g, [e, e2, f]),
                            );
                        }
                    }
                }
                FaceType::Square => {
                    let e1p = g.nabla(e, e2);
                    let e1 = g.nabla(e2, e);
                    for &f in star {
                        let left = g.nabla(e1p, g.nabla(e, f));
                        let right = g.nabla(e1, g.nabla(e2, f));
                        if left != right {
                            return Verdict::Fail(
                                Witness::new("square identity fails")
                                    .at(g, v)
                                    .with_edges(g, [e, e2, f]),
                            );
                        }
                    }
                }
                _ => {}
            }
        }
        for &e in star {
            let there = &partitions[g.target(e)];
            for block in &partitions[v].blocks {
                let image: BTreeSet<DirEdge> = block.edges.iter().map(|&f| g.nabla(e, f)).collect();
                let matched = there.blocks.iter().any(|b| {
                    b.kind == block.kind
                        && b.edges.iter().copied().collect::<BTreeSet<_>>() == image
                });
                if !matched {
                    return Verdict::Fail(
                        Witness::new(format!(
                            "connection does not map a {} block to a block",
                            block.kind
                        ))
                        .at(g, v)
                        .with_edges(g, std::iter::once(e).chain(block.edges.iter().copied())),
                    );
                }
            }
        }
    }
    Verdict::Pass
}
