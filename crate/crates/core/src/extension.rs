//! Extension of a labelling on a product graph to a full-rank labelling by
//! weight transport, and the induced linear action of deck transformations.
//!
//! A frame at a vertex assigns to every edge of its star a signed lift `α̂`
//! of its weight together with a vector `β̂` with `φ(β̂) = α̂`. Moving along
//! `e`, the lift of `∇_e f` is written as `p·α̂(f) + q·α̂(e)` and the same
//! combination of `β̂`s becomes its new vector. Signs of the lifts are free;
//! flipping one flips its `β̂` with it, so `β̂` is determined up to sign.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::covering::{build_covering, CoveringError, DeckGroup};
use crate::exactla::rational::format_rational;
use crate::exactla::{Lattice, QMatrix, QVector};
use crate::graph::{check_gkm_k, DirEdge, GkmGraph, Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtensionError {
    #[error("graph has no connection")]
    MissingConnection,
    #[error("graph is not a product of simplices and Σ's: {0}")]
    NotAProduct(String),
    #[error("no coefficients relate the transported weights: {0}")]
    CoefficientNotFound(Witness),
    #[error("transport around a cycle changes a weight: {0}")]
    InconsistentHolonomy(Witness),
    #[error("extended weights are dependent: {0}")]
    NotIndependent(Witness),
    #[error("path does not start at the base vertex or is not contiguous")]
    BadPath,
    #[error("deck action is not compatible with the extension: {0}")]
    ActionNotCompatible(Witness),
}

impl From<CoveringError> for ExtensionError {
    fn from(e: CoveringError) -> Self {
        ExtensionError::NotAProduct(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Frame {
    alpha: Vec<QVector>,
    beta: Vec<QVector>,
}

fn base_frame(g: &GkmGraph, v0: usize) -> Frame {
    let n = g.star(v0).len();
    Frame {
        alpha: g.star(v0).iter().map(|&e| g.weight(e).clone()).collect(),
        beta: (0..n).map(|i| QVector::unit(n, i)).collect(),
    }
}

/// The frame at the target of `e` obtained from the frame at its source.
fn step(g: &GkmGraph, frame: &Frame, e: DirEdge) -> Result<Frame, ExtensionError> {
    let v = g.source(e);
    let w = g.target(e);
    let pe = g.star_position(e);
    let size = g.star(w).len();
    let mut alpha = vec![None; size];
    let mut beta = vec![None; size];
    for (j, &f) in g.star(v).iter().enumerate() {
        let image = g.nabla(e, f);
        let pos = g.star_position(image);
        if f == e {
            alpha[pos] = Some(-&frame.alpha[pe]);
            beta[pos] = Some(-&frame.beta[pe]);
            continue;
        }
        let target = g.weight(image).clone();
        let m = QMatrix::from_columns(g.rank(), &[frame.alpha[j].clone(), frame.alpha[pe].clone()]);
        let c = m.solve_in_span(&target).ok_or_else(|| {
            ExtensionError::CoefficientNotFound(
                Witness::new("weight of ∇_e f is not in the span of the lifts of e and f")
                    .with_edges(g, [e, f]),
            )
        })?;
        beta[pos] = Some(&frame.beta[j].scaled(&c[0]) + &frame.beta[pe].scaled(&c[1]));
        alpha[pos] = Some(target);
    }
    Ok(Frame {
        alpha: alpha
            .into_iter()
            .map(|x| x.expect("∇_e is a bijection"))
            .collect(),
        beta: beta
            .into_iter()
            .map(|x| x.expect("∇_e is a bijection"))
            .collect(),
    })
}

/// `A^γ`: transports the standard basis on the star of `v0` along `path`.
/// Entry `i` is the image of the `i`-th star edge of `v0` and its vector.
pub fn transport_weights(
    g: &GkmGraph,
    v0: usize,
    path: &[DirEdge],
) -> Result<Vec<(DirEdge, QVector)>, ExtensionError> {
    if !g.has_connection() {
        return Err(ExtensionError::MissingConnection);
    }
    let mut frame = base_frame(g, v0);
    let mut edges: Vec<DirEdge> = g.star(v0).to_vec();
    let mut at = v0;
    for &e in path {
        if g.source(e) != at {
            return Err(ExtensionError::BadPath);
        }
        frame = step(g, &frame, e)?;
        edges = edges.iter().map(|&f| g.nabla(e, f)).collect();
        at = g.target(e);
    }
    Ok(edges
        .into_iter()
        .map(|f| (f, frame.beta[g.star_position(f)].clone()))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TreeOrder {
    /// Breadth-first, stars in index order.
    #[default]
    BreadthFirst,
    /// Depth-first, stars in reverse index order.
    DepthFirst,
}

#[derive(Clone, Debug)]
pub struct Extension {
    /// The graph relabelled by `β` (rank = valence), same connection.
    pub graph: GkmGraph,
    /// `φ: Q^n → Q^k`, columns `α̂` of the base star.
    pub phi: QMatrix,
    pub base_vertex: usize,
    pub basis: Vec<DirEdge>,
    frames: Vec<Frame>,
}

impl Extension {
    pub fn beta(&self, e: DirEdge) -> &QVector {
        self.graph.weight(e)
    }

    /// Signed lifts `(α̂(e), β̂(e))` in the frame of the source of `e`.
    pub fn lift(&self, e: DirEdge) -> (&QVector, &QVector) {
        let f = &self.frames[self.graph.source(e)];
        let p = self.graph.star_position(e);
        (&f.alpha[p], &f.beta[p])
    }
}

/// Extension with the product shape checked first.
pub fn extend_to_gkm_n(g: &GkmGraph) -> Result<Extension, ExtensionError> {
    if !g.has_connection() {
        return Err(ExtensionError::MissingConnection);
    }
    let c = build_covering(g, 0)?;
    if c.sheets() != 1 {
        return Err(ExtensionError::NotAProduct(format!(
            "its canonical covering has {} sheets",
            c.sheets()
        )));
    }
    extend_along(g, TreeOrder::BreadthFirst)
}

/// Transport from vertex 0 along a spanning tree, then check every edge
/// against the frames at both ends.
pub fn extend_along(g: &GkmGraph, order: TreeOrder) -> Result<Extension, ExtensionError> {
    if !g.has_connection() {
        return Err(ExtensionError::MissingConnection);
    }
    let v0 = 0;
    let mut frames: Vec<Option<Frame>> = vec![None; g.vertex_count()];
    frames[v0] = Some(base_frame(g, v0));
    let mut pending = VecDeque::from([v0]);
    while let Some(v) = match order {
        TreeOrder::BreadthFirst => pending.pop_front(),
        TreeOrder::DepthFirst => pending.pop_back(),
    } {
        let star: Vec<DirEdge> = match order {
            TreeOrder::BreadthFirst => g.star(v).to_vec(),
            TreeOrder::DepthFirst => g.star(v).iter().rev().copied().collect(),
        };
        for e in star {
            let w = g.target(e);
            if frames[w].is_none() {
                let next = step(g, frames[v].as_ref().unwrap(), e)?;
                frames[w] = Some(next);
                pending.push_back(w);
            }
        }
    }
    let frames: Vec<Frame> = frames
        .into_iter()
        .enumerate()
        .map(|(v, f)| {
            f.ok_or_else(|| {
                ExtensionError::NotAProduct(format!("vertex {} is unreachable", g.vertex_name(v)))
            })
        })
        .collect::<Result<_, _>>()?;
    // each edge closes a cycle with the tree; compare transported and stored frames
    for e in g.dir_edges() {
        let moved = step(g, &frames[g.source(e)], e)?;
        let stored = &frames[g.target(e)];
        for (pos, (a, b)) in moved.beta.iter().zip(&stored.beta).enumerate() {
            if !a.eq_up_to_sign(b) {
                return Err(ExtensionError::InconsistentHolonomy(
                    Witness::new(format!("transported {a} but the tree gives {b}"))
                        .with_edges(g, [e, g.star(g.target(e))[pos]]),
                ));
            }
        }
    }
    let n = g.star(v0).len();
    let phi = QMatrix::from_columns(g.rank(), &frames[v0].alpha);
    for f in &frames {
        for (a, b) in f.alpha.iter().zip(&f.beta) {
            assert_eq!(&phi.mul_vec(b), a, "φ∘β̂ = α̂ holds by construction");
        }
    }
    let betas = (0..g.edge_count())
        .map(|i| {
            let e = DirEdge::forward(i);
            frames[g.source(e)].beta[g.star_position(e)].clone()
        })
        .collect();
    let graph = g
        .with_weights(n, betas)
        .map_err(|err| ExtensionError::NotIndependent(Witness::new(err.to_string())))?;
    if n >= 2 {
        if let Verdict::Fail(w) = check_gkm_k(&graph, n).expect("valence is n") {
            return Err(ExtensionError::NotIndependent(w));
        }
    }
    Ok(Extension {
        graph,
        phi,
        base_vertex: v0,
        basis: g.star(v0).to_vec(),
        frames,
    })
}

/// Matrices `A_g` with `A_g β̂(e_i) = ±β̂(g e_i)` on the base star, signs fixed
/// by `φ∘A_g = φ`; one per deck element, in deck order.
pub fn induced_weight_action(
    ext: &Extension,
    deck: &DeckGroup,
) -> Result<Vec<QMatrix>, ExtensionError> {
    let g = &ext.graph;
    let n = ext.basis.len();
    let all: Vec<QVector> = g.dir_edges().map(|e| ext.lift(e).1.clone()).collect();
    let lattice = Lattice::from_generators(n, &all);
    let mut mats = Vec::with_capacity(deck.order());
    for psi in &deck.elements {
        let mut columns = Vec::with_capacity(n);
        for &e in &ext.basis {
            let (a, _) = ext.lift(e);
            let (a2, b2) = ext.lift(psi.edge(e));
            let col = if a2 == a {
                b2.clone()
            } else if *a2 == -a {
                -b2
            } else {
                return Err(ExtensionError::ActionNotCompatible(
                    Witness::new("deck transformation changes a weight").with_edges(g, [e]),
                ));
            };
            columns.push(col);
        }
        let m = QMatrix::from_columns(n, &columns);
        if ext.phi.mul(&m) != ext.phi {
            return Err(ExtensionError::ActionNotCompatible(Witness::new("φ∘A ≠ φ")));
        }
        for e in g.dir_edges() {
            let image = m.mul_vec(ext.lift(e).1);
            if !image.eq_up_to_sign(ext.lift(psi.edge(e)).1) {
                return Err(ExtensionError::ActionNotCompatible(
                    Witness::new("A does not carry β(e) to β(ge)").with_edges(g, [e]),
                ));
            }
            if !lattice.contains(&image) {
                return Err(ExtensionError::ActionNotCompatible(
                    Witness::new("A leaves the weight lattice").with_edges(g, [e]),
                ));
            }
        }
        mats.push(m);
    }
    for i in 0..mats.len() {
        for j in 0..mats.len() {
            if mats[i].mul(&mats[j]) != mats[deck.table[i][j]] {
                return Err(ExtensionError::ActionNotCompatible(Witness::new(format!(
                    "A_{i}·A_{j} differs from the matrix of their product"
                ))));
            }
        }
    }
    Ok(mats)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtensionReport {
    pub phi: Vec<Vec<String>>,
    pub beta: BTreeMap<String, QVector>,
    pub base_vertex: String,
    pub basis: Vec<String>,
}

impl ExtensionReport {
    pub fn new(ext: &Extension) -> Self {
        let g = &ext.graph;
        ExtensionReport {
            phi: (0..ext.phi.nrows())
                .map(|i| ext.phi.row(i).iter().map(format_rational).collect())
                .collect(),
            beta: (0..g.edge_count())
                .map(|i| {
                    (
                        g.edge_id(i).to_string(),
                        g.weight(DirEdge::forward(i)).clone(),
                    )
                })
                .collect(),
            base_vertex: g.vertex_name(ext.base_vertex).to_string(),
            basis: ext.basis.iter().map(|&e| g.edge_name(e)).collect(),
        }
    }
}
