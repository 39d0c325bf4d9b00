//! Fixture generators: products of simplices and Σ's labelled by a
//! characteristic function, weighted projective planes, the antipodal
//! hypercube example and generalized Bott towers.

pub mod bott;

use serde::{Deserialize, Serialize};

use crate::covering::{
    build_product_graph, quotient_graph, CoveringError, Facet, Factor, GraphMap, ProductError,
    ProductGraph, Quotient,
};
use crate::exactla::rational::primitive_integer_vector;
use crate::exactla::{QMatrix, QVector, Rational};
use crate::graph::{DirEdge, GkmGraph, GraphError, Witness};

pub use bott::{BottError, BottStage, BottTower, BottTowerSpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Covering(#[from] CoveringError),
    #[error("expected {expected} facet labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("facet label {facet} has length {got}, expected {expected}")]
    LabelLength {
        facet: usize,
        expected: usize,
        got: usize,
    },
    #[error("facet labels are dependent: {0}")]
    DependentLabels(Witness),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

/// A product of simplices and Σ's with an integer label per facet, facets
/// ordered as in [`ProductGraph::facets`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacteristicPair {
    pub factors: Vec<Factor>,
    pub lambda: Vec<Vec<i64>>,
}

impl CharacteristicPair {
    /// Standard labels: facet `i ≥ 1` of `Δ^k` gets `e_i` of its block and
    /// facet 0 the sum of the block; facet `i` of `Σ^m` gets `e_{i+1}`.
    pub fn standard(factors: &[Factor]) -> Self {
        let n: usize = factors.iter().map(|f| f.dim()).sum();
        let mut lambda = Vec::new();
        let mut offset = 0;
        for f in factors {
            let unit = |i: usize| {
                let mut v = vec![0; n];
                v[offset + i] = 1;
                v
            };
            match *f {
                Factor::Simplex(k) => {
                    let mut sum = vec![0; n];
                    sum[offset..offset + k].fill(1);
                    lambda.push(sum);
                    lambda.extend((0..k).map(unit));
                }
                Factor::Sigma(m) => lambda.extend((0..m).map(unit)),
            }
            offset += f.dim();
        }
        CharacteristicPair {
            factors: factors.to_vec(),
            lambda,
        }
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim()).sum()
    }

    fn label(&self, p: &ProductGraph, facet: Facet) -> QVector {
        QVector::from_i64s(&self.lambda[p.facet_position(facet)])
    }
}

/// The labelled product graph of a characteristic pair. At a vertex the
/// weights are the dual basis of the labels of the facets through it, made
/// primitive integral; the connection is the natural one.
pub fn labelled_product(pair: &CharacteristicPair) -> Result<ProductGraph, ModelError> {
    let mut p = build_product_graph(&pair.factors)?;
    let n = pair.dim();
    let facets = p.facets();
    if pair.lambda.len() != facets.len() {
        return Err(ModelError::LabelCount {
            expected: facets.len(),
            got: pair.lambda.len(),
        });
    }
    if let Some((i, l)) = pair.lambda.iter().enumerate().find(|(_, l)| l.len() != n) {
        return Err(ModelError::LabelLength {
            facet: i,
            expected: n,
            got: l.len(),
        });
    }
    let g = &p.graph;
    // weight of e computed at its source
    let mut at_source: Vec<QVector> = Vec::with_capacity(2 * g.edge_count());
    let mut inverses: Vec<Option<(Vec<Facet>, QMatrix)>> = vec![None; g.vertex_count()];
    for (v, slot) in inverses.iter_mut().enumerate() {
        let at = p.facets_at(v);
        let columns: Vec<QVector> = at.iter().map(|&f| pair.label(&p, f)).collect();
        let inv = QMatrix::from_columns(n, &columns)
            .inverse()
            .ok_or_else(|| {
                ModelError::DependentLabels(
                    Witness::new("labels at a vertex are dependent").at(g, v),
                )
            })?;
        *slot = Some((at, inv));
    }
    for e in g.dir_edges() {
        let (at, inv) = inverses[g.source(e)].as_ref().unwrap();
        let left = p.facet_left_by(e);
        let row = at
            .iter()
            .position(|&f| f == left)
            .expect("left facet contains the source");
        let dual = QVector::new(inv.row(row).to_vec());
        let prim = primitive_integer_vector(dual.entries());
        at_source.push(QVector::new(
            prim.into_iter().map(Rational::from_integer).collect(),
        ));
    }
    let mut weights = Vec::with_capacity(g.edge_count());
    for i in 0..g.edge_count() {
        let (a, b) = (&at_source[2 * i], &at_source[2 * i + 1]);
        if !a.eq_up_to_sign(b) {
            return Err(ModelError::DependentLabels(
                Witness::new("dual weights disagree at the two ends of an edge")
                    .with_edges(g, [DirEdge::forward(i)]),
            ));
        }
        weights.push(a.clone());
    }
    p.graph = g.with_weights(n, weights)?;
    Ok(p)
}

pub fn product_model(pair: &CharacteristicPair) -> Result<GkmGraph, ModelError> {
    Ok(labelled_product(pair)?.graph)
}

pub fn standard_product(factors: &[Factor]) -> Result<ProductGraph, ModelError> {
    labelled_product(&CharacteristicPair::standard(factors))
}

/// `CP^n`.
pub fn simplex_model(n: usize) -> Result<GkmGraph, ModelError> {
    if n == 0 {
        return Err(ModelError::Parameter(
            "simplex dimension must be at least 1".into(),
        ));
    }
    Ok(standard_product(&[Factor::Simplex(n)])?.graph)
}

/// `S^{2m}`.
pub fn sigma_model(m: usize) -> Result<GkmGraph, ModelError> {
    if m < 2 {
        return Err(ModelError::Parameter("Σ needs m ≥ 2".into()));
    }
    Ok(standard_product(&[Factor::Sigma(m)])?.graph)
}

/// Hirzebruch surface pair on `I²`: `λ(F_{2,0}) = (a, 1)`, the rest standard.
pub fn hirzebruch_pair(a: i64) -> CharacteristicPair {
    CharacteristicPair {
        factors: vec![Factor::Simplex(1), Factor::Simplex(1)],
        lambda: vec![vec![1, 0], vec![1, 0], vec![a, 1], vec![0, 1]],
    }
}

pub fn hirzebruch_model(a: i64) -> Result<GkmGraph, ModelError> {
    product_model(&hirzebruch_pair(a))
}

/// `Δ²` with `λ = (α, β), (1, 0), (0, 1)` on facets 0, 1, 2.
pub fn weighted_projective_pair(alpha: i64, beta: i64) -> CharacteristicPair {
    CharacteristicPair {
        factors: vec![Factor::Simplex(2)],
        lambda: vec![vec![alpha, beta], vec![1, 0], vec![0, 1]],
    }
}

pub fn weighted_projective_model(alpha: i64, beta: i64) -> Result<GkmGraph, ModelError> {
    if alpha == 0 || beta == 0 {
        return Err(ModelError::Parameter("weights must be nonzero".into()));
    }
    product_model(&weighted_projective_pair(alpha, beta))
}

/// The hypercube `I^n` with `λ(F_{n,±}) = ±e_n`, `λ(F_{i,±}) = e_i ± e_n`,
/// the antipodal involution, and the quotient by it. Facet index 0 of a `Δ¹`
/// factor (coordinate 1) is the `+` facet.
#[derive(Clone, Debug)]
pub struct HypercubeModel {
    pub n: usize,
    /// Rank-`n` labels.
    pub total: ProductGraph,
    pub involution: GraphMap,
    /// The lattice automorphism intertwined with the involution on facets.
    pub phi: QMatrix,
    /// Total graph with labels restricted to the invariant subtorus (rank `n−1`).
    pub projected: GkmGraph,
    pub quotient: Quotient,
}

pub fn hypercube_pair(n: usize) -> CharacteristicPair {
    let mut lambda = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut plus = vec![0; n];
        let mut minus = vec![0; n];
        if i + 1 == n {
            plus[n - 1] = 1;
            minus[n - 1] = -1;
        } else {
            plus[i] = 1;
            minus[i] = 1;
            plus[n - 1] = 1;
            minus[n - 1] = -1;
        }
        lambda.push(plus);
        lambda.push(minus);
    }
    CharacteristicPair {
        factors: vec![Factor::Simplex(1); n],
        lambda,
    }
}

/// Flip of every coordinate of `I^n`.
pub fn antipodal_map(p: &ProductGraph) -> GraphMap {
    let g = &p.graph;
    let flip = |v: usize| -> usize {
        let c: Vec<usize> = p.coords(v).iter().map(|&x| 1 - x).collect();
        g.vertex_by_name(&crate::covering::vertex_label(&c))
            .unwrap()
    };
    let vertices: Vec<usize> = (0..g.vertex_count()).map(flip).collect();
    let edges = g
        .dir_edges()
        .map(|e| {
            let j = p.factor_of(e);
            let w = vertices[g.target(e)];
            p.edge_at(vertices[g.source(e)], j, p.coords(w)[j])
                .expect("flipped edge exists")
        })
        .collect();
    GraphMap { vertices, edges }
}

pub fn hypercube_involution_model(n: usize) -> Result<HypercubeModel, ModelError> {
    if n < 3 {
        return Err(ModelError::Parameter(
            "hypercube example needs n ≥ 3".into(),
        ));
    }
    let total = labelled_product(&hypercube_pair(n))?;
    let involution = antipodal_map(&total);
    let mut phi = QMatrix::identity(n);
    phi[(n - 1, n - 1)] = Rational::from_integer((-1).into());
    let projected_weights: Vec<QVector> = total
        .graph
        .weights()
        .iter()
        .map(|w| QVector::new(w.entries()[..n - 1].to_vec()))
        .collect();
    let projected = total.graph.with_weights(n - 1, projected_weights)?;
    let quotient = quotient_graph(
        &projected,
        &[GraphMap::identity(&projected), involution.clone()],
    )?;
    Ok(HypercubeModel {
        n,
        total,
        involution,
        phi,
        projected,
        quotient,
    })
}
