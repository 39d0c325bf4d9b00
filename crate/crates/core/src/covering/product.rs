//! Products of simplices and Σ's with their natural connection.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exactla::{rat, QVector};
use crate::graph::{DirEdge, EdgeSpec, GkmGraph};

/// A factor of a product graph: `Simplex(k)` is `Δ^k` (k + 1 vertices, any two
/// joined), `Sigma(m)` is `Σ^m` (two vertices joined by m edges).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Factor {
    Simplex(usize),
    Sigma(usize),
}

impl Factor {
    pub fn dim(self) -> usize {
        match self {
            Factor::Simplex(k) | Factor::Sigma(k) => k,
        }
    }

    pub fn vertex_count(self) -> usize {
        match self {
            Factor::Simplex(k) => k + 1,
            Factor::Sigma(_) => 2,
        }
    }

    pub fn facet_count(self) -> usize {
        match self {
            Factor::Simplex(k) => k + 1,
            Factor::Sigma(m) => m,
        }
    }

    pub fn is_valid(self) -> bool {
        match self {
            Factor::Simplex(k) => k >= 1,
            Factor::Sigma(m) => m >= 2,
        }
    }

    /// Sort key of the canonical factor order: simplices before Σ's, larger
    /// first within each kind.
    pub fn canonical_key(self) -> (bool, std::cmp::Reverse<usize>) {
        match self {
            Factor::Simplex(k) => (false, std::cmp::Reverse(k)),
            Factor::Sigma(m) => (true, std::cmp::Reverse(m)),
        }
    }
}

impl std::str::FromStr for Factor {
    type Err = ProductError;

    /// `D2`, `Δ2`, `S3` or `Σ3`.
    fn from_str(s: &str) -> Result<Self, ProductError> {
        let s = s.trim();
        let mut chars = s.chars();
        let head = chars
            .next()
            .ok_or_else(|| ProductError::Unparsable(s.into()))?;
        let size: usize = chars
            .as_str()
            .parse()
            .map_err(|_| ProductError::Unparsable(s.into()))?;
        let f = match head {
            'D' | 'd' | 'Δ' => Factor::Simplex(size),
            'S' | 's' | 'Σ' => Factor::Sigma(size),
            _ => return Err(ProductError::Unparsable(s.into())),
        };
        if f.is_valid() {
            Ok(f)
        } else {
            Err(ProductError::InvalidFactor(f))
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Simplex(k) => write!(f, "Δ{k}"),
            Factor::Sigma(m) => write!(f, "Σ{m}"),
        }
    }
}

pub fn sort_canonical(factors: &mut [Factor]) {
    factors.sort_by_key(|f| f.canonical_key());
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProductError {
    #[error("invalid factor {0}: simplices need size ≥ 1, Σ's size ≥ 2")]
    InvalidFactor(Factor),
    #[error("cannot read factor {0:?}; expected e.g. D2 or S3")]
    Unparsable(String),
    #[error("a product needs at least one factor")]
    Empty,
}

/// Which coordinate an undirected edge changes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    /// Coordinate of a simplex factor changes from `from` to `to` (`from < to`).
    Simplex { from: usize, to: usize },
    /// The `pair`-th (from 1) edge of a Σ factor, from coordinate 0 to 1.
    Sigma { pair: usize },
}

/// A facet of the product: facet `index` of factor `factor`. For `Δ^k` facet
/// `i` holds the vertices whose coordinate is not `i`; every facet of `Σ^m`
/// holds both vertices, and facet `i` omits the `i`-th edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Facet {
    pub factor: usize,
    pub index: usize,
}

/// The product graph `∏ σ_i` with the standard torus-graph labels and the
/// natural connection.
#[derive(Clone, Debug)]
pub struct ProductGraph {
    pub factors: Vec<Factor>,
    pub graph: GkmGraph,
    coords: Vec<Vec<usize>>,
    edge_factor: Vec<usize>,
    edge_kind: Vec<EdgeKind>,
    moves: HashMap<(usize, usize, usize), DirEdge>,
}

pub fn vertex_label(coords: &[usize]) -> String {
    coords
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(".")
}

pub fn build_product_graph(factors: &[Factor]) -> Result<ProductGraph, ProductError> {
    if factors.is_empty() {
        return Err(ProductError::Empty);
    }
    if let Some(&f) = factors.iter().find(|f| !f.is_valid()) {
        return Err(ProductError::InvalidFactor(f));
    }
    let n: usize = factors.iter().map(|f| f.dim()).sum();
    let offsets: Vec<usize> = factors
        .iter()
        .scan(0, |acc, f| {
            let o = *acc;
            *acc += f.dim();
            Some(o)
        })
        .collect();
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for f in factors {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..f.vertex_count()).map(move |c| {
                    let mut t = t.clone();
                    t.push(c);
                    t
                })
            })
            .collect();
    }
    let names: Vec<String> = tuples.iter().map(|t| vertex_label(t)).collect();
    let mut specs = Vec::new();
    let mut info: HashMap<String, (usize, EdgeKind)> = HashMap::new();
    for t in &tuples {
        for (j, f) in factors.iter().enumerate() {
            let mut w = t.clone();
            match *f {
                Factor::Simplex(k) => {
                    for to in t[j] + 1..=k {
                        w[j] = to;
                        let id = format!("{}:{}", vertex_label(t), vertex_label(&w));
                        // weight e*_to - e*_from in the factor block (e*_0 = 0)
                        let mut weight = vec![rat(0); n];
                        weight[offsets[j] + to - 1] = rat(1);
                        if t[j] > 0 {
                            weight[offsets[j] + t[j] - 1] = rat(-1);
                        }
                        info.insert(id.clone(), (j, EdgeKind::Simplex { from: t[j], to }));
                        specs.push(EdgeSpec::new(
                            id,
                            vertex_label(t),
                            vertex_label(&w),
                            QVector::new(weight),
                        ));
                    }
                }
                Factor::Sigma(m) => {
                    if t[j] == 1 {
                        continue;
                    }
                    w[j] = 1;
                    for pair in 1..=m {
                        let id = format!("{}:{}:{pair}", vertex_label(t), vertex_label(&w));
                        info.insert(id.clone(), (j, EdgeKind::Sigma { pair }));
                        specs.push(EdgeSpec::new(
                            id,
                            vertex_label(t),
                            vertex_label(&w),
                            QVector::unit(n, offsets[j] + pair - 1),
                        ));
                    }
                }
            }
        }
    }
    let graph = GkmGraph::new(n, names, specs).expect("product graphs are well formed");
    let mut coords = vec![Vec::new(); graph.vertex_count()];
    for t in tuples {
        let v = graph.vertex_by_name(&vertex_label(&t)).unwrap();
        coords[v] = t;
    }
    let (edge_factor, edge_kind): (Vec<usize>, Vec<EdgeKind>) = (0..graph.edge_count())
        .map(|i| info[graph.edge_id(i)])
        .unzip();
    let mut p = ProductGraph {
        factors: factors.to_vec(),
        graph,
        coords,
        edge_factor,
        edge_kind,
        moves: HashMap::new(),
    };
    for e in p.graph.dir_edges() {
        let key = (p.graph.source(e), p.edge_factor[e.edge()], p.move_of(e));
        p.moves.insert(key, e);
    }
    let g = &p.graph;
    let connection = g.with_connection(|e, f| {
        if e == f {
            return e.reverse();
        }
        let w = g.target(e);
        p.moves[&(w, p.edge_factor[f.edge()], p.move_of(f))]
    });
    p.graph = connection;
    Ok(p)
}

impl ProductGraph {
    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim()).sum()
    }

    pub fn coords(&self, v: usize) -> &[usize] {
        &self.coords[v]
    }

    pub fn factor_of(&self, e: DirEdge) -> usize {
        self.edge_factor[e.edge()]
    }

    pub fn kind_of(&self, e: DirEdge) -> EdgeKind {
        self.edge_kind[e.edge()]
    }

    /// Target coordinate (simplex factor) or pair index (Σ factor) of `e`.
    fn move_of(&self, e: DirEdge) -> usize {
        match self.edge_kind[e.edge()] {
            EdgeKind::Simplex { .. } => {
                self.coords[self.graph.target(e)][self.edge_factor[e.edge()]]
            }
            EdgeKind::Sigma { pair } => pair,
        }
    }

    /// The directed edge at `v` that changes factor `factor` by `step`
    /// (target coordinate for simplices, pair index for Σ's).
    pub fn edge_at(&self, v: usize, factor: usize, step: usize) -> Option<DirEdge> {
        self.moves.get(&(v, factor, step)).copied()
    }

    pub fn step_of(&self, e: DirEdge) -> usize {
        self.move_of(e)
    }

    pub fn facets(&self) -> Vec<Facet> {
        self.factors
            .iter()
            .enumerate()
            .flat_map(|(j, f)| {
                (0..f.facet_count()).map(move |i| Facet {
                    factor: j,
                    index: i,
                })
            })
            .collect()
    }

    /// Facet index into [`Self::facets`].
    pub fn facet_position(&self, facet: Facet) -> usize {
        self.factors[..facet.factor]
            .iter()
            .map(|f| f.facet_count())
            .sum::<usize>()
            + facet.index
    }

    pub fn contains(&self, facet: Facet, v: usize) -> bool {
        match self.factors[facet.factor] {
            Factor::Simplex(_) => self.coords[v][facet.factor] != facet.index,
            Factor::Sigma(_) => true,
        }
    }

    /// The facet containing the source of `e` but not `e`.
    pub fn facet_left_by(&self, e: DirEdge) -> Facet {
        let factor = self.edge_factor[e.edge()];
        let index = match self.edge_kind[e.edge()] {
            EdgeKind::Simplex { .. } => self.coords[self.graph.target(e)][factor],
            EdgeKind::Sigma { pair } => pair - 1,
        };
        Facet { factor, index }
    }

    /// The facets containing `v`, in facet order.
    pub fn facets_at(&self, v: usize) -> Vec<Facet> {
        self.facets()
            .into_iter()
            .filter(|&f| self.contains(f, v))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{check_connection_compat, infer_connection, validate_structure};

    #[test]
    fn small_products() {
        let i2 = build_product_graph(&[Factor::Simplex(1), Factor::Simplex(1)]).unwrap();
        assert_eq!(i2.graph.vertex_count(), 4);
        assert_eq!(i2.graph.edge_count(), 4);
        let s2 = build_product_graph(&[Factor::Sigma(2)]).unwrap();
        assert_eq!(s2.graph.vertex_count(), 2);
        assert_eq!(s2.graph.edge_count(), 2);
        let d2s2 = build_product_graph(&[Factor::Simplex(2), Factor::Sigma(2)]).unwrap();
        assert_eq!(d2s2.graph.vertex_count(), 6);
        assert_eq!(d2s2.graph.valence(), 4);
        assert!(build_product_graph(&[Factor::Sigma(1)]).is_err());
        assert!(build_product_graph(&[Factor::Simplex(0)]).is_err());
    }

    #[test]
    fn natural_connection_matches_labels() {
        for factors in [
            vec![Factor::Simplex(3)],
            vec![Factor::Simplex(2), Factor::Sigma(2)],
            vec![Factor::Simplex(1); 3],
            vec![Factor::Sigma(3), Factor::Simplex(1)],
        ] {
            let p = build_product_graph(&factors).unwrap();
            let g = &p.graph;
            assert!(validate_structure(g).passed());
            assert!(check_connection_compat(g).unwrap().verdict.passed());
            let inferred = infer_connection(&g.without_connection()).unwrap();
            for e in g.dir_edges() {
                for &f in g.star(g.source(e)) {
                    assert_eq!(g.nabla(e, f), inferred.nabla(e, f));
                }
            }
        }
    }

    #[test]
    fn facets_left_by_edges() {
        let p = build_product_graph(&[Factor::Simplex(2)]).unwrap();
        let g = &p.graph;
        let v0 = g.vertex_by_name("0").unwrap();
        for &e in g.star(v0) {
            let facet = p.facet_left_by(e);
            assert!(p.contains(facet, v0));
            assert!(!p.contains(facet, g.target(e)));
        }
        assert_eq!(p.facets_at(v0).len(), 2);
    }
}
