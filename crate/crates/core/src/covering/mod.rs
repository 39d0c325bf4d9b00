//! Coverings by products of simplices and Σ's, deck groups, quotients and
//! label pullback.
//!
//! Every map here is built by one routine, [`extend_star_map`]: fix where one
//! vertex goes and how its star is matched, then transport that matching
//! along edges with the connections. A graph map compatible with both
//! connections is determined by this data, so disagreement on any edge is a
//! witness that no such map exists.

pub mod product;

use std::collections::{BTreeSet, VecDeque};

use itertools::Itertools;
use serde::Serialize;

pub use product::{
    build_product_graph, sort_canonical, vertex_label, EdgeKind, Facet, Factor, ProductError,
    ProductGraph,
};

use crate::faces::{
    check_connection_identities, maximal_simplex_partition, FaceError, SimplexPartition,
};
use crate::graph::{DirEdge, EdgeSpec, GkmGraph, GraphError, Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoveringError {
    #[error("graph has no connection")]
    MissingConnection,
    #[error("base graph violates the covering hypotheses: {0}")]
    Hypothesis(Witness),
    #[error(transparent)]
    Face(#[from] FaceError),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("covering is not well defined: {0}")]
    WellDefinednessFailure(Witness),
    #[error("not a covering: {0}")]
    NotCovering(Witness),
    #[error("deck transformations do not form a Galois group: {0}")]
    NotGalois(Witness),
    #[error("action is not free: {0}")]
    NotFree(Witness),
    #[error("action does not preserve the graph data: {0}")]
    NotCompatible(Witness),
}

/// A map of graphs: images of vertices and of directed edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphMap {
    pub vertices: Vec<usize>,
    pub edges: Vec<DirEdge>,
}

impl GraphMap {
    pub fn identity(g: &GkmGraph) -> Self {
        GraphMap {
            vertices: (0..g.vertex_count()).collect(),
            edges: g.dir_edges().collect(),
        }
    }

    pub fn vertex(&self, v: usize) -> usize {
        self.vertices[v]
    }

    pub fn edge(&self, e: DirEdge) -> DirEdge {
        self.edges[e.index()]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GraphMap) -> GraphMap {
        GraphMap {
            vertices: other.vertices.iter().map(|&v| self.vertices[v]).collect(),
            edges: other.edges.iter().map(|&e| self.edges[e.index()]).collect(),
        }
    }

    pub fn inverse(&self) -> GraphMap {
        let mut vertices = vec![0; self.vertices.len()];
        for (v, &w) in self.vertices.iter().enumerate() {
            vertices[w] = v;
        }
        let mut edges = vec![DirEdge::from_index(0); self.edges.len()];
        for (i, &e) in self.edges.iter().enumerate() {
            edges[e.index()] = DirEdge::from_index(i);
        }
        GraphMap { vertices, edges }
    }

    pub fn is_identity(&self) -> bool {
        self.vertices.iter().enumerate().all(|(i, &v)| i == v)
            && self.edges.iter().enumerate().all(|(i, e)| e.index() == i)
    }
}

/// The unique map `source → target` sending `x0` to `y`, matching the star of
/// `x0` to `star_images` (in star order), and intertwining the connections:
/// `m(∇_e f) = ∇'_{m(e)} m(f)`. Stars are matched breadth-first from `x0`;
/// every edge not used to reach a new vertex is checked against the match
/// already made there.
pub fn extend_star_map(
    source: &GkmGraph,
    target: &GkmGraph,
    x0: usize,
    y: usize,
    star_images: &[DirEdge],
) -> Result<GraphMap, Witness> {
    let n = source.star(x0).len();
    if star_images.len() != n || target.star(y).len() != n {
        return Err(Witness::new("star sizes differ").at(source, x0));
    }
    if star_images.iter().any(|&e| target.source(e) != y)
        || star_images.iter().duplicates().next().is_some()
    {
        return Err(
            Witness::new("initial star map is not a bijection onto the star").at(source, x0),
        );
    }
    let mut vmap: Vec<Option<usize>> = vec![None; source.vertex_count()];
    let mut stars: Vec<Option<Vec<DirEdge>>> = vec![None; source.vertex_count()];
    vmap[x0] = Some(y);
    stars[x0] = Some(star_images.to_vec());
    let mut queue = VecDeque::from([x0]);
    while let Some(v) = queue.pop_front() {
        let m = stars[v].clone().unwrap();
        let star = source.star(v);
        for (i, &e) in star.iter().enumerate() {
            let e_img = m[i];
            let w = source.target(e);
            let w_img = target.target(e_img);
            if source.star(w).len() != target.star(w_img).len() {
                return Err(Witness::new("valences differ")
                    .at(source, w)
                    .with_edges(source, [e]));
            }
            let mut img = vec![None; source.star(w).len()];
            for (j, &f) in star.iter().enumerate() {
                let p = source.star_position(source.nabla(e, f));
                img[p] = Some(target.nabla(e_img, m[j]));
            }
            let img: Vec<DirEdge> = img
                .into_iter()
                .map(|x| x.expect("∇ is a bijection"))
                .collect();
            match vmap[w] {
                None => {
                    vmap[w] = Some(w_img);
                    stars[w] = Some(img);
                    queue.push_back(w);
                }
                Some(prev) => {
                    if prev != w_img || stars[w].as_ref() != Some(&img) {
                        return Err(Witness::new(
                            "two edge paths assign different images to a vertex star",
                        )
                        .at(source, w)
                        .with_edges(source, [e]));
                    }
                }
            }
        }
    }
    if let Some(v) = vmap.iter().position(Option::is_none) {
        return Err(Witness::new("source graph is not connected").at(source, v));
    }
    let edges = source
        .dir_edges()
        .map(|e| stars[source.source(e)].as_ref().unwrap()[source.star_position(e)])
        .collect();
    Ok(GraphMap {
        vertices: vmap.into_iter().map(Option::unwrap).collect(),
        edges,
    })
}

/// Covering `π: Γ̃ → Γ` of a graph by a product graph, compatible with the
/// connections.
#[derive(Clone, Debug)]
pub struct CoveringMap {
    pub total: ProductGraph,
    pub base: GkmGraph,
    pub map: GraphMap,
    /// `(x0, x)`: base points of the total space and the base.
    pub base_point: (usize, usize),
    /// Blocks at `x`, block `i` giving factor `i`.
    pub partition: SimplexPartition,
}

fn canonical_blocks(mut p: SimplexPartition) -> SimplexPartition {
    p.blocks
        .sort_by_key(|b| (b.kind.canonical_key(), b.edges.iter().min().copied()));
    p
}

/// The covering of `g` by the product of its maximal simplices at `x`,
/// matching star edges block to block in index order.
pub fn build_covering(g: &GkmGraph, x: usize) -> Result<CoveringMap, CoveringError> {
    if !g.has_connection() {
        return Err(CoveringError::MissingConnection);
    }
    // Only the hypotheses the construction uses are enforced here: blocks
    // at every vertex and the connection identities. Anything else that
    // breaks the covering shows up as a well-definedness witness.
    if let Verdict::Fail(w) = check_connection_identities(g) {
        return Err(CoveringError::Hypothesis(w));
    }
    let partition = canonical_blocks(maximal_simplex_partition(g, x)?);
    let factors: Vec<Factor> = partition.blocks.iter().map(|b| b.kind).collect();
    let total = build_product_graph(&factors)?;
    let tg = &total.graph;
    let x0 = tg
        .vertex_by_name(&vertex_label(&vec![0; factors.len()]))
        .expect("origin of the product");
    let mut images = vec![DirEdge::from_index(0); tg.star(x0).len()];
    for (j, block) in partition.blocks.iter().enumerate() {
        for (step, &e) in (1..).zip(&block.edges) {
            let t = total.edge_at(x0, j, step).expect("product star");
            images[tg.star_position(t)] = e;
        }
    }
    let map =
        extend_star_map(tg, g, x0, x, &images).map_err(CoveringError::WellDefinednessFailure)?;
    let c = CoveringMap {
        total,
        base: g.clone(),
        map,
        base_point: (x0, x),
        partition,
    };
    if let Verdict::Fail(w) = c.verify_compatibility() {
        return Err(CoveringError::NotCovering(w));
    }
    let sizes: BTreeSet<usize> = (0..g.vertex_count()).map(|z| c.fiber(z).len()).collect();
    if sizes.len() != 1 || sizes.contains(&0) {
        return Err(CoveringError::NotCovering(Witness::new(format!(
            "fiber sizes {sizes:?} are not constant"
        ))));
    }
    Ok(c)
}

impl CoveringMap {
    pub fn fiber(&self, z: usize) -> Vec<usize> {
        (0..self.total.graph.vertex_count())
            .filter(|&v| self.map.vertex(v) == z)
            .collect()
    }

    pub fn sheets(&self) -> usize {
        self.total.graph.vertex_count() / self.base.vertex_count()
    }

    /// `∇_{π(e)} π(f) = π(∇̃_e f)` for every edge `e` and every `f` at its
    /// source; also checks that `π` maps stars bijectively.
    pub fn verify_compatibility(&self) -> Verdict {
        let t = &self.total.graph;
        let g = &self.base;
        for v in 0..t.vertex_count() {
            let images: BTreeSet<DirEdge> = t.star(v).iter().map(|&e| self.map.edge(e)).collect();
            let expected: BTreeSet<DirEdge> = g.star(self.map.vertex(v)).iter().copied().collect();
            if images != expected {
                return Verdict::Fail(Witness::new("star is not mapped bijectively").at(t, v));
            }
        }
        for e in t.dir_edges() {
            for &f in t.star(t.source(e)) {
                let up = self.map.edge(t.nabla(e, f));
                let down = g.nabla(self.map.edge(e), self.map.edge(f));
                if up != down {
                    return Verdict::Fail(
                        Witness::new("projection does not intertwine the connections")
                            .with_edges(t, [e, f]),
                    );
                }
            }
        }
        Verdict::Pass
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoveringReport {
    pub vertex_map: std::collections::BTreeMap<String, String>,
    pub edge_map: std::collections::BTreeMap<String, String>,
    pub factors: Vec<Factor>,
    pub deck_order: usize,
}

impl CoveringReport {
    pub fn new(c: &CoveringMap, deck_order: usize) -> Self {
        let t = &c.total.graph;
        CoveringReport {
            vertex_map: (0..t.vertex_count())
                .map(|v| {
                    (
                        t.vertex_name(v).to_string(),
                        c.base.vertex_name(c.map.vertex(v)).to_string(),
                    )
                })
                .collect(),
            edge_map: t
                .dir_edges()
                .map(|e| (t.edge_name(e), c.base.edge_name(c.map.edge(e))))
                .collect(),
            factors: c.total.factors.clone(),
            deck_order,
        }
    }
}

/// The total space with the base labels pulled back along the projection.
pub fn pull_back_labels(c: &CoveringMap) -> GkmGraph {
    let t = &c.total.graph;
    let weights = (0..t.edge_count())
        .map(|i| c.base.weight(c.map.edge(DirEdge::forward(i))).clone())
        .collect();
    t.with_weights(c.base.rank(), weights)
        .expect("base weights are nonzero of the base rank")
}

/// Deck transformations with their multiplication table; element 0 is the
/// identity and element `i` sends the base point to the `i`-th point of its
/// fiber.
#[derive(Clone, Debug)]
pub struct DeckGroup {
    pub elements: Vec<GraphMap>,
    /// `table[i][j]` is the index of `elements[i] ∘ elements[j]`.
    pub table: Vec<Vec<usize>>,
}

impl DeckGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.table[i]
            .iter()
            .position(|&k| k == 0)
            .expect("group inverse")
    }
}

pub fn deck_group(c: &CoveringMap) -> Result<DeckGroup, CoveringError> {
    let t = &c.total.graph;
    let (x0, _) = c.base_point;
    let z0 = c.map.vertex(x0);
    let mut elements = Vec::new();
    for y in c.fiber(z0) {
        let mut images = Vec::with_capacity(t.star(x0).len());
        for &e in t.star(x0) {
            let over = t
                .star(y)
                .iter()
                .copied()
                .filter(|&h| c.map.edge(h) == c.map.edge(e))
                .collect_vec();
            match over.as_slice() {
                [h] => images.push(*h),
                _ => {
                    return Err(CoveringError::NotGalois(
                        Witness::new("fiber point star does not lift uniquely")
                            .at(t, y)
                            .with_edges(t, [e]),
                    ))
                }
            }
        }
        let psi = extend_star_map(t, t, x0, y, &images).map_err(CoveringError::NotGalois)?;
        let bijective = psi.vertices.iter().collect::<BTreeSet<_>>().len() == t.vertex_count();
        if !bijective {
            return Err(CoveringError::NotGalois(
                Witness::new("lift is not bijective").at(t, y),
            ));
        }
        if (0..t.vertex_count()).any(|v| c.map.vertex(psi.vertex(v)) != c.map.vertex(v))
            || t.dir_edges()
                .any(|e| c.map.edge(psi.edge(e)) != c.map.edge(e))
        {
            return Err(CoveringError::NotGalois(
                Witness::new("lift does not commute with the projection").at(t, y),
            ));
        }
        elements.push(psi);
    }
    let order = elements.len();
    let mut table = vec![vec![0; order]; order];
    for i in 0..order {
        for j in 0..order {
            let prod = elements[i].compose(&elements[j]);
            let k = elements.iter().position(|g| *g == prod).ok_or_else(|| {
                CoveringError::NotGalois(Witness::new("not closed under composition"))
            })?;
            table[i][j] = k;
        }
    }
    for z in 0..c.base.vertex_count() {
        let fiber = c.fiber(z);
        let y0 = fiber[0];
        let orbit: BTreeSet<usize> = elements.iter().map(|g| g.vertex(y0)).collect();
        if orbit.len() != order || orbit != fiber.iter().copied().collect() {
            return Err(CoveringError::NotGalois(
                Witness::new("deck group is not simply transitive on a fiber").at(&c.base, z),
            ));
        }
    }
    Ok(DeckGroup { elements, table })
}

/// Quotient `g / G` with the projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub graph: GkmGraph,
    pub projection: GraphMap,
}

/// `psi` is a bijection preserving incidence, reversal, weights and connection.
pub fn check_automorphism(g: &GkmGraph, psi: &GraphMap) -> Result<(), CoveringError> {
    let bad = |msg: &str| Err(CoveringError::NotCompatible(Witness::new(msg)));
    if psi.vertices.len() != g.vertex_count() || psi.edges.len() != 2 * g.edge_count() {
        return bad("map has the wrong size");
    }
    if psi.vertices.iter().collect::<BTreeSet<_>>().len() != g.vertex_count() {
        return bad("vertex map is not a bijection");
    }
    for e in g.dir_edges() {
        let img = psi.edge(e);
        if g.source(img) != psi.vertex(g.source(e)) || psi.edge(e.reverse()) != img.reverse() {
            return Err(CoveringError::NotCompatible(
                Witness::new("edge map does not match the vertex map").with_edges(g, [e]),
            ));
        }
        if g.weight(img) != g.weight(e) {
            return Err(CoveringError::NotCompatible(
                Witness::new("weights are not preserved").with_edges(g, [e, img]),
            ));
        }
        for &f in g.star(g.source(e)) {
            if psi.edge(g.nabla(e, f)) != g.nabla(img, psi.edge(f)) {
                return Err(CoveringError::NotCompatible(
                    Witness::new("connection is not preserved").with_edges(g, [e, f]),
                ));
            }
        }
    }
    Ok(())
}

/// Quotient by a group of automorphisms preserving weights and connection
/// and acting freely on vertices. Orbits are named after their smallest
/// vertex and edge; the connection is induced through lifts at those
/// vertices.
pub fn quotient_graph(g: &GkmGraph, group: &[GraphMap]) -> Result<Quotient, CoveringError> {
    if !g.has_connection() {
        return Err(CoveringError::MissingConnection);
    }
    for psi in group {
        check_automorphism(g, psi)?;
        if !psi.is_identity() {
            if let Some(v) = (0..g.vertex_count()).find(|&v| psi.vertex(v) == v) {
                return Err(CoveringError::NotFree(
                    Witness::new("non-identity element fixes a vertex").at(g, v),
                ));
            }
        }
        if let Some(e) = g.dir_edges().find(|&e| psi.edge(e) == e.reverse()) {
            return Err(CoveringError::NotFree(
                Witness::new("an edge is mapped to its own reverse").with_edges(g, [e]),
            ));
        }
    }
    for a in group {
        for b in group {
            if !group.contains(&a.compose(b)) {
                return Err(CoveringError::NotCompatible(Witness::new(
                    "maps do not form a group",
                )));
            }
        }
    }
    let vrep: Vec<usize> = (0..g.vertex_count())
        .map(|v| group.iter().map(|p| p.vertex(v)).min().unwrap_or(v))
        .collect();
    // undirected edge representing the orbit pair {O(e), O(ē)}, and whether
    // e lies in the orbit of its forward direction
    let mut erep: Vec<(usize, bool)> = Vec::with_capacity(2 * g.edge_count());
    for e in g.dir_edges() {
        let orbit: Vec<DirEdge> = group.iter().map(|p| p.edge(e)).collect();
        let rev_orbit: Vec<DirEdge> = group.iter().map(|p| p.edge(e.reverse())).collect();
        let u = orbit
            .iter()
            .chain(&rev_orbit)
            .map(|d| d.edge())
            .min()
            .unwrap_or(e.edge());
        erep.push((
            u,
            orbit.contains(&DirEdge::forward(u)) || (group.is_empty() && e.is_forward()),
        ));
    }
    let names: Vec<String> = vrep
        .iter()
        .copied()
        .sorted()
        .dedup()
        .map(|v| g.vertex_name(v).to_string())
        .collect();
    let mut specs = Vec::new();
    for u in erep.iter().map(|r| r.0).sorted().dedup() {
        let e = DirEdge::forward(u);
        let (s, t) = (vrep[g.source(e)], vrep[g.target(e)]);
        if s == t {
            return Err(CoveringError::NotFree(
                Witness::new("an edge joins two vertices of one orbit").with_edges(g, [e]),
            ));
        }
        specs.push(EdgeSpec::new(
            g.edge_id(u),
            g.vertex_name(s),
            g.vertex_name(t),
            g.weight(e).clone(),
        ));
    }
    let q = GkmGraph::new(g.rank(), names, specs)?;
    let vertices: Vec<usize> = (0..g.vertex_count())
        .map(|v| q.vertex_by_name(g.vertex_name(vrep[v])).unwrap())
        .collect();
    let edges: Vec<DirEdge> = g
        .dir_edges()
        .map(|e| {
            let (u, forward) = erep[e.index()];
            let qe = q.dir_edge_by_name(g.edge_id(u)).unwrap();
            if forward {
                qe
            } else {
                qe.reverse()
            }
        })
        .collect();
    let projection = GraphMap { vertices, edges };
    // lifts at orbit representatives
    let mut lift = vec![None; 2 * q.edge_count()];
    for v in vrep.iter().copied().sorted().dedup() {
        for &e in g.star(v) {
            let qe = projection.edge(e);
            if lift[qe.index()].replace(e).is_some() {
                return Err(CoveringError::NotFree(
                    Witness::new("two edges at a vertex lie in one orbit").at(g, v),
                ));
            }
        }
    }
    let lift: Vec<DirEdge> = lift
        .into_iter()
        .map(|x| x.expect("every quotient edge lifts to its source representative"))
        .collect();
    let graph =
        q.with_connection(|e, f| projection.edge(g.nabla(lift[e.index()], lift[f.index()])));
    Ok(Quotient { graph, projection })
}

/// A connection-preserving isomorphism `a → b`, if one exists.
pub fn find_isomorphism(a: &GkmGraph, b: &GkmGraph) -> Option<GraphMap> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return None;
    }
    if a.vertex_count() == 0 {
        return Some(GraphMap {
            vertices: vec![],
            edges: vec![],
        });
    }
    for y in 0..b.vertex_count() {
        for perm in b.star(y).iter().copied().permutations(b.star(y).len()) {
            if let Ok(m) = extend_star_map(a, b, 0, y, &perm) {
                if m.vertices.iter().collect::<BTreeSet<_>>().len() == b.vertex_count() {
                    return Some(m);
                }
            }
        }
    }
    None
}

/// Vertex count of a product of factors.
pub fn product_vertex_count(factors: &[Factor]) -> usize {
    factors.iter().map(|f| f.vertex_count()).product()
}

/// All multisets of valid factors with total dimension `n`, in canonical
/// order.
pub fn factor_multisets(n: usize) -> Vec<Vec<Factor>> {
    fn go(left: usize, max: Factor, acc: &mut Vec<Factor>, out: &mut Vec<Vec<Factor>>) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        // candidates no larger than `max` in canonical order keep multisets unique
        let mut candidates: Vec<Factor> = (1..=left)
            .map(Factor::Simplex)
            .chain((2..=left).map(Factor::Sigma))
            .filter(|f| f.canonical_key() >= max.canonical_key())
            .collect();
        sort_canonical(&mut candidates);
        for f in candidates {
            acc.push(f);
            go(left - f.dim(), f, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, Factor::Simplex(usize::MAX), &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_covers_itself_trivially() {
        for factors in [
            vec![Factor::Simplex(1); 3],
            vec![Factor::Simplex(2), Factor::Sigma(2)],
            vec![Factor::Simplex(2)],
        ] {
            let p = build_product_graph(&factors).unwrap();
            let c = build_covering(&p.graph, 0).unwrap();
            assert_eq!(c.sheets(), 1);
            assert!(c.verify_compatibility().passed());
            let d = deck_group(&c).unwrap();
            assert!(d.is_trivial());
            let pulled = pull_back_labels(&c);
            for e in pulled.dir_edges() {
                assert_eq!(pulled.weight(e), p.graph.weight(c.map.edge(e)));
            }
        }
    }

    #[test]
    fn factor_multisets_are_complete() {
        let counts: Vec<usize> = (1..=5).map(|n| factor_multisets(n).len()).collect();
        // partitions of n with parts ≥ 2 coloured twice, parts of size 1 once
        assert_eq!(counts, vec![1, 3, 5, 10, 16]);
        assert!(!factor_multisets(3).contains(&vec![Factor::Sigma(2), Factor::Simplex(1)]));
        assert!(factor_multisets(3).contains(&vec![Factor::Simplex(1), Factor::Sigma(2)]));
    }

    #[test]
    fn free_action_is_required() {
        let p = build_product_graph(&[Factor::Sigma(2)]).unwrap();
        let g = &p.graph;
        // swap the two pairs, fixing both vertices
        let swap = GraphMap {
            vertices: vec![0, 1],
            edges: g
                .dir_edges()
                .map(|e| {
                    let other = 1 - e.edge();
                    if e.is_forward() {
                        DirEdge::forward(other)
                    } else {
                        DirEdge::backward(other)
                    }
                })
                .collect(),
        };
        let id = GraphMap::identity(g);
        let err = quotient_graph(g, &[id, swap]).unwrap_err();
        assert!(matches!(
            err,
            CoveringError::NotCompatible(_) | CoveringError::NotFree(_)
        ));
    }

    #[test]
    fn hypercube_quotients_are_doubly_covered() {
        for n in 3..=5 {
            let m = crate::models::hypercube_involution_model(n).unwrap();
            let q = &m.quotient.graph;
            let c = build_covering(q, 0).unwrap();
            assert_eq!(c.total.factors, vec![Factor::Simplex(1); n]);
            assert_eq!(c.sheets(), 2);
            let d = deck_group(&c).unwrap();
            assert_eq!(d.order(), 2);
            assert_eq!(d.table, vec![vec![0, 1], vec![1, 0]]);
            assert!(find_isomorphism(&c.total.graph, &m.projected).is_some());
            let pulled = pull_back_labels(&c);
            for psi in &d.elements {
                for e in pulled.dir_edges() {
                    assert_eq!(pulled.weight(psi.edge(e)), pulled.weight(e));
                }
            }
        }
    }

    #[test]
    fn trivial_quotient_is_a_copy() {
        let p = build_product_graph(&[Factor::Simplex(2), Factor::Simplex(1)]).unwrap();
        let q = quotient_graph(&p.graph, &[GraphMap::identity(&p.graph)]).unwrap();
        assert_eq!(q.graph.vertex_count(), 6);
        assert!(find_isomorphism(&p.graph, &q.graph).is_some());
    }
}
