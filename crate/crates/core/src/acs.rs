//! Invariant almost complex structures on labelled graphs and recognition of
//! generalized Bott towers.
//!
//! A lift with `p = 1` is a choice of sign `s_i` per undirected edge. For a
//! pair `(e, f)` at a vertex write `α(∇_e f) = P·α(f) + Q·α(e)` on canonical
//! weights; with lifted weights `σ(x)·α(x)` the relation has
//! `p = σ(∇_e f)·σ(f)·P`. So `p = 1` forces `|P| = 1` and fixes the product of
//! two edge signs, while `q = ±Q` is integral iff `Q` is. The sign problem is
//! a parity system over GF(2); propagation alone decides it, and a
//! contradiction is an odd cycle of constraints.

use std::collections::VecDeque;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cohomology::{betti_numbers, CohomologyError};
use crate::covering::{build_covering, deck_group, CoveringError, Factor, ProductGraph};
use crate::exactla::{QMatrix, QVector, Rational};
use crate::extension::{extend_to_gkm_n, ExtensionError};
use crate::faces::check_small_three_faces;
use crate::graph::{connection_coefficients, DirEdge, GkmGraph, Verdict, Witness};
use crate::models::{BottTower, BottTowerSpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AcsError {
    #[error("graph has no connection")]
    MissingConnection,
    #[error("connection is not compatible with the weights: {0}")]
    NotCompatible(Witness),
    #[error("not a product of simplices: {0}")]
    NotProductOfSimplices(String),
    #[error("expected {expected} directed labels, got {got}")]
    LabelCount { expected: usize, got: usize },
}

/// Signed weights `α̂` with `α̂(ē) = −α̂(e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcsLift {
    /// `+1` or `−1` per undirected edge, relative to the canonical weight on
    /// the forward direction.
    pub signs: Vec<i8>,
    labels: Vec<QVector>,
}

impl AcsLift {
    pub fn from_signs(g: &GkmGraph, signs: Vec<i8>) -> Self {
        let labels = g
            .dir_edges()
            .map(|e| {
                let s = signs[e.edge()] * if e.is_forward() { 1 } else { -1 };
                if s > 0 {
                    g.weight(e).clone()
                } else {
                    -g.weight(e)
                }
            })
            .collect();
        AcsLift { signs, labels }
    }

    pub fn lift(&self, e: DirEdge) -> &QVector {
        &self.labels[e.index()]
    }

    /// Labels indexed by [`DirEdge::index`].
    pub fn labels(&self) -> &[QVector] {
        &self.labels
    }
}

/// One relation `α̂(∇_e f) = p·α̂(f) + q·α̂(e)` under a lift.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftRelation {
    pub vertex: String,
    pub along: String,
    pub edge: String,
    pub image: String,
    #[serde(serialize_with = "crate::exactla::rational::serde_one::serialize")]
    pub p: Rational,
    #[serde(serialize_with = "crate::exactla::rational::serde_one::serialize")]
    pub q: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftSearch {
    Found {
        lift: AcsLift,
        table: Vec<LiftRelation>,
    },
    /// The witness names the relations whose sign constraints are
    /// unsatisfiable together.
    NoLift(Witness),
}

impl LiftSearch {
    pub fn lift(&self) -> Option<&AcsLift> {
        match self {
            LiftSearch::Found { lift, .. } => Some(lift),
            LiftSearch::NoLift(_) => None,
        }
    }
}

/// `s_a · s_b = parity`, coming from the pair `(along, edge)`.
#[derive(Clone, Copy)]
struct Constraint {
    a: usize,
    b: usize,
    parity: i8,
    along: DirEdge,
    edge: DirEdge,
}

fn direction(e: DirEdge) -> i8 {
    if e.is_forward() {
        1
    } else {
        -1
    }
}

fn relation_name(g: &GkmGraph, c: &Constraint) -> String {
    format!(
        "{} along {} to {}",
        g.edge_name(c.edge),
        g.edge_name(c.along),
        g.edge_name(g.nabla(c.along, c.edge))
    )
}

/// Breadth-first propagation from the lowest undirected edge of each
/// constraint component, with that edge fixed to `+1`.
pub fn find_acs_lift(g: &GkmGraph) -> Result<LiftSearch, AcsError> {
    if !g.has_connection() || !g.connection_is_total() {
        return Err(AcsError::MissingConnection);
    }
    let mut constraints = Vec::new();
    for v in 0..g.vertex_count() {
        for &e in g.star(v) {
            for &f in g.star(v) {
                if e == f {
                    continue;
                }
                let image = g.nabla(e, f);
                let Some((p, q)) = connection_coefficients(g, e, f) else {
                    return Err(AcsError::NotCompatible(
                        Witness::new("image weight is outside the span")
                            .at(g, v)
                            .with_edges(g, [e, f, image]),
                    ));
                };
                if !p.abs().is_one() {
                    return Ok(LiftSearch::NoLift(
                        Witness::new(format!("|p| = {p} for every choice of signs"))
                            .at(g, v)
                            .with_edges(g, [e, f, image]),
                    ));
                }
                if !q.is_integer() {
                    return Ok(LiftSearch::NoLift(
                        Witness::new(format!("q = {q} is not an integer"))
                            .at(g, v)
                            .with_edges(g, [e, f, image]),
                    ));
                }
                let sign_p: i8 = if p.is_positive() { 1 } else { -1 };
                constraints.push(Constraint {
                    a: f.edge(),
                    b: image.edge(),
                    parity: sign_p * direction(f) * direction(image),
                    along: e,
                    edge: f,
                });
            }
        }
    }
    let m = g.edge_count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (i, c) in constraints.iter().enumerate() {
        adj[c.a].push(i);
        if c.b != c.a {
            adj[c.b].push(i);
        }
    }
    let mut sign: Vec<i8> = vec![0; m];
    // constraint that assigned each edge, for recovering cycles
    let mut via: Vec<Option<usize>> = vec![None; m];
    for root in 0..m {
        if sign[root] != 0 {
            continue;
        }
        sign[root] = 1;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &ci in &adj[x] {
                let c = &constraints[ci];
                let y = if c.a == x { c.b } else { c.a };
                let want = sign[x] * c.parity;
                if sign[y] == 0 {
                    sign[y] = want;
                    via[y] = Some(ci);
                    queue.push_back(y);
                } else if sign[y] != want {
                    return Ok(LiftSearch::NoLift(odd_cycle(
                        g,
                        &constraints,
                        &via,
                        x,
                        y,
                        ci,
                    )));
                }
            }
        }
    }
    let lift = AcsLift::from_signs(g, sign);
    let table = relation_table(g, &lift).expect("propagated signs satisfy every relation");
    Ok(LiftSearch::Found { lift, table })
}

fn odd_cycle(
    g: &GkmGraph,
    constraints: &[Constraint],
    via: &[Option<usize>],
    x: usize,
    y: usize,
    closing: usize,
) -> Witness {
    let chain = |mut z: usize| {
        let mut out = vec![z];
        while let Some(ci) = via[z] {
            let c = &constraints[ci];
            z = if c.a == z { c.b } else { c.a };
            out.push(z);
        }
        out
    };
    let (px, py) = (chain(x), chain(y));
    let meet = *px.iter().find(|z| py.contains(z)).expect("same component");
    let mut used: Vec<usize> = vec![closing];
    for path in [&px, &py] {
        for &z in path.iter().take_while(|&&z| z != meet) {
            used.push(via[z].unwrap());
        }
    }
    let relations: Vec<String> = used
        .iter()
        .map(|&ci| relation_name(g, &constraints[ci]))
        .collect();
    let mut edges: Vec<usize> = used
        .iter()
        .flat_map(|&ci| [constraints[ci].a, constraints[ci].b])
        .collect();
    edges.sort();
    edges.dedup();
    Witness::new(format!(
        "sign constraints with odd product: {}",
        relations.join("; ")
    ))
    .with_edges(g, edges.into_iter().map(DirEdge::forward))
}

/// The relation table under `lift`, or the first relation with `p ≠ 1` or
/// `q ∉ Z`.
pub fn relation_table(g: &GkmGraph, lift: &AcsLift) -> Result<Vec<LiftRelation>, Witness> {
    let mut table = Vec::new();
    for v in 0..g.vertex_count() {
        for &e in g.star(v) {
            for &f in g.star(v) {
                if e == f {
                    continue;
                }
                let image = g.nabla(e, f);
                let m =
                    QMatrix::from_columns(g.rank(), &[lift.lift(f).clone(), lift.lift(e).clone()]);
                let bad =
                    |detail: String| Witness::new(detail).at(g, v).with_edges(g, [e, f, image]);
                let Some(x) = m.solve_in_span(lift.lift(image)) else {
                    return Err(bad("image weight is outside the span".into()));
                };
                let (p, q) = (x[0].clone(), x[1].clone());
                if !p.is_one() || !q.is_integer() {
                    return Err(bad(format!("(p, q) = ({p}, {q})")));
                }
                table.push(LiftRelation {
                    vertex: g.vertex_name(v).to_string(),
                    along: g.edge_name(e),
                    edge: g.edge_name(f),
                    image: g.edge_name(image),
                    p,
                    q,
                });
            }
        }
    }
    Ok(table)
}

/// Standard affine point of coordinate `c` of a `Δ^k`: `0` or `e_c`.
fn simplex_point(k: usize, c: usize) -> Vec<i64> {
    let mut x = vec![0; k];
    if c > 0 {
        x[c - 1] = 1;
    }
    x
}

/// Whether `det σ_v · det A_v` has one sign over all vertices, where `σ_v`
/// has the edge directions of the standard embedding of `∏ Δ^{n_i}` and
/// `A_v` the signed labels (indexed by [`DirEdge::index`]) in star order.
pub fn quasitoric_sign_check(p: &ProductGraph, labels: &[QVector]) -> Result<bool, AcsError> {
    if let Some(f) = p.factors.iter().find(|f| matches!(f, Factor::Sigma(_))) {
        return Err(AcsError::NotProductOfSimplices(format!("factor {f}")));
    }
    let g = &p.graph;
    if labels.len() != 2 * g.edge_count() {
        return Err(AcsError::LabelCount {
            expected: 2 * g.edge_count(),
            got: labels.len(),
        });
    }
    let n = p.dim();
    if labels.iter().any(|l| l.len() != n) {
        return Err(AcsError::NotProductOfSimplices(
            "labels are not of full rank".into(),
        ));
    }
    let point = |v: usize| -> Vec<i64> {
        p.factors
            .iter()
            .zip(p.coords(v))
            .flat_map(|(f, &c)| simplex_point(f.dim(), c))
            .collect()
    };
    let mut first: Option<bool> = None;
    for v in 0..g.vertex_count() {
        let here = point(v);
        let directions: Vec<QVector> = g
            .star(v)
            .iter()
            .map(|&e| {
                let there = point(g.target(e));
                QVector::from_i64s(
                    &there
                        .iter()
                        .zip(&here)
                        .map(|(a, b)| a - b)
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        let weights: Vec<QVector> = g
            .star(v)
            .iter()
            .map(|&e| labels[e.index()].clone())
            .collect();
        let d =
            QMatrix::from_columns(n, &directions).det() * QMatrix::from_columns(n, &weights).det();
        if d.is_zero() {
            return Ok(false);
        }
        let positive = d.is_positive();
        match first {
            None => first = Some(positive),
            Some(s) if s != positive => return Ok(false),
            Some(_) => {}
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "stage", content = "witness", rename_all = "snake_case")]
pub enum BottRefusal {
    SmallThreeFaces(Witness),
    NoLift(Witness),
    Covering(String),
    SigmaFactor(Witness),
    NontrivialDeck(Witness),
    Extension(String),
    Cohomology(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BottRecognition {
    /// Fiber dimensions of the tower, one per simplex factor.
    pub factors: Vec<usize>,
    pub betti: Vec<usize>,
    pub conclusion: String,
}

/// Small three-faces, an almost complex lift, a covering by simplices
/// only, a trivial deck group and an extension; on success the Betti
/// numbers of the graph are checked against the tower of that shape.
pub fn recognize_bott(g: &GkmGraph) -> Result<BottRecognition, BottRefusal> {
    if let Verdict::Fail(w) = check_small_three_faces(g) {
        return Err(BottRefusal::SmallThreeFaces(w));
    }
    match find_acs_lift(g) {
        Ok(LiftSearch::Found { .. }) => {}
        Ok(LiftSearch::NoLift(w)) => return Err(BottRefusal::NoLift(w)),
        Err(e) => return Err(BottRefusal::NoLift(Witness::new(e.to_string()))),
    }
    let c = build_covering(g, 0).map_err(|e| BottRefusal::Covering(e.to_string()))?;
    if let Some(f) = c
        .total
        .factors
        .iter()
        .find(|f| matches!(f, Factor::Sigma(_)))
    {
        return Err(BottRefusal::SigmaFactor(Witness::new(format!(
            "covering has a factor {f}"
        ))));
    }
    let deck = deck_group(&c).map_err(|e: CoveringError| BottRefusal::Covering(e.to_string()))?;
    if !deck.is_trivial() {
        return Err(BottRefusal::NontrivialDeck(Witness::new(format!(
            "deck group of order {}",
            deck.order()
        ))));
    }
    extend_to_gkm_n(g).map_err(|e: ExtensionError| BottRefusal::Extension(e.to_string()))?;
    let factors: Vec<usize> = c.total.factors.iter().map(|f| f.dim()).collect();
    let tower = BottTower::new(&BottTowerSpec::trivial(&factors))
        .map_err(|e| BottRefusal::Cohomology(e.to_string()))?;
    let betti = betti_numbers(g)
        .map_err(|e: CohomologyError| BottRefusal::Cohomology(e.to_string()))?
        .betti;
    if betti != tower.betti() {
        return Err(BottRefusal::Cohomology(format!(
            "Betti numbers {betti:?} differ from the tower's {:?}",
            tower.betti()
        )));
    }
    Ok(BottRecognition {
        factors,
        betti,
        conclusion: "rational cohomology of a generalised Bott manifold".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{
        hirzebruch_model, hirzebruch_pair, hypercube_involution_model, labelled_product,
        sigma_model, simplex_model, standard_product, weighted_projective_model,
    };

    fn found(g: &GkmGraph) -> (AcsLift, Vec<LiftRelation>) {
        match find_acs_lift(g).unwrap() {
            LiftSearch::Found { lift, table } => (lift, table),
            LiftSearch::NoLift(w) => panic!("no lift: {w}"),
        }
    }

    #[test]
    fn projective_spaces_are_almost_complex() {
        for n in 1..=3 {
            let g = simplex_model(n).unwrap();
            let (lift, table) = found(&g);
            assert_eq!(table.len(), g.vertex_count() * n * (n - 1));
            assert!(table.iter().all(|r| r.p.is_one() && r.q.is_integer()));
            for e in g.dir_edges() {
                assert_eq!(lift.lift(e.reverse()), &-lift.lift(e));
            }
        }
    }

    #[test]
    fn hirzebruch_surfaces_are_almost_complex() {
        for a in [0, 1, 2, -3] {
            let g = hirzebruch_model(a).unwrap();
            let (_, table) = found(&g);
            assert!(table.iter().all(|r| r.p.is_one() && r.q.is_integer()));
        }
    }

    #[test]
    fn even_spheres_are_not() {
        for m in [2, 3] {
            match find_acs_lift(&sigma_model(m).unwrap()).unwrap() {
                LiftSearch::NoLift(w) => {
                    assert!(w.detail.contains("odd product"), "{}", w.detail);
                    assert!(!w.edges.is_empty());
                }
                LiftSearch::Found { .. } => panic!("S^{} has a lift", 2 * m),
            }
        }
    }

    #[test]
    fn non_unit_p_has_no_lift() {
        // on the (1, 2) weighted projective plane some |p| is 2 or 1/2
        let g = weighted_projective_model(1, 2).unwrap();
        let LiftSearch::NoLift(w) = find_acs_lift(&g).unwrap() else {
            panic!("expected no lift")
        };
        assert!(w.detail.starts_with("|p|"), "{}", w.detail);
        assert!(find_acs_lift(&weighted_projective_model(1, 1).unwrap())
            .unwrap()
            .lift()
            .is_some());
    }

    #[test]
    fn witness_cycle_is_really_odd() {
        let g = sigma_model(2).unwrap();
        let LiftSearch::NoLift(w) = find_acs_lift(&g).unwrap() else {
            panic!("expected no lift")
        };
        // brute force: no sign vector passes the relation table
        for bits in 0..(1u32 << g.edge_count()) {
            let signs = (0..g.edge_count())
                .map(|i| if bits >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            assert!(relation_table(&g, &AcsLift::from_signs(&g, signs)).is_err());
        }
        assert!(w.detail.contains(';') || w.edges.len() == 1);
    }

    #[test]
    fn brute_force_agrees_on_small_models() {
        for g in [
            simplex_model(2).unwrap(),
            hirzebruch_model(1).unwrap(),
            standard_product(&[Factor::Simplex(1), Factor::Simplex(1)])
                .unwrap()
                .graph,
            sigma_model(2).unwrap(),
        ] {
            let any = (0..(1u32 << g.edge_count())).any(|bits| {
                let signs = (0..g.edge_count())
                    .map(|i| if bits >> i & 1 == 1 { -1 } else { 1 })
                    .collect();
                relation_table(&g, &AcsLift::from_signs(&g, signs)).is_ok()
            });
            assert_eq!(find_acs_lift(&g).unwrap().lift().is_some(), any);
        }
    }

    #[test]
    fn sign_check_on_products() {
        for factors in [
            vec![Factor::Simplex(1), Factor::Simplex(1)],
            vec![Factor::Simplex(2)],
            vec![Factor::Simplex(2), Factor::Simplex(1)],
        ] {
            let p = standard_product(&factors).unwrap();
            let (lift, _) = found(&p.graph);
            assert!(quasitoric_sign_check(&p, lift.labels()).unwrap());
            // a uniform change of basis keeps the answer
            let n = p.dim();
            let mut u = QMatrix::identity(n);
            u[(0, n - 1)] = crate::exactla::rat(3);
            u[(n - 1, n - 1)] = crate::exactla::rat(-1);
            let moved: Vec<QVector> = lift.labels().iter().map(|l| u.mul_vec(l)).collect();
            assert!(quasitoric_sign_check(&p, &moved).unwrap());
            let negated: Vec<QVector> = lift.labels().iter().map(|l| -l).collect();
            assert!(quasitoric_sign_check(&p, &negated).unwrap());
        }
    }

    #[test]
    fn mis_gauged_square_fails_the_sign_check() {
        let p = labelled_product(&hirzebruch_pair(0)).unwrap();
        let (lift, _) = found(&p.graph);
        let mut labels = lift.labels().to_vec();
        // flip one column of one A_v only
        let e = p.graph.star(0)[0];
        labels[e.index()] = -&labels[e.index()];
        assert!(!quasitoric_sign_check(&p, &labels).unwrap());
        assert!(relation_table(
            &p.graph,
            &AcsLift {
                signs: vec![],
                labels
            }
        )
        .is_err());
    }

    #[test]
    fn sigma_factors_are_not_quasitoric_input() {
        let p = standard_product(&[Factor::Sigma(2)]).unwrap();
        let labels = vec![QVector::zeros(2); 4];
        assert!(matches!(
            quasitoric_sign_check(&p, &labels),
            Err(AcsError::NotProductOfSimplices(_))
        ));
    }

    #[test]
    fn bott_recognition() {
        let g = standard_product(&[Factor::Simplex(2), Factor::Simplex(1)])
            .unwrap()
            .graph;
        let r = recognize_bott(&g).unwrap();
        assert_eq!(r.factors, vec![2, 1]);
        assert_eq!(r.betti, vec![1, 2, 2, 1]);
        let r = recognize_bott(&hirzebruch_model(2).unwrap()).unwrap();
        assert_eq!(r.factors, vec![1, 1]);
        assert!(matches!(
            recognize_bott(&sigma_model(2).unwrap()),
            Err(BottRefusal::NoLift(_))
        ));
        let q = hypercube_involution_model(5).unwrap().quotient.graph;
        let refusal = recognize_bott(&q).unwrap_err();
        assert!(
            matches!(
                refusal,
                BottRefusal::NoLift(_) | BottRefusal::NontrivialDeck(_)
            ),
            "{refusal:?}"
        );
    }
}
