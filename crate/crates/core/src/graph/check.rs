//! Validators: structure, independence, connection compatibility,
//! integrality and effectiveness.

use itertools::Itertools;
use num_traits::{One, Signed};
use serde::Serialize;

use super::{DirEdge, GkmGraph, GraphDocument, GraphError, Verdict, Witness};
use crate::exactla::rational::{is_integer, serde_one};
use crate::exactla::{QMatrix, QVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Check {
    fn from_verdict(name: &str, v: Verdict) -> Self {
        match v {
            Verdict::Pass => Check {
                name: name.into(),
                passed: true,
                witness: None,
            },
            Verdict::Fail(w) => Check {
                name: name.into(),
                passed: false,
                witness: Some(w),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    /// Largest `k` such that every `k` weights at a vertex are independent;
    /// absent when the graph is not regular.
    pub gkm_order: Option<usize>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Structural checks on a document; unresolvable references become a
/// failing `references` check instead of an error.
pub fn validate_document(doc: &GraphDocument) -> ValidationReport {
    match doc.to_graph() {
        Ok(g) => {
            let mut report = validate_structure(&g);
            report
                .checks
                .insert(0, Check::from_verdict("references", Verdict::Pass));
            report
        }
        Err(e) => ValidationReport {
            checks: vec![Check::from_verdict(
                "references",
                Verdict::Fail(Witness::new(e.to_string())),
            )],
            gkm_order: None,
        },
    }
}

pub fn validate_structure(g: &GkmGraph) -> ValidationReport {
    let mut checks = Vec::new();
    let connected = if g.is_connected() {
        Verdict::Pass
    } else {
        let dist = g.distances(0);
        let far = dist.iter().position(Option::is_none).unwrap();
        Verdict::Fail(
            Witness::new("vertex unreachable from the first vertex")
                .at(g, 0)
                .at(g, far),
        )
    };
    checks.push(Check::from_verdict("connected", connected));

    let n = g.valence();
    let uniform = match (0..g.vertex_count()).find(|&v| g.star(v).len() != n) {
        None => Verdict::Pass,
        Some(v) => Verdict::Fail(
            Witness::new(format!(
                "valence {} differs from valence {n} of the first vertex",
                g.star(v).len()
            ))
            .at(g, v),
        ),
    };
    let regular = uniform.passed();
    checks.push(Check::from_verdict("uniform_valence", uniform));

    let pairing = match g
        .dir_edges()
        .find(|&e| e.reverse().reverse() != e || g.source(e.reverse()) != g.target(e))
    {
        None => Verdict::Pass,
        Some(e) => Verdict::Fail(Witness::new("reverse pairing broken").with_edges(g, [e])),
    };
    checks.push(Check::from_verdict("reverse_pairing", pairing));
    let symmetric = match g
        .dir_edges()
        .find(|&e| g.weight(e) != g.weight(e.reverse()))
    {
        None => Verdict::Pass,
        Some(e) => Verdict::Fail(Witness::new("weight differs on reverse").with_edges(g, [e])),
    };
    checks.push(Check::from_verdict("weight_symmetry", symmetric));

    if g.has_connection() {
        for (name, v) in connection_checks(g) {
            checks.push(Check::from_verdict(name, v));
        }
    }
    ValidationReport {
        checks,
        gkm_order: regular.then(|| gkm_order(g)),
    }
}

fn connection_checks(g: &GkmGraph) -> Vec<(&'static str, Verdict)> {
    let table = g.connection_table().expect("caller checked");
    let mut total = Verdict::Pass;
    let mut bijective = Verdict::Pass;
    'outer: for e in g.dir_edges() {
        let t = g.target(e);
        let row = &table[e.index()];
        for (&f, img) in g.star(g.source(e)).iter().zip(row) {
            match img {
                None => {
                    total =
                        Verdict::Fail(Witness::new("connection undefined").with_edges(g, [e, f]));
                    break 'outer;
                }
                Some(x) if g.source(*x) != t => {
                    total = Verdict::Fail(
                        Witness::new("image does not start at the target")
                            .with_edges(g, [e, f, *x]),
                    );
                    break 'outer;
                }
                _ => {}
            }
        }
        let mut images: Vec<DirEdge> = row.iter().flatten().copied().collect();
        images.sort();
        if let Some(w) = images.windows(2).find(|w| w[0] == w[1]) {
            if bijective.passed() {
                bijective = Verdict::Fail(
                    Witness::new("two edges share an image").with_edges(g, [e, w[0]]),
                );
            }
        }
    }
    if !total.passed() {
        let skipped = || Verdict::Fail(Witness::new("connection is not total"));
        return vec![
            ("connection_total", total),
            ("connection_bijective", bijective),
            ("connection_reverse_axiom", skipped()),
            ("connection_inverse_axiom", skipped()),
        ];
    }
    let reverse = match g.dir_edges().find(|&e| g.nabla(e, e) != e.reverse()) {
        None => Verdict::Pass,
        Some(e) => Verdict::Fail(
            Witness::new("connection along e does not send e to its reverse")
                .with_edges(g, [e, g.nabla(e, e)]),
        ),
    };
    let mut inverse = Verdict::Pass;
    'inv: for e in g.dir_edges() {
        for &f in g.star(g.source(e)) {
            let back = g.nabla(e.reverse(), g.nabla(e, f));
            if back != f {
                inverse = Verdict::Fail(
                    Witness::new("connection along the reverse edge is not inverse")
                        .with_edges(g, [e, f, back]),
                );
                break 'inv;
            }
        }
    }
    vec![
        ("connection_total", total),
        ("connection_bijective", bijective),
        ("connection_reverse_axiom", reverse),
        ("connection_inverse_axiom", inverse),
    ]
}

fn rank_of(vectors: &[&QVector]) -> usize {
    let rows: Vec<Vec<Rational>> = vectors.iter().map(|v| v.entries().to_vec()).collect();
    QMatrix::from_rows(&rows).rank()
}

/// Every `k` weights at every vertex are linearly independent.
pub fn check_gkm_k(g: &GkmGraph, k: usize) -> Result<Verdict, GraphError> {
    let valence = g.valence();
    if k < 2 || k > valence {
        return Err(GraphError::KOutOfRange { k, valence });
    }
    Ok(gkm_k_verdict(g, k))
}

fn gkm_k_verdict(g: &GkmGraph, k: usize) -> Verdict {
    for v in 0..g.vertex_count() {
        for subset in g.star(v).iter().copied().combinations(k) {
            let ws: Vec<&QVector> = subset.iter().map(|&e| g.weight(e)).collect();
            if rank_of(&ws) < k {
                return Verdict::Fail(
                    Witness::new(format!("{k} weights are dependent"))
                        .at(g, v)
                        .with_edges(g, subset),
                );
            }
        }
    }
    Verdict::Pass
}

/// Largest `k` for which the `k`-independence property holds (at least 1,
/// since weights are nonzero).
pub fn gkm_order(g: &GkmGraph) -> usize {
    let mut k = 1;
    while k < g.valence() && gkm_k_verdict(g, k + 1).passed() {
        k += 1;
    }
    k.min(g.valence())
}

/// `(p, q)` with `α(∇_e f) = p·α(f) + q·α(e)` on sign-canonical weights, if
/// the image weight lies in the span.
pub fn connection_coefficients(
    g: &GkmGraph,
    e: DirEdge,
    f: DirEdge,
) -> Option<(Rational, Rational)> {
    let image = g.nabla(e, f);
    let m = QMatrix::from_columns(g.rank(), &[g.weight(f).clone(), g.weight(e).clone()]);
    let x = m.solve_in_span(g.weight(image))?;
    Some((x[0].clone(), x[1].clone()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PqEntry {
    pub vertex: String,
    pub along: String,
    pub edge: String,
    pub image: String,
    #[serde(with = "serde_one")]
    pub p: Rational,
    #[serde(with = "serde_one")]
    pub q: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatReport {
    pub verdict: Verdict,
    /// One entry per vertex and ordered pair of distinct star edges, with
    /// `(p, q)` for the canonical representatives; flipping the sign of a
    /// representative flips the sign of the matching coefficients.
    pub table: Vec<PqEntry>,
}

pub fn check_connection_compat(g: &GkmGraph) -> Result<CompatReport, GraphError> {
    if !g.has_connection() {
        return Err(GraphError::MissingConnection);
    }
    if !g.connection_is_total() {
        return Ok(CompatReport {
            verdict: Verdict::Fail(Witness::new("connection is not total")),
            table: Vec::new(),
        });
    }
    let mut table = Vec::new();
    let mut verdict = Verdict::Pass;
    for v in 0..g.vertex_count() {
        for &e in g.star(v) {
            for &f in g.star(v) {
                if e == f {
                    continue;
                }
                match connection_coefficients(g, e, f) {
                    Some((p, q)) => table.push(PqEntry {
                        vertex: g.vertex_name(v).to_string(),
                        along: g.edge_name(e),
                        edge: g.edge_name(f),
                        image: g.edge_name(g.nabla(e, f)),
                        p,
                        q,
                    }),
                    None if verdict.passed() => {
                        verdict = Verdict::Fail(
                            Witness::new(format!(
                                "weight {} of the image is not in the span of {} and {}",
                                g.weight(g.nabla(e, f)),
                                g.weight(f),
                                g.weight(e)
                            ))
                            .at(g, v)
                            .with_edges(g, [e, f, g.nabla(e, f)]),
                        );
                    }
                    None => {}
                }
            }
        }
    }
    Ok(CompatReport { verdict, table })
}

/// Some choice of signs gives `p = ±1` and `q ∈ Z` for every pair. Sign
/// changes of the three lifts only change the signs of `p` and `q`, so this is
/// `|p| = 1` and `q` integral on the canonical table.
pub fn check_manifold_integrality(g: &GkmGraph) -> Result<Verdict, GraphError> {
    let report = check_connection_compat(g)?;
    if let Verdict::Fail(w) = report.verdict {
        return Ok(Verdict::Fail(w));
    }
    for entry in &report.table {
        if !entry.p.abs().is_one() || !is_integer(&entry.q) {
            return Ok(Verdict::Fail(Witness {
                detail: format!(
                    "p = {}, q = {} along {} for {}",
                    crate::exactla::rational::format_rational(&entry.p),
                    crate::exactla::rational::format_rational(&entry.q),
                    entry.along,
                    entry.edge
                ),
                vertices: vec![entry.vertex.clone()],
                edges: vec![entry.along.clone(), entry.edge.clone(), entry.image.clone()],
            }));
        }
    }
    Ok(Verdict::Pass)
}

/// The weights at every vertex span the whole weight space.
pub fn check_effective(g: &GkmGraph) -> Verdict {
    for v in 0..g.vertex_count() {
        let ws: Vec<&QVector> = g.star(v).iter().map(|&e| g.weight(e)).collect();
        let r = rank_of(&ws);
        if r < g.rank() {
            return Verdict::Fail(
                Witness::new(format!("weights span rank {r} < {}", g.rank())).at(g, v),
            );
        }
    }
    Verdict::Pass
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::infer_connection;
    use crate::graph::tests::triangle;
    use crate::graph::EdgeSpec;

    #[test]
    fn triangle_structure_and_compat() {
        let g = infer_connection(&triangle()).unwrap();
        let r = validate_structure(&g);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.gkm_order, Some(2));
        let c = check_connection_compat(&g).unwrap();
        assert!(c.verdict.passed());
        assert_eq!(c.table.len(), 6);
        assert!(check_manifold_integrality(&g).unwrap().passed());
        assert!(check_effective(&g).passed());
    }

    #[test]
    fn broken_reverse_axiom_is_reported() {
        let g = infer_connection(&triangle()).unwrap();
        let a = g.dir_edge_by_name("a").unwrap();
        let b = g.dir_edge_by_name("b").unwrap();
        let bad = g.with_connection(|e, f| {
            if e == a {
                // swap the two images along a
                let other = if f == a { b } else { a };
                g.nabla(a, other)
            } else {
                g.nabla(e, f)
            }
        });
        let r = validate_structure(&bad);
        let c = r.check("connection_reverse_axiom").unwrap();
        assert!(!c.passed);
        assert_eq!(c.witness.as_ref().unwrap().edges[0], "a");
    }

    #[test]
    fn disconnected_triangles() {
        let mut vs = Vec::new();
        let mut es = Vec::new();
        for t in ["p", "q"] {
            for i in 0..3 {
                vs.push(format!("{t}{i}"));
            }
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                es.push(EdgeSpec::new(
                    format!("{t}{i}{j}"),
                    format!("{t}{i}"),
                    format!("{t}{j}"),
                    QVector::from_i64s(&[1 + i, 1 + j]),
                ));
            }
        }
        let g = GkmGraph::new(2, vs, es).unwrap();
        let r = validate_structure(&g);
        assert!(!r.check("connected").unwrap().passed);
    }

    #[test]
    fn repeated_parallel_weight_fails_gkm2() {
        let g = GkmGraph::new(
            2,
            vec!["u".into(), "v".into()],
            vec![
                EdgeSpec::new("a", "u", "v", QVector::from_i64s(&[1, 0])),
                EdgeSpec::new("b", "u", "v", QVector::from_i64s(&[-1, 0])),
            ],
        )
        .unwrap();
        let v = check_gkm_k(&g, 2).unwrap();
        assert!(!v.passed());
        assert!(check_gkm_k(&g, 3).is_err());
    }

    #[test]
    fn embedded_weights_are_not_effective() {
        let g = triangle();
        let lifted: Vec<QVector> = g
            .weights()
            .iter()
            .map(|w| {
                let mut x = w.entries().to_vec();
                x.push(Rational::from_integer(0.into()));
                QVector::new(x)
            })
            .collect();
        let h = g.with_weights(3, lifted).unwrap();
        assert!(!check_effective(&h).passed());
    }
}
