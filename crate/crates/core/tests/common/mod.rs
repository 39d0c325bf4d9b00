//! Fixtures and brute-force oracles shared by the integration targets.
#![allow(dead_code)]

use gkm_core::covering::Factor;
use gkm_core::exactla::{QMatrix, QVector};
use gkm_core::faces::Face;
use gkm_core::graph::{check_gkm_k, DirEdge, GkmGraph, Verdict};
use gkm_core::models::{
    hirzebruch_model, hypercube_involution_model, sigma_model, simplex_model, standard_product,
    weighted_projective_model,
};

pub enum Shape {
    Product(Vec<Factor>),
    Quotient,
    /// Graphs of the right local shape that are not claimed to be either.
    Other,
}

pub struct Fixture {
    pub name: String,
    pub graph: GkmGraph,
    pub shape: Shape,
}

fn fixture(name: impl Into<String>, graph: GkmGraph, shape: Shape) -> Fixture {
    Fixture {
        name: name.into(),
        graph,
        shape,
    }
}

pub fn product_fixture(factors: &[Factor]) -> Fixture {
    let name = factors
        .iter()
        .map(|f| f.to_string())
        .collect::<Vec<_>>()
        .join("×");
    fixture(
        name,
        standard_product(factors).unwrap().graph,
        Shape::Product(factors.to_vec()),
    )
}

/// The product and quotient fixtures used across suites.
pub fn fixtures() -> Vec<Fixture> {
    use Factor::{Sigma, Simplex};
    let mut out = Vec::new();
    for n in 1..=3 {
        out.push(fixture(
            format!("CP{n}"),
            simplex_model(n).unwrap(),
            Shape::Product(vec![Simplex(n)]),
        ));
    }
    for m in 2..=3 {
        out.push(fixture(
            format!("S{}", 2 * m),
            sigma_model(m).unwrap(),
            Shape::Product(vec![Sigma(m)]),
        ));
    }
    for fs in [
        vec![Simplex(1), Simplex(1)],
        vec![Simplex(2), Simplex(1)],
        vec![Simplex(1), Simplex(1), Simplex(1)],
        vec![Simplex(2), Sigma(2)],
        vec![Sigma(2), Simplex(1)],
        vec![Sigma(3), Simplex(1)],
        vec![Simplex(3), Simplex(1)],
        vec![Simplex(2), Simplex(2)],
    ] {
        out.push(product_fixture(&fs));
    }
    for a in [1, 2, -3] {
        out.push(fixture(
            format!("Hirzebruch({a})"),
            hirzebruch_model(a).unwrap(),
            Shape::Product(vec![Simplex(1), Simplex(1)]),
        ));
    }
    out.push(fixture(
        "WP(1,2)",
        weighted_projective_model(1, 2).unwrap(),
        Shape::Product(vec![Simplex(2)]),
    ));
    for n in 3..=4 {
        let m = hypercube_involution_model(n).unwrap();
        out.push(fixture(
            format!("I{n}/τ"),
            m.quotient.graph,
            Shape::Quotient,
        ));
    }
    out
}

/// `g` with labels `P·α`, for a projection `P` of full row rank.
pub fn projected(g: &GkmGraph, p: &QMatrix) -> GkmGraph {
    let weights = (0..g.edge_count())
        .map(|i| p.mul_vec(g.weight(DirEdge::forward(i))))
        .collect();
    g.with_weights(p.nrows(), weights).unwrap()
}

/// `[I | c]`-style projections dropping one rank, kept only if the image is
/// still GKM₂.
pub fn rank_drop(g: &GkmGraph) -> Option<GkmGraph> {
    let n = g.rank();
    if n < 3 {
        return None;
    }
    for c in 1..=4i64 {
        let mut rows = Vec::new();
        for i in 0..n - 1 {
            let mut r = vec![0; n];
            r[i] = 1;
            r[n - 1] = c + i as i64;
            rows.push(r);
        }
        let rows: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let h = projected(g, &QMatrix::from_i64_rows(&rows));
        if matches!(check_gkm_k(&h, 2), Ok(Verdict::Pass)) {
            return Some(h);
        }
    }
    None
}

/// Every nonempty connected regular edge set closed under the connection,
/// by enumerating all subsets of undirected edges. Bitmask over edges.
pub fn closed_subgraphs(g: &GkmGraph) -> Vec<(u64, usize)> {
    let m = g.edge_count();
    assert!(m <= 24, "brute force is exponential in the edge count");
    let mut out = Vec::new();
    'subsets: for mask in 1u64..(1 << m) {
        let has = |e: DirEdge| mask >> e.edge() & 1 == 1;
        let mut valence = None;
        let mut touched = Vec::new();
        for v in 0..g.vertex_count() {
            let star: Vec<DirEdge> = g.star(v).iter().copied().filter(|&e| has(e)).collect();
            if star.is_empty() {
                continue;
            }
            if *valence.get_or_insert(star.len()) != star.len() {
                continue 'subsets;
            }
            for &e in &star {
                for &f in &star {
                    if !has(g.nabla(e, f)) {
                        continue 'subsets;
                    }
                }
            }
            touched.push(v);
        }
        // connected through the chosen edges
        let mut seen = vec![touched[0]];
        let mut stack = vec![touched[0]];
        while let Some(v) = stack.pop() {
            for &e in g.star(v) {
                let w = g.target(e);
                if has(e) && !seen.contains(&w) {
                    seen.push(w);
                    stack.push(w);
                }
            }
        }
        if seen.len() == touched.len() {
            out.push((mask, valence.unwrap()));
        }
    }
    out
}

/// The smallest closed subgraph containing the seed edges, if it has the
/// seed's valence.
pub fn brute_force_face(closed: &[(u64, usize)], seeds: &[DirEdge]) -> Option<u64> {
    let need: u64 = seeds.iter().map(|e| 1u64 << e.edge()).sum();
    closed
        .iter()
        .filter(|(mask, _)| mask & need == need)
        .min_by_key(|(mask, _)| mask.count_ones())
        .filter(|(_, l)| *l == seeds.len())
        .map(|(mask, _)| *mask)
}

pub fn face_mask(f: &Face) -> u64 {
    f.edges.iter().map(|&e| 1u64 << e).sum()
}

pub fn beta_independent_at_every_vertex(g: &GkmGraph) -> bool {
    (0..g.vertex_count()).all(|v| {
        let cols: Vec<QVector> = g.star(v).iter().map(|&e| g.weight(e).clone()).collect();
        QMatrix::from_columns(g.rank(), &cols).rank() == g.star(v).len()
    })
}
