//! Acceptance run: one line per criterion, non-zero exit if any fails.

mod common;

use std::time::{Duration, Instant};

use gkm_core::acs::{find_acs_lift, quasitoric_sign_check, LiftSearch};
use gkm_core::cohomology::{
    betti_numbers, equivariant_basis, facet_class, invariant_basis, invariant_betti,
    multiply_classes, ordinary_zero_check, product_facet, torus_upper_bound,
};
use gkm_core::covering::{
    build_covering, deck_group, find_isomorphism, pull_back_labels, Facet, Factor,
};
use gkm_core::exactla::graded_dim;
use gkm_core::extension::{extend_along, extend_to_gkm_n, TreeOrder};
use gkm_core::faces::face_through_edges;
use gkm_core::graph::GkmGraph;
use gkm_core::models::{
    hirzebruch_model, hirzebruch_pair, hypercube_involution_model, labelled_product, sigma_model,
    simplex_model, standard_product,
};
use gkm_core::pipeline::{build_model, classify_orbit_space, gap_corollary, OrbitSpace};
use itertools::Itertools;
use num_traits::One;

use common::{
    beta_independent_at_every_vertex, brute_force_face, closed_subgraphs, face_mask, fixtures,
    rank_drop, Shape,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

/// Betti numbers from `E_d` by the recursion, checked against `|V|`.
fn betti_via_basis(g: &GkmGraph) -> Vec<usize> {
    let n = g.valence();
    let mut b: Vec<usize> = Vec::new();
    for d in 0..=n {
        let e = equivariant_basis(g, d).len();
        let free: usize = (0..d).map(|j| b[j] * graded_dim(g.rank(), d - j)).sum();
        b.push(e - free);
    }
    b
}

fn betti_fixtures() -> Outcome {
    let start = Instant::now();
    let mut cases: Vec<(String, GkmGraph, Vec<usize>)> = Vec::new();
    for n in 1..=4 {
        cases.push((format!("Δ{n}"), simplex_model(n).unwrap(), vec![1; n + 1]));
    }
    for m in 1..=3usize {
        let mut b = vec![0; m + 1];
        b[0] = 1;
        b[m] = 1;
        let g = if m == 1 {
            simplex_model(1).unwrap()
        } else {
            sigma_model(m).unwrap()
        };
        cases.push((format!("Σ{m}"), g, b));
    }
    cases.push((
        "Hirzebruch(1)".into(),
        hirzebruch_model(1).unwrap(),
        vec![1, 2, 1],
    ));
    for (name, g, expected) in &cases {
        let b = betti_via_basis(g);
        ensure(&b == expected, || format!("{name}: {b:?} ≠ {expected:?}"))?;
        ensure(b.iter().sum::<usize>() == g.vertex_count(), || {
            format!("{name}: Σb ≠ |V|")
        })?;
        let r = betti_numbers(g).map_err(|e| format!("{name}: {e}"))?;
        ensure(&r.betti == expected, || {
            format!("{name}: recursion disagrees")
        })?;
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!(
        "{} fixtures in {:.2?}",
        cases.len(),
        start.elapsed()
    ))
}

fn covering_suite() -> Outcome {
    let mut timing = String::new();
    for n in 3..=5 {
        let start = Instant::now();
        let m = hypercube_involution_model(n).unwrap();
        let c = build_covering(&m.quotient.graph, 0).map_err(|e| format!("n={n}: {e}"))?;
        ensure(c.total.factors == vec![Factor::Simplex(1); n], || {
            format!("n={n}: factors {:?}", c.total.factors)
        })?;
        let cube = standard_product(&vec![Factor::Simplex(1); n]).unwrap();
        ensure(
            find_isomorphism(&c.total.graph, &cube.graph).is_some(),
            || format!("n={n}: not I^n"),
        )?;
        ensure(c.verify_compatibility().passed(), || {
            format!("n={n}: ∇-compatibility")
        })?;
        let deck = deck_group(&c).map_err(|e| format!("n={n}: {e}"))?;
        ensure(deck.order() == 2, || {
            format!("n={n}: deck order {}", deck.order())
        })?;
        let t = &c.total.graph;
        for z in 0..c.base.vertex_count() {
            let fiber = c.fiber(z);
            for &x in &fiber {
                let images: Vec<usize> =
                    deck.elements.iter().map(|g| g.vertex(x)).sorted().collect();
                ensure(images == fiber, || {
                    format!("n={n}: not simply transitive on a fiber")
                })?;
            }
        }
        for psi in &deck.elements {
            for e in t.dir_edges() {
                ensure(c.map.edge(psi.edge(e)) == c.map.edge(e), || {
                    format!("n={n}: deck breaks π")
                })?;
                for &f in t.star(t.source(e)) {
                    ensure(
                        psi.edge(t.nabla(e, f)) == t.nabla(psi.edge(e), psi.edge(f)),
                        || format!("n={n}: deck breaks ∇"),
                    )?;
                }
            }
        }
        if n == 5 {
            within(start, Duration::from_secs(30))?;
        }
        timing = format!("n=5 in {:.2?}", start.elapsed());
    }
    Ok(timing)
}

fn hypercube_numbers() -> Outcome {
    let m = hypercube_involution_model(5).unwrap();
    let c = build_covering(&m.quotient.graph, 0).map_err(|e| e.to_string())?;
    let deck = deck_group(&c).map_err(|e| e.to_string())?;
    let pulled = pull_back_labels(&c);
    let inv = invariant_betti(&pulled, &deck.elements).map_err(|e| e.to_string())?;
    ensure(inv.betti[1] == 1, || {
        format!("invariant b₂ = {}", inv.betti[1])
    })?;
    ensure(inv.total == 16, || format!("total Betti {}", inv.total))?;
    let classes = invariant_basis(&pulled, &deck.elements, 1).map_err(|e| e.to_string())?;
    let v = classes
        .iter()
        .find(|v| !ordinary_zero_check(&pulled, v))
        .ok_or("no invariant degree-1 class survives")?;
    let sq = multiply_classes(v, v).map_err(|e| e.to_string())?;
    ensure(!ordinary_zero_check(&pulled, &sq), || "v² = 0".into())?;
    let bound = torus_upper_bound(&c, &deck).map_err(|e| e.to_string())?;
    ensure(bound.bound == 4, || format!("bound {}", bound.bound))?;
    Ok(format!(
        "b₂ = 1, total 16, v² ≠ 0, a − b₂ = {} − {} = 4",
        bound.facet_orbits, bound.b2
    ))
}

fn extension_suite() -> Outcome {
    let mut graphs: Vec<(String, GkmGraph)> = Vec::new();
    for f in fixtures() {
        if let Shape::Product(_) = f.shape {
            if let Some(h) = rank_drop(&f.graph) {
                graphs.push((format!("{} (rank {})", f.name, h.rank()), h));
            }
            graphs.push((f.name, f.graph));
        }
    }
    for n in 3..=5 {
        graphs.push((
            format!("I{n} projected"),
            hypercube_involution_model(n).unwrap().projected,
        ));
    }
    for (name, g) in &graphs {
        let ext = extend_to_gkm_n(g).map_err(|e| format!("{name}: {e}"))?;
        let h = &ext.graph;
        ensure(h.rank() == g.valence(), || {
            format!("{name}: rank {}", h.rank())
        })?;
        for e in h.dir_edges() {
            let (a, b) = ext.lift(e);
            let image = ext.phi.mul_vec(b);
            ensure(&image == a, || {
                format!("{name}: φ∘β̂ ≠ α̂ at {}", h.edge_name(e))
            })?;
            ensure(a.eq_up_to_sign(g.weight(e)), || {
                format!("{name}: α̂ is not a lift")
            })?;
        }
        ensure(beta_independent_at_every_vertex(h), || {
            format!("{name}: not GKM_n")
        })?;
        let bfs = extend_along(g, TreeOrder::BreadthFirst).map_err(|e| format!("{name}: {e}"))?;
        let dfs = extend_along(g, TreeOrder::DepthFirst).map_err(|e| format!("{name}: {e}"))?;
        ensure(bfs.graph.weights() == dfs.graph.weights(), || {
            format!("{name}: trees disagree")
        })?;
        ensure(bfs.graph.weights() == h.weights(), || {
            format!("{name}: trees disagree")
        })?;
    }
    Ok(format!("{} graphs", graphs.len()))
}

fn gap_suite() -> Outcome {
    let start = Instant::now();
    let rows = gap_corollary(8);
    for r in &rows {
        ensure(r.violations.is_empty(), || {
            format!("n={}: {:?}", r.n, r.violations)
        })?;
        ensure(4 * r.largest_other <= 3 * r.cube, || format!("n={}", r.n))?;
    }
    within(start, Duration::from_secs(1))?;
    let total: usize = rows.iter().map(|r| r.products).sum();
    Ok(format!("{total} multisets, n ≤ 8, {:.2?}", start.elapsed()))
}

fn acs_suite() -> Outcome {
    let mut with_lift: Vec<(String, GkmGraph)> = (1..=3)
        .map(|n| (format!("Δ{n}"), simplex_model(n).unwrap()))
        .collect();
    with_lift.push(("Hirzebruch(1)".into(), hirzebruch_model(1).unwrap()));
    for (name, g) in &with_lift {
        match find_acs_lift(g).map_err(|e| e.to_string())? {
            LiftSearch::Found { table, .. } => ensure(
                table.iter().all(|r| r.p.is_one() && r.q.is_integer()),
                || format!("{name}: (p, q) table"),
            )?,
            LiftSearch::NoLift(w) => return Err(format!("{name}: {w}")),
        }
    }
    for m in [2, 3] {
        match find_acs_lift(&sigma_model(m).unwrap()).map_err(|e| e.to_string())? {
            LiftSearch::NoLift(w) => ensure(!w.edges.is_empty(), || "empty witness".into())?,
            LiftSearch::Found { .. } => return Err(format!("Σ{m} has a lift")),
        }
    }
    for fs in [
        vec![Factor::Simplex(1), Factor::Simplex(1)],
        vec![Factor::Simplex(2)],
    ] {
        let p = standard_product(&fs).unwrap();
        let lift = find_acs_lift(&p.graph).unwrap();
        let labels = lift
            .lift()
            .ok_or("standard product has no lift")?
            .labels()
            .to_vec();
        ensure(quasitoric_sign_check(&p, &labels).unwrap(), || {
            format!("{fs:?}: sign check")
        })?;
    }
    let p = labelled_product(&hirzebruch_pair(0)).unwrap();
    let mut labels = find_acs_lift(&p.graph)
        .unwrap()
        .lift()
        .unwrap()
        .labels()
        .to_vec();
    let e = p.graph.star(0)[0];
    labels[e.index()] = -&labels[e.index()];
    ensure(!quasitoric_sign_check(&p, &labels).unwrap(), || {
        "mis-gauged square passes".into()
    })?;
    Ok("lifts on Δ1–Δ3 and Hirzebruch, none on Σ2, Σ3; sign check".into())
}

fn oracle_suite() -> Outcome {
    let mut queries = 0;
    let mut graphs = 0;
    for f in fixtures()
        .into_iter()
        .filter(|f| f.graph.vertex_count() <= 12)
    {
        let g = &f.graph;
        let closed = closed_subgraphs(g);
        graphs += 1;
        for v in 0..g.vertex_count() {
            for l in 1..=g.valence() {
                for seeds in g.star(v).iter().copied().combinations(l) {
                    queries += 1;
                    let ours = face_through_edges(g, v, &seeds).ok().map(|f| face_mask(&f));
                    let oracle = brute_force_face(&closed, &seeds);
                    ensure(ours == oracle, || {
                        let names: Vec<String> = seeds.iter().map(|&e| g.edge_name(e)).collect();
                        format!("{}: faces through {names:?} differ", f.name)
                    })?;
                }
            }
        }
    }
    for n in 1..=4 {
        let p = standard_product(&vec![Factor::Simplex(1); n]).unwrap();
        for i in 0..n {
            let plus = facet_class(
                &p.graph,
                &product_facet(
                    &p,
                    Facet {
                        factor: i,
                        index: 0,
                    },
                ),
            );
            let minus = facet_class(
                &p.graph,
                &product_facet(
                    &p,
                    Facet {
                        factor: i,
                        index: 1,
                    },
                ),
            );
            let (plus, minus) = (
                plus.map_err(|e| e.to_string())?,
                minus.map_err(|e| e.to_string())?,
            );
            let prod = multiply_classes(&plus, &minus).map_err(|e| e.to_string())?;
            ensure(ordinary_zero_check(&p.graph, &prod), || {
                format!("I{n}: v_{{{i},+}}·v_{{{i},−}} ≠ 0")
            })?;
        }
    }
    Ok(format!(
        "{queries} seeds on {graphs} graphs; cube relations n ≤ 4"
    ))
}

fn pipeline_suite() -> Outcome {
    let mut count = 0;
    let mut all = fixtures();
    all.push(common::Fixture {
        name: "I5/τ".into(),
        graph: hypercube_involution_model(5).unwrap().quotient.graph,
        shape: Shape::Quotient,
    });
    for f in &all {
        let r = build_model(&f.graph).map_err(|e| format!("{}: {e}", f.name))?;
        ensure(r.betti.betti == r.invariant_betti.betti, || {
            format!("{}: Betti chain", f.name)
        })?;
        let v = classify_orbit_space(&f.graph).map_err(|e| format!("{}: {e}", f.name))?;
        match (&f.shape, &v) {
            (Shape::Product(fs), OrbitSpace::Product { factors }) => {
                let mut want = fs.clone();
                gkm_core::covering::sort_canonical(&mut want);
                ensure(&want == factors, || {
                    format!("{}: factors {factors:?}", f.name)
                })?
            }
            (Shape::Quotient, OrbitSpace::NontrivialCover { .. }) => {}
            (Shape::Other, _) => {}
            _ => return Err(format!("{}: classified as {v:?}", f.name)),
        }
        count += 1;
    }
    Ok(format!("{count} fixtures"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("betti fixtures", betti_fixtures),
        ("covering and deck group", covering_suite),
        ("hypercube quotient numbers", hypercube_numbers),
        ("extension", extension_suite),
        ("vertex-count gap", gap_suite),
        ("almost complex lifts", acs_suite),
        ("face oracle and cube relations", oracle_suite),
        ("pipeline consistency", pipeline_suite),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match result {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
