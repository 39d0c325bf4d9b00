//! End-to-end runs: the product model of a graph with its group action and
//! the cohomology comparison, classification of orbit spaces by their
//! covering, and the vertex-count gap among products.

use std::fmt;

use serde::Serialize;

use crate::cohomology::{betti_numbers, invariant_betti, CohomologyError, GradedDims};
use crate::covering::{
    build_covering, deck_group, factor_multisets, product_vertex_count, pull_back_labels,
    CoveringError, CoveringMap, DeckGroup, Factor,
};
use crate::exactla::rational::{format_rational, primitive_integer_vector};
use crate::exactla::{QMatrix, QVector};
use crate::extension::{extend_to_gkm_n, induced_weight_action, Extension, ExtensionError};
use crate::faces::{check_small_three_faces, enumerate_faces, FaceError};
use crate::graph::{gkm_order, GkmGraph, Witness};
use crate::models::antipodal_map;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Covering,
    Deck,
    Extension,
    Action,
    Lambda,
    Betti,
    InvariantBetti,
    Comparison,
    Faces,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Covering => "covering",
            Stage::Deck => "deck",
            Stage::Extension => "extension",
            Stage::Action => "action",
            Stage::Lambda => "lambda",
            Stage::Betti => "betti",
            Stage::InvariantBetti => "invariant-betti",
            Stage::Comparison => "comparison",
            Stage::Faces => "faces",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{stage}: {message}")]
pub struct PipelineError {
    pub stage: Stage,
    pub message: String,
}

fn at<E: fmt::Display>(stage: Stage) -> impl FnOnce(E) -> PipelineError {
    move |e| PipelineError {
        stage,
        message: e.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FacetLabel {
    pub facet: String,
    pub label: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelReport {
    pub factors: Vec<Factor>,
    pub sheets: usize,
    pub small_three_faces: bool,
    pub gkm_order: usize,
    pub deck_order: usize,
    pub deck_table: Vec<Vec<usize>>,
    pub phi: Vec<Vec<String>>,
    /// Characteristic labels of the facets of the product, primitive integral.
    pub lambda: Vec<FacetLabel>,
    /// One matrix per deck element, in deck order.
    pub action: Vec<Vec<Vec<String>>>,
    pub betti: GradedDims,
    pub invariant_betti: GradedDims,
    /// Betti numbers of the extended model itself (no group).
    pub model_betti: GradedDims,
}

fn matrix_strings(m: &QMatrix) -> Vec<Vec<String>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(format_rational).collect())
        .collect()
}

/// `λ(F)` is dual to the `β` of the edge leaving `F`, against the other `β`
/// at any vertex of `F`; the same up to sign at every vertex.
fn facet_labels(c: &CoveringMap, ext: &Extension) -> Result<Vec<FacetLabel>, PipelineError> {
    let p = &c.total;
    let g = &ext.graph;
    let n = ext.basis.len();
    let fail = |w: Witness| PipelineError {
        stage: Stage::Lambda,
        message: w.to_string(),
    };
    let mut labels: Vec<Option<QVector>> = vec![None; p.facets().len()];
    for v in 0..g.vertex_count() {
        let star = g.star(v);
        let b = QMatrix::from_columns(
            n,
            &star
                .iter()
                .map(|&e| ext.beta(e).clone())
                .collect::<Vec<_>>(),
        );
        // rows of B⁻¹ are the dual basis
        let inv = b
            .inverse()
            .ok_or_else(|| fail(Witness::new("weights at a vertex are dependent").at(g, v)))?;
        for (i, &e) in star.iter().enumerate() {
            let dual = QVector::new(
                primitive_integer_vector(inv.row(i))
                    .into_iter()
                    .map(crate::exactla::Rational::from_integer)
                    .collect(),
            )
            .sign_canonical();
            let slot = &mut labels[p.facet_position(p.facet_left_by(e))];
            match slot {
                None => *slot = Some(dual),
                Some(l) if *l == dual => {}
                Some(_) => {
                    return Err(fail(
                        Witness::new("facet label differs between vertices")
                            .at(g, v)
                            .with_edges(g, [e]),
                    ))
                }
            }
        }
    }
    Ok(p.facets()
        .into_iter()
        .zip(labels)
        .map(|(f, l)| FacetLabel {
            facet: format!("{}:{}", f.factor, f.index),
            label: l
                .expect("every facet has a vertex")
                .entries()
                .iter()
                .map(format_rational)
                .collect(),
        })
        .collect())
}

/// Covering, pulled-back labels, extension, deck group, its action on the
/// weight lattice, and the invariant cohomology, which must reproduce the
/// Betti numbers of `g`.
pub fn build_model(g: &GkmGraph) -> Result<ModelReport, PipelineError> {
    let small_three_faces = check_small_three_faces(g).passed();
    let c = build_covering(g, 0).map_err(at::<CoveringError>(Stage::Covering))?;
    let pulled = pull_back_labels(&c);
    let ext = extend_to_gkm_n(&pulled).map_err(at::<ExtensionError>(Stage::Extension))?;
    let deck = deck_group(&c).map_err(at::<CoveringError>(Stage::Deck))?;
    let action = induced_weight_action(&ext, &deck).map_err(at::<ExtensionError>(Stage::Action))?;
    let lambda = facet_labels(&c, &ext)?;
    let betti = betti_numbers(g).map_err(at::<CohomologyError>(Stage::Betti))?;
    let inv = invariant_betti(&pulled, &deck.elements)
        .map_err(at::<CohomologyError>(Stage::InvariantBetti))?;
    let model_betti = betti_numbers(&ext.graph).map_err(at::<CohomologyError>(Stage::Betti))?;
    if inv.betti != betti.betti {
        return Err(PipelineError {
            stage: Stage::Comparison,
            message: format!(
                "Betti numbers {:?} differ from the invariant ones {:?}",
                betti.betti, inv.betti
            ),
        });
    }
    Ok(ModelReport {
        factors: c.total.factors.clone(),
        sheets: c.sheets(),
        small_three_faces,
        gkm_order: gkm_order(g),
        deck_order: deck.order(),
        deck_table: deck.table.clone(),
        phi: matrix_strings(&ext.phi),
        lambda,
        action: action.iter().map(matrix_strings).collect(),
        betti,
        invariant_betti: inv,
        model_betti,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum OrbitSpace {
    Product {
        factors: Vec<Factor>,
    },
    NontrivialCover {
        factors: Vec<Factor>,
        deck_order: usize,
        /// No deck element other than the identity meets a facet's image.
        free_on_facets: bool,
        /// The cover is `I^n` and the group is generated by the flip of every
        /// coordinate.
        antipodal: bool,
    },
}

/// Whether `psi` moves every facet of the product off itself.
fn moves_facets_off(c: &CoveringMap, deck: &DeckGroup, k: usize) -> bool {
    let p = &c.total;
    let psi = &deck.elements[k];
    p.facets().into_iter().all(|f| {
        let leaving = p
            .graph
            .dir_edges()
            .find(|&e| p.facet_left_by(e) == f)
            .expect("facets are left");
        let image = p.facet_left_by(psi.edge(leaving));
        (0..p.graph.vertex_count()).all(|v| !(p.contains(f, v) && p.contains(image, v)))
    })
}

/// The covering decides: trivial deck group means the graph is a product.
pub fn classify_orbit_space(g: &GkmGraph) -> Result<OrbitSpace, PipelineError> {
    let faces = enumerate_faces(g, 2).map_err(at::<FaceError>(Stage::Faces))?;
    if let Some(f) = faces.iter().find(|f| f.vertices.len() > 4) {
        return Err(PipelineError {
            stage: Stage::Faces,
            message: format!("two-face with {} vertices", f.vertices.len()),
        });
    }
    let c = build_covering(g, 0).map_err(at::<CoveringError>(Stage::Covering))?;
    let deck = deck_group(&c).map_err(at::<CoveringError>(Stage::Deck))?;
    let factors = c.total.factors.clone();
    if deck.is_trivial() {
        return Ok(OrbitSpace::Product { factors });
    }
    let free_on_facets = (1..deck.order()).all(|k| moves_facets_off(&c, &deck, k));
    let cube = factors.iter().all(|&f| f == Factor::Simplex(1));
    let antipodal = cube && deck.order() == 2 && deck.elements[1] == antipodal_map(&c.total);
    Ok(OrbitSpace::NontrivialCover {
        factors,
        deck_order: deck.order(),
        free_on_facets,
        antipodal,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapRow {
    pub n: usize,
    pub products: usize,
    /// Largest vertex count among products other than `I^n`.
    pub largest_other: usize,
    pub cube: usize,
    /// Products breaking `4·|V| ≤ 3·2^n` other than `I^n`.
    pub violations: Vec<Vec<Factor>>,
}

/// For each total dimension `n`, every product of simplices and `Σ`'s has at
/// most `3·2^{n−2}` vertices unless it is `I^n`, which has `2^n`.
pub fn gap_corollary(max_n: usize) -> Vec<GapRow> {
    (1..=max_n)
        .map(|n| {
            let cube = 1usize << n;
            let multisets = factor_multisets(n);
            let mut largest_other = 0;
            let mut violations = Vec::new();
            for fs in &multisets {
                let v = product_vertex_count(fs);
                if fs.iter().all(|&f| f == Factor::Simplex(1)) {
                    assert_eq!(v, cube);
                    continue;
                }
                largest_other = largest_other.max(v);
                if 4 * v > 3 * cube {
                    violations.push(fs.clone());
                }
            }
            GapRow {
                n,
                products: multisets.len(),
                largest_other,
                cube,
                violations,
            }
        })
        .collect()
}
