//! Equivariant cohomology of a labelled graph as tuples of polynomials
//! satisfying the edge congruences, ordinary Betti numbers by the
//! free-module recursion, facet classes and invariants of group actions.
//!
//! Degree `d` means polynomial degree (cohomological degree `2d`). Unknowns
//! of a degree-`d` system are the monomial coefficients at each vertex, in
//! vertex order and grlex monomial order, so kernels come out in one fixed
//! echelon parametrization.

use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use crate::covering::{check_automorphism, CoveringError, CoveringMap, DeckGroup, GraphMap};
use crate::exactla::echelon::integer_row;
use crate::exactla::poly::restriction_for_degree;
use crate::exactla::{
    graded_dim, rat, HomogPoly, IntEchelon, MonomialBasis, QVector, Rational, SparseRow,
};
use crate::faces::Face;
use crate::graph::{DirEdge, GkmGraph, Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CohomologyError {
    #[error("Betti recursion is inconsistent: {0}")]
    FormalityViolation(String),
    #[error("no facet class with the required support: {0}")]
    NoSuchClass(Witness),
    #[error("classes live on different graphs or rings")]
    Mismatch,
    #[error("tuple violates an edge congruence: {0}")]
    NotAClass(Witness),
    #[error(transparent)]
    Action(#[from] CoveringError),
}

/// A tuple of degree-`d` polynomials, one per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyClass {
    pub degree: usize,
    pub num_vars: usize,
    pub entries: Vec<HomogPoly>,
}

impl CohomologyClass {
    /// Checks the edge congruences.
    pub fn new(g: &GkmGraph, entries: Vec<HomogPoly>) -> Result<Self, CohomologyError> {
        let Some(first) = entries.first() else {
            return Err(CohomologyError::Mismatch);
        };
        let (degree, num_vars) = (first.degree(), first.num_vars());
        if entries.len() != g.vertex_count()
            || num_vars != g.rank()
            || entries
                .iter()
                .any(|p| p.degree() != degree || p.num_vars() != num_vars)
        {
            return Err(CohomologyError::Mismatch);
        }
        let c = CohomologyClass {
            degree,
            num_vars,
            entries,
        };
        if let Verdict::Fail(w) = c.verify(g) {
            return Err(CohomologyError::NotAClass(w));
        }
        Ok(c)
    }

    /// The same polynomial at every vertex.
    pub fn constant(g: &GkmGraph, p: HomogPoly) -> Self {
        CohomologyClass {
            degree: p.degree(),
            num_vars: p.num_vars(),
            entries: vec![p; g.vertex_count()],
        }
    }

    pub fn one(g: &GkmGraph) -> Self {
        Self::constant(g, HomogPoly::constant(g.rank(), rat(1)))
    }

    pub fn zero(g: &GkmGraph, degree: usize) -> Self {
        Self::constant(g, HomogPoly::zero(g.rank(), degree))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(HomogPoly::is_zero)
    }

    pub fn verify(&self, g: &GkmGraph) -> Verdict {
        for i in 0..g.edge_count() {
            let e = DirEdge::forward(i);
            let diff = self.entries[g.source(e)]
                .sub(&self.entries[g.target(e)])
                .expect("entries share ring and degree");
            let r = restriction_for_degree(g.weight(e), self.degree).expect("weights are nonzero");
            if !r.satisfied_by(&diff.coefficients(&MonomialBasis::new(self.num_vars, self.degree)))
            {
                return Verdict::Fail(
                    Witness::new("difference does not vanish on the kernel of the weight")
                        .with_edges(g, [e]),
                );
            }
        }
        Verdict::Pass
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        CohomologyClass {
            degree: self.degree,
            num_vars: self.num_vars,
            entries: self.entries.iter().map(|p| p.scaled(c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, CohomologyError> {
        if self.entries.len() != other.entries.len() {
            return Err(CohomologyError::Mismatch);
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b).map_err(|_| CohomologyError::Mismatch))
            .collect::<Result<_, _>>()?;
        Ok(CohomologyClass {
            degree: self.degree,
            num_vars: self.num_vars,
            entries,
        })
    }

    /// Coefficients at all vertices, concatenated.
    pub fn coefficients(&self) -> Vec<Rational> {
        let basis = MonomialBasis::new(self.num_vars, self.degree);
        self.entries
            .iter()
            .flat_map(|p| p.coefficients(&basis))
            .collect()
    }
}

/// Vertexwise product.
pub fn multiply_classes(
    a: &CohomologyClass,
    b: &CohomologyClass,
) -> Result<CohomologyClass, CohomologyError> {
    if a.entries.len() != b.entries.len() || a.num_vars != b.num_vars {
        return Err(CohomologyError::Mismatch);
    }
    let entries = a
        .entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| x.mul(y).map_err(|_| CohomologyError::Mismatch))
        .collect::<Result<_, _>>()?;
    Ok(CohomologyClass {
        degree: a.degree + b.degree,
        num_vars: a.num_vars,
        entries,
    })
}

/// Degree-`d` congruence system with the unknowns of vertex `v` stored in
/// block `blocks[v]`; vertices sharing a block carry the same polynomial.
struct System {
    basis: MonomialBasis,
    nblocks: usize,
    echelon: IntEchelon,
}

fn congruence_system(g: &GkmGraph, d: usize, blocks: &[usize], nblocks: usize) -> System {
    let basis = MonomialBasis::new(g.rank(), d);
    let n = basis.len();
    let mut echelon = IntEchelon::new(nblocks * n);
    let mut cache: HashMap<&QVector, Vec<SparseRow>> = HashMap::new();
    for i in 0..g.edge_count() {
        let e = DirEdge::forward(i);
        let (bu, bw) = (blocks[g.source(e)], blocks[g.target(e)]);
        let rows = cache.entry(g.weight(e)).or_insert_with(|| {
            restriction_for_degree(g.weight(e), d)
                .expect("weights are nonzero")
                .integer_rows()
        });
        // one block on both ends: the difference is identically zero
        if bu == bw {
            continue;
        }
        for r in rows.iter() {
            let mut row: SparseRow = Vec::with_capacity(2 * r.len());
            row.extend(r.iter().map(|(c, x)| (bu * n + c, x.clone())));
            row.extend(r.iter().map(|(c, x)| (bw * n + c, -x.clone())));
            echelon.insert(row);
        }
    }
    System {
        basis,
        nblocks,
        echelon,
    }
}

impl System {
    fn dimension(&self) -> usize {
        self.nblocks * self.basis.len() - self.echelon.rank()
    }

    fn classes(&self, blocks: &[usize]) -> Vec<CohomologyClass> {
        let n = self.basis.len();
        self.echelon
            .kernel_basis()
            .into_iter()
            .map(|x| CohomologyClass {
                degree: self.basis.degree(),
                num_vars: self.basis.num_vars(),
                entries: blocks
                    .iter()
                    .map(|&b| HomogPoly::from_coefficients(&self.basis, &x[b * n..(b + 1) * n]))
                    .collect(),
            })
            .collect()
    }
}

fn trivial_blocks(g: &GkmGraph) -> Vec<usize> {
    (0..g.vertex_count()).collect()
}

/// Echelon basis of the degree-`d` classes; its length is `E_d`.
pub fn equivariant_basis(g: &GkmGraph, d: usize) -> Vec<CohomologyClass> {
    let blocks = trivial_blocks(g);
    let sys = congruence_system(g, d, &blocks, g.vertex_count());
    let classes = sys.classes(&blocks);
    debug_assert!(classes.iter().all(|c| c.verify(g).passed()));
    classes
}

pub fn equivariant_dimension(g: &GkmGraph, d: usize) -> usize {
    congruence_system(g, d, &trivial_blocks(g), g.vertex_count()).dimension()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedDims {
    /// `E_0 … E_n`.
    pub equivariant: Vec<usize>,
    /// `b_0, b_2, …, b_{2n}`.
    pub betti: Vec<usize>,
    pub total: usize,
    pub vertices: usize,
}

/// `b_{2d} = E_d − Σ_{j<d} b_{2j}·dim S^{d−j}`, checked to be nonnegative, to
/// vanish one degree past `n`, and to sum to `expected_total`.
fn betti_from_dims(
    k: usize,
    dims: &[usize],
    expected_total: usize,
) -> Result<GradedDims, CohomologyError> {
    let n = dims.len() - 2;
    let mut betti: Vec<i64> = Vec::with_capacity(dims.len());
    for (d, &e) in dims.iter().enumerate() {
        let free: i64 = (0..d).map(|j| betti[j] * graded_dim(k, d - j) as i64).sum();
        let b = e as i64 - free;
        if b < 0 {
            return Err(CohomologyError::FormalityViolation(format!(
                "b_{} = {b} is negative",
                2 * d
            )));
        }
        betti.push(b);
    }
    if betti[n + 1] != 0 {
        return Err(CohomologyError::FormalityViolation(format!(
            "b_{} = {} above the top degree",
            2 * (n + 1),
            betti[n + 1]
        )));
    }
    betti.pop();
    let betti: Vec<usize> = betti.into_iter().map(|b| b as usize).collect();
    let total: usize = betti.iter().sum();
    if total != expected_total {
        return Err(CohomologyError::FormalityViolation(format!(
            "total Betti number {total} differs from {expected_total}"
        )));
    }
    Ok(GradedDims {
        equivariant: dims[..=n].to_vec(),
        betti,
        total,
        vertices: expected_total,
    })
}

pub fn betti_numbers(g: &GkmGraph) -> Result<GradedDims, CohomologyError> {
    let n = g.valence();
    let dims: Vec<usize> = (0..=n + 1).map(|d| equivariant_dimension(g, d)).collect();
    betti_from_dims(g.rank(), &dims, g.vertex_count())
}

/// `true` iff `c` lies in the ideal generated by the linear constants, i.e.
/// maps to zero in ordinary cohomology.
pub fn ordinary_zero_check(g: &GkmGraph, c: &CohomologyClass) -> bool {
    if c.degree == 0 {
        return c.is_zero();
    }
    let basis = MonomialBasis::new(c.num_vars, c.degree);
    let mut span = IntEchelon::new(g.vertex_count() * basis.len());
    for b in equivariant_basis(g, c.degree - 1) {
        for i in 0..c.num_vars {
            let x = CohomologyClass::constant(g, HomogPoly::linear(&QVector::unit(c.num_vars, i)));
            let prod = multiply_classes(&x, &b).expect("same graph");
            span.insert(integer_row(&prod.coefficients()));
        }
    }
    span.contains(integer_row(&c.coefficients()))
}

/// A basis of the degree-`d` classes modulo the ideal of linear constants:
/// echelon basis classes taken greedily when independent of the ideal and
/// of those already taken.
pub fn ordinary_basis(g: &GkmGraph, d: usize) -> Vec<CohomologyClass> {
    let classes = equivariant_basis(g, d);
    let n = MonomialBasis::new(g.rank(), d).len();
    let mut span = IntEchelon::new(g.vertex_count() * n);
    if d > 0 {
        for b in equivariant_basis(g, d - 1) {
            for i in 0..g.rank() {
                let x =
                    CohomologyClass::constant(g, HomogPoly::linear(&QVector::unit(g.rank(), i)));
                span.insert(integer_row(
                    &multiply_classes(&x, &b).unwrap().coefficients(),
                ));
            }
        }
    }
    classes
        .into_iter()
        .filter(|c| span.insert(integer_row(&c.coefficients())))
        .collect()
}

/// The degree-1 class supported on the facet `f`: zero off `f`, a multiple of
/// the weight of the edge leaving `f` on it. Scaled so the entry at the first
/// vertex of `f` is that edge's canonical weight.
pub fn facet_class(g: &GkmGraph, f: &Face) -> Result<CohomologyClass, CohomologyError> {
    let k = g.rank();
    let blocks = trivial_blocks(g);
    let mut sys = congruence_system(g, 1, &blocks, g.vertex_count());
    let mut leaving: Vec<Option<DirEdge>> = vec![None; g.vertex_count()];
    for (v, slot) in leaving.iter_mut().enumerate() {
        if !f.contains_vertex(v) {
            for i in 0..k {
                sys.echelon.insert(vec![(v * k + i, 1.into())]);
            }
            continue;
        }
        let out: Vec<DirEdge> = g
            .star(v)
            .iter()
            .copied()
            .filter(|&e| !f.contains_edge(e))
            .collect();
        let [e] = out.as_slice() else {
            return Err(CohomologyError::NoSuchClass(
                Witness::new(format!("{} edges leave the face here", out.len())).at(g, v),
            ));
        };
        *slot = Some(*e);
        let a = integer_row(g.weight(*e).entries());
        let dense: Vec<num_bigint::BigInt> = (0..k)
            .map(|i| {
                a.iter()
                    .find(|(c, _)| *c == i)
                    .map_or(0.into(), |(_, x)| x.clone())
            })
            .collect();
        // entry ∥ α: α_j x_i − α_i x_j = 0
        for i in 0..k {
            for j in i + 1..k {
                sys.echelon.insert(vec![
                    (v * k + i, dense[j].clone()),
                    (v * k + j, -dense[i].clone()),
                ]);
            }
        }
    }
    let classes = sys.classes(&blocks);
    let [c] = classes.as_slice() else {
        return Err(CohomologyError::NoSuchClass(Witness::new(format!(
            "support conditions leave {} classes",
            classes.len()
        ))));
    };
    let v = f.vertices[0];
    let w = g.weight(leaving[v].unwrap());
    let entry = QVector::new(c.entries[v].coefficients(&MonomialBasis::new(k, 1)));
    let i = w.first_nonzero().expect("weights are nonzero");
    if entry[i].is_zero() {
        return Err(CohomologyError::NoSuchClass(
            Witness::new("class vanishes on the facet").at(g, v),
        ));
    }
    Ok(c.scaled(&(&w[i] / &entry[i])))
}

/// Orbit blocks of a group of automorphisms: each vertex goes to the block
/// of the smallest vertex in its orbit.
fn orbit_blocks(g: &GkmGraph, group: &[GraphMap]) -> (Vec<usize>, usize) {
    let reps: Vec<usize> = (0..g.vertex_count())
        .map(|v| group.iter().map(|p| p.vertex(v)).min().unwrap_or(v).min(v))
        .collect();
    let mut index = vec![usize::MAX; g.vertex_count()];
    let mut next = 0;
    for v in 0..g.vertex_count() {
        if reps[v] == v {
            index[v] = next;
            next += 1;
        }
    }
    (reps.iter().map(|&r| index[r]).collect(), next)
}

/// Dimensions of the invariant classes under a label- and
/// connection-preserving group (acting by `(g·f)_v = f_{g⁻¹v}`), and the
/// Betti numbers they determine.
pub fn invariant_betti(g: &GkmGraph, group: &[GraphMap]) -> Result<GradedDims, CohomologyError> {
    for psi in group {
        check_automorphism(g, psi)?;
    }
    let (blocks, nblocks) = orbit_blocks(g, group);
    let n = g.valence();
    let dims: Vec<usize> = (0..=n + 1)
        .map(|d| congruence_system(g, d, &blocks, nblocks).dimension())
        .collect();
    betti_from_dims(g.rank(), &dims, nblocks)
}

/// Invariant classes of degree `d` in echelon form.
pub fn invariant_basis(
    g: &GkmGraph,
    group: &[GraphMap],
    d: usize,
) -> Result<Vec<CohomologyClass>, CohomologyError> {
    for psi in group {
        check_automorphism(g, psi)?;
    }
    let (blocks, nblocks) = orbit_blocks(g, group);
    Ok(congruence_system(g, d, &blocks, nblocks).classes(&blocks))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorusBound {
    pub facet_orbits: usize,
    pub b2: usize,
    pub bound: i64,
}

/// `a − b₂`: deck orbits on the facets of the product minus the invariant
/// second Betti number of the pulled-back labels.
pub fn torus_upper_bound(c: &CoveringMap, deck: &DeckGroup) -> Result<TorusBound, CohomologyError> {
    let p = &c.total;
    let g = &p.graph;
    let facets = p.facets();
    let mut image_of = vec![vec![0usize; facets.len()]; deck.order()];
    for (k, psi) in deck.elements.iter().enumerate() {
        for (i, &f) in facets.iter().enumerate() {
            let images: Vec<usize> = g
                .dir_edges()
                .filter(|&e| p.facet_left_by(e) == f)
                .map(|e| p.facet_position(p.facet_left_by(psi.edge(e))))
                .collect();
            if images.windows(2).any(|w| w[0] != w[1]) {
                return Err(CohomologyError::Action(CoveringError::NotCompatible(
                    Witness::new("deck transformation does not map facets to facets"),
                )));
            }
            image_of[k][i] = images[0];
        }
    }
    let facet_orbits = (0..facets.len())
        .filter(|&i| image_of.iter().all(|m| m[i] >= i))
        .count();
    let pulled = crate::covering::pull_back_labels(c);
    let b2 = invariant_betti(&pulled, &deck.elements)?
        .betti
        .get(1)
        .copied()
        .unwrap_or(0);
    Ok(TorusBound {
        facet_orbits,
        b2,
        bound: facet_orbits as i64 - b2 as i64,
    })
}

/// The facet of a product graph as a face.
pub fn product_facet(p: &crate::covering::ProductGraph, facet: crate::covering::Facet) -> Face {
    let g = &p.graph;
    let vertices: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| p.contains(facet, v))
        .collect();
    let mut edges: Vec<usize> = g
        .dir_edges()
        .filter(|&e| {
            p.contains(facet, g.source(e))
                && p.contains(facet, g.target(e))
                && p.facet_left_by(e) != facet
        })
        .map(|e| e.edge())
        .collect();
    edges.sort();
    edges.dedup();
    let dim = p.dim() - 1;
    Face {
        vertices,
        edges,
        dim,
        kind: crate::faces::FaceType::Other(dim),
    }
}
