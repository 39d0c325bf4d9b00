//! Rational cohomology of generalized Bott towers: iterated projective
//! bundles `P(L_0 ⊕ … ⊕ L_n) → B` with `H*(P) = H*(B)[x] / (∏ (x + c₁(L_l)))`.

use serde::{Deserialize, Serialize};

use crate::exactla::poly::Exponent;
use crate::exactla::{rat, HomogPoly, QVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BottError {
    #[error("tower has no stages")]
    Empty,
    #[error("stage {stage}: fiber dimension must be at least 1")]
    ZeroFiber { stage: usize },
    #[error("stage {stage}: expected {expected} line bundles, got {got}")]
    BundleCount {
        stage: usize,
        expected: usize,
        got: usize,
    },
    #[error("stage {stage}: a bundle class uses {got} generators but only {allowed} precede it")]
    ForwardReference {
        stage: usize,
        allowed: usize,
        got: usize,
    },
    #[error("polynomial has {got} variables, the tower has {expected}")]
    WrongRing { expected: usize, got: usize },
}

/// One stage: fiber `CP^n` and the first Chern classes of its `n + 1` line
/// bundles as integer combinations of the earlier generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BottStage {
    pub n: usize,
    pub bundles: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BottTowerSpec {
    pub stages: Vec<BottStage>,
}

impl BottTowerSpec {
    /// Stages with trivial bundles, i.e. `CP^{n_1} × … × CP^{n_r}`.
    pub fn trivial(dims: &[usize]) -> Self {
        BottTowerSpec {
            stages: dims
                .iter()
                .map(|&n| BottStage {
                    n,
                    bundles: vec![Vec::new(); n + 1],
                })
                .collect(),
        }
    }
}

/// The presented ring `Q[x_1, …, x_r] / (f_1, …, f_r)`, `f_j` monic of degree
/// `n_j + 1` in `x_j` with lower coefficients in earlier generators.
#[derive(Debug, Clone)]
pub struct BottTower {
    dims: Vec<usize>,
    relations: Vec<HomogPoly>,
}

impl BottTower {
    pub fn new(spec: &BottTowerSpec) -> Result<Self, BottError> {
        if spec.stages.is_empty() {
            return Err(BottError::Empty);
        }
        let r = spec.stages.len();
        let mut relations = Vec::with_capacity(r);
        for (j, stage) in spec.stages.iter().enumerate() {
            if stage.n == 0 {
                return Err(BottError::ZeroFiber { stage: j });
            }
            if stage.bundles.len() != stage.n + 1 {
                return Err(BottError::BundleCount {
                    stage: j,
                    expected: stage.n + 1,
                    got: stage.bundles.len(),
                });
            }
            let mut f = HomogPoly::constant(r, rat(1));
            for bundle in &stage.bundles {
                if bundle.len() > j {
                    return Err(BottError::ForwardReference {
                        stage: j,
                        allowed: j,
                        got: bundle.len(),
                    });
                }
                let mut form = vec![rat(0); r];
                for (i, &c) in bundle.iter().enumerate() {
                    form[i] = rat(c);
                }
                form[j] = rat(1);
                f = f
                    .mul(&HomogPoly::linear(&QVector::new(form)))
                    .expect("same ring");
            }
            relations.push(f);
        }
        Ok(BottTower {
            dims: spec.stages.iter().map(|s| s.n).collect(),
            relations,
        })
    }

    pub fn generators(&self) -> usize {
        self.dims.len()
    }

    pub fn dimension(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn relations(&self) -> &[HomogPoly] {
        &self.relations
    }

    /// Coefficients of `∏_j (1 + t + … + t^{n_j})`.
    pub fn betti(&self) -> Vec<usize> {
        let mut p = vec![1usize];
        for &n in &self.dims {
            let mut next = vec![0; p.len() + n];
            for (i, &a) in p.iter().enumerate() {
                for x in &mut next[i..=i + n] {
                    *x += a;
                }
            }
            p = next;
        }
        p
    }

    /// Standard monomials of degree `d`: exponent of `x_j` at most `n_j`.
    pub fn basis(&self, d: usize) -> Vec<Exponent> {
        fn go(dims: &[usize], left: usize, acc: &mut Exponent, out: &mut Vec<Exponent>) {
            match dims.split_first() {
                None => {
                    if left == 0 {
                        out.push(acc.clone());
                    }
                }
                Some((&n, rest)) => {
                    for a in 0..=n.min(left) {
                        acc.push(a as u32);
                        go(rest, left - a, acc, out);
                        acc.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(&self.dims, d, &mut Vec::new(), &mut out);
        out
    }

    pub fn generator(&self, j: usize) -> HomogPoly {
        HomogPoly::linear(&QVector::unit(self.generators(), j))
    }

    /// Normal form: any `x_j^{n_j+1}` is rewritten by `f_j`, last stage first.
    /// Rewriting `x_j` only introduces earlier generators, so one pass per
    /// stage in decreasing order suffices.
    pub fn normal_form(&self, p: &HomogPoly) -> Result<HomogPoly, BottError> {
        let r = self.generators();
        if p.num_vars() != r {
            return Err(BottError::WrongRing {
                expected: r,
                got: p.num_vars(),
            });
        }
        let mut p = p.clone();
        for j in (0..r).rev() {
            let top = self.dims[j] as u32 + 1;
            // x_j^{top} ≡ x_j^{top} − f_j
            let mut lead = vec![0; r];
            lead[j] = top;
            let tail = HomogPoly::from_terms(r, top as usize, [(lead, rat(1))])
                .expect("monomial")
                .sub(&self.relations[j])
                .expect("same degree");
            loop {
                let next = p
                    .terms()
                    .find(|(e, _)| e[j] >= top)
                    .map(|(e, c)| (e.clone(), c.clone()));
                let Some((e, c)) = next else { break };
                let mut rest = e.clone();
                rest[j] -= top;
                let deg = rest.iter().sum::<u32>() as usize;
                let m = HomogPoly::from_terms(r, deg, [(rest, c.clone())]).expect("monomial");
                let term = HomogPoly::from_terms(r, p.degree(), [(e, c)]).expect("monomial");
                p = p
                    .sub(&term)
                    .and_then(|q| q.add(&m.mul(&tail)?))
                    .expect("same degree");
            }
        }
        Ok(p)
    }

    pub fn multiply(&self, a: &HomogPoly, b: &HomogPoly) -> Result<HomogPoly, BottError> {
        let prod = a.mul(b).map_err(|_| BottError::WrongRing {
            expected: self.generators(),
            got: b.num_vars(),
        })?;
        self.normal_form(&prod)
    }

    pub fn is_zero(&self, p: &HomogPoly) -> Result<bool, BottError> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// Coefficients of the normal form of `p` on [`Self::basis`].
    pub fn coordinates(&self, p: &HomogPoly) -> Result<Vec<Rational>, BottError> {
        let nf = self.normal_form(p)?;
        Ok(self
            .basis(p.degree())
            .iter()
            .map(|m| nf.coefficient(m))
            .collect())
    }
}
