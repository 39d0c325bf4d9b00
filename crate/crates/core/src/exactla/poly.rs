//! Homogeneous polynomials over `Q` and their restriction to hyperplanes.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use super::echelon::{integer_row, SparseRow};
use super::matrix::QMatrix;
use super::rational::{format_rational, Rational};
use super::vector::QVector;

pub type Exponent = Vec<u32>;

/// `C(k + d - 1, k - 1)`, the number of degree-`d` monomials in `k` variables.
pub fn graded_dim(k: usize, d: usize) -> usize {
    if k == 0 {
        return usize::from(d == 0);
    }
    let mut acc: u128 = 1;
    for i in 1..k {
        acc = acc * (d + i) as u128 / i as u128;
    }
    acc as usize
}

/// Degree-`d` monomials in `k` variables, in graded lexicographic order
/// (`x1^d` first).
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    k: usize,
    degree: usize,
    monomials: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

impl MonomialBasis {
    pub fn new(k: usize, degree: usize) -> Self {
        let mut monomials = Vec::with_capacity(graded_dim(k, degree));
        let mut current = vec![0u32; k];
        fill(&mut monomials, &mut current, 0, degree as u32);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        MonomialBasis {
            k,
            degree,
            monomials,
            index,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Exponent] {
        &self.monomials
    }

    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.index.get(e).copied()
    }
}

fn fill(out: &mut Vec<Exponent>, current: &mut Exponent, var: usize, left: u32) {
    let k = current.len();
    if k == 0 {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if var == k - 1 {
        current[var] = left;
        out.push(current.clone());
        current[var] = 0;
        return;
    }
    for a in (0..=left).rev() {
        current[var] = a;
        fill(out, current, var + 1, left - a);
    }
    current[var] = 0;
}

/// Homogeneous polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogPoly {
    num_vars: usize,
    degree: usize,
    coeffs: BTreeMap<Exponent, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("monomial {0:?} does not have {1} variables and degree {2}")]
    BadMonomial(Exponent, usize, usize),
    #[error("polynomials live in different rings or degrees")]
    Mismatch,
    #[error("restriction to the kernel of the zero form")]
    ZeroForm,
}

impl HomogPoly {
    pub fn zero(num_vars: usize, degree: usize) -> Self {
        HomogPoly {
            num_vars,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: Rational) -> Self {
        let mut p = Self::zero(num_vars, 0);
        if !c.is_zero() {
            p.coeffs.insert(vec![0; num_vars], c);
        }
        p
    }

    pub fn from_terms(
        num_vars: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Exponent, Rational)>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(num_vars, degree);
        for (e, c) in terms {
            if e.len() != num_vars || e.iter().sum::<u32>() as usize != degree {
                return Err(PolyError::BadMonomial(e, num_vars, degree));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// The linear form `sum a_i x_i`.
    pub fn linear(a: &QVector) -> Self {
        let k = a.len();
        let mut p = Self::zero(k, 1);
        for i in 0..k {
            let mut e = vec![0; k];
            e[i] = 1;
            p.add_term(e, a[i].clone());
        }
        p
    }

    pub fn from_coefficients(basis: &MonomialBasis, coeffs: &[Rational]) -> Self {
        assert_eq!(coeffs.len(), basis.len(), "coefficient vector length");
        let mut p = Self::zero(basis.num_vars(), basis.degree());
        for (m, c) in basis.monomials().iter().zip(coeffs) {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.coeffs.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficients(&self, basis: &MonomialBasis) -> Vec<Rational> {
        assert_eq!(basis.degree(), self.degree);
        basis
            .monomials()
            .iter()
            .map(|m| self.coefficient(m))
            .collect()
    }

    pub fn add(&self, other: &HomogPoly) -> Result<HomogPoly, PolyError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &HomogPoly) -> Result<HomogPoly, PolyError> {
        self.add(&other.scaled(&-Rational::one()))
    }

    pub fn scaled(&self, c: &Rational) -> HomogPoly {
        let mut out = Self::zero(self.num_vars, self.degree);
        if c.is_zero() {
            return out;
        }
        out.coeffs = self
            .coeffs
            .iter()
            .map(|(e, x)| (e.clone(), x * c))
            .collect();
        out
    }

    pub fn mul(&self, other: &HomogPoly) -> Result<HomogPoly, PolyError> {
        if self.num_vars != other.num_vars {
            return Err(PolyError::Mismatch);
        }
        let mut out = Self::zero(self.num_vars, self.degree + other.degree);
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    fn check_same(&self, other: &HomogPoly) -> Result<(), PolyError> {
        if self.num_vars != other.num_vars || self.degree != other.degree {
            return Err(PolyError::Mismatch);
        }
        Ok(())
    }

    /// Value at a rational point.
    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.num_vars);
        let mut acc = Rational::zero();
        for (e, c) in &self.coeffs {
            let mut t = c.clone();
            for (xi, &a) in x.iter().zip(e) {
                for _ in 0..a {
                    t *= xi;
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `x_i = sum_j sub[i][j] t_j`, giving a polynomial in the `t`.
    pub fn substitute(&self, sub: &[Vec<Rational>], new_vars: usize) -> HomogPoly {
        assert_eq!(sub.len(), self.num_vars);
        let linear: Vec<HomogPoly> = sub
            .iter()
            .map(|row| HomogPoly::linear(&QVector::new(row.clone())))
            .collect();
        let mut out = Self::zero(new_vars, self.degree);
        for (e, c) in &self.coeffs {
            let mut term = HomogPoly::constant(new_vars, c.clone());
            for (i, &a) in e.iter().enumerate() {
                for _ in 0..a {
                    term = term.mul(&linear[i]).expect("same ring");
                }
            }
            for (e, c) in term.coeffs {
                out.add_term(e, c);
            }
        }
        out
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        // highest grlex monomial first
        let mut first = true;
        for (e, c) in self.coeffs.iter().rev() {
            let mut parts = Vec::new();
            for (i, &a) in e.iter().enumerate() {
                match a {
                    0 => {}
                    1 => parts.push(format!("x{}", i + 1)),
                    _ => parts.push(format!("x{}^{}", i + 1, a)),
                }
            }
            let negative = c < &Rational::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            let sign = match (first, negative) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let body = if parts.is_empty() {
                format_rational(&mag)
            } else if mag.is_one() {
                parts.join("*")
            } else {
                format!("{}*{}", format_rational(&mag), parts.join("*"))
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

/// Integer basis of `ker alpha` in echelon parametrization: one vector per
/// free coordinate, scaled to a primitive integer vector.
pub fn kernel_parametrization(alpha: &QVector) -> Result<Vec<QVector>, PolyError> {
    if alpha.is_zero() {
        return Err(PolyError::ZeroForm);
    }
    let m = QMatrix::from_rows(&[alpha.entries().to_vec()]);
    Ok(m.nullspace_basis()
        .into_iter()
        .map(|v| {
            let ints = super::rational::primitive_integer_vector(v.entries());
            QVector::new(ints.into_iter().map(Rational::from_integer).collect())
        })
        .collect())
}

/// The conditions, as linear functionals on degree-`d` coefficient vectors,
/// that a polynomial vanishes on `ker alpha`.
#[derive(Clone, Debug)]
pub struct Restriction {
    /// One functional per degree-`d` monomial in the kernel coordinates.
    pub constraints: Vec<Vec<Rational>>,
}

impl Restriction {
    pub fn satisfied_by(&self, coeffs: &[Rational]) -> bool {
        self.constraints.iter().all(|row| {
            row.iter()
                .zip(coeffs)
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
                .is_zero()
        })
    }

    /// Integer rows spanning the same space of functionals, in reduced
    /// echelon form.
    pub fn integer_rows(&self) -> Vec<SparseRow> {
        if self.constraints.is_empty() {
            return Vec::new();
        }
        let (r, pivots) = QMatrix::from_rows(&self.constraints).rref();
        (0..pivots.len()).map(|i| integer_row(r.row(i))).collect()
    }
}

/// Restriction functionals for degree-`d` polynomials in `alpha.len()`
/// variables.
pub fn restriction_for_degree(alpha: &QVector, d: usize) -> Result<Restriction, PolyError> {
    let k = alpha.len();
    let kernel = kernel_parametrization(alpha)?;
    let sub: Vec<Vec<Rational>> = (0..k)
        .map(|i| kernel.iter().map(|v| v[i].clone()).collect())
        .collect();
    let basis = MonomialBasis::new(k, d);
    let target = MonomialBasis::new(kernel.len(), d);
    let mut constraints = vec![vec![Rational::zero(); basis.len()]; target.len()];
    for (col, m) in basis.monomials().iter().enumerate() {
        let mono =
            HomogPoly::from_terms(k, d, [(m.clone(), Rational::one())]).expect("basis monomial");
        for (e, c) in mono.substitute(&sub, kernel.len()).terms() {
            let row = target.index_of(e).expect("restricted degree is preserved");
            constraints[row][col] = c.clone();
        }
    }
    Ok(Restriction { constraints })
}

/// Restriction functionals for `f`'s ring and degree.
pub fn restrict_to_hyperplane(f: &HomogPoly, alpha: &QVector) -> Result<Restriction, PolyError> {
    if alpha.len() != f.num_vars() {
        return Err(PolyError::Mismatch);
    }
    restriction_for_degree(alpha, f.degree())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rational::rat;
    use proptest::prelude::*;

    fn mono(e: &[u32]) -> HomogPoly {
        let d = e.iter().sum::<u32>() as usize;
        HomogPoly::from_terms(e.len(), d, [(e.to_vec(), rat(1))]).unwrap()
    }

    #[test]
    fn graded_dimensions() {
        assert_eq!(graded_dim(2, 0), 1);
        assert_eq!(graded_dim(2, 3), 4);
        assert_eq!(graded_dim(1, 5), 1);
        assert_eq!(graded_dim(3, 2), 6);
        for k in 1..5 {
            for d in 0..6 {
                assert_eq!(MonomialBasis::new(k, d).len(), graded_dim(k, d));
            }
        }
    }

    #[test]
    fn grlex_order_within_degree() {
        let b = MonomialBasis::new(2, 2);
        assert_eq!(b.monomials(), &[vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn restriction_examples() {
        let alpha = QVector::from_i64s(&[1, 0]);
        let xy = mono(&[1, 1]);
        let r = restrict_to_hyperplane(&xy, &alpha).unwrap();
        let basis = MonomialBasis::new(2, 2);
        assert!(r.satisfied_by(&xy.coefficients(&basis)));
        let yy = mono(&[0, 2]);
        assert!(!r.satisfied_by(&yy.coefficients(&basis)));
        assert!(r.satisfied_by(&HomogPoly::zero(2, 2).coefficients(&basis)));
        assert!(restrict_to_hyperplane(&xy, &QVector::from_i64s(&[0, 0])).is_err());
    }

    #[test]
    fn display() {
        let p = mono(&[2, 0]).sub(&mono(&[1, 1]).scaled(&rat(3))).unwrap();
        assert_eq!(p.to_string(), "x1^2 - 3*x1*x2");
    }

    // Brute-force oracle: change variables so that alpha becomes the first
    // coordinate, then f is divisible by alpha iff no monomial free of the
    // first new coordinate survives.
    fn divisible_by_linear_form(f: &HomogPoly, alpha: &QVector) -> bool {
        let k = alpha.len();
        let pivot = alpha.first_nonzero().unwrap();
        // y_0 = alpha . x, y_i = x_{perm(i)} for the other coordinates
        let others: Vec<usize> = (0..k).filter(|&i| i != pivot).collect();
        // x_pivot = (y_0 - sum_{j != pivot} alpha_j x_j) / alpha_pivot
        let mut sub = vec![vec![Rational::zero(); k]; k];
        let inv = alpha[pivot].recip();
        sub[pivot][0] = inv.clone();
        for (slot, &j) in others.iter().enumerate() {
            sub[j][slot + 1] = Rational::one();
            sub[pivot][slot + 1] = -&alpha[j] * &inv;
        }
        let g = f.substitute(&sub, k);
        let ok = g.terms().all(|(e, _)| e[0] > 0);
        ok
    }

    proptest! {
        #[test]
        fn restriction_matches_division(
            k in 1usize..4,
            d in 0usize..4,
            raw_alpha in proptest::collection::vec(-2i64..3, 3),
            raw_coeffs in proptest::collection::vec(-2i64..3, 20),
            use_multiple in proptest::bool::ANY,
        ) {
            let alpha = QVector::from_i64s(&raw_alpha[..k]);
            prop_assume!(!alpha.is_zero());
            let basis = MonomialBasis::new(k, d);
            let mut f = HomogPoly::from_coefficients(&basis, &raw_coeffs[..basis.len()].iter().map(|&x| rat(x)).collect::<Vec<_>>());
            if use_multiple && d > 0 {
                let lower = MonomialBasis::new(k, d - 1);
                let g = HomogPoly::from_coefficients(&lower, &raw_coeffs[..lower.len()].iter().map(|&x| rat(x)).collect::<Vec<_>>());
                f = g.mul(&HomogPoly::linear(&alpha)).unwrap();
            }
            let r = restrict_to_hyperplane(&f, &alpha).unwrap();
            prop_assert_eq!(r.satisfied_by(&f.coefficients(&basis)), divisible_by_linear_form(&f, &alpha));
        }
    }
}
