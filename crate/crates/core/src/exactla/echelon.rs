//! Incremental fraction-free row echelon form for sparse integer rows.
//!
//! Rows are reduced against stored pivot rows by cross-multiplication and
//! divided by their content after every step, so entries stay integral and
//! small. Arithmetic starts in `i64` and switches, exactly, to `BigInt` the
//! first time an intermediate value would overflow.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::rational::Rational;

pub type SparseRow = Vec<(usize, BigInt)>;

trait ExactInt: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn neg(&self) -> Self;
    /// `a*x - b*y`, or `None` on overflow.
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn gcd(&self, other: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
    fn is_unit(&self) -> bool;
    fn to_big(&self) -> BigInt;
}

impl ExactInt for i64 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        *self / *d
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ExactInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_unit(&self) -> bool {
        self.magnitude() == &num_bigint::BigUint::from(1u8)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

#[derive(Debug, Clone)]
struct Overflow;

#[derive(Debug, Clone)]
struct Echelon<T> {
    pivots: Vec<Option<Vec<(usize, T)>>>,
    rank: usize,
}

impl<T: ExactInt> Echelon<T> {
    fn new(ncols: usize) -> Self {
        Echelon {
            pivots: vec![None; ncols],
            rank: 0,
        }
    }

    fn normalize(row: &mut [(usize, T)]) {
        if row.is_empty() {
            return;
        }
        if row[0].1.is_negative() {
            for (_, x) in row.iter_mut() {
                *x = x.neg();
            }
        }
        let mut g = row[0].1.clone();
        for (_, x) in row.iter().skip(1) {
            if g.is_unit() {
                break;
            }
            g = g.gcd(x);
        }
        if !g.is_unit() && !g.is_zero() {
            for (_, x) in row.iter_mut() {
                *x = x.div_exact(&g);
            }
        }
    }

    /// `a*row - b*pivot`, dropping zeros.
    fn combine(
        row: &[(usize, T)],
        a: &T,
        pivot: &[(usize, T)],
        b: &T,
    ) -> Result<Vec<(usize, T)>, Overflow> {
        let mut out = Vec::with_capacity(row.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        let zero = T::zero();
        while i < row.len() || j < pivot.len() {
            let ci = row.get(i).map(|e| e.0).unwrap_or(usize::MAX);
            let cj = pivot.get(j).map(|e| e.0).unwrap_or(usize::MAX);
            let value = if ci == cj {
                let v = T::mul_sub(a, &row[i].1, b, &pivot[j].1).ok_or(Overflow)?;
                i += 1;
                j += 1;
                (ci, v)
            } else if ci < cj {
                let v = T::mul_sub(a, &row[i].1, b, &zero).ok_or(Overflow)?;
                i += 1;
                (ci, v)
            } else {
                let v = T::mul_sub(a, &zero, b, &pivot[j].1).ok_or(Overflow)?;
                j += 1;
                (cj, v)
            };
            if !value.1.is_zero() {
                out.push(value);
            }
        }
        Ok(out)
    }

    /// Reduces `row` against the stored pivots until its leading column has no
    /// pivot. Returns the (normalized) remainder, empty if `row` lies in the span.
    fn reduce(&self, mut row: Vec<(usize, T)>) -> Result<Vec<(usize, T)>, Overflow> {
        Self::normalize(&mut row);
        while let Some(&(lead, _)) = row.first() {
            let Some(pivot) = &self.pivots[lead] else {
                break;
            };
            let p = &pivot[0].1;
            let r = &row[0].1;
            let g = p.gcd(r);
            let a = p.div_exact(&g);
            let b = r.div_exact(&g);
            row = Self::combine(&row, &a, pivot, &b)?;
            Self::normalize(&mut row);
        }
        Ok(row)
    }

    fn insert(&mut self, row: Vec<(usize, T)>) -> Result<bool, Overflow> {
        let row = self.reduce(row)?;
        match row.first() {
            None => Ok(false),
            Some(&(lead, _)) => {
                self.pivots[lead] = Some(row);
                self.rank += 1;
                Ok(true)
            }
        }
    }

    fn to_big(&self) -> Echelon<BigInt> {
        Echelon {
            pivots: self
                .pivots
                .iter()
                .map(|p| {
                    p.as_ref()
                        .map(|row| row.iter().map(|(c, x)| (*c, x.to_big())).collect())
                })
                .collect(),
            rank: self.rank,
        }
    }
}

#[derive(Debug, Clone)]
enum State {
    Small(Echelon<i64>),
    Big(Echelon<BigInt>),
}

/// Row echelon form over the integers (equivalently over `Q`) built one row
/// at a time. Column indices are fixed at construction.
#[derive(Debug, Clone)]
pub struct IntEchelon {
    ncols: usize,
    state: State,
}

fn small_row(row: &[(usize, BigInt)]) -> Option<Vec<(usize, i64)>> {
    row.iter()
        .map(|(c, x)| x.to_i64().map(|v| (*c, v)))
        .collect()
}

fn clean(mut row: SparseRow) -> SparseRow {
    row.retain(|(_, x)| !Zero::is_zero(x));
    row.sort_by_key(|e| e.0);
    row
}

impl IntEchelon {
    pub fn new(ncols: usize) -> Self {
        IntEchelon {
            ncols,
            state: State::Small(Echelon::new(ncols)),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        match &self.state {
            State::Small(e) => e.rank,
            State::Big(e) => e.rank,
        }
    }

    fn promote(&mut self) {
        if let State::Small(e) = &self.state {
            self.state = State::Big(e.to_big());
        }
    }

    /// Adds a row; returns `true` if it was independent of the rows so far.
    /// Entries may be given in any order; zero entries are ignored.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = clean(row);
        debug_assert!(row.iter().all(|(c, _)| *c < self.ncols));
        if let State::Small(e) = &mut self.state {
            if let Some(small) = small_row(&row) {
                if let Ok(added) = e.insert(small) {
                    return added;
                }
            }
            self.promote();
        }
        match &mut self.state {
            State::Big(e) => e.insert(row).expect("bigint arithmetic does not overflow"),
            State::Small(_) => unreachable!(),
        }
    }

    pub fn insert_rational(&mut self, row: &[Rational]) -> bool {
        self.insert(integer_row(row))
    }

    /// `true` if `row` lies in the row space.
    pub fn contains(&mut self, row: SparseRow) -> bool {
        let row = clean(row);
        if let State::Small(e) = &self.state {
            if let Some(small) = small_row(&row) {
                if let Ok(rest) = e.reduce(small) {
                    return rest.is_empty();
                }
            }
            self.promote();
        }
        match &self.state {
            State::Big(e) => e.reduce(row).expect("no overflow").is_empty(),
            State::Small(_) => unreachable!(),
        }
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        match &self.state {
            State::Small(e) => pivot_cols(&e.pivots),
            State::Big(e) => pivot_cols(&e.pivots),
        }
    }

    fn big_pivots(&self) -> Vec<(usize, Vec<(usize, BigInt)>)> {
        let to_big = |p: &Vec<Option<Vec<(usize, i64)>>>| {
            p.iter()
                .enumerate()
                .filter_map(|(c, r)| {
                    r.as_ref()
                        .map(|r| (c, r.iter().map(|(j, x)| (*j, BigInt::from(*x))).collect()))
                })
                .collect()
        };
        match &self.state {
            State::Small(e) => to_big(&e.pivots),
            State::Big(e) => e
                .pivots
                .iter()
                .enumerate()
                .filter_map(|(c, r)| r.clone().map(|r| (c, r)))
                .collect(),
        }
    }

    /// Kernel of the row space in echelon parametrization: one vector per
    /// non-pivot column `f`, with a 1 at `f` and 0 at every other non-pivot
    /// column. The result depends only on the row space and column order.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let pivots = self.big_pivots();
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.ncols];
            for (c, _) in &pivots {
                v[*c] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|&c| !pivot_set[c]) {
            let mut x = vec![Rational::zero(); self.ncols];
            x[free] = Rational::from_integer(1.into());
            for (c, row) in pivots.iter().rev() {
                let mut acc = Rational::zero();
                for (j, a) in row.iter().skip(1) {
                    if !x[*j].is_zero() {
                        acc += &x[*j] * Rational::from_integer(a.clone());
                    }
                }
                if !acc.is_zero() {
                    x[*c] = -acc / Rational::from_integer(row[0].1.clone());
                }
            }
            basis.push(x);
        }
        basis
    }
}

fn pivot_cols<T>(p: &[Option<T>]) -> Vec<usize> {
    p.iter()
        .enumerate()
        .filter_map(|(c, r)| r.as_ref().map(|_| c))
        .collect()
}

/// Clears denominators of a dense rational row, giving a sparse integer row
/// with the same span.
pub fn integer_row(row: &[Rational]) -> SparseRow {
    let den = super::rational::common_denominator(row.iter());
    row.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(c, x)| (c, (x * Rational::from_integer(den.clone())).to_integer()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[i64]) -> SparseRow {
        v.iter()
            .enumerate()
            .map(|(c, &x)| (c, BigInt::from(x)))
            .collect()
    }

    #[test]
    fn rank_and_kernel() {
        let mut e = IntEchelon::new(3);
        assert!(e.insert(row(&[1, 2, 3])));
        assert!(!e.insert(row(&[2, 4, 6])));
        assert!(e.insert(row(&[0, 1, 1])));
        assert_eq!(e.rank(), 2);
        let k = e.kernel_basis();
        assert_eq!(k.len(), 1);
        // x + 2y + 3z = 0, y + z = 0, z = 1 -> y = -1, x = -1
        let expect: Vec<Rational> = [-1, -1, 1]
            .iter()
            .map(|&x| Rational::from_integer(x.into()))
            .collect();
        assert_eq!(k[0], expect);
    }

    #[test]
    fn overflow_promotes_to_bigint() {
        let big = i64::MAX / 3;
        let mut e = IntEchelon::new(2);
        assert!(e.insert(row(&[3, big])));
        assert!(e.insert(row(&[big, 7])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(row(&[1, 1])));
    }
}
