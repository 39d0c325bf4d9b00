//! Full-rank-agnostic lattices in `Q^n` spanned by finitely many vectors,
//! kept as a Hermite normal form of integer rows over a common denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::rational::common_denominator;
use super::{QVector, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    denominator: BigInt,
    /// Echelon rows with positive pivots; entries above a pivot are reduced
    /// into `[0, pivot)`.
    rows: Vec<Vec<BigInt>>,
}

fn scaled_integers(v: &QVector, d: &BigInt) -> Option<Vec<BigInt>> {
    v.entries()
        .iter()
        .map(|x| {
            let y = x * Rational::from_integer(d.clone());
            y.is_integer().then(|| y.to_integer())
        })
        .collect()
}

fn pivot(row: &[BigInt]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

impl Lattice {
    /// The `Z`-span of `generators`, all of length `dim`.
    pub fn from_generators(dim: usize, generators: &[QVector]) -> Self {
        let denominator = common_denominator(generators.iter().flat_map(|v| v.entries()));
        let mut work: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|v| {
                assert_eq!(v.len(), dim, "generator length");
                scaled_integers(v, &denominator).expect("denominator clears every entry")
            })
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for col in 0..dim {
            loop {
                let active: Vec<usize> = (0..work.len())
                    .filter(|&i| !work[i][col].is_zero())
                    .collect();
                if active.len() <= 1 {
                    break;
                }
                let &best = active.iter().min_by_key(|&&i| work[i][col].abs()).unwrap();
                let p = work[best][col].clone();
                for &i in &active {
                    if i == best {
                        continue;
                    }
                    let q = work[i][col].div_floor(&p);
                    let base = work[best].clone();
                    for (x, b) in work[i].iter_mut().zip(&base) {
                        *x -= &q * b;
                    }
                }
            }
            if let Some(i) = (0..work.len()).find(|&i| !work[i][col].is_zero()) {
                let mut r = work.swap_remove(i);
                if r[col].is_negative() {
                    r.iter_mut().for_each(|x| *x = -x.clone());
                }
                rows.push(r);
            }
            work.retain(|r| r.iter().any(|x| !x.is_zero()));
        }
        // reduce above pivots
        for i in 0..rows.len() {
            let c = pivot(&rows[i]).unwrap();
            let p = rows[i][c].clone();
            let below = rows[i].clone();
            for r in rows.iter_mut().take(i) {
                let q = r[c].div_floor(&p);
                if !q.is_zero() {
                    for (x, b) in r.iter_mut().zip(&below) {
                        *x -= &q * b;
                    }
                }
            }
        }
        Lattice {
            dim,
            denominator,
            rows,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Basis vectors of the lattice.
    pub fn basis(&self) -> Vec<QVector> {
        let d = Rational::from_integer(self.denominator.clone());
        self.rows
            .iter()
            .map(|r| {
                QVector::new(
                    r.iter()
                        .map(|x| Rational::from_integer(x.clone()) / &d)
                        .collect(),
                )
            })
            .collect()
    }

    pub fn contains(&self, v: &QVector) -> bool {
        assert_eq!(v.len(), self.dim, "vector length");
        let Some(mut x) = scaled_integers(v, &self.denominator) else {
            return false;
        };
        for r in &self.rows {
            let c = pivot(r).unwrap();
            let (q, rem) = x[c].div_rem(&r[c]);
            if !rem.is_zero() {
                return false;
            }
            for (a, b) in x.iter_mut().zip(r) {
                *a -= &q * b;
            }
        }
        x.iter().all(Zero::is_zero)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis().iter().all(|v| self.contains(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::ratio;
    use proptest::prelude::*;

    #[test]
    fn index_two_sublattice() {
        let l = Lattice::from_generators(
            2,
            &[QVector::from_i64s(&[2, 0]), QVector::from_i64s(&[1, 1])],
        );
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&QVector::from_i64s(&[0, 2])));
        assert!(!l.contains(&QVector::from_i64s(&[1, 0])));
        let half = Lattice::from_generators(1, &[QVector::new(vec![ratio(1, 2)])]);
        assert!(half.contains(&QVector::new(vec![ratio(3, 2)])));
        assert!(!half.contains(&QVector::new(vec![ratio(1, 3)])));
    }

    proptest! {
        #[test]
        fn generators_and_their_combinations_are_members(
            gens in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 1..5),
            coeffs in prop::collection::vec(-3i64..=3, 5),
        ) {
            let vs: Vec<QVector> = gens.iter().map(|g| QVector::from_i64s(g)).collect();
            let l = Lattice::from_generators(3, &vs);
            let mut sum = vec![0i64; 3];
            for (v, c) in gens.iter().zip(&coeffs) {
                prop_assert!(l.contains(&QVector::from_i64s(v)));
                for i in 0..3 {
                    sum[i] += c * v[i];
                }
            }
            prop_assert!(l.contains(&QVector::from_i64s(&sum)));
            let again = Lattice::from_generators(3, &l.basis());
            prop_assert_eq!(again, l);
        }
    }
}
