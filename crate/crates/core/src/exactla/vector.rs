use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, rat, serde_vec, Rational};

/// A vector of rationals of fixed ambient rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QVector(Vec<Rational>);

impl QVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        QVector(entries)
    }

    pub fn zeros(len: usize) -> Self {
        QVector(vec![Rational::zero(); len])
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[i] = rat(1);
        v
    }

    pub fn from_i64s(values: &[i64]) -> Self {
        QVector(values.iter().map(|&x| rat(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|x| !x.is_zero())
    }

    pub fn scaled(&self, c: &Rational) -> QVector {
        QVector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        assert_eq!(self.len(), other.len(), "dot product of unequal lengths");
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Representative of the class of `self` in `V / ±1`: the first nonzero
    /// entry is made positive.
    pub fn sign_canonical(&self) -> QVector {
        match self.first_nonzero() {
            Some(i) if self.0[i].is_negative() => -self,
            _ => self.clone(),
        }
    }

    /// `true` if `self == ±other`.
    pub fn eq_up_to_sign(&self, other: &QVector) -> bool {
        self == other || *self == -other
    }
}

impl Index<usize> for QVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Add<&QVector> for &QVector {
    type Output = QVector;
    fn add(self, rhs: &QVector) -> QVector {
        assert_eq!(self.len(), rhs.len(), "vector lengths differ");
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&QVector> for &QVector {
    type Output = QVector;
    fn sub(self, rhs: &QVector) -> QVector {
        assert_eq!(self.len(), rhs.len(), "vector lengths differ");
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &QVector {
    type Output = QVector;
    fn neg(self) -> QVector {
        QVector(self.0.iter().map(|a| -a).collect())
    }
}

impl Neg for QVector {
    type Output = QVector;
    fn neg(self) -> QVector {
        -&self
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", format_rational(x))?;
        }
        write!(f, ")")
    }
}

impl Serialize for QVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde_vec::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for QVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        serde_vec::deserialize(d).map(QVector)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_sign_is_idempotent_and_sign_invariant() {
        let v = QVector::from_i64s(&[0, -2, 3]);
        let c = v.sign_canonical();
        assert_eq!(c, QVector::from_i64s(&[0, 2, -3]));
        assert_eq!(c.sign_canonical(), c);
        assert_eq!((-&v).sign_canonical(), c);
    }

    #[test]
    fn json_form() {
        let v = QVector::new(vec![rat(1), super::super::rational::ratio(-1, 2)]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["1","-1/2"]"#);
        let back: QVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
