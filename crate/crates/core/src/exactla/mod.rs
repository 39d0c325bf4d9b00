//! Exact rational linear algebra and graded polynomials.

pub mod echelon;
pub mod lattice;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod vector;

pub use echelon::{IntEchelon, SparseRow};
pub use lattice::Lattice;
pub use matrix::QMatrix;
pub use poly::{
    graded_dim, restrict_to_hyperplane, HomogPoly, MonomialBasis, PolyError, Restriction,
};
pub use rational::{parse_rational, rat, ratio, Rational};
pub use vector::QVector;
