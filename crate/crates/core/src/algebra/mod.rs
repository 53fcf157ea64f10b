//! Exact arithmetic over Q(i) and generic fields.

pub mod expr;
pub mod p1;
pub mod poly;
pub mod ratfunc;
pub mod roots;
pub mod scalar;

pub use p1::{cross_ratio, MobiusMap, P1Point};
pub use poly::Polynomial;
pub use ratfunc::{Evaluation, RationalFunction};
pub use scalar::{Field, Gaussian, Qi, RealField};
