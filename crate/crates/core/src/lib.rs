//! Archimedean pairings of rationally trivial cycles on rational curves.

pub mod algebra;
pub mod currents;
pub mod divisor;
pub mod error;
pub mod ledger;
pub mod pairing;
pub mod scenario;
pub mod tame;

pub use error::{Error, Result};

pub use algebra::scalar::Qi;
pub type QiPoly = algebra::Polynomial<Qi>;
pub type QiFunction = algebra::RationalFunction<Qi>;
pub type QiPoint = algebra::P1Point<Qi>;
pub type QiMobius = algebra::MobiusMap<Qi>;
pub type QiDivisor = divisor::Divisor<Qi>;
