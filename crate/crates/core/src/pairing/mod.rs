//! The m = 0 archimedean pairing and the nodal ratio map.

pub mod logsum;
pub mod nodal;
pub mod pair0;

pub use logsum::LogSum;
pub use nodal::{hmap_log_identity, nodal_regulator, pic00_h, CurveConfiguration, Node, Pic00Element};
pub use pair0::{
    nondegeneracy_witness, pair0, projection_check0, reciprocity_check0, ExactComparison, PrecycleCurve,
};
