//! Real currents on curves and the m = 1 pairing by quadrature.

pub mod bivariate;
pub mod forms;
pub mod pair1;
pub mod quadrature;

pub use forms::{d_relation_check, omega_eval, pi_p, r_current_eval, ComplexSample, DRelation, FormSample};
pub use quadrature::{integrate_sphere, integrate_unit_disk, QuadratureOptions, QuadratureResult};
