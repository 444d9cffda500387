//! Knot invariants used to certify the constructed trajectories.

pub mod bracket;
pub mod certify;
pub mod pd;
pub mod poly;
pub mod skein;

pub use bracket::{jones, jones_of, kauffman_bracket};
pub use certify::{certify, closure_diagram, extract_gauss, extract_pd, first_over_from_signs, trajectory_diagram, CertifyReport};
pub use pd::{GaussVisit, PdCode, SignedGauss};
pub use poly::{JonesPolynomial, LaurentPolynomial};
pub use skein::skein_bracket;
