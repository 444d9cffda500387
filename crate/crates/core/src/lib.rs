//! Knots and links realized as periodic billiard trajectories in convex
//! right prisms.
//!
//! A quasitoric braid pattern is drawn as a polygonal star `{p/q}`, the
//! star's lines are perturbed to break its symmetry, the perturbed polygon
//! becomes a billiard path in the polygon cut out by its mirrors, and a
//! sawtooth height function lifts it into `D × [0, 1]` with the prescribed
//! crossings. Jones polynomials of the result certify the knot type.

pub mod billiard;
pub mod braid;
pub mod cli;
pub mod error;
pub mod geom;
pub mod height;
pub mod invariants;
pub mod perturb;
pub mod pipeline;
pub mod real;
pub mod star;

pub use braid::{toric_pattern, BraidLetter, QuasitoricPattern, Sign, StrandPermutation};
pub use error::{Error, Result};
pub use pipeline::{realize, Options, Realization};
pub use star::{build_star, StarDiagram};
