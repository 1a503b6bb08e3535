//! Exact distinguishability dynamics of state pairs under random brickwork
//! circuits with an absorbing-wall representation, plus Monte Carlo
//! cross-checks against explicit state-vector evolution.

pub mod distance;
pub mod error;
pub mod geometry;
pub mod haar;
pub mod markov;
pub mod numeric;
pub mod profiles;
pub mod walk;

pub use error::{Error, Result};
pub use geometry::CircuitGeometry;
