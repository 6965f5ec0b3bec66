//! Rectangular diagrams of links and surfaces on the torus.
//!
//! Exact combinatorics (link diagrams, Thurston–Bennequin numbers, framings,
//! surface diagrams, grid moves) over rationals, and a floating-point layer
//! that realizes rectangles as tiles in the unit sphere of `R^4`.

pub mod acceptance;
pub mod error;
pub mod fixtures;
pub mod framing;
pub mod io;
pub mod link;
pub mod linking;
pub mod moves;
pub mod oracles;
pub mod random;
pub mod sidecar;
pub mod surface;
pub mod tile;
pub mod tolerances;
pub mod torus;

pub use error::{Error, Result};
