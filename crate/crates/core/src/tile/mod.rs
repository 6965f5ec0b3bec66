//! Numeric realization of rectangles as tiles in the unit sphere of `R^4`.

pub mod checks;
pub mod embed;
pub mod foliation;
pub mod geometry;
pub mod harmonic;
pub mod mesh;
pub mod svg;

pub use harmonic::{zeta, zeta_derivative, zeta_inverse, HarmonicTile, Jet};
pub use geometry::{HeightJet, Tile};
