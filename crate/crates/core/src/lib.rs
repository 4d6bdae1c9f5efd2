//! Construction of C^r-continuous piecewise-polynomial (B-spline) bases over
//! planar triangulations, entirely in exact rational arithmetic, plus
//! least-squares fitting of scattered data with the resulting bases.
//!
//! The pipeline: a [`geometry::Triangulation`] in exact rational coordinates,
//! an initial block basis of barycentric monomials per triangle, per-edge
//! constraint matrices of edge-restricted directional derivatives, an exact
//! row-reduction step that yields a change-of-basis matrix, and column merging
//! that bakes each continuity constraint into the basis itself. Fitting then
//! assembles an exact design matrix and solves a minimum-norm least-squares
//! problem.

pub mod continuity;
pub mod demo;
pub mod error;
pub mod fitting;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod polynomial;
pub mod rational;

pub use error::Error;
pub use rational::Rat;
