//! Stress-plus-X graph layout.
//!
//! Layouts are computed by jointly minimizing stress and a sum of penalty
//! terms ("X"): edge crossings, small crossing angles, and violated upward
//! constraints on directed edges. Each outer iteration first solves a tiny
//! linear program per independent edge pair to find the separating line
//! certificate, then takes a gradient step on the vertex coordinates with
//! those certificates frozen.
//!
//! The crate is organized bottom-up:
//!
//! - [`graph`]: graph model, hop distances, predicates, corpus generators
//! - [`geometry`]: segment predicates, crossing angles, bounding boxes
//! - [`stress`]: stress, its gradient, and a majorization solver
//! - [`simplex`]: dense tableau simplex used by the separator LP
//! - [`penalties`]: separator LP, crossing/angle penalties and subgradients
//! - [`optimizer`]: the two-phase loop, GD variants, initializers, sweeps
//! - [`metrics`]: readability metrics
//! - [`io`]: graph/layout files, SVG rendering
//! - [`cli`]: the `spx` command-line tool

pub mod cli;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod layout;
pub mod metrics;
pub mod optimizer;
pub mod penalties;
pub mod rng;
pub mod simplex;
pub mod stress;

pub use error::{Result, SpxError};
pub use graph::{DistanceMatrix, Edge, Graph};
pub use layout::Layout;
