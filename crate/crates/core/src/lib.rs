//! Partial cubes and median graphs: Djoković–Winkler classes, crossing
//! graphs, median closure, and the cube and clique polynomials that relate
//! them.
//!
//! ```
//! use partial_cubes::{counting, generators};
//!
//! let g = generators::even_cycle(3).unwrap();
//! let report = counting::verify_theorem(&g).unwrap();
//! assert_eq!(report.leq_holds, Some(true));
//! assert_eq!(report.equality, Some(false));
//! ```

pub mod bitset;
pub mod checks;
pub mod closure;
pub mod counting;
pub mod crossing;
pub mod error;
pub mod generators;
pub mod graph;
pub mod median;
pub mod metric;
pub mod polynomial;
pub mod theta;

#[cfg(test)]
mod testutil;

pub use bitset::{BitSet, Label, VertexSet};
pub use error::{Error, Result};
pub use graph::{EdgeId, Graph, VertexId};
pub use metric::DistanceMatrix;
pub use polynomial::Polynomial;
pub use theta::{ClassId, PartialCube};
