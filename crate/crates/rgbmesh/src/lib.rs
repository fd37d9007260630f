//! Adaptive 2D triangular meshing with red-green-blue refinement and
//! history-free coarsening.
//!
//! The mesh state is nothing but node coordinates and element connectivity;
//! reference edges are implicit between the first two vertices of each
//! element and children are stored at their father's former position. That
//! storage discipline is what lets [`coarsen::coarsen_rgb`] undo refinement
//! layer by layer without a refinement history.
//!
//! All meshes are immutable values; every operation is a pure function
//! returning a new mesh, so values can be shared freely across threads.

pub mod coarsen;
pub mod error;
pub mod experiments;
pub mod io;
pub mod marking;
pub mod mesh;
pub mod quality;
pub mod refine;
pub mod samples;
pub mod svg;
pub mod topology;

pub use error::{MeshError, Result};
pub use mesh::{meshes_equal, BoundaryList, Mesh};
pub use topology::{build_edge_topology, EdgeTopology};
