//! Sobolev spaces on locally finite weighted graphs.
//!
//! Graphs are stored in compressed adjacency form; scalar and vector fields
//! borrow the graph they live on. The [`inequalities`] module turns the
//! classical Lebesgue and Sobolev inequalities into randomized checks, and
//! [`approximation`] measures how fast finitely supported functions
//! approach a given one.

pub mod approximation;
pub mod error;
pub mod fields;
pub mod generators;
pub mod graph;
pub mod inequalities;
pub mod io;
pub mod numeric;
pub mod operators;
pub mod report;
pub mod sobolev;

pub use error::{Error, Result};
pub use fields::{
    lp_norm, support, vp_inner, vp_norm, Exponent, ExponentSpec, ScalarField, VectorField,
};
pub use graph::{build_graph, Ball, Edge, VertexId, WeightedGraph};
pub use operators::{
    gradient, gradient_norm, iterated_nabla, laplacian, laplacian_power, nabla_sequence,
    p_laplacian, NablaPayload, NablaResult,
};
pub use report::InequalityReport;
pub use sobolev::{sobolev_norm, NormVariant, SobolevNorm};
