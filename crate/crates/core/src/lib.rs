//! Unit-distance embeddings of small graphs.
//!
//! Graph construction, exact constraint systems with Gröbner-basis
//! feasibility checks, numerical embedding search, and a parameterized
//! ruler-and-compass construction for the Heawood graph with sweep and
//! bisection tooling.

pub mod construct;
pub mod docs;
pub mod embed;
pub mod graph;
pub mod groebner;
pub mod poly;
pub mod svg;
pub mod system;

pub use graph::{catalog, Graph, GraphError};
pub use poly::{Monomial, MonomialOrder, Polynomial, Rational, VarTable};
pub use system::{auto_pin, distance_constraints, saturate_distinctness, ConstraintSystem, Pin};
