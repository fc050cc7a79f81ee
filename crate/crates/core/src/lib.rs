//! Heegaard-Floer homology `HF+` of integral homology spheres that bound
//! negative-definite plumbing trees with at most one bad vertex, computed
//! from characteristic vectors of the intersection lattice, together with a
//! small algebra of graded `Z[U]`-modules and a rank-level solver for surgery
//! exact triangles.

pub mod char_lattice;
pub mod error;
pub mod exact_triangle;
pub mod graded_module;
pub mod hf_plumbing;
pub mod linalg;
pub mod plumbing_graph;

pub use char_lattice::{CharVector, LatticeContext};
pub use error::{Error, Result};
pub use exact_triangle::{
    check_exactness, solve_unknown, Arrow, Constraint, ExactnessReport, Hypothesis, SolveResult, SolveStatus, Term,
    TriangleSpec, Verdict,
};
pub use graded_module::{GradedUModule, Grading, MapKind, ModuleMap};
pub use hf_plumbing::{HfConfig, Orientation, PathCertificate, UElement};
pub use plumbing_graph::{IntersectionForm, PlumbingGraph, ValidationReport};
