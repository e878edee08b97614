//! Combinatorial invariants of hypertoric data: periodic hyperplane
//! arrangements, chamber classes, the Koszul-dual pair of graded quiver
//! algebras attached to a torus embedding, exact polytope cohomology
//! tables, and the monomial tilting-bundle verification.

pub mod intmat;
pub mod linalg;
pub mod lattice;
pub mod arrangement;
pub mod polytope;
pub mod quiver;
pub mod tilting;
pub mod render;
pub mod spec;
pub mod report;
pub mod corpus;
