//! Computation of Sullivan models for classifying spaces of fibrations.
//!
//! Given the Sullivan minimal model of a simply connected elliptic space X,
//! this crate computes the differential graded Lie algebra of negative-degree
//! derivations of the model, its homology and brackets, the Chevalley-Eilenberg
//! cochain algebra (a Sullivan model of the Dold-Lashof classifying space
//! Baut₁X), the minimal model of that algebra, and diagnostic criteria for
//! (non-)freeness of H*(Baut₁X; Q) and retraction behavior under products
//! with spheres.

pub mod algebra;
pub mod cdga;
pub mod linalg;
pub mod derivation;
pub mod dgl;
pub mod minimal;
pub mod model;

pub use algebra::{Algebra, AlgebraError, Element, GenId, Generator, Monomial, Q};
pub use cdga::{CdgaError, FreeCdga};
