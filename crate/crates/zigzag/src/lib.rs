//! Exact computations with higher zigzag algebras.
//!
//! The crate builds quiver algebras with homogeneous relations over exact fields, forms
//! quadratic duals and twisted trivial extensions, and verifies structural statements about
//! type-A zigzag algebras: presentations, Frobenius forms, Koszulity certificates, dimension
//! formulas, spherical-twist group relations and the longest-element twist.

pub mod algebra;
pub mod complexes;
pub mod corpus;
pub mod error;
pub mod frobenius;
pub mod groups;
pub mod iso;
pub mod koszul;
pub mod linalg;
pub mod mckay;
pub mod quiver;
pub mod scalar;
pub mod twists;
pub mod typea;

pub use algebra::{Algebra, AlgebraMorphism, PathCombo, PresentedAlgebra};
pub use error::{Error, Result};
pub use quiver::{ArrowSpec, Path, Quiver, VertexLabel};
pub use scalar::{Field, Scalar};
