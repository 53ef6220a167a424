//! Exact symbolic engine for Z₃-graded exterior algebras: rewriting to normal form,
//! Hopf structure maps, differential calculi on the graded plane, the Grassmann-Weyl
//! algebra, the R̂-matrix and the quadratic enveloping algebra, with verifiers that
//! check the stated identities exactly.

pub mod calculus;
pub mod catalog;
pub mod cli;
pub mod engine;
pub mod hopf;
pub mod rmatrix;
pub mod scalar;
pub mod weyl;

pub use cli::report::{Check, Report, Status};
pub use engine::{Element, Grade, Presentation, Word};
pub use scalar::Scalar;
