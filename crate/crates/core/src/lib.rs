pub mod borel_core;
pub mod certificates;
pub mod coefficients;
pub mod convolution;
pub mod error;
pub mod norm_suite;
pub mod oracles;
pub mod quadrature;
pub mod solver;
pub mod special;
pub mod transforms;
pub mod validation;

pub use borel_core::{eval_at, make_grid, nu_norm, BorelFunction, NormReport, RayGrid, TimeGrid};
pub use certificates::{Certificate, CertificateModel, Constants};
pub use coefficients::{CoefficientSet, Ex3Table, ExampleId};
pub use error::{BorelError, Result};
pub use num_complex::Complex64;
pub use oracles::{SimilarityExample, SimilarityProfile};
pub use solver::{picard_solve, Example, PhysicalPoint, Problem, ProblemSpec, SolveResult};
