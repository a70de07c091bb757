//! Exact linear algebra over rationals and Gaussian rationals: determinants,
//! characteristic polynomials, inertia of hermitian matrices and Sturm
//! root isolation.

mod gaussian;
mod hermitian;
mod matrix;
mod poly;
mod roots;

pub use gaussian::Gaussian;
pub use hermitian::{symmetric_inertia, HermitianMatrix, Inertia};
pub use matrix::{Matrix, Ring};
pub use poly::Polynomial;
pub use roots::{isolate_real_roots, refine_root, refine_to, IsolatedRoot, RootInterval, SturmChain};
