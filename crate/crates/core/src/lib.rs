//! Continuous Castelnuovo–Mumford regularity of semihomogeneous vector
//! bundles on abelian varieties, computed exactly from rational Chern data.
//!
//! Néron–Severi classes are hermitian forms with Gaussian-rational entries.
//! The index of a nondegenerate class is its number of negative
//! eigenvalues; ampleness and nefness are positive (semi)definiteness. On
//! top of that model the crate evaluates
//!
//! ```text
//! rho_eta(gamma) = min { m : for all i in 1..=g,
//!                        gamma + (m - i) eta is degenerate or has index != i }
//! ```
//!
//! which equals the continuous regularity of any semihomogeneous bundle
//! with slope class `gamma = c1(E) / rank(E)`.
//!
//! The math core is generic over [`ExactField`]; the aliases below fix the
//! scalar to `BigRational`.

pub mod bundles;
pub mod catalogs;
pub mod cli;
pub mod error;
pub mod io;
pub mod linalg;
pub mod nsmodel;
pub mod oracle;
pub mod regularity;
pub mod scalar;
pub mod validate;

pub use error::{Error, Result};
pub use scalar::ExactField;

/// Arbitrary-precision rational in canonical form.
pub type Rational = num_rational::BigRational;
pub type GaussianRational = linalg::Gaussian<Rational>;
pub type HermitianClass = linalg::HermitianMatrix<Rational>;
pub type RationalPolynomial = linalg::Polynomial<Rational>;
pub type AbelianModel = nsmodel::AbelianModel<Rational>;
pub type NsClass = nsmodel::NsClass<Rational>;
pub type ChamberReport = nsmodel::ChamberReport<Rational>;
pub type RhoCertificate = regularity::RhoCertificate;
pub type BundleDescriptor = bundles::BundleDescriptor<Rational>;
