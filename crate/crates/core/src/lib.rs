//! Numerical toolkit for the discrete eigenspaces of the magnetic Laplacian on the
//! Poincaré disk and the family of Laguerre-kernel integral transforms attached to them.
//!
//! The library is organized around a single parameter pair `(nu, m)`: `nu > 1/2` fixes
//! the strength of the magnetic field, `m` picks one of the finitely many hyperbolic
//! Landau levels `epsilon = 4 m (2 nu - m - 1)`. For each admissible pair it provides
//!
//! * the orthonormal eigenbasis of the level eigenspace inside the weighted space
//!   `L^2(D, (1-|z|^2)^{2 nu - 2} dA)` and its reproducing kernel ([`eigenspace`]),
//! * the half-line carrier basis and the coherent-state wave functions in both their
//!   series and closed forms ([`coherent`]),
//! * Gauss rules on the half-line and on the disk tailored to those integrands
//!   ([`quadrature`]),
//! * the unitary transform from `L^2((0,inf), dxi/xi)` onto the eigenspace, its
//!   adjoint reconstruction, and finite-difference verifiers ([`transform`]),
//! * a named-check verification suite driving all of the above ([`verify`]).
//!
//! Everything is plain `f64`/`Complex64` arithmetic; ratios of Gamma functions are
//! evaluated in log space throughout so that levels up to `nu ~ 50` and basis indices
//! up to a few hundred stay in range.
//!
//! ```
//! use hyperlandau::{
//!     bargmann_transform_at, big_phi, Complex64, DiskPoint, ModelParams, RadialFunction,
//! };
//!
//! // the first excited level at nu = 3.5 has eigenvalue 4 * (7 - 2) = 20
//! let params = ModelParams::new(3.5, 1)?;
//! assert_eq!(params.epsilon(), 20.0);
//!
//! // transforming a carrier basis element lands on the matching eigenfunction
//! let z = DiskPoint::new(Complex64::new(0.3, -0.4))?;
//! let input = RadialFunction::psi(&params, 2);
//! let w = bargmann_transform_at(&params, &input, &[z], 64)?[0];
//! assert!((w - big_phi(&params, 2, &z)?).norm() < 1e-10);
//! # Ok::<(), hyperlandau::Error>(())
//! ```

// `!(x > 0.0)` and friends are used on purpose: the negation also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::manual_is_multiple_of)]

pub mod coherent;
pub mod eigenspace;
pub mod grid;
pub mod params;
pub mod quadrature;
pub mod specfun;
pub mod transform;
pub mod verify;

pub use num_complex::Complex64;

pub use coherent::{
    coherent_closed, coherent_series, psi_basis, DecayTag, RadialFunction, SeriesValue,
    TruncationSpec,
};
pub use eigenspace::{big_phi, big_phi_alt, kernel, kernel_diag, phi, rho, DiskPoint};
pub use grid::{GridField, PolarGrid};
pub use params::{max_level, ModelParams};
pub use quadrature::{DiskRule, HalfLineRule};
pub use transform::{
    adjoint_reconstruct, bargmann_transform, bargmann_transform_at, eigen_residual,
    isometry_check, second_bargmann, second_bargmann_at, EigenResidualReport, IsometryReport,
    TransformRequest,
};

/// Error type shared by the whole crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("nu must be a finite real greater than 1/2, got {0}")]
    NuOutOfRange(f64),
    #[error("level index out of range: m = {m} but levels require m < nu - 1/2 = {bound}")]
    LevelOutOfRange { m: usize, bound: f64 },
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("point too close to the unit circle: |z| = {modulus} exceeds {limit}")]
    BoundaryProximity { modulus: f64, limit: f64 },
    #[error("hypergeometric pole: denominator parameter {param} vanishes at term {term}")]
    HypergeometricPole { param: f64, term: usize },
    #[error("quadrature rule construction failed (alpha = {alpha}, n = {n}): {reason}")]
    RuleConstruction { alpha: f64, n: usize, reason: String },
    #[error("non-finite sample at quadrature node {index} (x = {node})")]
    NonFiniteSample { index: usize, node: f64 },
    #[error("quadrature not converged at target {index}: order doubling moved the value by {disagreement:e}")]
    QuadratureNonConvergence { index: usize, disagreement: f64 },
    #[error("series not converged after {terms} terms (tail {tail:e} above tolerance {tol:e})")]
    NotConverged { terms: usize, tail: f64, tol: f64 },
    #[error("field grid does not match the quadrature rule layout")]
    GridMismatch,
    #[error("stencil step too small: residual grows from {coarse:e} to {fine:e} when h is halved")]
    StencilStep { coarse: f64, fine: f64 },
    #[error("decay tag inadmissible: {0}")]
    DecayBound(String),
}

pub type Result<T> = std::result::Result<T, Error>;
