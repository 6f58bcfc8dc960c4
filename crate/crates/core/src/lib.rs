//! Numerical laboratory for weighted Lagrange interpolation on
//! orthogonal-polynomial roots and Sinc points, Stenger's indefinite-integral
//! matrices B± assembled by Sinc quadrature, and verification campaigns for
//! the CPC/NPC eigenvalue conjectures, with an operator-calculus layer for
//! indefinite convolution, inverse Laplace transforms, and derivatives.

pub mod error;
pub mod families;
pub mod lagrange;
pub mod linalg;
pub mod scaled;
pub mod sinc;

pub use error::{Error, Result};
