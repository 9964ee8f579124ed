//! Proximal averages of the negative Boltzmann–Shannon entropy and the energy
//! `x²/2`, their Fenchel conjugates and derivatives, and solvers for
//! moment-constrained entropy minimization built on top of them.
//!
//! Every closed form routes `W(c·eᵘ)` through [`lambert_w::wexp_scaled`], so
//! evaluation stays finite for small averaging parameters and large arguments
//! where the naive expression overflows.
//!
//! ```
//! use proxavg::averages::{proximal_conjugate, proximal_conjugate_prime};
//!
//! // The proximal average of exp and the energy at λ = 1/2.
//! let v = proximal_conjugate(1.0, 0.5);
//! let slope = proximal_conjugate_prime(-10.0, 0.5);
//! assert!(v.is_finite());
//! assert!(slope < 0.0);
//! ```

pub mod averages;
pub mod error;
pub mod feasibility;
pub mod lambert_w;
pub mod moment;
pub mod quadrature;
pub mod solvers;
pub mod sweep;

pub use averages::{AverageSpec, EndpointMode, ExtendedReal, Family};
pub use error::{Error, Result};
pub use moment::{Generator, MomentProblem};
pub use quadrature::QuadratureRule;
pub use solvers::{Method, SolveResult, SolverConfig};
