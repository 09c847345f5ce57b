//! Numerical laboratory for viscous laminar flow in randomly rough pipes.
//!
//! The crate generates periodized random rough cylinders (Bernoulli radii and
//! Poisson bumps), solves the stationary Stokes and Navier-Stokes systems on
//! grid-exact staircase masks with prescribed flux, computes normalized
//! boundary layers, fits the effective Navier slip model, and provides the
//! error functionals and regression tools used by the verification campaigns
//! (wall-law convergence rates, refined Poiseuille law, Saint-Venant decay,
//! correlation decay, concentration of fluctuations).
//!
//! Core numerics are generic over the floating-point scalar through
//! [`Scalar`]; concrete `f64` aliases are exported at the crate root.

pub mod bl;
pub mod effective;
pub mod error;
pub mod geometry;
pub mod scalar;
pub mod solver;
pub mod verify;

pub use error::Error;
pub use scalar::Scalar;

pub type Result<T> = std::result::Result<T, Error>;

/// `f64` instantiations used by the CLI and most tests.
pub type SolverConfig64 = solver::SolverConfig<f64>;
pub type FlowSolution64 = solver::FlowSolution<f64>;
pub type StaggeredFlowField64 = solver::StaggeredFlowField<f64>;
pub type BoundaryLayerField64 = bl::BoundaryLayerField<f64>;
pub type EffectiveModel64 = effective::EffectiveModel<f64>;
pub type NavierApprox64 = effective::NavierApprox<f64>;

