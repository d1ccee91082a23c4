//! Cycle packings and cycle factors in randomly perturbed graphs `G ∪ G(n, p)`.
//!
//! Extremal constructions and random generators, an exact packing oracle,
//! stability certificates, constructive packers, layered factor solvers and
//! a Monte Carlo lab. Arithmetic that decides a clause or a boundary is
//! generic over [`scalar::Scalar`] so it can run exactly over rationals.

pub mod cycles;
pub mod generators;
pub mod graph;
pub mod io;
pub mod lab;
pub mod layered;
pub mod lp;
pub mod oracle;
pub mod packer;
pub mod rng;
pub mod scalar;
pub mod stability;

pub use cycles::{verify_packing, Cycle, CyclePacking};
pub use generators::{perturb, ConstructionSpec, PerturbedGraph};
pub use graph::{Graph, VertexId};
pub use scalar::Fraction;

/// Exact scalar used for clause checks and boundaries.
pub type Rational = num_rational::Rational64;
pub type ExactStabilityParams = stability::StabilityParams<Rational>;
pub type StabilityParamsF64 = stability::StabilityParams<f64>;
