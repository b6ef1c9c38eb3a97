//! Simulation and verification toolkit for non-degenerate optical parametric
//! oscillator (NOPO) networks used as Boltzmann samplers of the classical XY
//! model.
//!
//! The crate is organised bottom-up:
//!
//! - [`xy`]: phase configurations, sparse coupling graphs, the XY energy and
//!   its gradient. Generic over the floating-point [`Scalar`].
//! - [`opo`]: single-oscillator physics (three-field equations, adiabatic
//!   elimination, gain saturation, steady-state photon number).
//! - [`network`]: stochastic network simulators at three fidelity levels
//!   (complex field, photon-number/phase split, noisy Kuramoto) and the
//!   deterministic ensemble driver.
//! - [`analytics`]: modified Bessel functions and the transfer-matrix solution
//!   of the XY ring.
//! - [`estimation`]: phase-diffusion fitting, effective-temperature estimation,
//!   sample energies and photon-number diagnostics.
//! - [`mcmc`]: an independent Metropolis sampler and distribution distances.
//! - [`stats`]: goodness-of-fit helpers shared by tests and the CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod analytics;
pub mod error;
pub mod estimation;
pub mod mcmc;
pub mod network;
pub mod opo;
pub mod scalar;
pub mod stats;
pub mod xy;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Phase configuration in double precision.
pub type PhaseConfig = xy::PhaseConfig<f64>;
/// Phase configuration in single precision.
pub type PhaseConfig32 = xy::PhaseConfig<f32>;
/// Coupling graph in double precision.
pub type CouplingGraph = xy::CouplingGraph<f64>;
/// Coupling graph in single precision.
pub type CouplingGraph32 = xy::CouplingGraph<f32>;
/// XY energy in double precision.
pub type Energy = xy::Energy<f64>;
/// Kuramoto parameters in double precision.
pub type KuramotoParams = network::KuramotoParams<f64>;
/// Kuramoto parameters in single precision.
pub type KuramotoParams32 = network::KuramotoParams<f32>;
/// Trajectory record in double precision.
pub type TrajectoryRecord = network::TrajectoryRecord<f64>;
/// Metropolis configuration in double precision.
pub type McmcConfig = mcmc::McmcConfig<f64>;
