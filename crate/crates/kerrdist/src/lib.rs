//! Adversarial signal-space distances for the nondispersive Kerr fiber channel.
//!
//! The per-sample channel `q'(z) = iγ|q|²q + n(z)` on `z ∈ [0, L]` maps an input
//! symbol `q(0)` to an output symbol `q(L)` under a deterministic perturbation
//! `n(z)`. The adversarial distance between two input symbols is the smallest
//! control energy `∫|n|²dz` at which their reachable sets intersect. This crate
//! computes that distance and everything built on top of it:
//!
//! - [`channel`]: forward integration of the state equation, closed-form
//!   noise-free propagation, control energy, and an integrating-factor self-test.
//! - [`bvp`]: the Euler–Lagrange two-point boundary value problems for the
//!   joint (two-trajectory) confusion problem and the single-trajectory
//!   point-to-point minimum effort, solved by damped-Newton shooting with
//!   analytic seed families and γ-continuation.
//! - [`distance`]: closed forms, radial lower bound, constant-envelope upper
//!   bound, the exact distance with decomposition fallback, and the
//!   dimensionless normalization of the problem.
//! - [`approx`]: a fast approximation of the distance from a precomputed
//!   deviation table with bilinear interpolation.
//! - [`constellation`]: max–min-distance constellation design via threshold
//!   graphs and exact maximum cliques, plus greedy refinement for large sizes.
//! - [`stochastic`]: split-step Monte Carlo simulation of the Gaussian-noise
//!   channel, SER under histogram-MAP and minimum-effort decoders, and mutual
//!   information estimation.
//! - [`linear`]: closed-form per-Fourier-mode treatment of linear evolution
//!   equations (e.g. the dispersion-only channel) and waveform distances.
//!
//! Start with the runnable programs under `examples/`; each major capability
//! has one. A thin `kerrdist` binary exposes the same operations as
//! subcommands that read and write CSV/JSON files.

pub mod approx;
pub mod bvp;
pub mod channel;
pub mod constellation;
pub mod distance;
pub mod linear;
pub mod stochastic;

mod error;
mod ode;
mod optim;

pub use channel::{ComplexPoint, ControlSignal, FiberParams, Trajectory};
pub use error::{Error, Result};
