//! Grand Lorentz quasinorms and their neighbours, evaluated on decreasing
//! rearrangements over the normalized interval `[0, 1]`, together with a
//! harness that checks the embedding, Hölder, O'Neil, Young,
//! Hardy–Littlewood–Sobolev and Köthe-duality inequalities on seeded corpora.
//!
//! Module map:
//!
//! * [`rearrange`]: step functions, geometric grids and decreasing rearrangements.
//! * [`quad`]: log-coordinate quadrature and the one-dimensional ε-optimizer.
//! * [`norms`]: every norm functional, each returning a [`norms::NormResult`].
//! * [`operators`]: convolution on `[0, 1]`, the power-logarithmic Riesz operator.
//! * [`verify`]: corpora, declarative inequality suites, duality checks.
//! * [`cli`]: the `gll` command-line front end and its config format.

pub mod cli;
pub mod error;
pub mod formats;
pub mod norms;
pub mod operators;
pub mod quad;
pub mod rearrange;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use norms::{NormResult, SpaceSpec, Variant};
pub use rearrange::{Descriptor, GeometricGrid, Rearrangement, StepFunction};
pub use report::InequalityReport;
