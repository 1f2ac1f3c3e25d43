//! Thermodynamic formalism for finitely generated conformal iterated
//! function systems on the real line.
//!
//! The crate computes, for a family of contractions of an interval with
//! disjoint images:
//!
//! - topological pressure of Hölder potentials by cylinder enumeration,
//! - the Hausdorff dimension of the limit set (root of `P(t*phi) = 0`),
//! - the implicit exchange function `beta_alpha` solving
//!   `P((t - alpha*beta)*phi + beta*psi) = 0`, with its anchor identities,
//! - the dimension of a Gibbs measure from the tangent of `beta_alpha`,
//! - Gibbs cylinder weights and distribution functions (devil's
//!   staircases) with honest truncation bounds,
//! - the Hausdorff dimension of the set where the distribution function
//!   is not `alpha`-Hölder differentiable, together with finite-depth
//!   block-oscillation diagnostics.
//!
//! Start with [`IfsSpec`] to describe a system, pick a potential via
//! [`PotentialSpec`], and use the solvers in [`thermo`] and [`hoelder`].
//! The `examples/` directory walks through every capability; the
//! `stairdim` binary exposes the same computations as batch subcommands.

pub mod cli;
pub mod config;
pub mod error;
pub mod gibbs;
pub mod hoelder;
pub mod ifs;
pub mod oracle;
pub mod settings;
mod sums;
pub mod thermo;

pub use error::{Error, ErrorClass, Result};
pub use gibbs::{DistributionBounds, GibbsModel, GibbsWeights, StaircaseSample, WeightMode};
pub use hoelder::{
    BlockEvent, BlockScan, EmpiricalQuotient, FixedPointData, LambdaReport, OscillationReport,
};
pub use ifs::{
    CodedPoint, CylinderInfo, EncodeResult, IfsSpec, Interval, MapSpec, Tail, Violation, Word,
};
pub use settings::Settings;
pub use thermo::{
    AdmissibilityReport, BetaPoint, DimensionReport, PotentialSpec, PressureEstimate,
};
