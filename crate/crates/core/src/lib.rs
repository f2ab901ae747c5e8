//! Numerical toolkit for covariant quantum instruments over finite groups.
//!
//! The crate builds, validates, dilates and simulates quantum instruments
//! that transform covariantly under a finite group acting on both the
//! outcome space and the system Hilbert space. Representations may be
//! ordinary or projective (multiplier-twisted); outcome spaces are left
//! coset spaces `G/H`.
//!
//! Module map:
//!
//! - [`numkernel`]: dense complex linear algebra, Kronecker products,
//!   partial traces, Hermitian diagnostics, Gram-matrix quotients.
//! - [`groups`]: Cayley-table groups, subgroups and coset spaces,
//!   multipliers (2-cocycles) and central extensions.
//! - [`reps`]: unitary and projective representations, intertwiner
//!   spaces, the Duflo-Moore constant, induced imprimitivity systems.
//! - [`instruments`]: the instrument data model (per-outcome Choi
//!   matrices), validation, covariance checks, statistics, twirling.
//! - [`covariant`]: admissible intertwiners `B`, the instruments they
//!   generate, and the bijection with normalized `H`-covariant CP maps.
//! - [`dilation`]: minimal covariant dilations, their uniqueness
//!   unitary, measurement models and outcome sampling.
//! - [`fixtures`]: the builtin catalog of groups, representations and
//!   instruments used by the CLI and the test suites.
//! - [`cli`]: job configuration, dispatch and machine-readable reports.

pub mod cli;
pub mod covariant;
pub mod dilation;
pub mod fixtures;
pub mod groups;
pub mod instruments;
pub mod numkernel;
pub mod reps;

mod error;

pub use error::{Error, Result};
