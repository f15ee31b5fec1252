//! Random knots and links drawn as grid diagrams.
//!
//! The crate is organised around the pieces of a typical experiment:
//!
//! * [`grid`] holds the diagram encodings ([`LinkGrid`], [`KnotLoop`]) and
//!   their geometry.
//! * [`sampler`] draws uniform diagrams and knots from reproducible
//!   [`RandomStream`]s.
//! * [`invariants`] computes component count, crossings, writhe and length.
//! * [`exact`] holds the big-integer and rational combinatorics used to check
//!   Monte Carlo output.
//! * [`enumerate`] walks every diagram of a small grid.
//! * [`stats`] has mergeable moment accumulators and least-squares fits.
//! * [`experiment`] wires the above into deterministic, parallel sweeps.

pub mod enumerate;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod grid;
pub mod invariants;
pub mod perm;
pub mod sampler;
pub mod stats;

pub use error::{GridError, Result};
pub use grid::{Arc, KnotLoop, LinkGrid, Orientation};
pub use invariants::Crossing;
pub use sampler::RandomStream;
pub use stats::{FitResult, SampleSummary};
