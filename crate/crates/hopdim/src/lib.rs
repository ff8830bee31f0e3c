//! Resource dimensioning for frequency-hopped packet-repetition protocols
//! under dense persistent interference.
//!
//! A transmitter sends `n` copies of each packet over a frame of
//! `p` frequency channels by `q` time slots while `d` uncoordinated devices
//! hop over the same grid. Under a packet-erasure model a repetition is lost
//! exactly when too many interferers land on its resource unit, and the
//! transmission fails when every repetition is lost. This crate computes the
//! resources and repetition counts needed to push that failure probability
//! below an ultra-reliability target, three ways:
//!
//! - [`analytic`]: closed forms for the failure probability, the required
//!   and minimum resource-unit counts, and the optimal repetition number,
//!   for receivers with no collision resolution and with single-collision
//!   resolution (via the Lambert W lower branch).
//! - [`numerics`]: the Lambert W branches, monotone integer bisection, and
//!   numeric inversion covering any resolution capability.
//! - [`montecarlo`]: a deterministic, parallel frame simulator with exact
//!   brute-force oracles on tiny instances and an empirical
//!   minimum-resource search.
//!
//! Everything is reproducible: simulation randomness comes from
//! [`rng::SplitMix64`] substreams keyed by `(master_seed, sample index)`,
//! so results do not depend on chunking or thread count.

pub mod analytic;
pub mod error;
pub mod grid;
pub mod montecarlo;
pub mod numerics;
pub mod pattern;
pub mod rng;
pub mod types;

pub use error::{Error, Result};
pub use grid::{balanced_factorization, ResourceGrid};
pub use montecarlo::{estimate_failure, exact_failure_bruteforce, search_min_ru, GridSpec, SimJob};
pub use pattern::{enumerate_patterns, sample_pattern, HopPattern};
pub use types::{DimensioningResult, FailureEstimate, Method, SampleMode, ScenarioConfig};
