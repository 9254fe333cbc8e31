//! Noisy shuffling channel toolkit.
//!
//! A pool of `M` binary (or q-ary) strings of length `L = round(beta * log2 M)`
//! is corrupted symbol by symbol and then shuffled. This crate provides:
//!
//! - [`channel`]: the noise, shuffle and sampling stages with a retained trace,
//! - [`capacity`]: closed-form capacities, bounds and the `(p, beta)` region map,
//! - [`codec`]: the index-based scheme (inner block code + outer Reed-Solomon
//!   code across strings),
//! - [`converse`]: clustering sets, Chernoff events and an exhaustive entropy
//!   oracle that checks the converse inequalities on tiny instances,
//! - [`harness`]: seeded Monte Carlo simulation and parameter sweeps.
//!
//! All logarithms are base 2.

pub mod capacity;
pub mod channel;
pub mod codec;
pub mod converse;
mod error;
pub mod harness;
pub mod info;
mod params;
pub mod pool;
pub mod rng;

pub use capacity::{Region, RegionClass};
pub use channel::{ChannelTrace, DmcSpec};
pub use codec::{CodeSpec, DecodeReport, InnerCode, SlotStatus};
pub use converse::{BoundReport, ClusterSet, TinyInstance};
pub use error::{Error, Result};
pub use harness::SimReport;
pub use params::{index_bits, string_length, ChannelParams};
pub use pool::{Pool, SymbolString};

/// Version tag written into every JSON/CSV report.
pub const SCHEMA_VERSION: u32 = 1;
