//! Seeded random walks on the locally free group and semigroup.
//!
//! Each step right-multiplies by a uniformly chosen letter (`2n` choices
//! with inverses, `n` without). In the semigroup the heap is a ballistic
//! deposition surface; in the group a letter can also remove a roof cell.

pub mod engine;
pub mod estimators;
pub mod report;
pub mod rng;
pub mod roof_chain;

pub use engine::{run_trial, run_walk, SnapshotRow, Surface, WalkMode, WalkParams, WalkRun, WalkStats};
pub use estimators::{
    alpha_estimate, drift_estimate, entropy_estimate, heap_profile_stats, reduction_check, roof_density_estimate,
    roof_drift_by_size, roof_fluctuation, Estimate, HeapProfile,
};
pub use report::{snapshot_csv, WalkReport};
pub use rng::LetterStream;
pub use roof_chain::{
    roof_chain_step, roof_chain_step_signed, roof_support_enumerate, simulate_roof_chain, Boundary, RoofChainStats,
    RoofSupportCount,
};
