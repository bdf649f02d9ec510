//! Locally free groups and semigroups: heaps, exact counts, random walks,
//! brute-force oracles and braid-group bounds.

pub mod braid;
pub mod counting;
pub mod error;
pub mod heap;
pub mod numfmt;
pub mod oracle;
pub mod walk;

pub use counting::CountVariant;
pub use error::{Error, Result};
pub use heap::{ColoredHeap, HeapMode, Letter, NormalWord, RoofSet, Sign};
pub use walk::{WalkMode, WalkParams};
