//! Covert set cover and network discovery.
//!
//! The hidden instance sits behind a [`CovertOracle`] that answers two kinds of
//! queries and meters every call in a [`QueryLedger`]:
//!
//! * a *hitting-set query* on an element returns the indices of all sets
//!   containing it;
//! * a *set query* on an index returns that set's elements.
//!
//! [`pseudo_greedy`] simulates relaxed greedy set cover from random samples of
//! uncovered elements and needs `O(OPT log² N)` queries w.h.p.;
//! [`epsilon_net`] is the weighted-net baseline with a doubling guess on OPT.
//! [`netdiscovery`] maps the layered graph query model onto the same machinery:
//! vertex pairs are elements, vertices are sets.
//!
//! Everything is 1-indexed: elements `1..=n'`, sets `1..=m'`, vertices `1..=n`.

pub mod epsilon_net;
pub mod error;
pub mod harness;
pub mod netdiscovery;
pub mod oracle;
pub mod pseudo_greedy;
pub mod setsystem;

pub use error::{Error, Result};
pub use oracle::{CovertOracle, CovertSource, QueryLedger};
pub use pseudo_greedy::{AlgorithmTrace, CoverResult};
pub use setsystem::{Cover, SetSystem};

/// Seedable generator used for every randomized routine.
pub type Rng = rand_chacha::ChaCha8Rng;

/// Builds the crate's RNG from a 64-bit seed.
pub fn seeded_rng(seed: u64) -> Rng {
    use rand::SeedableRng;
    Rng::seed_from_u64(seed)
}
