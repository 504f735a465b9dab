//! Fixed benchmark instances.

use covert_core::harness::{gen_graph, gen_set_system, GraphModel, SetModel};
use covert_core::netdiscovery::Graph;
use covert_core::SetSystem;

/// Planted-cover instance with `n` elements, `m` sets and a cover of size `k`.
pub fn planted(n: usize, m: usize, k: usize) -> SetSystem {
    gen_set_system(
        SetModel::PlantedCover {
            n,
            m,
            k,
            density: 0.02,
        },
        1,
    )
    .expect("valid planted parameters")
    .system
}

/// Small instance that brute force can still enumerate.
pub fn small(m: usize) -> SetSystem {
    gen_set_system(
        SetModel::PlantedCover {
            n: 24,
            m,
            k: 4,
            density: 0.2,
        },
        2,
    )
    .expect("valid planted parameters")
    .system
}

pub fn er_graph(n: usize) -> Graph {
    gen_graph(GraphModel::ErConnected { n, p: 0.3 }, 3).expect("connected graph within budget")
}
