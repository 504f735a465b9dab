//! Seeded graph and set-system generators.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netdiscovery::Graph;
use crate::seeded_rng;
use crate::setsystem::SetSystem;

/// Resampling budget for connected Erdős–Rényi graphs.
pub const ER_RETRY_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum GraphModel {
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    Complete {
        n: usize,
    },
    /// Centre is vertex 1.
    Star {
        n: usize,
    },
    /// G(n, p) conditioned on connectivity by rejection.
    ErConnected {
        n: usize,
        p: f64,
    },
    /// Vertex `(r, c)` is `r * cols + c + 1`.
    Grid {
        rows: usize,
        cols: usize,
    },
}

pub fn gen_graph(model: GraphModel, seed: u64) -> Result<Graph> {
    let bad = |msg: &str| Err(Error::InvalidParameter(msg.to_owned()));
    match model {
        GraphModel::Path { n } => {
            let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
            Graph::new(n, &edges)
        }
        GraphModel::Cycle { n } => {
            if n < 3 {
                return bad("cycle needs n >= 3");
            }
            let mut edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
            edges.push((1, n));
            Graph::new(n, &edges)
        }
        GraphModel::Complete { n } => {
            let edges: Vec<_> = (1..=n)
                .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
                .collect();
            Graph::new(n, &edges)
        }
        GraphModel::Star { n } => {
            let edges: Vec<_> = (2..=n).map(|v| (1, v)).collect();
            Graph::new(n, &edges)
        }
        GraphModel::Grid { rows, cols } => {
            if rows == 0 || cols == 0 {
                return bad("grid needs rows, cols >= 1");
            }
            let id = |r: usize, c: usize| r * cols + c + 1;
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        edges.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < rows {
                        edges.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            Graph::new(rows * cols, &edges)
        }
        GraphModel::ErConnected { n, p } => {
            if n == 0 || !(0.0..=1.0).contains(&p) {
                return bad("er-connected needs n >= 1 and p in [0, 1]");
            }
            let mut rng = seeded_rng(seed);
            for _ in 0..ER_RETRY_BUDGET {
                let mut edges = Vec::new();
                for u in 1..=n {
                    for v in u + 1..=n {
                        if rng.gen_bool(p) {
                            edges.push((u, v));
                        }
                    }
                }
                match Graph::new(n, &edges) {
                    Ok(g) => return Ok(g),
                    Err(Error::Disconnected(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
            Err(Error::RetryBudgetExhausted {
                attempts: ER_RETRY_BUDGET,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum SetModel {
    /// Every element joins every set independently with probability `density`.
    UniformRandom { n: usize, m: usize, density: f64 },
    /// A random partition of the universe into `k` near-equal blocks placed at
    /// random indices, plus `m - k` noise sets of the given density.
    PlantedCover {
        n: usize,
        m: usize,
        k: usize,
        density: f64,
    },
    /// Set `j` has about `n / 2^(j mod levels)` random elements.
    Skewed { n: usize, m: usize },
}

/// A generated instance and what the generator knows about it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedSystem {
    pub system: SetSystem,
    /// Indices of the planted cover, when there is one.
    pub planted: Option<Vec<usize>>,
    pub coverable: bool,
}

pub fn gen_set_system(model: SetModel, seed: u64) -> Result<GeneratedSystem> {
    let mut rng = seeded_rng(seed);
    let bad = |msg: String| Err(Error::InvalidParameter(msg));
    let (sets, n, planted) = match model {
        SetModel::UniformRandom { n, m, density } => {
            if n == 0 || m == 0 || !(0.0..=1.0).contains(&density) {
                return bad(format!(
                    "uniform-random needs n, m >= 1, density in [0, 1]; got {model:?}"
                ));
            }
            let sets = (0..m)
                .map(|_| (1..=n).filter(|_| rng.gen_bool(density)).collect())
                .collect();
            (sets, n, None)
        }
        SetModel::PlantedCover { n, m, k, density } => {
            if k == 0 || k > m || k > n || !(0.0..=1.0).contains(&density) {
                return bad(format!(
                    "planted-cover needs 1 <= k <= min(n, m); got {model:?}"
                ));
            }
            let mut elements: Vec<usize> = (1..=n).collect();
            elements.shuffle(&mut rng);
            let mut positions: Vec<usize> = (0..m).collect();
            positions.shuffle(&mut rng);
            let mut plant_at = positions[..k].to_vec();
            plant_at.sort_unstable();
            let mut sets: Vec<Vec<usize>> = vec![Vec::new(); m];
            let mut start = 0;
            for (b, &pos) in plant_at.iter().enumerate() {
                let len = n / k + usize::from(b < n % k);
                sets[pos] = elements[start..start + len].to_vec();
                start += len;
            }
            for &pos in &positions[k..] {
                sets[pos] = (1..=n).filter(|_| rng.gen_bool(density)).collect();
            }
            (sets, n, Some(plant_at.iter().map(|p| p + 1).collect()))
        }
        SetModel::Skewed { n, m } => {
            if n == 0 || m == 0 {
                return bad(format!("skewed needs n, m >= 1; got {model:?}"));
            }
            let levels = (usize::BITS - n.leading_zeros()) as usize;
            let sets = (0..m)
                .map(|j| {
                    let size = (n >> (j % levels)).max(1);
                    let mut pool: Vec<usize> = (1..=n).collect();
                    pool.shuffle(&mut rng);
                    pool.truncate(size);
                    pool
                })
                .collect();
            (sets, n, None)
        }
    };
    let system = SetSystem::new(sets, n)?;
    let coverable = system.is_coverable();
    Ok(GeneratedSystem {
        system,
        planted,
        coverable,
    })
}
