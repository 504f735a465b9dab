//! Weighted ε-net set cover with multiplicative reweighting, and a doubling
//! guess on the optimum size `k`.
//!
//! For a guess `k` the net is drawn with `ε = 1/(α k)`: `⌈α k · ln m' · c_net⌉`
//! weighted picks with replacement. If the net misses some element `x`, every
//! set containing `x` has its weight doubled. After `⌈c_iter · k · log₂(m'/k + 2)⌉`
//! misses the guess doubles.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use rand::distributions::{Distribution, WeightedIndex};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{CovertSource, QueryCounts};
use crate::pseudo_greedy::{AlgorithmTrace, CoverResult};
use crate::{seeded_rng, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsNetConfig {
    /// `α` in `ε = 1/(α k)`.
    pub alpha_net: f64,
    /// Constant in the net size.
    pub c_net: f64,
    /// Constant in the per-guess iteration cap.
    pub c_iter: f64,
    /// Reset all weights to 1 whenever the guess doubles.
    pub reset_weights: bool,
    /// Keep learnt set contents for the whole run, so each set is queried at
    /// most once. When off, every drawn net is verified with one set query
    /// per distinct member.
    pub cache_contents: bool,
}

impl Default for EpsNetConfig {
    fn default() -> Self {
        Self {
            alpha_net: 2.0,
            c_net: 4.0,
            c_iter: 4.0,
            reset_weights: true,
            cache_contents: false,
        }
    }
}

impl EpsNetConfig {
    pub fn net_size(&self, k: usize, num_sets: usize) -> usize {
        let raw = self.alpha_net * k as f64 * (num_sets as f64).ln() * self.c_net;
        (raw.ceil() as usize).max(1)
    }

    pub fn iteration_cap(&self, k: usize, num_sets: usize) -> usize {
        let raw = self.c_iter * k as f64 * (num_sets as f64 / k as f64 + 2.0).log2();
        (raw.ceil() as usize).max(1)
    }
}

/// Per-set weights, each a power of two, stored as exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedFamily {
    exponents: Vec<u32>,
}

impl WeightedFamily {
    /// `num_sets` unit weights.
    pub fn new(num_sets: usize) -> Self {
        Self {
            exponents: vec![0; num_sets],
        }
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Self { exponents }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Weight of set `index` (1-based).
    pub fn weight(&self, index: usize) -> f64 {
        2f64.powi(self.exponents[index - 1] as i32)
    }

    pub fn weights(&self) -> Vec<f64> {
        (1..=self.len()).map(|i| self.weight(i)).collect()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights().iter().sum()
    }

    pub fn double(&mut self, index: usize) {
        self.exponents[index - 1] += 1;
    }

    pub fn reset(&mut self) {
        self.exponents.iter_mut().for_each(|e| *e = 0);
    }

    /// Weights scaled so the heaviest is 1, for sampling without overflow.
    fn relative(&self) -> Vec<f64> {
        let top = self.exponents.iter().copied().max().unwrap_or(0);
        self.exponents
            .iter()
            .map(|&e| 2f64.powi(e as i32 - top as i32))
            .collect()
    }
}

/// `size` independent picks proportional to weight; distinct indices, ascending.
pub fn sample_weighted_net(weights: &WeightedFamily, size: usize, rng: &mut Rng) -> Vec<usize> {
    let dist = WeightedIndex::new(weights.relative()).expect("heaviest set has weight 1");
    let mut picked = vec![false; weights.len()];
    for _ in 0..size {
        picked[dist.sample(rng)] = true;
    }
    picked
        .iter()
        .enumerate()
        .filter_map(|(i, &p)| p.then_some(i + 1))
        .collect()
}

/// Doubles the weight of every set containing the missed element `x`,
/// learnt with one hitting query.
pub fn reweight_on_miss<O: CovertSource>(
    weights: &mut WeightedFamily,
    x: usize,
    oracle: &mut O,
) -> Result<()> {
    let containing = oracle.hitting_query(x)?;
    if containing.is_empty() {
        return Err(Error::Uncoverable { element: x });
    }
    for s in containing {
        weights.double(s);
    }
    Ok(())
}

/// Smallest element not covered by `candidate`, using already-learnt contents.
///
/// # Panics
/// If some candidate's contents are missing from `known`.
pub fn find_uncovered(
    candidate: &[usize],
    known: &HashMap<usize, Vec<usize>>,
    universe_size: usize,
) -> Option<usize> {
    let mut mark = vec![false; universe_size + 1];
    for s in candidate {
        for &e in &known[s] {
            mark[e] = true;
        }
    }
    (1..=universe_size).find(|&e| !mark[e])
}

/// One guess of the doubling schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuessTrace {
    pub k: usize,
    pub net_size: usize,
    pub iteration_cap: usize,
    /// Nets drawn under this guess.
    pub iterations: usize,
    pub succeeded: bool,
    pub ledger_delta: QueryCounts,
}

/// Guesses `k = 1, 2, 4, ...` (the last one clipped to `m'`).
pub fn run_weighted_epsilon_net<O: CovertSource>(
    oracle: &mut O,
    config: &EpsNetConfig,
    seed: u64,
) -> Result<CoverResult> {
    for (name, v) in [
        ("alpha_net", config.alpha_net),
        ("c_net", config.c_net),
        ("c_iter", config.c_iter),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{name} must be positive, got {v}"
            )));
        }
    }
    let mut rng = seeded_rng(seed);
    let n = oracle.universe_size();
    let m = oracle.num_sets();
    let mut weights = WeightedFamily::new(m);
    let mut known: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut guesses = Vec::new();
    let mut last_miss = None;

    let mut k = 1usize;
    loop {
        let k_eff = k.min(m);
        oracle.mark_phase(&format!("guess-{k_eff}"));
        let before = oracle.ledger().counts();
        if config.reset_weights {
            weights.reset();
        }
        let net_size = config.net_size(k_eff, m);
        let cap = config.iteration_cap(k_eff, m);
        let mut trace = GuessTrace {
            k: k_eff,
            net_size,
            iteration_cap: cap,
            iterations: 0,
            succeeded: false,
            ledger_delta: QueryCounts::default(),
        };
        let mut found = None;
        while trace.iterations < cap {
            trace.iterations += 1;
            let net = sample_weighted_net(&weights, net_size, &mut rng);
            if !config.cache_contents {
                known.clear();
            }
            for &s in &net {
                if let Entry::Vacant(slot) = known.entry(s) {
                    slot.insert(oracle.set_query(s)?);
                }
            }
            match find_uncovered(&net, &known, n) {
                None => {
                    found = Some(net);
                    break;
                }
                Some(x) => {
                    last_miss = Some(x);
                    if let Err(Error::Uncoverable { element }) =
                        reweight_on_miss(&mut weights, x, oracle)
                    {
                        trace.ledger_delta = oracle.ledger().counts().since(&before);
                        guesses.push(trace);
                        return Ok(finish(oracle, Vec::new(), guesses, Some(element)));
                    }
                }
            }
        }
        trace.succeeded = found.is_some();
        trace.ledger_delta = oracle.ledger().counts().since(&before);
        guesses.push(trace);
        if let Some(net) = found {
            return Ok(finish(oracle, net, guesses, None));
        }
        if k_eff >= m {
            return Ok(finish(oracle, Vec::new(), guesses, last_miss.or(Some(1))));
        }
        k *= 2;
    }
}

fn finish<O: CovertSource>(
    oracle: &O,
    cover: Vec<usize>,
    guesses: Vec<GuessTrace>,
    failed: Option<usize>,
) -> CoverResult {
    CoverResult {
        cover,
        trace: AlgorithmTrace::EpsilonNet { guesses },
        ledger: oracle.ledger().clone(),
        failed,
    }
}
