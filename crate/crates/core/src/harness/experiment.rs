//! Seeded experiment runner with post-hoc validation.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gen::{gen_graph, gen_set_system, GraphModel, SetModel};
use super::stats::{fit_power_law, median, percentile};
use crate::epsilon_net::{run_weighted_epsilon_net, EpsNetConfig};
use crate::error::{Error, Result};
use crate::netdiscovery::{
    certifies_all, competitive_ratio, offline_verification, run_network_discovery, Graph,
    VerificationMode, EXACT_VERIFICATION_CAP,
};
use crate::oracle::{CovertOracle, QueryCounts};
use crate::pseudo_greedy::{run_pseudo_greedy, DEFAULT_ALPHA};
use crate::setsystem::{
    brute_force_min_cover, greedy_cover, verify_indices, SetSystem, BRUTE_FORCE_CAP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    PseudoGreedy,
    Epsnet,
    Greedy,
    Bruteforce,
    Discover,
    Verify,
}

impl Algorithm {
    pub fn is_graph(&self) -> bool {
        matches!(self, Algorithm::Discover | Algorithm::Verify)
    }
}

/// Where each trial's instance comes from. Generated sources are seeded by
/// the trial seed.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    Sets(SetSystem),
    SetModel(SetModel),
    Graph(Graph),
    GraphModel(GraphModel),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub source: InstanceSource,
    pub alpha: f64,
    pub epsnet: EpsNetConfig,
    pub verify_mode: VerificationMode,
    /// Compute OPT by brute force when the instance is small enough.
    pub compute_opt: bool,
    pub seeds: Vec<u64>,
}

impl ExperimentConfig {
    pub fn new(algorithm: Algorithm, source: InstanceSource, seeds: Vec<u64>) -> Self {
        Self {
            algorithm,
            source,
            alpha: DEFAULT_ALPHA,
            epsnet: EpsNetConfig::default(),
            verify_mode: VerificationMode::Exact,
            compute_opt: true,
            seeds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    /// Sets (or query vertices) in the returned solution.
    pub cover_size: usize,
    /// Decided against the hidden instance, not taken from the algorithm.
    pub valid: bool,
    pub failed: Option<usize>,
    pub opt: Option<usize>,
    pub ratio_to_opt: Option<f64>,
    pub queries: QueryCounts,
    pub total_queries: u64,
    pub rounds: usize,
    pub cover: Vec<usize>,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub trials: usize,
    pub valid_fraction: f64,
    pub median_cover_size: f64,
    pub p95_cover_size: f64,
    pub median_queries: f64,
    pub p95_queries: f64,
    pub median_ratio_to_opt: Option<f64>,
    pub p95_ratio_to_opt: Option<f64>,
}

impl Aggregates {
    pub fn from_records(records: &[TrialRecord]) -> Self {
        let sizes: Vec<f64> = records.iter().map(|r| r.cover_size as f64).collect();
        let queries: Vec<f64> = records.iter().map(|r| r.total_queries as f64).collect();
        let ratios: Vec<f64> = records.iter().filter_map(|r| r.ratio_to_opt).collect();
        let valid = records.iter().filter(|r| r.valid).count();
        Self {
            trials: records.len(),
            valid_fraction: valid as f64 / records.len().max(1) as f64,
            median_cover_size: median(&sizes).unwrap_or(0.0),
            p95_cover_size: percentile(&sizes, 95.0).unwrap_or(0.0),
            median_queries: median(&queries).unwrap_or(0.0),
            p95_queries: percentile(&queries, 95.0).unwrap_or(0.0),
            median_ratio_to_opt: median(&ratios),
            p95_ratio_to_opt: percentile(&ratios, 95.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub algorithm: Algorithm,
    pub alpha: f64,
    pub records: Vec<TrialRecord>,
    pub aggregates: Aggregates,
    /// Unix seconds; the only non-deterministic field besides runtimes.
    pub generated_at: u64,
}

impl Report {
    /// Copy with timing fields zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        r.generated_at = 0;
        r.records.iter_mut().for_each(|t| t.runtime_ms = 0.0);
        r
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Report> {
    if config.seeds.is_empty() {
        return Err(Error::InvalidParameter("at least one seed required".into()));
    }
    let graph_source = matches!(
        config.source,
        InstanceSource::Graph(_) | InstanceSource::GraphModel(_)
    );
    if graph_source != config.algorithm.is_graph() {
        return Err(Error::InvalidParameter(format!(
            "{:?} does not run on this instance source",
            config.algorithm
        )));
    }
    let mut records = config
        .seeds
        .par_iter()
        .map(|&seed| run_trial(config, seed))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| r.seed);
    let aggregates = Aggregates::from_records(&records);
    Ok(Report {
        algorithm: config.algorithm,
        alpha: config.alpha,
        records,
        aggregates,
        generated_at: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
    })
}

fn run_trial(config: &ExperimentConfig, seed: u64) -> Result<TrialRecord> {
    let start = Instant::now();
    let mut record = match &config.source {
        InstanceSource::Sets(sys) => set_trial(config, sys.clone(), seed)?,
        InstanceSource::SetModel(model) => {
            set_trial(config, gen_set_system(*model, seed)?.system, seed)?
        }
        InstanceSource::Graph(g) => graph_trial(config, g, seed)?,
        InstanceSource::GraphModel(model) => graph_trial(config, &gen_graph(*model, seed)?, seed)?,
    };
    record.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(record)
}

fn set_trial(config: &ExperimentConfig, sys: SetSystem, seed: u64) -> Result<TrialRecord> {
    let opt = if (config.compute_opt || config.algorithm == Algorithm::Bruteforce)
        && sys.num_sets() <= BRUTE_FORCE_CAP
        && sys.is_coverable()
    {
        Some(brute_force_min_cover(&sys)?.len())
    } else {
        None
    };
    let (cover, failed, queries, rounds) = match config.algorithm {
        Algorithm::PseudoGreedy => {
            let mut oracle = CovertOracle::new(sys.clone());
            let r = run_pseudo_greedy(&mut oracle, config.alpha, seed)?;
            let rounds = r.rounds().len() + usize::from(r.base_case_entered());
            (r.cover, r.failed, r.ledger.counts(), rounds)
        }
        Algorithm::Epsnet => {
            let mut oracle = CovertOracle::new(sys.clone());
            let r = run_weighted_epsilon_net(&mut oracle, &config.epsnet, seed)?;
            let rounds = r.guesses().iter().map(|g| g.iterations).sum();
            (r.cover, r.failed, r.ledger.counts(), rounds)
        }
        Algorithm::Greedy => match greedy_cover(&sys, 1.0) {
            Ok(c) => (c.set_indices, None, QueryCounts::default(), 0),
            Err(Error::Uncoverable { element }) => {
                (Vec::new(), Some(element), QueryCounts::default(), 0)
            }
            Err(e) => return Err(e),
        },
        Algorithm::Bruteforce => match brute_force_min_cover(&sys) {
            Ok(c) => (c.set_indices, None, QueryCounts::default(), 0),
            Err(Error::Uncoverable { element }) => {
                (Vec::new(), Some(element), QueryCounts::default(), 0)
            }
            Err(e) => return Err(e),
        },
        Algorithm::Discover | Algorithm::Verify => unreachable!("checked by run_experiment"),
    };
    let valid = failed.is_none() && verify_indices(&sys, &cover);
    Ok(TrialRecord {
        seed,
        cover_size: cover.len(),
        valid,
        failed,
        opt,
        ratio_to_opt: opt
            .filter(|&o| o > 0)
            .map(|o| cover.len() as f64 / o as f64),
        total_queries: queries.total(),
        queries,
        rounds,
        cover,
        runtime_ms: 0.0,
    })
}

fn graph_trial(config: &ExperimentConfig, graph: &Graph, seed: u64) -> Result<TrialRecord> {
    let opt = if config.compute_opt && graph.n() <= EXACT_VERIFICATION_CAP {
        Some(offline_verification(graph, VerificationMode::Exact)?.size)
    } else {
        None
    };
    match config.algorithm {
        Algorithm::Discover => {
            let r = run_network_discovery(graph, config.alpha, seed)?;
            let valid = r.unresolved == 0 && r.edges == graph.edges();
            let ratio = opt.filter(|&o| o > 0).map(|o| competitive_ratio(&r, o));
            Ok(TrialRecord {
                seed,
                cover_size: r.query_set.len(),
                valid,
                failed: None,
                opt,
                ratio_to_opt: ratio,
                queries: r.ledger.counts(),
                total_queries: r.ledger.total(),
                rounds: r.rounds.len() + usize::from(r.base_case.is_some()),
                cover: r.query_set,
                runtime_ms: 0.0,
            })
        }
        Algorithm::Verify => {
            let v = offline_verification(graph, config.verify_mode)?;
            Ok(TrialRecord {
                seed,
                cover_size: v.size,
                valid: certifies_all(graph, &v.query_set)?,
                failed: None,
                opt,
                ratio_to_opt: opt.filter(|&o| o > 0).map(|o| v.size as f64 / o as f64),
                queries: QueryCounts::default(),
                total_queries: 0,
                rounds: 0,
                cover: v.query_set,
                runtime_ms: 0.0,
            })
        }
        _ => unreachable!("checked by run_experiment"),
    }
}

/// Head-to-head comparison on planted-cover families of growing `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub n: usize,
    pub m: usize,
    pub ks: Vec<usize>,
    pub density: f64,
    pub seeds: Vec<u64>,
    pub alpha: f64,
    pub epsnet: EpsNetConfig,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            n: 1024,
            m: 1024,
            ks: vec![1, 2, 4, 8],
            density: 0.01,
            seeds: (0..20).collect(),
            alpha: DEFAULT_ALPHA,
            epsnet: EpsNetConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub algorithm: Algorithm,
    pub k: usize,
    pub valid_fraction: f64,
    pub median_cover_size: f64,
    pub median_queries: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub rows: Vec<BenchRow>,
    /// Fitted exponent of median queries against planted `k`, per covert algorithm.
    pub query_exponents: Vec<(Algorithm, f64)>,
}

pub fn run_benchmark(config: &BenchConfig) -> Result<BenchReport> {
    let mut rows = Vec::new();
    let mut query_exponents = Vec::new();
    for algorithm in [
        Algorithm::PseudoGreedy,
        Algorithm::Epsnet,
        Algorithm::Greedy,
    ] {
        let mut medians = Vec::new();
        for &k in &config.ks {
            let mut exp = ExperimentConfig::new(
                algorithm,
                InstanceSource::SetModel(SetModel::PlantedCover {
                    n: config.n,
                    m: config.m,
                    k,
                    density: config.density,
                }),
                config.seeds.clone(),
            );
            exp.alpha = config.alpha;
            exp.epsnet = config.epsnet;
            exp.compute_opt = false;
            let report = run_experiment(&exp)?;
            medians.push(report.aggregates.median_queries);
            rows.push(BenchRow {
                algorithm,
                k,
                valid_fraction: report.aggregates.valid_fraction,
                median_cover_size: report.aggregates.median_cover_size,
                median_queries: report.aggregates.median_queries,
            });
        }
        if algorithm != Algorithm::Greedy {
            let ks: Vec<f64> = config.ks.iter().map(|&k| k as f64).collect();
            if let Some(e) = fit_power_law(&ks, &medians) {
                query_exponents.push((algorithm, e));
            }
        }
    }
    Ok(BenchReport {
        config: config.clone(),
        rows,
        query_exponents,
    })
}
