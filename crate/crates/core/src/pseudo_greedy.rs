//! Pseudo-Greedy: relaxed greedy set cover driven by sampled hitting-set queries.
//!
//! Round `i` looks at the `n_i` still-uncovered elements and the scale
//! `s_i = min(n' / 2^i, n_i)`. Once `s_i <= α log₂ N` the residue is small
//! enough to learn outright (one hitting query per element) and finish with
//! explicit greedy. Otherwise every uncovered element is sampled independently
//! with probability `min(1, 4α log₂ N / s_i)`, each sampled element is
//! hitting-queried, and the sets hit at least `α log₂ N` times are shortlisted.
//! The shortlist is then filtered in index order: a set is accepted iff it
//! still holds `α log₂ N` sampled elements not covered by sets accepted before
//! it in this round, and each accepted set is learnt with one set query.

use std::collections::{BTreeMap, HashSet};

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::epsilon_net::GuessTrace;
use crate::error::{Error, Result};
use crate::oracle::{CovertSource, QueryCounts, QueryLedger};
use crate::setsystem::{greedy_cover, SetSystem};
use crate::{seeded_rng, Rng};

pub const DEFAULT_ALPHA: f64 = 8.0;

/// `α log₂ N`, the hit threshold for shortlisting and filtering.
pub fn hit_threshold(alpha: f64, scale: f64) -> f64 {
    alpha * scale.log2()
}

/// Bernoulli inclusion probability for round scale `s_i`, clipped to 1.
pub fn sampling_probability(s_i: f64, alpha: f64, scale: f64) -> f64 {
    (4.0 * alpha * scale.log2() / s_i).min(1.0)
}

/// One sampling round, as recorded in the trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub i: u32,
    pub n_i: usize,
    pub s_i: f64,
    pub p: f64,
    pub sample_size: usize,
    pub sample: Vec<usize>,
    pub shortlist: Vec<usize>,
    pub chosen: Vec<usize>,
    pub ledger_delta: QueryCounts,
}

/// The terminal explicit round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseCaseTrace {
    pub i: u32,
    pub n_i: usize,
    pub s_i: f64,
    /// Hitting queries issued, one per element not already resolved.
    pub hits: usize,
    /// Elements resolved by side information before their turn came.
    pub skipped: usize,
    pub chosen: Vec<usize>,
    pub ledger_delta: QueryCounts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "kebab-case")]
pub enum AlgorithmTrace {
    PseudoGreedy {
        rounds: Vec<RoundTrace>,
        base_case: Option<BaseCaseTrace>,
    },
    EpsilonNet {
        guesses: Vec<GuessTrace>,
    },
}

/// Output of a covert cover algorithm.
///
/// `cover` is what the algorithm claims; nothing here re-checks it against
/// the hidden instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverResult {
    pub cover: Vec<usize>,
    pub trace: AlgorithmTrace,
    pub ledger: QueryLedger,
    /// An element the run found to lie in no set, when it gave up.
    pub failed: Option<usize>,
}

impl CoverResult {
    pub fn rounds(&self) -> &[RoundTrace] {
        match &self.trace {
            AlgorithmTrace::PseudoGreedy { rounds, .. } => rounds,
            AlgorithmTrace::EpsilonNet { .. } => &[],
        }
    }

    pub fn base_case(&self) -> Option<&BaseCaseTrace> {
        match &self.trace {
            AlgorithmTrace::PseudoGreedy { base_case, .. } => base_case.as_ref(),
            AlgorithmTrace::EpsilonNet { .. } => None,
        }
    }

    pub fn base_case_entered(&self) -> bool {
        self.base_case().is_some()
    }

    pub fn guesses(&self) -> &[GuessTrace] {
        match &self.trace {
            AlgorithmTrace::EpsilonNet { guesses } => guesses,
            AlgorithmTrace::PseudoGreedy { .. } => &[],
        }
    }

    pub fn is_failed(&self) -> bool {
        self.failed.is_some()
    }
}

/// Includes each uncovered element independently with
/// probability [`sampling_probability`].
pub fn draw_round_sample(
    uncovered: &[usize],
    s_i: f64,
    alpha: f64,
    scale: f64,
    rng: &mut Rng,
) -> Vec<usize> {
    let p = sampling_probability(s_i, alpha, scale);
    if p >= 1.0 {
        return uncovered.to_vec();
    }
    uncovered
        .iter()
        .copied()
        .filter(|_| rng.gen_bool(p))
        .collect()
}

/// Sets hit at least `α log₂ N` times by a sample, in index order, together
/// with the sampled elements each set was seen to contain.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Shortlist {
    pub sets: Vec<usize>,
    pub hits: BTreeMap<usize, Vec<usize>>,
}

/// One hitting query per sampled element; tallies hits per set.
pub fn shortlist_sets<O: CovertSource>(
    sample: &[usize],
    oracle: &mut O,
    alpha: f64,
    scale: f64,
) -> Result<Shortlist> {
    let threshold = hit_threshold(alpha, scale);
    let mut hits: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &e in sample {
        for s in oracle.hitting_query(e)? {
            hits.entry(s).or_default().push(e);
        }
    }
    hits.retain(|_, elems| elems.len() as f64 >= threshold);
    Ok(Shortlist {
        sets: hits.keys().copied().collect(),
        hits,
    })
}

/// Sets accepted by [`sequential_filter`] and the elements their set queries revealed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Filtered {
    pub chosen: Vec<usize>,
    pub revealed: Vec<usize>,
}

/// Walks the shortlist in order, keeping `R_j`, the sampled elements already
/// covered by accepted sets. `X_{j+1}` is accepted iff
/// `|X_{j+1} ∩ (R \ R_j)| >= α log₂ N`; acceptance costs one set query.
pub fn sequential_filter<O: CovertSource>(
    shortlist: &Shortlist,
    sample: &[usize],
    oracle: &mut O,
    alpha: f64,
    scale: f64,
) -> Result<Filtered> {
    let threshold = hit_threshold(alpha, scale);
    let sampled: HashSet<usize> = sample.iter().copied().collect();
    let mut taken: HashSet<usize> = HashSet::new();
    let mut out = Filtered::default();
    for &set in &shortlist.sets {
        let fresh = shortlist.hits.get(&set).map_or(0, |elems| {
            elems.iter().filter(|e| !taken.contains(e)).count()
        });
        if (fresh as f64) < threshold {
            continue;
        }
        let contents = oracle.set_query(set)?;
        taken.extend(contents.iter().copied().filter(|e| sampled.contains(e)));
        out.revealed.extend_from_slice(&contents);
        out.chosen.push(set);
    }
    Ok(out)
}

/// Result of the explicit round.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BaseCaseOutcome {
    pub chosen: Vec<usize>,
    pub hits: usize,
    pub skipped: usize,
    pub failed: Option<usize>,
}

/// Learns every remaining element with one hitting query, rebuilds the
/// residual instance and covers it with explicit greedy (θ = 1).
///
/// `covered[e]` marks what the caller already knows is covered; elements that
/// side information resolves while this runs are skipped and not queried.
pub fn base_case_explicit<O: CovertSource>(
    oracle: &mut O,
    uncovered: &[usize],
    covered: &mut [bool],
) -> Result<BaseCaseOutcome> {
    let mut out = BaseCaseOutcome::default();
    let mut residual_elements = Vec::new();
    let mut residual_sets: Vec<Vec<usize>> = vec![Vec::new(); oracle.num_sets()];
    for &e in uncovered {
        for x in oracle.take_incidental() {
            covered[x] = true;
        }
        if covered[e] {
            out.skipped += 1;
            continue;
        }
        let containing = oracle.hitting_query(e)?;
        out.hits += 1;
        if containing.is_empty() {
            out.failed = Some(e);
            return Ok(out);
        }
        residual_elements.push(e);
        let local = residual_elements.len();
        for s in containing {
            residual_sets[s - 1].push(local);
        }
    }
    if !residual_elements.is_empty() {
        let residual = SetSystem::new(residual_sets, residual_elements.len())?;
        let cover = greedy_cover(&residual, 1.0)?;
        for &s in &cover.set_indices {
            for &local in &residual.sets()[s - 1] {
                covered[residual_elements[local - 1]] = true;
            }
        }
        out.chosen = cover.set_indices;
    }
    Ok(out)
}

/// Runs Pseudo-Greedy against `oracle` with RNG seed `seed`.
pub fn run_pseudo_greedy<O: CovertSource>(
    oracle: &mut O,
    alpha: f64,
    seed: u64,
) -> Result<CoverResult> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let mut rng = seeded_rng(seed);
    let n_prime = oracle.universe_size();
    let scale = oracle.scale();
    let threshold = hit_threshold(alpha, scale);

    let mut covered = vec![false; n_prime + 1];
    let mut cover = Vec::new();
    let mut rounds = Vec::new();
    let mut base_case = None;
    let mut failed = None;

    for i in 0u32.. {
        for x in oracle.take_incidental() {
            covered[x] = true;
        }
        let uncovered: Vec<usize> = (1..=n_prime).filter(|&e| !covered[e]).collect();
        let n_i = uncovered.len();
        let s_i = (n_prime as f64 / 2f64.powi(i as i32)).min(n_i as f64);
        let before = oracle.ledger().counts();

        if s_i <= threshold {
            oracle.mark_phase("base-case");
            let outcome = base_case_explicit(oracle, &uncovered, &mut covered)?;
            cover.extend_from_slice(&outcome.chosen);
            failed = outcome.failed;
            base_case = Some(BaseCaseTrace {
                i,
                n_i,
                s_i,
                hits: outcome.hits,
                skipped: outcome.skipped,
                chosen: outcome.chosen,
                ledger_delta: oracle.ledger().counts().since(&before),
            });
            break;
        }

        oracle.mark_phase(&format!("round-{i}"));
        let p = sampling_probability(s_i, alpha, scale);
        let sample = draw_round_sample(&uncovered, s_i, alpha, scale, &mut rng);
        let shortlist = shortlist_sets(&sample, oracle, alpha, scale)?;
        let filtered = if shortlist.sets.is_empty() {
            Filtered::default()
        } else {
            sequential_filter(&shortlist, &sample, oracle, alpha, scale)?
        };
        for &e in &filtered.revealed {
            covered[e] = true;
        }
        cover.extend_from_slice(&filtered.chosen);
        rounds.push(RoundTrace {
            i,
            n_i,
            s_i,
            p,
            sample_size: sample.len(),
            sample,
            shortlist: shortlist.sets,
            chosen: filtered.chosen,
            ledger_delta: oracle.ledger().counts().since(&before),
        });
    }

    Ok(CoverResult {
        cover,
        trace: AlgorithmTrace::PseudoGreedy { rounds, base_case },
        ledger: oracle.ledger().clone(),
        failed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::CovertOracle;

    fn oracle(sets: Vec<Vec<usize>>, n: usize) -> CovertOracle {
        CovertOracle::new(SetSystem::new(sets, n).unwrap())
    }

    #[test]
    fn whole_universe_set_is_found_immediately() {
        for seed in 0..5 {
            let mut o = oracle(vec![(1..=8).collect()], 8);
            let r = run_pseudo_greedy(&mut o, 8.0, seed).unwrap();
            assert_eq!(r.cover, vec![1]);
            assert!(r.rounds().is_empty());
            assert!(r.base_case_entered());
            assert_eq!(r.base_case().unwrap().i, 0);
        }
    }

    #[test]
    fn small_instance_matches_explicit_greedy() {
        let sets = vec![vec![1, 2, 3], vec![3, 4], vec![4], vec![5, 6, 1]];
        let sys = SetSystem::new(sets.clone(), 6).unwrap();
        let mut o = CovertOracle::new(sys.clone());
        let r = run_pseudo_greedy(&mut o, 8.0, 3).unwrap();
        assert_eq!(r.cover, greedy_cover(&sys, 1.0).unwrap().set_indices);
        assert_eq!(r.ledger.hitting_queries, 6);
        assert_eq!(r.ledger.set_queries, 0);
    }

    #[test]
    fn clipped_probability_samples_everything() {
        let mut rng = seeded_rng(1);
        let uncovered = vec![2, 5, 9];
        assert_eq!(sampling_probability(10.0, 8.0, 1024.0), 1.0);
        assert_eq!(
            draw_round_sample(&uncovered, 10.0, 8.0, 1024.0, &mut rng),
            uncovered
        );
    }

    #[test]
    fn sampling_probability_formula() {
        // 4 * 8 * 20 / 1024
        assert!((sampling_probability(1024.0, 8.0, (1u64 << 20) as f64) - 0.625).abs() < 1e-12);
    }

    #[test]
    fn shortlist_full_sample_is_exact_count() {
        // alpha * log2(N) with N = 4: threshold 2 at alpha = 1.
        let mut o = oracle(vec![vec![1, 2], vec![3], vec![1, 2, 3]], 3);
        let sl = shortlist_sets(&[1, 2, 3], &mut o, 1.0, 4.0).unwrap();
        assert_eq!(sl.sets, vec![1, 3]);
        assert_eq!(o.ledger().hitting_queries, 3);
        let none = shortlist_sets(&[3], &mut o, 1.0, 4.0).unwrap();
        assert!(none.sets.is_empty());
    }

    #[test]
    fn filter_accepts_disjoint_rejects_contained() {
        let mut o = oracle(vec![vec![1, 2], vec![3, 4], vec![1, 2]], 4);
        let sample = [1, 2, 3, 4];
        let sl = shortlist_sets(&sample, &mut o, 1.0, 4.0).unwrap();
        assert_eq!(sl.sets, vec![1, 2, 3]);
        let f = sequential_filter(&sl, &sample, &mut o, 1.0, 4.0).unwrap();
        assert_eq!(f.chosen, vec![1, 2]);
        assert_eq!(o.ledger().set_queries, 2);
    }

    #[test]
    fn base_case_charges_one_hit_per_element() {
        let mut o = oracle(vec![vec![1, 2, 3, 4], vec![2, 5]], 5);
        let mut covered = vec![false; 6];
        covered[1] = true;
        let out = base_case_explicit(&mut o, &[2, 3, 4, 5], &mut covered).unwrap();
        assert_eq!(out.hits, 4);
        assert_eq!(o.ledger().hitting_queries, 4);
        assert_eq!(out.chosen, vec![1, 2]);
        assert!(covered[1..].iter().all(|&c| c));
    }

    #[test]
    fn base_case_single_residual_set() {
        let mut o = oracle(vec![vec![1], vec![2, 3, 4]], 4);
        let mut covered = vec![false, true, false, false, false];
        let out = base_case_explicit(&mut o, &[2, 3, 4], &mut covered).unwrap();
        assert_eq!(out.chosen, vec![2]);
    }

    #[test]
    fn uncoverable_is_reported() {
        let mut o = oracle(vec![vec![1, 2], vec![4]], 4);
        let r = run_pseudo_greedy(&mut o, 8.0, 0).unwrap();
        assert_eq!(r.failed, Some(3));
    }

    #[test]
    fn rejects_bad_alpha() {
        let mut o = oracle(vec![vec![1]], 1);
        assert!(run_pseudo_greedy(&mut o, 0.0, 0).is_err());
        assert!(run_pseudo_greedy(&mut o, f64::NAN, 0).is_err());
    }
}
