//! Summary statistics and the sampling-concentration experiment.

use serde::{Deserialize, Serialize};

use crate::pseudo_greedy::{draw_round_sample, hit_threshold, sampling_probability};
use crate::seeded_rng;

/// Median of `values` (mean of the two middle values for even length).
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len().is_multiple_of(2) {
        (v[mid - 1] + v[mid]) / 2.0
    } else {
        v[mid]
    })
}

/// Nearest-rank percentile, `q` in `[0, 100]`.
pub fn percentile(values: &[f64], q: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = ((q / 100.0) * v.len() as f64).ceil() as usize;
    Some(v[rank.clamp(1, v.len()) - 1])
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaRow {
    pub label: String,
    pub set_size: usize,
    pub expected_hits: f64,
    pub mean_hits: f64,
    /// Fraction of trials with at least `α log₂ N` sampled elements.
    pub crossing_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub alpha: f64,
    pub scale: f64,
    pub s_i: f64,
    pub trials: usize,
    pub p: f64,
    pub threshold: f64,
    pub rows: Vec<LemmaRow>,
}

impl LemmaReport {
    pub fn row(&self, label: &str) -> Option<&LemmaRow> {
        self.rows.iter().find(|r| r.label == label)
    }
}

/// Samples synthetic sets of sizes `s_i/2`, `s_i` and `s_i/8` with the round
/// sampler and records how often each reaches the shortlist threshold.
pub fn lemma_5_1_test(alpha: f64, scale: f64, s_i: f64, trials: usize, seed: u64) -> LemmaReport {
    let threshold = hit_threshold(alpha, scale);
    let p = sampling_probability(s_i, alpha, scale);
    let mut rng = seeded_rng(seed);
    let rows = [("half", 2.0), ("full", 1.0), ("eighth", 8.0)]
        .into_iter()
        .map(|(label, div)| {
            let size = (s_i / div).round() as usize;
            let members: Vec<usize> = (1..=size).collect();
            let mut crossings = 0usize;
            let mut total = 0usize;
            for _ in 0..trials {
                let hits = draw_round_sample(&members, s_i, alpha, scale, &mut rng).len();
                total += hits;
                if hits as f64 >= threshold {
                    crossings += 1;
                }
            }
            LemmaRow {
                label: label.to_owned(),
                set_size: size,
                expected_hits: p * size as f64,
                mean_hits: total as f64 / trials.max(1) as f64,
                crossing_rate: crossings as f64 / trials.max(1) as f64,
            }
        })
        .collect();
    LemmaReport {
        alpha,
        scale,
        s_i,
        trials,
        p,
        threshold,
        rows,
    }
}
