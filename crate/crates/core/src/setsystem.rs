//! Explicit set systems, the relaxed greedy reference, and an exact optimum.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest family [`brute_force_min_cover`] will enumerate by default.
pub const BRUTE_FORCE_CAP: usize = 20;

/// A ground set `1..=universe_size` and an indexed family of subsets.
///
/// Set indices are 1-based and follow construction order, which is the
/// canonical order every algorithm in this crate scans in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    universe_size: usize,
    sets: Vec<Vec<usize>>,
    element_to_sets: Vec<Vec<usize>>,
}

/// File representation: `{"universe_size": n, "sets": [[e, ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetSystemFile {
    pub universe_size: usize,
    pub sets: Vec<Vec<usize>>,
}

impl SetSystem {
    /// Validates the family and builds the element-to-sets index.
    ///
    /// Elements inside a set are sorted and deduplicated. Empty sets are kept.
    pub fn new(sets: Vec<Vec<usize>>, universe_size: usize) -> Result<Self> {
        if universe_size == 0 {
            return Err(Error::EmptyUniverse);
        }
        if sets.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let mut element_to_sets = vec![Vec::new(); universe_size + 1];
        let mut normalized = Vec::with_capacity(sets.len());
        for (idx, mut set) in sets.into_iter().enumerate() {
            set.sort_unstable();
            set.dedup();
            for &e in &set {
                if e == 0 || e > universe_size {
                    return Err(Error::ElementOutOfRange {
                        element: e,
                        universe_size,
                    });
                }
                element_to_sets[e].push(idx + 1);
            }
            normalized.push(set);
        }
        Ok(Self {
            universe_size,
            sets: normalized,
            element_to_sets,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }

    /// `N = n' + m'`, the scale inside every log threshold.
    pub fn scale(&self) -> usize {
        self.universe_size + self.sets.len()
    }

    /// Elements of set `index` (1-based).
    pub fn set(&self, index: usize) -> Option<&[usize]> {
        index
            .checked_sub(1)
            .and_then(|i| self.sets.get(i))
            .map(Vec::as_slice)
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Indices of the sets containing `element`, ascending.
    pub fn sets_containing(&self, element: usize) -> Option<&[usize]> {
        if element == 0 || element > self.universe_size {
            return None;
        }
        Some(&self.element_to_sets[element])
    }

    /// Smallest element contained in no set, if any.
    pub fn first_uncoverable(&self) -> Option<usize> {
        (1..=self.universe_size).find(|&e| self.element_to_sets[e].is_empty())
    }

    pub fn is_coverable(&self) -> bool {
        self.first_uncoverable().is_none()
    }

    pub fn to_file(&self) -> SetSystemFile {
        SetSystemFile {
            universe_size: self.universe_size,
            sets: self.sets.clone(),
        }
    }

    pub fn from_file(file: SetSystemFile) -> Result<Self> {
        Self::new(file.sets, file.universe_size)
    }
}

/// Convenience wrapper matching the operation name used throughout the docs.
pub fn build_set_system(sets: Vec<Vec<usize>>, universe_size: usize) -> Result<SetSystem> {
    SetSystem::new(sets, universe_size)
}

/// Chosen set indices in selection order, plus the union they cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    pub set_indices: Vec<usize>,
    pub covered: Vec<usize>,
}

impl Cover {
    pub fn new(sys: &SetSystem, set_indices: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; sys.num_sets() + 1];
        let mut mark = vec![false; sys.universe_size() + 1];
        for &s in &set_indices {
            let elements = sys.set(s).ok_or(Error::SetOutOfRange {
                set: s,
                num_sets: sys.num_sets(),
            })?;
            if std::mem::replace(&mut seen[s], true) {
                return Err(Error::DuplicateSet(s));
            }
            for &e in elements {
                mark[e] = true;
            }
        }
        let covered = (1..=sys.universe_size()).filter(|&e| mark[e]).collect();
        Ok(Self {
            set_indices,
            covered,
        })
    }

    pub fn len(&self) -> usize {
        self.set_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set_indices.is_empty()
    }
}

/// True iff the listed sets jointly cover the universe.
///
/// Out-of-range indices contribute nothing.
pub fn verify_cover(sys: &SetSystem, cover: &Cover) -> bool {
    verify_indices(sys, &cover.set_indices)
}

pub fn verify_indices(sys: &SetSystem, indices: &[usize]) -> bool {
    let mut mark = vec![false; sys.universe_size() + 1];
    let mut remaining = sys.universe_size();
    for &s in indices {
        for &e in sys.set(s).unwrap_or(&[]) {
            if !std::mem::replace(&mut mark[e], true) {
                remaining -= 1;
            }
        }
    }
    remaining == 0
}

/// Relaxed greedy RGSC(θ).
///
/// Each step recomputes `n_max`, the largest uncovered count over all sets,
/// and takes the lowest-index set whose uncovered count is at least
/// `theta * n_max`. `theta = 1` is classic greedy with lowest-index ties.
pub fn greedy_cover(sys: &SetSystem, theta: f64) -> Result<Cover> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "theta must lie in (0, 1], got {theta}"
        )));
    }
    if let Some(element) = sys.first_uncoverable() {
        return Err(Error::Uncoverable { element });
    }
    let mut uncovered = vec![true; sys.universe_size() + 1];
    uncovered[0] = false;
    let mut counts: Vec<usize> = sys.sets().iter().map(Vec::len).collect();
    let mut remaining = sys.universe_size();
    let mut chosen = Vec::new();
    while remaining > 0 {
        let n_max = counts.iter().copied().max().unwrap_or(0);
        debug_assert!(n_max > 0, "coverable instance always has a useful set");
        let threshold = theta * n_max as f64;
        let pick = counts
            .iter()
            .position(|&c| c > 0 && c as f64 >= threshold)
            .expect("the set attaining n_max qualifies");
        chosen.push(pick + 1);
        for &e in &sys.sets()[pick] {
            if std::mem::replace(&mut uncovered[e], false) {
                remaining -= 1;
                for &s in sys.sets_containing(e).unwrap_or(&[]) {
                    counts[s - 1] -= 1;
                }
            }
        }
    }
    Cover::new(sys, chosen)
}

/// One deterministic RGSC stage: scan sets in canonical order and accept each
/// whose count of still-uncovered elements (after earlier acceptances in the
/// same pass) is at least `threshold`. `uncovered[e]` is indexed by element id.
///
/// Returns the accepted indices; `uncovered` is updated in place.
pub fn threshold_pass(sys: &SetSystem, uncovered: &mut [bool], threshold: f64) -> Vec<usize> {
    let mut accepted = Vec::new();
    for (idx, set) in sys.sets().iter().enumerate() {
        let residual = set.iter().filter(|&&e| uncovered[e]).count();
        if residual > 0 && residual as f64 >= threshold {
            accepted.push(idx + 1);
            for &e in set {
                uncovered[e] = false;
            }
        }
    }
    accepted
}

/// Exact minimum cover with the default [`BRUTE_FORCE_CAP`].
pub fn brute_force_min_cover(sys: &SetSystem) -> Result<Cover> {
    brute_force_min_cover_capped(sys, BRUTE_FORCE_CAP)
}

/// Exact minimum cover by enumerating subfamilies in order of size, then
/// lexicographically by index sequence; the first cover found is returned.
pub fn brute_force_min_cover_capped(sys: &SetSystem, cap: usize) -> Result<Cover> {
    if sys.num_sets() > cap {
        return Err(Error::BruteForceCap {
            sets: sys.num_sets(),
            cap,
        });
    }
    if let Some(element) = sys.first_uncoverable() {
        return Err(Error::Uncoverable { element });
    }
    let words = sys.universe_size().div_ceil(64);
    let masks: Vec<Vec<u64>> = sys
        .sets()
        .iter()
        .map(|set| {
            let mut m = vec![0u64; words];
            for &e in set {
                m[(e - 1) / 64] |= 1 << ((e - 1) % 64);
            }
            m
        })
        .collect();
    let mut full = vec![u64::MAX; words];
    let tail = sys.universe_size() % 64;
    if tail != 0 {
        full[words - 1] = (1u64 << tail) - 1;
    }

    let m = sys.num_sets();
    for k in 1..=m {
        let mut picked = Vec::with_capacity(k);
        let acc = vec![0u64; words];
        if search(&masks, &full, k, 0, &acc, &mut picked) {
            return Cover::new(sys, picked.iter().map(|i| i + 1).collect());
        }
    }
    unreachable!("a coverable family is covered by all of its sets")
}

fn search(
    masks: &[Vec<u64>],
    full: &[u64],
    k: usize,
    start: usize,
    acc: &[u64],
    picked: &mut Vec<usize>,
) -> bool {
    if picked.len() == k {
        return acc == full;
    }
    let need = k - picked.len();
    for i in start..=masks.len() - need {
        let next: Vec<u64> = acc.iter().zip(&masks[i]).map(|(a, b)| a | b).collect();
        picked.push(i);
        if search(masks, full, k, i + 1, &next, picked) {
            return true;
        }
        picked.pop();
    }
    false
}

/// Cost assigned to one element by the first set that covers it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElementCost {
    pub element: usize,
    /// 1 / (number of elements newly covered by that set).
    pub weight: Ratio<u64>,
}

/// Apportions each chosen set's unit cost evenly over the elements it newly
/// covers, walking the cover in selection order.
///
/// The result lists elements in the order they were first covered (ascending
/// id within one set), i.e. `x_1, x_2, ...`. Weights sum to `cover.len()`
/// exactly. A cover that misses an element, or lists a set that adds nothing
/// new at its turn, is rejected.
pub fn apportioned_weights(sys: &SetSystem, cover: &Cover) -> Result<Vec<ElementCost>> {
    let mut mark = vec![false; sys.universe_size() + 1];
    let mut costs = Vec::with_capacity(sys.universe_size());
    for &s in &cover.set_indices {
        let set = sys.set(s).ok_or(Error::SetOutOfRange {
            set: s,
            num_sets: sys.num_sets(),
        })?;
        let fresh: Vec<usize> = set.iter().copied().filter(|&e| !mark[e]).collect();
        if fresh.is_empty() {
            return Err(Error::InvalidCover(format!(
                "set {s} covers nothing new at its turn"
            )));
        }
        let weight = Ratio::new(1, fresh.len() as u64);
        for e in fresh {
            mark[e] = true;
            costs.push(ElementCost { element: e, weight });
        }
    }
    if costs.len() != sys.universe_size() {
        let missing = (1..=sys.universe_size()).find(|&e| !mark[e]).unwrap_or(0);
        return Err(Error::InvalidCover(format!("element {missing} uncovered")));
    }
    Ok(costs)
}

/// `H_n = 1 + 1/2 + ... + 1/n`.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|i| 1.0 / i as f64).sum()
}
