//! The covert query interface and its cost ledger.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setsystem::SetSystem;

/// Per-kind query counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryCounts {
    pub hitting: u64,
    pub set: u64,
    pub layered: u64,
}

impl QueryCounts {
    pub fn total(&self) -> u64 {
        self.hitting + self.set + self.layered
    }

    /// Componentwise `self - earlier`; counts never decrease so this cannot underflow.
    pub fn since(&self, earlier: &QueryCounts) -> QueryCounts {
        QueryCounts {
            hitting: self.hitting - earlier.hitting,
            set: self.set - earlier.set,
            layered: self.layered - earlier.layered,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryKind {
    Hitting,
    Set,
    Layered,
}

/// Running query counts, with an optional per-phase breakdown.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLedger {
    pub hitting_queries: u64,
    pub set_queries: u64,
    pub layered_queries: u64,
    pub phases: BTreeMap<String, QueryCounts>,
    #[serde(skip)]
    current_phase: Option<String>,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total(&self) -> u64 {
        self.hitting_queries + self.set_queries + self.layered_queries
    }

    pub fn counts(&self) -> QueryCounts {
        QueryCounts {
            hitting: self.hitting_queries,
            set: self.set_queries,
            layered: self.layered_queries,
        }
    }

    /// Attributes every later charge to `label` until the next call.
    pub fn mark_phase(&mut self, label: &str) {
        self.phases.entry(label.to_owned()).or_default();
        self.current_phase = Some(label.to_owned());
    }

    pub fn current_phase(&self) -> Option<&str> {
        self.current_phase.as_deref()
    }

    pub fn charge(&mut self, kind: QueryKind) {
        let phase = self
            .current_phase
            .as_ref()
            .map(|p| self.phases.entry(p.clone()).or_default());
        match kind {
            QueryKind::Hitting => {
                self.hitting_queries += 1;
                if let Some(p) = phase {
                    p.hitting += 1;
                }
            }
            QueryKind::Set => {
                self.set_queries += 1;
                if let Some(p) = phase {
                    p.set += 1;
                }
            }
            QueryKind::Layered => {
                self.layered_queries += 1;
                if let Some(p) = phase {
                    p.layered += 1;
                }
            }
        }
    }
}

/// What a covert algorithm may do: learn `n'`, `m'` and `N` for free, and
/// pay one ledger unit (of some kind) per query.
pub trait CovertSource {
    /// `n'`, elements are `1..=n'`.
    fn universe_size(&self) -> usize;
    /// `m'`, sets are `1..=m'`.
    fn num_sets(&self) -> usize;
    /// Scale parameter `N` used inside `log₂ N` thresholds.
    fn scale(&self) -> f64;
    /// Indices of all sets containing `element`.
    fn hitting_query(&mut self, element: usize) -> Result<Vec<usize>>;
    /// Elements of set `set`.
    fn set_query(&mut self, set: usize) -> Result<Vec<usize>>;
    /// Elements known to be covered through side information since the last
    /// call. Plain set-cover oracles have none.
    fn take_incidental(&mut self) -> Vec<usize> {
        Vec::new()
    }
    fn ledger(&self) -> &QueryLedger;
    fn mark_phase(&mut self, label: &str);
}

/// One logged query, written as a JSON line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLogEntry {
    pub kind: String,
    pub arg: usize,
    pub answer: Vec<usize>,
    pub phase: Option<String>,
}

/// A hidden [`SetSystem`] reachable only through metered queries.
#[derive(Debug, Clone)]
pub struct CovertOracle {
    hidden: SetSystem,
    ledger: QueryLedger,
    log: Option<Vec<QueryLogEntry>>,
}

impl CovertOracle {
    pub fn new(hidden: SetSystem) -> Self {
        Self {
            hidden,
            ledger: QueryLedger::new(),
            log: None,
        }
    }

    /// Also records every query and answer.
    pub fn with_query_log(mut self) -> Self {
        self.log = Some(Vec::new());
        self
    }

    pub fn ledger_snapshot(&self) -> QueryLedger {
        self.ledger.clone()
    }

    pub fn query_log(&self) -> Option<&[QueryLogEntry]> {
        self.log.as_deref()
    }

    pub fn write_query_log<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for entry in self.log.iter().flatten() {
            serde_json::to_writer(&mut out, entry)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Gives the hidden instance back, for post-hoc validation by a harness.
    pub fn into_hidden(self) -> SetSystem {
        self.hidden
    }

    fn record(&mut self, kind: &str, arg: usize, answer: &[usize]) {
        let phase = self.ledger.current_phase().map(str::to_owned);
        if let Some(log) = self.log.as_mut() {
            log.push(QueryLogEntry {
                kind: kind.to_owned(),
                arg,
                answer: answer.to_vec(),
                phase,
            });
        }
    }
}

impl CovertSource for CovertOracle {
    fn universe_size(&self) -> usize {
        self.hidden.universe_size()
    }

    fn num_sets(&self) -> usize {
        self.hidden.num_sets()
    }

    fn scale(&self) -> f64 {
        self.hidden.scale() as f64
    }

    fn hitting_query(&mut self, element: usize) -> Result<Vec<usize>> {
        let answer = self
            .hidden
            .sets_containing(element)
            .ok_or(Error::ElementOutOfRange {
                element,
                universe_size: self.hidden.universe_size(),
            })?
            .to_vec();
        self.ledger.charge(QueryKind::Hitting);
        self.record("hit", element, &answer);
        Ok(answer)
    }

    fn set_query(&mut self, set: usize) -> Result<Vec<usize>> {
        let answer = self
            .hidden
            .set(set)
            .ok_or(Error::SetOutOfRange {
                set,
                num_sets: self.hidden.num_sets(),
            })?
            .to_vec();
        self.ledger.charge(QueryKind::Set);
        self.record("set", set, &answer);
        Ok(answer)
    }

    fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    fn mark_phase(&mut self, label: &str) {
        self.ledger.mark_phase(label);
    }
}
