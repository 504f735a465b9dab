//! Network discovery and verification in the layered graph query model.
//!
//! A layered query at `v` returns BFS levels from `v` and every edge joining
//! consecutive levels. That is equivalent to certifying every vertex pair
//! `{x, y}` with `d(v, x) != d(v, y)`: pairs one level apart are edges iff
//! listed, pairs two or more levels apart are non-edges. Pairs on the same
//! level stay unresolved.
//!
//! As a covert set-cover instance, the elements are the `C(n, 2)` vertex pairs
//! and the sets are the vertices, `Q_v` being the pairs certified by a query at
//! `v`. The hitting set of a pair is `H(u, v) = {x : d(u, x) != d(v, x)}`, which
//! costs two layered queries (at `u` and at `v`) to learn.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{CovertSource, QueryKind, QueryLedger};
use crate::pseudo_greedy::{run_pseudo_greedy, BaseCaseTrace, RoundTrace};
use crate::setsystem::{brute_force_min_cover_capped, greedy_cover, SetSystem};

/// Largest graph accepted by exact offline verification.
pub const EXACT_VERIFICATION_CAP: usize = 12;

/// Connected, undirected, simple graph on vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adjacency: Vec<Vec<usize>>,
}

/// File representation: `{"n": n, "edges": [[u, v], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "graph needs at least one vertex".into(),
            ));
        }
        let mut adjacency = vec![Vec::new(); n + 1];
        for &(u, v) in edges {
            for x in [u, v] {
                if x == 0 || x > n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if adjacency[u].contains(&v) {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        adjacency.iter_mut().for_each(|a| a.sort_unstable());
        let graph = Self { n, adjacency };
        if let Some(pos) = graph.bfs(1).iter().position(Option::is_none) {
            return Err(Error::Disconnected(pos + 1));
        }
        Ok(graph)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u <= self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (1..=self.n)
            .flat_map(|u| {
                self.adjacency[u]
                    .iter()
                    .filter(move |&&v| u < v)
                    .map(move |&v| (u, v))
            })
            .collect()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Hop distances from `source`; entry `x - 1` is `d(source, x)`.
    pub fn distances_from(&self, source: usize) -> Result<Vec<usize>> {
        self.check_vertex(source)?;
        Ok(self
            .bfs(source)
            .into_iter()
            .map(|d| d.expect("connected"))
            .collect())
    }

    fn bfs(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[source - 1] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x - 1].unwrap();
            for &y in &self.adjacency[x] {
                if dist[y - 1].is_none() {
                    dist[y - 1] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.n {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            });
        }
        Ok(())
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            n: self.n,
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }

    pub fn from_file(file: &GraphFile) -> Result<Self> {
        let edges: Vec<(usize, usize)> = file.edges.iter().map(|e| (e[0], e[1])).collect();
        Self::new(file.n, &edges)
    }
}

/// Answer to a layered query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeredAnswer {
    pub source: usize,
    /// Entry `x - 1` is the level of vertex `x`.
    pub dist: Vec<usize>,
    /// Edges `(x, y)`, `x < y`, joining consecutive levels.
    pub shortest_path_edges: Vec<(usize, usize)>,
}

/// Computes a layered answer without charging any ledger.
pub fn layered_answer(graph: &Graph, v: usize) -> Result<LayeredAnswer> {
    let dist = graph.distances_from(v)?;
    let shortest_path_edges = graph
        .edges()
        .into_iter()
        .filter(|&(x, y)| dist[x - 1].abs_diff(dist[y - 1]) == 1)
        .collect();
    Ok(LayeredAnswer {
        source: v,
        dist,
        shortest_path_edges,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairStatus {
    Edge,
    NonEdge,
}

/// A certified pair `{u, w}` with `u < w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Certificate {
    pub u: usize,
    pub w: usize,
    pub status: PairStatus,
}

/// The pairs `Q_v` a layered answer certifies, derived from the answer alone.
pub fn certified_pairs(answer: &LayeredAnswer) -> Vec<Certificate> {
    let listed: BTreeSet<(usize, usize)> = answer.shortest_path_edges.iter().copied().collect();
    let n = answer.dist.len();
    let mut out = Vec::new();
    for u in 1..=n {
        for w in u + 1..=n {
            let gap = answer.dist[u - 1].abs_diff(answer.dist[w - 1]);
            let status = match gap {
                0 => continue,
                1 if listed.contains(&(u, w)) => PairStatus::Edge,
                _ => PairStatus::NonEdge,
            };
            out.push(Certificate { u, w, status });
        }
    }
    out
}

/// The "different distances" rule applied with the true adjacency: every pair
/// at different levels from `source` is certified with its real status.
pub fn certified_by_distance_rule(graph: &Graph, source: usize) -> Result<Vec<Certificate>> {
    let dist = graph.distances_from(source)?;
    let n = graph.n();
    let mut out = Vec::new();
    for u in 1..=n {
        for w in u + 1..=n {
            if dist[u - 1] != dist[w - 1] {
                let status = if graph.has_edge(u, w) {
                    PairStatus::Edge
                } else {
                    PairStatus::NonEdge
                };
                out.push(Certificate { u, w, status });
            }
        }
    }
    Ok(out)
}

/// 1-based lexicographic numbering of unordered vertex pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairIndex {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl PairIndex {
    pub fn new(n: usize) -> Self {
        let pairs = (1..=n)
            .flat_map(|u| (u + 1..=n).map(move |w| (u, w)))
            .collect();
        Self { n, pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn index(&self, a: usize, b: usize) -> usize {
        let (u, w) = (a.min(b), a.max(b));
        debug_assert!(u >= 1 && u < w && w <= self.n);
        (u - 1) * self.n - (u - 1) * u / 2 + (w - u)
    }

    pub fn pair(&self, index: usize) -> Option<(usize, usize)> {
        index
            .checked_sub(1)
            .and_then(|i| self.pairs.get(i))
            .copied()
    }
}

/// A hidden graph answering metered layered queries.
#[derive(Debug, Clone)]
pub struct LayeredOracle {
    graph: Graph,
    ledger: QueryLedger,
    queried: BTreeSet<usize>,
}

impl LayeredOracle {
    pub fn new(graph: Graph) -> Self {
        Self {
            graph,
            ledger: QueryLedger::new(),
            queried: BTreeSet::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn layered_query(&mut self, v: usize) -> Result<LayeredAnswer> {
        let answer = layered_answer(&self.graph, v)?;
        self.ledger.charge(QueryKind::Layered);
        self.queried.insert(v);
        Ok(answer)
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn mark_phase(&mut self, label: &str) {
        self.ledger.mark_phase(label);
    }

    /// Distinct vertices queried so far, ascending.
    pub fn queried_vertices(&self) -> Vec<usize> {
        self.queried.iter().copied().collect()
    }
}

/// `H(u, v)` plus the two answers it was computed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingSet {
    pub members: Vec<usize>,
    pub answers: [LayeredAnswer; 2],
}

impl HittingSet {
    /// Certificates carried by the two underlying answers.
    pub fn side_information(&self) -> impl Iterator<Item = Certificate> + '_ {
        self.answers.iter().flat_map(certified_pairs)
    }
}

/// Queries both endpoints and returns `{x : d(u, x) != d(v, x)}`.
pub fn hitting_set_h(oracle: &mut LayeredOracle, u: usize, v: usize) -> Result<HittingSet> {
    if u == v {
        return Err(Error::SameEndpoints(u));
    }
    let au = oracle.layered_query(u)?;
    let av = oracle.layered_query(v)?;
    let members = (1..=oracle.n())
        .filter(|&x| au.dist[x - 1] != av.dist[x - 1])
        .collect();
    Ok(HittingSet {
        members,
        answers: [au, av],
    })
}

/// What is known so far about the hidden graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscoveryState {
    pairs: PairIndex,
    status: Vec<Option<PairStatus>>,
    resolved: usize,
}

impl DiscoveryState {
    pub fn new(n: usize) -> Self {
        let pairs = PairIndex::new(n);
        let status = vec![None; pairs.len() + 1];
        Self {
            pairs,
            status,
            resolved: 0,
        }
    }

    pub fn pairs(&self) -> &PairIndex {
        &self.pairs
    }

    pub fn status(&self, u: usize, w: usize) -> Option<PairStatus> {
        self.status[self.pairs.index(u, w)]
    }

    /// Records a certificate; returns its pair index when it was new.
    ///
    /// # Panics
    /// If the certificate contradicts an earlier one.
    pub fn record(&mut self, cert: Certificate) -> Option<usize> {
        let idx = self.pairs.index(cert.u, cert.w);
        match self.status[idx] {
            Some(old) => {
                assert_eq!(old, cert.status, "conflicting certificates for {cert:?}");
                None
            }
            None => {
                self.status[idx] = Some(cert.status);
                self.resolved += 1;
                Some(idx)
            }
        }
    }

    pub fn unresolved(&self) -> usize {
        self.pairs.len() - self.resolved
    }

    fn collect(&self, want: PairStatus) -> Vec<(usize, usize)> {
        (1..=self.pairs.len())
            .filter(|&i| self.status[i] == Some(want))
            .map(|i| self.pairs.pair(i).unwrap())
            .collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.collect(PairStatus::Edge)
    }

    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        self.collect(PairStatus::NonEdge)
    }
}

/// Covert set-cover view of a hidden graph: pairs are elements, vertices are
/// sets. A hitting query on a pair costs two layered queries; a set query on a
/// vertex costs one. Every certificate from every answer is recorded, and
/// newly resolved pairs are reported through [`CovertSource::take_incidental`].
#[derive(Debug, Clone)]
pub struct DiscoverySession {
    oracle: LayeredOracle,
    state: DiscoveryState,
    incidental: Vec<usize>,
}

impl DiscoverySession {
    pub fn new(graph: Graph) -> Self {
        let n = graph.n();
        Self {
            oracle: LayeredOracle::new(graph),
            state: DiscoveryState::new(n),
            incidental: Vec::new(),
        }
    }

    pub fn state(&self) -> &DiscoveryState {
        &self.state
    }

    pub fn oracle(&self) -> &LayeredOracle {
        &self.oracle
    }

    fn absorb(&mut self, certs: impl IntoIterator<Item = Certificate>) {
        for cert in certs {
            if let Some(idx) = self.state.record(cert) {
                self.incidental.push(idx);
            }
        }
    }
}

impl CovertSource for DiscoverySession {
    fn universe_size(&self) -> usize {
        self.state.pairs.len()
    }

    fn num_sets(&self) -> usize {
        self.oracle.n()
    }

    /// `N = n²`.
    fn scale(&self) -> f64 {
        (self.oracle.n() * self.oracle.n()) as f64
    }

    fn hitting_query(&mut self, element: usize) -> Result<Vec<usize>> {
        let (u, w) = self
            .state
            .pairs
            .pair(element)
            .ok_or(Error::ElementOutOfRange {
                element,
                universe_size: self.state.pairs.len(),
            })?;
        let h = hitting_set_h(&mut self.oracle, u, w)?;
        let side: Vec<Certificate> = h.side_information().collect();
        self.absorb(side);
        Ok(h.members)
    }

    fn set_query(&mut self, set: usize) -> Result<Vec<usize>> {
        let answer = self.oracle.layered_query(set)?;
        let certs = certified_pairs(&answer);
        let indices = certs
            .iter()
            .map(|c| self.state.pairs.index(c.u, c.w))
            .collect();
        self.absorb(certs);
        Ok(indices)
    }

    fn take_incidental(&mut self) -> Vec<usize> {
        std::mem::take(&mut self.incidental)
    }

    fn ledger(&self) -> &QueryLedger {
        self.oracle.ledger()
    }

    fn mark_phase(&mut self, label: &str) {
        self.oracle.mark_phase(label);
    }
}

/// Outcome of an online discovery run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscoveryResult {
    pub edges: Vec<(usize, usize)>,
    pub non_edges: Vec<(usize, usize)>,
    pub unresolved: usize,
    /// Vertices chosen as cover sets `Q`.
    pub query_set: Vec<usize>,
    /// Every vertex that was layered-queried at least once.
    pub queried_vertices: Vec<usize>,
    pub ledger: QueryLedger,
    pub rounds: Vec<RoundTrace>,
    pub base_case: Option<BaseCaseTrace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub competitive_ratio: Option<f64>,
}

impl DiscoveryResult {
    pub fn layered_queries(&self) -> u64 {
        self.ledger.layered_queries
    }
}

/// Runs Pseudo-Greedy over the pair/vertex instance of `graph` with `N = n²`.
pub fn run_network_discovery(graph: &Graph, alpha: f64, seed: u64) -> Result<DiscoveryResult> {
    let mut session = DiscoverySession::new(graph.clone());
    let result = run_pseudo_greedy(&mut session, alpha, seed)?;
    debug_assert!(result.failed.is_none(), "every H(u, v) contains u");
    let state = session.state();
    Ok(DiscoveryResult {
        edges: state.edges(),
        non_edges: state.non_edges(),
        unresolved: state.unresolved(),
        query_set: result.cover.clone(),
        queried_vertices: session.oracle().queried_vertices(),
        ledger: result.ledger.clone(),
        rounds: result.rounds().to_vec(),
        base_case: result.base_case().cloned(),
        competitive_ratio: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerificationMode {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub query_set: Vec<usize>,
    pub size: usize,
}

/// The explicit set system `{Q_v}` over the `C(n, 2)` pairs.
pub fn verification_set_system(graph: &Graph) -> Result<SetSystem> {
    let pairs = PairIndex::new(graph.n());
    let sets = (1..=graph.n())
        .map(|v| {
            let answer = layered_answer(graph, v)?;
            Ok(certified_pairs(&answer)
                .iter()
                .map(|c| pairs.index(c.u, c.w))
                .collect())
        })
        .collect::<Result<Vec<Vec<usize>>>>()?;
    SetSystem::new(sets, pairs.len())
}

/// Offline verification: a (minimum, in exact mode) set of vertices whose
/// queries certify every pair. No ledger is charged.
pub fn offline_verification(graph: &Graph, mode: VerificationMode) -> Result<Verification> {
    if mode == VerificationMode::Exact && graph.n() > EXACT_VERIFICATION_CAP {
        return Err(Error::BruteForceCap {
            sets: graph.n(),
            cap: EXACT_VERIFICATION_CAP,
        });
    }
    if graph.n() == 1 {
        return Ok(Verification {
            query_set: Vec::new(),
            size: 0,
        });
    }
    let sys = verification_set_system(graph)?;
    let cover = match mode {
        VerificationMode::Exact => brute_force_min_cover_capped(&sys, EXACT_VERIFICATION_CAP)?,
        VerificationMode::Greedy => greedy_cover(&sys, 1.0)?,
    };
    Ok(Verification {
        size: cover.len(),
        query_set: cover.set_indices,
    })
}

/// True iff queries at `vertices` jointly certify every pair.
pub fn certifies_all(graph: &Graph, vertices: &[usize]) -> Result<bool> {
    let mut state = DiscoveryState::new(graph.n());
    for &v in vertices {
        for cert in certified_pairs(&layered_answer(graph, v)?) {
            state.record(cert);
        }
    }
    Ok(state.unresolved() == 0)
}

/// Layered queries spent per offline-optimal query.
pub fn competitive_ratio(result: &DiscoveryResult, opt_size: usize) -> f64 {
    result.layered_queries() as f64 / opt_size as f64
}
