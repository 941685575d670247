//! Limits and results shared by the exact solvers.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

/// Witnesses kept when `max_solutions` is 0.
pub const DEFAULT_WITNESS_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveLimits {
    /// Cap on the number of witnesses returned; 0 keeps the default cap.
    /// Counting is always exact when no budget trips.
    pub max_solutions: u64,
    /// Cap on search transitions; 0 means unlimited.
    pub node_budget: u64,
    /// Wall-clock cap in milliseconds; 0 means unlimited.
    pub time_budget_ms: u64,
    /// When false, only the count is computed and no witnesses are kept.
    #[serde(default = "default_true")]
    pub witnesses: bool,
}

fn default_true() -> bool {
    true
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits { max_solutions: 0, node_budget: 0, time_budget_ms: 0, witnesses: true }
    }
}

impl SolveLimits {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn witness_cap(&self) -> usize {
        if !self.witnesses {
            0
        } else if self.max_solutions == 0 {
            DEFAULT_WITNESS_CAP
        } else {
            self.max_solutions.min(usize::MAX as u64) as usize
        }
    }

    pub fn count_only(mut self) -> Self {
        self.witnesses = false;
        self
    }

    pub fn with_nodes(mut self, n: u64) -> Self {
        self.node_budget = n;
        self
    }

    pub fn with_time(mut self, d: Duration) -> Self {
        self.time_budget_ms = d.as_millis() as u64;
        self
    }
}

/// Tracks node and time budgets during a search.
#[derive(Debug)]
pub(crate) struct Budget {
    nodes: u64,
    node_cap: u64,
    deadline: Option<Instant>,
}

impl Budget {
    pub fn new(l: &SolveLimits) -> Self {
        let deadline = (l.time_budget_ms > 0).then(|| Instant::now() + Duration::from_millis(l.time_budget_ms));
        Budget { nodes: 0, node_cap: l.node_budget, deadline }
    }

    /// Charges `n` nodes; false once any budget is exceeded.
    pub fn charge(&mut self, n: u64) -> bool {
        self.nodes = self.nodes.saturating_add(n);
        if self.node_cap > 0 && self.nodes > self.node_cap {
            return false;
        }
        match self.deadline {
            Some(d) => Instant::now() < d,
            None => true,
        }
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingCount<W> {
    /// Exact when `exhausted`; otherwise zero.
    #[serde(with = "crate::bignum")]
    pub count: BigUint,
    pub exhausted: bool,
    pub witnesses: Vec<W>,
    pub nodes: u64,
}

impl<W> TilingCount<W> {
    pub fn budget_tripped(nodes: u64) -> Self {
        TilingCount { count: BigUint::default(), exhausted: false, witnesses: Vec::new(), nodes }
    }

    pub fn count_u64(&self) -> Option<u64> {
        u64::try_from(&self.count).ok()
    }

    pub fn map_witnesses<U>(self, f: impl FnMut(W) -> U) -> TilingCount<U> {
        TilingCount {
            count: self.count,
            exhausted: self.exhausted,
            witnesses: self.witnesses.into_iter().map(f).collect(),
            nodes: self.nodes,
        }
    }
}

/// Number of worker threads requested through `TILEFORGE_THREADS`, if set.
pub fn configured_threads() -> Option<usize> {
    std::env::var("TILEFORGE_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Runs `f` inside a rayon pool sized by `TILEFORGE_THREADS` (or rayon's default).
pub fn with_thread_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    match configured_threads() {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

/// Runs `f` inside a rayon pool with exactly `n` threads.
pub fn with_threads<R: Send>(n: usize, f: impl FnOnce() -> R + Send) -> R {
    match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
