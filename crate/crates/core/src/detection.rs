//! The semantic core: domination/separation predicates, detection-pair
//! verification, and exponential brute-force oracles for DP(G), the
//! domination number and the metric dimension. The oracles are the ground
//! truth everything else is tested against.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// A pair of detector sets: watchers `W` and listeners `L`. The size is
/// `|W| + |L|`; a vertex carrying both roles counts twice.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionPair {
    pub watchers: BTreeSet<Vertex>,
    pub listeners: BTreeSet<Vertex>,
}

impl DetectionPair {
    pub fn new<W, L>(watchers: W, listeners: L) -> Self
    where
        W: IntoIterator<Item = Vertex>,
        L: IntoIterator<Item = Vertex>,
    {
        DetectionPair {
            watchers: watchers.into_iter().collect(),
            listeners: listeners.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        DetectionPair::default()
    }

    pub fn size(&self) -> usize {
        self.watchers.len() + self.listeners.len()
    }
}

/// True iff `u` lies in the closed neighborhood of `w`.
pub fn dominates(g: &Graph, w: Vertex, u: Vertex) -> bool {
    w == u || g.has_edge(w, u)
}

/// True iff listener `l` tells `u` and `v` apart, i.e. `d(l,u) != d(l,v)`.
pub fn separates(g: &Graph, l: Vertex, u: Vertex, v: Vertex) -> Result<bool> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let dist = g.bfs_distances(l);
    Ok(dist[u] != dist[v])
}

/// Outcome of verifying a detection pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyOutcome {
    Valid,
    /// A pair of vertices that is neither dominated nor separated.
    Invalid { witness: (Vertex, Vertex) },
}

impl VerifyOutcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, VerifyOutcome::Valid)
    }
}

/// Checks whether `dp` is a detection pair of `g`: every pair of distinct
/// vertices with neither endpoint dominated by a watcher must be separated
/// by some listener. On failure the first violating pair (in id order) is
/// reported.
pub fn verify(g: &Graph, dp: &DetectionPair) -> Result<VerifyOutcome> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let listener_dists: Vec<Vec<usize>> = dp
        .listeners
        .iter()
        .map(|&l| g.bfs_distances(l))
        .collect();
    Ok(verify_with_dists(g, &dp.watchers, &listener_dists))
}

/// Verification core working from precomputed listener distance rows.
/// First computes the undominated vertex set, then scans its pairs.
pub(crate) fn verify_with_dists(
    g: &Graph,
    watchers: &BTreeSet<Vertex>,
    listener_dists: &[Vec<usize>],
) -> VerifyOutcome {
    let n = g.n();
    let mut dominated = vec![false; n];
    for &w in watchers {
        dominated[w] = true;
        for &u in g.neighbors(w) {
            dominated[u] = true;
        }
    }
    let undominated: Vec<Vertex> = (0..n).filter(|&v| !dominated[v]).collect();
    for (i, &u) in undominated.iter().enumerate() {
        for &v in &undominated[i + 1..] {
            if !listener_dists.iter().any(|d| d[u] != d[v]) {
                return VerifyOutcome::Invalid { witness: (u, v) };
            }
        }
    }
    VerifyOutcome::Valid
}

/// Default brute-force vertex-count ceiling; override with the
/// `DETPAIR_BRUTE_CEILING` environment variable.
pub const DEFAULT_BRUTE_CEILING: usize = 14;

/// Hard cap on the ceiling; the oracle's bitmask bookkeeping assumes it.
const MAX_BRUTE_CEILING: usize = 32;

pub fn brute_ceiling() -> usize {
    std::env::var("DETPAIR_BRUTE_CEILING")
        .ok()
        .and_then(|s| s.parse().ok())
        .map(|c: usize| c.min(MAX_BRUTE_CEILING))
        .unwrap_or(DEFAULT_BRUTE_CEILING)
}

/// Optimal detection pair found by brute force.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub value: usize,
    pub witness: DetectionPair,
}

/// Optimal dominating or resolving set found by brute force.
#[derive(Debug, Clone)]
pub struct SetOracleResult {
    pub value: usize,
    pub witness: BTreeSet<Vertex>,
}

/// Brute-force optimum DP(G), searching assignments of each vertex to
/// {none, watcher, listener, both} in increasing total size. Detector slots
/// `0..n` are watcher positions and `n..2n` listener positions; for each
/// size the slot subsets are enumerated lexicographically, so the witness
/// is deterministic.
pub fn dp_oracle(g: &Graph, k_max: usize) -> Result<OracleResult> {
    dp_oracle_with_ceiling(g, k_max, brute_ceiling())
}

pub fn dp_oracle_with_ceiling(g: &Graph, k_max: usize, ceiling: usize) -> Result<OracleResult> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let ceiling = ceiling.min(MAX_BRUTE_CEILING);
    if n > ceiling {
        return Err(Error::TooLarge { n, ceiling });
    }
    let all_dists: Vec<Vec<usize>> = (0..n).map(|v| g.bfs_distances(v)).collect();
    let nbhd: Vec<u64> = (0..n)
        .map(|v| {
            let mut m = 1u64 << v;
            for &u in g.neighbors(v) {
                m |= 1 << u;
            }
            m
        })
        .collect();
    let full: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };

    let check = |slots: &[usize]| -> bool {
        let mut dom = 0u64;
        for &s in slots {
            if s < n {
                dom |= nbhd[s];
            }
        }
        let und = full & !dom;
        let mut rest = und;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut rest2 = rest;
            while rest2 != 0 {
                let v = rest2.trailing_zeros() as usize;
                rest2 &= rest2 - 1;
                let sep = slots.iter().any(|&s| {
                    s >= n && all_dists[s - n][u] != all_dists[s - n][v]
                });
                if !sep {
                    return false;
                }
            }
        }
        true
    };

    let bound = k_max.min(2 * n);
    for k in 0..=bound {
        let mut found = None;
        for_each_combination(2 * n, k, &mut |slots| {
            if check(slots) {
                found = Some(slots.to_vec());
                true
            } else {
                false
            }
        });
        if let Some(slots) = found {
            let witness = DetectionPair::new(
                slots.iter().copied().filter(|&s| s < n),
                slots.iter().filter(|&&s| s >= n).map(|&s| s - n),
            );
            return Ok(OracleResult { value: k, witness });
        }
    }
    Err(Error::NoSolutionWithin(k_max))
}

/// Minimum dominating set by subset enumeration in increasing size.
pub fn gamma_oracle(g: &Graph) -> Result<SetOracleResult> {
    small_set_oracle(g, |g, set| {
        let n = g.n();
        let mut dom = vec![false; n];
        for &w in set {
            dom[w] = true;
            for &u in g.neighbors(w) {
                dom[u] = true;
            }
        }
        dom.into_iter().all(|b| b)
    })
}

/// Minimum resolving set by subset enumeration in increasing size.
pub fn md_oracle(g: &Graph) -> Result<SetOracleResult> {
    let dists: Vec<Vec<usize>> = (0..g.n()).map(|v| g.bfs_distances(v)).collect();
    small_set_oracle(g, move |g, set| {
        let n = g.n();
        for u in 0..n {
            for v in u + 1..n {
                if !set.iter().any(|&l| dists[l][u] != dists[l][v]) {
                    return false;
                }
            }
        }
        true
    })
}

fn small_set_oracle(
    g: &Graph,
    valid: impl Fn(&Graph, &[Vertex]) -> bool,
) -> Result<SetOracleResult> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let ceiling = brute_ceiling();
    if n > ceiling {
        return Err(Error::TooLarge { n, ceiling });
    }
    for k in 0..=n {
        let mut found = None;
        for_each_combination(n, k, &mut |set| {
            if valid(g, set) {
                found = Some(set.to_vec());
                true
            } else {
                false
            }
        });
        if let Some(set) = found {
            return Ok(SetOracleResult {
                value: k,
                witness: set.into_iter().collect(),
            });
        }
    }
    unreachable!("the full vertex set always dominates and resolves")
}

/// Visits all k-subsets of `0..m` in lexicographic order; stops early when
/// the callback returns true.
pub(crate) fn for_each_combination(m: usize, k: usize, f: &mut impl FnMut(&[usize]) -> bool) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx) {
            return;
        }
        // Advance to the next combination.
        let mut i = k;
        while i > 0 && idx[i - 1] == (i - 1) + m - k {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
