//! Reduction from detection pair to set cover plus a greedy solver. The
//! universe is the set of vertex pairs; each vertex contributes a watcher
//! set and a listener set, so a cover corresponds exactly to a detection
//! pair and the greedy bound gives a (2 ln n + 1)-factor approximation.

use crate::detection::DetectionPair;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Practical input ceiling: the reduction stores 2n bitsets of C(n,2) bits,
/// so memory grows with n^3.
pub const SETCOVER_CEILING: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DetectorKind {
    Watcher,
    Listener,
}

/// Canonical index of the pair `{u, v}` with `u < v` in the universe.
pub fn pair_index(u: Vertex, v: Vertex, n: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

#[derive(Debug, Clone)]
struct Bitset {
    blocks: Vec<u64>,
}

impl Bitset {
    fn new(len: usize) -> Self {
        Bitset {
            blocks: vec![0; len.div_ceil(64)],
        }
    }

    fn set(&mut self, i: usize) {
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    /// Number of bits set in `self` but not in `other`.
    fn count_minus(&self, other: &Bitset) -> usize {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & !b).count_ones() as usize)
            .sum()
    }

    fn union_in(&mut self, other: &Bitset) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    fn count(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }
}

/// One candidate set of the reduction, tagged with the detector it stands
/// for.
#[derive(Debug, Clone)]
pub struct CandidateSet {
    pub vertex: Vertex,
    pub kind: DetectorKind,
    coverage: Bitset,
}

impl CandidateSet {
    pub fn covers_pair(&self, u: Vertex, v: Vertex, n: usize) -> bool {
        self.coverage.get(pair_index(u.min(v), u.max(v), n))
    }

    pub fn coverage_count(&self) -> usize {
        self.coverage.count()
    }
}

/// The full reduction output: C(n,2) pair-elements and 2n candidate sets,
/// watchers first (ascending vertex id) then listeners.
#[derive(Debug, Clone)]
pub struct SetCoverInstance {
    pub n: usize,
    pub universe_size: usize,
    pub sets: Vec<CandidateSet>,
}

/// Builds the reduction: the watcher set of `v` covers `{x, y}` iff `v`
/// dominates `x` or `y`; the listener set of `v` covers `{x, y}` iff
/// `d(v,x) != d(v,y)`.
pub fn build_instance(g: &Graph) -> Result<SetCoverInstance> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    if n < 2 {
        return Err(Error::BadParam(
            "set-cover reduction needs n >= 2".into(),
        ));
    }
    if n > SETCOVER_CEILING {
        return Err(Error::TooLarge {
            n,
            ceiling: SETCOVER_CEILING,
        });
    }
    let universe_size = n * (n - 1) / 2;
    let mut sets = Vec::with_capacity(2 * n);
    for v in 0..n {
        let mut dominated = vec![false; n];
        dominated[v] = true;
        for &u in g.neighbors(v) {
            dominated[u] = true;
        }
        let mut coverage = Bitset::new(universe_size);
        for x in 0..n {
            for y in x + 1..n {
                if dominated[x] || dominated[y] {
                    coverage.set(pair_index(x, y, n));
                }
            }
        }
        sets.push(CandidateSet {
            vertex: v,
            kind: DetectorKind::Watcher,
            coverage,
        });
    }
    for v in 0..n {
        let dist = g.bfs_distances(v);
        let mut coverage = Bitset::new(universe_size);
        for x in 0..n {
            for y in x + 1..n {
                if dist[x] != dist[y] {
                    coverage.set(pair_index(x, y, n));
                }
            }
        }
        sets.push(CandidateSet {
            vertex: v,
            kind: DetectorKind::Listener,
            coverage,
        });
    }
    Ok(SetCoverInstance {
        n,
        universe_size,
        sets,
    })
}

impl SetCoverInstance {
    /// True iff the given tagged collection covers the whole universe.
    pub fn covers(&self, picks: &[(Vertex, DetectorKind)]) -> bool {
        let mut covered = Bitset::new(self.universe_size);
        for &(v, kind) in picks {
            let idx = match kind {
                DetectorKind::Watcher => v,
                DetectorKind::Listener => self.n + v,
            };
            covered.union_in(&self.sets[idx].coverage);
        }
        covered.count() == self.universe_size
    }
}

/// Classic greedy set cover: each step picks the set covering the most
/// still-uncovered elements. Ties go to the earliest set in instance order
/// (watcher kind before listener, then lower vertex id).
pub fn greedy_set_cover(inst: &SetCoverInstance) -> Result<Vec<(Vertex, DetectorKind)>> {
    let mut covered = Bitset::new(inst.universe_size);
    let mut covered_count = 0;
    let mut picks = Vec::new();
    while covered_count < inst.universe_size {
        let mut best: Option<(usize, usize)> = None;
        for (i, set) in inst.sets.iter().enumerate() {
            let gain = set.coverage.count_minus(&covered);
            if best.map_or(true, |(_, g)| gain > g) {
                best = Some((i, gain));
            }
        }
        let (i, gain) = best.expect("instance has at least one set");
        if gain == 0 {
            let missing = (0..inst.universe_size)
                .find(|&e| !covered.get(e))
                .unwrap_or(0);
            return Err(Error::Uncoverable(missing));
        }
        covered.union_in(&inst.sets[i].coverage);
        covered_count += gain;
        picks.push((inst.sets[i].vertex, inst.sets[i].kind));
    }
    Ok(picks)
}

/// Greedy approximation for DP(G) on an arbitrary connected graph:
/// size <= (2 ln n + 1) * DP(G).
pub fn approx_detection_pair(g: &Graph) -> Result<DetectionPair> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.n() < 2 {
        return Ok(DetectionPair::empty());
    }
    let inst = build_instance(g)?;
    let picks = greedy_set_cover(&inst)?;
    let mut dp = DetectionPair::empty();
    for (v, kind) in picks {
        match kind {
            DetectorKind::Watcher => dp.watchers.insert(v),
            DetectorKind::Listener => dp.listeners.insert(v),
        };
    }
    Ok(dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::{dp_oracle, verify};
    use crate::instances;

    #[test]
    fn k4_instance() {
        let g = instances::gen_complete(4).unwrap();
        let inst = build_instance(&g).unwrap();
        assert_eq!(inst.universe_size, 6);
        for v in 0..4 {
            assert_eq!(inst.sets[v].coverage_count(), 6);
        }
        let picks = greedy_set_cover(&inst).unwrap();
        assert_eq!(picks, vec![(0, DetectorKind::Watcher)]);
    }

    #[test]
    fn p3_instance() {
        let g = instances::gen_path(3).unwrap();
        let inst = build_instance(&g).unwrap();
        // L_0 separates every pair of the path.
        assert_eq!(inst.sets[3].kind, DetectorKind::Listener);
        assert_eq!(inst.sets[3].coverage_count(), 3);
        // W_1 dominates everything.
        assert_eq!(inst.sets[1].coverage_count(), 3);
        let picks = greedy_set_cover(&inst).unwrap();
        assert_eq!(picks.len(), 1);
        assert_eq!(picks[0].1, DetectorKind::Watcher);
    }

    #[test]
    fn degenerate_single_vertex() {
        let g = crate::graph::Graph::new(1);
        let dp = approx_detection_pair(&g).unwrap();
        assert_eq!(dp.size(), 0);
    }

    #[test]
    fn approx_examples() {
        let k4 = instances::gen_complete(4).unwrap();
        let dp = approx_detection_pair(&k4).unwrap();
        assert_eq!(dp.size(), 1);
        assert!(verify(&k4, &dp).unwrap().is_valid());

        let p8 = instances::gen_path(8).unwrap();
        let dp = approx_detection_pair(&p8).unwrap();
        assert!(verify(&p8, &dp).unwrap().is_valid());
        let opt = dp_oracle(&p8, 8).unwrap().value;
        assert_eq!(opt, 1);
        assert!(dp.size() as f64 <= (2.0 * (8f64).ln() + 1.0) * opt as f64);

        let star = instances::gen_star(5).unwrap();
        let dp = approx_detection_pair(&star).unwrap();
        assert!(verify(&star, &dp).unwrap().is_valid());
        let opt = dp_oracle(&star, 8).unwrap().value;
        assert!(dp.size() as f64 <= (2.0 * (6f64).ln() + 1.0) * opt as f64);
    }

    #[test]
    fn cover_iff_detection_pair() {
        // One-to-one correspondence, both directions, on small graphs with
        // pseudo-random collections of tagged sets.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for seed in 0..12u64 {
            let g = if seed % 2 == 0 {
                instances::gen_random_tree(7, seed).unwrap()
            } else {
                instances::gen_random_graph(7, 0.4, seed).unwrap()
            };
            let inst = build_instance(&g).unwrap();
            for _ in 0..40 {
                let mut picks = Vec::new();
                let mut dp = DetectionPair::empty();
                for v in 0..g.n() {
                    if rng.random::<f64>() < 0.25 {
                        picks.push((v, DetectorKind::Watcher));
                        dp.watchers.insert(v);
                    }
                    if rng.random::<f64>() < 0.25 {
                        picks.push((v, DetectorKind::Listener));
                        dp.listeners.insert(v);
                    }
                }
                let covered = inst.covers(&picks);
                let valid = verify(&g, &dp).unwrap().is_valid();
                assert_eq!(covered, valid, "graph seed {seed}, picks {picks:?}");
            }
        }
    }

    #[test]
    fn greedy_within_log_bound_of_oracle() {
        for seed in 0..10u64 {
            let g = instances::gen_random_graph(9, 0.35, seed).unwrap();
            let inst = build_instance(&g).unwrap();
            let picks = greedy_set_cover(&inst).unwrap();
            let opt = dp_oracle(&g, 9).unwrap().value;
            let bound = ((inst.universe_size as f64).ln() + 1.0) * opt as f64;
            assert!(picks.len() as f64 <= bound);
        }
    }
}
