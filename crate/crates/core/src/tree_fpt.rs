//! Exact FPT decision procedure for detection pair on trees: given (T, k),
//! decide whether DP(T) <= k and return a witness on YES.
//!
//! Phase 1 covers solutions with at most one listener (dominating set, then
//! one listener position at a time with a bounded watcher-candidate set).
//! Phase 2 assumes at least two listeners: enumerate detector choices on
//! the special branching points with two or more legs, grow the region
//! distinguished by the fixed listeners, guess remaining listeners on the
//! threads of the contracted pending forest, and fill in watchers from the
//! distance-partition candidate sets of the still-undistinguished subtrees.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::detection::{for_each_combination, verify_with_dists, DetectionPair};
use crate::error::{Error, Result};
use crate::graph::{analyze_tree, Graph, TreeStructure, Vertex};
use crate::tree_exact::min_dominating_set_tree;

#[derive(Debug, Clone, Copy, Default)]
pub struct FptConfig {
    /// Disables the pending-forest size and leaf-count pruning, for
    /// differential testing; answers must not change.
    pub no_prune: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FptOutcome {
    Yes(DetectionPair),
    No,
}

impl FptOutcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, FptOutcome::Yes(_))
    }
}

/// Choice tags for the detectors placed on a special branching point and
/// its legs. `1a`..`1c` apply when at most one long leg is attached,
/// `2a`..`2d` when at least two are.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChoiceTag {
    T1a,
    T1b,
    T1c,
    T2a,
    T2b,
    T2c,
    T2d,
}

/// Detectors induced on the subtree of one special branching point by a
/// choice tag.
#[derive(Debug, Clone)]
pub struct SbpChoice {
    pub x: Vertex,
    pub tag: ChoiceTag,
    pub watchers: Vec<Vertex>,
    pub listeners: Vec<Vertex>,
}

impl SbpChoice {
    pub fn cost(&self) -> usize {
        self.watchers.len() + self.listeners.len()
    }
}

/// Admissible choices for special branching point `x`, in tag order.
///
/// With `t` leaf neighbors and `l` legs of length >= 2:
/// - l <= 1: a watcher at x; a watcher at x plus a listener at the leaf of
///   a longest leg; if t + l = 2, a single listener at that leaf.
/// - l >= 2: a watcher at x plus listeners at the leaves of all (or all but
///   a shortest) long legs; if t <= 1, listeners at the leaves of all (or
///   all but a shortest) legs and no watcher.
pub fn admissible_choices(ts: &TreeStructure, x: Vertex) -> Vec<SbpChoice> {
    let t = ts.stems[x];
    let all_legs = ts.legs.at(x);
    let long: Vec<_> = all_legs.iter().filter(|l| l.len() >= 2).collect();
    let l = long.len();
    let mut out = Vec::new();

    // Longest-first order; ties by smaller leaf id.
    let mut by_len_desc: Vec<(usize, Vertex)> =
        all_legs.iter().map(|leg| (leg.len(), leg.leaf())).collect();
    by_len_desc.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut long_desc: Vec<(usize, Vertex)> = long.iter().map(|leg| (leg.len(), leg.leaf())).collect();
    long_desc.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

    if l <= 1 {
        out.push(SbpChoice {
            x,
            tag: ChoiceTag::T1a,
            watchers: vec![x],
            listeners: vec![],
        });
        out.push(SbpChoice {
            x,
            tag: ChoiceTag::T1b,
            watchers: vec![x],
            listeners: vec![by_len_desc[0].1],
        });
        if t + l == 2 {
            out.push(SbpChoice {
                x,
                tag: ChoiceTag::T1c,
                watchers: vec![],
                listeners: vec![by_len_desc[0].1],
            });
        }
    } else {
        out.push(SbpChoice {
            x,
            tag: ChoiceTag::T2a,
            watchers: vec![x],
            listeners: long_desc.iter().map(|&(_, leaf)| leaf).collect(),
        });
        // Drop a shortest long leg (largest leaf id among the shortest).
        out.push(SbpChoice {
            x,
            tag: ChoiceTag::T2b,
            watchers: vec![x],
            listeners: long_desc[..l - 1].iter().map(|&(_, leaf)| leaf).collect(),
        });
        if t <= 1 {
            out.push(SbpChoice {
                x,
                tag: ChoiceTag::T2c,
                watchers: vec![],
                listeners: by_len_desc.iter().map(|&(_, leaf)| leaf).collect(),
            });
            out.push(SbpChoice {
                x,
                tag: ChoiceTag::T2d,
                watchers: vec![],
                listeners: by_len_desc[..all_legs.len() - 1]
                    .iter()
                    .map(|&(_, leaf)| leaf)
                    .collect(),
            });
        }
    }
    out
}

/// One combination: an admissible choice for every special branching point
/// with at least two legs, with the induced detector sets.
#[derive(Debug, Clone)]
pub struct Combination {
    pub choices: Vec<SbpChoice>,
    pub watchers: BTreeSet<Vertex>,
    pub listeners: BTreeSet<Vertex>,
}

impl Combination {
    pub fn cost(&self) -> usize {
        self.watchers.len() + self.listeners.len()
    }
}

/// All combinations of admissible choices across the special branching
/// points with >= 2 legs (ascending id, tags in declaration order),
/// skipping those whose induced detector count exceeds `k`.
pub fn enumerate_sbp_combinations(ts: &TreeStructure, k: usize) -> Vec<Combination> {
    let b2 = ts.b2plus();
    let per_point: Vec<Vec<SbpChoice>> = b2.iter().map(|&x| admissible_choices(ts, x)).collect();
    let mut out = Vec::new();
    let mut current: Vec<SbpChoice> = Vec::new();
    fn rec(
        per_point: &[Vec<SbpChoice>],
        i: usize,
        k: usize,
        cost: usize,
        current: &mut Vec<SbpChoice>,
        out: &mut Vec<Combination>,
    ) {
        if i == per_point.len() {
            let mut watchers = BTreeSet::new();
            let mut listeners = BTreeSet::new();
            for c in current.iter() {
                watchers.extend(c.watchers.iter().copied());
                listeners.extend(c.listeners.iter().copied());
            }
            out.push(Combination {
                choices: current.clone(),
                watchers,
                listeners,
            });
            return;
        }
        for choice in &per_point[i] {
            let c = cost + choice.cost();
            if c > k {
                continue;
            }
            current.push(choice.clone());
            rec(per_point, i + 1, k, c, current, out);
            current.pop();
        }
    }
    rec(&per_point, 0, k, 0, &mut current, &mut out);
    out
}

/// Vertices of the unique u-v path in a tree together with all vertices of
/// legs attached to degree-3 inner vertices of the path. A pair of
/// listeners at u and v distinguishes exactly this set.
pub fn path_plus(g: &Graph, u: Vertex, v: Vertex) -> Vec<Vertex> {
    let path = tree_path(g, u, v);
    let mut out = path.clone();
    for i in 1..path.len().saturating_sub(1) {
        let w = path[i];
        if g.degree(w) != 3 {
            continue;
        }
        let off = g
            .neighbors(w)
            .iter()
            .copied()
            .find(|&z| z != path[i - 1] && z != path[i + 1])
            .expect("degree-3 inner vertex has an off-path neighbor");
        // Follow the off-path branch; it counts only if it is a leg.
        let mut branch = Vec::new();
        let mut prev = w;
        let mut cur = off;
        loop {
            branch.push(cur);
            match g.degree(cur) {
                1 => {
                    out.extend_from_slice(&branch);
                    break;
                }
                2 => {
                    let next = g
                        .neighbors(cur)
                        .iter()
                        .copied()
                        .find(|&z| z != prev)
                        .unwrap();
                    prev = cur;
                    cur = next;
                }
                _ => break, // another branching point: not a leg
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// The vertex sequence of the unique u-v path in a tree.
pub fn tree_path(g: &Graph, u: Vertex, v: Vertex) -> Vec<Vertex> {
    let mut parent = vec![usize::MAX; g.n()];
    let mut seen = vec![false; g.n()];
    let mut queue = VecDeque::new();
    seen[u] = true;
    queue.push_back(u);
    while let Some(w) = queue.pop_front() {
        if w == v {
            break;
        }
        for &z in g.neighbors(w) {
            if !seen[z] {
                seen[z] = true;
                parent[z] = w;
                queue.push_back(z);
            }
        }
    }
    let mut path = vec![v];
    let mut cur = v;
    while cur != u {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

/// A pending subtree hanging off the distinguished region at `attach`.
#[derive(Debug, Clone)]
pub struct PendingTree {
    pub attach: Vertex,
    /// Vertices of the subtree including `attach`, ascending.
    pub vertices: Vec<Vertex>,
}

#[derive(Debug, Clone)]
pub struct Region {
    /// Membership in V*, the region distinguished by the fixed listeners.
    pub vstar: Vec<bool>,
    /// Boundary vertices of V* with a neighbor outside, ascending.
    pub boundary: Vec<Vertex>,
    /// Pending subtrees containing at least one vertex that is not
    /// distinguished by the fixed detectors.
    pub forest: Vec<PendingTree>,
}

/// Computes the region distinguished by the fixed listener pairs and the
/// pending forest of subtrees still containing undistinguished vertices.
pub fn distinguished_region(
    g: &Graph,
    watchers: &BTreeSet<Vertex>,
    listeners: &BTreeSet<Vertex>,
) -> Region {
    let n = g.n();
    let ls: Vec<Vertex> = listeners.iter().copied().collect();
    let mut vstar = vec![false; n];
    for i in 0..ls.len() {
        for j in i + 1..ls.len() {
            for v in path_plus(g, ls[i], ls[j]) {
                vstar[v] = true;
            }
        }
    }

    let undistinguished = undistinguished_vertices(g, watchers, listeners);

    let mut boundary = Vec::new();
    for v in 0..n {
        if vstar[v] && g.neighbors(v).iter().any(|&u| !vstar[u]) {
            boundary.push(v);
        }
    }

    // Each component of T - T* attaches to exactly one boundary vertex;
    // group the components by it.
    let mut comp_of = vec![usize::MAX; n];
    let mut groups: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for &x in &boundary {
        for &s in g.neighbors(x) {
            if vstar[s] || comp_of[s] != usize::MAX {
                continue;
            }
            let mut comp = vec![s];
            comp_of[s] = x;
            let mut queue = VecDeque::from([s]);
            while let Some(w) = queue.pop_front() {
                for &z in g.neighbors(w) {
                    if !vstar[z] && comp_of[z] == usize::MAX {
                        comp_of[z] = x;
                        comp.push(z);
                        queue.push_back(z);
                    }
                }
            }
            groups.entry(x).or_default().extend(comp);
        }
    }

    let mut forest = Vec::new();
    for (attach, mut verts) in groups {
        if !verts.iter().any(|&v| undistinguished[v]) {
            continue;
        }
        verts.push(attach);
        verts.sort_unstable();
        forest.push(PendingTree {
            attach,
            vertices: verts,
        });
    }
    Region {
        vstar,
        boundary,
        forest,
    }
}

/// Per-vertex flag: not dominated by a watcher and sharing its full
/// listener distance vector with some other undominated vertex.
fn undistinguished_vertices(
    g: &Graph,
    watchers: &BTreeSet<Vertex>,
    listeners: &BTreeSet<Vertex>,
) -> Vec<bool> {
    let n = g.n();
    let mut dominated = vec![false; n];
    for &w in watchers {
        dominated[w] = true;
        for &u in g.neighbors(w) {
            dominated[u] = true;
        }
    }
    let dists: Vec<Vec<usize>> = listeners.iter().map(|&l| g.bfs_distances(l)).collect();
    let mut classes: BTreeMap<Vec<usize>, Vec<Vertex>> = BTreeMap::new();
    for v in 0..n {
        if !dominated[v] {
            let key: Vec<usize> = dists.iter().map(|d| d[v]).collect();
            classes.entry(key).or_default().push(v);
        }
    }
    let mut out = vec![false; n];
    for group in classes.values() {
        if group.len() >= 2 {
            for &v in group {
                out[v] = true;
            }
        }
    }
    out
}

/// A subtree of the host tree given by a vertex subset.
#[derive(Debug, Clone)]
pub struct SubTree {
    pub attach: Vertex,
    pub vertices: Vec<Vertex>,
}

impl SubTree {
    fn contains(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    fn degree_in(&self, g: &Graph, v: Vertex) -> usize {
        g.neighbors(v).iter().filter(|&&u| self.contains(u)).count()
    }

    pub fn leaf_count(&self, g: &Graph) -> usize {
        if self.vertices.len() == 1 {
            return 1;
        }
        self.vertices
            .iter()
            .filter(|&&v| self.degree_in(g, v) == 1)
            .count()
    }
}

/// Contracts a pending tree: (i) drop every leg whose special branching
/// point (within the pending tree) has only that one leg; (ii) drop every
/// leaf adjacent to a fixed watcher.
pub fn contract_pending_tree(
    g: &Graph,
    pending: &PendingTree,
    fixed_watchers: &BTreeSet<Vertex>,
) -> SubTree {
    let mut sub = SubTree {
        attach: pending.attach,
        vertices: pending.vertices.clone(),
    };

    // Rule (i): walk up from each leaf of the subtree through degree-2
    // vertices to find its leg and owning branching point.
    let mut legs_of: BTreeMap<Vertex, Vec<Vec<Vertex>>> = BTreeMap::new();
    for &leaf in &sub.vertices {
        if sub.degree_in(g, leaf) != 1 {
            continue;
        }
        let mut path = vec![leaf];
        let mut prev = leaf;
        let mut cur = *g
            .neighbors(leaf)
            .iter()
            .find(|&&u| sub.contains(u))
            .unwrap();
        loop {
            match sub.degree_in(g, cur) {
                d if d >= 3 => {
                    legs_of.entry(cur).or_default().push(path);
                    break;
                }
                2 => {
                    let next = g
                        .neighbors(cur)
                        .iter()
                        .copied()
                        .find(|&z| sub.contains(z) && z != prev);
                    match next {
                        Some(next) => {
                            path.push(cur);
                            prev = cur;
                            cur = next;
                        }
                        None => break,
                    }
                }
                _ => break, // the subtree is a bare path
            }
        }
    }
    let mut removed: BTreeSet<Vertex> = BTreeSet::new();
    for legs in legs_of.values() {
        if legs.len() == 1 {
            removed.extend(legs[0].iter().copied());
        }
    }
    sub.vertices.retain(|v| !removed.contains(v));

    // Rule (ii): leaves adjacent to a fixed watcher go.
    if sub.vertices.len() > 1 {
        let drop: Vec<Vertex> = sub
            .vertices
            .iter()
            .copied()
            .filter(|&v| {
                sub.degree_in(g, v) == 1
                    && (fixed_watchers.contains(&v)
                        || g.neighbors(v).iter().any(|u| fixed_watchers.contains(u)))
            })
            .collect();
        sub.vertices.retain(|v| !drop.contains(v));
    }
    sub
}

/// A maximal thread of a contracted pending tree: a path whose inner
/// vertices have degree 2. A single-vertex tree yields the degenerate
/// thread (v, v).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thread {
    pub u: Vertex,
    pub v: Vertex,
}

pub fn threads(g: &Graph, sub: &SubTree) -> Vec<Thread> {
    if sub.vertices.is_empty() {
        return Vec::new();
    }
    if sub.vertices.len() == 1 {
        let v = sub.vertices[0];
        return vec![Thread { u: v, v }];
    }
    let mut out = Vec::new();
    let mut visited_edges: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    for &s in &sub.vertices {
        if sub.degree_in(g, s) == 2 {
            continue;
        }
        for &nb in g.neighbors(s) {
            if !sub.contains(nb) {
                continue;
            }
            let key = (s.min(nb), s.max(nb));
            if visited_edges.contains(&key) {
                continue;
            }
            // Walk the thread from s through nb to the next endpoint.
            let mut prev = s;
            let mut cur = nb;
            visited_edges.insert(key);
            while sub.degree_in(g, cur) == 2 {
                let next = g
                    .neighbors(cur)
                    .iter()
                    .copied()
                    .find(|&z| sub.contains(z) && z != prev)
                    .unwrap();
                visited_edges.insert((cur.min(next), cur.max(next)));
                prev = cur;
                cur = next;
            }
            out.push(Thread {
                u: s.min(cur),
                v: s.max(cur),
            });
        }
    }
    out.sort_by_key(|t| (t.u, t.v));
    out.dedup();
    out
}

/// Moves a listener position at a thread endpoint to the leaf of one of
/// the endpoint's legs (smallest leaf id) when the endpoint is a special
/// branching point of the host tree.
fn relocate_listener(ts: &TreeStructure, v: Vertex) -> Vertex {
    ts.legs
        .at(v)
        .iter()
        .map(|leg| leg.leaf())
        .min()
        .unwrap_or(v)
}

/// Enumerates listener placements over the threads of the contracted
/// pending forest: per thread, listeners at both endpoints, at one of
/// them, or at neither, with endpoint positions relocated to leg leaves.
/// Placements needing more than `budget` new listeners are skipped.
pub fn enumerate_thread_listeners(
    g: &Graph,
    ts: &TreeStructure,
    forest_hat: &[SubTree],
    budget: usize,
) -> Vec<BTreeSet<Vertex>> {
    let mut all_threads = Vec::new();
    for sub in forest_hat {
        all_threads.extend(threads(g, sub));
    }
    let mut out = Vec::new();
    let mut current: BTreeSet<Vertex> = BTreeSet::new();
    fn rec(
        ts: &TreeStructure,
        threads: &[Thread],
        i: usize,
        budget: usize,
        current: &mut BTreeSet<Vertex>,
        out: &mut Vec<BTreeSet<Vertex>>,
    ) {
        if current.len() > budget {
            return;
        }
        if i == threads.len() {
            out.push(current.clone());
            return;
        }
        let t = &threads[i];
        let lu = relocate_listener(ts, t.u);
        let lv = relocate_listener(ts, t.v);
        let options: [&[Vertex]; 4] = [&[lu, lv], &[lu], &[lv], &[]];
        for opt in options {
            let added: Vec<Vertex> = opt
                .iter()
                .copied()
                .filter(|v| !current.contains(v))
                .collect();
            for &v in &added {
                current.insert(v);
            }
            rec(ts, threads, i + 1, budget, current, out);
            for &v in &added {
                current.remove(&v);
            }
        }
    }
    rec(ts, &all_threads, 0, budget, &mut current, &mut out);
    out.sort();
    out.dedup();
    out
}

/// Candidate watcher positions for a pending subtree whose vertices can
/// only be separated through the entry vertex: the distance partition from
/// the entry, its multi-occupied parts, and those parts' vertices plus
/// neighbors.
#[derive(Debug, Clone)]
pub struct WatcherCandidateSet {
    /// Distance partition from the entry vertex; `parts[i]` holds the
    /// vertices at distance i.
    pub parts: Vec<Vec<Vertex>>,
    /// Indices of parts with at least two vertices.
    pub multi_occupied: Vec<usize>,
    /// Candidate watcher positions, ascending.
    pub candidates: Vec<Vertex>,
}

/// Computes the watcher-candidate set of a subtree rooted at `entry`.
/// Errors with `StemPresent` if a non-entry vertex of the subtree has two
/// or more leaf neighbors (the caller is expected to have stripped those).
pub fn watcher_candidates(g: &Graph, sub: &SubTree, entry: Vertex) -> Result<WatcherCandidateSet> {
    for &v in &sub.vertices {
        if v == entry {
            continue;
        }
        let leaf_neighbors = g
            .neighbors(v)
            .iter()
            .filter(|&&u| sub.contains(u) && sub.degree_in(g, u) == 1)
            .count();
        if leaf_neighbors >= 2 {
            return Err(Error::StemPresent(v));
        }
    }
    let mut dist: BTreeMap<Vertex, usize> = BTreeMap::new();
    dist.insert(entry, 0);
    let mut queue = VecDeque::from([entry]);
    let mut parts: Vec<Vec<Vertex>> = vec![vec![entry]];
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        for &v in g.neighbors(u) {
            if sub.contains(v) && !dist.contains_key(&v) {
                dist.insert(v, du + 1);
                if parts.len() <= du + 1 {
                    parts.resize(du + 2, Vec::new());
                }
                parts[du + 1].push(v);
                queue.push_back(v);
            }
        }
    }
    let multi_occupied: Vec<usize> = (0..parts.len()).filter(|&i| parts[i].len() >= 2).collect();
    let mut cand: BTreeSet<Vertex> = BTreeSet::new();
    for &i in &multi_occupied {
        for &v in &parts[i] {
            cand.insert(v);
            for &u in g.neighbors(v) {
                if sub.contains(u) {
                    cand.insert(u);
                }
            }
        }
    }
    Ok(WatcherCandidateSet {
        parts,
        multi_occupied,
        candidates: cand.into_iter().collect(),
    })
}

/// Decides whether DP(t) <= k, returning a verifying witness on YES.
pub fn fpt_decide(t: &Graph, k: usize, config: FptConfig) -> Result<FptOutcome> {
    if !t.is_tree() {
        return Err(Error::NotATree);
    }
    let n = t.n();
    if n == 1 {
        return Ok(FptOutcome::Yes(DetectionPair::empty()));
    }
    if k == 0 {
        return Ok(FptOutcome::No);
    }

    // Phase 1, no listeners: with no listener, at most one vertex may stay
    // undominated, so the target is a smallest set dominating all vertices
    // but one. Exempting a vertex lowers the optimum by at most one, so the
    // per-vertex loop only matters right at the boundary.
    let domset = min_dominating_set_tree(t)?;
    if domset.len() <= k {
        return Ok(FptOutcome::Yes(DetectionPair::new(domset, [])));
    }
    if domset.len() == k + 1 {
        let ts = analyze_tree(t)?;
        for exempt in 0..n {
            let w = min_subset_dominating(t, &ts, exempt);
            if w.len() <= k {
                return Ok(FptOutcome::Yes(DetectionPair::new(w, [])));
            }
        }
    }

    // Phase 1, exactly one listener.
    if let Some(dp) = phase1_single_listener(t, k) {
        return Ok(FptOutcome::Yes(dp));
    }

    // Phase 2, at least two listeners.
    let ts = analyze_tree(t)?;
    let b2 = ts.b2plus();
    if b2.len() > k {
        // Every such branching point forces a detector.
        return Ok(FptOutcome::No);
    }
    for combo in enumerate_sbp_combinations(&ts, k) {
        if let Some(dp) = phase2_for_combination(t, &ts, &combo, k, config) {
            return Ok(FptOutcome::Yes(dp));
        }
    }
    Ok(FptOutcome::No)
}

/// Smallest set dominating every vertex except `exempt`, by the leaves-up
/// greedy: the deepest uncovered target selects its parent.
fn min_subset_dominating(t: &Graph, ts: &TreeStructure, exempt: Vertex) -> Vec<Vertex> {
    let mut dominated = vec![false; t.n()];
    dominated[exempt] = true;
    let mut chosen = vec![false; t.n()];
    let mut out = Vec::new();
    for &v in ts.bfs_order.iter().rev() {
        if dominated[v] {
            continue;
        }
        let pick = ts.parents()[v].unwrap_or(v);
        if !chosen[pick] {
            chosen[pick] = true;
            out.push(pick);
            dominated[pick] = true;
            for &u in t.neighbors(pick) {
                dominated[u] = true;
            }
        }
    }
    out.sort_unstable();
    out
}

/// Tries every single-listener position; for each, watchers are drawn from
/// the multi-occupied distance parts and their neighbors.
fn phase1_single_listener(t: &Graph, k: usize) -> Option<DetectionPair> {
    let n = t.n();
    let max_watchers = k - 1;
    for l in 0..n {
        let dist = t.bfs_distances(l);
        let mut parts: Vec<Vec<Vertex>> = Vec::new();
        for v in 0..n {
            if parts.len() <= dist[v] {
                parts.resize(dist[v] + 1, Vec::new());
            }
            parts[dist[v]].push(v);
        }
        let multi: Vec<&Vec<Vertex>> = parts.iter().filter(|p| p.len() >= 2).collect();
        // A watcher reaches at most three consecutive parts, and every
        // multi-occupied part needs a dominated vertex.
        if multi.len() > 3 * max_watchers {
            continue;
        }
        let mut cand: BTreeSet<Vertex> = BTreeSet::new();
        for p in &multi {
            for &v in *p {
                cand.insert(v);
                cand.extend(t.neighbors(v).iter().copied());
            }
        }
        let cand: Vec<Vertex> = cand.into_iter().collect();
        let listener_dists = vec![dist.clone()];
        for size in 0..=max_watchers.min(cand.len()) {
            let mut found = None;
            for_each_combination(cand.len(), size, &mut |subset| {
                let watchers: BTreeSet<Vertex> = subset.iter().map(|&i| cand[i]).collect();
                if verify_with_dists(t, &watchers, &listener_dists).is_valid() {
                    found = Some(watchers);
                    true
                } else {
                    false
                }
            });
            if let Some(watchers) = found {
                return Some(DetectionPair::new(watchers, [l]));
            }
        }
    }
    None
}

/// Phase 2 search below one fixed combination of special-branching-point
/// choices. When the combination fixes fewer than two listeners, anchor
/// positions for the missing listeners are enumerated over all vertices.
fn phase2_for_combination(
    t: &Graph,
    ts: &TreeStructure,
    combo: &Combination,
    k: usize,
    config: FptConfig,
) -> Option<DetectionPair> {
    let n = t.n();
    let base_cost = combo.cost();
    if base_cost > k {
        return None;
    }

    let mut anchor_sets: Vec<Vec<Vertex>> = Vec::new();
    match combo.listeners.len() {
        0 => {
            if base_cost + 2 <= k {
                for u in 0..n {
                    for v in u + 1..n {
                        anchor_sets.push(vec![u, v]);
                    }
                }
            }
        }
        1 => {
            if base_cost + 1 <= k {
                for u in 0..n {
                    if !combo.listeners.contains(&u) {
                        anchor_sets.push(vec![u]);
                    }
                }
            }
        }
        _ => anchor_sets.push(Vec::new()),
    }

    for anchors in anchor_sets {
        let mut listeners = combo.listeners.clone();
        listeners.extend(anchors.iter().copied());
        let cost0 = combo.watchers.len() + listeners.len();
        if cost0 > k {
            continue;
        }
        let region = distinguished_region(t, &combo.watchers, &listeners);
        if !config.no_prune && region.forest.len() > k {
            continue;
        }
        let contracted: Vec<SubTree> = region
            .forest
            .iter()
            .map(|p| contract_pending_tree(t, p, &combo.watchers))
            .collect();
        if !config.no_prune {
            let leaf_total: usize = contracted.iter().map(|s| s.leaf_count(t)).sum();
            if leaf_total > 2 * k {
                continue;
            }
        }
        for extra in enumerate_thread_listeners(t, ts, &contracted, k.saturating_sub(cost0)) {
            let mut full_listeners = listeners.clone();
            full_listeners.extend(extra.iter().copied());
            let cost1 = combo.watchers.len() + full_listeners.len();
            if cost1 > k {
                continue;
            }
            if let Some(dp) =
                fill_watchers(t, ts, &combo.watchers, &full_listeners, k - cost1, config)
            {
                return Some(dp);
            }
        }
    }
    None
}

/// With the listener set final, searches for at most `budget` extra
/// watchers drawn from the candidate sets of the still-undistinguished
/// pending subtrees.
fn fill_watchers(
    t: &Graph,
    _ts: &TreeStructure,
    watchers: &BTreeSet<Vertex>,
    listeners: &BTreeSet<Vertex>,
    budget: usize,
    config: FptConfig,
) -> Option<DetectionPair> {
    let listener_dists: Vec<Vec<usize>> = listeners.iter().map(|&l| t.bfs_distances(l)).collect();
    if verify_with_dists(t, watchers, &listener_dists).is_valid() {
        return Some(DetectionPair::new(
            watchers.iter().copied(),
            listeners.iter().copied(),
        ));
    }
    if budget == 0 {
        return None;
    }
    let region = distinguished_region(t, watchers, listeners);
    if region.forest.is_empty() {
        // All undistinguished vertices would have to lie in pending trees.
        return None;
    }
    if !config.no_prune && region.forest.len() > budget {
        return None;
    }
    let mut cand: BTreeSet<Vertex> = BTreeSet::new();
    for pending in &region.forest {
        let stripped = strip_dominated_leaves(t, pending, watchers);
        if stripped.vertices.is_empty() {
            continue;
        }
        match watcher_candidates(t, &stripped, stripped.attach) {
            Ok(wc) => cand.extend(wc.candidates),
            // Stem left after stripping: fall back to the whole subtree.
            Err(_) => cand.extend(stripped.vertices.iter().copied()),
        }
    }
    let cand: Vec<Vertex> = cand.into_iter().collect();
    for size in 1..=budget.min(cand.len()) {
        let mut found = None;
        for_each_combination(cand.len(), size, &mut |subset| {
            let mut all = watchers.clone();
            all.extend(subset.iter().map(|&i| cand[i]));
            if verify_with_dists(t, &all, &listener_dists).is_valid() {
                found = Some(all);
                true
            } else {
                false
            }
        });
        if let Some(all) = found {
            return Some(DetectionPair::new(all, listeners.iter().copied()));
        }
    }
    None
}

/// Removes leaves of a pending tree that a fixed watcher already
/// dominates, repeating until none are left; watcher-carrying leaf
/// neighbors of newly exposed stems disappear in the same sweep.
fn strip_dominated_leaves(g: &Graph, pending: &PendingTree, watchers: &BTreeSet<Vertex>) -> SubTree {
    let mut sub = SubTree {
        attach: pending.attach,
        vertices: pending.vertices.clone(),
    };
    loop {
        if sub.vertices.len() <= 1 {
            break;
        }
        let drop: Vec<Vertex> = sub
            .vertices
            .iter()
            .copied()
            .filter(|&v| {
                v != sub.attach
                    && sub.degree_in(g, v) == 1
                    && (watchers.contains(&v)
                        || g.neighbors(v).iter().any(|u| watchers.contains(u)))
            })
            .collect();
        if drop.is_empty() {
            break;
        }
        sub.vertices.retain(|v| !drop.contains(v));
    }
    sub
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::{dp_oracle, verify};
    use crate::instances;

    fn decide(t: &Graph, k: usize) -> FptOutcome {
        fpt_decide(t, k, FptConfig::default()).unwrap()
    }

    #[test]
    fn path_plus_whole_path() {
        let g = instances::gen_path(5).unwrap();
        assert_eq!(path_plus(&g, 0, 4), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn path_plus_caterpillar_leg_included() {
        // Path 0-1-2-3-4 with a length-2 leg 5-6 at vertex 2.
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (5, 6)]).unwrap();
        assert_eq!(path_plus(&g, 0, 4), vec![0, 1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn path_plus_degree_four_excluded() {
        // Same path but vertex 2 has two legs (degree 4): legs are excluded.
        let g = Graph::from_edges(
            7,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (2, 6)],
        )
        .unwrap();
        assert_eq!(path_plus(&g, 0, 4), vec![0, 1, 2, 3, 4]);
        // Cross-check: the two leg leaves are indeed not distinguished by
        // listeners at 0 and 4 alone.
        let dp = DetectionPair::new([], [0, 4]);
        match verify(&g, &dp).unwrap() {
            crate::detection::VerifyOutcome::Invalid { witness } => {
                assert_eq!(witness, (5, 6));
            }
            _ => panic!("expected 5 and 6 to collide"),
        }
    }

    #[test]
    fn admissible_choice_tags() {
        // A 0-stem with two long legs: tags 2a-2d.
        let g = instances::gen_spider(&[2, 2, 2]).unwrap();
        let ts = analyze_tree(&g).unwrap();
        let tags: Vec<ChoiceTag> = admissible_choices(&ts, 0).iter().map(|c| c.tag).collect();
        assert_eq!(
            tags,
            vec![ChoiceTag::T2a, ChoiceTag::T2b, ChoiceTag::T2c, ChoiceTag::T2d]
        );

        // A 3-stem with no long legs: tags 1a, 1b only.
        let star = instances::gen_star(3).unwrap();
        let ts = analyze_tree(&star).unwrap();
        let tags: Vec<ChoiceTag> = admissible_choices(&ts, 0).iter().map(|c| c.tag).collect();
        assert_eq!(tags, vec![ChoiceTag::T1a, ChoiceTag::T1b]);

        // A 2-stem with no long legs (its third branch leads to another
        // branching point): t + l = 2 enables 1c.
        let g =
            Graph::from_edges(7, &[(0, 4), (0, 5), (0, 6), (0, 1), (1, 2), (1, 3)]).unwrap();
        let ts = analyze_tree(&g).unwrap();
        let tags: Vec<ChoiceTag> = admissible_choices(&ts, 1).iter().map(|c| c.tag).collect();
        assert_eq!(tags, vec![ChoiceTag::T1a, ChoiceTag::T1b, ChoiceTag::T1c]);
    }

    #[test]
    fn combination_product() {
        // Two branching points: a spider center (4 tags) and a 3-stem (2
        // tags) joined by a path.
        let g = Graph::from_edges(
            12,
            &[
                (0, 1),
                (1, 2),
                (0, 3),
                (3, 4),
                (0, 5),
                (5, 6),
                (6, 7),
                (7, 8),
                (8, 9),
                (8, 10),
                (8, 11),
            ],
        )
        .unwrap();
        let ts = analyze_tree(&g).unwrap();
        assert_eq!(ts.b2plus(), vec![0, 8]);
        let combos = enumerate_sbp_combinations(&ts, 12);
        assert_eq!(combos.len(), 4 * 2);
        let combos = enumerate_sbp_combinations(&ts, 2);
        assert!(combos.iter().all(|c| c.cost() <= 2));
    }

    #[test]
    fn region_path_with_end_listeners() {
        let g = instances::gen_path(6).unwrap();
        let region = distinguished_region(
            &g,
            &BTreeSet::new(),
            &BTreeSet::from([0, 5]),
        );
        assert!(region.vstar.iter().all(|&b| b));
        assert!(region.forest.is_empty());
    }

    #[test]
    fn region_spider_third_leg_covered() {
        let g = instances::gen_spider(&[3, 3, 3]).unwrap();
        // Listeners at the leaves of two legs: the center is a degree-3
        // inner vertex, so the third leg joins the region.
        let region = distinguished_region(&g, &BTreeSet::new(), &BTreeSet::from([3, 6]));
        assert!(region.vstar.iter().all(|&b| b));
        assert!(region.forest.is_empty());
    }

    #[test]
    fn region_double_spider_pending_trees() {
        // Two centers joined by a path, each with three length-2 legs;
        // listeners on two legs of the first center leave the second
        // center's legs pending.
        let mut edges = vec![];
        // center 0 legs: 1-2, 3-4, 5-6; path 0-7-8; center 8 legs: 9-10, 11-12, 13-14.
        edges.extend([(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]);
        edges.extend([(0, 7), (7, 8)]);
        edges.extend([(8, 9), (9, 10), (8, 11), (11, 12), (8, 13), (13, 14)]);
        let g = Graph::from_edges(15, &edges).unwrap();
        let region = distinguished_region(&g, &BTreeSet::new(), &BTreeSet::from([2, 4]));
        assert!(!region.forest.is_empty());
        let pending_vertices: BTreeSet<Vertex> = region
            .forest
            .iter()
            .flat_map(|p| p.vertices.iter().copied())
            .collect();
        for v in [9, 10, 11, 12, 13, 14] {
            assert!(pending_vertices.contains(&v), "vertex {v} should be pending");
        }
    }

    #[test]
    fn contraction_rules() {
        // Center 0 with a single leg 1 and two branches ending in
        // branching points: 0 has exactly one leg, so rule (i) drops it.
        let g = Graph::from_edges(
            8,
            &[(0, 1), (0, 2), (2, 3), (2, 4), (0, 5), (5, 6), (5, 7)],
        )
        .unwrap();
        let pending = PendingTree {
            attach: 3,
            vertices: vec![0, 1, 2, 3, 4, 5, 6, 7],
        };
        let sub = contract_pending_tree(&g, &pending, &BTreeSet::new());
        assert_eq!(sub.vertices, vec![0, 2, 3, 4, 5, 6, 7]);

        // Path with a leg at vertex 2: all three branches at 2 are legs,
        // rule (i) does not fire; a watcher at 3 makes rule (ii) drop the
        // adjacent leaf 4.
        let g2 = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)]).unwrap();
        let pending2 = PendingTree {
            attach: 0,
            vertices: vec![0, 1, 2, 3, 4, 5],
        };
        let sub = contract_pending_tree(&g2, &pending2, &BTreeSet::new());
        assert_eq!(sub.vertices, vec![0, 1, 2, 3, 4, 5]);
        let sub = contract_pending_tree(&g2, &pending2, &BTreeSet::from([3]));
        assert_eq!(sub.vertices, vec![0, 1, 2, 3, 5]);
    }

    #[test]
    fn thread_listener_options() {
        let g = instances::gen_path(5).unwrap();
        let ts = analyze_tree(&g).unwrap();
        let sub = SubTree {
            attach: 0,
            vertices: vec![0, 1, 2, 3, 4],
        };
        let placements = enumerate_thread_listeners(&g, &ts, &[sub.clone()], 4);
        // One thread: both ends, one end, other end, none.
        assert_eq!(placements.len(), 4);
        let placements = enumerate_thread_listeners(&g, &ts, &[sub], 1);
        assert_eq!(placements.len(), 3); // the two-listener option is cut
    }

    #[test]
    fn watcher_candidates_bare_path_empty() {
        let g = instances::gen_path(6).unwrap();
        let sub = SubTree {
            attach: 0,
            vertices: vec![0, 1, 2, 3, 4, 5],
        };
        let wc = watcher_candidates(&g, &sub, 0).unwrap();
        assert!(wc.candidates.is_empty());
        assert!(wc.multi_occupied.is_empty());
    }

    #[test]
    fn watcher_candidates_two_branches() {
        // Entry 0 with children 1, 2, each with one child: both parts
        // beyond the root are multi-occupied, so every vertex qualifies.
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (1, 3), (2, 4)]).unwrap();
        let sub = SubTree {
            attach: 0,
            vertices: vec![0, 1, 2, 3, 4],
        };
        let wc = watcher_candidates(&g, &sub, 0).unwrap();
        assert_eq!(wc.candidates, vec![0, 1, 2, 3, 4]);
        assert_eq!(wc.multi_occupied, vec![1, 2]);
    }

    #[test]
    fn watcher_candidates_stem_rejected() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (1, 4)]).unwrap();
        let sub = SubTree {
            attach: 0,
            vertices: vec![0, 1, 2, 3, 4],
        };
        assert!(matches!(
            watcher_candidates(&g, &sub, 0),
            Err(Error::StemPresent(1))
        ));
    }

    #[test]
    fn fpt_examples() {
        let p10 = instances::gen_path(10).unwrap();
        match decide(&p10, 1) {
            FptOutcome::Yes(dp) => {
                assert_eq!(dp.size(), 1);
                assert!(verify(&p10, &dp).unwrap().is_valid());
            }
            FptOutcome::No => panic!("DP(P_10) = 1"),
        }

        let t13 = instances::gen_t1(3, 3).unwrap();
        assert_eq!(decide(&t13, 2), FptOutcome::No);
        assert!(decide(&t13, 3).is_yes());

        let t21 = instances::gen_t2(1).unwrap();
        assert!(decide(&t21, 3).is_yes());
        assert_eq!(decide(&t21, 2), FptOutcome::No);
    }

    #[test]
    fn fpt_degenerate_k0() {
        assert!(decide(&Graph::new(1), 0).is_yes());
        let p2 = instances::gen_path(2).unwrap();
        assert_eq!(decide(&p2, 0), FptOutcome::No);
    }

    #[test]
    fn fpt_matches_oracle_small() {
        for seed in 0..30u64 {
            let n = 2 + (seed as usize) % 11;
            let t = instances::gen_random_tree(n, seed).unwrap();
            let opt = dp_oracle(&t, n).unwrap().value;
            for k in 0..=opt + 2 {
                let out = decide(&t, k);
                assert_eq!(out.is_yes(), opt <= k, "seed {seed}, n {n}, k {k}, opt {opt}");
                if let FptOutcome::Yes(dp) = out {
                    assert!(dp.size() <= k);
                    assert!(verify(&t, &dp).unwrap().is_valid());
                }
            }
        }
    }

    #[test]
    fn fpt_monotone_in_k() {
        for seed in 0..12u64 {
            let t = instances::gen_random_tree(9, seed).unwrap();
            let mut prev_yes = false;
            for k in 0..=6 {
                let yes = decide(&t, k).is_yes();
                assert!(!prev_yes || yes, "seed {seed}, k {k}");
                prev_yes = yes;
            }
        }
    }

    #[test]
    fn pruning_does_not_change_answers() {
        for seed in 0..12u64 {
            let t = instances::gen_random_tree(10, seed).unwrap();
            for k in 0..=5 {
                let a = fpt_decide(&t, k, FptConfig::default()).unwrap();
                let b = fpt_decide(&t, k, FptConfig { no_prune: true }).unwrap();
                assert_eq!(a.is_yes(), b.is_yes(), "seed {seed}, k {k}");
            }
        }
    }

    #[test]
    fn lemma_sbp_rewrite_soundness() {
        // For every optimal witness and special branching point, some
        // admissible choice rewrites the detectors on its subtree into
        // another optimal detection pair.
        for seed in 0..20u64 {
            let t = instances::gen_random_tree(11, seed).unwrap();
            let ts = analyze_tree(&t).unwrap();
            let res = dp_oracle(&t, 11).unwrap();
            for &x in &ts.b2plus() {
                let vx: BTreeSet<Vertex> = crate::graph::subtree_lx(&ts, x)
                    .unwrap()
                    .into_iter()
                    .collect();
                let ok = admissible_choices(&ts, x).iter().any(|choice| {
                    let mut w: BTreeSet<Vertex> = res
                        .witness
                        .watchers
                        .iter()
                        .copied()
                        .filter(|v| !vx.contains(v))
                        .collect();
                    let mut l: BTreeSet<Vertex> = res
                        .witness
                        .listeners
                        .iter()
                        .copied()
                        .filter(|v| !vx.contains(v))
                        .collect();
                    w.extend(choice.watchers.iter().copied());
                    l.extend(choice.listeners.iter().copied());
                    let dp = DetectionPair {
                        watchers: w,
                        listeners: l,
                    };
                    dp.size() <= res.value && verify(&t, &dp).unwrap().is_valid()
                });
                assert!(ok, "seed {seed}, branching point {x}");
            }
        }
    }
}
