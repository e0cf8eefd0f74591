//! Exact linear-time primitives on trees: an optimal resolving set
//! (Slater's rule) and a minimum dominating set (leaves-up greedy).

use crate::error::{Error, Result};
use crate::graph::{analyze_core, Graph, Vertex};
#[cfg(test)]
use crate::graph::TreeStructure;
use crate::tree_approx::pruned_slater;

/// Optimal resolving set of a tree: for each special branching point with
/// `l` legs, the leaves of the `l - 1` longest legs. Paths are special-cased
/// to a single leaf (the rule alone would return the empty set there, which
/// does not resolve a path with n >= 2). Ties on leg length go to the
/// smaller leaf id.
///
/// Runs on the rank-space skeleton alone: this is the masked Slater sweep
/// with nothing masked out, so the full structural analysis is skipped.
pub fn slater_resolving_set(t: &Graph) -> Result<Vec<Vertex>> {
    let core = analyze_core(t)?;
    Ok(pruned_slater(core.view(), &vec![false; t.n()]))
}

/// Reference implementation of the rule on a full [`TreeStructure`], kept
/// as the differential-test baseline for the masked sweep.
#[cfg(test)]
pub(crate) fn slater_from_structure(t: &Graph, ts: &TreeStructure) -> Vec<Vertex> {
    let n = t.n();
    if n == 1 {
        return Vec::new();
    }
    if ts.branching_points.is_empty() {
        // A path: one leaf resolves it.
        let leaf = (0..n).find(|&v| t.degree(v) == 1).expect("path has a leaf");
        return vec![leaf];
    }
    let mut out = Vec::new();
    let mut scratch: Vec<(usize, Vertex)> = Vec::new();
    for &x in &ts.special_branching_points {
        scratch.clear();
        scratch.extend(ts.legs.at(x).iter().map(|l| (l.len(), l.leaf())));
        scratch.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for &(_, leaf) in scratch.iter().take(scratch.len() - 1) {
            out.push(leaf);
        }
    }
    out.sort_unstable();
    out
}

/// Minimum dominating set of a tree via the standard leaves-up greedy:
/// vertices are processed in reverse BFS order; an undominated vertex
/// selects its parent (or itself at the root).
///
/// Only the rooted orientation is needed, so this runs directly on the
/// BFS of the tree instead of the full structural analysis.
pub fn min_dominating_set_tree(t: &Graph) -> Result<Vec<Vertex>> {
    let n = t.n();
    if n == 0 || t.edge_count() != n - 1 {
        return Err(Error::NotATree);
    }
    let (order, prank, _) = t.bfs_tree(0);
    if order.len() != n {
        return Err(Error::NotATree);
    }
    // Domination is decided from the rooted orientation alone: a vertex is
    // covered iff it, its parent, or one of its children was chosen. The
    // scan runs in BFS-rank space, where a parent rank is never far from
    // its child ranks, instead of hopping across vertex ids.
    let mut chosen = vec![false; n];
    let mut child_chosen = vec![false; n];
    let mut picks = Vec::new();
    for i in (0..n).rev() {
        let p = prank[i] as usize;
        if chosen[i] || child_chosen[i] || (i > 0 && chosen[p]) {
            continue;
        }
        let pick = if i == 0 { 0 } else { p };
        chosen[pick] = true;
        picks.push(pick);
        if pick > 0 {
            child_chosen[prank[pick] as usize] = true;
        }
    }
    let mut out: Vec<Vertex> = picks.into_iter().map(|i| order[i]).collect();
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::{gamma_oracle, md_oracle};
    use crate::instances;

    fn is_resolving(t: &Graph, set: &[Vertex]) -> bool {
        let dists: Vec<Vec<usize>> = set.iter().map(|&l| t.bfs_distances(l)).collect();
        let n = t.n();
        for u in 0..n {
            for v in u + 1..n {
                if !dists.iter().any(|d| d[u] != d[v]) {
                    return false;
                }
            }
        }
        true
    }

    fn dominates_all(t: &Graph, set: &[Vertex]) -> bool {
        let mut dom = vec![false; t.n()];
        for &w in set {
            dom[w] = true;
            for &u in t.neighbors(w) {
                dom[u] = true;
            }
        }
        dom.into_iter().all(|b| b)
    }

    #[test]
    fn slater_spider() {
        let g = instances::gen_spider(&[1, 2, 3]).unwrap();
        let set = slater_resolving_set(&g).unwrap();
        assert_eq!(set.len(), 2);
        assert!(is_resolving(&g, &set));
        // Leaves of the length-3 and length-2 legs.
        assert_eq!(set, vec![3, 6]);
    }

    #[test]
    fn slater_path() {
        let g = instances::gen_path(9).unwrap();
        let set = slater_resolving_set(&g).unwrap();
        assert_eq!(set.len(), 1);
        assert!(is_resolving(&g, &set));
        assert_eq!(md_oracle(&g).unwrap().value, 1);
    }

    #[test]
    fn slater_star() {
        let g = instances::gen_star(4).unwrap();
        let set = slater_resolving_set(&g).unwrap();
        assert_eq!(set.len(), 3);
        assert!(is_resolving(&g, &set));
        assert_eq!(md_oracle(&g).unwrap().value, 3);
    }

    #[test]
    fn slater_single_vertex() {
        let g = Graph::new(1);
        assert!(slater_resolving_set(&g).unwrap().is_empty());
    }

    #[test]
    fn domset_examples() {
        let p6 = instances::gen_path(6).unwrap();
        assert_eq!(min_dominating_set_tree(&p6).unwrap().len(), 2);
        let star = instances::gen_star(5).unwrap();
        assert_eq!(min_dominating_set_tree(&star).unwrap(), vec![0]);
        let single = Graph::new(1);
        assert_eq!(min_dominating_set_tree(&single).unwrap(), vec![0]);
    }

    #[test]
    fn not_a_tree_rejected() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert!(slater_resolving_set(&c4).is_err());
        assert!(min_dominating_set_tree(&c4).is_err());
    }

    #[test]
    fn matches_oracles_on_random_trees() {
        for seed in 0..40u64 {
            let n = 2 + (seed as usize * 7) % 11;
            let t = instances::gen_random_tree(n, seed).unwrap();
            let rs = slater_resolving_set(&t).unwrap();
            assert!(is_resolving(&t, &rs), "seed {seed}");
            assert_eq!(rs.len(), md_oracle(&t).unwrap().value, "seed {seed}");
            let ds = min_dominating_set_tree(&t).unwrap();
            assert!(dominates_all(&t, &ds), "seed {seed}");
            assert_eq!(ds.len(), gamma_oracle(&t).unwrap().value, "seed {seed}");
        }
    }
}
