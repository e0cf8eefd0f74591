//! Linear-time 2-approximation for detection pair on trees: watchers on all
//! t-stems with t >= 3, listeners from an optimal resolving set of a pruned
//! copy of the tree.

use crate::detection::DetectionPair;
use crate::error::{Error, Result};
use crate::graph::{analyze_core, AdjRow, CoreView, Graph, TreeStructure, Vertex, NO_PARENT};

/// Per-stem pruning record, kept for ratio diagnostics.
#[derive(Debug, Clone)]
pub struct StemPruning {
    pub vertex: Vertex,
    /// Leaf-neighbor count t of the stem.
    pub leaf_neighbors: usize,
    /// Number of legs of length >= 2 attached.
    pub long_legs: usize,
    /// Leaf neighbors removed when building the pruned tree.
    pub removed: Vec<Vertex>,
}

#[derive(Debug, Clone)]
pub struct ApproxOutput {
    pub pair: DetectionPair,
    pub pruned_tree_size: usize,
    pub stems: Vec<StemPruning>,
}

/// Builds the pruned tree: for every t-stem v with t >= 3 and `l` legs of
/// length >= 2, remove t-2 leaf neighbors if l = 0, t-1 if l = 1, and all t
/// if l >= 2 (smallest ids first). Returns the pruned graph, the
/// new-id-to-old-id mapping, and the pruning records.
/// Decides which leaf neighbors each 3+-stem loses, as a per-vertex mask
/// plus the per-stem records.
fn pruning_plan(core: CoreView<'_>) -> (Vec<bool>, Vec<StemPruning>) {
    let CoreView { order, cstart, chain, .. } = core;
    let n = order.len();
    let mut removed = vec![false; n];
    let mut stems = Vec::new();
    // One sweep in BFS-rank space; a child is a leaf neighbor iff its
    // chain length is 1, a long leg starts at a child with chain length
    // >= 2, and a leaf root shows up as the extra neighbor of rank 1.
    let root_is_leaf = n >= 2 && cstart[1] - cstart[0] == 1;
    for i in 0..n {
        let nchild = (cstart[i + 1] - cstart[i]) as usize;
        if nchild + usize::from(i != 0) < 3 {
            continue;
        }
        let v = order[i];
        // Child ids ascend within a block, so the leaf list is ascending.
        let mut leaf_nbrs: Vec<Vertex> = (cstart[i] as usize..cstart[i + 1] as usize)
            .filter(|&c| chain[c] == 1)
            .map(|c| order[c])
            .collect();
        if i == 1 && root_is_leaf {
            leaf_nbrs.insert(0, order[0]);
        }
        let t_count = leaf_nbrs.len();
        if t_count < 3 {
            continue;
        }
        let mut long_legs = (cstart[i] as usize..cstart[i + 1] as usize)
            .filter(|&c| chain[c] >= 2)
            .count();
        if let Some((owner, len)) = core.root_leg {
            if owner == v && len >= 2 {
                long_legs += 1;
            }
        }
        let drop = match long_legs {
            0 => t_count - 2,
            1 => t_count - 1,
            _ => t_count,
        };
        let dropped: Vec<Vertex> = leaf_nbrs.into_iter().take(drop).collect();
        for &u in &dropped {
            removed[u] = true;
        }
        stems.push(StemPruning {
            vertex: v,
            leaf_neighbors: t_count,
            long_legs,
            removed: dropped,
        });
    }
    stems.sort_by_key(|s| s.vertex);
    (removed, stems)
}

pub fn build_pruned_tree(
    t: &Graph,
    ts: &TreeStructure,
) -> Result<(Graph, Vec<Vertex>, Vec<StemPruning>)> {
    // `ts` can only come from a successful analysis, so a shape check
    // replaces the full connectivity re-validation.
    let n = t.n();
    if ts.bfs_order.len() != n || t.edge_count() + 1 != n {
        return Err(Error::NotATree);
    }
    let (removed, stems) = pruning_plan(ts.core_view());
    let new_to_old: Vec<Vertex> = (0..n).filter(|&v| !removed[v]).collect();
    let mut old_to_new = vec![usize::MAX; n];
    for (new, &old) in new_to_old.iter().enumerate() {
        old_to_new[old] = new;
    }
    // Only leaves were removed, so surviving rows keep their relative
    // order and just need filtering and renumbering.
    let adj: Vec<AdjRow> = new_to_old
        .iter()
        .map(|&old| {
            t.neighbors(old)
                .iter()
                .filter(|&&u| !removed[u])
                .map(|&u| old_to_new[u])
                .collect()
        })
        .collect();
    let pruned = Graph::from_adjacency(adj);
    Ok((pruned, new_to_old, stems))
}

/// Slater's resolving set of the pruned tree, computed directly on the
/// original tree's rank-space structure with the removed leaves masked
/// out, in original vertex ids. Equivalent to materializing the pruned
/// tree and running [`slater_from_structure`] on it, without the second
/// traversal.
pub(crate) fn pruned_slater(core: CoreView<'_>, removed: &[bool]) -> Vec<Vertex> {
    let CoreView { order, prank, cstart, .. } = core;
    let n = order.len();
    // Rank-indexed copy of the mask, so both sweeps below read it in rank
    // order instead of bouncing through vertex ids.
    let surv_mask: Vec<bool> = order.iter().map(|&v| !removed[v]).collect();
    let surv = |i: usize| surv_mask[i];
    // Pruning only drops leaves, so the surviving part of the BFS order is
    // still a level order of the pruned tree. Its root moves to rank 1
    // exactly when vertex 0 was a pruned leaf.
    let r = if removed[0] { 1 } else { 0 };
    if n - removed.iter().filter(|&&b| b).count() <= 1 {
        return Vec::new();
    }

    // Surviving degrees and downward chains, as in the host analysis but
    // against the mask. A pruned stem can drop to degree 2 and dissolve
    // into a longer chain, so chains are recomputed from scratch; each
    // chain's leaf rides along in `leaf2` so no walk is needed later.
    let mut deg2 = vec![0u32; n];
    let mut chain2 = vec![0u32; n];
    // Chain leaves as u32 ids: vertex counts anywhere near u32::MAX are
    // unrepresentable in memory long before this point.
    let mut leaf2 = vec![0u32; n];
    // Surviving branching ranks, collected descending.
    let mut branchers: Vec<u32> = Vec::new();
    let mut path_leaf = usize::MAX;
    for i in (r..n).rev() {
        if i > crate::graph::PF_FAR {
            let c = cstart[i - crate::graph::PF_FAR] as usize;
            if c < n {
                crate::graph::prefetch(&chain2[c]);
                crate::graph::prefetch(&leaf2[c]);
            }
        }
        if !surv(i) {
            continue;
        }
        let mut surv_children = 0;
        let mut chain_child = usize::MAX;
        for c in cstart[i] as usize..cstart[i + 1] as usize {
            if surv(c) {
                surv_children += 1;
                chain_child = c;
            }
        }
        let has_parent = prank[i] != NO_PARENT && surv(prank[i] as usize);
        deg2[i] = surv_children + u32::from(has_parent);
        match deg2[i] {
            1 => path_leaf = path_leaf.min(order[i]),
            d if d >= 3 => branchers.push(i as u32),
            _ => {}
        }
        // The effective root is kept out of downward chains; its side is
        // handled by the root walk below.
        if i > r {
            if surv_children == 0 {
                chain2[i] = 1;
                leaf2[i] = order[i] as u32;
            } else if surv_children == 1 && deg2[i] <= 2 && chain2[chain_child] > 0 {
                chain2[i] = chain2[chain_child] + 1;
                leaf2[i] = leaf2[chain_child];
            }
        }
    }
    if branchers.is_empty() {
        // The pruned tree is a path: its smallest leaf resolves it.
        return vec![path_leaf];
    }

    let surviving_child = |i: usize| {
        (cstart[i] as usize..cstart[i + 1] as usize)
            .find(|&c| surv(c))
            .expect("chain continues to a surviving child")
    };

    // A leg reaching its branching point through the effective root.
    let mut root_leg: Option<(usize, usize, Vertex)> = None;
    if deg2[r] >= 1 && deg2[r] <= 2 {
        let kids: Vec<usize> = (cstart[r] as usize..cstart[r + 1] as usize)
            .filter(|&c| surv(c))
            .collect();
        let leaf_side = kids.iter().copied().find(|&c| chain2[c] > 0);
        let other_side = match (deg2[r], leaf_side) {
            (1, _) => Some(kids[0]),
            (2, Some(side)) => kids.iter().copied().find(|&c| c != side),
            _ => None,
        };
        if let Some(mut cur) = other_side {
            if deg2[r] == 1 || leaf_side.is_some() {
                let mut upper_len = 1;
                while deg2[cur] == 2 {
                    upper_len += 1;
                    cur = surviving_child(cur);
                }
                if deg2[cur] >= 3 {
                    let (len, leaf) = match leaf_side {
                        Some(side) => (upper_len + chain2[side] as usize, leaf2[side] as Vertex),
                        None => (upper_len, order[r]),
                    };
                    root_leg = Some((cur, len, leaf));
                }
            }
        }
    }

    // Per branching point: sort its legs longest first (ties to the
    // smaller leaf id) and keep every leaf but the last.
    let mut out = Vec::new();
    let mut scratch: Vec<(usize, Vertex)> = Vec::new();
    for &i in branchers.iter().rev() {
        let i = i as usize;
        scratch.clear();
        if let Some((xr, len, leaf)) = root_leg {
            if xr == i {
                scratch.push((len, leaf));
            }
        }
        for c in cstart[i] as usize..cstart[i + 1] as usize {
            if surv(c) && chain2[c] > 0 {
                scratch.push((chain2[c] as usize, leaf2[c] as Vertex));
            }
        }
        if scratch.is_empty() {
            continue;
        }
        scratch.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for &(_, leaf) in scratch.iter().take(scratch.len() - 1) {
            out.push(leaf);
        }
    }
    out.sort_unstable();
    out
}

/// The 2-approximation: watchers on all t-stems with t >= 3, listeners from
/// Slater's resolving set of the pruned tree.
pub fn approx2_detection_pair(t: &Graph) -> Result<ApproxOutput> {
    let core = analyze_core(t)?;
    let (removed, stems) = pruning_plan(core.view());
    // The pruned stems are exactly the t-stems with t >= 3.
    let watchers: Vec<Vertex> = stems.iter().map(|s| s.vertex).collect();
    let listeners = pruned_slater(core.view(), &removed);
    let pruned_tree_size = t.n() - removed.iter().filter(|&&b| b).count();
    Ok(ApproxOutput {
        pair: DetectionPair::new(watchers, listeners),
        pruned_tree_size,
        stems,
    })
}
