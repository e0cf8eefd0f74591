//! Undirected simple graphs over dense integer vertex ids, plus the
//! tree-structural queries (legs, stems, special branching points) that the
//! tree algorithms are built on.

use std::collections::VecDeque;
use std::sync::OnceLock;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Sentinel distance for unreachable vertices.
pub const INFINITE: usize = usize::MAX;

/// Adjacency row with inline storage for the common low-degree case, so
/// that most rows live contiguously inside the outer vector instead of in
/// separately allocated blocks. This keeps large traversals cache-friendly.
pub(crate) type AdjRow = SmallVec<[Vertex; 4]>;

/// Undirected simple graph with vertices `0..n`. Adjacency lists are kept
/// sorted by vertex id so that every iteration order is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<AdjRow>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![SmallVec::new(); n],
        }
    }

    /// Wraps prebuilt adjacency rows. The caller guarantees the rows are
    /// sorted, symmetric, and free of loops and duplicates.
    pub(crate) fn from_adjacency(adj: Vec<AdjRow>) -> Self {
        Graph { n: adj.len(), adj }
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidGraph(format!(
                "edge ({u}, {v}) out of range for n = {}",
                self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
        }
        if self.has_edge(u, v) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
        }
        let pos = self.adj[u].partition_point(|&w| w < v);
        self.adj[u].insert(pos, v);
        let pos = self.adj[v].partition_point(|&w| w < u);
        self.adj[v].insert(pos, u);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Hop distances from `source`; unreachable vertices get [`INFINITE`].
    pub fn bfs_distances(&self, source: Vertex) -> Vec<usize> {
        assert!(source < self.n, "bfs source out of range");
        let mut dist = vec![INFINITE; self.n];
        dist[source] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == INFINITE {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.bfs_distances(0).iter().all(|&d| d != INFINITE)
    }

    /// True iff the graph is connected with exactly `n - 1` edges.
    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.edge_count() == self.n - 1 && self.is_connected()
    }
}

/// How far ahead of the BFS head adjacency rows are prefetched. The
/// traversal is memory-latency-bound on large inputs; fetching a handful of
/// queued rows early overlaps the misses.
pub(crate) const BFS_PREFETCH: usize = 8;

/// Longer lookahead for tight scatter/count loops, whose few-instruction
/// bodies cover much less latency per iteration than the BFS loop does.
pub(crate) const PF_FAR: usize = 32;

/// Root sentinel in the u32 `prank` array. Rank-space arrays are u32:
/// vertex counts anywhere near `u32::MAX` are unrepresentable in memory,
/// and the narrower rows halve the bandwidth of every rank-space sweep.
pub(crate) const NO_PARENT: u32 = u32::MAX;

#[inline(always)]
pub(crate) fn prefetch<T>(p: *const T) {
    #[cfg(target_arch = "x86_64")]
    unsafe {
        use std::arch::x86_64::{_mm_prefetch, _MM_HINT_T0};
        _mm_prefetch(p as *const i8, _MM_HINT_T0);
    }
    #[cfg(not(target_arch = "x86_64"))]
    let _ = p;
}

impl Graph {
    /// BFS over a graph with no cycles reachable from `root`: visit order
    /// and, in rank space, the parent rank of each rank (`prank`, with
    /// `prank[0] = NO_PARENT`) plus the child blocks — the children of the
    /// vertex at rank `i` are exactly the ranks `cstart[i]..cstart[i + 1]`.
    ///
    /// Everything is written sequentially in rank order; parent lookups
    /// only touch the recently produced window of `order`, so the one
    /// unavoidable random access is the adjacency row of the current
    /// vertex. Inline rows make the row of an upcoming vertex a computed
    /// address inside one array, so it can be prefetched without first
    /// loading a pointer. Acyclicity replaces the usual visited set: the
    /// one already-seen neighbor of a vertex is its parent. A reachable
    /// cycle makes the traversal revisit vertices instead; the growth
    /// guard stops it and the caller notices `order.len() != n`.
    pub(crate) fn bfs_tree(&self, root: Vertex) -> (Vec<Vertex>, Vec<u32>, Vec<u32>) {
        let n = self.n;
        let mut order = Vec::with_capacity(n);
        order.push(root);
        let mut prank = Vec::with_capacity(n);
        prank.push(NO_PARENT);
        let mut cstart = Vec::with_capacity(n + 1);
        let mut head = 0;
        while head < order.len() && order.len() <= n {
            if head + BFS_PREFETCH < order.len() {
                let row: *const AdjRow = &self.adj[order[head + BFS_PREFETCH]];
                prefetch(row);
                prefetch(row.wrapping_byte_add(std::mem::size_of::<AdjRow>() - 1));
            }
            let v = order[head];
            let pv = if head == 0 { INFINITE } else { order[prank[head] as usize] };
            cstart.push(order.len() as u32);
            for &u in &self.adj[v] {
                if u != pv {
                    prank.push(head as u32);
                    order.push(u);
                }
            }
            head += 1;
        }
        cstart.push(order.len() as u32);
        (order, prank, cstart)
    }
}

/// A leg of a special branching point: its vertex path from the neighbor
/// of the branching point down to the leaf. The branching point itself is
/// excluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Leg<'a> {
    pub path: &'a [Vertex],
    /// Copy of `path.last()`, kept next to the leg's length so the common
    /// length/leaf queries stay off the shared path arena.
    leaf: Vertex,
}

impl Leg<'_> {
    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    pub fn leaf(&self) -> Vertex {
        self.leaf
    }
}

/// All legs of a tree. Paths are concatenated in a single arena rather
/// than stored as one allocation per leg, which matters on large trees:
/// building and freeing hundreds of thousands of tiny vectors dominates
/// the linear-time algorithms otherwise.
#[derive(Debug, Clone, Default)]
pub struct Legs {
    /// Per-vertex item ranges: the legs of `v` are `items[starts[v]..starts[v + 1]]`.
    starts: Vec<u32>,
    /// `(offset, len)` of each leg's path within `paths`, plus its leaf.
    items: Vec<(u32, u32, Vertex)>,
    paths: Vec<Vertex>,
}

impl Legs {
    /// The legs attached to vertex `v`, in ascending order of their first
    /// vertex. Empty unless `v` is a special branching point.
    pub fn at(&self, v: Vertex) -> LegList<'_> {
        LegList {
            legs: self,
            lo: self.starts[v] as usize,
            hi: self.starts[v + 1] as usize,
        }
    }
}

/// Borrowed view of one vertex's legs.
#[derive(Debug, Clone, Copy)]
pub struct LegList<'a> {
    legs: &'a Legs,
    lo: usize,
    hi: usize,
}

impl<'a> LegList<'a> {
    pub fn len(&self) -> usize {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi
    }

    pub fn get(&self, i: usize) -> Leg<'a> {
        let (off, len, leaf) = self.legs.items[self.lo + i];
        Leg {
            path: &self.legs.paths[off as usize..off as usize + len as usize],
            leaf,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Leg<'a>> + 'a {
        let this = *self;
        (0..this.len()).map(move |i| this.get(i))
    }
}

/// Precomputed structural index of a tree: a rooted orientation, leaves,
/// branching points, legs and stems.
#[derive(Debug, Clone)]
pub struct TreeStructure {
    pub root: Vertex,
    /// Lazily materialized per-id parent array; see [`Self::parents`].
    parent: OnceLock<Vec<Option<Vertex>>>,
    /// Vertices in BFS order from the root.
    pub bfs_order: Vec<Vertex>,
    /// Lazily materialized sorted leaf list; see [`Self::leaves`].
    leaves: OnceLock<Vec<Vertex>>,
    /// Vertices of degree >= 3, ascending.
    pub branching_points: Vec<Vertex>,
    /// Branching points with at least one leg attached, ascending.
    pub special_branching_points: Vec<Vertex>,
    /// Legs of every special branching point.
    pub legs: Legs,
    /// Per-vertex count of leaf neighbors (`t` such that the vertex is a
    /// t-stem, when it is a special branching point).
    pub stems: Vec<usize>,
    /// Parent rank of each BFS rank ([`NO_PARENT`] at the root): the parent
    /// of `bfs_order[i]` is `bfs_order[prank[i]]`.
    pub(crate) prank: Vec<u32>,
    /// Child blocks in rank space: the children of `bfs_order[i]` are the
    /// ranks `cstart[i]..cstart[i + 1]`.
    pub(crate) cstart: Vec<u32>,
    /// Downward chain lengths by rank: `chain[i] > 0` iff the subtree under
    /// rank i is a bare path ending in a leaf.
    pub(crate) chain: Vec<u32>,
    /// Owner and length of the leg that reaches its branching point
    /// through the root, when there is one.
    pub(crate) root_leg: Option<(Vertex, u32)>,
}

impl TreeStructure {
    /// Parent of every vertex in the rooted orientation (`None` at the
    /// root), indexed by vertex id. Built on first use: the scaling-
    /// sensitive tree routines work in BFS-rank space and never read
    /// per-id parents.
    pub fn parents(&self) -> &[Option<Vertex>] {
        self.parent.get_or_init(|| {
            let n = self.bfs_order.len();
            let mut parent = vec![None; n];
            for i in 1..n {
                parent[self.bfs_order[i]] = Some(self.bfs_order[self.prank[i] as usize]);
            }
            parent
        })
    }

    /// Degree-1 vertices, ascending. Built on first use.
    pub fn leaves(&self) -> &[Vertex] {
        self.leaves.get_or_init(|| {
            let n = self.bfs_order.len();
            let mut leaves: Vec<Vertex> = (0..n)
                .filter(|&i| (self.cstart[i + 1] - self.cstart[i]) as usize + usize::from(i != 0) == 1)
                .map(|i| self.bfs_order[i])
                .collect();
            leaves.sort_unstable();
            leaves
        })
    }

    /// Special branching points with at least two legs attached.
    pub fn b2plus(&self) -> Vec<Vertex> {
        self.special_branching_points
            .iter()
            .copied()
            .filter(|&x| self.legs.at(x).len() >= 2)
            .collect()
    }

    /// t-stems with `t >= 3`: the watcher set of the tree 2-approximation.
    pub fn s3plus(&self) -> Vec<Vertex> {
        self.special_branching_points
            .iter()
            .copied()
            .filter(|&x| self.stems[x] >= 3)
            .collect()
    }
}

/// The rank-space skeleton of a rooted tree: BFS order, parent ranks,
/// child blocks, downward chain lengths and the root-side leg. This is
/// everything the scaling-sensitive tree routines consume; the full
/// [`TreeStructure`] (legs arena, stems, branching lists) is built on top
/// of it for the structural API.
#[derive(Debug, Clone)]
pub(crate) struct TreeCore {
    pub(crate) order: Vec<Vertex>,
    pub(crate) prank: Vec<u32>,
    pub(crate) cstart: Vec<u32>,
    pub(crate) chain: Vec<u32>,
    pub(crate) root_leg: Option<(Vertex, u32)>,
}

/// Borrowed view of a tree's rank-space skeleton, available from both
/// [`TreeCore`] and [`TreeStructure`].
#[derive(Clone, Copy)]
pub(crate) struct CoreView<'a> {
    pub(crate) order: &'a [Vertex],
    pub(crate) prank: &'a [u32],
    pub(crate) cstart: &'a [u32],
    pub(crate) chain: &'a [u32],
    pub(crate) root_leg: Option<(Vertex, u32)>,
}

impl TreeCore {
    pub(crate) fn view(&self) -> CoreView<'_> {
        CoreView {
            order: &self.order,
            prank: &self.prank,
            cstart: &self.cstart,
            chain: &self.chain,
            root_leg: self.root_leg,
        }
    }
}

impl TreeStructure {
    pub(crate) fn core_view(&self) -> CoreView<'_> {
        CoreView {
            order: &self.bfs_order,
            prank: &self.prank,
            cstart: &self.cstart,
            chain: &self.chain,
            root_leg: self.root_leg,
        }
    }
}

/// The walk from the root to the first branching point, when the root is
/// a leaf or sits mid-leg: `upper` lists the walked vertices root-first
/// (the branching point excluded), `leaf_side` is the root's chain child
/// when the root-side leg continues into a downward chain.
struct RootWalk {
    owner_rank: usize,
    upper: Vec<Vertex>,
    leaf_side: Option<usize>,
}

fn root_walk(order: &[Vertex], cstart: &[u32], chain: &[u32]) -> Option<RootWalk> {
    let deg_of_rank = |i: usize| (cstart[i + 1] - cstart[i]) as usize + usize::from(i != 0);
    if order.len() < 2 || deg_of_rank(0) > 2 {
        return None;
    }
    let kids: Vec<usize> = (cstart[0] as usize..cstart[1] as usize).collect();
    let leaf_side = kids.iter().copied().find(|&c| chain[c] > 0);
    let other_side = match (deg_of_rank(0), leaf_side) {
        (1, _) => Some(kids[0]),
        (2, Some(_)) => kids.iter().copied().find(|&c| chain[c] == 0),
        _ => None,
    };
    let mut cur = other_side?;
    if deg_of_rank(0) != 1 && leaf_side.is_none() {
        return None;
    }
    let mut upper = vec![order[0]];
    while deg_of_rank(cur) == 2 {
        upper.push(order[cur]);
        cur = cstart[cur] as usize;
    }
    if deg_of_rank(cur) < 3 {
        return None;
    }
    Some(RootWalk {
        owner_rank: cur,
        upper,
        leaf_side,
    })
}

/// Builds the rank-space skeleton of a tree rooted at vertex 0: one BFS
/// plus one reverse sweep, nothing allocated per vertex group.
pub(crate) fn analyze_core(g: &Graph) -> Result<TreeCore> {
    let n = g.n();
    if n == 0 || g.edge_count() != n - 1 {
        return Err(Error::NotATree);
    }
    let (order, prank, cstart) = g.bfs_tree(0);
    if order.len() != n {
        return Err(Error::NotATree);
    }
    let deg_of_rank = |i: usize| (cstart[i + 1] - cstart[i]) as usize + usize::from(i != 0);

    // Downward chains: chain[i] > 0 iff the subtree under rank i is a
    // bare path ending in a leaf (its continuation is the single child
    // cstart[i]). Reverse rank order sees children before parents.
    let mut chain = vec![0u32; n];
    for i in (1..n).rev() {
        // The child entry sits a layer width ahead of i, a stride the
        // hardware prefetcher does not pick up on its own.
        if i > PF_FAR {
            let c = cstart[i - PF_FAR] as usize;
            if c < n {
                prefetch(&chain[c]);
            }
        }
        match deg_of_rank(i) {
            1 => chain[i] = 1,
            2 => {
                let c = cstart[i] as usize;
                if chain[c] > 0 {
                    chain[i] = chain[c] + 1;
                }
            }
            _ => {}
        }
    }

    let root_leg = root_walk(&order, &cstart, &chain).map(|w| {
        let len = w.upper.len() as u32 + w.leaf_side.map_or(0, |s| chain[s]);
        (order[w.owner_rank], len)
    });
    Ok(TreeCore {
        order,
        prank,
        cstart,
        chain,
        root_leg,
    })
}

/// Builds the [`TreeStructure`] of a tree, rooted at vertex 0.
pub fn analyze_tree(g: &Graph) -> Result<TreeStructure> {
    let core = analyze_core(g)?;
    let n = g.n();
    let root = 0;
    let TreeCore {
        order: bfs_order,
        prank,
        cstart,
        chain: chain_len,
        root_leg,
    } = core;

    // Everything below runs in BFS-rank space, where the children of rank
    // i are the contiguous block cstart[i]..cstart[i + 1]; the scans stay
    // sequential instead of hopping across vertex ids.
    let nchildren = |i: usize| (cstart[i + 1] - cstart[i]) as usize;
    let deg_of_rank = |i: usize| nchildren(i) + usize::from(i != 0);

    let mut branching_points: Vec<Vertex> = (0..n)
        .filter(|&i| deg_of_rank(i) >= 3)
        .map(|i| bfs_order[i])
        .collect();
    branching_points.sort_unstable();

    // One scan over the child blocks finds the legs of every branching
    // point and the per-vertex leaf-neighbor counts (a child is a leaf iff
    // its chain length is 1). Leg paths go into one shared arena whose
    // offsets are fixed here; `raw` records (owner, offset, len) per leg
    // in discovery order and `fills` what still has to be written.
    let mut raw: Vec<(Vertex, u32, u32)> = Vec::new();
    let mut fills: Vec<(u32, u32, u32)> = Vec::new();
    let mut stems = vec![0usize; n];
    let mut total = 0u32;
    for i in 0..n {
        if i + PF_FAR < n {
            // Upcoming scattered stems slot; everything else is sequential.
            prefetch(&stems[bfs_order[i + PF_FAR]]);
        }
        let block = cstart[i] as usize..cstart[i + 1] as usize;
        let branching = deg_of_rank(i) >= 3;
        let mut leaf_children = 0;
        for c in block {
            leaf_children += usize::from(chain_len[c] == 1);
            if branching && chain_len[c] > 0 {
                let len = chain_len[c];
                raw.push((bfs_order[i], total, len));
                fills.push((c as u32, total, len));
                total += len;
            }
        }
        if leaf_children > 0 {
            stems[bfs_order[i]] = leaf_children;
        }
    }
    // The rank pass misses a leaf root's contribution to its neighbor.
    if n >= 2 && deg_of_rank(0) == 1 {
        stems[bfs_order[cstart[0] as usize]] += 1;
    }

    // Fill the arena, recording each leg's leaf (its last written vertex)
    // in `leaf_of`, aligned with `raw`. Chain walks are dependent loads,
    // so a handful run interleaved to overlap their latencies;
    // single-vertex legs are written directly.
    let mut paths: Vec<Vertex> = vec![0; total as usize];
    let mut leaf_of: Vec<Vertex> = vec![0; fills.len()];
    {
        const LANES: usize = 8;
        let mut active: Vec<(usize, usize, usize, usize)> = Vec::with_capacity(LANES);
        let mut todo = fills.iter().enumerate();
        loop {
            while active.len() < LANES {
                match todo.next() {
                    Some((j, &(c, off, len))) => {
                        if len == 1 {
                            paths[off as usize] = bfs_order[c as usize];
                            leaf_of[j] = bfs_order[c as usize];
                        } else {
                            active.push((c as usize, off as usize, len as usize, j));
                        }
                    }
                    None => break,
                }
            }
            if active.is_empty() {
                break;
            }
            for l in (0..active.len()).rev() {
                let (cur, pos, rem, j) = &mut active[l];
                let vtx = bfs_order[*cur];
                paths[*pos] = vtx;
                *pos += 1;
                *rem -= 1;
                if *rem == 0 {
                    leaf_of[*j] = vtx;
                    active.swap_remove(l);
                } else {
                    *cur = cstart[*cur] as usize;
                    // Needed once the other lanes have had their turn.
                    prefetch(&bfs_order[*cur]);
                    prefetch(&cstart[*cur]);
                }
            }
        }
    }
    drop(fills);

    // Legs reaching their branching point through the root (the root is a
    // leaf, or sits mid-leg with degree 2) are not downward chains; walk
    // the non-leaf side from the root to the first branching point.
    if let Some(w) = root_walk(&bfs_order, &cstart, &chain_len) {
        let x = bfs_order[w.owner_rank];
        let mut upper = w.upper;
        upper.reverse();
        let off = paths.len() as u32;
        paths.extend_from_slice(&upper);
        if let Some(side) = w.leaf_side {
            let mut cur = side;
            loop {
                paths.push(bfs_order[cur]);
                if chain_len[cur] == 1 {
                    break;
                }
                cur = cstart[cur] as usize;
            }
        }
        let len = paths.len() as u32 - off;
        debug_assert_eq!(root_leg, Some((x, len)));
        raw.push((x, off, len));
        leaf_of.push(*paths.last().expect("root leg is non-empty"));
    }

    // Group the legs by owner with a counting sort (discovery order is
    // almost grouped already, but the root-side leg lands out of place).
    // Child blocks are visited in ascending vertex order, so every group
    // already lists its legs by first path vertex; only the group that
    // received the root-side leg needs an actual sort.
    let mut starts = vec![0u32; n + 1];
    for (j, &(x, _, _)) in raw.iter().enumerate() {
        if j + PF_FAR < raw.len() {
            prefetch(&starts[raw[j + PF_FAR].0]);
        }
        starts[x + 1] += 1;
    }
    for i in 0..n {
        starts[i + 1] += starts[i];
    }
    let mut items = vec![(0u32, 0u32, 0usize); raw.len()];
    let mut cursor = starts.clone();
    for (j, &(x, off, len)) in raw.iter().enumerate() {
        if j + PF_FAR < raw.len() {
            prefetch(&cursor[raw[j + PF_FAR].0]);
            prefetch(&items[cursor[raw[j + PF_FAR].0] as usize]);
        }
        items[cursor[x] as usize] = (off, len, leaf_of[j]);
        cursor[x] += 1;
    }
    if let Some((x, _)) = root_leg {
        items[starts[x] as usize..starts[x + 1] as usize]
            .sort_by_key(|&(off, _, _)| paths[off as usize]);
    }
    let legs = Legs { starts, items, paths };

    let special_branching_points: Vec<Vertex> = branching_points
        .iter()
        .copied()
        .filter(|&v| !legs.at(v).is_empty())
        .collect();

    Ok(TreeStructure {
        root,
        parent: OnceLock::new(),
        bfs_order,
        leaves: OnceLock::new(),
        branching_points,
        special_branching_points,
        legs,
        stems,
        prank,
        cstart,
        chain: chain_len,
        root_leg,
    })
}

/// The subtree `L(x)`: `x` together with all vertices of its legs.
pub fn subtree_lx(ts: &TreeStructure, x: Vertex) -> Result<Vec<Vertex>> {
    if !ts.special_branching_points.contains(&x) {
        return Err(Error::NotSpecialBranchingPoint(x));
    }
    let mut out = vec![x];
    for leg in ts.legs.at(x).iter() {
        out.extend_from_slice(leg.path);
    }
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    #[test]
    fn bfs_on_path() {
        let g = instances::gen_path(3).unwrap();
        assert_eq!(g.bfs_distances(0), vec![0, 1, 2]);
    }

    #[test]
    fn bfs_on_complete_graph() {
        let g = instances::gen_complete(4).unwrap();
        assert_eq!(g.bfs_distances(2), vec![1, 1, 0, 1]);
    }

    #[test]
    fn bfs_unreachable_sentinel() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.bfs_distances(0), vec![0, 1, INFINITE, INFINITE]);
    }

    #[test]
    fn tree_recognition() {
        assert!(instances::gen_path(5).unwrap().is_tree());
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert!(!c4.is_tree());
        assert!(!Graph::new(2).is_tree());
        assert!(Graph::new(1).is_tree());
    }

    #[test]
    fn analyze_spider() {
        // Center 0 with legs of lengths 1, 2 and 3.
        let g = instances::gen_spider(&[1, 2, 3]).unwrap();
        let ts = analyze_tree(&g).unwrap();
        assert_eq!(ts.special_branching_points, vec![0]);
        assert_eq!(ts.stems[0], 1);
        assert_eq!(ts.legs.at(0).len(), 3);
        let mut lens: Vec<usize> = ts.legs.at(0).iter().map(|l| l.len()).collect();
        lens.sort_unstable();
        assert_eq!(lens, vec![1, 2, 3]);
        assert_eq!(subtree_lx(&ts, 0).unwrap().len(), 7);
    }

    #[test]
    fn analyze_path_has_no_special_branching_points() {
        let g = instances::gen_path(6).unwrap();
        let ts = analyze_tree(&g).unwrap();
        assert!(ts.special_branching_points.is_empty());
        assert!(ts.branching_points.is_empty());
    }

    #[test]
    fn analyze_t1_1() {
        // Star with 3 leaves whose center is adjacent to one extra vertex:
        // the center is a 4-stem here (the hub is itself a leaf), with four
        // legs of length 1. With star_size = 3 and l = 1 the hub has degree 1.
        let g = instances::gen_t1(1, 3).unwrap();
        let ts = analyze_tree(&g).unwrap();
        assert_eq!(ts.special_branching_points.len(), 1);
        let c = ts.special_branching_points[0];
        assert_eq!(ts.stems[c], 4);
        assert_eq!(ts.legs.at(c).len(), 4);
        assert!(ts.legs.at(c).iter().all(|l| l.len() == 1));
    }

    #[test]
    fn analyze_star() {
        let g = instances::gen_star(5).unwrap();
        let ts = analyze_tree(&g).unwrap();
        assert_eq!(ts.special_branching_points, vec![0]);
        assert_eq!(ts.stems[0], 5);
    }

    #[test]
    fn subtree_lx_on_two_stem() {
        // Vertex 1 is a 2-stem whose branch toward the star at 0 is not a
        // leg, so L(1) holds only the stem and its two leaves.
        let g =
            Graph::from_edges(7, &[(0, 4), (0, 5), (0, 6), (0, 1), (1, 2), (1, 3)]).unwrap();
        let ts = analyze_tree(&g).unwrap();
        assert_eq!(subtree_lx(&ts, 1).unwrap(), vec![1, 2, 3]);
        assert_eq!(subtree_lx(&ts, 0).unwrap(), vec![0, 4, 5, 6]);
        assert!(subtree_lx(&ts, 2).is_err());
    }

    #[test]
    fn t2_1_star_subtree() {
        let g = instances::gen_t2(1).unwrap();
        let ts = analyze_tree(&g).unwrap();
        // The subdivided star center is a 2-stem with a length-2 leg: its
        // L(x) holds the center plus 4 leg vertices.
        let center = ts
            .special_branching_points
            .iter()
            .copied()
            .find(|&x| ts.stems[x] == 2 && ts.legs.at(x).iter().any(|l| l.len() == 2))
            .unwrap();
        assert_eq!(subtree_lx(&ts, center).unwrap().len(), 5);
    }

    #[test]
    fn leg_partition_covers_tree() {
        for (seed, n) in [(1u64, 9usize), (2, 12), (3, 14), (4, 7)] {
            let g = instances::gen_random_tree(n, seed).unwrap();
            let ts = analyze_tree(&g).unwrap();
            let leg_total: usize = (0..n).map(|v| ts.legs.at(v).iter().map(|l| l.len()).sum::<usize>()).sum();
            let mut in_leg = vec![false; n];
            for v in 0..n {
                for leg in ts.legs.at(v).iter() {
                    for &w in leg.path {
                        assert!(!in_leg[w], "vertex appears in two legs");
                        in_leg[w] = true;
                    }
                }
            }
            let non_leg = in_leg.iter().filter(|&&b| !b).count();
            assert_eq!(leg_total + non_leg, n);
        }
    }
}
