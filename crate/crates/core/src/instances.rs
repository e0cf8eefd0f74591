//! Instance generators: named families (paths, stars, spiders, the two
//! tight families for the tree 2-approximation) and seeded random trees and
//! graphs.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A generatable instance family with its parameters. Generation is
/// seed-deterministic for the random families.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum InstanceSpec {
    Path { n: usize },
    Complete { n: usize },
    Star { leaves: usize },
    Spider { leg_lengths: Vec<usize> },
    T1 { l: usize, star_size: usize },
    T2 { l: usize },
    RandomTree { n: usize, seed: u64 },
    RandomGraph { n: usize, p: f64, seed: u64 },
}

impl InstanceSpec {
    pub fn generate(&self) -> Result<Graph> {
        match self {
            InstanceSpec::Path { n } => gen_path(*n),
            InstanceSpec::Complete { n } => gen_complete(*n),
            InstanceSpec::Star { leaves } => gen_star(*leaves),
            InstanceSpec::Spider { leg_lengths } => gen_spider(leg_lengths),
            InstanceSpec::T1 { l, star_size } => gen_t1(*l, *star_size),
            InstanceSpec::T2 { l } => gen_t2(*l),
            InstanceSpec::RandomTree { n, seed } => gen_random_tree(*n, *seed),
            InstanceSpec::RandomGraph { n, p, seed } => gen_random_graph(*n, *p, *seed),
        }
    }

    /// Short label used in benchmark output.
    pub fn label(&self) -> String {
        match self {
            InstanceSpec::Path { n } => format!("path_{n}"),
            InstanceSpec::Complete { n } => format!("complete_{n}"),
            InstanceSpec::Star { leaves } => format!("star_{leaves}"),
            InstanceSpec::Spider { leg_lengths } => {
                let legs: Vec<String> = leg_lengths.iter().map(|l| l.to_string()).collect();
                format!("spider_{}", legs.join("-"))
            }
            InstanceSpec::T1 { l, star_size } => format!("t1_{l}_{star_size}"),
            InstanceSpec::T2 { l } => format!("t2_{l}"),
            InstanceSpec::RandomTree { n, seed } => format!("rtree_{n}_s{seed}"),
            InstanceSpec::RandomGraph { n, p, seed } => format!("rgraph_{n}_p{p}_s{seed}"),
        }
    }
}

pub fn gen_path(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::BadParam("path needs n >= 1".into()));
    }
    let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    Graph::from_edges(n, &edges)
}

pub fn gen_complete(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::BadParam("complete graph needs n >= 1".into()));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges)
}

/// Star `K_{1,leaves}`: center is vertex 0.
pub fn gen_star(leaves: usize) -> Result<Graph> {
    if leaves == 0 {
        return Err(Error::BadParam("star needs at least one leaf".into()));
    }
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    Graph::from_edges(leaves + 1, &edges)
}

/// Spider: center 0 with one path leg per entry of `leg_lengths`.
pub fn gen_spider(leg_lengths: &[usize]) -> Result<Graph> {
    if leg_lengths.iter().any(|&l| l == 0) {
        return Err(Error::BadParam("spider leg lengths must be >= 1".into()));
    }
    let n = 1 + leg_lengths.iter().sum::<usize>();
    let mut edges = Vec::new();
    let mut next = 1;
    for &len in leg_lengths {
        let mut prev = 0;
        for _ in 0..len {
            edges.push((prev.min(next), prev.max(next)));
            prev = next;
            next += 1;
        }
    }
    Graph::from_edges(n, &edges)
}

/// First tight family: `l` disjoint stars with `star_size` leaves each, all
/// centers adjacent to one extra hub vertex. Vertex 0 is the hub; star `i`
/// occupies a contiguous block starting with its center.
pub fn gen_t1(l: usize, star_size: usize) -> Result<Graph> {
    if l < 1 {
        return Err(Error::BadParam("t1 needs l >= 1".into()));
    }
    if star_size < 3 {
        return Err(Error::BadParam("t1 needs star_size >= 3".into()));
    }
    let n = l * (star_size + 1) + 1;
    let mut edges = Vec::new();
    for i in 0..l {
        let center = 1 + i * (star_size + 1);
        edges.push((0, center));
        for j in 1..=star_size {
            edges.push((center, center + j));
        }
    }
    Graph::from_edges(n, &edges)
}

/// Second tight family: a backbone path of `l + 2` vertices; two extra
/// leaves on each end-vertex; each inner backbone vertex carries a 3-leaf
/// star with one edge subdivided once, its center adjacent to the backbone
/// vertex. Backbone vertices are `0..l+2` in path order.
pub fn gen_t2(l: usize) -> Result<Graph> {
    if l < 1 {
        return Err(Error::BadParam("t2 needs l >= 1".into()));
    }
    let backbone = l + 2;
    let n = backbone + 4 + 5 * l;
    let mut edges = Vec::new();
    for i in 0..backbone - 1 {
        edges.push((i, i + 1));
    }
    let mut next = backbone;
    for end in [0, backbone - 1] {
        edges.push((end, next));
        edges.push((end, next + 1));
        next += 2;
    }
    for v in 1..backbone - 1 {
        let center = next;
        let (leaf_a, leaf_b, sub_inner, sub_leaf) = (next + 1, next + 2, next + 3, next + 4);
        edges.push((v, center));
        edges.push((center, leaf_a));
        edges.push((center, leaf_b));
        edges.push((center, sub_inner));
        edges.push((sub_inner, sub_leaf));
        next += 5;
    }
    debug_assert_eq!(next, n);
    Graph::from_edges(n, &edges)
}

/// Uniform random labeled tree via Pruefer decoding; deterministic per seed.
pub fn gen_random_tree(n: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::BadParam("random tree needs n >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if n == 1 {
        return Ok(Graph::new(1));
    }
    if n == 2 {
        return Graph::from_edges(2, &[(0, 1)]);
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &v in &seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    // Pointer-based decoding: repeatedly attach the smallest current leaf.
    let mut ptr = 0;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &v in &seq {
        edges.push((leaf.min(v), leaf.max(v)));
        degree[v] -= 1;
        if degree[v] == 1 && v < ptr {
            leaf = v;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf.min(n - 1), leaf.max(n - 1)));
    Graph::from_edges(n, &edges)
}

/// Erdos-Renyi G(n, p), redrawn until connected; deterministic per seed.
pub fn gen_random_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::BadParam("random graph needs n >= 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadParam("edge probability must be in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10_000 {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, &edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::BadParam(format!(
        "could not draw a connected G({n}, {p}) within the attempt budget"
    )))
}
