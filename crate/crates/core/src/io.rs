//! Edge-list text format: first line `n m`, then `m` lines `u v` with
//! `0 <= u < v < n`. Lines starting with `#` are comments; blank lines are
//! ignored.

use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("missing 'n m' header line".into()))?;
    let mut parts = header.split_whitespace();
    let n: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad header line: {header:?}")))?;
    let m: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad header line: {header:?}")))?;
    if parts.next().is_some() {
        return Err(Error::Parse(format!("trailing tokens in header: {header:?}")));
    }
    let mut g = Graph::new(n);
    let mut count = 0;
    for line in lines {
        let mut parts = line.split_whitespace();
        let u: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad edge line: {line:?}")))?;
        let v: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad edge line: {line:?}")))?;
        if parts.next().is_some() {
            return Err(Error::Parse(format!("trailing tokens in edge line: {line:?}")));
        }
        if u >= v {
            return Err(Error::Parse(format!(
                "edge line {line:?} violates u < v"
            )));
        }
        g.add_edge(u, v)?;
        count += 1;
    }
    if count != m {
        return Err(Error::Parse(format!(
            "header declares {m} edges but {count} were given"
        )));
    }
    Ok(g)
}

pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn write_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_graph(g))?;
    Ok(())
}
