use serde::{Deserialize, Serialize};

use super::{is_connected, CubicGraph};
use crate::error::{Error, Result};

/// A list of simple cycles, each given as its vertex sequence; the closing
/// edge from the last vertex back to the first is implied.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleList {
    pub cycles: Vec<Vec<usize>>,
}

impl CycleList {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.cycles.iter()
    }
}

/// True if `cycle` is a simple closed walk along edges of `g`.
pub fn is_graph_cycle(g: &CubicGraph, cycle: &[usize]) -> bool {
    if cycle.len() < 3 || cycle.iter().any(|&v| v >= g.n()) {
        return false;
    }
    let mut seen = vec![false; g.n()];
    for &v in cycle {
        if std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    cycle
        .iter()
        .zip(cycle.iter().cycle().skip(1))
        .all(|(&u, &v)| g.has_edge(u, v))
}

/// Fundamental cycle basis from a breadth-first spanning tree rooted at 0.
/// Returns `|E| - n + 1 = n/2 + 1` cycles, one per non-tree edge, in edge
/// order.
pub fn fundamental_cycles(g: &CubicGraph) -> Result<CycleList> {
    if !is_connected(g) {
        return Err(Error::Disconnected);
    }
    let (parent, _) = g.bfs_tree(0);
    let mut depth = vec![0usize; g.n()];
    for v in 0..g.n() {
        let mut d = 0;
        let mut x = v;
        while let Some(p) = parent[x] {
            d += 1;
            x = p;
        }
        depth[v] = d;
    }
    let is_tree_edge =
        |u: usize, v: usize| parent[u] == Some(v) || parent[v] == Some(u);

    let mut cycles = Vec::new();
    for &(u, v) in g.edges() {
        if is_tree_edge(u, v) {
            continue;
        }
        // Walk both ends up to their lowest common ancestor.
        let (mut a, mut b) = (u, v);
        let mut left = vec![a];
        let mut right = vec![b];
        while depth[a] > depth[b] {
            a = parent[a].unwrap();
            left.push(a);
        }
        while depth[b] > depth[a] {
            b = parent[b].unwrap();
            right.push(b);
        }
        while a != b {
            a = parent[a].unwrap();
            b = parent[b].unwrap();
            left.push(a);
            right.push(b);
        }
        right.pop();
        left.extend(right.into_iter().rev());
        cycles.push(left);
    }
    Ok(CycleList { cycles })
}
