//! Simple undirected graphs, the cubic-graph wrapper used by the dynamics,
//! graph6 I/O, and the constructed graph families.

mod cycles;
mod families;
mod graph6;

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

pub use cycles::{fundamental_cycles, is_graph_cycle, CycleList};
pub use families::{
    double_ring, g50_rewired, high_energy_e, high_energy_f, moebius_ladder, patternless_chain, twisted_ring,
    twisted_swap_position, two_pattern_graph, TWO_PATTERN_GRAPH6,
};
pub use graph6::{encode_graph6, parse_graph6, parse_graph6_lines};

/// An undirected edge stored with `u < v`.
pub type Edge = (usize, usize);

/// A decoded graph that has not yet been checked for 3-regularity.
///
/// The edge list is kept exactly as supplied (in normalized `u <= v` order)
/// so that [`validate_cubic`] can report loops and repeated edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        let edges = edges
            .into_iter()
            .map(|(a, b)| {
                let hi = a.max(b);
                if hi >= n {
                    Err(Error::VertexOutOfRange { vertex: hi, n })
                } else {
                    Ok((a.min(b), hi))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn to_graph6(&self) -> Result<Vec<u8>> {
        encode_graph6(self.n, &self.edges)
    }
}

/// Everything [`validate_cubic`] found wrong with a graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CubicViolations {
    pub odd_order: bool,
    /// `(vertex, degree)` for every vertex whose degree is not 3.
    pub bad_degrees: Vec<(usize, usize)>,
    pub self_loops: Vec<usize>,
    pub duplicate_edges: Vec<Edge>,
}

impl CubicViolations {
    pub fn is_empty(&self) -> bool {
        !self.odd_order
            && self.bad_degrees.is_empty()
            && self.self_loops.is_empty()
            && self.duplicate_edges.is_empty()
    }
}

impl fmt::Display for CubicViolations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.odd_order {
            parts.push("odd vertex count".to_string());
        }
        if !self.bad_degrees.is_empty() {
            let list: Vec<String> = self
                .bad_degrees
                .iter()
                .map(|(v, d)| format!("{v}:{d}"))
                .collect();
            parts.push(format!("degree != 3 at [{}]", list.join(", ")));
        }
        if !self.self_loops.is_empty() {
            parts.push(format!("self-loops at {:?}", self.self_loops));
        }
        if !self.duplicate_edges.is_empty() {
            parts.push(format!("duplicate edges {:?}", self.duplicate_edges));
        }
        write!(f, "{}", parts.join("; "))
    }
}

/// Check every cubic-graph invariant. Total: always returns a report.
pub fn validate_cubic(g: &Graph) -> std::result::Result<(), CubicViolations> {
    let mut report = CubicViolations {
        odd_order: g.n % 2 == 1,
        ..Default::default()
    };
    let mut sorted = g.edges.clone();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] && report.duplicate_edges.last() != Some(&w[0]) {
            report.duplicate_edges.push(w[0]);
        }
    }
    report.self_loops = sorted
        .iter()
        .filter(|(u, v)| u == v)
        .map(|&(u, _)| u)
        .collect();
    report.bad_degrees = g
        .degrees()
        .into_iter()
        .enumerate()
        .filter(|&(_, d)| d != 3)
        .collect();
    if report.is_empty() {
        Ok(())
    } else {
        Err(report)
    }
}

/// A simple undirected 3-regular graph. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicGraph {
    n: usize,
    edges: Vec<Edge>,
    nbrs: Vec<[usize; 3]>,
    id: Option<String>,
}

impl CubicGraph {
    pub fn from_edges(n: usize, edges: Vec<Edge>) -> Result<Self> {
        Self::try_from(Graph::new(n, edges)?)
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }

    pub fn id(&self) -> Option<&str> {
        self.id.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize; 3] {
        &self.nbrs[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.nbrs[u].contains(&v)
    }

    pub fn to_graph6(&self) -> Vec<u8> {
        encode_graph6(self.n, &self.edges).expect("cubic graphs here have n <= 62")
    }

    /// Graph Laplacian `D - A` as a dense row-major matrix.
    pub fn laplacian(&self) -> Vec<Vec<f64>> {
        let mut lap = vec![vec![0.0; self.n]; self.n];
        for &(u, v) in &self.edges {
            lap[u][v] -= 1.0;
            lap[v][u] -= 1.0;
            lap[u][u] += 1.0;
            lap[v][v] += 1.0;
        }
        lap
    }

    /// Breadth-first parent array rooted at `root`; `None` marks
    /// unreachable vertices and the root itself.
    pub(crate) fn bfs_tree(&self, root: usize) -> (Vec<Option<usize>>, Vec<bool>) {
        let mut parent = vec![None; self.n];
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            for &w in &self.nbrs[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        (parent, seen)
    }
}

impl TryFrom<Graph> for CubicGraph {
    type Error = Error;

    fn try_from(g: Graph) -> Result<Self> {
        validate_cubic(&g).map_err(|r| Error::NotCubic(r.to_string()))?;
        let mut edges = g.edges;
        edges.sort_unstable();
        let mut nbrs = vec![[usize::MAX; 3]; g.n];
        let mut fill = vec![0usize; g.n];
        for &(u, v) in &edges {
            nbrs[u][fill[u]] = v;
            fill[u] += 1;
            nbrs[v][fill[v]] = u;
            fill[v] += 1;
        }
        for row in &mut nbrs {
            row.sort_unstable();
        }
        Ok(Self {
            n: g.n,
            edges,
            nbrs,
            id: None,
        })
    }
}

impl From<&CubicGraph> for Graph {
    fn from(g: &CubicGraph) -> Self {
        Graph {
            n: g.n,
            edges: g.edges.clone(),
        }
    }
}

/// Parse a graph6 dataset into cubic graphs with ids `"{label}:{k}"`, `k`
/// being the 1-based record index. Each entry carries its line number.
pub fn parse_cubic_dataset(text: &[u8], label: &str) -> Vec<(usize, Result<CubicGraph>)> {
    parse_graph6_lines(text)
        .into_iter()
        .enumerate()
        .map(|(k, (line, parsed))| {
            let g = parsed
                .and_then(CubicGraph::try_from)
                .map(|g| g.with_id(format!("{label}:{}", k + 1)));
            (line, g)
        })
        .collect()
}

/// True iff the graph has a single connected component.
pub fn is_connected(g: &CubicGraph) -> bool {
    g.n == 0 || g.bfs_tree(0).1.iter().all(|&s| s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> CubicGraph {
        CubicGraph::try_from(parse_graph6(b"C~").unwrap()).unwrap()
    }

    #[test]
    fn k4_is_cubic_and_connected() {
        let g = k4();
        assert_eq!(g.edges().len(), 6);
        assert!(is_connected(&g));
    }

    #[test]
    fn empty_pair_fails_validation() {
        let g = parse_graph6(b"A?").unwrap();
        let report = validate_cubic(&g).unwrap_err();
        assert_eq!(report.bad_degrees, vec![(0, 0), (1, 0)]);
        assert!(!report.odd_order);
    }

    #[test]
    fn five_cycle_fails_validation() {
        let g = Graph::new(5, (0..5).map(|i| (i, (i + 1) % 5)).collect()).unwrap();
        let report = validate_cubic(&g).unwrap_err();
        assert!(report.odd_order);
        assert_eq!(report.bad_degrees.len(), 5);
        assert!(report.bad_degrees.iter().all(|&(_, d)| d == 2));
    }

    #[test]
    fn loops_and_duplicates_reported() {
        let g = Graph::new(2, vec![(0, 1), (1, 0), (1, 1)]).unwrap();
        let report = validate_cubic(&g).unwrap_err();
        assert_eq!(report.duplicate_edges, vec![(0, 1)]);
        assert_eq!(report.self_loops, vec![1]);
        assert!(report.to_string().contains("duplicate"));
    }

    #[test]
    fn out_of_range_vertex() {
        assert!(matches!(
            Graph::new(3, vec![(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        ));
    }

    #[test]
    fn two_disjoint_k4_disconnected() {
        let mut edges = k4().edges().to_vec();
        edges.extend(k4().edges().iter().map(|&(u, v)| (u + 4, v + 4)));
        let g = CubicGraph::from_edges(8, edges).unwrap();
        assert!(!is_connected(&g));
    }

    #[test]
    fn laplacian_rows_sum_to_zero() {
        let lap = k4().laplacian();
        for row in &lap {
            assert_eq!(row.iter().sum::<f64>(), 0.0);
        }
        assert_eq!(lap[0][0], 3.0);
    }
}
