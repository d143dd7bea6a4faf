use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{EdgeColor, NodeKind, SatGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("node {0} out of range")]
    NodeOutOfRange(usize),
    #[error("self loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph must be connected")]
    Disconnected,
    #[error("no d-regular graph exists: n*d = {n}*{d} is odd")]
    InfeasibleRegular { n: usize, d: usize },
    #[error("degree {degree} exceeds the regular-graph bound (need d < n = {n})")]
    DegreeTooLarge { degree: usize, n: usize },
    #[error("vertex degree {degree} exceeds the gadget cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("gadget size {k} exceeds the cap {cap}")]
    GadgetCapExceeded { k: usize, cap: usize },
    #[error("charge function covers {given} vertices, graph has {expected}")]
    ChargeSizeMismatch { given: usize, expected: usize },
    #[error("vertex {vertex} is isolated but charged; the parity constraint has no CNF form")]
    IsolatedChargedVertex { vertex: usize },
    #[error("orientation has odd outdegree at vertex {0}")]
    OddOutdegree(usize),
    #[error("instance is twisted; models correspond to orientations only without a twist")]
    Twisted,
    #[error("{0}")]
    InvalidInput(String),
}

/// A simple undirected graph used as the base of gadget constructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseGraph {
    num_nodes: usize,
    edges: Vec<(usize, usize)>,
}

impl BaseGraph {
    /// Builds a base graph; edges are normalized (`u < v`) and sorted.
    pub fn new(
        num_nodes: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GenError> {
        let mut normalized = Vec::new();
        for (u, v) in edges {
            if u >= num_nodes {
                return Err(GenError::NodeOutOfRange(u));
            }
            if v >= num_nodes {
                return Err(GenError::NodeOutOfRange(v));
            }
            if u == v {
                return Err(GenError::SelfLoop(u));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        for w in normalized.windows(2) {
            if w[0] == w[1] {
                return Err(GenError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        Ok(BaseGraph {
            num_nodes,
            edges: normalized,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.num_nodes];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Neighbors of `v`, ascending.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.num_nodes == 0 {
            return true;
        }
        let mut adjacency = vec![Vec::new(); self.num_nodes];
        for &(u, v) in &self.edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut seen = vec![false; self.num_nodes];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1usize;
        while let Some(u) = stack.pop() {
            for &w in &adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.num_nodes
    }

    pub fn all_degrees_odd(&self) -> bool {
        self.degrees().iter().all(|d| d % 2 == 1)
    }

    /// Connected with no cut vertex. Twisted gadget pairs over graphs with a
    /// cut vertex can leak the twist to plain refinement, so
    /// indistinguishability claims are only made over biconnected bases.
    pub fn is_biconnected(&self) -> bool {
        if self.num_nodes < 3 || !self.is_connected() {
            return false;
        }
        (0..self.num_nodes).all(|removed| {
            let mut adjacency = vec![Vec::new(); self.num_nodes];
            for &(u, v) in &self.edges {
                if u != removed && v != removed {
                    adjacency[u].push(v);
                    adjacency[v].push(u);
                }
            }
            let start = (0..self.num_nodes).find(|&v| v != removed).unwrap();
            let mut seen = vec![false; self.num_nodes];
            seen[removed] = true;
            seen[start] = true;
            let mut stack = vec![start];
            let mut count = 1;
            while let Some(u) = stack.pop() {
                for &w in &adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        count += 1;
                        stack.push(w);
                    }
                }
            }
            count == self.num_nodes - 1
        })
    }

    /// The graph as a plain [`SatGraph`].
    pub fn to_sat_graph(&self) -> SatGraph {
        SatGraph::new(
            vec![NodeKind::Plain; self.num_nodes],
            self.edges.iter().map(|&(u, v)| (u, v, EdgeColor::Plain)),
        )
        .expect("base graphs are simple")
    }

    /// Edge list in the `u-v u-v ...` sidecar syntax.
    pub fn edge_list_string(&self) -> String {
        self.edges
            .iter()
            .map(|(u, v)| format!("{u}-{v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    // Named graphs.

    pub fn single_edge() -> Self {
        BaseGraph::new(2, [(0, 1)]).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least 3 nodes");
        BaseGraph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn path(n: usize) -> Self {
        assert!(n >= 2);
        BaseGraph::new(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    pub fn complete(n: usize) -> Self {
        BaseGraph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        BaseGraph::new(
            a + b,
            (0..a).flat_map(move |u| (0..b).map(move |v| (u, a + v))),
        )
        .unwrap()
    }

    /// The triangular prism: two triangles joined by a matching. Together
    /// with the complete bipartite graph on 3+3 nodes these are the two
    /// cubic graphs on six vertices.
    pub fn prism() -> Self {
        BaseGraph::new(
            6,
            [
                (0, 1),
                (1, 2),
                (0, 2),
                (3, 4),
                (4, 5),
                (3, 5),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
        )
        .unwrap()
    }

    /// The 3-regular graph on 10 nodes with girth 5: outer 5-cycle, inner
    /// 5-star, spokes between them.
    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5)); // outer cycle
            edges.push((i, i + 5)); // spokes
            edges.push((5 + i, 5 + (i + 2) % 5)); // inner pentagram
        }
        BaseGraph::new(10, edges).unwrap()
    }
}

/// An orientation of a base graph's edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    arcs: Vec<(usize, usize)>,
}

impl Orientation {
    pub fn new(arcs: Vec<(usize, usize)>) -> Self {
        Orientation { arcs }
    }

    /// Arcs in base-graph edge order.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn outdegrees(&self, num_nodes: usize) -> Vec<usize> {
        let mut out = vec![0usize; num_nodes];
        for &(from, _) in &self.arcs {
            out[from] += 1;
        }
        out
    }

    pub fn all_outdegrees_even(&self, num_nodes: usize) -> bool {
        self.outdegrees(num_nodes).iter().all(|d| d % 2 == 0)
    }
}

/// Random connected d-regular simple graph via the pairing model: stubs are
/// shuffled and paired, rejecting pairings with loops or multi-edges, then
/// disconnected outcomes, until a valid sample appears.
pub fn random_regular_graph(n: usize, d: usize, seed: u64) -> Result<BaseGraph, GenError> {
    if !(n * d).is_multiple_of(2) {
        return Err(GenError::InfeasibleRegular { n, d });
    }
    if d >= n {
        return Err(GenError::DegreeTooLarge { degree: d, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: loop {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        stubs.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n * d / 2);
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v {
                continue 'attempt;
            }
            edges.push((u, v));
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let g = BaseGraph::new(n, edges).expect("validated above");
        if g.is_connected() {
            return Ok(g);
        }
    }
}
