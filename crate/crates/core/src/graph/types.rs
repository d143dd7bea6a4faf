use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("node {0} out of range")]
    NodeOutOfRange(usize),
    #[error("self loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1}) with the same color")]
    DuplicateEdge(usize, usize),
    #[error("graph is not a valid literal-clause graph with negation matching: {0}")]
    NotAnLcn(String),
    #[error("labeling refers to variable {0} outside the graph")]
    UnknownVariable(u32),
}

/// Role of a node. Initial refinement colors are derived from this.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Literal,
    Clause,
    Plain,
}

impl NodeKind {
    pub fn tag(self) -> char {
        match self {
            NodeKind::Literal => 'l',
            NodeKind::Clause => 'c',
            NodeKind::Plain => 'p',
        }
    }

    pub fn from_tag(c: char) -> Option<Self> {
        match c {
            'l' => Some(NodeKind::Literal),
            'c' => Some(NodeKind::Clause),
            'p' => Some(NodeKind::Plain),
            _ => None,
        }
    }
}

/// Edge colors. Refinement treats each color class separately, so the choice
/// of colors decides what the WL test can see.
///
/// `LiteralClause`/`LiteralLiteral` are the two LCN colors, `Plain` is used
/// by incidence graphs and raw base graphs, and the two occurrence colors
/// carry the polarity information of the variable-clause representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeColor {
    LiteralClause,
    LiteralLiteral,
    Plain,
    PositiveOccurrence,
    NegativeOccurrence,
}

impl EdgeColor {
    pub const ALL: [EdgeColor; 5] = [
        EdgeColor::LiteralClause,
        EdgeColor::LiteralLiteral,
        EdgeColor::Plain,
        EdgeColor::PositiveOccurrence,
        EdgeColor::NegativeOccurrence,
    ];

    pub fn index(self) -> usize {
        match self {
            EdgeColor::LiteralClause => 0,
            EdgeColor::LiteralLiteral => 1,
            EdgeColor::Plain => 2,
            EdgeColor::PositiveOccurrence => 3,
            EdgeColor::NegativeOccurrence => 4,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            EdgeColor::LiteralClause => "lc",
            EdgeColor::LiteralLiteral => "ll",
            EdgeColor::Plain => "pp",
            EdgeColor::PositiveOccurrence => "vp",
            EdgeColor::NegativeOccurrence => "vn",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        match s {
            "lc" => Some(EdgeColor::LiteralClause),
            "ll" => Some(EdgeColor::LiteralLiteral),
            "pp" => Some(EdgeColor::Plain),
            "vp" => Some(EdgeColor::PositiveOccurrence),
            "vn" => Some(EdgeColor::NegativeOccurrence),
            _ => None,
        }
    }
}

/// Assignment mark attached to a literal node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mark {
    Top,
    Bottom,
}

/// A partial node labeling; unlabeled nodes keep their kind-only color.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeLabeling {
    marks: BTreeMap<usize, Mark>,
}

impl NodeLabeling {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, node: usize, mark: Mark) {
        self.marks.insert(node, mark);
    }

    pub fn get(&self, node: usize) -> Option<Mark> {
        self.marks.get(&node).copied()
    }

    pub fn len(&self) -> usize {
        self.marks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Mark)> + '_ {
        self.marks.iter().map(|(&n, &m)| (n, m))
    }
}

/// An undirected node- and edge-colored graph.
///
/// Immutable once built. Edges are normalized (`u < v`), deduplicated per
/// color and sorted, so structural equality is graph equality for a fixed
/// node numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatGraph {
    kinds: Vec<NodeKind>,
    edges: Vec<(usize, usize, EdgeColor)>,
    adjacency: Vec<[Vec<usize>; 5]>,
}

impl SatGraph {
    /// Builds a graph, normalizing and validating the edge list.
    pub fn new(
        kinds: Vec<NodeKind>,
        edges: impl IntoIterator<Item = (usize, usize, EdgeColor)>,
    ) -> Result<Self, GraphError> {
        let n = kinds.len();
        let mut normalized: Vec<(usize, usize, EdgeColor)> = Vec::new();
        for (u, v, color) in edges {
            if u >= n {
                return Err(GraphError::NodeOutOfRange(u));
            }
            if v >= n {
                return Err(GraphError::NodeOutOfRange(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            normalized.push((u.min(v), u.max(v), color));
        }
        normalized.sort_unstable_by_key(|&(u, v, c)| (u, v, c.index()));
        for w in normalized.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let mut adjacency: Vec<[Vec<usize>; 5]> = vec![Default::default(); n];
        for &(u, v, color) in &normalized {
            adjacency[u][color.index()].push(v);
            adjacency[v][color.index()].push(u);
        }
        for adj in &mut adjacency {
            for list in adj.iter_mut() {
                list.sort_unstable();
            }
        }
        Ok(SatGraph {
            kinds,
            edges: normalized,
            adjacency,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.kinds.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn kind(&self, node: usize) -> NodeKind {
        self.kinds[node]
    }

    pub fn kinds(&self) -> &[NodeKind] {
        &self.kinds
    }

    /// Normalized edge list, sorted by (u, v, color).
    pub fn edges(&self) -> &[(usize, usize, EdgeColor)] {
        &self.edges
    }

    /// Neighbors of `node` through edges of `color`, ascending.
    pub fn neighbors(&self, node: usize, color: EdgeColor) -> &[usize] {
        &self.adjacency[node][color.index()]
    }

    /// Neighbors through any edge color.
    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].iter().map(Vec::len).sum()
    }

    pub fn nodes_of_kind(&self, kind: NodeKind) -> impl Iterator<Item = usize> + '_ {
        self.kinds
            .iter()
            .enumerate()
            .filter(move |(_, &k)| k == kind)
            .map(|(i, _)| i)
    }

    pub fn edge_count_of_color(&self, color: EdgeColor) -> usize {
        self.edges.iter().filter(|&&(_, _, c)| c == color).count()
    }

    /// Disjoint union; `other`'s node ids are shifted by `self.num_nodes()`.
    pub fn disjoint_union(&self, other: &SatGraph) -> SatGraph {
        let offset = self.num_nodes();
        let mut kinds = self.kinds.clone();
        kinds.extend_from_slice(&other.kinds);
        let edges = self.edges.iter().copied().chain(
            other
                .edges
                .iter()
                .map(|&(u, v, c)| (u + offset, v + offset, c)),
        );
        SatGraph::new(kinds, edges).expect("union of valid graphs is valid")
    }

    /// The same graph under a node relabeling: node i becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<SatGraph, GraphError> {
        assert_eq!(perm.len(), self.num_nodes());
        let mut kinds = vec![NodeKind::Plain; self.num_nodes()];
        for (i, &p) in perm.iter().enumerate() {
            if p >= self.num_nodes() {
                return Err(GraphError::NodeOutOfRange(p));
            }
            kinds[p] = self.kinds[i];
        }
        SatGraph::new(
            kinds,
            self.edges.iter().map(|&(u, v, c)| (perm[u], perm[v], c)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loops_and_duplicates() {
        let kinds = vec![NodeKind::Plain; 3];
        assert_eq!(
            SatGraph::new(kinds.clone(), [(0, 0, EdgeColor::Plain)]),
            Err(GraphError::SelfLoop(0))
        );
        assert_eq!(
            SatGraph::new(kinds, [(0, 1, EdgeColor::Plain), (1, 0, EdgeColor::Plain)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
    }

    #[test]
    fn same_endpoints_different_colors_allowed() {
        let g = SatGraph::new(
            vec![NodeKind::Plain; 2],
            [(0, 1, EdgeColor::Plain), (0, 1, EdgeColor::LiteralLiteral)],
        )
        .unwrap();
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.neighbors(0, EdgeColor::Plain), &[1]);
        assert_eq!(g.neighbors(0, EdgeColor::LiteralLiteral), &[1]);
        assert_eq!(g.neighbors(0, EdgeColor::LiteralClause), &[] as &[usize]);
    }

    #[test]
    fn permutation_preserves_structure() {
        let g = SatGraph::new(
            vec![NodeKind::Literal, NodeKind::Literal, NodeKind::Clause],
            [
                (0, 2, EdgeColor::LiteralClause),
                (1, 2, EdgeColor::LiteralClause),
                (0, 1, EdgeColor::LiteralLiteral),
            ],
        )
        .unwrap();
        let h = g.permuted(&[2, 1, 0]).unwrap();
        assert_eq!(h.kind(2), NodeKind::Literal);
        assert_eq!(h.kind(0), NodeKind::Clause);
        assert_eq!(h.neighbors(0, EdgeColor::LiteralClause), &[1, 2]);
    }
}
