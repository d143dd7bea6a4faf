use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{EdgeColor, Mark, NodeKind, NodeLabeling, SatGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WlError {
    #[error("round {round} out of range, run has rounds 0..={last}")]
    RoundOutOfRange { round: usize, last: usize },
    #[error("k-WL supports k in 2..=4, got {0}")]
    UnsupportedK(usize),
    #[error("{tuples} tuples exceed the budget of {budget}")]
    TupleBudgetExceeded { tuples: u128, budget: usize },
}

/// A per-node color assignment with dense color ids `0..num_classes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<u32>,
    num_classes: usize,
}

impl Coloring {
    pub fn color(&self, node: usize) -> u32 {
        self.colors[node]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    /// Class sizes indexed by color id.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.num_classes];
        for &c in &self.colors {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// Class sizes as a sorted multiset; invariant under node relabeling.
    pub fn size_histogram(&self) -> Vec<usize> {
        let mut sizes = self.class_sizes();
        sizes.sort_unstable();
        sizes
    }

    /// True iff `finer` refines `self`: every class of `finer` is contained
    /// in a class of `self`.
    pub fn is_refined_by(&self, finer: &Coloring) -> bool {
        let mut seen: HashMap<u32, u32> = HashMap::new();
        for (node, &fc) in finer.colors.iter().enumerate() {
            let coarse = self.colors[node];
            match seen.entry(fc) {
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(coarse);
                }
                std::collections::hash_map::Entry::Occupied(e) => {
                    if *e.get() != coarse {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A full refinement run: the per-round colorings χ⁰, χ¹, … up to the first
/// stable round.
#[derive(Debug, Clone)]
pub struct WlRun {
    rounds: Vec<Coloring>,
    /// First round ℓ whose partition equals the partition at ℓ+1; `None`
    /// when a round cap cut the run short.
    stable_round: Option<usize>,
}

impl WlRun {
    /// First round at which the partition is stable. Refinement is strictly
    /// monotone, so this is at most the node count; runs without a round cap
    /// always converge.
    pub fn converged_round(&self) -> Option<usize> {
        self.stable_round
    }

    /// Rounds available for inspection (0 ..= last).
    pub fn last_round(&self) -> usize {
        self.rounds.len() - 1
    }

    pub fn coloring(&self, round: usize) -> Result<&Coloring, WlError> {
        self.rounds.get(round).ok_or(WlError::RoundOutOfRange {
            round,
            last: self.last_round(),
        })
    }

    /// The coloring at stability (or at the cap, for capped runs).
    pub fn final_coloring(&self) -> &Coloring {
        self.rounds.last().expect("runs have at least round 0")
    }

    /// Per-round class-size lists (partition history).
    pub fn partition_history(&self) -> Vec<Vec<usize>> {
        self.rounds.iter().map(Coloring::class_sizes).collect()
    }
}

fn initial_key(kind: NodeKind, mark: Option<Mark>) -> Vec<u32> {
    let kind_code = match kind {
        NodeKind::Literal => 0u32,
        NodeKind::Clause => 1,
        NodeKind::Plain => 2,
    };
    let mark_code = match mark {
        None => 0u32,
        Some(Mark::Top) => 1,
        Some(Mark::Bottom) => 2,
    };
    vec![kind_code, mark_code]
}

const SEPARATOR: u32 = u32::MAX;

/// One refinement round; returns the new coloring. The signature dictionary
/// assigns dense ids in node order, so identical inputs give identical
/// colorings.
fn refine_once(g: &SatGraph, prev: &Coloring) -> Coloring {
    let mut dictionary: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut colors = Vec::with_capacity(g.num_nodes());
    for node in 0..g.num_nodes() {
        let mut signature: Vec<u32> = Vec::with_capacity(8);
        signature.push(prev.color(node));
        for color in EdgeColor::ALL {
            signature.push(SEPARATOR);
            let start = signature.len();
            for &w in g.neighbors(node, color) {
                signature.push(prev.color(w));
            }
            signature[start..].sort_unstable();
        }
        let next_id = dictionary.len() as u32;
        let id = *dictionary.entry(signature).or_insert(next_id);
        colors.push(id);
    }
    Coloring {
        colors,
        num_classes: dictionary.len(),
    }
}

fn initial_coloring(g: &SatGraph, labels: Option<&NodeLabeling>) -> Coloring {
    let mut dictionary: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut colors = Vec::with_capacity(g.num_nodes());
    for node in 0..g.num_nodes() {
        let mark = labels.and_then(|l| l.get(node));
        let key = initial_key(g.kind(node), mark);
        let next_id = dictionary.len() as u32;
        let id = *dictionary.entry(key).or_insert(next_id);
        colors.push(id);
    }
    Coloring {
        colors,
        num_classes: dictionary.len(),
    }
}

/// Runs color refinement to stability (or for at most `max_rounds` rounds).
///
/// The initial coloring is (node kind, optional assignment mark). Round ℓ+1
/// recolors by (round-ℓ color, per-edge-color sorted neighbor color
/// multisets). Because every signature embeds the previous color, the
/// partition refines monotonically; the run stops at the first round whose
/// partition equals the next one.
pub fn wl_refine_labeled(
    g: &SatGraph,
    labels: Option<&NodeLabeling>,
    max_rounds: Option<usize>,
) -> WlRun {
    let mut rounds = vec![initial_coloring(g, labels)];
    let mut stable_round = None;
    loop {
        if let Some(cap) = max_rounds {
            if rounds.len() > cap {
                break;
            }
        }
        let prev = rounds.last().unwrap();
        let next = refine_once(g, prev);
        debug_assert!(prev.is_refined_by(&next), "refinement must be monotone");
        // Refinement only splits classes, so an unchanged class count means
        // an unchanged partition.
        if next.num_classes() == prev.num_classes() {
            stable_round = Some(rounds.len() - 1);
            break;
        }
        rounds.push(next);
    }
    WlRun {
        rounds,
        stable_round,
    }
}

/// [`wl_refine_labeled`] without assignment marks.
pub fn wl_refine(g: &SatGraph, max_rounds: Option<usize>) -> WlRun {
    wl_refine_labeled(g, None, max_rounds)
}

/// Color class with its cardinality in each of the two compared graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCount {
    pub color: u32,
    pub left: usize,
    pub right: usize,
}

/// Verdict of the pairwise WL test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WlVerdict {
    /// Some color class has different cardinalities in the two graphs; the
    /// round is the first where this happens.
    Distinguished { round: usize },
    /// The stable per-graph histograms agree.
    Indistinguishable {
        stable_round: usize,
        histogram: Vec<ClassCount>,
    },
}

impl WlVerdict {
    pub fn is_distinguished(&self) -> bool {
        matches!(self, WlVerdict::Distinguished { .. })
    }
}

fn split_histogram(coloring: &Coloring, left_nodes: usize) -> Vec<ClassCount> {
    let mut counts: Vec<ClassCount> = (0..coloring.num_classes() as u32)
        .map(|color| ClassCount {
            color,
            left: 0,
            right: 0,
        })
        .collect();
    for (node, &c) in coloring.colors().iter().enumerate() {
        if node < left_nodes {
            counts[c as usize].left += 1;
        } else {
            counts[c as usize].right += 1;
        }
    }
    counts
}

/// The WL test on two labeled graphs: refinement runs on their disjoint
/// union with one shared color dictionary, and the graphs are distinguished
/// if some class ends up with different cardinalities on the two sides.
pub fn wl_distinguish_labeled(
    g1: &SatGraph,
    labels1: Option<&NodeLabeling>,
    g2: &SatGraph,
    labels2: Option<&NodeLabeling>,
) -> WlVerdict {
    let union = g1.disjoint_union(g2);
    let mut labels = NodeLabeling::new();
    if let Some(l1) = labels1 {
        for (node, mark) in l1.iter() {
            labels.set(node, mark);
        }
    }
    if let Some(l2) = labels2 {
        for (node, mark) in l2.iter() {
            labels.set(node + g1.num_nodes(), mark);
        }
    }
    let run = wl_refine_labeled(&union, Some(&labels), None);
    let stable_round = run
        .converged_round()
        .expect("uncapped refinement always converges");

    for round in 0..=stable_round {
        let histogram = split_histogram(run.coloring(round).unwrap(), g1.num_nodes());
        if histogram.iter().any(|c| c.left != c.right) {
            return WlVerdict::Distinguished { round };
        }
    }
    let histogram = split_histogram(run.coloring(stable_round).unwrap(), g1.num_nodes());
    WlVerdict::Indistinguishable {
        stable_round,
        histogram,
    }
}

/// [`wl_distinguish_labeled`] without assignment marks.
pub fn wl_distinguish(g1: &SatGraph, g2: &SatGraph) -> WlVerdict {
    wl_distinguish_labeled(g1, None, g2, None)
}

/// Restriction of the round-`round` partition to literal nodes.
///
/// Classes are ordered by their smallest member and members ascend, so the
/// output is deterministic. Only nonempty classes appear.
pub fn literal_partition(
    run: &WlRun,
    g: &SatGraph,
    round: usize,
) -> Result<Vec<Vec<usize>>, WlError> {
    let coloring = run.coloring(round)?;
    let mut classes: HashMap<u32, Vec<usize>> = HashMap::new();
    for node in g.nodes_of_kind(NodeKind::Literal) {
        classes.entry(coloring.color(node)).or_default().push(node);
    }
    let mut partition: Vec<Vec<usize>> = classes.into_values().collect();
    for class in &mut partition {
        class.sort_unstable();
    }
    partition.sort_unstable_by_key(|class| class[0]);
    Ok(partition)
}
