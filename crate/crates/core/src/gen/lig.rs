//! Formula extraction from literal-incidence graphs.
//!
//! A clique edge cover of the incidence graph induces a formula: every
//! clique becomes the clause of its member literals, so two literals
//! co-occur exactly when they are adjacent, and the incidence graph of the
//! extracted formula reproduces the input. Minimal covers are intractable;
//! the greedy heuristic grows each still-uncovered edge into a maximal
//! clique with seed-shuffled tie-breaking, which is enough for every use
//! here.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rand::Rng;

use super::base::GenError;
use crate::cnf::{Clause, CnfFormula};
use crate::graph::{lcn_literal, EdgeColor, NodeKind, SatGraph};

/// Uniform random literal-incidence graph: every pair of the `num_literals`
/// nodes is independently an edge with probability `edge_prob` (1/2 matches
/// the uniform distribution over all graphs).
pub fn random_lig(num_literals: usize, edge_prob: f64, seed: u64) -> Result<SatGraph, GenError> {
    if !num_literals.is_multiple_of(2) {
        return Err(GenError::InvalidInput(
            "literal-incidence graphs pair literals; the node count must be even".to_string(),
        ));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(GenError::InvalidInput(format!(
            "edge probability {edge_prob} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..num_literals {
        for v in u + 1..num_literals {
            if rng.gen_bool(edge_prob) {
                edges.push((u, v, EdgeColor::Plain));
            }
        }
    }
    SatGraph::new(vec![NodeKind::Literal; num_literals], edges)
        .map_err(|e| GenError::InvalidInput(e.to_string()))
}

/// Extracts a formula from a literal-incidence graph.
///
/// Node `2i`/`2i+1` are read as the positive/negative literal of variable
/// `i+1` (the incidence-graph layout), so the node count must be even. All
/// edges must be plain. The output contains no duplicate, subsumed or unit
/// clauses, and its incidence graph equals `g`.
pub fn extract_from_lig(g: &SatGraph, seed: u64) -> Result<CnfFormula, GenError> {
    if !g.num_nodes().is_multiple_of(2) {
        return Err(GenError::InvalidInput(
            "literal-incidence graphs pair literals; the node count must be even".to_string(),
        ));
    }
    if g.edges().iter().any(|&(_, _, c)| c != EdgeColor::Plain) {
        return Err(GenError::InvalidInput(
            "literal-incidence graphs carry plain edges only".to_string(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut covered: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut cliques: Vec<Vec<usize>> = Vec::new();

    for &(u, v, _) in g.edges() {
        if covered.contains(&(u, v)) {
            continue;
        }
        // Grow {u, v} into a maximal clique; candidate order is the one
        // random choice the heuristic makes.
        let mut clique = vec![u, v];
        let mut candidates: Vec<usize> = g
            .neighbors(u, EdgeColor::Plain)
            .iter()
            .copied()
            .filter(|&w| w != v && g.neighbors(v, EdgeColor::Plain).binary_search(&w).is_ok())
            .collect();
        candidates.shuffle(&mut rng);
        for w in candidates {
            if clique
                .iter()
                .all(|&x| g.neighbors(x, EdgeColor::Plain).binary_search(&w).is_ok())
            {
                clique.push(w);
            }
        }
        clique.sort_unstable();
        for i in 0..clique.len() {
            for j in i + 1..clique.len() {
                covered.insert((clique[i], clique[j]));
            }
        }
        cliques.push(clique);
    }

    // Maximal cliques seeded from uncovered edges cannot duplicate or
    // contain one another, and always span at least one edge; the filters
    // below are the contract, enforced rather than assumed.
    let mut clauses: Vec<Clause> = Vec::with_capacity(cliques.len());
    let mut seen: BTreeSet<Clause> = BTreeSet::new();
    for clique in &cliques {
        if clique.len() < 2 {
            return Err(GenError::InvalidInput(
                "cover produced a unit clause".to_string(),
            ));
        }
        let clause = Clause::new(clique.iter().map(|&n| lcn_literal(n)).collect())
            .expect("cliques are nonempty");
        if seen.insert(clause.clone()) {
            clauses.push(clause);
        }
    }
    let subsumed: Vec<bool> = clauses
        .iter()
        .map(|c| {
            clauses
                .iter()
                .any(|other| other != c && other.literals().iter().all(|l| c.contains(*l)))
        })
        .collect();
    let clauses: Vec<Clause> = clauses
        .into_iter()
        .zip(subsumed)
        .filter(|(_, s)| !s)
        .map(|(c, _)| c)
        .collect();

    Ok(CnfFormula::new(g.num_nodes() as u32 / 2, clauses).expect("literals within range"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_lig;
    use rand::Rng;

    fn lig_graph(n: usize, edges: &[(usize, usize)]) -> SatGraph {
        SatGraph::new(
            vec![NodeKind::Literal; n],
            edges.iter().map(|&(u, v)| (u, v, EdgeColor::Plain)),
        )
        .unwrap()
    }

    #[test]
    fn triangle_round_trips_whatever_the_greedy_order() {
        let g = lig_graph(6, &[(0, 2), (0, 4), (2, 4)]);
        for seed in 0..10 {
            let f = extract_from_lig(&g, seed).unwrap();
            assert_eq!(build_lig(&f), g, "seed {seed}");
            // Either one triangle clause or three binary clauses.
            assert!(f.num_clauses() == 1 || f.num_clauses() == 3);
        }
    }

    #[test]
    fn empty_graph_gives_empty_formula() {
        let g = lig_graph(4, &[]);
        let f = extract_from_lig(&g, 0).unwrap();
        assert_eq!(f.num_clauses(), 0);
        assert_eq!(f.num_vars(), 2);
    }

    #[test]
    fn odd_node_count_is_rejected() {
        let g = SatGraph::new(vec![NodeKind::Literal; 3], []).unwrap();
        assert!(matches!(
            extract_from_lig(&g, 0),
            Err(GenError::InvalidInput(_))
        ));
    }

    #[test]
    fn random_graphs_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            let n = 2 * rng.gen_range(2..8usize);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let g = lig_graph(n, &edges);
            let f = extract_from_lig(&g, rng.gen()).unwrap();
            assert_eq!(build_lig(&f), g);
            // Contract from the cover: no units, no duplicates, no subsumed
            // clauses.
            let mut seen = BTreeSet::new();
            for c in f.clauses() {
                assert!(c.len() >= 2);
                assert!(seen.insert(c.clone()));
            }
            for c in f.clauses() {
                for other in f.clauses() {
                    if c != other {
                        assert!(!other.literals().iter().all(|l| c.contains(*l)));
                    }
                }
            }
        }
    }

    #[test]
    fn extraction_is_deterministic_per_seed() {
        let g = lig_graph(8, &[(0, 2), (0, 4), (2, 4), (2, 6), (4, 6), (1, 3)]);
        assert_eq!(
            extract_from_lig(&g, 3).unwrap(),
            extract_from_lig(&g, 3).unwrap()
        );
    }
}
