//! Encoding a graph as a CNF formula that determines it up to isomorphism.

use super::base::BaseGraph;
use crate::cnf::{Clause, CnfFormula, Literal};

/// One variable per node, a binary clause per edge and a unit clause per
/// node. Trivially satisfiable (set everything true) and logically empty,
/// but two graphs are isomorphic exactly when their encodings are.
pub fn encode_graph_as_cnf(g: &BaseGraph) -> CnfFormula {
    let mut clauses: Vec<Clause> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            Clause::new(vec![
                Literal::positive(u as u32 + 1),
                Literal::positive(v as u32 + 1),
            ])
            .expect("nonempty")
        })
        .collect();
    clauses.extend(
        (0..g.num_nodes())
            .map(|v| Clause::new(vec![Literal::positive(v as u32 + 1)]).expect("nonempty")),
    );
    CnfFormula::new(g.num_nodes() as u32, clauses).expect("variables in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{brute_force_sat, formulas_isomorphic, PartialAssignment};

    #[test]
    fn single_edge_gives_edge_clause_plus_units() {
        let f = encode_graph_as_cnf(&BaseGraph::single_edge());
        assert_eq!(f.num_clauses(), 3);
        assert_eq!(f.clauses()[0], Clause::from_dimacs(&[1, 2]).unwrap());
        assert_eq!(f.clauses()[1], Clause::from_dimacs(&[1]).unwrap());
        assert_eq!(f.clauses()[2], Clause::from_dimacs(&[2]).unwrap());
    }

    #[test]
    fn encoding_is_always_satisfiable() {
        for g in [
            BaseGraph::cycle(5),
            BaseGraph::complete(4),
            BaseGraph::petersen(),
        ] {
            let f = encode_graph_as_cnf(&g);
            let all_true = PartialAssignment::from_bits(u64::MAX, f.num_vars());
            assert!(f.is_satisfied_by(&all_true));
            assert!(brute_force_sat(&f, None).unwrap().is_sat());
        }
    }

    #[test]
    fn non_isomorphic_graphs_get_non_isomorphic_encodings() {
        // All 4-node graph shapes with 3 edges: path, star, triangle+isolate.
        let path = BaseGraph::path(4);
        let star = BaseGraph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let triangle = BaseGraph::new(4, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let shapes = [path, star, triangle];
        for (i, a) in shapes.iter().enumerate() {
            for (j, b) in shapes.iter().enumerate() {
                let iso =
                    formulas_isomorphic(&encode_graph_as_cnf(a), &encode_graph_as_cnf(b), None)
                        .unwrap();
                assert_eq!(iso, i == j, "shapes {i} vs {j}");
            }
        }
    }

    #[test]
    fn isomorphic_graphs_get_isomorphic_encodings() {
        let a = BaseGraph::cycle(4);
        let b = BaseGraph::new(4, [(0, 2), (2, 1), (1, 3), (3, 0)]).unwrap();
        assert!(
            formulas_isomorphic(&encode_graph_as_cnf(&a), &encode_graph_as_cnf(&b), None).unwrap()
        );
    }
}
