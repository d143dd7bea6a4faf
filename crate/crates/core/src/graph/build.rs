use std::collections::BTreeSet;

use super::types::{EdgeColor, GraphError, Mark, NodeKind, NodeLabeling, SatGraph};
use crate::cnf::{Clause, CnfFormula, Literal, PartialAssignment};

/// Node id of a literal in the LCN/LCG/LIG layouts.
pub fn lcn_node(lit: Literal) -> usize {
    lit.index()
}

/// Literal represented by a literal node in the LCN/LCG/LIG layouts.
pub fn lcn_literal(node: usize) -> Literal {
    Literal::from_index(node)
}

/// Literal-clause graph with negation connections.
///
/// Nodes: `2n` literal nodes (both polarities of every variable, used or
/// not) followed by one node per clause. Edges: one `LiteralClause` edge per
/// clause membership and one `LiteralLiteral` edge per variable, forming a
/// perfect matching on the literal nodes. No node labels: the graph is
/// label-free apart from the literal/clause kinds.
pub fn build_lcn(f: &CnfFormula) -> SatGraph {
    build_literal_clause(f, true)
}

/// Literal-clause graph: the LCN without the negation matching.
pub fn build_lcg(f: &CnfFormula) -> SatGraph {
    build_literal_clause(f, false)
}

fn build_literal_clause(f: &CnfFormula, with_matching: bool) -> SatGraph {
    let n = f.num_vars() as usize;
    let mut kinds = vec![NodeKind::Literal; 2 * n];
    kinds.extend(std::iter::repeat_n(NodeKind::Clause, f.num_clauses()));

    let mut edges = Vec::new();
    for (j, clause) in f.clauses().iter().enumerate() {
        let clause_node = 2 * n + j;
        for &lit in clause.literals() {
            edges.push((lcn_node(lit), clause_node, EdgeColor::LiteralClause));
        }
    }
    if with_matching {
        for v in 0..n {
            edges.push((2 * v, 2 * v + 1, EdgeColor::LiteralLiteral));
        }
    }
    SatGraph::new(kinds, edges).expect("construction cannot produce loops or duplicates")
}

/// Variable-clause graph: variables on one side, clauses on the other, with
/// the edge color carrying the sign of the occurrence. A clause containing
/// both polarities of a variable contributes two differently colored edges.
pub fn build_vcg(f: &CnfFormula) -> SatGraph {
    let n = f.num_vars() as usize;
    let mut kinds = vec![NodeKind::Plain; n];
    kinds.extend(std::iter::repeat_n(NodeKind::Clause, f.num_clauses()));
    let mut edges = Vec::new();
    for (j, clause) in f.clauses().iter().enumerate() {
        let clause_node = n + j;
        for &lit in clause.literals() {
            let color = if lit.is_positive() {
                EdgeColor::PositiveOccurrence
            } else {
                EdgeColor::NegativeOccurrence
            };
            edges.push((lit.var() as usize - 1, clause_node, color));
        }
    }
    SatGraph::new(kinds, edges).expect("construction cannot produce loops or duplicates")
}

/// Literal-incidence graph: literal nodes only, with a plain edge between
/// literals that co-occur in some clause (deduplicated across clauses).
pub fn build_lig(f: &CnfFormula) -> SatGraph {
    let n = f.num_vars() as usize;
    let kinds = vec![NodeKind::Literal; 2 * n];
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for clause in f.clauses() {
        let lits = clause.literals();
        for i in 0..lits.len() {
            for j in i + 1..lits.len() {
                let (a, b) = (lcn_node(lits[i]), lcn_node(lits[j]));
                pairs.insert((a.min(b), a.max(b)));
            }
        }
    }
    SatGraph::new(
        kinds,
        pairs.into_iter().map(|(u, v)| (u, v, EdgeColor::Plain)),
    )
    .expect("construction cannot produce loops or duplicates")
}

/// Reads a formula back from an LCN.
///
/// Literal nodes are grouped into variable pairs along the negation
/// matching; the lower node id in each pair becomes the positive literal and
/// variables are numbered by ascending lower node id. The result is the
/// original formula up to isomorphism.
pub fn lcn_to_formula(g: &SatGraph) -> Result<CnfFormula, GraphError> {
    // Validate colors and the bipartition.
    for &(u, v, color) in g.edges() {
        match color {
            EdgeColor::LiteralClause => {
                let kinds = (g.kind(u), g.kind(v));
                if kinds != (NodeKind::Literal, NodeKind::Clause)
                    && kinds != (NodeKind::Clause, NodeKind::Literal)
                {
                    return Err(GraphError::NotAnLcn(format!(
                        "literal-clause edge ({u}, {v}) does not join a literal to a clause"
                    )));
                }
            }
            EdgeColor::LiteralLiteral => {
                if g.kind(u) != NodeKind::Literal || g.kind(v) != NodeKind::Literal {
                    return Err(GraphError::NotAnLcn(format!(
                        "negation edge ({u}, {v}) does not join two literals"
                    )));
                }
            }
            other => {
                return Err(GraphError::NotAnLcn(format!(
                    "unexpected edge color {other:?}"
                )));
            }
        }
    }

    // The negation matching must be perfect on literal nodes.
    let literal_nodes: Vec<usize> = g.nodes_of_kind(NodeKind::Literal).collect();
    let mut partner = vec![usize::MAX; g.num_nodes()];
    for &node in &literal_nodes {
        let matched = g.neighbors(node, EdgeColor::LiteralLiteral);
        if matched.len() != 1 {
            return Err(GraphError::NotAnLcn(format!(
                "literal node {node} has {} negation edges, expected exactly 1",
                matched.len()
            )));
        }
        partner[node] = matched[0];
    }

    // Assign variables by ascending lower node id of each pair.
    let mut literal_of_node: Vec<Option<Literal>> = vec![None; g.num_nodes()];
    let mut next_var = 0u32;
    for &node in &literal_nodes {
        if literal_of_node[node].is_some() {
            continue;
        }
        next_var += 1;
        literal_of_node[node] = Some(Literal::positive(next_var));
        literal_of_node[partner[node]] = Some(Literal::negative(next_var));
    }

    let mut clauses = Vec::new();
    for node in g.nodes_of_kind(NodeKind::Clause) {
        let lits: Vec<Literal> = g
            .neighbors(node, EdgeColor::LiteralClause)
            .iter()
            .map(|&l| literal_of_node[l].expect("bipartition validated"))
            .collect();
        let clause = Clause::new(lits).map_err(|_| {
            GraphError::NotAnLcn(format!("clause node {node} has no literal neighbors"))
        })?;
        clauses.push(clause);
    }
    CnfFormula::new(next_var, clauses)
        .map_err(|e| GraphError::NotAnLcn(format!("reconstruction failed: {e}")))
}

/// Marks the literal nodes bound by a partial assignment: the literal that
/// is true under the assignment gets [`Mark::Top`], its negation
/// [`Mark::Bottom`]. The graph itself is unchanged.
pub fn label_assignment(
    g: &SatGraph,
    sigma: &PartialAssignment,
) -> Result<NodeLabeling, GraphError> {
    let mut labeling = NodeLabeling::new();
    for (&var, &value) in sigma.bindings() {
        let pos = lcn_node(Literal::positive(var));
        let neg = lcn_node(Literal::negative(var));
        if neg >= g.num_nodes()
            || g.kind(pos) != NodeKind::Literal
            || g.kind(neg) != NodeKind::Literal
        {
            return Err(GraphError::UnknownVariable(var));
        }
        let (top, bottom) = if value { (pos, neg) } else { (neg, pos) };
        labeling.set(top, Mark::Top);
        labeling.set(bottom, Mark::Bottom);
    }
    Ok(labeling)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::formulas_isomorphic;
    use crate::corpus;

    #[test]
    fn lcn_counts_match_definition() {
        // 2n + m nodes, one literal-clause edge per membership, n matching
        // edges.
        let f = corpus::xor_triangle();
        let g = build_lcn(&f);
        assert_eq!(g.num_nodes(), 12);
        assert_eq!(g.nodes_of_kind(NodeKind::Literal).count(), 6);
        assert_eq!(g.nodes_of_kind(NodeKind::Clause).count(), 6);
        assert_eq!(g.edge_count_of_color(EdgeColor::LiteralClause), 12);
        assert_eq!(g.edge_count_of_color(EdgeColor::LiteralLiteral), 3);
        assert_eq!(g.num_edges(), 15);
    }

    #[test]
    fn lcn_of_empty_formula_still_has_all_literals() {
        let g = build_lcn(&CnfFormula::empty(2));
        assert_eq!(g.num_nodes(), 4);
        assert_eq!(g.edge_count_of_color(EdgeColor::LiteralLiteral), 2);
        assert_eq!(g.edge_count_of_color(EdgeColor::LiteralClause), 0);
    }

    #[test]
    fn lcg_is_lcn_without_matching_edges() {
        let f = corpus::xor_triangle();
        let lcn = build_lcn(&f);
        let lcg = build_lcg(&f);
        let stripped = SatGraph::new(
            lcn.kinds().to_vec(),
            lcn.edges()
                .iter()
                .copied()
                .filter(|&(_, _, c)| c != EdgeColor::LiteralLiteral),
        )
        .unwrap();
        assert_eq!(lcg, stripped);
    }

    #[test]
    fn lcn_round_trips_to_an_isomorphic_formula() {
        let f = corpus::xor_triangle();
        let back = lcn_to_formula(&build_lcn(&f)).unwrap();
        assert!(formulas_isomorphic(&back, &f, None).unwrap());

        let empty = CnfFormula::empty(0);
        assert_eq!(lcn_to_formula(&build_lcn(&empty)).unwrap(), empty);
    }

    #[test]
    fn lcn_to_formula_rejects_broken_matching() {
        let f = corpus::xor_triangle();
        let lcn = build_lcn(&f);
        let no_matching = SatGraph::new(
            lcn.kinds().to_vec(),
            lcn.edges()
                .iter()
                .copied()
                .filter(|&(_, _, c)| c != EdgeColor::LiteralLiteral),
        )
        .unwrap();
        assert!(matches!(
            lcn_to_formula(&no_matching),
            Err(GraphError::NotAnLcn(_))
        ));
    }

    #[test]
    fn lig_of_chain_is_a_path_on_positive_literals() {
        // (x1 ∨ x2) ∧ (x2 ∨ x3) → path x1–x2–x3, negative literals isolated.
        let f = CnfFormula::new(
            3,
            vec![
                Clause::from_dimacs(&[1, 2]).unwrap(),
                Clause::from_dimacs(&[2, 3]).unwrap(),
            ],
        )
        .unwrap();
        let g = build_lig(&f);
        assert_eq!(g.num_nodes(), 6);
        let x1 = lcn_node(Literal::positive(1));
        let x2 = lcn_node(Literal::positive(2));
        let x3 = lcn_node(Literal::positive(3));
        assert_eq!(g.neighbors(x2, EdgeColor::Plain), &[x1, x3]);
        assert_eq!(g.degree(lcn_node(Literal::negative(1))), 0);
        assert_eq!(g.num_edges(), 2);
    }

    #[test]
    fn lig_equals_lcg_with_clause_nodes_collapsed_to_cliques() {
        // Collapsing every clause node of the matching-free graph into a
        // clique over its literal neighbors reproduces the incidence graph.
        for f in [
            corpus::xor_triangle(),
            CnfFormula::new(
                3,
                vec![
                    Clause::from_dimacs(&[1, 2, 3]).unwrap(),
                    Clause::from_dimacs(&[-1, 2]).unwrap(),
                    Clause::from_dimacs(&[3]).unwrap(),
                ],
            )
            .unwrap(),
        ] {
            let lcg = build_lcg(&f);
            let literal_count = 2 * f.num_vars() as usize;
            let mut pairs = BTreeSet::new();
            for clause_node in lcg.nodes_of_kind(NodeKind::Clause) {
                let members = lcg.neighbors(clause_node, EdgeColor::LiteralClause);
                for (i, &a) in members.iter().enumerate() {
                    for &b in &members[i + 1..] {
                        pairs.insert((a.min(b), a.max(b)));
                    }
                }
            }
            let collapsed = SatGraph::new(
                vec![NodeKind::Literal; literal_count],
                pairs.into_iter().map(|(u, v)| (u, v, EdgeColor::Plain)),
            )
            .unwrap();
            assert_eq!(build_lig(&f), collapsed);
        }
    }

    #[test]
    fn lig_deduplicates_cooccurrence() {
        let f = CnfFormula::new(
            2,
            vec![
                Clause::from_dimacs(&[1, 2]).unwrap(),
                Clause::from_dimacs(&[1, 2]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(build_lig(&f).num_edges(), 1);
    }

    #[test]
    fn vcg_colors_edges_by_sign() {
        // (x ∨ y) ∧ (¬x): 2 variable nodes, 2 clause nodes.
        let f = CnfFormula::new(
            2,
            vec![
                Clause::from_dimacs(&[1, 2]).unwrap(),
                Clause::from_dimacs(&[-1]).unwrap(),
            ],
        )
        .unwrap();
        let g = build_vcg(&f);
        assert_eq!(g.num_nodes(), 4);
        assert_eq!(g.edge_count_of_color(EdgeColor::PositiveOccurrence), 2);
        assert_eq!(g.edge_count_of_color(EdgeColor::NegativeOccurrence), 1);
    }

    #[test]
    fn labeling_marks_both_polarities() {
        let f = corpus::xor_triangle();
        let g = build_lcn(&f);
        let sigma = PartialAssignment::from_pairs([(1, true)]);
        let labels = label_assignment(&g, &sigma).unwrap();
        assert_eq!(labels.get(lcn_node(Literal::positive(1))), Some(Mark::Top));
        assert_eq!(
            labels.get(lcn_node(Literal::negative(1))),
            Some(Mark::Bottom)
        );
        assert_eq!(labels.len(), 2);

        assert!(label_assignment(&g, &PartialAssignment::new())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn labeling_rejects_foreign_variable() {
        let g = build_lcn(&CnfFormula::empty(1));
        let sigma = PartialAssignment::from_pairs([(2, true)]);
        assert_eq!(
            label_assignment(&g, &sigma),
            Err(GraphError::UnknownVariable(2))
        );
    }
}
