//! Gadget pairs that color refinement cannot tell apart.
//!
//! For a connected base graph, each vertex of degree k becomes a parity
//! gadget over k literal pairs (aᵢ, bᵢ): one clause (aᵢ ∨ bᵢ) per pair plus
//! one clause per even subset S of positions, containing aᵢ for i ∈ S and bᵢ
//! for i ∉ S. Literals are shared across each edge so that the far side uses
//! the negations; the *twisted* variant crosses the negation pairing on one
//! edge. The two formulas are structurally identical to refinement, yet for
//! odd-degree bases exactly one of them is satisfiable, decided by the
//! parity of the edge count: satisfying assignments correspond to
//! orientations with all outdegrees even, and those exist precisely when the
//! edge count is even.

use std::collections::BTreeMap;

use super::base::{BaseGraph, GenError, Orientation};
use crate::cnf::{Clause, CnfFormula, Literal, PartialAssignment};

/// Cap on the per-vertex gadget size; the clause count grows as 2^(k-1).
pub const XK_GADGET_CAP: usize = 10;

/// The parity gadget over `k` literal pairs.
///
/// `pairs[i]` supplies the literals (aᵢ, bᵢ). Returns the 2^(k-1) even-subset
/// clauses (in ascending subset-mask order) followed by the k pair clauses.
pub fn build_xk_gadget(pairs: &[(Literal, Literal)]) -> Result<Vec<Clause>, GenError> {
    let k = pairs.len();
    if k == 0 || k > XK_GADGET_CAP {
        return Err(GenError::GadgetCapExceeded {
            k,
            cap: XK_GADGET_CAP,
        });
    }
    let mut clauses = Vec::with_capacity((1 << (k - 1)) + k);
    for mask in 0u32..(1 << k) {
        if mask.count_ones() % 2 != 0 {
            continue;
        }
        let lits: Vec<Literal> = (0..k)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    pairs[i].0
                } else {
                    pairs[i].1
                }
            })
            .collect();
        clauses.push(Clause::new(lits).expect("k >= 1 gives nonempty clauses"));
    }
    for &(a, b) in pairs {
        clauses.push(Clause::new(vec![a, b]).expect("nonempty"));
    }
    Ok(clauses)
}

/// One side of a gadget pair: the formula plus the bookkeeping tying
/// directed edges of the base graph to their literal pair.
#[derive(Debug, Clone)]
pub struct CfiInstance {
    base: BaseGraph,
    twisted_edge: Option<(usize, usize)>,
    formula: CnfFormula,
    literal_map: BTreeMap<(usize, usize), (Literal, Literal)>,
    certified_satisfiable: Option<bool>,
}

impl CfiInstance {
    pub fn base(&self) -> &BaseGraph {
        &self.base
    }

    pub fn formula(&self) -> &CnfFormula {
        &self.formula
    }

    pub fn is_twisted(&self) -> bool {
        self.twisted_edge.is_some()
    }

    pub fn twisted_edge(&self) -> Option<(usize, usize)> {
        self.twisted_edge
    }

    /// Literals (a, b) of the directed edge (v, w).
    pub fn edge_literals(&self, v: usize, w: usize) -> Option<(Literal, Literal)> {
        self.literal_map.get(&(v, w)).copied()
    }

    /// Ground-truth satisfiability; present only when every base degree is
    /// odd, where the edge-parity argument decides it.
    pub fn certified_satisfiable(&self) -> Option<bool> {
        self.certified_satisfiable
    }
}

fn build_instance(base: &BaseGraph, twist: Option<(usize, usize)>) -> CfiInstance {
    let m = base.num_edges();
    // Edge i owns variables 2i+1 (the a side) and 2i+2 (the b side).
    let edge_index: BTreeMap<(usize, usize), usize> = base
        .edges()
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i))
        .collect();

    let mut literal_map: BTreeMap<(usize, usize), (Literal, Literal)> = BTreeMap::new();
    for (&(u, v), &i) in &edge_index {
        let a = Literal::positive(2 * i as u32 + 1);
        let b = Literal::positive(2 * i as u32 + 2);
        literal_map.insert((u, v), (a, b));
        if twist == Some((u, v)) {
            // Crossed pairing: the far side negates the opposite literal.
            literal_map.insert((v, u), (b.negated(), a.negated()));
        } else {
            literal_map.insert((v, u), (a.negated(), b.negated()));
        }
    }

    let mut clauses = Vec::new();
    for v in 0..base.num_nodes() {
        let pairs: Vec<(Literal, Literal)> = base
            .neighbors(v)
            .into_iter()
            .map(|w| literal_map[&(v, w)])
            .collect();
        clauses.extend(build_xk_gadget(&pairs).expect("degree cap checked by caller"));
    }

    let certified = if base.all_degrees_odd() {
        let even_m = m.is_multiple_of(2);
        Some(if twist.is_some() { !even_m } else { even_m })
    } else {
        None
    };

    CfiInstance {
        base: base.clone(),
        twisted_edge: twist,
        formula: CnfFormula::new(2 * m as u32, clauses).expect("variables numbered 1..=2m"),
        literal_map,
        certified_satisfiable: certified,
    }
}

/// Builds the untwisted/twisted instance pair over a connected base graph.
///
/// The twist is applied to the lowest-numbered edge; the choice of edge does
/// not affect any of the pair's properties, fixing it keeps output
/// deterministic. When every base degree is odd the instances carry
/// certified ground truth: for an even edge count the untwisted formula is
/// satisfiable and the twisted one is not, and the other way around for an
/// odd edge count.
pub fn build_cfi_pair(base: &BaseGraph) -> Result<(CfiInstance, CfiInstance), GenError> {
    if !base.is_connected() {
        return Err(GenError::Disconnected);
    }
    if base.num_edges() == 0 {
        return Err(GenError::InvalidInput(
            "base graph needs at least one edge".to_string(),
        ));
    }
    let max_degree = base.degrees().into_iter().max().unwrap_or(0);
    if max_degree > XK_GADGET_CAP {
        return Err(GenError::DegreeCapExceeded {
            degree: max_degree,
            cap: XK_GADGET_CAP,
        });
    }
    let plain = build_instance(base, None);
    let twisted = build_instance(base, Some(base.edges()[0]));
    Ok((plain, twisted))
}

/// Finds an orientation of a connected graph in which every outdegree is
/// even, if one exists: possible exactly when the edge count is even.
///
/// Start from an arbitrary orientation; while two vertices have odd
/// outdegree, reversing the edges along any path between them fixes both
/// parities without disturbing the interior.
pub fn even_orientation(g: &BaseGraph) -> Result<Option<Orientation>, GenError> {
    if !g.is_connected() {
        return Err(GenError::Disconnected);
    }
    if !g.num_edges().is_multiple_of(2) {
        return Ok(None);
    }

    // forward[i]: edge i points from .0 to .1.
    let mut forward = vec![true; g.num_edges()];
    let edge_index: BTreeMap<(usize, usize), usize> =
        g.edges().iter().enumerate().map(|(i, &e)| (e, i)).collect();

    let outdegree = |forward: &[bool]| {
        let mut out = vec![0usize; g.num_nodes()];
        for (i, &(u, v)) in g.edges().iter().enumerate() {
            out[if forward[i] { u } else { v }] += 1;
        }
        out
    };

    loop {
        let out = outdegree(&forward);
        let odd: Vec<usize> = (0..g.num_nodes()).filter(|&v| out[v] % 2 == 1).collect();
        if odd.is_empty() {
            break;
        }
        let (from, to) = (odd[0], odd[1]);
        // BFS path from `from` to `to`, then reverse every edge on it.
        let mut parent = vec![usize::MAX; g.num_nodes()];
        let mut queue = std::collections::VecDeque::from([from]);
        parent[from] = from;
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for w in g.neighbors(u) {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        debug_assert_ne!(parent[to], usize::MAX, "graph is connected");
        let mut v = to;
        while v != from {
            let u = parent[v];
            let idx = edge_index[&(u.min(v), u.max(v))];
            forward[idx] = !forward[idx];
            v = u;
        }
    }

    let arcs = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| if forward[i] { (u, v) } else { (v, u) })
        .collect();
    Ok(Some(Orientation::new(arcs)))
}

/// Turns an all-even-outdegree orientation into a satisfying assignment of
/// an untwisted instance: the a-literal of every arc is set true and its
/// partner b-literal false. The resulting model is verified before being
/// returned.
pub fn cfi_model_from_orientation(
    inst: &CfiInstance,
    orientation: &Orientation,
) -> Result<PartialAssignment, GenError> {
    if inst.is_twisted() {
        return Err(GenError::Twisted);
    }
    let outdegrees = orientation.outdegrees(inst.base.num_nodes());
    if let Some(v) = (0..inst.base.num_nodes()).find(|&v| outdegrees[v] % 2 == 1) {
        return Err(GenError::OddOutdegree(v));
    }

    let mut model = PartialAssignment::new();
    for &(v, w) in orientation.arcs() {
        let (a, b) = inst
            .edge_literals(v, w)
            .ok_or_else(|| GenError::InvalidInput(format!("arc ({v}, {w}) is not a base edge")))?;
        // a(v,w) true, b(v,w) false.
        model.set(a.var(), a.is_positive());
        model.set(b.var(), !b.is_positive());
    }
    if !inst.formula.is_satisfied_by(&model) {
        return Err(GenError::InvalidInput(
            "orientation does not induce a model; the base graph has an even-degree vertex"
                .to_string(),
        ));
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{brute_force_sat, write_dimacs};

    fn fresh_pairs(k: usize) -> Vec<(Literal, Literal)> {
        (0..k as u32)
            .map(|i| (Literal::positive(2 * i + 1), Literal::positive(2 * i + 2)))
            .collect()
    }

    #[test]
    fn x3_gadget_matches_the_reference_shape() {
        // Even subsets of {1,2,3}: ∅, {1,2}, {1,3}, {2,3} → four mixed
        // clauses, plus three pair clauses.
        let clauses = build_xk_gadget(&fresh_pairs(3)).unwrap();
        assert_eq!(clauses.len(), 7);
        assert_eq!(clauses[0], Clause::from_dimacs(&[2, 4, 6]).unwrap()); // b1 b2 b3
        assert_eq!(clauses[1], Clause::from_dimacs(&[1, 3, 6]).unwrap()); // a1 a2 b3
        assert_eq!(clauses[2], Clause::from_dimacs(&[1, 4, 5]).unwrap()); // a1 b2 a3
        assert_eq!(clauses[3], Clause::from_dimacs(&[3, 5, 2]).unwrap()); // b1 a2 a3
        assert_eq!(clauses[4], Clause::from_dimacs(&[1, 2]).unwrap());
        assert_eq!(clauses[6], Clause::from_dimacs(&[5, 6]).unwrap());
    }

    #[test]
    fn x1_gadget_is_b_plus_pair() {
        let clauses = build_xk_gadget(&fresh_pairs(1)).unwrap();
        assert_eq!(clauses.len(), 2);
        assert_eq!(clauses[0], Clause::from_dimacs(&[2]).unwrap());
        assert_eq!(clauses[1], Clause::from_dimacs(&[1, 2]).unwrap());
    }

    #[test]
    fn gadget_cap_is_enforced() {
        assert!(matches!(
            build_xk_gadget(&fresh_pairs(11)),
            Err(GenError::GadgetCapExceeded { k: 11, cap: 10 })
        ));
        assert!(matches!(
            build_xk_gadget(&[]),
            Err(GenError::GadgetCapExceeded { k: 0, .. })
        ));
    }

    #[test]
    fn xk_parity_law_exhaustive_for_odd_k() {
        // With b fixed opposite to a, the gadget is satisfied exactly when
        // an even number of a literals is true.
        for k in [1usize, 3, 5] {
            let pairs = fresh_pairs(k);
            let formula = CnfFormula::new(2 * k as u32, build_xk_gadget(&pairs).unwrap()).unwrap();
            for a_bits in 0u32..(1 << k) {
                let mut sigma = PartialAssignment::new();
                for (i, (a, b)) in pairs.iter().enumerate() {
                    let a_true = a_bits >> i & 1 == 1;
                    sigma.set(a.var(), a_true);
                    sigma.set(b.var(), !a_true);
                }
                let satisfied = formula.is_satisfied_by(&sigma);
                assert_eq!(
                    satisfied,
                    a_bits.count_ones() % 2 == 0,
                    "k={k}, a-bits {a_bits:b}"
                );
            }
        }
    }

    #[test]
    fn k4_pair_has_expected_size_and_parity() {
        // 6 edges → 12 variables; 4 vertices × (2² + 3) = 28 clauses.
        let base = BaseGraph::complete(4);
        let (plain, twisted) = build_cfi_pair(&base).unwrap();
        for inst in [&plain, &twisted] {
            assert_eq!(inst.formula().num_vars(), 12);
            assert_eq!(inst.formula().num_clauses(), 28);
        }
        assert_eq!(plain.certified_satisfiable(), Some(true));
        assert_eq!(twisted.certified_satisfiable(), Some(false));
        assert!(brute_force_sat(plain.formula(), None).unwrap().is_sat());
        assert!(!brute_force_sat(twisted.formula(), None).unwrap().is_sat());
    }

    #[test]
    fn single_edge_pair_reverses_parity() {
        // One edge: odd count, so the twist is the satisfiable side.
        let (plain, twisted) = build_cfi_pair(&BaseGraph::single_edge()).unwrap();
        assert_eq!(plain.certified_satisfiable(), Some(false));
        assert_eq!(twisted.certified_satisfiable(), Some(true));
        assert!(!brute_force_sat(plain.formula(), None).unwrap().is_sat());
        assert!(brute_force_sat(twisted.formula(), None).unwrap().is_sat());
    }

    #[test]
    fn even_degree_bases_get_no_certificate() {
        let (plain, twisted) = build_cfi_pair(&BaseGraph::cycle(4)).unwrap();
        assert_eq!(plain.certified_satisfiable(), None);
        assert_eq!(twisted.certified_satisfiable(), None);
    }

    #[test]
    fn pair_output_is_deterministic() {
        let base = BaseGraph::complete(4);
        let (a1, t1) = build_cfi_pair(&base).unwrap();
        let (a2, t2) = build_cfi_pair(&base).unwrap();
        assert_eq!(write_dimacs(a1.formula()), write_dimacs(a2.formula()));
        assert_eq!(write_dimacs(t1.formula()), write_dimacs(t2.formula()));
    }

    #[test]
    fn disconnected_base_is_rejected() {
        let base = BaseGraph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(build_cfi_pair(&base), Err(GenError::Disconnected)));
    }

    #[test]
    fn even_orientation_exists_iff_edge_count_even() {
        assert!(even_orientation(&BaseGraph::cycle(3)).unwrap().is_none());
        assert!(even_orientation(&BaseGraph::single_edge())
            .unwrap()
            .is_none());

        let o = even_orientation(&BaseGraph::cycle(4)).unwrap().unwrap();
        assert!(o.all_outdegrees_even(4));
        let o = even_orientation(&BaseGraph::complete(4)).unwrap().unwrap();
        assert!(o.all_outdegrees_even(4));
    }

    #[test]
    fn orientation_model_satisfies_untwisted_k4() {
        let base = BaseGraph::complete(4);
        let (plain, twisted) = build_cfi_pair(&base).unwrap();
        let orientation = even_orientation(&base).unwrap().unwrap();
        let model = cfi_model_from_orientation(&plain, &orientation).unwrap();
        assert!(plain.formula().is_satisfied_by(&model));

        // Exactly one a-literal per edge is true: the count equals the edge
        // count.
        let true_a_count: usize = base
            .edges()
            .iter()
            .map(|&(v, w)| {
                let (a_vw, _) = plain.edge_literals(v, w).unwrap();
                let (a_wv, _) = plain.edge_literals(w, v).unwrap();
                usize::from(model.value_of(a_vw) == Some(true))
                    + usize::from(model.value_of(a_wv) == Some(true))
            })
            .sum();
        assert_eq!(true_a_count, base.num_edges());

        assert!(matches!(
            cfi_model_from_orientation(&twisted, &orientation),
            Err(GenError::Twisted)
        ));
    }

    #[test]
    fn odd_outdegree_orientation_is_rejected() {
        let base = BaseGraph::complete(4);
        let (plain, _) = build_cfi_pair(&base).unwrap();
        // Orient every edge low → high: vertex 0 gets outdegree 3.
        let bad = Orientation::new(base.edges().to_vec());
        assert!(matches!(
            cfi_model_from_orientation(&plain, &bad),
            Err(GenError::OddOutdegree(_))
        ));
    }
}
