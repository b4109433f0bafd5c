//! Reduction rules for signed graphs, the loop-elimination cascade on the
//! complete type `C` graph, loop stripping at vertex 1, and subdivision-based
//! volume at netflow `(2, 0, ..., 0)`.
//!
//! Each rule consumes two edges meeting at a vertex and produces two graphs
//! whose flow polytopes subdivide the original's: either both children keep
//! the full dimension and the volumes add, or exactly one does and carries
//! the whole volume.

use std::collections::HashMap;

use num_bigint::BigUint;
use serde_json::json;

use crate::graphs::{apex_netflow, Sign, SignedEdge, SignedGraph};
use crate::kostant::{normalized_volume_ehrhart, polytope_dimension};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionRule {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
}

impl ReductionRule {
    pub fn name(self) -> &'static str {
        match self {
            ReductionRule::R1 => "R1",
            ReductionRule::R2 => "R2",
            ReductionRule::R3 => "R3",
            ReductionRule::R4 => "R4",
            ReductionRule::R5 => "R5",
            ReductionRule::R6 => "R6",
        }
    }
}

/// Applies one reduction rule to the edge pair `(e1, e2)` of `g`.
///
/// Patterns, with all vertex-order side conditions strict:
/// - `R1`: `(a,i,-), (i,b,-)`, `a<i<b`  -> replace one with `(a,b,-)`
/// - `R2`: `(a,i,-), (i,b,+)`, `a<i<b`  -> replace one with `(a,b,+)`
/// - `R3`: `(a,i,-), (b,i,+)`, `a<b<i`  -> replace one with `(a,b,+)`
/// - `R4`: `(a,i,+), (b,i,-)`, `a<b<i`  -> replace one with `(a,b,+)`
/// - `R5`: `(a,i,-), (a,i,+)`, `a<i`    -> replace one with the loop `(a,a,+)`
/// - `R6`: `(a,i,-), (i,i,+)`, `a<i`    -> replace one with `(a,i,+)`
///
/// The first returned graph drops `e1`, the second drops `e2`.
pub fn apply_reduction(
    g: &SignedGraph,
    rule: ReductionRule,
    e1: &SignedEdge,
    e2: &SignedEdge,
) -> Result<(SignedGraph, SignedGraph)> {
    let bad = |msg: String| Err(Error::InvalidParameter(msg));
    let added = match rule {
        ReductionRule::R1 => {
            if !(e1.sign == Sign::Minus
                && e2.sign == Sign::Minus
                && !e1.is_loop()
                && !e2.is_loop()
                && e1.hi == e2.lo)
            {
                return bad(format!("R1 needs (a,i,-),(i,b,-); got {e1}, {e2}"));
            }
            SignedEdge::negative(e1.lo, e2.hi)
        }
        ReductionRule::R2 => {
            if !(e1.sign == Sign::Minus
                && e2.sign == Sign::Plus
                && !e1.is_loop()
                && !e2.is_loop()
                && e1.hi == e2.lo)
            {
                return bad(format!("R2 needs (a,i,-),(i,b,+); got {e1}, {e2}"));
            }
            SignedEdge::positive(e1.lo, e2.hi)
        }
        ReductionRule::R3 => {
            if !(e1.sign == Sign::Minus
                && e2.sign == Sign::Plus
                && !e1.is_loop()
                && !e2.is_loop()
                && e1.hi == e2.hi
                && e1.lo < e2.lo)
            {
                return bad(format!("R3 needs (a,i,-),(b,i,+) with a<b<i; got {e1}, {e2}"));
            }
            SignedEdge::positive(e1.lo, e2.lo)
        }
        ReductionRule::R4 => {
            if !(e1.sign == Sign::Plus
                && e2.sign == Sign::Minus
                && !e1.is_loop()
                && !e2.is_loop()
                && e1.hi == e2.hi
                && e1.lo < e2.lo)
            {
                return bad(format!("R4 needs (a,i,+),(b,i,-) with a<b<i; got {e1}, {e2}"));
            }
            SignedEdge::positive(e1.lo, e2.lo)
        }
        ReductionRule::R5 => {
            if !(e1.sign == Sign::Minus
                && e2.sign == Sign::Plus
                && !e1.is_loop()
                && !e2.is_loop()
                && e1.lo == e2.lo
                && e1.hi == e2.hi)
            {
                return bad(format!("R5 needs (a,i,-),(a,i,+); got {e1}, {e2}"));
            }
            SignedEdge::loop_at(e1.lo)
        }
        ReductionRule::R6 => {
            if !(e1.sign == Sign::Minus
                && !e1.is_loop()
                && e2.is_loop()
                && e2.lo == e1.hi)
            {
                return bad(format!("R6 needs (a,i,-),(i,i,+); got {e1}, {e2}"));
            }
            SignedEdge::positive(e1.lo, e1.hi)
        }
    };
    let g1 = g.edit(&[*e1], &[added])?;
    let g2 = g.edit(&[*e2], &[added])?;
    Ok((g1, g2))
}

/// Removes the loops of a graph whose loops all sit at vertex 1; the flow
/// polytope volume at `(2, 0, ..., 0)` is unchanged by this.
pub fn strip_loops_at_1(g: &SignedGraph) -> Result<SignedGraph> {
    let loops: Vec<SignedEdge> = g.loops().copied().collect();
    if let Some(l) = loops.iter().find(|l| l.lo != 1) {
        return Err(Error::UnexpectedLoop(l.lo));
    }
    g.edit(&loops, &[])
}

/// Provenance of a node in a subdivision tree.
#[derive(Clone, Debug)]
pub struct ProducedBy {
    pub rule: ReductionRule,
    pub edges: (SignedEdge, SignedEdge),
    /// 1 or 2: which output of the rule this node is.
    pub child: u8,
}

#[derive(Clone, Debug)]
pub struct SubdivisionNode {
    pub graph: SignedGraph,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub produced_by: Option<ProducedBy>,
}

/// A tree of rule applications rooted at some starting graph.
#[derive(Clone, Debug)]
pub struct SubdivisionTree {
    nodes: Vec<SubdivisionNode>,
}

impl SubdivisionTree {
    pub fn nodes(&self) -> &[SubdivisionNode] {
        &self.nodes
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].children.is_empty())
            .collect()
    }

    pub fn leaf_graphs(&self) -> Vec<SignedGraph> {
        self.leaves()
            .into_iter()
            .map(|i| self.nodes[i].graph.clone())
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<_> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(id, n)| {
                json!({
                    "id": id,
                    "parent": n.parent,
                    "children": n.children,
                    "edges": n.graph.edges().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                    "rule": n.produced_by.as_ref().map(|p| p.rule.name()),
                    "rule_edges": n.produced_by.as_ref().map(|p| {
                        vec![p.edges.0.to_string(), p.edges.1.to_string()]
                    }),
                    "child_index": n.produced_by.as_ref().map(|p| p.child),
                })
            })
            .collect();
        json!({ "nodes": nodes })
    }
}

/// Finds the next loop-elimination site: the first vertex `v >= 2` carrying a
/// loop together with an incoming negative edge, pairing the loop with the
/// longest such edge (the one with the smallest lower endpoint).
pub fn next_elimination_site(g: &SignedGraph) -> Option<(SignedEdge, SignedEdge)> {
    for v in 2..=g.vertex_count() {
        let lp = g.loops().find(|l| l.lo == v);
        let Some(&lp) = lp else { continue };
        let neg = g
            .edges()
            .iter()
            .find(|e| e.hi == v && !e.is_loop() && e.sign == Sign::Minus);
        if let Some(&neg) = neg {
            return Some((neg, lp));
        }
    }
    None
}

/// Repeatedly eliminates loops from the complete type `C` graph on `n + 1`
/// vertices, visiting vertices in increasing order and incoming edges from
/// longest to shortest, until no vertex past 1 has both a loop and an
/// incoming negative edge.  Returns the whole tree with provenance.
pub fn loop_elimination_tree(n: usize) -> Result<SubdivisionTree> {
    let root = crate::graphs::complete_type_c(n + 1, crate::graphs::LoopRange::AllVertices)?;
    let mut nodes = vec![SubdivisionNode {
        graph: root,
        parent: None,
        children: Vec::new(),
        produced_by: None,
    }];
    let mut stack = vec![0usize];
    while let Some(idx) = stack.pop() {
        let Some((neg, lp)) = next_elimination_site(&nodes[idx].graph) else {
            continue;
        };
        let (g1, g2) = apply_reduction(&nodes[idx].graph, ReductionRule::R6, &neg, &lp)?;
        for (child_no, child) in [(1u8, g1), (2u8, g2)] {
            let cid = nodes.len();
            nodes.push(SubdivisionNode {
                graph: child,
                parent: Some(idx),
                children: Vec::new(),
                produced_by: Some(ProducedBy {
                    rule: ReductionRule::R6,
                    edges: (neg, lp),
                    child: child_no,
                }),
            });
            nodes[idx].children.push(cid);
            stack.push(cid);
        }
    }
    Ok(SubdivisionTree { nodes })
}

/// Keeps the graphs whose flow polytope at `(2, 0, ..., 0)` has the given
/// dimension; empty or lower-dimensional pieces are dropped.
pub fn full_dimensional_leaves(
    leaves: &[SignedGraph],
    reference_dim: usize,
) -> Result<Vec<SignedGraph>> {
    let mut out = Vec::new();
    for g in leaves {
        let a = apex_netflow(g.vertex_count());
        match polytope_dimension(g, &a) {
            Ok(d) if d == reference_dim => out.push(g.clone()),
            Ok(_) | Err(Error::EmptyPolytope) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

pub const DEFAULT_NODE_BUDGET: usize = 100_000;

/// Normalized volume of `F_G(2, 0, ..., 0)` by recursive subdivision.
///
/// Loops at vertices past 1 are eliminated rule by rule, with children kept
/// or dropped by comparing polytope dimensions; once only vertex-1 loops
/// remain they are stripped, and the loopless base graphs are priced by
/// Ehrhart interpolation.  Results are memoized on the graph itself.
pub fn volume_via_reduction(g: &SignedGraph, a: &[i64]) -> Result<BigUint> {
    volume_via_reduction_with_budget(g, a, DEFAULT_NODE_BUDGET)
}

pub fn volume_via_reduction_with_budget(
    g: &SignedGraph,
    a: &[i64],
    budget: usize,
) -> Result<BigUint> {
    if a != apex_netflow(g.vertex_count()).as_slice() {
        return Err(Error::InvalidParameter(
            "reduction-based volume only applies to the netflow (2, 0, ..., 0)".into(),
        ));
    }
    let mut engine = Engine {
        memo: HashMap::new(),
        budget,
        used: 0,
    };
    engine.volume(g.clone())
}

struct Engine {
    memo: HashMap<SignedGraph, BigUint>,
    budget: usize,
    used: usize,
}

impl Engine {
    fn volume(&mut self, g: SignedGraph) -> Result<BigUint> {
        if let Some(v) = self.memo.get(&g) {
            return Ok(v.clone());
        }
        self.used += 1;
        if self.used > self.budget {
            return Err(Error::NodeBudgetExceeded(self.budget));
        }
        let a = apex_netflow(g.vertex_count());
        let value = if let Some((neg, lp)) = next_elimination_site(&g) {
            let d = polytope_dimension(&g, &a)?;
            let (g1, g2) = apply_reduction(&g, ReductionRule::R6, &neg, &lp)?;
            let d1 = dimension_or_none(&g1, &a)?;
            let d2 = dimension_or_none(&g2, &a)?;
            match (d1 == Some(d), d2 == Some(d)) {
                (true, true) => self.volume(g1)? + self.volume(g2)?,
                (true, false) => self.volume(g1)?,
                (false, true) => self.volume(g2)?,
                (false, false) => {
                    return Err(Error::InvalidParameter(format!(
                        "both pieces of {g} lost dimension; a dissection \
                         never degenerates on both sides"
                    )))
                }
            }
        } else if !g.is_loopless() && g.loops().all(|l| l.lo == 1) {
            self.volume(strip_loops_at_1(&g)?)?
        } else {
            normalized_volume_ehrhart(&g, &a)?
        };
        self.memo.insert(g, value.clone());
        Ok(value)
    }
}

fn dimension_or_none(g: &SignedGraph, a: &[i64]) -> Result<Option<usize>> {
    match polytope_dimension(g, a) {
        Ok(d) => Ok(Some(d)),
        Err(Error::EmptyPolytope) => Ok(None),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{
        complete_type_c, complete_type_d, distinct_graphs, edge_multiset, family_members,
        same_edge_multiset, LoopRange,
    };
    use num_traits::Zero;

    fn graph(m: usize, edges: &[(usize, usize, Sign)]) -> SignedGraph {
        SignedGraph::from_pairs(m, edges.iter().copied()).unwrap()
    }

    #[test]
    fn r6_rewrites() {
        let g = graph(
            2,
            &[(1, 2, Sign::Minus), (2, 2, Sign::Plus)],
        );
        let e1 = SignedEdge::negative(1, 2);
        let e2 = SignedEdge::loop_at(2);
        let (g1, g2) = apply_reduction(&g, ReductionRule::R6, &e1, &e2).unwrap();
        assert_eq!(
            edge_multiset(&g1),
            vec![(1, 2, Sign::Plus), (2, 2, Sign::Plus)]
        );
        assert_eq!(
            edge_multiset(&g2),
            vec![(1, 2, Sign::Minus), (1, 2, Sign::Plus)]
        );
    }

    #[test]
    fn r1_rewrites() {
        let g = graph(3, &[(1, 2, Sign::Minus), (2, 3, Sign::Minus)]);
        let e1 = SignedEdge::negative(1, 2);
        let e2 = SignedEdge::negative(2, 3);
        let (g1, g2) = apply_reduction(&g, ReductionRule::R1, &e1, &e2).unwrap();
        assert_eq!(
            edge_multiset(&g1),
            vec![(1, 3, Sign::Minus), (2, 3, Sign::Minus)]
        );
        assert_eq!(
            edge_multiset(&g2),
            vec![(1, 2, Sign::Minus), (1, 3, Sign::Minus)]
        );
    }

    #[test]
    fn r5_rewrites() {
        let g = graph(3, &[(1, 3, Sign::Minus), (1, 3, Sign::Plus)]);
        let e1 = SignedEdge::negative(1, 3);
        let e2 = SignedEdge::positive(1, 3);
        let (g1, g2) = apply_reduction(&g, ReductionRule::R5, &e1, &e2).unwrap();
        // First output drops the negative edge and gains the loop; second
        // drops the positive edge.
        assert_eq!(
            edge_multiset(&g1),
            vec![(1, 1, Sign::Plus), (1, 3, Sign::Plus)]
        );
        assert_eq!(
            edge_multiset(&g2),
            vec![(1, 1, Sign::Plus), (1, 3, Sign::Minus)]
        );
    }

    #[test]
    fn rejects_wrong_patterns() {
        let g = graph(3, &[(1, 2, Sign::Minus), (2, 3, Sign::Minus)]);
        let e1 = SignedEdge::negative(1, 2);
        let e2 = SignedEdge::negative(2, 3);
        assert!(apply_reduction(&g, ReductionRule::R2, &e1, &e2).is_err());
        assert!(apply_reduction(&g, ReductionRule::R6, &e1, &e2).is_err());
        // Edge not present.
        let missing = SignedEdge::negative(1, 3);
        assert!(apply_reduction(&g, ReductionRule::R1, &missing, &e2).is_err());
    }

    #[test]
    fn loop_stripping() {
        let g = graph(
            2,
            &[(1, 1, Sign::Plus), (1, 1, Sign::Plus), (1, 2, Sign::Minus)],
        );
        let stripped = strip_loops_at_1(&g).unwrap();
        assert_eq!(edge_multiset(&stripped), vec![(1, 2, Sign::Minus)]);
        let loopless = graph(2, &[(1, 2, Sign::Minus)]);
        assert_eq!(strip_loops_at_1(&loopless).unwrap(), loopless);
        let bad = graph(2, &[(2, 2, Sign::Plus)]);
        assert!(matches!(
            strip_loops_at_1(&bad),
            Err(Error::UnexpectedLoop(2))
        ));
    }

    #[test]
    fn elimination_tree_counts() {
        // One reduction for two leaves at n = 1.
        let tree = loop_elimination_tree(1).unwrap();
        assert_eq!(tree.leaves().len(), 2);
        // Branch factors 2, 3, ..., n+1 multiply.
        assert_eq!(loop_elimination_tree(2).unwrap().leaves().len(), 6);
        assert_eq!(loop_elimination_tree(3).unwrap().leaves().len(), 24);
    }

    #[test]
    fn full_dimensional_leaves_match_family() {
        for n in [1usize, 2] {
            let m = n + 1;
            let tree = loop_elimination_tree(n).unwrap();
            let reference = polytope_dimension(
                &complete_type_c(m, LoopRange::AllVertices).unwrap(),
                &apex_netflow(m),
            )
            .unwrap();
            let full = full_dimensional_leaves(&tree.leaf_graphs(), reference).unwrap();
            let stripped: Vec<SignedGraph> = full
                .iter()
                .map(|g| strip_loops_at_1(g).unwrap())
                .collect();
            let family: Vec<SignedGraph> = family_members(m)
                .unwrap()
                .into_iter()
                .map(|(_, g)| g)
                .collect();
            assert_eq!(stripped.len(), family.len());
            assert_eq!(distinct_graphs(&stripped).len(), stripped.len());
            for s in &stripped {
                assert!(
                    family.iter().any(|f| same_edge_multiset(f, s)),
                    "unexpected leaf {s}"
                );
            }
        }
    }

    #[test]
    fn reduction_volumes() {
        let c3 = complete_type_c(3, LoopRange::AllVertices).unwrap();
        assert_eq!(
            volume_via_reduction(&c3, &[2, 0, 0]).unwrap(),
            BigUint::from(4u32)
        );
        let d3 = complete_type_d(3).unwrap();
        assert_eq!(
            volume_via_reduction(&d3, &[2, 0, 0]).unwrap(),
            BigUint::from(2u32)
        );
        assert!(volume_via_reduction(&c3, &[1, 0, 0]).is_err());
    }

    #[test]
    fn reduction_volume_at_four_vertices() {
        let c4 = complete_type_c(4, LoopRange::AllVertices).unwrap();
        assert_eq!(
            volume_via_reduction(&c4, &[2, 0, 0, 0]).unwrap(),
            BigUint::from(128u32)
        );
    }

    #[test]
    fn decomposition_identity_small() {
        // vol(CRYC_3) equals the family volume sum.
        let mut total = BigUint::zero();
        for (_, g) in family_members(3).unwrap() {
            total += normalized_volume_ehrhart(&g, &[2, 0, 0]).unwrap();
        }
        let c3 = complete_type_c(3, LoopRange::AllVertices).unwrap();
        assert_eq!(
            total,
            normalized_volume_ehrhart(&c3, &[2, 0, 0]).unwrap()
        );
    }

    #[test]
    fn node_budget_is_enforced() {
        let c3 = complete_type_c(3, LoopRange::AllVertices).unwrap();
        assert!(matches!(
            volume_via_reduction_with_budget(&c3, &[2, 0, 0], 2),
            Err(Error::NodeBudgetExceeded(2))
        ));
    }

    /// Every rule application at `(2, 0, ..., 0)` dissects the volume:
    /// either both pieces keep the dimension and their volumes add, or
    /// exactly one piece carries the whole volume.  The instances come from
    /// the complete signed families, where the dissection is genuine.
    #[test]
    fn rule_applications_are_volume_sound() {
        let d3 = complete_type_d(3).unwrap();
        let c3 = complete_type_c(3, LoopRange::AllVertices).unwrap();
        let cases: Vec<(SignedGraph, ReductionRule, SignedEdge, SignedEdge)> = vec![
            (
                d3.clone(),
                ReductionRule::R1,
                SignedEdge::negative(1, 2),
                SignedEdge::negative(2, 3),
            ),
            (
                d3.clone(),
                ReductionRule::R2,
                SignedEdge::negative(1, 2),
                SignedEdge::positive(2, 3),
            ),
            (
                d3.clone(),
                ReductionRule::R3,
                SignedEdge::negative(1, 3),
                SignedEdge::positive(2, 3),
            ),
            (
                d3.clone(),
                ReductionRule::R4,
                SignedEdge::positive(1, 3),
                SignedEdge::negative(2, 3),
            ),
            (
                d3.clone(),
                ReductionRule::R5,
                SignedEdge::negative(1, 3),
                SignedEdge::positive(1, 3),
            ),
            (
                c3,
                ReductionRule::R6,
                SignedEdge::negative(1, 2),
                SignedEdge::loop_at(2),
            ),
            (
                graph(
                    2,
                    &[(1, 2, Sign::Minus), (2, 2, Sign::Plus), (1, 2, Sign::Plus)],
                ),
                ReductionRule::R6,
                SignedEdge::negative(1, 2),
                SignedEdge::loop_at(2),
            ),
        ];
        for (g, rule, e1, e2) in cases {
            let a = apex_netflow(g.vertex_count());
            let (g1, g2) = apply_reduction(&g, rule, &e1, &e2).unwrap();
            let d = polytope_dimension(&g, &a).unwrap();
            let d1 = dimension_or_none(&g1, &a).unwrap();
            let d2 = dimension_or_none(&g2, &a).unwrap();
            let vol = normalized_volume_ehrhart(&g, &a).unwrap();
            let vol_of = |h: &SignedGraph| normalized_volume_ehrhart(h, &a).unwrap();
            match (d1 == Some(d), d2 == Some(d)) {
                (true, true) => {
                    assert_eq!(vol, vol_of(&g1) + vol_of(&g2), "{}", rule.name())
                }
                (true, false) => assert_eq!(vol, vol_of(&g1), "{}", rule.name()),
                (false, true) => assert_eq!(vol, vol_of(&g2), "{}", rule.name()),
                (false, false) => panic!("both children degenerate under {}", rule.name()),
            }
        }
    }

    #[test]
    fn loop_strip_preserves_volume() {
        // A graph with loops at vertex 1 only.
        let g = graph(
            3,
            &[
                (1, 1, Sign::Plus),
                (1, 2, Sign::Minus),
                (2, 3, Sign::Minus),
                (1, 3, Sign::Plus),
            ],
        );
        let a = [2, 0, 0];
        let stripped = strip_loops_at_1(&g).unwrap();
        assert_eq!(
            normalized_volume_ehrhart(&g, &a).unwrap(),
            normalized_volume_ehrhart(&stripped, &a).unwrap()
        );
    }

    #[test]
    fn tree_json_has_provenance() {
        let tree = loop_elimination_tree(1).unwrap();
        let v = tree.to_json();
        assert_eq!(v["nodes"].as_array().unwrap().len(), 3);
        assert_eq!(v["nodes"][1]["rule"], "R6");
    }
}
