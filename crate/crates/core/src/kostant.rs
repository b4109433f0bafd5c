//! Static Kostant partition functions by exact enumeration, flow-polytope
//! dimension, Ehrhart tables, and Ehrhart-based normalized volume.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::exact::{factorial, Rational};
use crate::graphs::{check_netflow, Sign, SignedGraph};
use crate::linalg::{all_nonnegative, rank_bareiss, solve_unique, SolveOutcome};
use crate::{Error, Result};

/// A nonnegative integer flow, indexed by the canonical edge order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerFlow(pub Vec<u64>);

impl IntegerFlow {
    /// The netflow `M_G b` realized by this flow.
    pub fn netflow(&self, g: &SignedGraph) -> Vec<i64> {
        let mut out = vec![0i64; g.vertex_count()];
        for (e, &b) in g.edges().iter().zip(&self.0) {
            for (v, c) in e.root(g.vertex_count()).into_iter().enumerate() {
                out[v] += c * b as i64;
            }
        }
        out
    }
}

/// Per-edge action on the running residual vector.
#[derive(Clone, Copy)]
enum EdgeAction {
    Neg { lo: usize, hi: usize },
    Pos { lo: usize, hi: usize },
    Loop { at: usize },
}

struct FlowProblem {
    actions: Vec<EdgeAction>,
    group_lo: Vec<usize>,
    /// Whether any edge at position >= i can still absorb surplus.
    suffix_has_positive: Vec<bool>,
    vertices: usize,
}

impl FlowProblem {
    fn new(g: &SignedGraph) -> Self {
        let actions: Vec<EdgeAction> = g
            .edges()
            .iter()
            .map(|e| {
                if e.is_loop() {
                    EdgeAction::Loop { at: e.lo - 1 }
                } else if e.sign == Sign::Minus {
                    EdgeAction::Neg {
                        lo: e.lo - 1,
                        hi: e.hi - 1,
                    }
                } else {
                    EdgeAction::Pos {
                        lo: e.lo - 1,
                        hi: e.hi - 1,
                    }
                }
            })
            .collect();
        let group_lo: Vec<usize> = g.edges().iter().map(|e| e.lo).collect();
        let mut suffix_has_positive = vec![false; actions.len() + 1];
        for i in (0..actions.len()).rev() {
            suffix_has_positive[i] = suffix_has_positive[i + 1]
                || !matches!(actions[i], EdgeAction::Neg { .. });
        }
        FlowProblem {
            actions,
            group_lo,
            suffix_has_positive,
            vertices: g.vertex_count(),
        }
    }

    /// Vertices strictly below the group of edge `idx` are closed once we
    /// reach `idx`; their residuals must be zero.
    fn closed_range(&self, idx: usize) -> (usize, usize) {
        let prev = if idx == 0 {
            1
        } else {
            self.group_lo[idx - 1]
        };
        let next = if idx < self.group_lo.len() {
            self.group_lo[idx]
        } else {
            self.vertices + 1
        };
        (prev, next)
    }

    fn boundary_ok(&self, idx: usize, res: &[i64]) -> bool {
        let (from, to) = self.closed_range(idx);
        res[(from - 1)..(to - 1)].iter().all(|&r| r == 0)
    }

    /// Dead-branch tests: the open-vertex surplus must be nonnegative, of even
    /// parity, and zero when nothing downstream can absorb it.
    fn prune(&self, idx: usize, res: &[i64]) -> bool {
        let total: i64 = res.iter().sum();
        if total < 0 || total % 2 != 0 {
            return true;
        }
        if !self.suffix_has_positive[idx] && total != 0 {
            return true;
        }
        if idx < self.actions.len() {
            let lo = self.group_lo[idx] - 1;
            if res[lo] < 0 {
                return true;
            }
        }
        false
    }
}

/// Exact number of integer flows with netflow `a`: a depth-first search over
/// edges in canonical order, memoized on the residual netflow.
pub fn kpf(g: &SignedGraph, a: &[i64]) -> BigUint {
    assert_eq!(
        a.len(),
        g.vertex_count(),
        "netflow length must match vertex count"
    );
    let problem = FlowProblem::new(g);
    let mut memo: HashMap<(usize, Vec<i64>), BigUint> = HashMap::new();
    count_rec(&problem, 0, &mut a.to_vec(), &mut memo)
}

fn count_rec(
    p: &FlowProblem,
    idx: usize,
    res: &mut Vec<i64>,
    memo: &mut HashMap<(usize, Vec<i64>), BigUint>,
) -> BigUint {
    if !p.boundary_ok(idx, res) {
        return BigUint::zero();
    }
    if idx == p.actions.len() {
        return if res.iter().all(|&r| r == 0) {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    if p.prune(idx, res) {
        return BigUint::zero();
    }
    let key = (idx, res.clone());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let mut acc = BigUint::zero();
    match p.actions[idx] {
        EdgeAction::Neg { lo, hi } => {
            let cap = res[lo];
            for f in 0..=cap {
                res[lo] -= f;
                res[hi] += f;
                acc += count_rec(p, idx + 1, res, memo);
                res[lo] += f;
                res[hi] -= f;
            }
        }
        EdgeAction::Pos { lo, hi } => {
            let cap = res[lo];
            for f in 0..=cap {
                res[lo] -= f;
                res[hi] -= f;
                acc += count_rec(p, idx + 1, res, memo);
                res[lo] += f;
                res[hi] += f;
            }
        }
        EdgeAction::Loop { at } => {
            let cap = res[at] / 2;
            for f in 0..=cap {
                res[at] -= 2 * f;
                acc += count_rec(p, idx + 1, res, memo);
                res[at] += 2 * f;
            }
        }
    }
    memo.insert(key, acc.clone());
    acc
}

/// Complete, duplicate-free list of integer flows with netflow `a`.
/// Every returned flow is checked against the conservation law.
pub fn enumerate_flows(g: &SignedGraph, a: &[i64]) -> Vec<IntegerFlow> {
    assert_eq!(
        a.len(),
        g.vertex_count(),
        "netflow length must match vertex count"
    );
    let problem = FlowProblem::new(g);
    let mut out = Vec::new();
    let mut flow = vec![0u64; g.edge_count()];
    enumerate_rec(&problem, 0, &mut a.to_vec(), &mut flow, &mut out);
    for f in &out {
        assert_eq!(f.netflow(g), a, "enumerated flow violates conservation");
    }
    out
}

fn enumerate_rec(
    p: &FlowProblem,
    idx: usize,
    res: &mut Vec<i64>,
    flow: &mut Vec<u64>,
    out: &mut Vec<IntegerFlow>,
) {
    if !p.boundary_ok(idx, res) {
        return;
    }
    if idx == p.actions.len() {
        if res.iter().all(|&r| r == 0) {
            out.push(IntegerFlow(flow.clone()));
        }
        return;
    }
    if p.prune(idx, res) {
        return;
    }
    match p.actions[idx] {
        EdgeAction::Neg { lo, hi } => {
            for f in 0..=res[lo] {
                res[lo] -= f;
                res[hi] += f;
                flow[idx] = f as u64;
                enumerate_rec(p, idx + 1, res, flow, out);
                res[lo] += f;
                res[hi] -= f;
            }
        }
        EdgeAction::Pos { lo, hi } => {
            for f in 0..=res[lo] {
                res[lo] -= f;
                res[hi] -= f;
                flow[idx] = f as u64;
                enumerate_rec(p, idx + 1, res, flow, out);
                res[lo] += f;
                res[hi] += f;
            }
        }
        EdgeAction::Loop { at } => {
            for f in 0..=res[at] / 2 {
                res[at] -= 2 * f;
                flow[idx] = f as u64;
                enumerate_rec(p, idx + 1, res, flow, out);
                res[at] += 2 * f;
            }
        }
    }
    flow[idx] = 0;
}

/// Dimension of the affine space `{b : M_G b = a}` for any netflow in the
/// column span: edge count minus incidence rank.  A flow polytope is
/// full-dimensional when [`polytope_dimension`] reaches this value.
pub fn generic_dimension(g: &SignedGraph) -> usize {
    let cols = g.incidence_matrix();
    let m = g.vertex_count();
    let rows: Vec<Vec<i64>> = (0..m)
        .map(|r| (0..cols.len()).map(|c| cols[c][r]).collect())
        .collect();
    cols.len() - rank_bareiss(&rows)
}

/// Dimension of the affine hull of the flow polytope `F_G(a)`.
///
/// Basic feasible points are enumerated over independent column subsets; the
/// union of their supports identifies the edges not forced to zero, and the
/// dimension is the nullity of the incidence matrix restricted to those
/// edges.  Fails with `EmptyPolytope` when no nonnegative flow exists.
pub fn polytope_dimension(g: &SignedGraph, a: &[i64]) -> Result<usize> {
    check_netflow(g, a)?;
    let cols = g.incidence_matrix();
    let n = cols.len();
    let m = g.vertex_count();
    let rows: Vec<Vec<i64>> = (0..m)
        .map(|r| (0..n).map(|c| cols[c][r]).collect())
        .collect();
    let rank = rank_bareiss(&rows);

    let mut support = vec![false; n];
    let mut nonempty = false;
    let mut subset: Vec<usize> = Vec::new();
    explore_subsets(&cols, a, rank, 0, &mut subset, &mut support, &mut nonempty);
    if !nonempty {
        return Err(Error::EmptyPolytope);
    }
    let kept: Vec<usize> = (0..n).filter(|&i| support[i]).collect();
    if kept.is_empty() {
        return Ok(0);
    }
    let sub_rows: Vec<Vec<i64>> = (0..m)
        .map(|r| kept.iter().map(|&c| cols[c][r]).collect())
        .collect();
    Ok(kept.len() - rank_bareiss(&sub_rows))
}

fn explore_subsets(
    cols: &[Vec<i64>],
    a: &[i64],
    max_size: usize,
    start: usize,
    subset: &mut Vec<usize>,
    support: &mut [bool],
    nonempty: &mut bool,
) {
    // Try the current subset.
    let chosen: Vec<&Vec<i64>> = subset.iter().map(|&i| &cols[i]).collect();
    match solve_unique(&chosen, a) {
        SolveOutcome::Solution(x) => {
            if all_nonnegative(&x) {
                *nonempty = true;
                for (xi, &ci) in x.iter().zip(subset.iter()) {
                    if xi.is_positive() {
                        support[ci] = true;
                    }
                }
            }
        }
        // Dependent columns: every superset is dependent too, so stop here.
        SolveOutcome::Dependent => return,
        SolveOutcome::Inconsistent => {}
    }
    if subset.len() == max_size {
        return;
    }
    for i in start..cols.len() {
        subset.push(i);
        explore_subsets(cols, a, max_size, i + 1, subset, support, nonempty);
        subset.pop();
    }
}

/// Table of lattice-point counts `(t, K_G(t a))` for `t = 0..=t_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartTable(pub Vec<(u64, BigUint)>);

impl EhrhartTable {
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for (t, count) in &self.0 {
            s.push_str(&format!("{t}\t{count}\n"));
        }
        s
    }
}

/// Counts lattice points of the dilations `t a` for `t = 0..=t_max`.
/// Requires `t_max` to be at least the polytope dimension.
pub fn ehrhart_values(g: &SignedGraph, a: &[i64], t_max: u64) -> Result<EhrhartTable> {
    let d = polytope_dimension(g, a)?;
    if t_max < d as u64 {
        return Err(Error::InvalidParameter(format!(
            "t_max = {t_max} is below the polytope dimension {d}"
        )));
    }
    Ok(EhrhartTable(dilation_counts(g, a, t_max)))
}

fn dilation_counts(g: &SignedGraph, a: &[i64], t_max: u64) -> Vec<(u64, BigUint)> {
    (0..=t_max)
        .map(|t| {
            let scaled: Vec<i64> = a.iter().map(|&x| x * t as i64).collect();
            (t, kpf(g, &scaled))
        })
        .collect()
}

/// A univariate polynomial with exact rational coefficients, ascending order.
#[derive(Clone, Debug, PartialEq)]
pub struct UnivariatePolynomial {
    coeffs: Vec<Rational>,
}

impl UnivariatePolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        UnivariatePolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval_int(&self, t: i64) -> Rational {
        let x = Rational::from_integer(BigInt::from(t));
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Lagrange interpolation through distinct integer nodes.
    pub fn lagrange(points: &[(i64, Rational)]) -> Self {
        let n = points.len();
        let mut acc = vec![Rational::zero(); n.max(1)];
        for (i, (ti, yi)) in points.iter().enumerate() {
            // Build prod_{j != i} (x - t_j) as coefficients.
            let mut basis = vec![Rational::one()];
            let mut denom = Rational::one();
            for (j, (tj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let shift = Rational::from_integer(BigInt::from(*tj));
                let mut next = vec![Rational::zero(); basis.len() + 1];
                for (k, b) in basis.iter().enumerate() {
                    next[k + 1] += b.clone();
                    next[k] -= b.clone() * shift.clone();
                }
                basis = next;
                denom *= Rational::from_integer(BigInt::from(ti - tj));
            }
            let scale = yi.clone() / denom;
            for (k, b) in basis.into_iter().enumerate() {
                acc[k] += b * scale.clone();
            }
        }
        UnivariatePolynomial::new(acc)
    }
}

/// The Ehrhart polynomial of `F_G(a)`, interpolated through `t = 0..=d` and
/// checked against the extra sample at `t = d + 1`.
pub fn ehrhart_polynomial(g: &SignedGraph, a: &[i64]) -> Result<UnivariatePolynomial> {
    let d = polytope_dimension(g, a)? as u64;
    let values = dilation_counts(g, a, d + 1);
    let points: Vec<(i64, Rational)> = values[..=(d as usize)]
        .iter()
        .map(|(t, c)| {
            (
                *t as i64,
                Rational::from_integer(BigInt::from(c.clone())),
            )
        })
        .collect();
    let poly = UnivariatePolynomial::lagrange(&points);
    let guard_t = d + 1;
    let expected = poly.eval_int(guard_t as i64);
    let actual = Rational::from_integer(BigInt::from(values[guard_t as usize].1.clone()));
    if expected != actual {
        return Err(Error::InterpolationGuard {
            t: guard_t,
            expected: expected.to_string(),
            actual: actual.to_string(),
        });
    }
    Ok(poly)
}

/// Normalized volume of `F_G(a)`: `d!` times the leading Ehrhart coefficient.
pub fn normalized_volume_ehrhart(g: &SignedGraph, a: &[i64]) -> Result<BigUint> {
    let d = polytope_dimension(g, a)?;
    let poly = ehrhart_polynomial(g, a)?;
    if poly.degree() != d {
        // The counts grew slower than a d-dimensional polytope allows.
        return Err(Error::InterpolationGuard {
            t: d as u64,
            expected: format!("degree {d}"),
            actual: format!("degree {}", poly.degree()),
        });
    }
    let vol = poly.leading() * Rational::from_integer(factorial(d as u64));
    if !vol.is_integer() || vol.is_negative() {
        return Err(Error::InvalidParameter(format!(
            "normalized volume {vol} is not a nonnegative integer"
        )));
    }
    Ok(vol.to_integer().to_biguint().expect("nonnegative"))
}

/// Sum of the flows on positive edges (loops counted once).
pub fn positive_flow_sum(g: &SignedGraph, f: &IntegerFlow) -> u64 {
    g.edges()
        .iter()
        .zip(&f.0)
        .filter(|(e, _)| e.sign == Sign::Plus)
        .map(|(_, &b)| b)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{
        complete_type_a, complete_type_c, complete_type_d, demo_mixed_graph, family_graph,
        source_sink_netflow, LoopRange,
    };

    /// Independent oracle: bounded brute force over all edge-flow vectors.
    fn brute_force_flows(g: &SignedGraph, a: &[i64]) -> Vec<Vec<u64>> {
        let bound: i64 = a.iter().map(|x| x.abs()).sum();
        let n = g.edge_count();
        let mut out = Vec::new();
        let mut flow = vec![0u64; n];
        fn rec(
            g: &SignedGraph,
            a: &[i64],
            bound: i64,
            idx: usize,
            flow: &mut Vec<u64>,
            out: &mut Vec<Vec<u64>>,
        ) {
            if idx == flow.len() {
                if IntegerFlow(flow.clone()).netflow(g) == a {
                    out.push(flow.clone());
                }
                return;
            }
            for f in 0..=bound.max(0) as u64 {
                flow[idx] = f;
                rec(g, a, bound, idx + 1, flow, out);
            }
            flow[idx] = 0;
        }
        rec(g, a, bound, 0, &mut flow, &mut out);
        out
    }

    /// Independent oracle: affine rank of the lattice points of a dilation.
    fn lattice_affine_rank(g: &SignedGraph, a: &[i64], t: i64) -> usize {
        let scaled: Vec<i64> = a.iter().map(|&x| x * t).collect();
        let pts = enumerate_flows(g, &scaled);
        assert!(!pts.is_empty());
        let base = &pts[0].0;
        let rows: Vec<Vec<i64>> = pts[1..]
            .iter()
            .map(|p| {
                p.0.iter()
                    .zip(base)
                    .map(|(&x, &y)| x as i64 - y as i64)
                    .collect()
            })
            .collect();
        if rows.is_empty() {
            0
        } else {
            rank_bareiss(&rows)
        }
    }

    #[test]
    fn kpf_demo_graph_example() {
        let g = demo_mixed_graph();
        assert_eq!(kpf(&g, &[1, 3, -2]), BigUint::from(3u32));
        let flows = enumerate_flows(&g, &[1, 3, -2]);
        assert_eq!(flows.len(), 3);
        let brute = brute_force_flows(&g, &[1, 3, -2]);
        assert_eq!(brute.len(), 3);
        // Every total netflow sum 2y forces positive flow y (here y = 1).
        for f in &flows {
            assert_eq!(positive_flow_sum(&g, f), 1);
        }
    }

    #[test]
    fn kpf_matches_brute_force_on_k3() {
        let g = complete_type_a(3).unwrap();
        let a = [1, 0, -1];
        assert_eq!(kpf(&g, &a), BigUint::from(2u32));
        let flows = enumerate_flows(&g, &a);
        assert_eq!(flows.len(), 2);
        assert_eq!(
            brute_force_flows(&g, &a)
                .into_iter()
                .map(IntegerFlow)
                .collect::<Vec<_>>(),
            flows
        );
    }

    #[test]
    fn zero_netflow_has_exactly_one_flow() {
        for g in [
            complete_type_a(4).unwrap(),
            complete_type_d(3).unwrap(),
            complete_type_c(3, LoopRange::AllVertices).unwrap(),
            demo_mixed_graph(),
        ] {
            let a = vec![0i64; g.vertex_count()];
            assert_eq!(kpf(&g, &a), BigUint::one());
            assert_eq!(brute_force_flows(&g, &a).len(), 1);
        }
    }

    #[test]
    fn infeasible_netflow_is_empty() {
        let g = complete_type_a(3).unwrap();
        assert!(enumerate_flows(&g, &[-1, 0, 1]).is_empty());
        assert_eq!(kpf(&g, &[-1, 0, 1]), BigUint::zero());
    }

    #[test]
    fn dimension_examples() {
        let k3 = complete_type_a(3).unwrap();
        assert_eq!(polytope_dimension(&k3, &[1, 0, -1]).unwrap(), 1);
        assert_eq!(lattice_affine_rank(&k3, &[1, 0, -1], 2), 1);

        let g = demo_mixed_graph();
        assert_eq!(polytope_dimension(&g, &[1, 3, -2]).unwrap(), 2);
        assert_eq!(lattice_affine_rank(&g, &[1, 3, -2], 1), 2);

        let c2 = complete_type_c(2, LoopRange::AllVertices).unwrap();
        assert_eq!(polytope_dimension(&c2, &[2, 0]).unwrap(), 2);
        assert_eq!(lattice_affine_rank(&c2, &[2, 0], 1), 2);

        let c2f = complete_type_c(2, LoopRange::FirstN).unwrap();
        assert_eq!(polytope_dimension(&c2f, &[2, 0]).unwrap(), 1);
        assert_eq!(lattice_affine_rank(&c2f, &[2, 0], 1), 1);
    }

    #[test]
    fn dimension_of_empty_polytope_errors() {
        let k3 = complete_type_a(3).unwrap();
        assert!(matches!(
            polytope_dimension(&k3, &[2, 0, 0]),
            Err(Error::EmptyPolytope)
        ));
    }

    #[test]
    fn ehrhart_table_examples() {
        let k3 = complete_type_a(3).unwrap();
        let table = ehrhart_values(&k3, &[1, 0, -1], 2).unwrap();
        assert_eq!(
            table.0,
            vec![
                (0, BigUint::from(1u32)),
                (1, BigUint::from(2u32)),
                (2, BigUint::from(3u32))
            ]
        );
        assert_eq!(table.to_tsv(), "0\t1\n1\t2\n2\t3\n");

        let k4 = complete_type_a(4).unwrap();
        let a = [1, 0, 0, -1];
        let table = ehrhart_values(&k4, &a, 4).unwrap();
        for (t, count) in &table.0 {
            let scaled: Vec<i64> = a.iter().map(|&x| x * *t as i64).collect();
            assert_eq!(
                BigUint::from(brute_force_flows(&k4, &scaled).len()),
                count.clone()
            );
        }
    }

    #[test]
    fn ehrhart_polynomial_is_integer_valued() {
        let g = demo_mixed_graph();
        let poly = ehrhart_polynomial(&g, &[1, 3, -2]).unwrap();
        for t in 0..=6 {
            assert!(poly.eval_int(t).is_integer());
        }
    }

    #[test]
    fn normalized_volumes() {
        // CRY_4 as the flow polytope of the complete graph on 5 vertices.
        let k5 = complete_type_a(5).unwrap();
        assert_eq!(
            normalized_volume_ehrhart(&k5, &source_sink_netflow(5)).unwrap(),
            BigUint::from(2u32)
        );
        let k3 = complete_type_a(3).unwrap();
        assert_eq!(
            normalized_volume_ehrhart(&k3, &[1, 0, -1]).unwrap(),
            BigUint::one()
        );
        let d3 = complete_type_d(3).unwrap();
        assert_eq!(
            normalized_volume_ehrhart(&d3, &[2, 0, 0]).unwrap(),
            BigUint::from(2u32)
        );
    }

    #[test]
    fn family_graph_volume_is_positive() {
        let g = family_graph(&[0, 0, 0]).unwrap();
        let vol = normalized_volume_ehrhart(&g, &[2, 0, 0]).unwrap();
        assert!(vol >= BigUint::one());
    }

    #[test]
    fn fractional_vertex_fails_loudly() {
        // A single loop with odd netflow has the one rational point b = 1/2:
        // the lattice counts are not polynomial in the dilation, and the
        // guard sample refuses to interpolate.
        let g = SignedGraph::new(1, vec![crate::graphs::SignedEdge::loop_at(1)]).unwrap();
        assert_eq!(polytope_dimension(&g, &[1]).unwrap(), 0);
        assert!(matches!(
            normalized_volume_ehrhart(&g, &[1]),
            Err(Error::InterpolationGuard { .. })
        ));
        // Even netflow scales the point to a lattice point and works.
        assert_eq!(
            normalized_volume_ehrhart(&g, &[2]).unwrap(),
            BigUint::one()
        );
    }

    #[test]
    fn lagrange_recovers_a_polynomial() {
        use crate::exact::rat;
        // p(t) = t^2 + 1 through t = 0, 1, 2.
        let pts = vec![(0, rat(1)), (1, rat(2)), (2, rat(5))];
        let p = UnivariatePolynomial::lagrange(&pts);
        assert_eq!(p.coeffs(), &[rat(1), rat(0), rat(1)]);
        assert_eq!(p.eval_int(3), rat(10));
    }
}
