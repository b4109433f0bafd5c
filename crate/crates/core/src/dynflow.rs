//! Dynamic integer flows: the half-edge process, the dynamic Kostant
//! partition function by direct enumeration and by generating-series
//! coefficient extraction, the volume route through dynamic counts, and the
//! flow correspondence between family graphs and the complete type `C` graph.
//!
//! A positive edge `(i, j, +)` is split into a left half at `i` and a right
//! half at `j`.  Assigning `left` units to the left half spawns `left` extra
//! right half-edges at `j` (at `i` itself for a loop), each of which carries
//! its own nonnegative flow and spawns nothing further.  Extra half-edges are
//! kept as an ordered list per positive edge; the order is the transfer order
//! used by the family correspondence.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde_json::json;

use crate::exact::binomial;
use crate::graphs::{
    complete_type_c, family_graph, staircase_netflow, LoopRange, Sign, SignedGraph,
};
use crate::{Error, Result};

/// Flow data carried by one edge of a dynamic flow.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EdgeFlow {
    Negative(u64),
    /// `extras.len()` always equals `left`.
    Positive {
        left: u64,
        right: u64,
        extras: Vec<u64>,
    },
}

impl EdgeFlow {
    fn zero_for(sign: Sign, is_loop: bool) -> Self {
        if sign == Sign::Minus && !is_loop {
            EdgeFlow::Negative(0)
        } else {
            EdgeFlow::Positive {
                left: 0,
                right: 0,
                extras: Vec::new(),
            }
        }
    }
}

/// A dynamic integer flow, indexed by the canonical edge order of its graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DynamicFlow {
    entries: Vec<EdgeFlow>,
}

impl DynamicFlow {
    pub fn new(g: &SignedGraph, entries: Vec<EdgeFlow>) -> Result<Self> {
        if entries.len() != g.edge_count() {
            return Err(Error::InvalidParameter(format!(
                "flow has {} entries for {} edges",
                entries.len(),
                g.edge_count()
            )));
        }
        for (e, entry) in g.edges().iter().zip(&entries) {
            match (e.sign, entry) {
                (Sign::Minus, EdgeFlow::Negative(_)) => {}
                (Sign::Plus, EdgeFlow::Positive { left, extras, .. }) => {
                    if extras.len() as u64 != *left {
                        return Err(Error::InvalidParameter(format!(
                            "edge {e} has {} extras for left flow {left}",
                            extras.len()
                        )));
                    }
                }
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "flow entry kind does not match sign of edge {e}"
                    )))
                }
            }
        }
        Ok(DynamicFlow { entries })
    }

    pub fn zero(g: &SignedGraph) -> Self {
        DynamicFlow {
            entries: g
                .edges()
                .iter()
                .map(|e| EdgeFlow::zero_for(e.sign, e.is_loop()))
                .collect(),
        }
    }

    pub fn entries(&self) -> &[EdgeFlow] {
        &self.entries
    }

    pub fn get(&self, idx: usize) -> &EdgeFlow {
        &self.entries[idx]
    }

    /// The netflow vector realized under the half-edge conservation law: at
    /// each vertex, outgoing negative flow, left halves, right halves and
    /// extra right halves all consume, incoming negative flow supplies.
    pub fn netflow(&self, g: &SignedGraph) -> Vec<i64> {
        let m = g.vertex_count();
        let mut net = vec![0i64; m];
        for (e, entry) in g.edges().iter().zip(&self.entries) {
            match entry {
                EdgeFlow::Negative(f) => {
                    net[e.lo - 1] += *f as i64;
                    net[e.hi - 1] -= *f as i64;
                }
                EdgeFlow::Positive {
                    left,
                    right,
                    extras,
                } => {
                    let extra_sum: u64 = extras.iter().sum();
                    net[e.lo - 1] += *left as i64;
                    net[e.hi - 1] += (*right + extra_sum) as i64;
                }
            }
        }
        net
    }

    pub fn to_json(&self, g: &SignedGraph) -> serde_json::Value {
        let mut negative = serde_json::Map::new();
        let mut positive = Vec::new();
        for (e, entry) in g.edges().iter().zip(&self.entries) {
            match entry {
                EdgeFlow::Negative(f) => {
                    negative.insert(e.to_string(), json!(f));
                }
                EdgeFlow::Positive {
                    left,
                    right,
                    extras,
                } => {
                    positive.push(json!({
                        "edge": e.to_string(),
                        "bl": left,
                        "br": right,
                        "extras": extras,
                    }));
                }
            }
        }
        json!({ "negative": negative, "positive": positive })
    }
}

/// One assignable quantity while sweeping a vertex.
#[derive(Clone, Copy)]
enum Slot {
    NegOut(usize),
    /// Left half of a positive edge whose lower endpoint is the vertex.
    PosLeft(usize),
    /// Original right half of a positive edge at its upper endpoint.
    PosRight(usize),
    /// `k`-th extra right half-edge of a positive edge.
    Extra(usize, usize),
}

/// Complete, duplicate-free enumeration of integer dynamic flows with
/// netflow `a`, processing vertices in increasing order.
pub fn enumerate_dynamic_flows(g: &SignedGraph, a: &[i64]) -> Vec<DynamicFlow> {
    assert_eq!(
        a.len(),
        g.vertex_count(),
        "netflow length must match vertex count"
    );
    let mut out = Vec::new();
    let mut entries: Vec<EdgeFlow> = DynamicFlow::zero(g).entries;
    sweep_vertex(g, a, 1, &mut entries, &mut out);
    out
}

fn sweep_vertex(
    g: &SignedGraph,
    a: &[i64],
    v: usize,
    entries: &mut Vec<EdgeFlow>,
    out: &mut Vec<DynamicFlow>,
) {
    if v > g.vertex_count() {
        let flow = DynamicFlow {
            entries: entries.clone(),
        };
        debug_assert_eq!(flow.netflow(g), a);
        out.push(flow);
        return;
    }
    // Budget: netflow plus flow already assigned to incoming negative edges.
    let mut budget = a[v - 1];
    for (e, entry) in g.edges().iter().zip(entries.iter()) {
        if e.hi == v && !e.is_loop() && e.sign == Sign::Minus {
            if let EdgeFlow::Negative(f) = entry {
                budget += *f as i64;
            }
        }
    }
    if budget < 0 {
        return;
    }
    // Slots in canonical edge order: everything this vertex must pay for.
    // Loops enter as PosLeft and dynamically append their right halves.
    let mut slots = Vec::new();
    for (idx, e) in g.edges().iter().enumerate() {
        if e.lo == v {
            match (e.sign, e.is_loop()) {
                (Sign::Minus, _) => slots.push(Slot::NegOut(idx)),
                (Sign::Plus, _) => slots.push(Slot::PosLeft(idx)),
            }
        }
        if e.hi == v && e.lo < v && e.sign == Sign::Plus {
            slots.push(Slot::PosRight(idx));
            if let EdgeFlow::Positive { left, .. } = &entries[idx] {
                for k in 0..*left as usize {
                    slots.push(Slot::Extra(idx, k));
                }
            }
        }
    }
    fill_slots(g, a, v, budget as u64, &mut slots, 0, entries, out);
}

fn fill_slots(
    g: &SignedGraph,
    a: &[i64],
    v: usize,
    budget: u64,
    slots: &mut Vec<Slot>,
    si: usize,
    entries: &mut Vec<EdgeFlow>,
    out: &mut Vec<DynamicFlow>,
) {
    if si == slots.len() {
        if budget == 0 {
            sweep_vertex(g, a, v + 1, entries, out);
        }
        return;
    }
    match slots[si] {
        Slot::NegOut(idx) => {
            for f in 0..=budget {
                if let EdgeFlow::Negative(x) = &mut entries[idx] {
                    *x = f;
                }
                fill_slots(g, a, v, budget - f, slots, si + 1, entries, out);
            }
            if let EdgeFlow::Negative(x) = &mut entries[idx] {
                *x = 0;
            }
        }
        Slot::PosLeft(idx) => {
            let is_loop = g.edges()[idx].is_loop();
            for f in 0..=budget {
                let added = if is_loop {
                    // A loop's right half and spawned extras are paid at this
                    // same vertex; append them to the worklist.
                    slots.push(Slot::PosRight(idx));
                    for k in 0..f as usize {
                        slots.push(Slot::Extra(idx, k));
                    }
                    f as usize + 1
                } else {
                    0
                };
                if let EdgeFlow::Positive { left, extras, .. } = &mut entries[idx] {
                    *left = f;
                    extras.resize(f as usize, 0);
                }
                fill_slots(g, a, v, budget - f, slots, si + 1, entries, out);
                for _ in 0..added {
                    slots.pop();
                }
            }
            if let EdgeFlow::Positive { left, extras, .. } = &mut entries[idx] {
                *left = 0;
                extras.clear();
            }
        }
        Slot::PosRight(idx) => {
            for f in 0..=budget {
                if let EdgeFlow::Positive { right, .. } = &mut entries[idx] {
                    *right = f;
                }
                fill_slots(g, a, v, budget - f, slots, si + 1, entries, out);
            }
            if let EdgeFlow::Positive { right, .. } = &mut entries[idx] {
                *right = 0;
            }
        }
        Slot::Extra(idx, k) => {
            for f in 0..=budget {
                if let EdgeFlow::Positive { extras, .. } = &mut entries[idx] {
                    extras[k] = f;
                }
                fill_slots(g, a, v, budget - f, slots, si + 1, entries, out);
            }
            if let EdgeFlow::Positive { extras, .. } = &mut entries[idx] {
                extras[k] = 0;
            }
        }
    }
}

/// Number of integer dynamic flows with netflow `a`.
pub fn kdyn(g: &SignedGraph, a: &[i64]) -> BigUint {
    BigUint::from(enumerate_dynamic_flows(g, a).len())
}

/// The same count extracted from the generating series
/// `prod_{(i,j,-)} (1 - x_i x_j^{-1})^{-1} prod_{(i,j,+)} (1 - x_i - x_j)^{-1}`
/// (a loop contributing `(1 - 2 x_i)^{-1}`), as the coefficient of `x^a`.
///
/// Negative-edge exponent patterns are enumerated exactly — the acyclic edge
/// directions bound them — and the positive part is a genuine power series
/// whose coefficients come from a small convolution.  The coefficient is
/// always a finite sum, so any integer netflow is supported.
pub fn kdyn_via_series(g: &SignedGraph, a: &[i64]) -> BigUint {
    assert_eq!(
        a.len(),
        g.vertex_count(),
        "netflow length must match vertex count"
    );
    let neg: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .filter(|e| e.sign == Sign::Minus)
        .map(|e| (e.lo - 1, e.hi - 1))
        .collect();
    let pos: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .filter(|e| e.sign == Sign::Plus)
        .map(|e| (e.lo - 1, e.hi - 1))
        .collect();
    let mut memo: HashMap<Vec<i64>, BigUint> = HashMap::new();
    let mut total = BigUint::zero();
    let mut residual = a.to_vec();
    // The residual must stay coefficient-reachable: after all negative edges
    // below a vertex are fixed, its entry is final and must be nonnegative.
    neg_exponents(&neg, &pos, 0, &mut residual, &mut memo, &mut total);
    total
}

fn neg_exponents(
    neg: &[(usize, usize)],
    pos: &[(usize, usize)],
    idx: usize,
    residual: &mut Vec<i64>,
    memo: &mut HashMap<Vec<i64>, BigUint>,
    total: &mut BigUint,
) {
    // Entries of `residual` below the current edge group are final.
    let closed_until = if idx < neg.len() { neg[idx].0 } else { residual.len() };
    if residual[..closed_until].iter().any(|&r| r < 0) {
        return;
    }
    if idx == neg.len() {
        if residual.iter().any(|&r| r < 0) {
            return;
        }
        *total += positive_coefficient(pos, residual, memo);
        return;
    }
    let (lo, hi) = neg[idx];
    let cap = residual[lo];
    if cap < 0 {
        return;
    }
    for k in 0..=cap {
        residual[lo] -= k;
        residual[hi] += k;
        neg_exponents(neg, pos, idx + 1, residual, memo, total);
        residual[lo] += k;
        residual[hi] -= k;
    }
}

/// Coefficient of `x^c` in the positive-edge part of the series.
fn positive_coefficient(
    pos: &[(usize, usize)],
    c: &[i64],
    memo: &mut HashMap<Vec<i64>, BigUint>,
) -> BigUint {
    if let Some(v) = memo.get(c) {
        return v.clone();
    }
    // Sparse truncated product: maps exponent vectors (componentwise <= c)
    // to coefficients.
    let mut acc: HashMap<Vec<i64>, BigUint> = HashMap::new();
    acc.insert(vec![0; c.len()], BigUint::one());
    for &(i, j) in pos {
        let mut next: HashMap<Vec<i64>, BigUint> = HashMap::new();
        for (exp, coef) in &acc {
            if i == j {
                // Loop factor (1 - 2 x_i)^{-1}: terms 2^p x_i^p.
                let mut p = 0i64;
                while exp[i] + p <= c[i] {
                    let mut e = exp.clone();
                    e[i] += p;
                    let term = coef.clone() * BigUint::from(2u32).pow(p as u32);
                    *next.entry(e).or_insert_with(BigUint::zero) += term;
                    p += 1;
                }
            } else {
                // (1 - x_i - x_j)^{-1}: terms C(p+q, p) x_i^p x_j^q.
                for p in 0..=(c[i] - exp[i]) {
                    for q in 0..=(c[j] - exp[j]) {
                        let mut e = exp.clone();
                        e[i] += p;
                        e[j] += q;
                        let term = coef.clone()
                            * binomial((p + q) as u64, p as u64)
                                .to_biguint()
                                .expect("nonnegative");
                        *next.entry(e).or_insert_with(BigUint::zero) += term;
                    }
                }
            }
        }
        acc = next;
    }
    let result = acc.remove(&c.to_vec()).unwrap_or_else(BigUint::zero);
    memo.insert(c.to_vec(), result.clone());
    result
}

/// The netflow `(0, indeg(2) - 1, ..., indeg(n+1) - 1)` of a graph.
pub fn indegree_netflow(g: &SignedGraph) -> Vec<i64> {
    let m = g.vertex_count();
    let mut a = vec![0i64; m];
    for v in 2..=m {
        a[v - 1] = g.indegree(v) as i64 - 1;
    }
    a
}

/// Normalized volume of `F_G(2, 0, ..., 0)` as the dynamic count
/// `K^dyn_G(0, indeg(2) - 1, ..., indeg(n+1) - 1)`.
///
/// Valid for loopless connected graphs in which every vertex past the first
/// has at least one incoming negative edge; loop graphs are rejected because
/// the equality genuinely fails for them.  The dynamic count measures volume
/// in the generic dimension of the flow space, so graphs whose polytope at
/// `(2, 0, ..., 0)` degenerates to lower dimension are rejected as well (for
/// those the count is the degenerate ambient volume, 0, rather than the
/// polytope's own-dimension volume).
pub fn volume_via_dynamic_kpf(g: &SignedGraph) -> Result<BigUint> {
    if let Some(l) = g.loops().next() {
        return Err(Error::UnexpectedLoop(l.lo));
    }
    if !g.is_connected() {
        return Err(Error::InvalidParameter(
            "dynamic volume route needs a connected graph".into(),
        ));
    }
    for v in 2..=g.vertex_count() {
        if g.indegree(v) == 0 {
            return Err(Error::InvalidParameter(format!(
                "dynamic volume route needs indegree >= 1 at vertex {v}"
            )));
        }
    }
    let m = g.vertex_count();
    let mut apex = vec![0i64; m];
    apex[0] = 2;
    let dim = crate::kostant::polytope_dimension(g, &apex)?;
    if dim != crate::kostant::generic_dimension(g) {
        return Err(Error::InvalidParameter(format!(
            "flow polytope at (2, 0, ..., 0) has dimension {dim}, below the \
             generic dimension {}; the dynamic count is its ambient volume, 0",
            crate::kostant::generic_dimension(g)
        )));
    }
    Ok(kdyn(g, &indegree_netflow(g)))
}

fn positive_parts(entry: &EdgeFlow) -> (u64, u64, &[u64]) {
    match entry {
        EdgeFlow::Positive {
            left,
            right,
            extras,
        } => (*left, *right, extras.as_slice()),
        EdgeFlow::Negative(_) => unreachable!("expected positive edge"),
    }
}

fn negative_part(entry: &EdgeFlow) -> u64 {
    match entry {
        EdgeFlow::Negative(f) => *f,
        EdgeFlow::Positive { .. } => unreachable!("expected negative edge"),
    }
}

/// Maps a dynamic flow on the family graph `G_a` (netflow `a`) to a dynamic
/// flow on the complete type `C` graph with netflow `(0, 0, 1, ..., n-1)`.
///
/// At each vertex `v` with pivot `k = v - a_v - 1`: flows on shared edges are
/// copied; the tagged left halves below the pivot become flows on the missing
/// negative edges; the loop's left half absorbs `k - 1` plus all tagged left
/// flow, its right halves take over the tagged right halves, and extras are
/// transferred in increasing edge order, preserving each list.
pub fn bijection_forward(a: &[i64], f: &DynamicFlow) -> Result<DynamicFlow> {
    let fam = family_graph(a)?;
    let m = fam.vertex_count();
    if f.entries.len() != fam.edge_count() {
        return Err(Error::InvalidParameter(
            "flow does not match the family graph of the given vector".into(),
        ));
    }
    if f.netflow(&fam) != a {
        return Err(Error::InvalidParameter(
            "flow netflow does not equal the family vector".into(),
        ));
    }
    let kc = complete_type_c(m, LoopRange::AllVertices)?;
    let mut out = DynamicFlow::zero(&kc).entries;

    for v in 2..=m {
        let k = v - a[v - 1] as usize - 1;
        // Shared positive edges (i, v, +), untagged copy, and shared
        // negative edges (i, v, -) for i >= k.
        for i in 1..v {
            let src = fam.edge_index(i, v, Sign::Plus, 0).expect("family edge");
            let dst = kc.edge_index(i, v, Sign::Plus, 0).expect("complete edge");
            out[dst] = f.entries[src].clone();
        }
        for i in k..v {
            let src = fam.edge_index(i, v, Sign::Minus, 0).expect("family edge");
            let dst = kc.edge_index(i, v, Sign::Minus, 0).expect("complete edge");
            out[dst] = f.entries[src].clone();
        }
        // Tagged halves feed the loop at v and the negatives below the pivot.
        let tagged: Vec<(u64, u64, Vec<u64>)> = (1..=k)
            .map(|i| {
                let idx = fam.edge_index(i, v, Sign::Plus, 1).expect("tagged edge");
                let (l, r, extras) = positive_parts(&f.entries[idx]);
                (l, r, extras.to_vec())
            })
            .collect();
        let tagged_left_sum: u64 = tagged.iter().map(|(l, _, _)| *l).sum();

        let mut extras = Vec::with_capacity(k - 1 + tagged_left_sum as usize);
        for (_, r, _) in tagged.iter().skip(1) {
            extras.push(*r);
        }
        for (_, _, ex) in &tagged {
            extras.extend_from_slice(ex);
        }
        let loop_idx = kc.edge_index(v, v, Sign::Plus, 0).expect("loop edge");
        out[loop_idx] = EdgeFlow::Positive {
            left: (k as u64 - 1) + tagged_left_sum,
            right: tagged[0].1,
            extras,
        };

        for (i, (l, _, _)) in tagged.iter().enumerate().take(k.saturating_sub(1)) {
            let dst = kc
                .edge_index(i + 1, v, Sign::Minus, 0)
                .expect("complete edge");
            out[dst] = EdgeFlow::Negative(*l);
        }
        let pivot_dst = kc.edge_index(k, v, Sign::Minus, 0).expect("complete edge");
        let pivot_src = fam.edge_index(k, v, Sign::Minus, 0).expect("family edge");
        out[pivot_dst] =
            EdgeFlow::Negative(negative_part(&f.entries[pivot_src]) + tagged[k - 1].0);
    }

    let g = DynamicFlow::new(&kc, out)?;
    debug_assert_eq!(g.netflow(&kc), staircase_netflow(m));
    Ok(g)
}

/// Inverse of [`bijection_forward`]: recovers the family vector and the flow.
///
/// The pivot `k(v)` is the unique `t` with
/// `t - 2 + sum_{i<t} g(i,v,-) < g(v,v,+)_left <= t - 1 + sum_{i<=t} g(i,v,-)`;
/// inputs for which no such `t` exists are rejected as not in the image.
pub fn bijection_inverse(m: usize, g: &DynamicFlow) -> Result<(Vec<i64>, DynamicFlow)> {
    let kc = complete_type_c(m, LoopRange::AllVertices)?;
    if g.entries.len() != kc.edge_count() {
        return Err(Error::InvalidParameter(
            "flow does not match the complete type C graph".into(),
        ));
    }
    if g.netflow(&kc) != staircase_netflow(m) {
        return Err(Error::NotInImage(
            "netflow is not (0, 0, 1, ..., n-1)".into(),
        ));
    }

    let mut a = vec![0i64; m];
    let mut pivots = vec![0usize; m + 1];
    for v in 2..=m {
        let negs: Vec<u64> = (1..v)
            .map(|i| {
                let idx = kc.edge_index(i, v, Sign::Minus, 0).expect("edge");
                negative_part(&g.entries[idx])
            })
            .collect();
        let loop_idx = kc.edge_index(v, v, Sign::Plus, 0).expect("loop");
        let (loop_left, _, _) = positive_parts(&g.entries[loop_idx]);
        let mut prefix = 0u64;
        let mut found = None;
        for t in 1..v {
            // Window (t - 2 + prefix(t-1), t - 1 + prefix(t)].
            let low = (t as i64) - 2 + prefix as i64;
            let high = (t as i64) - 1 + (prefix + negs[t - 1]) as i64;
            if (loop_left as i64) > low && (loop_left as i64) <= high {
                found = Some(t);
                break;
            }
            prefix += negs[t - 1];
        }
        let Some(k) = found else {
            return Err(Error::NotInImage(format!(
                "no pivot at vertex {v} fits the loop flow {loop_left}"
            )));
        };
        pivots[v] = k;
        a[v - 1] = (v - 1 - k) as i64;
    }

    let fam = family_graph(&a)?;
    let mut out = DynamicFlow::zero(&fam).entries;
    for v in 2..=m {
        let k = pivots[v];
        for i in 1..v {
            let src = kc.edge_index(i, v, Sign::Plus, 0).expect("edge");
            let dst = fam.edge_index(i, v, Sign::Plus, 0).expect("edge");
            out[dst] = g.entries[src].clone();
        }
        for i in (k + 1)..v {
            let src = kc.edge_index(i, v, Sign::Minus, 0).expect("edge");
            let dst = fam.edge_index(i, v, Sign::Minus, 0).expect("edge");
            out[dst] = g.entries[src].clone();
        }
        let negs: Vec<u64> = (1..=k)
            .map(|i| {
                let idx = kc.edge_index(i, v, Sign::Minus, 0).expect("edge");
                negative_part(&g.entries[idx])
            })
            .collect();
        let loop_idx = kc.edge_index(v, v, Sign::Plus, 0).expect("loop");
        let (loop_left, loop_right, loop_extras) = positive_parts(&g.entries[loop_idx]);

        // Tagged left flows: below the pivot they sit on the negatives; the
        // pivot's left flow is whatever the loop absorbed beyond them.
        let below_sum: u64 = negs[..k - 1].iter().sum();
        let pivot_left = loop_left as i64 - (k as i64 - 1) - below_sum as i64;
        if pivot_left < 0 {
            return Err(Error::NotInImage(format!(
                "loop flow at vertex {v} under-runs its pivot window"
            )));
        }
        let pivot_left = pivot_left as u64;
        let pivot_neg = negs[k - 1] as i64 - pivot_left as i64;
        if pivot_neg < 0 {
            return Err(Error::NotInImage(format!(
                "loop flow at vertex {v} over-runs its pivot window"
            )));
        }
        let mut lefts: Vec<u64> = negs[..k - 1].to_vec();
        lefts.push(pivot_left);

        // Rights: the loop's original right half is the first tagged right,
        // its first k-1 extras are the remaining tagged rights.
        let mut rights = vec![loop_right];
        rights.extend_from_slice(&loop_extras[..k - 1]);

        // Remaining extras split into chunks sized by the tagged left flows.
        let rest = &loop_extras[k - 1..];
        if rest.len() as u64 != lefts.iter().sum::<u64>() {
            return Err(Error::NotInImage(format!(
                "extra half-edge count mismatch at vertex {v}"
            )));
        }
        let mut cursor = 0usize;
        for i in 1..=k {
            let take = lefts[i - 1] as usize;
            let chunk = rest[cursor..cursor + take].to_vec();
            cursor += take;
            let dst = fam.edge_index(i, v, Sign::Plus, 1).expect("tagged edge");
            out[dst] = EdgeFlow::Positive {
                left: lefts[i - 1],
                right: rights[i - 1],
                extras: chunk,
            };
        }
        let pivot_dst = fam.edge_index(k, v, Sign::Minus, 0).expect("edge");
        out[pivot_dst] = EdgeFlow::Negative(pivot_neg as u64);
    }

    let f = DynamicFlow::new(&fam, out)?;
    if f.netflow(&fam) != a {
        return Err(Error::NotInImage(
            "reconstructed flow violates conservation".into(),
        ));
    }
    Ok((a, f))
}

/// Checks both composites of the correspondence on fully enumerated domains
/// and returns `(family side total, complete side total)`.
pub fn bijection_totals(m: usize) -> Result<(BigUint, BigUint)> {
    check_vertices(m)?;
    let kc = complete_type_c(m, LoopRange::AllVertices)?;
    let target = staircase_netflow(m);
    let complete_side = enumerate_dynamic_flows(&kc, &target);

    let mut family_total = BigUint::zero();
    for (a, fam) in crate::graphs::family_members(m)? {
        let flows = enumerate_dynamic_flows(&fam, &a);
        family_total += BigUint::from(flows.len());
        for f in &flows {
            let g = bijection_forward(&a, f)?;
            let (a2, f2) = bijection_inverse(m, &g)?;
            if a2 != a || &f2 != f {
                return Err(Error::NotInImage(
                    "correspondence failed to round-trip".into(),
                ));
            }
        }
    }
    for g in &complete_side {
        let (a, f) = bijection_inverse(m, g)?;
        let back = bijection_forward(&a, &f)?;
        if &back != g {
            return Err(Error::NotInImage(
                "correspondence failed to round-trip from the complete side".into(),
            ));
        }
    }
    Ok((family_total, BigUint::from(complete_side.len())))
}

fn check_vertices(m: usize) -> Result<()> {
    if m < 2 {
        Err(Error::InvalidParameter(
            "correspondence needs at least 2 vertices".into(),
        ))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{complete_type_d, demo_dynamic_graph, loop_counterexample_graph};
    use crate::kostant::normalized_volume_ehrhart;

    #[test]
    fn seventeen_dynamic_flows() {
        let g = demo_dynamic_graph();
        let flows = enumerate_dynamic_flows(&g, &[2, 1, 1]);
        assert_eq!(flows.len(), 17);
        assert_eq!(kdyn_via_series(&g, &[2, 1, 1]), BigUint::from(17u32));
        for f in &flows {
            assert_eq!(f.netflow(&g), vec![2, 1, 1]);
        }
    }

    #[test]
    fn displayed_flows_appear() {
        // The three flows displayed with left flow 0, 1, 2 on edge (1,3,+).
        let g = demo_dynamic_graph();
        let flows = enumerate_dynamic_flows(&g, &[2, 1, 1]);
        let e12 = g.edge_index(1, 2, Sign::Minus, 0).unwrap();
        let e13m = g.edge_index(1, 3, Sign::Minus, 0).unwrap();
        let e23 = g.edge_index(2, 3, Sign::Minus, 0).unwrap();
        let e13p = g.edge_index(1, 3, Sign::Plus, 0).unwrap();
        let mk = |neg12: u64, neg13: u64, neg23: u64, l: u64, r: u64, extras: Vec<u64>| {
            let mut entries = DynamicFlow::zero(&g).entries;
            entries[e12] = EdgeFlow::Negative(neg12);
            entries[e13m] = EdgeFlow::Negative(neg13);
            entries[e23] = EdgeFlow::Negative(neg23);
            entries[e13p] = EdgeFlow::Positive {
                left: l,
                right: r,
                extras,
            };
            DynamicFlow::new(&g, entries).unwrap()
        };
        for probe in [
            mk(1, 1, 2, 0, 4, vec![]),
            mk(0, 1, 1, 1, 2, vec![1]),
            mk(0, 0, 1, 2, 1, vec![0, 1]),
        ] {
            assert!(flows.contains(&probe), "missing flow {probe:?}");
        }
    }

    #[test]
    fn zero_netflow_unique_flow() {
        for g in [
            demo_dynamic_graph(),
            complete_type_c(3, LoopRange::AllVertices).unwrap(),
            complete_type_d(3).unwrap(),
        ] {
            let a = vec![0i64; g.vertex_count()];
            let flows = enumerate_dynamic_flows(&g, &a);
            assert_eq!(flows.len(), 1);
            assert_eq!(flows[0], DynamicFlow::zero(&g));
        }
    }

    #[test]
    fn series_and_half_edge_processes_agree() {
        // Designated reconciliation case: one positive edge, netflow (1, 1).
        let g = SignedGraph::from_pairs(2, [(1, 2, Sign::Plus)]).unwrap();
        assert_eq!(kdyn(&g, &[1, 1]), BigUint::from(2u32));
        assert_eq!(kdyn_via_series(&g, &[1, 1]), BigUint::from(2u32));

        let g = SignedGraph::from_pairs(2, [(1, 2, Sign::Minus)]).unwrap();
        assert_eq!(kdyn(&g, &[1, -1]), BigUint::one());
        assert_eq!(kdyn_via_series(&g, &[1, -1]), BigUint::one());
    }

    #[test]
    fn complete_c_staircase_count() {
        let g = complete_type_c(3, LoopRange::AllVertices).unwrap();
        assert_eq!(kdyn(&g, &[0, 0, 1]), BigUint::from(4u32));
        assert_eq!(kdyn_via_series(&g, &[0, 0, 1]), BigUint::from(4u32));
    }

    #[test]
    fn dynamic_volume_matches_ehrhart_for_type_d() {
        let d3 = complete_type_d(3).unwrap();
        let vol = volume_via_dynamic_kpf(&d3).unwrap();
        assert_eq!(vol, BigUint::from(2u32));
        assert_eq!(vol, normalized_volume_ehrhart(&d3, &[2, 0, 0]).unwrap());
    }

    #[test]
    fn dynamic_volume_matches_ehrhart_on_family_members() {
        for m in [3usize, 4] {
            let mut apex = vec![0i64; m];
            apex[0] = 2;
            for (a, g) in crate::graphs::family_members(m).unwrap() {
                let vol = normalized_volume_ehrhart(&g, &apex).unwrap();
                let count = volume_via_dynamic_kpf(&g).unwrap();
                assert_eq!(vol, count, "family member {a:?}");
            }
        }
    }

    #[test]
    fn loop_graph_is_rejected_and_genuinely_fails() {
        let g = loop_counterexample_graph();
        assert!(matches!(
            volume_via_dynamic_kpf(&g),
            Err(Error::UnexpectedLoop(2))
        ));
        // Computed separately, the two quantities differ.
        let vol = normalized_volume_ehrhart(&g, &[2, 0, 0]).unwrap();
        let dyn_count = kdyn(&g, &indegree_netflow(&g));
        assert_eq!(vol, BigUint::from(4u32));
        assert_eq!(dyn_count, BigUint::zero());
        assert_ne!(vol, dyn_count);
    }

    #[test]
    fn forward_image_of_zero_flow() {
        // All-zero family flow maps to loop left flows v - 2 and zeros.
        let m = 4;
        let a = vec![0i64; m];
        let fam = family_graph(&a).unwrap();
        let f = DynamicFlow::zero(&fam);
        let g = bijection_forward(&a, &f).unwrap();
        let kc = complete_type_c(m, LoopRange::AllVertices).unwrap();
        for v in 2..=m {
            let idx = kc.edge_index(v, v, Sign::Plus, 0).unwrap();
            let (l, r, extras) = positive_parts(&g.entries[idx]);
            assert_eq!(l, v as u64 - 2);
            assert_eq!(r, 0);
            assert!(extras.iter().all(|&e| e == 0));
        }
        let (a2, f2) = bijection_inverse(m, &g).unwrap();
        assert_eq!(a2, a);
        assert_eq!(f2, f);
    }

    #[test]
    fn correspondence_is_a_bijection_for_three_vertices() {
        let (family_total, complete_total) = bijection_totals(3).unwrap();
        assert_eq!(family_total, complete_total);
        assert_eq!(complete_total, BigUint::from(4u32));
    }

    #[test]
    fn family_indegree_vectors_cover_the_box() {
        // Multiset identity: indegree vectors over the family equal the box
        // {0} x [0,0] x [0,1] x ... componentwise.
        for m in [3usize, 4] {
            let mut actual: Vec<Vec<i64>> = crate::graphs::family_members(m)
                .unwrap()
                .iter()
                .map(|(_, g)| indegree_netflow(g))
                .collect();
            actual.sort();
            let mut expected = vec![vec![0i64]];
            for v in 2..=m {
                let mut next = Vec::new();
                for e in &expected {
                    for av in 0..=(v as i64 - 2) {
                        let mut w = e.clone();
                        w.push(av);
                        next.push(w);
                    }
                }
                expected = next;
            }
            expected.sort();
            assert_eq!(actual, expected);
        }
    }

    #[test]
    fn json_shape() {
        let g = demo_dynamic_graph();
        let flows = enumerate_dynamic_flows(&g, &[2, 1, 1]);
        let v = flows[0].to_json(&g);
        assert!(v["negative"].is_object());
        assert!(v["positive"].is_array());
    }

    #[test]
    fn malformed_inverse_inputs_are_rejected() {
        let m = 3;
        let kc = complete_type_c(m, LoopRange::AllVertices).unwrap();
        let zero = DynamicFlow::zero(&kc);
        // Zero flow has netflow (0, 0, 0) != (0, 0, 1).
        assert!(matches!(
            bijection_inverse(m, &zero),
            Err(Error::NotInImage(_))
        ));
    }
}
