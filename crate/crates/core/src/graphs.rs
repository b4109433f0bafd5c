//! Signed multigraphs with loops and the graph families used throughout.
//!
//! Vertices are 1-based.  Edges are kept in a canonical total order —
//! lexicographic by `(lo, hi, sign, tag)` with `-` before `+` — which fixes
//! incidence-matrix column order and flow-vector indexing everywhere else.

use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }
}

/// An edge of a signed graph with `lo <= hi`; loops are always positive.
/// Parallel copies of the same `(lo, hi, sign)` are distinguished by `tag`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedEdge {
    pub lo: usize,
    pub hi: usize,
    pub sign: Sign,
    pub tag: usize,
}

impl SignedEdge {
    pub fn negative(lo: usize, hi: usize) -> Self {
        SignedEdge {
            lo,
            hi,
            sign: Sign::Minus,
            tag: 0,
        }
    }

    pub fn positive(lo: usize, hi: usize) -> Self {
        SignedEdge {
            lo,
            hi,
            sign: Sign::Plus,
            tag: 0,
        }
    }

    pub fn loop_at(v: usize) -> Self {
        SignedEdge {
            lo: v,
            hi: v,
            sign: Sign::Plus,
            tag: 0,
        }
    }

    pub fn tagged(mut self, tag: usize) -> Self {
        self.tag = tag;
        self
    }

    pub fn is_loop(&self) -> bool {
        self.lo == self.hi
    }

    /// The type `C` root attached to the edge, as a column of length `dim`:
    /// `e_lo - e_hi` for negative edges, `e_lo + e_hi` for positive edges,
    /// and `2 e_lo` for loops.
    pub fn root(&self, dim: usize) -> Vec<i64> {
        let mut col = vec![0i64; dim];
        match (self.is_loop(), self.sign) {
            (true, _) => col[self.lo - 1] = 2,
            (false, Sign::Minus) => {
                col[self.lo - 1] = 1;
                col[self.hi - 1] = -1;
            }
            (false, Sign::Plus) => {
                col[self.lo - 1] = 1;
                col[self.hi - 1] = 1;
            }
        }
        col
    }
}

impl fmt::Display for SignedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.lo, self.hi, self.sign.symbol())?;
        if self.tag > 0 {
            write!(f, "^{}", self.tag)?;
        }
        Ok(())
    }
}

/// Which vertices of the type `C` complete graph carry a loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopRange {
    /// Loops `(i, i, +)` at every vertex `i` in `[n+1]`.
    AllVertices,
    /// Loops only at `i` in `[n]`.
    FirstN,
}

/// An immutable signed multigraph.  Edges are stored in canonical order with
/// tags renumbered `0, 1, ...` within each parallel class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedGraph {
    vertices: usize,
    edges: Vec<SignedEdge>,
}

impl SignedGraph {
    pub fn new(vertices: usize, mut edges: Vec<SignedEdge>) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::InvalidParameter(
                "graph needs at least one vertex".into(),
            ));
        }
        for e in &edges {
            if e.lo < 1 || e.hi > vertices || e.lo > e.hi {
                return Err(Error::InvalidParameter(format!(
                    "edge {e} out of range for vertex set [{vertices}]"
                )));
            }
            if e.is_loop() && e.sign == Sign::Minus {
                return Err(Error::InvalidParameter(format!(
                    "loop at vertex {} must be positive",
                    e.lo
                )));
            }
        }
        edges.sort();
        // Renumber tags within each (lo, hi, sign) class, keeping input order.
        let mut i = 0;
        while i < edges.len() {
            let mut j = i;
            while j < edges.len()
                && (edges[j].lo, edges[j].hi, edges[j].sign)
                    == (edges[i].lo, edges[i].hi, edges[i].sign)
            {
                edges[j].tag = j - i;
                j += 1;
            }
            i = j;
        }
        Ok(SignedGraph { vertices, edges })
    }

    /// Builds a graph from untagged `(lo, hi, sign)` triples.
    pub fn from_pairs<I>(vertices: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Sign)>,
    {
        let edges = pairs
            .into_iter()
            .map(|(lo, hi, sign)| SignedEdge {
                lo,
                hi,
                sign,
                tag: 0,
            })
            .collect();
        SignedGraph::new(vertices, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[SignedEdge] {
        &self.edges
    }

    /// Index of an edge in the canonical order.
    pub fn edge_index(&self, lo: usize, hi: usize, sign: Sign, tag: usize) -> Option<usize> {
        self.edges
            .binary_search(&SignedEdge { lo, hi, sign, tag })
            .ok()
    }

    /// Number of negative edges `(i, v, -)` with `i < v`.
    pub fn indegree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.hi == v && !e.is_loop() && e.sign == Sign::Minus)
            .count()
    }

    /// Columns of the incidence matrix, one root per edge in canonical order.
    pub fn incidence_matrix(&self) -> Vec<Vec<i64>> {
        self.edges
            .iter()
            .map(|e| e.root(self.vertices))
            .collect()
    }

    pub fn loops(&self) -> impl Iterator<Item = &SignedEdge> {
        self.edges.iter().filter(|e| e.is_loop())
    }

    pub fn is_loopless(&self) -> bool {
        self.loops().next().is_none()
    }

    /// Undirected connectivity; loops do not connect anything.
    pub fn is_connected(&self) -> bool {
        if self.vertices == 1 {
            return true;
        }
        let mut seen = vec![false; self.vertices + 1];
        let mut stack = vec![1usize];
        seen[1] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                if e.is_loop() {
                    continue;
                }
                let other = if e.lo == v {
                    e.hi
                } else if e.hi == v {
                    e.lo
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
        seen[1..=self.vertices].iter().all(|&s| s)
    }

    /// New graph with `remove` deleted (matched exactly, including tag) and
    /// `add` inserted; tags are renumbered canonically afterwards.
    pub fn edit(&self, remove: &[SignedEdge], add: &[SignedEdge]) -> Result<Self> {
        let mut edges = self.edges.clone();
        for r in remove {
            match edges.iter().position(|e| e == r) {
                Some(pos) => {
                    edges.remove(pos);
                }
                None => {
                    return Err(Error::InvalidParameter(format!(
                        "edge {r} not present in graph"
                    )))
                }
            }
        }
        for a in add {
            // usize::MAX sorts a fresh parallel copy after the existing ones.
            edges.push(a.tagged(usize::MAX));
        }
        SignedGraph::new(self.vertices, edges)
    }

    pub fn to_json_string(&self) -> String {
        let repr = GraphJson {
            vertices: self.vertices,
            edges: self
                .edges
                .iter()
                .map(|e| (e.lo, e.hi, e.sign.symbol().to_string(), e.tag))
                .collect(),
        };
        serde_json::to_string(&repr).expect("graph serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let repr: GraphJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("graph json: {e}")))?;
        let mut edges = Vec::with_capacity(repr.edges.len());
        for (lo, hi, sign, tag) in repr.edges {
            let sign = match sign.as_str() {
                "-" => Sign::Minus,
                "+" => Sign::Plus,
                other => {
                    return Err(Error::Parse(format!(
                        "edge sign must be \"+\" or \"-\", got {other:?}"
                    )))
                }
            };
            edges.push(SignedEdge { lo, hi, sign, tag });
        }
        SignedGraph::new(repr.vertices, edges)
    }
}

impl fmt::Display for SignedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {{", self.vertices)?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: usize,
    edges: Vec<(usize, usize, String, usize)>,
}

/// Complete type `A` graph on `m` vertices: all edges `(i, j, -)`.
pub fn complete_type_a(m: usize) -> Result<SignedGraph> {
    require_at_least_two(m)?;
    let mut edges = Vec::new();
    for i in 1..=m {
        for j in (i + 1)..=m {
            edges.push((i, j, Sign::Minus));
        }
    }
    SignedGraph::from_pairs(m, edges)
}

/// Complete type `D` graph on `m` vertices: both `(i, j, -)` and `(i, j, +)`
/// for every `i < j`, no loops.
pub fn complete_type_d(m: usize) -> Result<SignedGraph> {
    require_at_least_two(m)?;
    let mut edges = Vec::new();
    for i in 1..=m {
        for j in (i + 1)..=m {
            edges.push((i, j, Sign::Minus));
            edges.push((i, j, Sign::Plus));
        }
    }
    SignedGraph::from_pairs(m, edges)
}

/// Complete type `C` graph on `m` vertices: the type `D` edges plus loops on
/// the selected vertex range.
pub fn complete_type_c(m: usize, loops: LoopRange) -> Result<SignedGraph> {
    require_at_least_two(m)?;
    let mut edges = Vec::new();
    for i in 1..=m {
        for j in (i + 1)..=m {
            edges.push((i, j, Sign::Minus));
            edges.push((i, j, Sign::Plus));
        }
    }
    let top = match loops {
        LoopRange::AllVertices => m,
        LoopRange::FirstN => m - 1,
    };
    for i in 1..=top {
        edges.push((i, i, Sign::Plus));
    }
    SignedGraph::from_pairs(m, edges)
}

fn require_at_least_two(m: usize) -> Result<()> {
    if m < 2 {
        Err(Error::InvalidParameter(format!(
            "complete graphs need at least 2 vertices, got {m}"
        )))
    } else {
        Ok(())
    }
}

/// The bundle of edges into vertex `v` selected by pivot `k`, `1 <= k <= v-1`:
/// doubled positives below the pivot, a doubled positive plus a negative at
/// the pivot, and a positive-negative pair above it.  Always `2v - 1` edges.
pub fn family_star(k: usize, v: usize) -> Result<Vec<SignedEdge>> {
    if v < 2 || k < 1 || k > v - 1 {
        return Err(Error::InvalidParameter(format!(
            "family star needs 1 <= k <= v-1, got k = {k}, v = {v}"
        )));
    }
    let mut edges = Vec::with_capacity(2 * v - 1);
    for i in 1..k {
        edges.push(SignedEdge::positive(i, v));
        edges.push(SignedEdge::positive(i, v).tagged(1));
    }
    edges.push(SignedEdge::positive(k, v));
    edges.push(SignedEdge::positive(k, v).tagged(1));
    edges.push(SignedEdge::negative(k, v));
    for i in (k + 1)..v {
        edges.push(SignedEdge::positive(i, v));
        edges.push(SignedEdge::negative(i, v));
    }
    Ok(edges)
}

/// The unique family graph whose vertex `v` has `indegree(v) - 1 = a_v`.
/// Requires `a_1 = 0` and `0 <= a_v <= v - 2` for `v >= 2`.
pub fn family_graph(a: &[i64]) -> Result<SignedGraph> {
    let m = a.len();
    if m < 2 {
        return Err(Error::InvalidParameter(
            "family graphs need at least 2 vertices".into(),
        ));
    }
    if a[0] != 0 {
        return Err(Error::InvalidParameter(format!(
            "family vector must start with 0, got {}",
            a[0]
        )));
    }
    let mut edges = Vec::new();
    for v in 2..=m {
        let av = a[v - 1];
        if av < 0 || av > (v as i64) - 2 {
            return Err(Error::InvalidParameter(format!(
                "family vector entry a_{v} = {av} outside [0, {}]",
                v - 2
            )));
        }
        let k = v - av as usize - 1;
        edges.extend(family_star(k, v)?);
    }
    SignedGraph::new(m, edges)
}

/// All family graphs on `m` vertices, paired with their defining vectors.
pub fn family_members(m: usize) -> Result<Vec<(Vec<i64>, SignedGraph)>> {
    if m < 2 {
        return Err(Error::InvalidParameter(
            "family graphs need at least 2 vertices".into(),
        ));
    }
    let mut vectors: Vec<Vec<i64>> = vec![vec![0]];
    for v in 2..=m {
        let mut next = Vec::new();
        for vec in &vectors {
            for av in 0..=(v as i64 - 2) {
                let mut w = vec.clone();
                w.push(av);
                next.push(w);
            }
        }
        vectors = next;
    }
    let mut out = Vec::with_capacity(vectors.len());
    for a in vectors {
        let g = family_graph(&a)?;
        out.push((a, g));
    }
    Ok(out)
}

/// The netflow `(2, 0, ..., 0)` of length `m`.
pub fn apex_netflow(m: usize) -> Vec<i64> {
    let mut a = vec![0i64; m];
    a[0] = 2;
    a
}

/// The netflow `(1, 0, ..., 0, -1)` of length `m`.
pub fn source_sink_netflow(m: usize) -> Vec<i64> {
    let mut a = vec![0i64; m];
    a[0] = 1;
    a[m - 1] = -1;
    a
}

/// The netflow `(0, 0, 1, 2, ..., m-2)` of length `m`.
pub fn staircase_netflow(m: usize) -> Vec<i64> {
    let mut a = vec![0i64; m];
    for v in 2..m {
        a[v] = (v as i64) - 1;
    }
    a
}

/// Demonstration graph on three vertices with five edges
/// `(1,2,-), (1,2,+), (1,3,-), (2,2,+), (2,3,-)`; the CLI knows it as `fig1`.
pub fn demo_mixed_graph() -> SignedGraph {
    SignedGraph::from_pairs(
        3,
        [
            (1, 2, Sign::Minus),
            (1, 2, Sign::Plus),
            (1, 3, Sign::Minus),
            (2, 2, Sign::Plus),
            (2, 3, Sign::Minus),
        ],
    )
    .expect("static graph")
}

/// Demonstration graph on three vertices with one positive edge
/// `(1,2,-), (2,3,-), (1,3,-), (1,3,+)`; the CLI knows it as `fig2`.
pub fn demo_dynamic_graph() -> SignedGraph {
    SignedGraph::from_pairs(
        3,
        [
            (1, 2, Sign::Minus),
            (2, 3, Sign::Minus),
            (1, 3, Sign::Minus),
            (1, 3, Sign::Plus),
        ],
    )
    .expect("static graph")
}

/// A loop graph whose flow-polytope volume differs from its dynamic count:
/// `([3], {(1,2,-) x3, (2,2,+)})`; the CLI knows it as `counterexample-volD`.
pub fn loop_counterexample_graph() -> SignedGraph {
    SignedGraph::from_pairs(
        3,
        [
            (1, 2, Sign::Minus),
            (1, 2, Sign::Minus),
            (1, 2, Sign::Minus),
            (2, 2, Sign::Plus),
        ],
    )
    .expect("static graph")
}

/// Checks that a netflow vector has the right length for a graph.
pub fn check_netflow(g: &SignedGraph, a: &[i64]) -> Result<()> {
    if a.len() != g.vertex_count() {
        Err(Error::InvalidParameter(format!(
            "netflow length {} does not match vertex count {}",
            a.len(),
            g.vertex_count()
        )))
    } else {
        Ok(())
    }
}

/// Sanity helper used by tests: the multiset of `(lo, hi, sign)` triples.
pub fn edge_multiset(g: &SignedGraph) -> Vec<(usize, usize, Sign)> {
    g.edges().iter().map(|e| (e.lo, e.hi, e.sign)).collect()
}

/// Distinct graphs as edge multisets (tags ignored).
pub fn same_edge_multiset(a: &SignedGraph, b: &SignedGraph) -> bool {
    a.vertex_count() == b.vertex_count() && edge_multiset(a) == edge_multiset(b)
}

/// Deduplicates a collection of graphs by edge multiset.
pub fn distinct_graphs(graphs: &[SignedGraph]) -> Vec<SignedGraph> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for g in graphs {
        let key = (g.vertex_count(), edge_multiset(g));
        if seen.insert(key) {
            out.push(g.clone());
        }
    }
    out
}
