//! Verification suites: each claim computes two quantities by independent
//! routes and reports exact equality.  Claims run in a small work pool and
//! are reported in claim-id order.

use std::collections::VecDeque;
use std::sync::Mutex;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use cryvol_core::ct::{iterated_ct, build_cryc_lhs, build_cryd_lhs, verify_identity, Identity};
use cryvol_core::dynflow::{
    bijection_totals, indegree_netflow, kdyn, volume_via_dynamic_kpf,
};
use cryvol_core::exact::{
    cry_volume_formula, cryc_volume_formula, cryd_volume_formula, MorrisParams,
};
use cryvol_core::graphs::{
    apex_netflow, complete_type_a, complete_type_c, complete_type_d, family_members,
    loop_counterexample_graph, same_edge_multiset, source_sink_netflow, staircase_netflow,
    LoopRange, Sign, SignedGraph,
};
use cryvol_core::kostant::{generic_dimension, normalized_volume_ehrhart, polytope_dimension};
use cryvol_core::reduce::{full_dimensional_leaves, loop_elimination_tree, strip_loops_at_1};

use crate::Suite;

/// One verified claim.  `status` is `pass` exactly when the two sides are
/// equal; a claim expected to fail (the loop counterexample) is in order
/// when its status is `fail`.
#[derive(Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub params: String,
    pub lhs: String,
    pub rhs: String,
    pub status: &'static str,
    pub expected_fail: bool,
    pub elapsed_ms: f64,
}

pub const HEADER_TSV: &str = "id\tparams\tlhs\trhs\tstatus\texpected_fail\telapsed_ms";

impl VerificationReport {
    pub fn ok(&self) -> bool {
        (self.status == "fail") == self.expected_fail
    }

    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{:.3}",
            self.id, self.params, self.lhs, self.rhs, self.status, self.expected_fail,
            self.elapsed_ms
        )
    }
}

type ClaimFn = Box<dyn FnOnce() -> Result<(String, String), String> + Send>;

struct Claim {
    id: String,
    params: String,
    expected_fail: bool,
    run: ClaimFn,
}

impl Claim {
    fn new(
        id: impl Into<String>,
        params: impl Into<String>,
        run: impl FnOnce() -> Result<(String, String), String> + Send + 'static,
    ) -> Self {
        Claim {
            id: id.into(),
            params: params.into(),
            expected_fail: false,
            run: Box::new(run),
        }
    }

    fn expected_to_fail(mut self) -> Self {
        self.expected_fail = true;
        self
    }

    fn execute(self) -> VerificationReport {
        let start = Instant::now();
        let (lhs, rhs, status) = match (self.run)() {
            Ok((lhs, rhs)) => {
                let status = if lhs == rhs { "pass" } else { "fail" };
                (lhs, rhs, status)
            }
            Err(message) => (format!("error: {message}"), String::new(), "fail"),
        };
        VerificationReport {
            id: self.id,
            params: self.params,
            lhs,
            rhs,
            status,
            expected_fail: self.expected_fail,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        }
    }
}

pub fn run_suite(suite: Suite, n_cap: Option<usize>, jobs: usize) -> Vec<VerificationReport> {
    let claims = build_claims(suite, n_cap);
    let queue: Mutex<VecDeque<(usize, Claim)>> =
        Mutex::new(claims.into_iter().enumerate().collect());
    let results: Mutex<Vec<Option<VerificationReport>>> = {
        let len = queue.lock().unwrap().len();
        Mutex::new((0..len).map(|_| None).collect())
    };
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let item = queue.lock().unwrap().pop_front();
                let Some((idx, claim)) = item else { break };
                let report = claim.execute();
                results.lock().unwrap()[idx] = Some(report);
            });
        }
    });
    let mut reports: Vec<VerificationReport> = results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every claim ran"))
        .collect();
    reports.sort_by(|a, b| a.id.cmp(&b.id).then_with(|| a.params.cmp(&b.params)));
    reports
}

fn build_claims(suite: Suite, n_cap: Option<usize>) -> Vec<Claim> {
    let mut claims = Vec::new();
    let cap = |default: usize| n_cap.unwrap_or(default).min(default);
    match suite {
        Suite::ThmCry => {
            for n in 3..=cap(5) {
                claims.push(Claim::new(
                    "thm-cry/ehrhart",
                    format!("n={n}"),
                    move || {
                        let m = n + 1;
                        let g = complete_type_a(m).map_err(|e| e.to_string())?;
                        let vol = normalized_volume_ehrhart(&g, &source_sink_netflow(m))
                            .map_err(|e| e.to_string())?;
                        let formula = cry_volume_formula(n as u64).map_err(|e| e.to_string())?;
                        Ok((vol.to_string(), formula.to_string()))
                    },
                ));
            }
            for m in 1..=cap(5).saturating_sub(1).min(4) {
                claims.push(Claim::new("thm-cry/identity", format!("n={m}"), move || {
                    identity_sides(&Identity::Cry { n: m })
                }));
            }
        }
        Suite::ConjCryd => {
            for n in 1..=cap(3) {
                claims.push(Claim::new("conj-cryd/ehrhart", format!("n={n}"), move || {
                    let g = complete_type_d(n + 1).map_err(|e| e.to_string())?;
                    let vol = normalized_volume_ehrhart(&g, &apex_netflow(n + 1))
                        .map_err(|e| e.to_string())?;
                    let formula = cryd_volume_formula(n as u64).map_err(|e| e.to_string())?;
                    Ok((vol.to_string(), formula.to_string()))
                }));
                claims.push(Claim::new("conj-cryd/identity", format!("n={n}"), move || {
                    let lhs = iterated_ct(&build_cryd_lhs(n).map_err(|e| e.to_string())?)
                        .map_err(|e| e.to_string())?;
                    let formula = cryd_volume_formula(n as u64).map_err(|e| e.to_string())?;
                    Ok((lhs.to_string(), formula.to_string()))
                }));
                claims.push(Claim::new("conj-cryd/dynamic", format!("n={n}"), move || {
                    let g = complete_type_d(n + 1).map_err(|e| e.to_string())?;
                    let count = volume_via_dynamic_kpf(&g).map_err(|e| e.to_string())?;
                    let formula = cryd_volume_formula(n as u64).map_err(|e| e.to_string())?;
                    Ok((count.to_string(), formula.to_string()))
                }));
            }
        }
        Suite::ConjCryc => {
            for n in 1..=cap(3) {
                claims.push(Claim::new("conj-cryc/ehrhart", format!("n={n}"), move || {
                    let g = complete_type_c(n + 1, LoopRange::AllVertices)
                        .map_err(|e| e.to_string())?;
                    let vol = normalized_volume_ehrhart(&g, &apex_netflow(n + 1))
                        .map_err(|e| e.to_string())?;
                    let formula = cryc_volume_formula(n as u64).map_err(|e| e.to_string())?;
                    Ok((vol.to_string(), formula.to_string()))
                }));
                claims.push(Claim::new("conj-cryc/identity", format!("n={n}"), move || {
                    let lhs = iterated_ct(&build_cryc_lhs(n).map_err(|e| e.to_string())?)
                        .map_err(|e| e.to_string())?;
                    let formula = cryc_volume_formula(n as u64).map_err(|e| e.to_string())?;
                    Ok((lhs.to_string(), formula.to_string()))
                }));
                claims.push(Claim::new("conj-cryc/pipeline", format!("n={n}"), move || {
                    let m = n + 1;
                    let mut family_sum = BigUint::zero();
                    for (_, g) in family_members(m).map_err(|e| e.to_string())? {
                        family_sum += kdyn(&g, &indegree_netflow(&g));
                    }
                    let complete = complete_type_c(m, LoopRange::AllVertices)
                        .map_err(|e| e.to_string())?;
                    let staircase = kdyn(&complete, &staircase_netflow(m));
                    let formula = cryc_volume_formula(n as u64).map_err(|e| e.to_string())?;
                    if staircase.to_string() != formula.to_string() {
                        return Ok((staircase.to_string(), formula.to_string()));
                    }
                    Ok((family_sum.to_string(), formula.to_string()))
                }));
            }
        }
        Suite::ThmVolD => {
            let corpus = random_corpus(20);
            for (i, (g, full)) in corpus.into_iter().enumerate() {
                if full {
                    claims.push(Claim::new(
                        format!("thm-volD/random-{i:02}"),
                        format!("{g}"),
                        move || {
                            let vol =
                                normalized_volume_ehrhart(&g, &apex_netflow(g.vertex_count()))
                                    .map_err(|e| e.to_string())?;
                            let count = volume_via_dynamic_kpf(&g).map_err(|e| e.to_string())?;
                            Ok((vol.to_string(), count.to_string()))
                        },
                    ));
                } else {
                    claims.push(Claim::new(
                        format!("thm-volD/degenerate-{i:02}"),
                        format!("{g}"),
                        move || {
                            let count = kdyn(&g, &indegree_netflow(&g));
                            Ok((count.to_string(), "0".to_string()))
                        },
                    ));
                }
            }
            claims.push(
                Claim::new(
                    "thm-volD/counterexample-loop",
                    "([3], {(1,2,-) x3, (2,2,+)})",
                    || {
                        let g = loop_counterexample_graph();
                        let vol = normalized_volume_ehrhart(&g, &[2, 0, 0])
                            .map_err(|e| e.to_string())?;
                        let count = kdyn(&g, &indegree_netflow(&g));
                        Ok((vol.to_string(), count.to_string()))
                    },
                )
                .expected_to_fail(),
            );
        }
        Suite::ThmDecomp => {
            for n in 1..=cap(3) {
                claims.push(Claim::new("thm-decomp/leaves", format!("n={n}"), move || {
                    let m = n + 1;
                    let tree = loop_elimination_tree(n).map_err(|e| e.to_string())?;
                    let complete = complete_type_c(m, LoopRange::AllVertices)
                        .map_err(|e| e.to_string())?;
                    let reference = polytope_dimension(&complete, &apex_netflow(m))
                        .map_err(|e| e.to_string())?;
                    let full = full_dimensional_leaves(&tree.leaf_graphs(), reference)
                        .map_err(|e| e.to_string())?;
                    let family: Vec<SignedGraph> = family_members(m)
                        .map_err(|e| e.to_string())?
                        .into_iter()
                        .map(|(_, g)| g)
                        .collect();
                    let mut matched = 0usize;
                    for leaf in &full {
                        let stripped = strip_loops_at_1(leaf).map_err(|e| e.to_string())?;
                        if family.iter().any(|f| same_edge_multiset(f, &stripped)) {
                            matched += 1;
                        }
                    }
                    Ok((
                        format!("{matched} of {} leaves in the family", full.len()),
                        format!("{} of {} leaves in the family", family.len(), family.len()),
                    ))
                }));
                claims.push(Claim::new(
                    "thm-decomp/volume-sum",
                    format!("n={n}"),
                    move || {
                        let m = n + 1;
                        let mut total = BigUint::zero();
                        for (_, g) in family_members(m).map_err(|e| e.to_string())? {
                            total += normalized_volume_ehrhart(&g, &apex_netflow(m))
                                .map_err(|e| e.to_string())?;
                        }
                        let complete = complete_type_c(m, LoopRange::AllVertices)
                            .map_err(|e| e.to_string())?;
                        let whole = normalized_volume_ehrhart(&complete, &apex_netflow(m))
                            .map_err(|e| e.to_string())?;
                        Ok((total.to_string(), whole.to_string()))
                    },
                ));
            }
        }
        Suite::ThmBijection => {
            for n in 2..=cap(3).max(2) {
                claims.push(Claim::new(
                    "thm-bijection/round-trip",
                    format!("n={n}"),
                    move || {
                        let (family_total, complete_total) =
                            bijection_totals(n + 1).map_err(|e| e.to_string())?;
                        Ok((family_total.to_string(), complete_total.to_string()))
                    },
                ));
                claims.push(Claim::new(
                    "thm-bijection/staircase-count",
                    format!("n={n}"),
                    move || {
                        let m = n + 1;
                        let mut family_sum = BigUint::zero();
                        for (_, g) in family_members(m).map_err(|e| e.to_string())? {
                            family_sum += kdyn(&g, &indegree_netflow(&g));
                        }
                        let complete = complete_type_c(m, LoopRange::AllVertices)
                            .map_err(|e| e.to_string())?;
                        let staircase = kdyn(&complete, &staircase_netflow(m));
                        Ok((family_sum.to_string(), staircase.to_string()))
                    },
                ));
            }
        }
        Suite::Morris => {
            for n in 1..=cap(3) {
                for a in [1i64, 2, 3] {
                    for b in [0i64, 1, 2] {
                        for two_c in [1i64, 2] {
                            claims.push(morris_claim("morris", n, a, b, two_c, false));
                        }
                    }
                }
            }
        }
        Suite::ThmC => {
            for n in 1..=cap(2) {
                for a in [1i64, 2] {
                    for b in [0i64, 1, 2] {
                        for two_c in [1i64, 2] {
                            claims.push(morris_claim("thmC", n, a, b, two_c, true));
                        }
                    }
                }
            }
        }
        Suite::All => {
            for sub in [
                Suite::ThmCry,
                Suite::ConjCryd,
                Suite::ConjCryc,
                Suite::ThmVolD,
                Suite::ThmDecomp,
                Suite::ThmBijection,
                Suite::Morris,
                Suite::ThmC,
            ] {
                claims.extend(build_claims(sub, n_cap));
            }
        }
    }
    claims
}

fn morris_claim(id: &str, n: usize, a: i64, b: i64, two_c: i64, type_c: bool) -> Claim {
    let label = format!(
        "n={n},a={a},b={b},c={}",
        if two_c % 2 == 0 {
            format!("{}", two_c / 2)
        } else {
            format!("{two_c}/2")
        }
    );
    Claim::new(id, label, move || {
        let p = MorrisParams::new(n, a, b, two_c).map_err(|e| e.to_string())?;
        let identity = if type_c {
            Identity::MorrisC(p)
        } else {
            Identity::Morris(p)
        };
        identity_sides(&identity)
    })
}

fn identity_sides(id: &Identity) -> Result<(String, String), String> {
    let report = verify_identity(id).map_err(|e| e.to_string())?;
    Ok((report.lhs.to_string(), report.rhs.to_string()))
}

/// The deterministic random corpus: connected loopless signed graphs on at
/// most 5 vertices with at most 9 edges, positive indegrees past vertex 1,
/// at least one positive edge, and a nonempty polytope.  Pairs each graph
/// with whether its polytope is full-dimensional.
fn random_corpus(count: usize) -> Vec<(SignedGraph, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut corpus: Vec<(SignedGraph, bool)> = Vec::new();
    let mut full_count = 0usize;
    while full_count < count {
        let m = rng.gen_range(3..=5usize);
        let mut edges = Vec::new();
        for v in 2..=m {
            edges.push((rng.gen_range(1..v), v, Sign::Minus));
        }
        let extras = rng.gen_range(1..=(9 - edges.len()).min(4));
        for _ in 0..extras {
            let i = rng.gen_range(1..m);
            let j = rng.gen_range((i + 1)..=m);
            let sign = if rng.gen_bool(0.6) {
                Sign::Plus
            } else {
                Sign::Minus
            };
            edges.push((i, j, sign));
        }
        if !edges.iter().any(|&(_, _, s)| s == Sign::Plus) {
            continue;
        }
        let g = SignedGraph::from_pairs(m, edges).expect("valid random edges");
        let Ok(dim) = polytope_dimension(&g, &apex_netflow(m)) else {
            continue;
        };
        if corpus.iter().any(|(h, _)| same_edge_multiset(h, &g)) {
            continue;
        }
        let full = dim == generic_dimension(&g);
        if full {
            full_count += 1;
        }
        corpus.push((g, full));
    }
    corpus
}
