//! Property tests for the structural invariants: conservation laws, count
//! agreements between independent routes, and serialization round-trips.

use num_bigint::BigUint;
use proptest::prelude::*;

use cryvol_core::dynflow::{enumerate_dynamic_flows, kdyn, kdyn_via_series};
use cryvol_core::graphs::{Sign, SignedGraph};
use cryvol_core::kostant::{enumerate_flows, kpf, positive_flow_sum};

/// Arbitrary small signed graph: up to 4 vertices and 6 edges.
fn small_graph() -> impl Strategy<Value = SignedGraph> {
    (2usize..=4)
        .prop_flat_map(|m| {
            let edge = (1usize..=m, 0usize..m, any::<bool>()).prop_map(move |(lo, span, pos)| {
                let hi = lo + span % (m - lo + 1);
                let sign = if pos || lo == hi {
                    Sign::Plus
                } else {
                    Sign::Minus
                };
                (lo, hi, sign)
            });
            (Just(m), proptest::collection::vec(edge, 1..=6))
        })
        .prop_map(|(m, edges)| SignedGraph::from_pairs(m, edges).expect("valid edges"))
}

fn small_netflow(len: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-2i64..=3, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn static_flows_conserve_and_count((g, a) in small_graph().prop_flat_map(|g| {
        let len = g.vertex_count();
        (Just(g), small_netflow(len))
    })) {
        let flows = enumerate_flows(&g, &a);
        prop_assert_eq!(kpf(&g, &a), BigUint::from(flows.len()));
        let total: i64 = a.iter().sum();
        for f in &flows {
            prop_assert_eq!(f.netflow(&g), a.clone());
            // Positive-edge flow (loops once) carries half the netflow total.
            prop_assert_eq!(2 * positive_flow_sum(&g, f) as i64, total);
        }
    }

    #[test]
    fn dynamic_routes_agree((g, a) in small_graph().prop_flat_map(|g| {
        let len = g.vertex_count();
        (Just(g), proptest::collection::vec(0i64..=2, len))
    })) {
        let flows = enumerate_dynamic_flows(&g, &a);
        for f in &flows {
            prop_assert_eq!(f.netflow(&g), a.clone());
        }
        prop_assert_eq!(kdyn(&g, &a), kdyn_via_series(&g, &a));
    }

    #[test]
    fn graph_json_round_trips(g in small_graph()) {
        let text = g.to_json_string();
        let back = SignedGraph::from_json_str(&text).unwrap();
        prop_assert_eq!(g, back);
    }
}
