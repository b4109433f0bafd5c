//! Resolution of `--graph` and `--netflow` arguments: built-in named graphs,
//! parameterized families, or JSON files.

use cryvol_core::graphs::{
    complete_type_a, complete_type_c, complete_type_d, demo_dynamic_graph, demo_mixed_graph,
    family_graph, loop_counterexample_graph, LoopRange, SignedGraph,
};

pub fn parse_netflow(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<i64>()
                .map_err(|_| format!("bad netflow entry {part:?}"))
        })
        .collect()
}

pub fn load_graph(spec: &str, loops: LoopRange) -> Result<SignedGraph, String> {
    let err = |e: cryvol_core::Error| e.to_string();
    match spec {
        "fig1" => return Ok(demo_mixed_graph()),
        "fig2" => return Ok(demo_dynamic_graph()),
        "counterexample-volD" => return Ok(loop_counterexample_graph()),
        _ => {}
    }
    if let Some(rest) = spec.strip_prefix("family-g:") {
        let a = parse_netflow(rest)?;
        return family_graph(&a).map_err(err);
    }
    if let Some(rest) = spec.strip_prefix("cryd:") {
        let n: usize = rest.parse().map_err(|_| format!("bad index in {spec:?}"))?;
        return complete_type_d(n + 1).map_err(err);
    }
    if let Some(rest) = spec.strip_prefix("cryc:") {
        let n: usize = rest.parse().map_err(|_| format!("bad index in {spec:?}"))?;
        return complete_type_c(n + 1, loops).map_err(err);
    }
    if let Some(rest) = spec.strip_prefix("cry:") {
        let n: usize = rest.parse().map_err(|_| format!("bad index in {spec:?}"))?;
        return complete_type_a(n + 1).map_err(err);
    }
    let path = std::path::Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        return SignedGraph::from_json_str(&text).map_err(err);
    }
    Err(format!(
        "unknown graph {spec:?}: expected fig1, fig2, counterexample-volD, \
         family-g:A,..., cry:N, cryd:N, cryc:N, or a JSON file path"
    ))
}
