//! Wasm bindings for the browser demo.
//!
//! Three entry points, all JSON-in/JSON-out over strings so the page needs
//! no generated TypeScript: [`datasets`] lists the bundled graphs,
//! [`analyze`] runs community detection at one alpha, and
//! [`rank_trajectories`] sweeps alpha and reports within-community ranks
//! and roles. Errors come back as `{"error": "..."}` rather than traps.

use hetnet::io;
use hetnet::prelude::*;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn err_json(message: impl std::fmt::Display) -> String {
    json!({ "error": message.to_string() }).to_string()
}

/// Bundled datasets with basic shape information.
#[wasm_bindgen]
pub fn datasets() -> String {
    let rows: Vec<Value> = io::builtin_names()
        .iter()
        .map(|name| {
            let graph = io::load_builtin(name).expect("builtin loads");
            let layers: Vec<Value> = graph
                .layers()
                .iter()
                .map(|l| json!({ "name": l.name, "size": l.size }))
                .collect();
            json!({
                "name": name,
                "nodes": graph.node_count(),
                "edges": graph.edges().len(),
                "layers": layers,
            })
        })
        .collect();
    Value::Array(rows).to_string()
}

fn analyze_inner(
    dataset: &str,
    alpha: f64,
    use_series: bool,
    terms: usize,
    rounding: bool,
) -> hetnet::Result<String> {
    let graph = io::load_builtin(dataset)?;
    let matrix = build_nmode(&graph)?;
    let info = spectral_radius(&matrix)?;
    let bound = max_alpha(&matrix)?;
    let options = DetectOptions {
        method: if use_series {
            CentralityMethod::Series { terms }
        } else {
            CentralityMethod::Exact
        },
        rounding,
    };
    let result = detect_communities_with(&matrix, alpha, 1.0, options)?;
    let truth = io::builtin_ground_truth(dataset)?;
    let discovered = Labeling::from_partition(matrix.labels(), &result.partition)?;
    let score = nmi(&discovered, &truth)?;

    let nodes: Vec<Value> = (0..matrix.dimension())
        .map(|i| {
            json!({
                "label": matrix.label(i),
                "layer": matrix.layer_of(i),
                "community": result.partition.assignment[i],
            })
        })
        .collect();
    let edges: Vec<Value> = graph
        .edges()
        .iter()
        .map(|e| {
            json!({
                "source": graph.label_of(e.a),
                "target": graph.label_of(e.b),
                "weight": e.weight,
            })
        })
        .collect();
    let splits: Vec<Value> = result
        .splits
        .iter()
        .map(|s| json!({ "eigenvalue": s.eigenvalue, "delta_q": s.delta_q }))
        .collect();
    Ok(json!({
        "dataset": dataset,
        "alpha": alpha,
        "lambda_max": info.lambda_max,
        "max_alpha": bound.bound(),
        "communities": result.partition.community_count(),
        "q_raw": result.partition.q,
        "q_normalized": result.q_normalized,
        "nmi_vs_truth": score,
        "splits": splits,
        "nodes": nodes,
        "edges": edges,
    })
    .to_string())
}

/// Detect communities on a bundled dataset at one alpha.
#[wasm_bindgen]
pub fn analyze(
    dataset: &str,
    alpha: f64,
    use_series: bool,
    terms: usize,
    rounding: bool,
) -> String {
    match analyze_inner(dataset, alpha, use_series, terms.max(1), rounding) {
        Ok(payload) => payload,
        Err(e) => err_json(e),
    }
}

fn trajectories_inner(dataset: &str, points: usize) -> hetnet::Result<String> {
    let graph = io::load_builtin(dataset)?;
    let matrix = build_nmode(&graph)?;
    let bound = match max_alpha(&matrix)? {
        MaxAlpha::Bounded(b) => b,
        MaxAlpha::Unbounded => 1.0,
    };
    // exact sweep needs alpha strictly inside the bound
    let top = bound * 0.95;
    let points = points.clamp(2, 64);
    let grid: Vec<f64> = (1..=points)
        .map(|k| top * k as f64 / points as f64)
        .collect();

    let communities = detect_communities_with(
        &matrix,
        grid[0],
        1.0,
        DetectOptions {
            method: CentralityMethod::Series { terms: 3 },
            rounding: false,
        },
    )?;
    let table = alpha_sweep_within(&matrix, &grid, 1.0, &communities.partition)?;

    // rank only the first layer (women / teams); projections have one layer
    let layer = matrix.layers()[0].clone();
    let sub = ScoreTable {
        grid: grid.clone(),
        scores: table.scores.rows(layer.offset, layer.size).into_owned(),
        beta: 1.0,
    };
    let partition = Partition::from_assignment(
        communities.partition.assignment[layer.offset..layer.offset + layer.size].to_vec(),
    );
    let ranks = rank_within_groups(&sub, &partition)?;
    let roles = classify_roles(&ranks, 1.0)?;

    let nodes: Vec<Value> = (0..layer.size)
        .map(|i| {
            let rank_row: Vec<f64> = (0..grid.len()).map(|k| ranks.ranks[(i, k)]).collect();
            let role = &roles[i];
            json!({
                "label": matrix.label(layer.offset + i),
                "community": partition.assignment[i],
                "ranks": rank_row,
                "role": match role.role {
                    Role::Leader => "leader",
                    Role::Bridge => "bridge",
                    Role::Stable => "stable",
                },
                "delta_rank": role.delta_rank,
            })
        })
        .collect();
    Ok(json!({
        "dataset": dataset,
        "layer": layer.name,
        "grid": grid,
        "max_alpha": bound,
        "nodes": nodes,
    })
    .to_string())
}

/// Within-community rank trajectories over an alpha sweep up to just below
/// the admissibility bound.
#[wasm_bindgen]
pub fn rank_trajectories(dataset: &str, points: usize) -> String {
    match trajectories_inner(dataset, points) {
        Ok(payload) => payload,
        Err(e) => err_json(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_reports_ground_truth_at_grid_top() {
        let payload = analyze("southern_women", 0.16, true, 3, false);
        let value: serde_json::Value = serde_json::from_str(&payload).unwrap();
        assert_eq!(value["communities"], 2);
        assert_eq!(value["nmi_vs_truth"], 1.0);
        assert_eq!(value["nodes"].as_array().unwrap().len(), 32);
        assert_eq!(value["edges"].as_array().unwrap().len(), 88);
    }

    #[test]
    fn analyze_surfaces_errors_as_json() {
        let payload = analyze("southern_women", 0.5, false, 3, true);
        let value: serde_json::Value = serde_json::from_str(&payload).unwrap();
        assert!(value["error"].as_str().unwrap().contains("bound"));
    }

    #[test]
    fn trajectories_cover_requested_grid() {
        let payload = rank_trajectories("southern_women", 8);
        let value: serde_json::Value = serde_json::from_str(&payload).unwrap();
        assert_eq!(value["grid"].as_array().unwrap().len(), 8);
        assert_eq!(value["nodes"].as_array().unwrap().len(), 18);
        let roles: Vec<&str> = value["nodes"]
            .as_array()
            .unwrap()
            .iter()
            .map(|n| n["role"].as_str().unwrap())
            .collect();
        assert!(roles.contains(&"bridge"));
        assert!(roles.contains(&"leader"));
    }

    #[test]
    fn datasets_lists_three_builtins() {
        let value: serde_json::Value = serde_json::from_str(&datasets()).unwrap();
        assert_eq!(value.as_array().unwrap().len(), 3);
    }
}
