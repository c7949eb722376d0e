//! Output assembly: a small ordered JSON payload builder plus a sink that
//! writes to standard output or a file.
//!
//! Every JSON payload carries `version` and `command` fields; keys keep
//! insertion order so repeated runs are byte-identical.

use std::fs;
use std::io::Write;
use std::path::Path;

use hetnet::community::SplitRecord;
use hetnet::evaluation::Labeling;
use hetnet::ranking::{RankTable, Role, RoleLabel, ScoreTable};
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u64 = 1;

pub struct Payload {
    entries: Vec<(String, Value)>,
}

impl Payload {
    pub fn new(command: &str) -> Self {
        Payload {
            entries: vec![
                ("version".to_string(), json!(SCHEMA_VERSION)),
                ("command".to_string(), json!(command)),
            ],
        }
    }

    fn push(&mut self, key: &str, value: Value) {
        self.entries.push((key.to_string(), value));
    }

    pub fn number(&mut self, key: &str, value: f64) {
        self.push(key, json!(value));
    }

    pub fn integer(&mut self, key: &str, value: u64) {
        self.push(key, json!(value));
    }

    pub fn string(&mut self, key: &str, value: &str) {
        self.push(key, json!(value));
    }

    pub fn null(&mut self, key: &str) {
        self.push(key, Value::Null);
    }

    pub fn grid(&mut self, key: &str, values: &[f64]) {
        self.push(key, json!(values));
    }

    pub fn graph(&mut self, key: &str, graph: &hetnet::graph::LayeredGraph) {
        let nodes: Vec<Value> = (0..graph.layer_count())
            .flat_map(|l| {
                graph
                    .layer_labels(l)
                    .iter()
                    .map(move |label| json!({ "label": label, "layer": graph.layer_name(l) }))
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
        self.push(key, json!({ "nodes": nodes, "edges": edges }));
    }

    pub fn labeling(&mut self, key: &str, labeling: &Labeling) {
        let rows: Vec<Value> = labeling
            .iter()
            .map(|(label, community)| json!({ "label": label, "community": community }))
            .collect();
        self.push(key, Value::Array(rows));
    }

    pub fn score_rows(&mut self, key: &str, rows: &[(String, f64)]) {
        let rows: Vec<Value> = rows
            .iter()
            .map(|(label, score)| json!({ "label": label, "score": score }))
            .collect();
        self.push(key, Value::Array(rows));
    }

    pub fn split_rows(&mut self, key: &str, splits: &[SplitRecord]) {
        let rows: Vec<Value> = splits
            .iter()
            .map(|s| json!({ "eigenvalue": s.eigenvalue, "delta_q": s.delta_q }))
            .collect();
        self.push(key, Value::Array(rows));
    }

    pub fn rank_rows(
        &mut self,
        key: &str,
        labels: &[String],
        scores: &ScoreTable,
        ranks: &RankTable,
        roles: &[RoleLabel],
    ) {
        let mut order: Vec<usize> = (0..labels.len()).collect();
        order.sort_by(|&i, &j| labels[i].cmp(&labels[j]));
        let rows: Vec<Value> = order
            .iter()
            .map(|&i| {
                let score_row: Vec<f64> = (0..scores.grid.len())
                    .map(|k| scores.scores[(i, k)])
                    .collect();
                let rank_row: Vec<f64> =
                    (0..ranks.grid.len()).map(|k| ranks.ranks[(i, k)]).collect();
                let mut row = json!({
                    "label": labels[i],
                    "community": ranks.partition.assignment[i],
                    "scores": score_row,
                    "ranks": rank_row,
                });
                if let Some(role) = roles.iter().find(|r| r.node == i) {
                    row["role"] = json!(match role.role {
                        Role::Leader => "leader",
                        Role::Bridge => "bridge",
                        Role::Stable => "stable",
                    });
                    row["delta_rank"] = json!(role.delta_rank);
                }
                row
            })
            .collect();
        self.push(key, Value::Array(rows));
    }

    fn to_json(&self) -> String {
        // hand-assembled object to keep insertion order
        let mut out = String::from("{\n");
        for (i, (key, value)) in self.entries.iter().enumerate() {
            out.push_str(&format!(
                "  {}: {}",
                serde_json::to_string(key).expect("keys are plain strings"),
                serde_json::to_string(value).expect("values are finite")
            ));
            if i + 1 < self.entries.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("}\n");
        out
    }

    fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.entries {
            if key == "version" || key == "command" {
                continue;
            }
            let rendered = match value {
                Value::Null => "inf".to_string(),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{key}\t{rendered}\n"));
        }
        out
    }
}

pub struct Sink<'a> {
    path: Option<&'a Path>,
}

impl<'a> Sink<'a> {
    pub fn new(path: Option<&'a Path>) -> Self {
        Sink { path }
    }

    pub fn write_text(&self, text: &str) -> hetnet::Result<()> {
        match self.path {
            Some(path) => fs::write(path, text).map_err(|e| hetnet::Error::Io {
                path: path.display().to_string(),
                source: e,
            }),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .map_err(|e| hetnet::Error::Io {
                        path: "<stdout>".to_string(),
                        source: e,
                    })
            }
        }
    }

    pub fn write_json(&self, payload: &Payload) -> hetnet::Result<()> {
        self.write_text(&payload.to_json())
    }

    pub fn write_keyed(&self, as_json: bool, payload: &Payload) -> hetnet::Result<()> {
        if as_json {
            self.write_json(payload)
        } else {
            self.write_text(&payload.to_tsv())
        }
    }
}
