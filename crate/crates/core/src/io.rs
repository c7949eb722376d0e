//! Dataset loading, bundled reference data, and deterministic writers.
//!
//! Two text formats are supported: a simple sectioned graph format for
//! layered graphs, and a subset of GML for unipartite/team-conference data.
//! All loaders fail fast on malformed input; all writers are byte-for-byte
//! deterministic given identical inputs.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::evaluation::Labeling;
use crate::graph::{
    project_unipartite_binary, project_unipartite_weighted, LayeredGraph, NModeMatrix,
};
use crate::ranking::{RankTable, ScoreTable};

/// Attendance table behind the `southern_women` builtins.
pub const SOUTHERN_WOMEN_TSV: &str = include_str!("../data/southern_women.tsv");

const BUILTINS: [&str; 3] = [
    "southern_women",
    "southern_women_binary_projection",
    "southern_women_weighted_projection",
];

pub fn builtin_names() -> &'static [&'static str] {
    &BUILTINS
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn parse_error(path: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        line,
        message: message.into(),
    }
}

// ---------------------------------------------------------------------------
// bundled datasets

fn southern_women_incidence() -> Vec<(String, Vec<(String, bool)>)> {
    let mut rows = Vec::new();
    let mut events: Vec<String> = Vec::new();
    for line in SOUTHERN_WOMEN_TSV.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let head = fields.next().expect("non-empty line");
        if head == "woman" {
            events = fields.map(str::to_string).collect();
            continue;
        }
        let attended: Vec<(String, bool)> = events
            .iter()
            .zip(fields)
            .map(|(e, v)| (e.clone(), v == "1"))
            .collect();
        rows.push((head.to_string(), attended));
    }
    rows
}

fn southern_women_bipartite() -> LayeredGraph {
    let rows = southern_women_incidence();
    let mut g = LayeredGraph::new(false);
    let women = g.add_layer("women").expect("fresh graph");
    let events = g.add_layer("events").expect("fresh graph");
    for (woman, _) in &rows {
        g.add_node(women, woman).expect("unique labels");
    }
    for (event, _) in &rows[0].1 {
        g.add_node(events, event).expect("unique labels");
    }
    for (woman, attended) in &rows {
        for (event, present) in attended {
            if *present {
                g.add_edge(woman, event, 1.0)
                    .expect("bundled data is clean");
            }
        }
    }
    g
}

/// Rebuild a layered graph from a square matrix produced by a projection.
fn graph_from_matrix(matrix: &NModeMatrix, layer_name: &str) -> LayeredGraph {
    let mut g = LayeredGraph::new(false);
    let layer = g.add_layer(layer_name).expect("fresh graph");
    for label in matrix.labels() {
        g.add_node(layer, label).expect("unique labels");
    }
    let v = matrix.values();
    for i in 0..matrix.dimension() {
        for j in (i + 1)..matrix.dimension() {
            if v[(i, j)] != 0.0 {
                g.add_edge(matrix.label(i), matrix.label(j), v[(i, j)])
                    .expect("upper triangle visited once");
            }
        }
    }
    g
}

/// Load one of the bundled reference datasets.
pub fn load_builtin(name: &str) -> Result<LayeredGraph> {
    match name {
        "southern_women" => Ok(southern_women_bipartite()),
        "southern_women_binary_projection" => {
            let g = southern_women_bipartite();
            let m = project_unipartite_binary(&g, 0, 1)?;
            Ok(graph_from_matrix(&m, "women"))
        }
        "southern_women_weighted_projection" => {
            let g = southern_women_bipartite();
            let m = project_unipartite_weighted(&g, 0, 1)?;
            Ok(graph_from_matrix(&m, "women"))
        }
        _ => Err(Error::UnknownBuiltin {
            name: name.to_string(),
            available: BUILTINS.join(", "),
        }),
    }
}

/// Reference community division for a bundled dataset: the meta-analysis
/// ground truth with women w1-w9 (and events e1-e8) in one group.
pub fn builtin_ground_truth(name: &str) -> Result<Labeling> {
    let women = (1..=18).map(|i| {
        let group = usize::from(i > 9);
        (format!("w{i}"), group)
    });
    match name {
        "southern_women" => {
            let events = (1..=14).map(|i| {
                let group = usize::from(i > 8);
                (format!("e{i}"), group)
            });
            Labeling::from_pairs(women.chain(events))
        }
        "southern_women_binary_projection" | "southern_women_weighted_projection" => {
            Labeling::from_pairs(women)
        }
        _ => Err(Error::UnknownBuiltin {
            name: name.to_string(),
            available: BUILTINS.join(", "),
        }),
    }
}

// ---------------------------------------------------------------------------
// layered graph text format

/// Parse the sectioned graph format:
///
/// ```text
/// directed: false
/// [nodes]
/// label<TAB>layer
/// [edges]
/// src<TAB>dst<TAB>weight
/// ```
///
/// `#` starts a comment, blank lines are skipped, the weight column is
/// optional and defaults to 1.
pub fn parse_graph(text: &str, path: &str) -> Result<LayeredGraph> {
    #[derive(PartialEq)]
    enum Section {
        Header,
        Nodes,
        Edges,
    }
    let mut section = Section::Header;
    let mut graph: Option<LayeredGraph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line {
            "[nodes]" => {
                if graph.is_none() {
                    return Err(parse_error(path, lineno, "missing 'directed:' header"));
                }
                section = Section::Nodes;
                continue;
            }
            "[edges]" => {
                if section == Section::Header {
                    return Err(parse_error(path, lineno, "missing '[nodes]' section"));
                }
                section = Section::Edges;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Header => {
                let directed = match line {
                    "directed: true" => true,
                    "directed: false" => false,
                    _ => {
                        return Err(parse_error(
                            path,
                            lineno,
                            format!("expected 'directed: true|false', got '{line}'"),
                        ))
                    }
                };
                graph = Some(LayeredGraph::new(directed));
            }
            Section::Nodes => {
                let g = graph.as_mut().expect("header parsed");
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 2 {
                    return Err(parse_error(
                        path,
                        lineno,
                        format!("node line needs 'label layer', got {} fields", fields.len()),
                    ));
                }
                let layer = g.ensure_layer(fields[1]);
                g.add_node(layer, fields[0])
                    .map_err(|e| parse_error(path, lineno, e.to_string()))?;
            }
            Section::Edges => {
                let g = graph.as_mut().expect("header parsed");
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 2 && fields.len() != 3 {
                    return Err(parse_error(
                        path,
                        lineno,
                        format!(
                            "edge line needs 'src dst [weight]', got {} fields",
                            fields.len()
                        ),
                    ));
                }
                let weight = if fields.len() == 3 {
                    fields[2].parse::<f64>().map_err(|_| {
                        parse_error(path, lineno, format!("bad weight '{}'", fields[2]))
                    })?
                } else {
                    1.0
                };
                if weight < 0.0 {
                    return Err(parse_error(
                        path,
                        lineno,
                        format!("negative weight {weight}"),
                    ));
                }
                g.add_edge(fields[0], fields[1], weight)
                    .map_err(|e| parse_error(path, lineno, e.to_string()))?;
            }
        }
    }
    let graph = graph.ok_or_else(|| parse_error(path, 1, "empty graph file"))?;
    if graph.node_count() == 0 {
        return Err(parse_error(path, 1, "graph declares no nodes"));
    }
    Ok(graph)
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<LayeredGraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_graph(&text, &path.display().to_string())
}

/// Serialize a graph in the sectioned format; `parse_graph` reproduces it
/// exactly (same layers, node order, and edges).
pub fn graph_to_string(graph: &LayeredGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "directed: {}", graph.directed());
    out.push_str("[nodes]\n");
    for layer in 0..graph.layer_count() {
        for label in graph.layer_labels(layer) {
            let _ = writeln!(out, "{label}\t{}", graph.layer_name(layer));
        }
    }
    out.push_str("[edges]\n");
    for edge in graph.edges() {
        let _ = writeln!(
            out,
            "{}\t{}\t{}",
            graph.label_of(edge.a),
            graph.label_of(edge.b),
            edge.weight
        );
    }
    out
}

pub fn write_graph(graph: &LayeredGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, graph_to_string(graph)).map_err(|e| io_error(path, e))
}

// ---------------------------------------------------------------------------
// GML subset

#[derive(Debug, Clone, PartialEq)]
enum GmlToken {
    Key(String),
    Int(i64),
    Float(f64),
    Str(String),
    Open,
    Close,
}

fn tokenize_gml(text: &str, path: &str) -> Result<Vec<(usize, GmlToken)>> {
    let mut tokens = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let mut chars = raw.chars().peekable();
        while let Some(&ch) = chars.peek() {
            if ch.is_whitespace() {
                chars.next();
            } else if ch == '#' {
                break; // comment to end of line
            } else if ch == '[' {
                chars.next();
                tokens.push((lineno, GmlToken::Open));
            } else if ch == ']' {
                chars.next();
                tokens.push((lineno, GmlToken::Close));
            } else if ch == '"' {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(c) => s.push(c),
                        None => return Err(parse_error(path, lineno, "unterminated string")),
                    }
                }
                tokens.push((lineno, GmlToken::Str(s)));
            } else {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '[' || c == ']' {
                        break;
                    }
                    word.push(c);
                    chars.next();
                }
                let token = if let Ok(i) = word.parse::<i64>() {
                    GmlToken::Int(i)
                } else if let Ok(f) = word.parse::<f64>() {
                    GmlToken::Float(f)
                } else {
                    GmlToken::Key(word)
                };
                tokens.push((lineno, token));
            }
        }
    }
    Ok(tokens)
}

#[derive(Debug, Default, Clone)]
struct GmlNode {
    id: Option<i64>,
    label: Option<String>,
    value: Option<i64>,
    line: usize,
}

#[derive(Debug, Default, Clone)]
struct GmlEdge {
    source: Option<i64>,
    target: Option<i64>,
    line: usize,
}

struct GmlParser<'a> {
    tokens: Vec<(usize, GmlToken)>,
    pos: usize,
    path: &'a str,
}

impl<'a> GmlParser<'a> {
    fn next(&mut self) -> Option<(usize, GmlToken)> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn error(&self, line: usize, msg: impl Into<String>) -> Error {
        parse_error(self.path, line, msg)
    }

    /// Skip a scalar value or a balanced bracketed block.
    fn skip_value(&mut self, key_line: usize) -> Result<()> {
        match self.next() {
            Some((_, GmlToken::Open)) => {
                let mut depth = 1;
                while depth > 0 {
                    match self.next() {
                        Some((_, GmlToken::Open)) => depth += 1,
                        Some((_, GmlToken::Close)) => depth -= 1,
                        Some(_) => {}
                        None => return Err(self.error(key_line, "unbalanced brackets")),
                    }
                }
                Ok(())
            }
            Some(_) => Ok(()),
            None => Err(self.error(key_line, "missing value")),
        }
    }

    fn parse_int(&mut self, key: &str, line: usize) -> Result<i64> {
        match self.next() {
            Some((_, GmlToken::Int(v))) => Ok(v),
            Some((l, other)) => {
                Err(self.error(l, format!("'{key}' expects an integer, got {other:?}")))
            }
            None => Err(self.error(line, format!("'{key}' missing its value"))),
        }
    }

    fn parse_record<F: FnMut(&mut Self, &str, usize) -> Result<bool>>(
        &mut self,
        open_line: usize,
        mut field: F,
    ) -> Result<()> {
        match self.next() {
            Some((_, GmlToken::Open)) => {}
            _ => return Err(self.error(open_line, "expected '['")),
        }
        loop {
            match self.next() {
                Some((_, GmlToken::Close)) => return Ok(()),
                Some((line, GmlToken::Key(key))) => {
                    if !field(self, &key, line)? {
                        self.skip_value(line)?;
                    }
                }
                Some((line, other)) => {
                    return Err(self.error(line, format!("expected a key, got {other:?}")))
                }
                None => return Err(self.error(open_line, "unterminated record")),
            }
        }
    }
}

fn parse_gml_records(text: &str, path: &str) -> Result<(Vec<GmlNode>, Vec<GmlEdge>)> {
    let tokens = tokenize_gml(text, path)?;
    let mut parser = GmlParser {
        tokens,
        pos: 0,
        path,
    };

    let mut nodes: Vec<GmlNode> = Vec::new();
    let mut edges: Vec<GmlEdge> = Vec::new();
    let mut saw_graph = false;
    while let Some((line, token)) = parser.next() {
        match token {
            GmlToken::Key(key) if key == "graph" => {
                saw_graph = true;
                parser.parse_record(line, |p, key, key_line| match key {
                    "node" => {
                        let mut node = GmlNode {
                            line: key_line,
                            ..Default::default()
                        };
                        p.parse_record(key_line, |p, field, field_line| match field {
                            "id" => {
                                node.id = Some(p.parse_int("id", field_line)?);
                                Ok(true)
                            }
                            "label" => match p.next() {
                                Some((_, GmlToken::Str(s))) => {
                                    node.label = Some(s);
                                    Ok(true)
                                }
                                Some((_, GmlToken::Int(v))) => {
                                    node.label = Some(v.to_string());
                                    Ok(true)
                                }
                                Some((l, other)) => Err(
                                    p.error(l, format!("'label' expects a string, got {other:?}"))
                                ),
                                None => Err(p.error(field_line, "'label' missing its value")),
                            },
                            "value" => {
                                node.value = Some(p.parse_int("value", field_line)?);
                                Ok(true)
                            }
                            _ => Ok(false),
                        })?;
                        nodes.push(node.clone());
                        Ok(true)
                    }
                    "edge" => {
                        let mut edge = GmlEdge {
                            line: key_line,
                            ..Default::default()
                        };
                        p.parse_record(key_line, |p, field, field_line| match field {
                            "source" => {
                                edge.source = Some(p.parse_int("source", field_line)?);
                                Ok(true)
                            }
                            "target" => {
                                edge.target = Some(p.parse_int("target", field_line)?);
                                Ok(true)
                            }
                            _ => Ok(false),
                        })?;
                        edges.push(edge.clone());
                        Ok(true)
                    }
                    _ => Ok(false),
                })?;
            }
            GmlToken::Key(_) => {
                parser.skip_value(line)?;
            }
            other => return Err(parser.error(line, format!("unexpected {other:?}"))),
        }
    }
    if !saw_graph {
        return Err(parse_error(path, 1, "no 'graph' record found"));
    }
    if nodes.is_empty() {
        return Err(parse_error(path, 1, "graph has no nodes"));
    }
    Ok((nodes, edges))
}

/// Parse the GML subset `graph [ node [ id N label "s" value V ] edge [
/// source N target M ] ]`. Unknown keys are skipped. Repeated edges between
/// the same pair accumulate weight (multigraph collapse).
///
/// When `synthesize_conferences` is set, the integer `value` attribute of
/// each node is taken as a conference id: a second layer of conference nodes
/// is created with a membership edge per team, and nodes without a value
/// share a synthetic "independents" conference. Without the flag the result
/// is a single-layer graph of the recorded edges.
pub fn parse_gml(text: &str, path: &str, synthesize_conferences: bool) -> Result<LayeredGraph> {
    let (nodes, edges) = parse_gml_records(text, path)?;

    let mut graph = LayeredGraph::new(false);
    let teams = graph.add_layer("teams").expect("fresh graph");
    let mut ids = std::collections::HashMap::new();
    for node in &nodes {
        let id = node
            .id
            .ok_or_else(|| parse_error(path, node.line, "node record missing 'id'"))?;
        let label = node.label.clone().unwrap_or_else(|| format!("n{id}"));
        graph
            .add_node(teams, &label)
            .map_err(|e| parse_error(path, node.line, e.to_string()))?;
        if ids.insert(id, label).is_some() {
            return Err(parse_error(
                path,
                node.line,
                format!("duplicate node id {id}"),
            ));
        }
    }

    // accumulate duplicate games into edge weights
    let mut weights: Vec<((String, String), f64, usize)> = Vec::new();
    for edge in &edges {
        let source = edge
            .source
            .ok_or_else(|| parse_error(path, edge.line, "edge record missing 'source'"))?;
        let target = edge
            .target
            .ok_or_else(|| parse_error(path, edge.line, "edge record missing 'target'"))?;
        let a = ids
            .get(&source)
            .ok_or_else(|| parse_error(path, edge.line, format!("unknown node id {source}")))?
            .clone();
        let b = ids
            .get(&target)
            .ok_or_else(|| parse_error(path, edge.line, format!("unknown node id {target}")))?
            .clone();
        let key = if a <= b { (a, b) } else { (b, a) };
        match weights.iter_mut().find(|(k, _, _)| *k == key) {
            Some((_, w, _)) => *w += 1.0,
            None => weights.push((key, 1.0, edge.line)),
        }
    }
    for ((a, b), weight, line) in &weights {
        graph
            .add_edge(a, b, *weight)
            .map_err(|e| parse_error(path, *line, e.to_string()))?;
    }

    if synthesize_conferences {
        if nodes.iter().all(|n| n.value.is_none()) {
            return Err(parse_error(
                path,
                1,
                "conference synthesis requested but no node carries a 'value' attribute",
            ));
        }
        let conferences = graph.add_layer("conferences").expect("unique layer name");
        let mut conf_values: Vec<i64> = nodes.iter().filter_map(|n| n.value).collect();
        conf_values.sort_unstable();
        conf_values.dedup();
        for v in &conf_values {
            graph
                .add_node(conferences, &format!("conf{v}"))
                .map_err(|e| parse_error(path, 1, e.to_string()))?;
        }
        if nodes.iter().any(|n| n.value.is_none()) {
            graph
                .add_node(conferences, "independents")
                .map_err(|e| parse_error(path, 1, e.to_string()))?;
        }
        for node in &nodes {
            let team = ids[&node.id.expect("validated above")].clone();
            let conf = match node.value {
                Some(v) => format!("conf{v}"),
                None => "independents".to_string(),
            };
            graph
                .add_edge(&team, &conf, 1.0)
                .map_err(|e| parse_error(path, node.line, e.to_string()))?;
        }
    }
    Ok(graph)
}

pub fn load_gml(path: impl AsRef<Path>, synthesize_conferences: bool) -> Result<LayeredGraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_gml(&text, &path.display().to_string(), synthesize_conferences)
}

/// Node `value` attributes of a GML file as a ground-truth labeling
/// (team label to conference id). Nodes without a value share one group.
pub fn gml_value_labeling(text: &str, path: &str) -> Result<Labeling> {
    let (nodes, _) = parse_gml_records(text, path)?;
    let mut pairs: Vec<(String, usize)> = Vec::new();
    for node in &nodes {
        let id = node
            .id
            .ok_or_else(|| parse_error(path, node.line, "node record missing 'id'"))?;
        let label = node.label.clone().unwrap_or_else(|| format!("n{id}"));
        // group indices: value v maps to v + 1, missing value to 0
        let group = node.value.map_or(0usize, |v| (v + 1) as usize);
        pairs.push((label, group));
    }
    Labeling::from_pairs(pairs)
}

// ---------------------------------------------------------------------------
// partition and rank writers

/// `label<TAB>community`, label-sorted, with a header line.
pub fn partition_to_string(labeling: &Labeling) -> String {
    let mut out = String::from("label\tcommunity\n");
    for (label, community) in labeling.iter() {
        let _ = writeln!(out, "{label}\t{community}");
    }
    out
}

pub fn write_partition(labeling: &Labeling, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, partition_to_string(labeling)).map_err(|e| io_error(path, e))
}

pub fn parse_partition(text: &str, path: &str) -> Result<Labeling> {
    let mut pairs: Vec<(String, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line == "label\tcommunity" {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_error(
                path,
                lineno,
                format!(
                    "partition line needs 'label community', got {} fields",
                    fields.len()
                ),
            ));
        }
        let community = fields[1]
            .parse::<usize>()
            .map_err(|_| parse_error(path, lineno, format!("bad community id '{}'", fields[1])))?;
        pairs.push((fields[0].to_string(), community));
    }
    Labeling::from_pairs(pairs)
}

pub fn load_partition(path: impl AsRef<Path>) -> Result<Labeling> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_partition(&text, &path.display().to_string())
}

/// Plot-ready CSV `label,alpha,score,rank,community`; rows sorted by label,
/// then grid order.
pub fn ranks_csv_string(labels: &[String], scores: &ScoreTable, ranks: &RankTable) -> String {
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&i, &j| labels[i].cmp(&labels[j]));
    let mut out = String::from("label,alpha,score,rank,community\n");
    for &i in &order {
        for (k, &alpha) in scores.grid.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                labels[i],
                alpha,
                scores.scores[(i, k)],
                ranks.ranks[(i, k)],
                ranks.partition.assignment[i]
            );
        }
    }
    out
}

pub fn write_ranks_csv(
    labels: &[String],
    scores: &ScoreTable,
    ranks: &RankTable,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, ranks_csv_string(labels, scores, ranks)).map_err(|e| io_error(path, e))
}
