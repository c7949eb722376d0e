//! Layered graphs and their N-mode adjacency matrices.
//!
//! A heterogeneous network is modelled as a [`LayeredGraph`]: nodes are
//! partitioned into named layers (one per entity type) and edges may run
//! within a layer or between layers. [`build_nmode`] lowers the graph to a
//! single square adjacency matrix over all nodes, blocked by layer, which is
//! what the centrality and community machinery operates on.

use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// One entity type: a named, contiguous block of node indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    pub name: String,
    pub size: usize,
    /// Starting row/column in the N-mode matrix; cumulative over layer sizes.
    pub offset: usize,
}

/// A node addressed by layer and position within that layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeRef {
    pub layer: usize,
    pub local: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub a: NodeRef,
    pub b: NodeRef,
    pub weight: f64,
}

/// Typed nodes partitioned into layers plus intra- and inter-layer edges.
///
/// Node labels are unique across the whole graph so that edge lists and
/// partition files can refer to nodes by label alone. Node order is
/// layer-major and insertion-ordered within a layer; that order defines the
/// row/column order of every derived matrix.
#[derive(Debug, Clone, Default)]
pub struct LayeredGraph {
    layer_names: Vec<String>,
    labels: Vec<Vec<String>>,
    index: HashMap<String, NodeRef>,
    edges: Vec<Edge>,
    directed: bool,
}

impl LayeredGraph {
    pub fn new(directed: bool) -> Self {
        LayeredGraph {
            directed,
            ..Default::default()
        }
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    /// Add a layer; returns its index. Layer names are unique.
    pub fn add_layer(&mut self, name: &str) -> Result<usize> {
        if self.layer_names.iter().any(|n| n == name) {
            return Err(Error::DuplicateLabel {
                label: name.to_string(),
            });
        }
        self.layer_names.push(name.to_string());
        self.labels.push(Vec::new());
        Ok(self.layer_names.len() - 1)
    }

    /// Look up a layer by name, creating it if missing.
    pub fn ensure_layer(&mut self, name: &str) -> usize {
        match self.layer_names.iter().position(|n| n == name) {
            Some(i) => i,
            None => {
                self.layer_names.push(name.to_string());
                self.labels.push(Vec::new());
                self.layer_names.len() - 1
            }
        }
    }

    pub fn add_node(&mut self, layer: usize, label: &str) -> Result<NodeRef> {
        if layer >= self.layer_names.len() {
            return Err(Error::UnknownLayer {
                index: layer,
                count: self.layer_names.len(),
            });
        }
        if self.index.contains_key(label) {
            return Err(Error::DuplicateLabel {
                label: label.to_string(),
            });
        }
        let node = NodeRef {
            layer,
            local: self.labels[layer].len(),
        };
        self.labels[layer].push(label.to_string());
        self.index.insert(label.to_string(), node);
        Ok(node)
    }

    pub fn resolve(&self, label: &str) -> Option<NodeRef> {
        self.index.get(label).copied()
    }

    pub fn label_of(&self, node: NodeRef) -> &str {
        &self.labels[node.layer][node.local]
    }

    /// Add an edge by endpoint labels. Duplicate edges are rejected rather
    /// than summed; for undirected graphs the pair is duplicate regardless of
    /// endpoint order.
    pub fn add_edge(&mut self, a: &str, b: &str, weight: f64) -> Result<()> {
        let na = self.resolve(a).ok_or_else(|| Error::UnknownLabel {
            label: a.to_string(),
        })?;
        let nb = self.resolve(b).ok_or_else(|| Error::UnknownLabel {
            label: b.to_string(),
        })?;
        self.add_edge_refs(na, nb, weight)
    }

    pub fn add_edge_refs(&mut self, a: NodeRef, b: NodeRef, weight: f64) -> Result<()> {
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::InvalidWeight { value: weight });
        }
        let dup = self
            .edges
            .iter()
            .any(|e| (e.a == a && e.b == b) || (!self.directed && e.a == b && e.b == a));
        if dup {
            return Err(Error::DuplicateEdge {
                a: self.label_of(a).to_string(),
                b: self.label_of(b).to_string(),
            });
        }
        self.edges.push(Edge { a, b, weight });
        Ok(())
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn layer_count(&self) -> usize {
        self.layer_names.len()
    }

    pub fn layer_name(&self, layer: usize) -> &str {
        &self.layer_names[layer]
    }

    pub fn layer_index(&self, name: &str) -> Option<usize> {
        self.layer_names.iter().position(|n| n == name)
    }

    pub fn layer_len(&self, layer: usize) -> usize {
        self.labels[layer].len()
    }

    pub fn node_count(&self) -> usize {
        self.labels.iter().map(Vec::len).sum()
    }

    /// Layers with cumulative offsets, in declaration order.
    pub fn layers(&self) -> Vec<Layer> {
        let mut out = Vec::with_capacity(self.layer_names.len());
        let mut offset = 0;
        for (name, labels) in self.layer_names.iter().zip(&self.labels) {
            out.push(Layer {
                name: name.clone(),
                size: labels.len(),
                offset,
            });
            offset += labels.len();
        }
        out
    }

    /// Node labels in matrix (layer-major) order.
    pub fn labels_in_order(&self) -> Vec<String> {
        self.labels.iter().flatten().cloned().collect()
    }

    /// Labels of one layer, in insertion order.
    pub fn layer_labels(&self, layer: usize) -> &[String] {
        &self.labels[layer]
    }

    pub fn global_index(&self, node: NodeRef) -> usize {
        self.labels[..node.layer]
            .iter()
            .map(Vec::len)
            .sum::<usize>()
            + node.local
    }
}

/// Square adjacency over all nodes of a layered graph, blocked by layer.
#[derive(Debug, Clone, PartialEq)]
pub struct NModeMatrix {
    values: DMatrix<f64>,
    layers: Vec<Layer>,
    labels: Vec<String>,
}

impl NModeMatrix {
    pub fn from_parts(values: DMatrix<f64>, layers: Vec<Layer>, labels: Vec<String>) -> Self {
        debug_assert_eq!(values.nrows(), values.ncols());
        debug_assert_eq!(values.nrows(), labels.len());
        debug_assert_eq!(values.nrows(), layers.iter().map(|l| l.size).sum::<usize>());
        NModeMatrix {
            values,
            layers,
            labels,
        }
    }

    pub fn dimension(&self) -> usize {
        self.values.nrows()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// The (k, l) block as an owned matrix.
    pub fn block(&self, k: usize, l: usize) -> DMatrix<f64> {
        let (rk, rl) = (&self.layers[k], &self.layers[l]);
        self.values
            .view((rk.offset, rl.offset), (rk.size, rl.size))
            .into_owned()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.dimension();
        for i in 0..n {
            for j in (i + 1)..n {
                if (self.values[(i, j)] - self.values[(j, i)]).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Layer index owning global node index `i`.
    pub fn layer_of(&self, i: usize) -> usize {
        self.layers
            .iter()
            .position(|l| i >= l.offset && i < l.offset + l.size)
            .expect("index within dimension")
    }
}

/// Materialize the adjacency matrix of a layered graph.
///
/// Entry (i, j) is the weight of the edge from global node i to j, zero if
/// absent. Undirected graphs produce a symmetric matrix.
pub fn build_nmode(graph: &LayeredGraph) -> Result<NModeMatrix> {
    let layers = graph.layers();
    let n = graph.node_count();
    let mut values = DMatrix::zeros(n, n);
    for edge in graph.edges() {
        let i = graph.global_index(edge.a);
        let j = graph.global_index(edge.b);
        values[(i, j)] = edge.weight;
        if !graph.directed() {
            values[(j, i)] = edge.weight;
        }
    }
    Ok(NModeMatrix::from_parts(
        values,
        layers,
        graph.labels_in_order(),
    ))
}

/// Per-layer and per-layer-pair scaling factors for the blocks of an
/// N-mode matrix. All weights default to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerWeights {
    intra: Vec<f64>,
    inter: Vec<Vec<f64>>,
}

impl LayerWeights {
    pub fn uniform(layer_count: usize) -> Self {
        LayerWeights {
            intra: vec![1.0; layer_count],
            inter: vec![vec![1.0; layer_count]; layer_count],
        }
    }

    pub fn layer_count(&self) -> usize {
        self.intra.len()
    }

    pub fn set_intra(&mut self, layer: usize, weight: f64) -> Result<&mut Self> {
        check_weight(weight)?;
        if layer >= self.intra.len() {
            return Err(Error::UnknownLayer {
                index: layer,
                count: self.intra.len(),
            });
        }
        self.intra[layer] = weight;
        Ok(self)
    }

    /// Weight for the ordered pair (from, to), from != to.
    pub fn set_inter(&mut self, from: usize, to: usize, weight: f64) -> Result<&mut Self> {
        check_weight(weight)?;
        let n = self.intra.len();
        if from >= n || to >= n {
            return Err(Error::UnknownLayer {
                index: from.max(to),
                count: n,
            });
        }
        self.inter[from][to] = weight;
        Ok(self)
    }

    pub fn intra(&self, layer: usize) -> f64 {
        self.intra[layer]
    }

    pub fn inter(&self, from: usize, to: usize) -> f64 {
        self.inter[from][to]
    }
}

fn check_weight(weight: f64) -> Result<()> {
    if !weight.is_finite() || weight < 0.0 {
        return Err(Error::InvalidWeight { value: weight });
    }
    Ok(())
}

/// Scale each block of `matrix` by its layer weight.
pub fn apply_layer_weights(matrix: &NModeMatrix, weights: &LayerWeights) -> Result<NModeMatrix> {
    if weights.layer_count() != matrix.layers().len() {
        return Err(Error::WeightShapeMismatch {
            got: weights.layer_count(),
            expected: matrix.layers().len(),
        });
    }
    for k in 0..weights.layer_count() {
        check_weight(weights.intra(k))?;
        for l in 0..weights.layer_count() {
            if k != l {
                check_weight(weights.inter(k, l))?;
            }
        }
    }
    let mut values = matrix.values().clone();
    let layers = matrix.layers().to_vec();
    for (k, lk) in layers.iter().enumerate() {
        for (l, ll) in layers.iter().enumerate() {
            let w = if k == l {
                weights.intra(k)
            } else {
                weights.inter(k, l)
            };
            for i in lk.offset..lk.offset + lk.size {
                for j in ll.offset..ll.offset + ll.size {
                    values[(i, j)] *= w;
                }
            }
        }
    }
    Ok(NModeMatrix::from_parts(
        values,
        layers,
        matrix.labels().to_vec(),
    ))
}

fn projection_counts(
    graph: &LayeredGraph,
    target: usize,
    via: usize,
) -> Result<(Vec<String>, DMatrix<f64>)> {
    let count = graph.layer_count();
    if target >= count || via >= count {
        return Err(Error::UnknownLayer {
            index: target.max(via),
            count,
        });
    }
    if target == via {
        return Err(Error::ProjectionSameLayer);
    }
    let n = graph.layer_len(target);
    if n == 0 {
        return Err(Error::EmptyLayer {
            name: graph.layer_name(target).to_string(),
        });
    }
    let m = graph.layer_len(via);
    // neighborhood indicator of each target node in the via layer,
    // ignoring edge direction
    let mut hood = vec![vec![false; m]; n];
    for e in graph.edges() {
        if e.weight == 0.0 {
            continue;
        }
        if e.a.layer == target && e.b.layer == via {
            hood[e.a.local][e.b.local] = true;
        }
        if e.b.layer == target && e.a.layer == via {
            hood[e.b.local][e.a.local] = true;
        }
    }
    let mut counts = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let shared = (0..m).filter(|&k| hood[i][k] && hood[j][k]).count();
            counts[(i, j)] = shared as f64;
            counts[(j, i)] = shared as f64;
        }
    }
    Ok((graph.layer_labels(target).to_vec(), counts))
}

fn projection_matrix(graph: &LayeredGraph, target: usize, counts: DMatrix<f64>) -> NModeMatrix {
    let layer = Layer {
        name: graph.layer_name(target).to_string(),
        size: counts.nrows(),
        offset: 0,
    };
    NModeMatrix::from_parts(counts, vec![layer], graph.layer_labels(target).to_vec())
}

/// Collapse a two-layer relation onto the target layer: entry (i, j) is 1
/// iff distinct target nodes i and j share at least one neighbor in the via
/// layer. The diagonal is zero.
pub fn project_unipartite_binary(
    graph: &LayeredGraph,
    target: usize,
    via: usize,
) -> Result<NModeMatrix> {
    let (_, mut counts) = projection_counts(graph, target, via)?;
    counts.apply(|v| *v = if *v >= 1.0 { 1.0 } else { 0.0 });
    Ok(projection_matrix(graph, target, counts))
}

/// As the binary projection, but entry (i, j) counts the shared via-layer
/// neighbors.
pub fn project_unipartite_weighted(
    graph: &LayeredGraph,
    target: usize,
    via: usize,
) -> Result<NModeMatrix> {
    let (_, counts) = projection_counts(graph, target, via)?;
    Ok(projection_matrix(graph, target, counts))
}
