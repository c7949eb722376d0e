//! Path-based modularity and recursive spectral community detection.
//!
//! Connectivity between nodes is measured by pairwise b-centrality rather
//! than single edges: a good division groups nodes with many attenuated
//! paths between them. The null model preserves the total path count W and
//! each node's in/out path marginals, giving the expected value
//! `W_out_i * W_in_j / W` per pair. Modularity is the within-community
//! excess over that expectation, and the partition is found by recursive
//! two-way splits along the leading eigenvector of the (symmetrized)
//! modularity matrix, with the standard subgraph correction at each level.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use crate::centrality::{bonacich_exact, bonacich_series, CentralityMatrix, CentralityParams};
use crate::eigen::{self, EIGEN_MAX_ITERATIONS, EIGEN_TOLERANCE};
use crate::error::{Error, Result};
use crate::graph::NModeMatrix;

/// Eigenvalues at or below this threshold signal an indivisible community.
pub const INDIVISIBLE_EIGENVALUE: f64 = 1e-12;

/// Pairwise centrality rounded to nearest integers (ties away from zero).
#[derive(Debug, Clone, PartialEq)]
pub struct RoundedCentrality {
    values: DMatrix<f64>,
}

impl RoundedCentrality {
    /// Entries are exact integers stored as f64.
    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn dimension(&self) -> usize {
        self.values.nrows()
    }
}

/// Round every centrality value to the nearest integer, ties away from zero.
pub fn round_centrality(c: &CentralityMatrix) -> RoundedCentrality {
    RoundedCentrality {
        values: c.values().map(f64::round),
    }
}

/// Random-multigraph expectation preserving the total path count and the
/// per-node in/out path marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct NullModel {
    w_total: f64,
    w_out: DVector<f64>,
    w_in: DVector<f64>,
    expected: DMatrix<f64>,
}

impl NullModel {
    pub fn total(&self) -> f64 {
        self.w_total
    }

    pub fn out_marginals(&self) -> &DVector<f64> {
        &self.w_out
    }

    pub fn in_marginals(&self) -> &DVector<f64> {
        &self.w_in
    }

    /// Expected path counts, `expected[(i, j)] = w_out[i] * w_in[j] / W`.
    pub fn expected(&self) -> &DMatrix<f64> {
        &self.expected
    }
}

fn null_model_from(values: &DMatrix<f64>) -> Result<NullModel> {
    let n = values.nrows();
    let w_out = DVector::from_fn(n, |i, _| values.row(i).sum());
    let w_in = DVector::from_fn(n, |j, _| values.column(j).sum());
    let w_total: f64 = w_out.sum();
    if w_total <= 0.0 {
        return Err(Error::DegenerateNullModel);
    }
    let expected = DMatrix::from_fn(n, n, |i, j| w_out[i] * w_in[j] / w_total);
    Ok(NullModel {
        w_total,
        w_out,
        w_in,
        expected,
    })
}

/// Null model of a rounded path matrix. Fails when the total is zero
/// (after rounding nothing is left, so modularity is undefined).
pub fn build_null_model(r: &RoundedCentrality) -> Result<NullModel> {
    null_model_from(r.values())
}

/// A community index per node plus the achieved modularity (raw sum).
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub assignment: Vec<usize>,
    pub q: f64,
}

impl Partition {
    /// Every node in one community, modularity zero by definition.
    pub fn single(n: usize) -> Self {
        Partition {
            assignment: vec![0; n],
            q: 0.0,
        }
    }

    pub fn from_assignment(assignment: Vec<usize>) -> Self {
        Partition { assignment, q: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn community_count(&self) -> usize {
        self.assignment.iter().copied().max().map_or(0, |m| m + 1)
    }

    pub fn members(&self, community: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&i| self.assignment[i] == community)
            .collect()
    }

    /// Renumber communities densely, ordered by smallest member index.
    pub fn normalized(&self) -> Partition {
        let mut first_seen: Vec<(usize, usize)> = Vec::new();
        for (i, &c) in self.assignment.iter().enumerate() {
            if !first_seen.iter().any(|&(old, _)| old == c) {
                first_seen.push((c, i));
            }
        }
        first_seen.sort_by_key(|&(_, min_idx)| min_idx);
        let assignment = self
            .assignment
            .iter()
            .map(|&c| first_seen.iter().position(|&(old, _)| old == c).unwrap())
            .collect();
        Partition {
            assignment,
            q: self.q,
        }
    }
}

/// Modularity of a partition against a path matrix and its null model.
///
/// Computed as `sum_g [ W * S(g) - Wout(g) * Win(g) ] / W` where S(g) sums
/// the path matrix over ordered pairs inside community g; the single
/// division keeps the all-in-one-community case exactly zero.
fn modularity_values(values: &DMatrix<f64>, nm: &NullModel, assignment: &[usize]) -> f64 {
    let k = assignment.iter().copied().max().map_or(0, |m| m + 1);
    let mut inside = vec![0.0f64; k];
    let mut out_marg = vec![0.0f64; k];
    let mut in_marg = vec![0.0f64; k];
    for (i, &ci) in assignment.iter().enumerate() {
        out_marg[ci] += nm.w_out[i];
        in_marg[ci] += nm.w_in[i];
        for (j, &cj) in assignment.iter().enumerate() {
            if ci == cj {
                inside[ci] += values[(i, j)];
            }
        }
    }
    let w = nm.w_total;
    let numerator: f64 = (0..k)
        .map(|c| w * inside[c] - out_marg[c] * in_marg[c])
        .sum();
    numerator / w
}

/// Generalized modularity `Q = sum_ij (R_ij - expected_ij) delta(s_i, s_j)`.
pub fn modularity(r: &RoundedCentrality, nm: &NullModel, p: &Partition) -> f64 {
    modularity_values(r.values(), nm, &p.assignment)
}

/// `B = R - expected`, symmetrized as `(B + B^T) / 2`.
pub fn modularity_matrix(r: &RoundedCentrality, nm: &NullModel) -> DMatrix<f64> {
    modularity_matrix_values(r.values(), nm)
}

fn modularity_matrix_values(values: &DMatrix<f64>, nm: &NullModel) -> DMatrix<f64> {
    let b = values - nm.expected();
    let bt = b.transpose();
    (b + bt).scale(0.5)
}

/// Outcome of one spectral bisection attempt.
#[derive(Debug, Clone, PartialEq)]
pub enum Bisection {
    /// No positive leading eigenvalue: no improving two-way split exists.
    Indivisible { eigenvalue: f64 },
    /// Sign split along the leading eigenvector; `positive[i]` tells which
    /// side node i falls on (entries within 1e-12 of zero count as positive).
    Split {
        positive: Vec<bool>,
        eigenvalue: f64,
    },
}

/// Leading-eigenvector split of a symmetric (sub)matrix.
pub fn spectral_bisect(b_sub: &DMatrix<f64>) -> Result<Bisection> {
    let shift = eigen::infinity_norm(b_sub);
    let pair = eigen::leading_eigenpair(b_sub, shift, EIGEN_TOLERANCE, EIGEN_MAX_ITERATIONS)?;
    if pair.value <= INDIVISIBLE_EIGENVALUE {
        return Ok(Bisection::Indivisible {
            eigenvalue: pair.value,
        });
    }
    let positive = pair.vector.iter().map(|&v| v >= -1e-12).collect();
    Ok(Bisection::Split {
        positive,
        eigenvalue: pair.value,
    })
}

/// One accepted recursive split.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitRecord {
    pub eigenvalue: f64,
    pub delta_q: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommunityResult {
    pub partition: Partition,
    pub splits: Vec<SplitRecord>,
    pub alpha: f64,
    /// Raw modularity divided by the total path count W.
    pub q_normalized: f64,
}

/// How the pairwise centrality feeding community detection is computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CentralityMethod {
    /// Linear solve of the closed form; requires alpha below the bound.
    Exact,
    /// Truncated path series; any alpha, coarser path counts.
    Series { terms: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectOptions {
    pub method: CentralityMethod,
    /// Round centrality values to integers before building the null model.
    pub rounding: bool,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions {
            method: CentralityMethod::Exact,
            rounding: true,
        }
    }
}

/// Full pipeline with default options (exact centrality, rounding on).
pub fn detect_communities(a: &NModeMatrix, alpha: f64, beta: f64) -> Result<CommunityResult> {
    detect_communities_with(a, alpha, beta, DetectOptions::default())
}

pub fn detect_communities_with(
    a: &NModeMatrix,
    alpha: f64,
    beta: f64,
    options: DetectOptions,
) -> Result<CommunityResult> {
    let params = CentralityParams::new(alpha, beta)?;
    let c = match options.method {
        CentralityMethod::Exact => bonacich_exact(a, params)?,
        CentralityMethod::Series { terms } => bonacich_series(a, params, terms)?,
    };
    detect_from_centrality(&c, options.rounding)
}

/// Community detection from an already-computed centrality matrix.
pub fn detect_from_centrality(c: &CentralityMatrix, rounding: bool) -> Result<CommunityResult> {
    let values = if rounding {
        c.values().map(f64::round)
    } else {
        c.values().clone()
    };
    let nm = null_model_from(&values)?;
    let b = modularity_matrix_values(&values, &nm);
    let n = values.nrows();

    let mut assignment = vec![0usize; n];
    let mut next_community = 1usize;
    let mut splits = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    queue.push_back(0);

    while let Some(target) = queue.pop_front() {
        let members: Vec<usize> = (0..n).filter(|&i| assignment[i] == target).collect();
        if members.len() < 2 {
            continue;
        }
        let sub = subgraph_modularity_matrix(&b, &members);
        match spectral_bisect(&sub)? {
            Bisection::Indivisible { .. } => continue,
            Bisection::Split {
                positive,
                eigenvalue,
            } => {
                let negative: Vec<usize> = members
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| !positive[k])
                    .map(|(_, &i)| i)
                    .collect();
                if negative.is_empty() || negative.len() == members.len() {
                    continue;
                }
                let q_before = modularity_values(&values, &nm, &assignment);
                let mut candidate = assignment.clone();
                for &i in &negative {
                    candidate[i] = next_community;
                }
                let q_after = modularity_values(&values, &nm, &candidate);
                let delta_q = q_after - q_before;
                if delta_q > 0.0 {
                    assignment = candidate;
                    splits.push(SplitRecord {
                        eigenvalue,
                        delta_q,
                    });
                    queue.push_back(target);
                    queue.push_back(next_community);
                    next_community += 1;
                }
            }
        }
    }

    let q = modularity_values(&values, &nm, &assignment);
    let partition = Partition { assignment, q }.normalized();
    Ok(CommunityResult {
        q_normalized: q / nm.w_total,
        partition,
        splits,
        alpha: c.params().alpha,
    })
}

/// Newman's subgraph correction: restrict B to `members` and subtract each
/// row's within-group sum from the diagonal, so rows again sum to zero.
fn subgraph_modularity_matrix(b: &DMatrix<f64>, members: &[usize]) -> DMatrix<f64> {
    let k = members.len();
    let mut sub = DMatrix::from_fn(k, k, |i, j| b[(members[i], members[j])]);
    for i in 0..k {
        let row_sum: f64 = sub.row(i).sum();
        sub[(i, i)] -= row_sum;
    }
    sub
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::bonacich_exact;
    use crate::graph::{build_nmode, LayeredGraph};

    fn matrix_from(values: DMatrix<f64>) -> RoundedCentrality {
        RoundedCentrality { values }
    }

    fn planted_two_blocks() -> NModeMatrix {
        // two dense 4-cliques joined by a single edge
        let mut g = LayeredGraph::new(false);
        let l = g.add_layer("nodes").unwrap();
        let labels: Vec<String> = (0..8).map(|i| format!("v{i}")).collect();
        for label in &labels {
            g.add_node(l, label).unwrap();
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                g.add_edge(&labels[i], &labels[j], 1.0).unwrap();
                g.add_edge(&labels[i + 4], &labels[j + 4], 1.0).unwrap();
            }
        }
        g.add_edge(&labels[3], &labels[4], 1.0).unwrap();
        build_nmode(&g).unwrap()
    }

    #[test]
    fn rounding_ties_go_away_from_zero() {
        let c = CentralityMatrix::from_parts(
            DMatrix::from_row_slice(2, 2, &[0.49, 0.5, 1.5, 2.49]),
            CentralityParams::new(0.0, 1.0).unwrap(),
        );
        let r = round_centrality(&c);
        assert_eq!(r.values()[(0, 0)], 0.0);
        assert_eq!(r.values()[(0, 1)], 1.0);
        assert_eq!(r.values()[(1, 0)], 2.0);
        assert_eq!(r.values()[(1, 1)], 2.0);
    }

    #[test]
    fn null_model_single_directed_edge() {
        let r = matrix_from(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]));
        let nm = build_null_model(&r).unwrap();
        assert_eq!(nm.total(), 1.0);
        assert_eq!(nm.expected()[(0, 1)], 1.0);
        assert_eq!(nm.expected()[(1, 0)], 0.0);
        assert_eq!(nm.expected()[(0, 0)], 0.0);
    }

    #[test]
    fn null_model_marginals_match_row_and_column_sums() {
        let r = matrix_from(DMatrix::from_row_slice(
            3,
            3,
            &[0.0, 2.0, 1.0, 1.0, 0.0, 3.0, 2.0, 2.0, 0.0],
        ));
        let nm = build_null_model(&r).unwrap();
        for i in 0..3 {
            let row: f64 = nm.expected().row(i).sum();
            let col: f64 = nm.expected().column(i).sum();
            assert!((row - nm.out_marginals()[i]).abs() < 1e-12);
            assert!((col - nm.in_marginals()[i]).abs() < 1e-12);
        }
        let total: f64 = nm.expected().iter().sum();
        assert!((total - nm.total()).abs() < 1e-12);
    }

    #[test]
    fn null_model_symmetric_input_symmetric_expectation() {
        let r = matrix_from(DMatrix::from_row_slice(2, 2, &[0.0, 3.0, 3.0, 0.0]));
        let nm = build_null_model(&r).unwrap();
        assert_eq!(nm.expected()[(0, 1)], nm.expected()[(1, 0)]);
    }

    #[test]
    fn zero_total_is_degenerate() {
        let r = matrix_from(DMatrix::zeros(3, 3));
        assert!(matches!(
            build_null_model(&r),
            Err(Error::DegenerateNullModel)
        ));
    }

    #[test]
    fn single_community_modularity_is_exactly_zero() {
        let r = matrix_from(DMatrix::from_row_slice(
            3,
            3,
            &[0.0, 5.0, 1.0, 5.0, 0.0, 2.0, 1.0, 2.0, 0.0],
        ));
        let nm = build_null_model(&r).unwrap();
        let q = modularity(&r, &nm, &Partition::single(3));
        assert_eq!(q, 0.0);
    }

    #[test]
    fn singleton_communities_modularity_is_nonpositive() {
        let r = matrix_from(DMatrix::from_row_slice(
            3,
            3,
            &[0.0, 5.0, 1.0, 5.0, 0.0, 2.0, 1.0, 2.0, 0.0],
        ));
        let nm = build_null_model(&r).unwrap();
        let q = modularity(&r, &nm, &Partition::from_assignment(vec![0, 1, 2]));
        assert!(q <= 0.0);
    }

    #[test]
    fn modularity_matrix_rows_and_columns_sum_to_zero() {
        let r = matrix_from(DMatrix::from_row_slice(
            3,
            3,
            &[0.0, 2.0, 1.0, 1.0, 0.0, 3.0, 2.0, 2.0, 0.0],
        ));
        let nm = build_null_model(&r).unwrap();
        let b = modularity_matrix(&r, &nm);
        for i in 0..3 {
            assert!(b.row(i).sum().abs() < 1e-12);
            assert!(b.column(i).sum().abs() < 1e-12);
        }
        // uniform vector is an eigenvector with eigenvalue zero
        let ones = DVector::from_element(3, 1.0);
        assert!((&b * &ones).norm() < 1e-12);
    }

    #[test]
    fn symmetrization_is_a_no_op_for_symmetric_input() {
        let r = matrix_from(DMatrix::from_row_slice(2, 2, &[0.0, 4.0, 4.0, 0.0]));
        let nm = build_null_model(&r).unwrap();
        let b = modularity_matrix(&r, &nm);
        let raw = r.values() - nm.expected();
        assert_eq!(b, raw);
    }

    #[test]
    fn bisect_recovers_planted_blocks() {
        let a = planted_two_blocks();
        let c = bonacich_exact(&a, CentralityParams::new(0.0, 1.0).unwrap()).unwrap();
        let r = round_centrality(&c);
        let nm = build_null_model(&r).unwrap();
        let b = modularity_matrix(&r, &nm);
        match spectral_bisect(&b).unwrap() {
            Bisection::Split { positive, .. } => {
                assert!(positive[0..4].iter().all(|&s| s == positive[0]));
                assert!(positive[4..8].iter().all(|&s| s == positive[4]));
                assert_ne!(positive[0], positive[4]);
            }
            other => panic!("expected a split, got {other:?}"),
        }
    }

    #[test]
    fn negative_definite_matrix_is_indivisible() {
        let b = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, -2.0]);
        assert!(matches!(
            spectral_bisect(&b).unwrap(),
            Bisection::Indivisible { .. }
        ));
    }

    #[test]
    fn detect_splits_planted_blocks_with_positive_delta_q() {
        let a = planted_two_blocks();
        let result = detect_communities(&a, 0.1, 1.0).unwrap();
        assert_eq!(result.partition.community_count(), 2);
        assert!(result.partition.q > 0.0);
        assert!(!result.splits.is_empty());
        for split in &result.splits {
            assert!(split.delta_q > 0.0);
            assert!(split.eigenvalue > INDIVISIBLE_EIGENVALUE);
        }
        let first = &result.partition.assignment[..4];
        let second = &result.partition.assignment[4..];
        assert!(first.iter().all(|&c| c == first[0]));
        assert!(second.iter().all(|&c| c == second[0]));
        assert_ne!(first[0], second[0]);
    }

    #[test]
    fn detect_beta_rescaling_keeps_partition() {
        let a = planted_two_blocks();
        let r1 = detect_communities(&a, 0.0, 1.0).unwrap();
        let r5 = detect_communities(&a, 0.0, 5.0).unwrap();
        assert_eq!(r1.partition.assignment, r5.partition.assignment);
    }

    #[test]
    fn detect_unrounded_beta_invariance() {
        let a = planted_two_blocks();
        let opts = DetectOptions {
            method: CentralityMethod::Exact,
            rounding: false,
        };
        let r1 = detect_communities_with(&a, 0.05, 1.0, opts).unwrap();
        let r2 = detect_communities_with(&a, 0.05, 2.0, opts).unwrap();
        assert_eq!(r1.partition.assignment, r2.partition.assignment);
    }

    #[test]
    fn partition_normalization_orders_by_first_member() {
        let p = Partition::from_assignment(vec![2, 2, 0, 0, 1]).normalized();
        assert_eq!(p.assignment, vec![0, 0, 1, 1, 2]);
    }
}
