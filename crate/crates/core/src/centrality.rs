//! Bonacich (b-)centrality over N-mode matrices.
//!
//! The pairwise centrality C(alpha, beta) counts attenuated paths between
//! every node pair: beta weighs the direct link, alpha each further hop.
//! Summing the geometric series gives the closed form
//! `C = beta A (I - alpha A)^-1`, valid while `alpha < 1 / lambda_max(A)`.
//! With alpha = beta the measure reduces to the Katz score, and at alpha = 0
//! only direct edges count.

use nalgebra::{DMatrix, DVector};

use crate::eigen::{self, EIGEN_MAX_ITERATIONS, EIGEN_TOLERANCE};
use crate::error::{Error, Result};
use crate::graph::NModeMatrix;

/// Relative safety margin kept between alpha and the divergence bound.
pub const ALPHA_MARGIN: f64 = 1e-9;

/// Attenuation parameters: `alpha` for indirect hops, `beta` for direct
/// links. `beta` is a global prefactor; it cancels out of rank orders,
/// partitions and modularity signs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralityParams {
    pub alpha: f64,
    pub beta: f64,
}

impl CentralityParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidParams {
                reason: format!("alpha must be a nonnegative real, got {alpha}"),
            });
        }
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::InvalidParams {
                reason: format!("beta must be a positive real, got {beta}"),
            });
        }
        Ok(CentralityParams { alpha, beta })
    }
}

/// Outcome of the dominant-eigenvalue estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralInfo {
    pub lambda_max: f64,
    pub iterations: usize,
    pub residual: f64,
}

/// Upper bound on admissible alpha.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaxAlpha {
    Bounded(f64),
    /// Zero spectrum: the path series converges for every alpha.
    Unbounded,
}

impl MaxAlpha {
    pub fn admits(&self, alpha: f64) -> bool {
        match *self {
            MaxAlpha::Unbounded => true,
            MaxAlpha::Bounded(max) => alpha < max * (1.0 - ALPHA_MARGIN),
        }
    }

    pub fn bound(&self) -> Option<f64> {
        match *self {
            MaxAlpha::Bounded(b) => Some(b),
            MaxAlpha::Unbounded => None,
        }
    }
}

/// Dense pairwise centrality values together with the parameters used.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityMatrix {
    values: DMatrix<f64>,
    params: CentralityParams,
}

impl CentralityMatrix {
    #[cfg(test)]
    pub(crate) fn from_parts(values: DMatrix<f64>, params: CentralityParams) -> Self {
        CentralityMatrix { values, params }
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn params(&self) -> CentralityParams {
        self.params
    }

    pub fn dimension(&self) -> usize {
        self.values.nrows()
    }
}

/// Estimate the spectral radius of `a` with deterministic power iteration
/// at the default tolerance (1e-10, at most 100000 iterations).
///
/// For a nonnegative adjacency matrix the spectral radius equals the
/// algebraically largest eigenvalue, so the shifted iteration from
/// [`crate::eigen`] applies directly. A zero matrix reports a zero spectrum.
pub fn spectral_radius(a: &NModeMatrix) -> Result<SpectralInfo> {
    spectral_radius_with(a, EIGEN_TOLERANCE, EIGEN_MAX_ITERATIONS)
}

pub fn spectral_radius_with(
    a: &NModeMatrix,
    tolerance: f64,
    max_iterations: usize,
) -> Result<SpectralInfo> {
    let m = a.values();
    if m.iter().all(|&v| v == 0.0) {
        return Ok(SpectralInfo {
            lambda_max: 0.0,
            iterations: 0,
            residual: 0.0,
        });
    }
    let shift = eigen::infinity_norm(m);
    let pair = eigen::leading_eigenpair(m, shift, tolerance, max_iterations)?;
    Ok(SpectralInfo {
        lambda_max: pair.value,
        iterations: pair.iterations,
        residual: pair.residual,
    })
}

/// Reciprocal of the spectral radius; callers must stay strictly below it.
pub fn max_alpha(a: &NModeMatrix) -> Result<MaxAlpha> {
    let info = spectral_radius(a)?;
    if info.lambda_max <= 0.0 {
        Ok(MaxAlpha::Unbounded)
    } else {
        Ok(MaxAlpha::Bounded(1.0 / info.lambda_max))
    }
}

fn check_alpha(a: &NModeMatrix, alpha: f64) -> Result<()> {
    let bound = max_alpha(a)?;
    if !bound.admits(alpha) {
        return Err(Error::AlphaBound {
            alpha,
            max_alpha: bound.bound().unwrap_or(f64::INFINITY),
        });
    }
    Ok(())
}

/// Closed-form centrality via a linear solve.
///
/// Solves `(I - alpha A)^T X = beta A^T` with one LU factorization and
/// returns `C = X^T`, which satisfies `C = beta A + alpha A C` up to solver
/// round-off.
pub fn bonacich_exact(a: &NModeMatrix, params: CentralityParams) -> Result<CentralityMatrix> {
    check_alpha(a, params.alpha)?;
    let m = a.values();
    let n = m.nrows();
    let system = DMatrix::identity(n, n) - m.scale(params.alpha);
    let rhs = m.transpose().scale(params.beta);
    let solution = system
        .transpose()
        .lu()
        .solve(&rhs)
        .ok_or(Error::SingularSystem)?;
    Ok(CentralityMatrix {
        values: solution.transpose(),
        params,
    })
}

/// Truncated path series: `sum_{k=0}^{terms-1} beta alpha^k A^{k+1}`.
///
/// Finite sums converge for any alpha, so no bound check applies; three
/// terms is the conventional approximation for matrices too large to solve
/// exactly.
pub fn bonacich_series(
    a: &NModeMatrix,
    params: CentralityParams,
    terms: usize,
) -> Result<CentralityMatrix> {
    if terms == 0 {
        return Err(Error::InvalidParams {
            reason: "series needs at least one term".to_string(),
        });
    }
    let m = a.values();
    let mut acc = DMatrix::zeros(m.nrows(), m.ncols());
    let mut power = m.scale(params.beta);
    for _ in 0..terms {
        acc += &power;
        power = m * power.scale(params.alpha);
    }
    Ok(CentralityMatrix {
        values: acc,
        params,
    })
}

/// Per-node score: row sums of the pairwise centrality (total attenuated
/// paths emanating from each node).
pub fn node_scores(c: &CentralityMatrix) -> DVector<f64> {
    DVector::from_fn(c.values.nrows(), |i, _| c.values.row(i).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_nmode, LayeredGraph};

    fn path_graph(labels: &[&str]) -> NModeMatrix {
        let mut g = LayeredGraph::new(false);
        let l = g.add_layer("nodes").unwrap();
        for label in labels {
            g.add_node(l, label).unwrap();
        }
        for pair in labels.windows(2) {
            g.add_edge(pair[0], pair[1], 1.0).unwrap();
        }
        build_nmode(&g).unwrap()
    }

    fn cycle_graph(n: usize) -> NModeMatrix {
        let mut g = LayeredGraph::new(false);
        let l = g.add_layer("nodes").unwrap();
        let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        for label in &labels {
            g.add_node(l, label).unwrap();
        }
        for i in 0..n {
            g.add_edge(&labels[i], &labels[(i + 1) % n], 1.0).unwrap();
        }
        build_nmode(&g).unwrap()
    }

    #[test]
    fn two_node_edge_radius_is_one() {
        let m = path_graph(&["a", "b"]);
        let info = spectral_radius(&m).unwrap();
        assert!((info.lambda_max - 1.0).abs() < 1e-9);
        assert!(info.residual <= EIGEN_TOLERANCE);
    }

    #[test]
    fn regular_graph_radius_equals_degree() {
        let m = cycle_graph(6);
        let info = spectral_radius(&m).unwrap();
        assert!((info.lambda_max - 2.0).abs() < 1e-9);
    }

    #[test]
    fn zero_matrix_has_zero_spectrum_and_unbounded_alpha() {
        let mut g = LayeredGraph::new(false);
        let l = g.add_layer("nodes").unwrap();
        g.add_node(l, "a").unwrap();
        g.add_node(l, "b").unwrap();
        let m = build_nmode(&g).unwrap();
        let info = spectral_radius(&m).unwrap();
        assert_eq!(info.lambda_max, 0.0);
        assert_eq!(max_alpha(&m).unwrap(), MaxAlpha::Unbounded);
    }

    #[test]
    fn max_alpha_is_reciprocal_radius() {
        let m = path_graph(&["a", "b"]);
        match max_alpha(&m).unwrap() {
            MaxAlpha::Bounded(b) => assert!((b - 1.0).abs() < 1e-9),
            MaxAlpha::Unbounded => panic!("expected a bounded alpha"),
        }
    }

    #[test]
    fn alpha_zero_gives_beta_a() {
        let m = path_graph(&["a", "b", "c"]);
        let c = bonacich_exact(&m, CentralityParams::new(0.0, 2.0).unwrap()).unwrap();
        assert_eq!(c.values(), &(m.values().scale(2.0)));
    }

    #[test]
    fn two_node_closed_form() {
        // alpha = 0.5, beta = 1 on a single undirected edge:
        // (I - A/2)^-1 = 4/3 [[1, 1/2], [1/2, 1]], so C = [[2/3, 4/3], [4/3, 2/3]]
        let m = path_graph(&["a", "b"]);
        let c = bonacich_exact(&m, CentralityParams::new(0.5, 1.0).unwrap()).unwrap();
        let expect = [[2.0 / 3.0, 4.0 / 3.0], [4.0 / 3.0, 2.0 / 3.0]];
        for (i, row) in expect.iter().enumerate() {
            for (j, want) in row.iter().enumerate() {
                assert!((c.values()[(i, j)] - want).abs() < 1e-12);
            }
        }
        let scores = node_scores(&c);
        assert!((scores[0] - 2.0).abs() < 1e-12);
        assert!((scores[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn two_node_closed_form_matches_50_term_series() {
        let m = path_graph(&["a", "b"]);
        let p = CentralityParams::new(0.5, 1.0).unwrap();
        let exact = bonacich_exact(&m, p).unwrap();
        let series = bonacich_series(&m, p, 50).unwrap();
        for (e, s) in exact.values().iter().zip(series.values().iter()) {
            assert!((e - s).abs() < 1e-9);
        }
    }

    #[test]
    fn alpha_at_bound_is_rejected() {
        let m = path_graph(&["a", "b"]);
        let err = bonacich_exact(&m, CentralityParams::new(1.0, 1.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::AlphaBound { .. }));
    }

    #[test]
    fn beta_is_a_prefactor() {
        let m = path_graph(&["a", "b", "c"]);
        let c1 = bonacich_exact(&m, CentralityParams::new(0.3, 1.0).unwrap()).unwrap();
        let c3 = bonacich_exact(&m, CentralityParams::new(0.3, 3.0).unwrap()).unwrap();
        for (a, b) in c1.values().iter().zip(c3.values().iter()) {
            assert!((a * 3.0 - b).abs() < 1e-10);
        }
    }

    #[test]
    fn series_one_term_is_beta_a() {
        let m = path_graph(&["a", "b", "c"]);
        let c = bonacich_series(&m, CentralityParams::new(0.4, 2.0).unwrap(), 1).unwrap();
        assert_eq!(c.values(), &m.values().scale(2.0));
    }

    #[test]
    fn series_zero_terms_rejected() {
        let m = path_graph(&["a", "b"]);
        assert!(bonacich_series(&m, CentralityParams::new(0.1, 1.0).unwrap(), 0).is_err());
    }

    #[test]
    fn katz_reduction_when_alpha_equals_beta() {
        // with alpha = beta the truncated series is the partial Katz sum
        // sum_{m=1..t} (beta A)^m
        let m = path_graph(&["a", "b", "c", "d"]);
        let beta = 0.3;
        let c = bonacich_series(&m, CentralityParams::new(beta, beta).unwrap(), 4).unwrap();
        let ba = m.values().scale(beta);
        let mut katz = ba.clone();
        let mut p = ba.clone();
        for _ in 1..4 {
            p = &p * &ba;
            katz += &p;
        }
        for (x, y) in c.values().iter().zip(katz.iter()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn recurrence_identity_holds() {
        let m = path_graph(&["a", "b", "c", "d", "e"]);
        let p = CentralityParams::new(0.3, 1.5).unwrap();
        let c = bonacich_exact(&m, p).unwrap();
        let rhs = m.values().scale(p.beta) + (m.values() * c.values()).scale(p.alpha);
        let max_err = c
            .values()
            .iter()
            .zip(rhs.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(max_err <= 1e-8, "residual {max_err}");
    }

    #[test]
    fn symmetric_input_yields_symmetric_centrality() {
        let m = cycle_graph(5);
        let c = bonacich_exact(&m, CentralityParams::new(0.2, 1.0).unwrap()).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert!((c.values()[(i, j)] - c.values()[(j, i)]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn entries_nondecreasing_in_alpha() {
        let m = cycle_graph(5);
        let c1 = bonacich_exact(&m, CentralityParams::new(0.1, 1.0).unwrap()).unwrap();
        let c2 = bonacich_exact(&m, CentralityParams::new(0.3, 1.0).unwrap()).unwrap();
        for (a, b) in c1.values().iter().zip(c2.values().iter()) {
            assert!(*b >= *a - 1e-12);
        }
    }

    #[test]
    fn permuting_node_order_permutes_scores() {
        let build = |order: &[&str]| {
            let mut g = LayeredGraph::new(false);
            let l = g.add_layer("nodes").unwrap();
            for label in order {
                g.add_node(l, label).unwrap();
            }
            for (a, b) in [("a", "b"), ("b", "c"), ("c", "d"), ("a", "c")] {
                g.add_edge(a, b, 1.0).unwrap();
            }
            build_nmode(&g).unwrap()
        };
        let m1 = build(&["a", "b", "c", "d"]);
        let m2 = build(&["d", "c", "b", "a"]);
        let p = CentralityParams::new(0.2, 1.0).unwrap();
        let s1 = node_scores(&bonacich_exact(&m1, p).unwrap());
        let s2 = node_scores(&bonacich_exact(&m2, p).unwrap());
        for (i, label) in m1.labels().iter().enumerate() {
            let j = m2.labels().iter().position(|l| l == label).unwrap();
            assert!((s1[i] - s2[j]).abs() < 1e-12, "score of {label}");
        }
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(CentralityParams::new(-0.1, 1.0).is_err());
        assert!(CentralityParams::new(0.1, 0.0).is_err());
        assert!(CentralityParams::new(f64::NAN, 1.0).is_err());
    }
}
