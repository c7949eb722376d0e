//! Node ranking across an alpha sweep, and leader/bridge classification.
//!
//! Ranks are computed within each node's community, per alpha, with tied
//! scores receiving averaged (fractional) ranks. Nodes whose rank improves
//! as alpha grows draw their standing from connections outside their own
//! community; they bridge communities. The node ranked first at the largest
//! alpha is the community's leader.

use nalgebra::DMatrix;

use crate::centrality::{bonacich_exact, max_alpha, node_scores, CentralityParams};
use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::NModeMatrix;

/// Relative tolerance under which two scores count as tied.
pub const RANK_TIE_TOLERANCE: f64 = 1e-9;

/// Default minimum rank improvement that marks a bridge.
pub const BRIDGE_THRESHOLD: f64 = 1.0;

/// Node scores per alpha: one column per grid value.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub grid: Vec<f64>,
    /// node x alpha matrix of scores.
    pub scores: DMatrix<f64>,
    pub beta: f64,
}

/// Fractional within-community ranks per alpha (1 = highest score).
#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    pub grid: Vec<f64>,
    /// node x alpha matrix of fractional ranks.
    pub ranks: DMatrix<f64>,
    pub partition: Partition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Leader,
    Bridge,
    Stable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoleLabel {
    /// Global node index.
    pub node: usize,
    pub role: Role,
    /// rank at the smallest alpha minus rank at the largest alpha;
    /// positive means the node gained standing as alpha grew.
    pub delta_rank: f64,
}

fn validate_grid(a: &NModeMatrix, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid {
            reason: "grid is empty".to_string(),
        });
    }
    for pair in grid.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::InvalidGrid {
                reason: format!(
                    "grid must increase strictly, got {} after {}",
                    pair[1], pair[0]
                ),
            });
        }
    }
    let bound = max_alpha(a)?;
    for &alpha in grid {
        if alpha < 0.0 || !bound.admits(alpha) {
            return Err(Error::AlphaBound {
                alpha,
                max_alpha: bound.bound().unwrap_or(f64::INFINITY),
            });
        }
    }
    Ok(())
}

/// Total node scores (row sums of exact centrality) per grid alpha.
pub fn alpha_sweep(a: &NModeMatrix, grid: &[f64], beta: f64) -> Result<ScoreTable> {
    validate_grid(a, grid)?;
    let n = a.dimension();
    let mut scores = DMatrix::zeros(n, grid.len());
    for (k, &alpha) in grid.iter().enumerate() {
        let c = bonacich_exact(a, CentralityParams::new(alpha, beta)?)?;
        scores.set_column(k, &node_scores(&c));
    }
    Ok(ScoreTable {
        grid: grid.to_vec(),
        scores,
        beta,
    })
}

/// Scores restricted to each node's own community: entry (i, k) sums the
/// centrality from node i to the members of its community at grid alpha k.
///
/// This is the quantity behind within-group rankings: it measures standing
/// among peers while still letting paths that leave and re-enter the
/// community contribute.
pub fn alpha_sweep_within(
    a: &NModeMatrix,
    grid: &[f64],
    beta: f64,
    partition: &Partition,
) -> Result<ScoreTable> {
    validate_grid(a, grid)?;
    let n = a.dimension();
    if partition.len() != n {
        return Err(Error::NodeSetMismatch {
            detail: format!("partition covers {} nodes, matrix has {n}", partition.len()),
        });
    }
    let mut scores = DMatrix::zeros(n, grid.len());
    for (k, &alpha) in grid.iter().enumerate() {
        let c = bonacich_exact(a, CentralityParams::new(alpha, beta)?)?;
        for i in 0..n {
            let mut sum = 0.0;
            for j in 0..n {
                if partition.assignment[j] == partition.assignment[i] {
                    sum += c.values()[(i, j)];
                }
            }
            scores[(i, k)] = sum;
        }
    }
    Ok(ScoreTable {
        grid: grid.to_vec(),
        scores,
        beta,
    })
}

/// Descending fractional ranks of `scores`, ties averaged. Adjacent scores
/// within `RANK_TIE_TOLERANCE` (relative) belong to one tie group.
fn fractional_ranks(scores: &[f64]) -> Vec<f64> {
    let k = scores.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| scores[j].partial_cmp(&scores[i]).unwrap().then(i.cmp(&j)));
    let mut ranks = vec![0.0; k];
    let mut start = 0;
    while start < k {
        let mut end = start;
        while end + 1 < k {
            let a = scores[order[end]];
            let b = scores[order[end + 1]];
            if (a - b).abs() <= RANK_TIE_TOLERANCE * f64::max(1.0, a.abs()) {
                end += 1;
            } else {
                break;
            }
        }
        let avg = (start + end) as f64 / 2.0 + 1.0;
        for slot in &order[start..=end] {
            ranks[*slot] = avg;
        }
        start = end + 1;
    }
    ranks
}

/// Rank every node within its community, per grid alpha.
pub fn rank_within_groups(table: &ScoreTable, partition: &Partition) -> Result<RankTable> {
    let n = table.scores.nrows();
    if partition.len() != n {
        return Err(Error::NodeSetMismatch {
            detail: format!("partition covers {} nodes, table has {n}", partition.len()),
        });
    }
    let mut ranks = DMatrix::zeros(n, table.grid.len());
    for k in 0..table.grid.len() {
        for community in 0..partition.community_count() {
            let members = partition.members(community);
            let scores: Vec<f64> = members.iter().map(|&i| table.scores[(i, k)]).collect();
            for (slot, rank) in fractional_ranks(&scores).into_iter().enumerate() {
                ranks[(members[slot], k)] = rank;
            }
        }
    }
    Ok(RankTable {
        grid: table.grid.clone(),
        ranks,
        partition: partition.clone(),
    })
}

/// Classify every node from its rank trajectory across the sweep.
pub fn classify_roles(table: &RankTable, bridge_threshold: f64) -> Result<Vec<RoleLabel>> {
    if table.grid.len() < 2 {
        return Err(Error::InvalidGrid {
            reason: "role classification needs at least two grid points".to_string(),
        });
    }
    let n = table.ranks.nrows();
    let last = table.grid.len() - 1;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let first_rank = table.ranks[(i, 0)];
        let last_rank = table.ranks[(i, last)];
        let delta_rank = first_rank - last_rank;
        let role = if (last_rank - 1.0).abs() < 1e-12 {
            Role::Leader
        } else if delta_rank >= bridge_threshold - 1e-12 {
            Role::Bridge
        } else {
            Role::Stable
        };
        out.push(RoleLabel {
            node: i,
            role,
            delta_rank,
        });
    }
    Ok(out)
}
