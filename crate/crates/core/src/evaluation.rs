//! Partition comparison via normalized mutual information.

use std::collections::BTreeMap;

use crate::community::Partition;
use crate::error::{Error, Result};

/// A community assignment keyed by node label, independent of any
/// particular matrix ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    members: BTreeMap<String, usize>,
}

impl Labeling {
    pub fn from_pairs<I, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut members = BTreeMap::new();
        for (label, community) in pairs {
            let label = label.into();
            if members.insert(label.clone(), community).is_some() {
                return Err(Error::DuplicateLabel { label });
            }
        }
        Ok(Labeling { members })
    }

    /// Pair a matrix-ordered partition with its node labels.
    pub fn from_partition(labels: &[String], partition: &Partition) -> Result<Self> {
        if labels.len() != partition.len() {
            return Err(Error::NodeSetMismatch {
                detail: format!(
                    "{} labels for a partition of {} nodes",
                    labels.len(),
                    partition.len()
                ),
            });
        }
        Self::from_pairs(
            labels
                .iter()
                .cloned()
                .zip(partition.assignment.iter().copied()),
        )
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn community_of(&self, label: &str) -> Option<usize> {
        self.members.get(label).copied()
    }

    /// Label-sorted iteration order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.members.iter().map(|(l, &c)| (l.as_str(), c))
    }

    /// Keep only the labels accepted by `keep`, e.g. one layer of a graph.
    pub fn restricted<F: Fn(&str) -> bool>(&self, keep: F) -> Labeling {
        Labeling {
            members: self
                .members
                .iter()
                .filter(|(l, _)| keep(l))
                .map(|(l, &c)| (l.clone(), c))
                .collect(),
        }
    }
}

/// Contingency counts between two labelings of the same node set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionCounts {
    /// counts[x][y] = nodes assigned to community x by the first labeling
    /// and to y by the second.
    pub counts: Vec<Vec<u64>>,
    pub n: u64,
}

fn dense_ids(values: impl Iterator<Item = usize>) -> BTreeMap<usize, usize> {
    let mut seen: Vec<usize> = values.collect();
    seen.sort_unstable();
    seen.dedup();
    seen.into_iter().enumerate().map(|(i, v)| (v, i)).collect()
}

/// Joint assignment counts; errors unless both labelings cover exactly the
/// same labels.
pub fn confusion(x: &Labeling, y: &Labeling) -> Result<ConfusionCounts> {
    if x.len() != y.len() {
        return Err(Error::NodeSetMismatch {
            detail: format!("{} vs {} nodes", x.len(), y.len()),
        });
    }
    for (label, _) in x.iter() {
        if y.community_of(label).is_none() {
            return Err(Error::NodeSetMismatch {
                detail: format!("label '{label}' missing from the second partition"),
            });
        }
    }
    let x_ids = dense_ids(x.iter().map(|(_, c)| c));
    let y_ids = dense_ids(y.iter().map(|(_, c)| c));
    let mut counts = vec![vec![0u64; y_ids.len()]; x_ids.len()];
    for (label, cx) in x.iter() {
        let cy = y.community_of(label).expect("checked above");
        counts[x_ids[&cx]][y_ids[&cy]] += 1;
    }
    Ok(ConfusionCounts {
        counts,
        n: x.len() as u64,
    })
}

/// Normalized mutual information `2 I(X,Y) / (H(X) + H(Y))` in [0, 1].
///
/// Shannon entropies use natural logarithms (the base cancels) and
/// `0 log 0 = 0`. When both partitions are trivial (single community each)
/// the entropies vanish and the partitions are identical, so the value is 1.
pub fn nmi(x: &Labeling, y: &Labeling) -> Result<f64> {
    let c = confusion(x, y)?;
    Ok(nmi_from_counts(&c))
}

pub fn nmi_from_counts(c: &ConfusionCounts) -> f64 {
    let n = c.n as f64;
    if c.n == 0 {
        return 1.0;
    }
    let row_sums: Vec<u64> = c.counts.iter().map(|r| r.iter().sum()).collect();
    let col_count = c.counts.first().map_or(0, Vec::len);
    let col_sums: Vec<u64> = (0..col_count)
        .map(|j| c.counts.iter().map(|r| r[j]).sum())
        .collect();
    // identical up to community relabeling: exactly one nonzero cell per row
    // and per column; the value is 1 with no float round-off
    let one_per_row = c
        .counts
        .iter()
        .all(|r| r.iter().filter(|&&v| v > 0).count() == 1);
    let one_per_col = (0..col_count).all(|j| c.counts.iter().filter(|r| r[j] > 0).count() == 1);
    if one_per_row && one_per_col {
        return 1.0;
    }
    let mut info = 0.0;
    for (i, row) in c.counts.iter().enumerate() {
        for (j, &count) in row.iter().enumerate() {
            if count > 0 {
                let p = count as f64 / n;
                let px = row_sums[i] as f64 / n;
                let py = col_sums[j] as f64 / n;
                info += p * (p / (px * py)).ln();
            }
        }
    }
    let entropy = |sums: &[u64]| -> f64 {
        sums.iter()
            .filter(|&&s| s > 0)
            .map(|&s| {
                let p = s as f64 / n;
                -p * p.ln()
            })
            .sum()
    };
    let hx = entropy(&row_sums);
    let hy = entropy(&col_sums);
    if hx + hy == 0.0 {
        // both partitions trivial, hence identical
        return 1.0;
    }
    2.0 * info / (hx + hy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labeling(pairs: &[(&str, usize)]) -> Labeling {
        Labeling::from_pairs(pairs.iter().map(|&(l, c)| (l, c))).unwrap()
    }

    #[test]
    fn confusion_identical_two_groups() {
        let x = labeling(&[("a", 0), ("b", 0), ("c", 1), ("d", 1)]);
        let c = confusion(&x, &x).unwrap();
        assert_eq!(c.counts, vec![vec![2, 0], vec![0, 2]]);
        assert_eq!(c.n, 4);
    }

    #[test]
    fn confusion_against_single_group_gives_sizes() {
        let x = labeling(&[("a", 0), ("b", 0), ("c", 1)]);
        let y = labeling(&[("a", 7), ("b", 7), ("c", 7)]);
        let c = confusion(&x, &y).unwrap();
        assert_eq!(c.counts, vec![vec![2], vec![1]]);
    }

    #[test]
    fn confusion_order_independent() {
        let x = labeling(&[("a", 0), ("b", 1), ("c", 0)]);
        let y = labeling(&[("c", 3), ("a", 3), ("b", 5)]);
        let c1 = confusion(&x, &y).unwrap();
        let c2 = confusion(&x, &y).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn confusion_rejects_mismatched_node_sets() {
        let x = labeling(&[("a", 0), ("b", 0)]);
        let y = labeling(&[("a", 0), ("z", 0)]);
        assert!(matches!(
            confusion(&x, &y),
            Err(Error::NodeSetMismatch { .. })
        ));
    }

    #[test]
    fn nmi_identical_partitions_is_one() {
        let x = labeling(&[("a", 0), ("b", 0), ("c", 1), ("d", 1)]);
        assert!((nmi(&x, &x).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nmi_identical_up_to_relabeling_is_one() {
        let x = labeling(&[("a", 0), ("b", 0), ("c", 1), ("d", 1)]);
        let y = labeling(&[("a", 9), ("b", 9), ("c", 4), ("d", 4)]);
        assert!((nmi(&x, &y).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nmi_independent_partitions_is_zero() {
        // each cell of the 2x2 confusion has one node: P(x,y) = P(x)P(y)
        let x = labeling(&[("a", 0), ("b", 0), ("c", 1), ("d", 1)]);
        let y = labeling(&[("a", 0), ("b", 1), ("c", 0), ("d", 1)]);
        assert!(nmi(&x, &y).unwrap().abs() < 1e-12);
    }

    #[test]
    fn nmi_is_symmetric() {
        let x = labeling(&[("a", 0), ("b", 0), ("c", 1), ("d", 1), ("e", 1)]);
        let y = labeling(&[("a", 0), ("b", 1), ("c", 1), ("d", 1), ("e", 0)]);
        let xy = nmi(&x, &y).unwrap();
        let yx = nmi(&y, &x).unwrap();
        assert!((xy - yx).abs() < 1e-15);
    }

    #[test]
    fn nmi_trivial_partitions_are_identical() {
        let x = labeling(&[("a", 0), ("b", 0)]);
        let y = labeling(&[("a", 3), ("b", 3)]);
        assert_eq!(nmi(&x, &y).unwrap(), 1.0);
    }

    #[test]
    fn restriction_keeps_matching_labels() {
        let x = labeling(&[("w1", 0), ("w2", 1), ("e1", 0)]);
        let women = x.restricted(|l| l.starts_with('w'));
        assert_eq!(women.len(), 2);
        assert_eq!(women.community_of("e1"), None);
    }
}
