//! The clustering criterion.
//!
//! Each cluster's internal Dempster conflict `c_i` is metalevel evidence
//! against the partition being adequate. Combined with the domain conflict
//! `c_0` this gives the metaconflict
//! `Mcf = 1 - (1 - c_0) * prod_i (1 - c_i)`.

use crate::error::{Error, Result};
use crate::evidence::{pairwise_conflict, Combiner, SimpleSupport};

/// Largest conflict fed into the log weight; keeps weights finite.
pub const CONFLICT_CLAMP: f64 = 1.0 - 1e-12;

/// Symmetric matrix of pairwise conflicts `c_jk` with a zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct ConflictMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl ConflictMatrix {
    pub fn from_evidence(evidence: &[SimpleSupport]) -> Result<Self> {
        if evidence.is_empty() {
            return Err(Error::domain("conflict matrix of an empty evidence list"));
        }
        let n = evidence.len();
        let mut entries = vec![0.0; n * n];
        for j in 0..n {
            for k in (j + 1)..n {
                let c = pairwise_conflict(&evidence[j], &evidence[k])?;
                entries[j * n + k] = c;
                entries[k * n + j] = c;
            }
        }
        Ok(ConflictMatrix { n, entries })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.entries[j * self.n + k]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.entries[j * self.n..(j + 1) * self.n]
    }
}

/// `conflict_matrix` under its operational name.
pub fn conflict_matrix(evidence: &[SimpleSupport]) -> Result<ConflictMatrix> {
    ConflictMatrix::from_evidence(evidence)
}

/// `-ln(1 - c)`, with `c` clamped below one.
pub fn conflict_weight(c: f64) -> f64 {
    -(1.0 - c.clamp(0.0, CONFLICT_CLAMP)).ln()
}

/// Assignment of every piece of evidence to one of `clusters` clusters.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Partition {
    assignment: Vec<usize>,
    clusters: usize,
}

impl Partition {
    pub fn new(assignment: Vec<usize>, clusters: usize) -> Result<Self> {
        if let Some((m, &c)) = assignment.iter().enumerate().find(|(_, &c)| c >= clusters) {
            return Err(Error::domain(format!(
                "evidence {m} assigned to cluster {c}, only {clusters} clusters"
            )));
        }
        Ok(Partition {
            assignment,
            clusters,
        })
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn members(&self, cluster: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(m, &c)| (c == cluster).then_some(m))
            .collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.clusters];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    /// Number of clusters with at least one member.
    pub fn nonempty_clusters(&self) -> usize {
        self.sizes().iter().filter(|&&s| s > 0).count()
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct McfReport {
    pub cluster_conflicts: Vec<f64>,
    pub domain_conflict: f64,
    pub mcf: f64,
}

/// Dempster conflict among the members of one cluster. A totally
/// conflicting cluster reports `1.0`.
pub fn cluster_conflict(evidence: &[SimpleSupport], members: &[usize]) -> Result<f64> {
    if members.len() < 2 {
        if let Some(&m) = members.iter().find(|&&m| m >= evidence.len()) {
            return Err(Error::domain(format!("member {m} out of range")));
        }
        return Ok(0.0);
    }
    let mut acc = Combiner::new(evidence[members[0]].frame_size());
    for &m in members {
        let e = evidence
            .get(m)
            .ok_or_else(|| Error::domain(format!("member {m} out of range")))?;
        acc.absorb(&e.to_mass_function())?;
    }
    Ok(if acc.is_total() { 1.0 } else { acc.conflict() })
}

pub fn metaconflict(c0: f64, cluster_conflicts: &[f64]) -> f64 {
    let keep: f64 = cluster_conflicts.iter().map(|c| 1.0 - c).product();
    1.0 - (1.0 - c0) * keep
}

pub fn evaluate_partition(
    evidence: &[SimpleSupport],
    partition: &Partition,
    c0: f64,
) -> Result<McfReport> {
    if partition.len() != evidence.len() {
        return Err(Error::domain(format!(
            "partition covers {} pieces of evidence, expected {}",
            partition.len(),
            evidence.len()
        )));
    }
    if !(0.0..=1.0).contains(&c0) {
        return Err(Error::domain(format!("domain conflict {c0} outside [0, 1]")));
    }
    let cluster_conflicts = (0..partition.cluster_count())
        .map(|c| cluster_conflict(evidence, &partition.members(c)))
        .collect::<Result<Vec<_>>>()?;
    let mcf = metaconflict(c0, &cluster_conflicts);
    Ok(McfReport {
        cluster_conflicts,
        domain_conflict: c0,
        mcf,
    })
}
