use std::collections::HashMap;
use std::fmt;

use sha2::{Digest, Sha256};

use super::components::{ComponentDecomposition, PartitionReport};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{CoordinateLabel, VectorFamily};

/// Groups `D₁, D₂, …` whose members have pairwise disjoint supports.
///
/// Group `n` (0-based here) holds the `n`-th member of every component that
/// has more than `n` members, so the group count equals the largest
/// component size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointPartition {
    offsets: Vec<usize>,
    ids: Vec<u64>,
}

impl DisjointPartition {
    /// Builds a partition from explicit groups; no validation.
    pub fn from_groups(groups: impl IntoIterator<Item = Vec<u64>>) -> Self {
        let mut offsets = vec![0];
        let mut ids = Vec::new();
        for g in groups {
            ids.extend(g);
            offsets.push(ids.len());
        }
        DisjointPartition { offsets, ids }
    }

    pub fn n_groups(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Total number of vector ids over all groups.
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn group(&self, n: usize) -> &[u64] {
        &self.ids[self.offsets[n]..self.offsets[n + 1]]
    }

    pub fn groups(&self) -> impl Iterator<Item = &[u64]> {
        self.offsets.windows(2).map(|w| &self.ids[w[0]..w[1]])
    }

    pub fn to_vecs(&self) -> Vec<Vec<u64>> {
        self.groups().map(<[u64]>::to_vec).collect()
    }

    /// SHA-256 over the group structure, hex encoded.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.n_groups() as u64).to_le_bytes());
        for g in self.groups() {
            hasher.update((g.len() as u64).to_le_bytes());
            for id in g {
                hasher.update(id.to_le_bytes());
            }
        }
        hex::encode(hasher.finalize())
    }

    pub fn report(&self, components: &ComponentDecomposition) -> PartitionReport {
        PartitionReport {
            n_vectors: components.vector_ids().len(),
            n_components: components.len(),
            max_component: components.max_size(),
            n_groups: self.n_groups(),
            component_size_histogram: components.size_histogram(),
        }
    }
}

/// Assigns the `n`-th member (ascending id) of each component to group `n`.
pub fn disjoint_partition<S: Scalar>(
    family: &VectorFamily<S>,
    components: &ComponentDecomposition,
) -> Result<DisjointPartition> {
    if components.vector_ids().len() != family.len()
        || !family.ids().eq(components.vector_ids().iter().copied())
    {
        return Err(Error::ForeignDecomposition);
    }
    let n_groups = components.max_size();
    // Group n holds one member from every component larger than n.
    let mut larger_than = vec![0usize; n_groups + 1];
    for s in components.sizes() {
        larger_than[s] += 1;
    }
    for k in (0..n_groups).rev() {
        larger_than[k] += larger_than[k + 1];
    }
    let mut offsets = Vec::with_capacity(n_groups + 1);
    offsets.push(0);
    for k in 1..=n_groups {
        offsets.push(offsets[k - 1] + larger_than[k]);
    }
    let mut cursor = offsets[..n_groups].to_vec();
    let mut ids = vec![0u64; family.len()];
    for (_, members) in components.components() {
        for (n, id) in members.iter().enumerate() {
            ids[cursor[n]] = *id;
            cursor[n] += 1;
        }
    }
    for k in 0..n_groups {
        ids[offsets[k]..offsets[k + 1]].sort_unstable();
    }
    Ok(DisjointPartition { offsets, ids })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionViolation {
    Overlap {
        group: usize,
        first: u64,
        second: u64,
        label: CoordinateLabel,
    },
    Missing(u64),
    Duplicate(u64),
    Unknown(u64),
    Zero(u64),
}

impl fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionViolation::Overlap {
                group,
                first,
                second,
                label,
            } => write!(
                f,
                "group {group}: vectors {first} and {second} share coordinate {label}"
            ),
            PartitionViolation::Missing(id) => write!(f, "vector {id} is in no group"),
            PartitionViolation::Duplicate(id) => write!(f, "vector {id} is in two groups"),
            PartitionViolation::Unknown(id) => write!(f, "group member {id} is not in the family"),
            PartitionViolation::Zero(id) => write!(f, "zero vector {id} was grouped"),
        }
    }
}

/// Checks pairwise disjoint supports inside every group and that the groups
/// cover the non-zero members exactly once.
pub fn verify_partition<S: Scalar>(
    family: &VectorFamily<S>,
    partition: &DisjointPartition,
) -> std::result::Result<(), PartitionViolation> {
    let mut owner: HashMap<CoordinateLabel, u64> = HashMap::new();
    for (n, group) in partition.groups().enumerate() {
        owner.clear();
        for &id in group {
            let v = family.get(id).ok_or(PartitionViolation::Unknown(id))?;
            if v.is_zero() {
                return Err(PartitionViolation::Zero(id));
            }
            for label in v.support() {
                if let Some(first) = owner.insert(label, id) {
                    return Err(PartitionViolation::Overlap {
                        group: n,
                        first,
                        second: id,
                        label,
                    });
                }
            }
        }
    }
    let mut seen: Vec<u64> = partition.ids.clone();
    seen.sort_unstable();
    if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
        return Err(PartitionViolation::Duplicate(w[0]));
    }
    let expected = family
        .members()
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(id, _)| *id);
    if let Some(missing) = expected
        .into_iter()
        .find(|id| seen.binary_search(id).is_err())
    {
        return Err(PartitionViolation::Missing(missing));
    }
    Ok(())
}
