use rayon::prelude::*;

use crate::scalar::Scalar;
use crate::space::{CoordinateLabel, VectorFamily};

/// For every coordinate, the members whose support contains it.
///
/// Stored compressed: `labels[k]` owns `positions[offsets[k]..offsets[k + 1]]`,
/// where positions index the family's member list in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceIndex {
    labels: Vec<CoordinateLabel>,
    offsets: Vec<usize>,
    positions: Vec<u32>,
    ids: Vec<u64>,
}

impl IncidenceIndex {
    pub fn build<S: Scalar>(family: &VectorFamily<S>) -> Self {
        let members = family.members();
        assert!(
            members.len() <= u32::MAX as usize,
            "family too large to index"
        );
        let mut pairs: Vec<(u64, u32)> = members
            .par_iter()
            .enumerate()
            .flat_map_iter(|(pos, (_, v))| v.support().map(move |l| (l.0, pos as u32)))
            .collect();
        pairs.par_sort_unstable();

        let mut labels = Vec::new();
        let mut offsets = vec![0];
        let mut positions = Vec::with_capacity(pairs.len());
        for (label, pos) in pairs {
            if labels.last().map(|l: &CoordinateLabel| l.0) != Some(label) {
                if !labels.is_empty() {
                    offsets.push(positions.len());
                }
                labels.push(CoordinateLabel(label));
            }
            positions.push(pos);
        }
        offsets.push(positions.len());
        if labels.is_empty() {
            offsets.truncate(1);
        }
        IncidenceIndex {
            labels,
            offsets,
            positions,
            ids: family.ids().collect(),
        }
    }

    /// Number of coordinates with non-empty incidence.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[CoordinateLabel] {
        &self.labels
    }

    /// Vector ids incident to `label`, ascending.
    pub fn vector_ids(&self, label: CoordinateLabel) -> impl Iterator<Item = u64> + '_ {
        let bucket = self.bucket_of(label).map(|k| self.bucket(k)).unwrap_or(&[]);
        bucket.iter().map(|&p| self.ids[p as usize])
    }

    pub fn iter(&self) -> impl Iterator<Item = (CoordinateLabel, Vec<u64>)> + '_ {
        (0..self.labels.len()).map(|k| {
            (
                self.labels[k],
                self.bucket(k)
                    .iter()
                    .map(|&p| self.ids[p as usize])
                    .collect(),
            )
        })
    }

    pub(crate) fn bucket_of(&self, label: CoordinateLabel) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub(crate) fn bucket(&self, k: usize) -> &[u32] {
        &self.positions[self.offsets[k]..self.offsets[k + 1]]
    }

    pub(crate) fn buckets(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.labels.len()).map(|k| self.bucket(k))
    }

    pub(crate) fn ids(&self) -> &[u64] {
        &self.ids
    }
}
