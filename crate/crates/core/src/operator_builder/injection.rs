use crate::error::{Error, Result};
use crate::space::CoordinateLabel;
use crate::support_graph::DisjointPartition;

/// Injective placement `(vector id, group n) ↦ θ(d, n)` of grouped vectors on
/// coordinates of the operator's domain. Groups are numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectionMap {
    entries: Vec<((u64, usize), CoordinateLabel)>,
}

impl InjectionMap {
    pub fn new(entries: impl IntoIterator<Item = ((u64, usize), CoordinateLabel)>) -> Result<Self> {
        let mut entries: Vec<_> = entries.into_iter().collect();
        entries.sort_unstable_by_key(|(key, _)| *key);
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::NotInjective {
                first: w[0].0,
                second: w[1].0,
                label: w[1].1,
            });
        }
        let mut by_label: Vec<_> = entries.iter().map(|(key, label)| (*label, *key)).collect();
        by_label.sort_unstable();
        if let Some(w) = by_label.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::NotInjective {
                first: w[0].1,
                second: w[1].1,
                label: w[0].0,
            });
        }
        Ok(InjectionMap { entries })
    }

    /// Assigns the highest labels of `0..universe_size` in group order, then
    /// ascending id within a group.
    pub fn allocate_tail(partition: &DisjointPartition, universe_size: u64) -> Result<Self> {
        let needed = partition.len();
        if needed as u64 > universe_size {
            return Err(Error::UniverseTooSmall {
                needed,
                universe_size,
            });
        }
        let mut next = universe_size;
        let mut entries = Vec::with_capacity(partition.len());
        for (n, group) in partition.groups().enumerate() {
            for &id in group {
                next -= 1;
                entries.push(((id, n + 1), CoordinateLabel(next)));
            }
        }
        entries.sort_unstable_by_key(|(key, _)| *key);
        Ok(InjectionMap { entries })
    }

    pub fn get(&self, id: u64, group: usize) -> Option<CoordinateLabel> {
        self.entries
            .binary_search_by_key(&(id, group), |(key, _)| *key)
            .ok()
            .map(|i| self.entries[i].1)
    }

    /// `((id, group), label)` sorted by `(id, group)`.
    pub fn entries(&self) -> &[((u64, usize), CoordinateLabel)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
