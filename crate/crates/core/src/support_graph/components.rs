use std::collections::VecDeque;

use serde::Serialize;

use super::incidence::IncidenceIndex;
use super::union_find::UnionFind;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::VectorFamily;

const UNSET: u32 = u32::MAX;

/// Connected components of the support-intersection relation.
///
/// Each component is named after its smallest vector id, so the same family
/// always yields the same decomposition regardless of algorithm or schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentDecomposition {
    ids: Vec<u64>,
    component_of: Vec<u64>,
    component_ids: Vec<u64>,
    offsets: Vec<usize>,
    members: Vec<u64>,
}

impl ComponentDecomposition {
    /// `representative[pos]` is the smallest member position of `pos`'s class.
    fn from_representatives(ids: Vec<u64>, representative: &[u32]) -> Self {
        let n = ids.len();
        let mut slot = vec![UNSET; n];
        let mut component_ids = Vec::new();
        for pos in 0..n {
            if representative[pos] as usize == pos {
                slot[pos] = component_ids.len() as u32;
                component_ids.push(ids[pos]);
            }
        }
        let mut counts = vec![0usize; component_ids.len()];
        for &r in representative {
            counts[slot[r as usize] as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(counts.len() + 1);
        offsets.push(0);
        for c in &counts {
            offsets.push(offsets.last().unwrap() + c);
        }
        let mut cursor = offsets[..counts.len()].to_vec();
        let mut members = vec![0u64; n];
        let mut component_of = Vec::with_capacity(n);
        for pos in 0..n {
            let r = representative[pos] as usize;
            let k = slot[r] as usize;
            members[cursor[k]] = ids[pos];
            cursor[k] += 1;
            component_of.push(ids[r]);
        }
        ComponentDecomposition {
            ids,
            component_of,
            component_ids,
            offsets,
            members,
        }
    }

    /// Number of components.
    pub fn len(&self) -> usize {
        self.component_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.component_ids.is_empty()
    }

    /// Member ids of the family this decomposition describes.
    pub fn vector_ids(&self) -> &[u64] {
        &self.ids
    }

    /// Component id of every member, aligned with [`Self::vector_ids`].
    pub fn component_ids_by_member(&self) -> &[u64] {
        &self.component_of
    }

    pub fn component_of(&self, id: u64) -> Option<u64> {
        self.ids
            .binary_search(&id)
            .ok()
            .map(|pos| self.component_of[pos])
    }

    /// `(component id, ascending member ids)` in ascending component order.
    pub fn components(&self) -> impl Iterator<Item = (u64, &[u64])> {
        self.component_ids
            .iter()
            .enumerate()
            .map(|(k, &c)| (c, &self.members[self.offsets[k]..self.offsets[k + 1]]))
    }

    pub fn members_of(&self, component: u64) -> Option<&[u64]> {
        let k = self.component_ids.binary_search(&component).ok()?;
        Some(&self.members[self.offsets[k]..self.offsets[k + 1]])
    }

    pub fn max_size(&self) -> usize {
        self.sizes().max().unwrap_or(0)
    }

    pub fn sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.offsets.windows(2).map(|w| w[1] - w[0])
    }

    /// `(size, how many components have it)`, ascending by size.
    pub fn size_histogram(&self) -> Vec<(usize, usize)> {
        let mut sizes: Vec<usize> = self.sizes().collect();
        sizes.sort_unstable();
        let mut out: Vec<(usize, usize)> = Vec::new();
        for s in sizes {
            match out.last_mut() {
                Some((size, count)) if *size == s => *count += 1,
                _ => out.push((s, 1)),
            }
        }
        out
    }
}

fn reject_zero_members<S: Scalar>(family: &VectorFamily<S>) -> Result<()> {
    match family.members().iter().find(|(_, v)| v.is_zero()) {
        Some((id, _)) => Err(Error::ZeroMember { id: *id }),
        None => Ok(()),
    }
}

fn check_index<S: Scalar>(family: &VectorFamily<S>, index: &IncidenceIndex) -> Result<()> {
    if index.ids().len() != family.len() || !family.ids().eq(index.ids().iter().copied()) {
        return Err(Error::ForeignDecomposition);
    }
    Ok(())
}

/// Equivalence classes of `c ~ d` (a finite chain of pairwise intersecting
/// supports), by merging the members of every incidence bucket in a
/// disjoint-set forest. Edges are never materialised.
pub fn components_equivrel<S: Scalar>(family: &VectorFamily<S>) -> Result<ComponentDecomposition> {
    reject_zero_members(family)?;
    let index = IncidenceIndex::build(family);
    components_equivrel_with(family, &index)
}

pub fn components_equivrel_with<S: Scalar>(
    family: &VectorFamily<S>,
    index: &IncidenceIndex,
) -> Result<ComponentDecomposition> {
    reject_zero_members(family)?;
    check_index(family, index)?;
    let n = family.len();
    let mut forest = UnionFind::new(n);
    for bucket in index.buckets() {
        for pair in bucket.windows(2) {
            forest.union(pair[0], pair[1]);
        }
    }
    let mut smallest = vec![UNSET; n];
    let mut representative = Vec::with_capacity(n);
    for pos in 0..n as u32 {
        let root = forest.find(pos) as usize;
        if smallest[root] == UNSET {
            smallest[root] = pos;
        }
        representative.push(smallest[root]);
    }
    Ok(ComponentDecomposition::from_representatives(
        index.ids().to_vec(),
        &representative,
    ))
}

/// Connected components of the support-intersection graph by breadth-first
/// search. Neighbours are read off the incidence buckets; each bucket is
/// expanded once.
pub fn components_graph<S: Scalar>(family: &VectorFamily<S>) -> Result<ComponentDecomposition> {
    reject_zero_members(family)?;
    let index = IncidenceIndex::build(family);
    components_graph_with(family, &index)
}

pub fn components_graph_with<S: Scalar>(
    family: &VectorFamily<S>,
    index: &IncidenceIndex,
) -> Result<ComponentDecomposition> {
    reject_zero_members(family)?;
    check_index(family, index)?;
    let members = family.members();
    let n = members.len();
    let mut representative = vec![UNSET; n];
    let mut expanded = vec![false; index.len()];
    let mut queue = VecDeque::new();
    for start in 0..n {
        if representative[start] != UNSET {
            continue;
        }
        representative[start] = start as u32;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for label in members[v].1.support() {
                let k = index.bucket_of(label).expect("support label is indexed");
                if std::mem::replace(&mut expanded[k], true) {
                    continue;
                }
                for &w in index.bucket(k) {
                    if representative[w as usize] == UNSET {
                        representative[w as usize] = start as u32;
                        queue.push_back(w as usize);
                    }
                }
            }
        }
    }
    Ok(ComponentDecomposition::from_representatives(
        index.ids().to_vec(),
        &representative,
    ))
}

/// Summary of a component decomposition and the partition built from it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub n_vectors: usize,
    pub n_components: usize,
    pub max_component: usize,
    pub n_groups: usize,
    pub component_size_histogram: Vec<(usize, usize)>,
}
