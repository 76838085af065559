//! Support-intersection structure of a vector family.
//!
//! Two vectors are related when their supports meet; the transitive closure
//! of that relation splits the family into components, and enumerating each
//! component turns it into groups with pairwise disjoint supports. Components
//! are computed twice, by a disjoint-set forest and by breadth-first search,
//! so the two can be cross-checked.

mod components;
mod incidence;
mod partition;
mod union_find;

pub use components::{
    components_equivrel, components_equivrel_with, components_graph, components_graph_with,
    ComponentDecomposition, PartitionReport,
};
pub use incidence::IncidenceIndex;
pub use partition::{disjoint_partition, verify_partition, DisjointPartition, PartitionViolation};
pub use union_find::UnionFind;

use crate::scalar::Scalar;
use crate::space::VectorFamily;

pub fn build_incidence<S: Scalar>(family: &VectorFamily<S>) -> IncidenceIndex {
    IncidenceIndex::build(family)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::error::Error;
    use crate::scalar::{Exponent, Rational};
    use crate::space::{CoordinateLabel, SpaceDescriptor, SparseVector};

    fn family(supports: &[&[u64]]) -> VectorFamily<Rational> {
        let space = Arc::new(SpaceDescriptor::lp(Exponent::from_integer(2), 16).unwrap());
        VectorFamily::from_vectors(
            space.clone(),
            supports.iter().map(|s| {
                SparseVector::new(
                    space.clone(),
                    s.iter()
                        .map(|&l| (CoordinateLabel(l), Rational::from_integer(1.into()))),
                )
                .unwrap()
            }),
        )
        .unwrap()
    }

    fn components_as_vecs(c: &ComponentDecomposition) -> Vec<(u64, Vec<u64>)> {
        c.components().map(|(k, m)| (k, m.to_vec())).collect()
    }

    #[test]
    fn incidence_examples() {
        let idx = build_incidence(&family(&[&[1, 2], &[2, 3]]));
        let got: Vec<_> = idx.iter().map(|(l, ids)| (l.0, ids)).collect();
        assert_eq!(got, vec![(1, vec![0]), (2, vec![0, 1]), (3, vec![1])]);
        assert!(build_incidence(&family(&[])).is_empty());
        let idx = build_incidence(&family(&[&[1], &[1]]));
        assert_eq!(
            idx.vector_ids(CoordinateLabel(1)).collect::<Vec<_>>(),
            vec![0, 1]
        );
        assert_eq!(idx.vector_ids(CoordinateLabel(5)).count(), 0);
    }

    #[test]
    fn components_of_three_vectors() {
        let d = family(&[&[1, 2], &[2, 3], &[4]]);
        let a = components_equivrel(&d).unwrap();
        let b = components_graph(&d).unwrap();
        assert_eq!(a, b);
        assert_eq!(components_as_vecs(&a), vec![(0, vec![0, 1]), (2, vec![2])]);
        assert_eq!(a.component_of(1), Some(0));
        assert_eq!(a.component_ids_by_member(), &[0, 0, 2]);
    }

    #[test]
    fn chain_and_star_form_one_component() {
        for supports in [
            &[&[1u64, 2][..], &[2, 3], &[3, 4]][..],
            &[&[1, 2], &[1, 3], &[1, 4]],
        ] {
            let d = family(supports);
            let a = components_equivrel(&d).unwrap();
            assert_eq!(a, components_graph(&d).unwrap());
            assert_eq!(components_as_vecs(&a), vec![(0, vec![0, 1, 2])]);
        }
    }

    #[test]
    fn disjoint_supports_are_singletons() {
        let d = family(&[&[1], &[2, 3], &[4, 5, 6]]);
        let a = components_equivrel(&d).unwrap();
        assert_eq!(a.len(), 3);
        let part = disjoint_partition(&d, &a).unwrap();
        assert_eq!(part.to_vecs(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn zero_member_rejected() {
        let d = family(&[&[1], &[]]);
        assert_eq!(components_equivrel(&d), Err(Error::ZeroMember { id: 1 }));
        assert_eq!(components_graph(&d), Err(Error::ZeroMember { id: 1 }));
    }

    #[test]
    fn partition_examples() {
        let d = family(&[&[1, 2], &[2, 3], &[4]]);
        let comp = components_equivrel(&d).unwrap();
        let part = disjoint_partition(&d, &comp).unwrap();
        assert_eq!(part.to_vecs(), vec![vec![0, 2], vec![1]]);
        verify_partition(&d, &part).unwrap();
        let report = part.report(&comp);
        assert_eq!(report.n_groups, 2);
        assert_eq!(report.max_component, 2);
        assert_eq!(report.component_size_histogram, vec![(1, 1), (2, 1)]);

        let chain = family(&[&[1, 2], &[2, 3], &[3, 4], &[4, 5]]);
        let comp = components_graph(&chain).unwrap();
        let part = disjoint_partition(&chain, &comp).unwrap();
        assert_eq!(part.to_vecs(), vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn verification_catches_bad_partitions() {
        let d = family(&[&[1, 2], &[2, 3], &[4]]);
        let overlap = DisjointPartition::from_groups([vec![0, 1], vec![2]]);
        assert!(matches!(
            verify_partition(&d, &overlap),
            Err(PartitionViolation::Overlap {
                label: CoordinateLabel(2),
                ..
            })
        ));
        let missing = DisjointPartition::from_groups([vec![0, 2]]);
        assert_eq!(
            verify_partition(&d, &missing),
            Err(PartitionViolation::Missing(1))
        );
        let dup = DisjointPartition::from_groups([vec![0, 2], vec![1, 2]]);
        assert_eq!(
            verify_partition(&d, &dup),
            Err(PartitionViolation::Duplicate(2))
        );
    }

    #[test]
    fn foreign_decomposition_rejected() {
        let d = family(&[&[1, 2], &[2, 3], &[4]]);
        let other = family(&[&[1]]);
        let comp = components_equivrel(&other).unwrap();
        assert_eq!(
            disjoint_partition(&d, &comp),
            Err(Error::ForeignDecomposition)
        );
    }
}
