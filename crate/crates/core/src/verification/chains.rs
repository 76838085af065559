use serde::Serialize;

use super::subspace::{kernel_basis, subspace_equal, SubspaceBasis};
use crate::error::{Error, Result};
use crate::operator::LinearOperator;
use crate::operator_builder::{dense_image_operator, group_weight, InjectionMap};
use crate::scalar::Scalar;
use crate::space::{annihilator, pre_annihilator, SparseVector, VectorFamily};
use crate::support_graph::{
    build_incidence, components_equivrel_with, components_graph_with, disjoint_partition,
    verify_partition,
};

/// Outcome of one subspace identity, with the dimensions of both sides and,
/// on failure, a basis vector of one side missing from the other.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResult {
    pub identity: String,
    pub holds: bool,
    pub left_dim: usize,
    pub right_dim: usize,
    pub witness: Option<Vec<(u64, String)>>,
}

fn compare<S: Scalar>(
    identity: &str,
    left: &SubspaceBasis<S>,
    right: &SubspaceBasis<S>,
    tol: f64,
) -> Result<IdentityResult> {
    let holds = subspace_equal(left, right, tol)?;
    let witness = if holds {
        None
    } else {
        missing_vector(left, right, tol).or_else(|| missing_vector(right, left, tol))
    };
    Ok(IdentityResult {
        identity: identity.to_string(),
        holds,
        left_dim: left.dim(),
        right_dim: right.dim(),
        witness,
    })
}

/// A basis vector of `b` outside `a`.
fn missing_vector<S: Scalar>(
    a: &SubspaceBasis<S>,
    b: &SubspaceBasis<S>,
    tol: f64,
) -> Option<Vec<(u64, String)>> {
    b.echelon()
        .rows()
        .iter()
        .find(|r| !a.echelon().contains(r, tol))
        .map(|r| r.iter().map(|(l, v)| (*l, v.to_string())).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualityChainReport {
    pub rank: usize,
    pub nullity: usize,
    pub identities: Vec<IdentityResult>,
}

impl DualityChainReport {
    pub fn passed(&self) -> bool {
        self.identities.iter().all(|i| i.holds)
    }
}

/// With `R` the span of the rows of `T` in the dual model, checks
/// (i) `ker T = R_⊥`, (ii) `(ker T)^⊥ = R` and (iii) `((ker T)^⊥)_⊥ = ker T`.
pub fn check_duality_chain<S: Scalar>(
    t: &LinearOperator<S>,
    tol: f64,
) -> Result<DualityChainReport> {
    if !t.domain().is_reflexive() {
        return Err(Error::NotReflexive(t.domain().to_string()));
    }
    let kernel = kernel_basis(t);
    let rows = t.row_family();
    let row_space = SubspaceBasis::span(&rows);
    let kernel_perp = annihilator(&kernel.basis());
    let identities = vec![
        compare(
            "ker T = (row space)_perp",
            &kernel,
            &SubspaceBasis::span(&pre_annihilator(&rows)),
            tol,
        )?,
        compare(
            "(ker T)^perp = row space",
            &SubspaceBasis::span(&kernel_perp),
            &row_space,
            tol,
        )?,
        compare(
            "((ker T)^perp)_perp = ker T",
            &SubspaceBasis::span(&pre_annihilator(&kernel_perp)),
            &kernel,
            tol,
        )?,
    ];
    Ok(DualityChainReport {
        rank: row_space.dim(),
        nullity: kernel.dim(),
        identities,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma25Report {
    pub n_vectors: usize,
    pub n_components: usize,
    pub n_groups: usize,
    pub component_size_histogram: Vec<(usize, usize)>,
    pub algorithms_agree: bool,
    pub partition_violation: Option<String>,
    pub rank: usize,
    pub dim_span: usize,
    /// Members of `D` not in the column space of `T`.
    pub outside_column_space: Vec<u64>,
    /// Members whose image `T(2ⁿ e_θ(d,n))` is not their normalisation.
    pub unit_mismatches: Vec<u64>,
}

impl Lemma25Report {
    pub fn passed(&self) -> bool {
        self.algorithms_agree
            && self.partition_violation.is_none()
            && self.rank == self.dim_span
            && self.outside_column_space.is_empty()
            && self.unit_mismatches.is_empty()
    }
}

/// Incidence index, both component algorithms, the disjoint partition and the
/// dense-image operator for `D`, checking that `T` has column space `span D`.
pub fn check_lemma25_roundtrip<S: Scalar>(d: &VectorFamily<S>, tol: f64) -> Result<Lemma25Report> {
    let index = build_incidence(d);
    let by_forest = components_equivrel_with(d, &index)?;
    let by_search = components_graph_with(d, &index)?;
    let partition = disjoint_partition(d, &by_forest)?;
    let partition_violation = verify_partition(d, &partition).err().map(|v| v.to_string());
    let theta = InjectionMap::allocate_tail(&partition, d.space().universe_size())?;
    let image = dense_image_operator(d, &partition, &theta)?;
    let t = image.operator();
    let columns = SubspaceBasis::span(&t.column_family());
    let mut outside_column_space = Vec::new();
    for (id, v) in d.members() {
        if !columns.contains(v, tol)? {
            outside_column_space.push(*id);
        }
    }
    let mut unit_mismatches = Vec::new();
    for p in image.placements() {
        let w: S = group_weight(p.group);
        let x = SparseVector::unit(d.space().clone(), p.label)?.scaled(&(S::one() / w));
        let tx = t.apply(&x)?;
        let same = if S::EXACT {
            tx == p.normalized
        } else {
            let diff = tx.add_scaled(&-S::one(), &p.normalized)?;
            diff.norm() <= tol * p.normalized.norm()
        };
        if !same {
            unit_mismatches.push(p.vector_id);
        }
    }
    let report = partition.report(&by_forest);
    Ok(Lemma25Report {
        n_vectors: report.n_vectors,
        n_components: report.n_components,
        n_groups: report.n_groups,
        component_size_histogram: report.component_size_histogram,
        algorithms_agree: by_forest == by_search,
        partition_violation,
        rank: t.rank(),
        dim_span: d.rank(),
        outside_column_space,
        unit_mismatches,
    })
}

/// `ker T = span Y`, with `Y` read in the domain model of `T`.
pub fn certify_kernel<S: Scalar>(
    t: &LinearOperator<S>,
    y: &VectorFamily<S>,
    tol: f64,
) -> Result<IdentityResult> {
    let y = y.rehomed(t.domain().clone())?;
    compare(
        "ker T = span Y",
        &kernel_basis(t),
        &SubspaceBasis::span(&y),
        tol,
    )
}

/// `column space of T = span D`, with `D` read in the codomain model of `T`.
pub fn certify_column_space<S: Scalar>(
    t: &LinearOperator<S>,
    d: &VectorFamily<S>,
    tol: f64,
) -> Result<IdentityResult> {
    let d = d.rehomed(t.codomain().clone())?;
    compare(
        "column space of T = span D",
        &SubspaceBasis::span(&t.column_family()),
        &SubspaceBasis::span(&d),
        tol,
    )
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::scalar::{Exponent, Rational};
    use crate::space::{CoordinateLabel, SpaceDescriptor};
    use crate::verification::DEFAULT_SUBSPACE_TOL;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn space(n: u64) -> Arc<SpaceDescriptor> {
        Arc::new(SpaceDescriptor::lp(Exponent::from_integer(2), n).unwrap())
    }

    fn family(s: &Arc<SpaceDescriptor>, vs: &[&[(u64, i64)]]) -> VectorFamily<Rational> {
        VectorFamily::from_vectors(
            s.clone(),
            vs.iter().map(|e| {
                SparseVector::new(
                    s.clone(),
                    e.iter().map(|&(l, v)| (CoordinateLabel(l), q(v))),
                )
                .unwrap()
            }),
        )
        .unwrap()
    }

    #[test]
    fn chain_on_zero_and_rank_one() {
        let s = space(4);
        let zero = LinearOperator::<Rational>::zero(s.clone(), s.clone());
        let report = check_duality_chain(&zero, DEFAULT_SUBSPACE_TOL).unwrap();
        assert!(report.passed());
        assert_eq!((report.rank, report.nullity), (0, 4));

        let rank_one = LinearOperator::new(
            s.clone(),
            s.clone(),
            [0, 1, 3].map(|c| (CoordinateLabel(2), CoordinateLabel(c), q(c as i64 + 1))),
        )
        .unwrap();
        let report = check_duality_chain(&rank_one, DEFAULT_SUBSPACE_TOL).unwrap();
        assert!(report.passed());
        assert_eq!((report.rank, report.nullity), (1, 3));
    }

    #[test]
    fn chain_rejects_l1() {
        let s = Arc::new(SpaceDescriptor::lp(Exponent::from_integer(1), 2).unwrap());
        let t = LinearOperator::<Rational>::identity(s);
        assert!(matches!(
            check_duality_chain(&t, DEFAULT_SUBSPACE_TOL),
            Err(Error::NotReflexive(_))
        ));
    }

    #[test]
    fn roundtrip_on_disjoint_units_and_chain() {
        let s = space(16);
        let units = family(&s, &[&[(0, 1)], &[(3, 1)], &[(5, 1)]]);
        let report = check_lemma25_roundtrip(&units, DEFAULT_SUBSPACE_TOL).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!((report.n_groups, report.rank), (1, 3));

        let chain = family(
            &s,
            &[&[(1, 1), (2, 1)], &[(2, 1), (3, 1)], &[(3, 1), (4, 1)]],
        );
        let report = check_lemma25_roundtrip(&chain, DEFAULT_SUBSPACE_TOL).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.n_groups, 3);
        assert_eq!(report.rank, 3);
        assert_eq!(report.component_size_histogram, vec![(3, 1)]);
    }

    #[test]
    fn failing_identity_has_witness() {
        let s = space(3);
        let a = SubspaceBasis::span(&family(&s, &[&[(0, 1)]]));
        let b = SubspaceBasis::span(&family(&s, &[&[(1, 1)]]));
        let r = compare("x", &a, &b, DEFAULT_SUBSPACE_TOL).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness, Some(vec![(1, "1".to_string())]));
    }
}
