use std::sync::Arc;

use crate::biorthogonal::{markushevich, BiorthogonalSystem};
use crate::error::{Error, Result};
use crate::operator::LinearOperator;
use crate::scalar::Scalar;
use crate::space::{annihilator, CoordinateLabel, SpaceDescriptor, VectorFamily};

use super::dense_image::{build_dense_image, DenseImageBuild};

/// The reflexive route: `Z = Y^⊥`, a biorthogonal system spanning `Z`, a
/// dense-image operator `S` onto `Z`, and `T = S*` with `ker T = Z_⊥ = Y`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualityKernel<S> {
    pub annihilator: VectorFamily<S>,
    /// `None` when `Y` is the whole space and `Z = {0}`.
    pub system: Option<BiorthogonalSystem<S>>,
    pub dense_image: Option<DenseImageBuild<S>>,
    pub operator: LinearOperator<S>,
}

pub fn kernel_operator_via_duality<S: Scalar>(y: &VectorFamily<S>) -> Result<DualityKernel<S>> {
    let space = y.space().clone();
    if !space.is_reflexive() {
        return Err(Error::NotReflexive(space.to_string()));
    }
    let z = annihilator(y);
    if z.is_empty() {
        return Ok(DualityKernel {
            annihilator: z,
            system: None,
            dense_image: None,
            operator: LinearOperator::zero(space.clone(), space),
        });
    }
    let system = markushevich(&z)?;
    let build = build_dense_image(system.vectors())?;
    let operator = build.image.operator().adjoint();
    Ok(DualityKernel {
        annihilator: z,
        system: Some(system),
        dense_image: Some(build),
        operator,
    })
}

/// The quotient route `T = R∘q`. `q` projects along `span Y` onto the
/// coordinates that are not pivots of the echelon form of `Y`; `R` moves the
/// `k`-th of those coordinates to label `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientKernel<S> {
    pub complement: Vec<CoordinateLabel>,
    pub quotient: LinearOperator<S>,
    pub reembedding: LinearOperator<S>,
    pub operator: LinearOperator<S>,
}

pub fn kernel_operator_via_quotient<S: Scalar>(
    y: &VectorFamily<S>,
    x: &Arc<SpaceDescriptor>,
) -> Result<QuotientKernel<S>> {
    if y.space().universe_size() != x.universe_size() {
        return Err(Error::UniverseMismatch {
            left: y.space().universe_size(),
            right: x.universe_size(),
        });
    }
    let echelon = y.echelon();
    let pivots = echelon.pivots();
    let complement: Vec<CoordinateLabel> = x
        .labels()
        .filter(|l| pivots.binary_search(&l.0).is_err())
        .collect();
    let mut q = Vec::new();
    for c in &complement {
        q.push((*c, *c, S::one()));
    }
    // x − q(x) = Σ x(p_i)·r_i lies in span Y.
    for (row, &pivot) in echelon.rows().iter().zip(pivots) {
        for (col, v) in row {
            if *col != pivot {
                q.push((CoordinateLabel(*col), CoordinateLabel(pivot), -v.clone()));
            }
        }
    }
    let quotient = LinearOperator::new(x.clone(), x.clone(), q)?;
    let reembedding = LinearOperator::new(
        x.clone(),
        x.clone(),
        complement
            .iter()
            .enumerate()
            .map(|(k, c)| (CoordinateLabel(k as u64), *c, S::one())),
    )?;
    let operator = reembedding.compose(&quotient)?;
    Ok(QuotientKernel {
        complement,
        quotient,
        reembedding,
        operator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Exponent, Rational};
    use crate::space::SparseVector;
    use crate::verification::{kernel_basis, subspace_equal, SubspaceBasis, DEFAULT_SUBSPACE_TOL};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn lp(p: Exponent, n: u64) -> Arc<SpaceDescriptor> {
        Arc::new(SpaceDescriptor::lp(p, n).unwrap())
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

    fn kernel_is_span(t: &LinearOperator<Rational>, y: &VectorFamily<Rational>) -> bool {
        let y = y.rehomed(t.domain().clone()).unwrap();
        subspace_equal(
            &kernel_basis(t),
            &SubspaceBasis::span(&y),
            DEFAULT_SUBSPACE_TOL,
        )
        .unwrap()
    }

    #[test]
    fn duality_on_first_coordinate() {
        let s = lp(Exponent::from_integer(2), 2);
        let y = family(&s, &[&[(0, 1)]]);
        let k = kernel_operator_via_duality(&y).unwrap();
        assert_eq!(k.annihilator.rows(), vec![vec![(1, q(1))]]);
        assert!(kernel_is_span(&k.operator, &y));
        assert_eq!(k.operator.domain(), &s);
    }

    #[test]
    fn duality_extremes() {
        let s = lp(Exponent::new(3, 2), 3);
        let full = family(&s, &[&[(0, 1)], &[(1, 1)], &[(2, 1)]]);
        let k = kernel_operator_via_duality(&full).unwrap();
        assert_eq!(k.operator.nnz(), 0);
        let zero = family(&s, &[]);
        let k = kernel_operator_via_duality(&zero).unwrap();
        assert_eq!(k.operator.rank(), 3);
    }

    #[test]
    fn duality_needs_reflexivity() {
        let l1 = lp(Exponent::from_integer(1), 3);
        assert!(matches!(
            kernel_operator_via_duality(&family(&l1, &[&[(0, 1)]])),
            Err(Error::NotReflexive(_))
        ));
        let c0 = Arc::new(SpaceDescriptor::c0(3));
        assert!(matches!(
            kernel_operator_via_duality(&family(&c0, &[&[(0, 1)]])),
            Err(Error::NotReflexive(_))
        ));
    }

    #[test]
    fn quotient_on_last_coordinate() {
        for x in [
            lp(Exponent::from_integer(2), 3),
            Arc::new(SpaceDescriptor::c0(3)),
        ] {
            let y = family(&x, &[&[(2, 1)]]);
            let k = kernel_operator_via_quotient(&y, &x).unwrap();
            assert_eq!(
                k.operator.triplets(),
                &[
                    (CoordinateLabel(0), CoordinateLabel(0), q(1)),
                    (CoordinateLabel(1), CoordinateLabel(1), q(1))
                ]
            );
            assert!(kernel_is_span(&k.operator, &y));
        }
    }

    #[test]
    fn quotient_of_zero_is_injective_and_routes_agree() {
        let s = lp(Exponent::from_integer(3), 4);
        let k = kernel_operator_via_quotient(&family(&s, &[]), &s).unwrap();
        assert_eq!(k.operator.rank(), 4);

        let y = family(
            &s,
            &[
                &[(0, 1), (2, -3)],
                &[(1, 2), (3, 5)],
                &[(0, 2), (1, 2), (2, -6), (3, 5)],
            ],
        );
        let a = kernel_operator_via_quotient(&y, &s).unwrap().operator;
        let b = kernel_operator_via_duality(&y).unwrap().operator;
        assert!(kernel_is_span(&a, &y));
        assert!(kernel_is_span(&b, &y));
        assert_ne!(a, b);
    }
}
