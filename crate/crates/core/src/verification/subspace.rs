use std::sync::Arc;

use crate::echelon::{Echelon, SparseRow};
use crate::error::Result;
use crate::operator::LinearOperator;
use crate::scalar::Scalar;
use crate::space::{SpaceDescriptor, SparseVector, VectorFamily};

/// Relative residual under which float-mode subspaces are considered equal.
pub const DEFAULT_SUBSPACE_TOL: f64 = 1e-9;

/// A subspace stored as the reduced echelon form of any spanning set, so that
/// two exact bases of the same subspace compare equal directly.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceBasis<S> {
    ambient: Arc<SpaceDescriptor>,
    echelon: Echelon<S>,
}

impl<S: Scalar> SubspaceBasis<S> {
    pub fn span(family: &VectorFamily<S>) -> Self {
        SubspaceBasis {
            ambient: family.space().clone(),
            echelon: family.echelon(),
        }
    }

    pub fn from_rows(ambient: Arc<SpaceDescriptor>, rows: Vec<SparseRow<S>>) -> Self {
        SubspaceBasis {
            ambient,
            echelon: Echelon::new(rows),
        }
    }

    pub fn ambient(&self) -> &Arc<SpaceDescriptor> {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    pub fn echelon(&self) -> &Echelon<S> {
        &self.echelon
    }

    /// The canonical basis, numbered `0..dim`.
    pub fn basis(&self) -> VectorFamily<S> {
        VectorFamily::from_rows(self.ambient.clone(), self.echelon.rows().to_vec())
    }

    pub fn contains(&self, v: &SparseVector<S>, tol: f64) -> Result<bool> {
        self.ambient.check_same(v.space())?;
        Ok(self.echelon.contains(&v.to_row(), tol))
    }
}

/// `{x : Tx = 0}` in canonical form.
pub fn kernel_basis<S: Scalar>(t: &LinearOperator<S>) -> SubspaceBasis<S> {
    let rows = Echelon::new(t.rows().into_iter().map(|(_, r)| r).collect());
    SubspaceBasis::from_rows(
        t.domain().clone(),
        rows.null_space(t.domain().universe_size()),
    )
}

/// Exact mode compares canonical forms; float mode checks that each basis
/// lies in the other's span up to the relative residual `tol`.
pub fn subspace_equal<S: Scalar>(
    a: &SubspaceBasis<S>,
    b: &SubspaceBasis<S>,
    tol: f64,
) -> Result<bool> {
    a.ambient.check_same(&b.ambient)?;
    if a.dim() != b.dim() {
        return Ok(false);
    }
    if S::EXACT {
        return Ok(a.echelon.rows() == b.echelon.rows());
    }
    let inside = |x: &SubspaceBasis<S>, y: &SubspaceBasis<S>| {
        y.echelon.rows().iter().all(|r| x.echelon.contains(r, tol))
    };
    Ok(inside(a, b) && inside(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::scalar::{Exponent, Rational};
    use crate::space::CoordinateLabel;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn l2(n: u64) -> Arc<SpaceDescriptor> {
        Arc::new(SpaceDescriptor::lp(Exponent::from_integer(2), n).unwrap())
    }

    fn span_of(space: &Arc<SpaceDescriptor>, vs: &[&[(u64, i64)]]) -> SubspaceBasis<Rational> {
        let family = VectorFamily::from_vectors(
            space.clone(),
            vs.iter().map(|e| {
                SparseVector::new(
                    space.clone(),
                    e.iter().map(|&(l, v)| (CoordinateLabel(l), q(v))),
                )
                .unwrap()
            }),
        )
        .unwrap();
        SubspaceBasis::span(&family)
    }

    fn op(n: u64, entries: &[(u64, u64, i64)]) -> LinearOperator<Rational> {
        LinearOperator::new(
            l2(n),
            l2(n),
            entries
                .iter()
                .map(|&(r, c, v)| (CoordinateLabel(r), CoordinateLabel(c), q(v))),
        )
        .unwrap()
    }

    #[test]
    fn kernels_of_simple_operators() {
        assert_eq!(
            kernel_basis(&LinearOperator::<Rational>::identity(l2(4))).dim(),
            0
        );
        let zero = kernel_basis(&LinearOperator::<Rational>::zero(l2(3), l2(3)));
        assert_eq!(zero.dim(), 3);
        assert_eq!(zero, span_of(&l2(3), &[&[(0, 1)], &[(1, 1)], &[(2, 1)]]));
        let t = op(3, &[(0, 0, 1), (0, 1, 1), (1, 2, 1)]);
        let k = kernel_basis(&t);
        assert_eq!(k.basis().rows(), vec![vec![(0, q(1)), (1, q(-1))]]);
        assert_eq!(k.dim() + t.rank(), 3);
    }

    #[test]
    fn equality_examples() {
        let s = l2(3);
        let e1 = span_of(&s, &[&[(0, 1)]]);
        assert!(subspace_equal(&e1, &e1, DEFAULT_SUBSPACE_TOL).unwrap());
        assert!(subspace_equal(&e1, &span_of(&s, &[&[(0, 2)]]), DEFAULT_SUBSPACE_TOL).unwrap());
        assert!(!subspace_equal(&e1, &span_of(&s, &[&[(1, 1)]]), DEFAULT_SUBSPACE_TOL).unwrap());
        let other = span_of(&l2(4), &[&[(0, 1)]]);
        assert!(matches!(
            subspace_equal(&e1, &other, DEFAULT_SUBSPACE_TOL),
            Err(Error::UniverseMismatch { .. } | Error::SpaceMismatch { .. })
        ));
    }

    #[test]
    fn float_equality_tolerates_rounding() {
        let s = l2(3);
        let fam = |vs: &[&[(u64, f64)]]| {
            VectorFamily::from_vectors(
                s.clone(),
                vs.iter().map(|e| {
                    SparseVector::new(s.clone(), e.iter().map(|&(l, v)| (CoordinateLabel(l), v)))
                        .unwrap()
                }),
            )
            .unwrap()
        };
        let a = SubspaceBasis::span(&fam(&[&[(0, 1.0), (1, 1.0)], &[(2, 1.0)]]));
        let b = SubspaceBasis::span(&fam(&[
            &[(0, 0.1), (1, 0.1), (2, 0.3)],
            &[(0, 3.0), (1, 3.0)],
        ]));
        assert!(subspace_equal(&a, &b, DEFAULT_SUBSPACE_TOL).unwrap());
        let c = SubspaceBasis::span(&fam(&[&[(0, 1.0)], &[(2, 1.0)]]));
        assert!(!subspace_equal(&a, &c, DEFAULT_SUBSPACE_TOL).unwrap());
    }
}
