//! Sparse linear operators between finite sequence-space models.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::echelon::{Echelon, SparseRow};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{CoordinateLabel, SpaceDescriptor, SparseVector, VectorFamily};

/// Matrix of an operator `domain → codomain` as `(row, col, value)` triplets,
/// sorted by `(row, col)` with no zeros and no repeated positions.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOperator<S> {
    domain: Arc<SpaceDescriptor>,
    codomain: Arc<SpaceDescriptor>,
    triplets: Vec<(CoordinateLabel, CoordinateLabel, S)>,
}

impl<S: Scalar> LinearOperator<S> {
    pub fn new(
        domain: Arc<SpaceDescriptor>,
        codomain: Arc<SpaceDescriptor>,
        triplets: impl IntoIterator<Item = (CoordinateLabel, CoordinateLabel, S)>,
    ) -> Result<Self> {
        let mut triplets: Vec<_> = triplets.into_iter().collect();
        triplets.sort_by_key(|(r, c, _)| (*r, *c));
        for w in triplets.windows(2) {
            if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
                return Err(Error::DuplicateLabel(w[0].1));
            }
        }
        for (r, c, _) in &triplets {
            if !codomain.contains(*r) {
                return Err(Error::LabelOutsideUniverse {
                    label: *r,
                    universe_size: codomain.universe_size(),
                });
            }
            if !domain.contains(*c) {
                return Err(Error::LabelOutsideUniverse {
                    label: *c,
                    universe_size: domain.universe_size(),
                });
            }
        }
        triplets.retain(|(_, _, v)| !v.is_zero());
        Ok(LinearOperator {
            domain,
            codomain,
            triplets,
        })
    }

    pub fn zero(domain: Arc<SpaceDescriptor>, codomain: Arc<SpaceDescriptor>) -> Self {
        LinearOperator {
            domain,
            codomain,
            triplets: Vec::new(),
        }
    }

    pub fn identity(space: Arc<SpaceDescriptor>) -> Self {
        let triplets = space.labels().map(|l| (l, l, S::one())).collect();
        LinearOperator {
            domain: space.clone(),
            codomain: space,
            triplets,
        }
    }

    /// Operator whose column `label` is the given vector; other columns vanish.
    pub fn from_columns(
        domain: Arc<SpaceDescriptor>,
        codomain: Arc<SpaceDescriptor>,
        columns: impl IntoIterator<Item = (CoordinateLabel, SparseVector<S>)>,
    ) -> Result<Self> {
        let mut triplets = Vec::new();
        for (col, v) in columns {
            codomain.check_same(v.space())?;
            triplets.extend(v.entries().iter().map(|(r, x)| (*r, col, x.clone())));
        }
        LinearOperator::new(domain, codomain, triplets)
    }

    pub fn domain(&self) -> &Arc<SpaceDescriptor> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<SpaceDescriptor> {
        &self.codomain
    }

    pub fn triplets(&self) -> &[(CoordinateLabel, CoordinateLabel, S)] {
        &self.triplets
    }

    pub fn nnz(&self) -> usize {
        self.triplets.len()
    }

    pub fn apply(&self, x: &SparseVector<S>) -> Result<SparseVector<S>> {
        self.domain.check_same(x.space())?;
        let mut out: Vec<(CoordinateLabel, S)> = Vec::new();
        for (row, col, a) in &self.triplets {
            let xv = x.get(*col);
            if xv.is_zero() {
                continue;
            }
            let term = a.clone() * xv;
            match out.last_mut() {
                Some((r, acc)) if r == row => *acc = acc.clone() + term,
                _ => out.push((*row, term)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        SparseVector::new(self.codomain.clone(), out)
    }

    /// Transpose, acting between the dual models.
    pub fn adjoint(&self) -> LinearOperator<S> {
        let mut triplets: Vec<_> = self
            .triplets
            .iter()
            .map(|(r, c, v)| (*c, *r, v.clone()))
            .collect();
        triplets.sort_by_key(|(r, c, _)| (*r, *c));
        LinearOperator {
            domain: Arc::new(self.codomain.dual()),
            codomain: Arc::new(self.domain.dual()),
            triplets,
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearOperator<S>) -> Result<LinearOperator<S>> {
        self.domain.check_same(&inner.codomain)?;
        let mut inner_rows: BTreeMap<CoordinateLabel, Vec<(CoordinateLabel, S)>> = BTreeMap::new();
        for (r, c, v) in &inner.triplets {
            inner_rows.entry(*r).or_default().push((*c, v.clone()));
        }
        let mut acc: BTreeMap<(CoordinateLabel, CoordinateLabel), S> = BTreeMap::new();
        for (i, j, a) in &self.triplets {
            if let Some(row) = inner_rows.get(j) {
                for (k, b) in row {
                    let slot = acc.entry((*i, *k)).or_insert_with(S::zero);
                    *slot = slot.clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(LinearOperator {
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            triplets: acc
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|((r, c), v)| (r, c, v))
                .collect(),
        })
    }

    /// Non-zero rows as `(row label, entries over domain labels)`.
    pub fn rows(&self) -> Vec<(CoordinateLabel, SparseRow<S>)> {
        let mut out: Vec<(CoordinateLabel, SparseRow<S>)> = Vec::new();
        for (r, c, v) in &self.triplets {
            match out.last_mut() {
                Some((label, row)) if label == r => row.push((c.0, v.clone())),
                _ => out.push((*r, vec![(c.0, v.clone())])),
            }
        }
        out
    }

    /// The rows as functionals on the domain: a spanning family of the range
    /// of the adjoint, keyed by row label.
    pub fn row_family(&self) -> VectorFamily<S> {
        let space = Arc::new(self.domain.dual());
        let mut family = VectorFamily::new(space.clone());
        for (label, row) in self.rows() {
            family
                .push(label.0, SparseVector::from_row(space.clone(), row))
                .expect("row labels ascend");
        }
        family
    }

    /// Non-zero columns as vectors in the codomain, keyed by column label.
    pub fn column_family(&self) -> VectorFamily<S> {
        let mut cols: BTreeMap<u64, SparseRow<S>> = BTreeMap::new();
        for (r, c, v) in &self.triplets {
            cols.entry(c.0).or_default().push((r.0, v.clone()));
        }
        let mut family = VectorFamily::new(self.codomain.clone());
        for (label, col) in cols {
            family
                .push(label, SparseVector::from_row(self.codomain.clone(), col))
                .expect("column labels ascend");
        }
        family
    }

    pub fn column(&self, label: CoordinateLabel) -> SparseVector<S> {
        let col = self
            .triplets
            .iter()
            .filter(|(_, c, _)| *c == label)
            .map(|(r, _, v)| (r.0, v.clone()))
            .collect();
        SparseVector::from_row(self.codomain.clone(), col)
    }

    /// Float ranks are taken over the columns, whose independence test is
    /// relative to each column's own norm.
    pub fn rank(&self) -> usize {
        if S::EXACT {
            return Echelon::new(self.rows().into_iter().map(|(_, r)| r).collect()).rank();
        }
        Echelon::new(self.column_family().vectors().map(|v| v.to_row()).collect()).rank()
    }
}
