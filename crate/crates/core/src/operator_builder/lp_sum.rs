use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{CoordinateLabel, SpaceDescriptor, SpaceKind, SparseVector, VectorFamily};
use crate::support_graph::ComponentDecomposition;

use super::dense_image::NORM_REL_TOL;

/// One block `Y_ξ`: the span of a component, with the union of its supports.
#[derive(Clone, Debug, PartialEq)]
pub struct LpSumBlock<S> {
    pub component: u64,
    /// Members of the component that raise the rank, in id order.
    pub basis: VectorFamily<S>,
    /// Ascending.
    pub support: Vec<CoordinateLabel>,
}

/// `span Y` as a direct sum of blocks with pairwise disjoint supports.
#[derive(Clone, Debug, PartialEq)]
pub struct LpSumDecomposition<S> {
    space: Arc<SpaceDescriptor>,
    blocks: Vec<LpSumBlock<S>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsometryCheck {
    /// `‖Σ z_ξ‖^p` (or the max norm for `c₀`).
    pub combined: String,
    /// `Σ ‖z_ξ‖^p` (or the largest block norm for `c₀`).
    pub blockwise: String,
    pub exact: bool,
    pub holds: bool,
}

pub fn lp_sum_decomposition<S: Scalar>(
    y: &VectorFamily<S>,
    components: &ComponentDecomposition,
) -> Result<LpSumDecomposition<S>> {
    if !y.ids().eq(components.vector_ids().iter().copied()) {
        return Err(Error::ForeignDecomposition);
    }
    let mut owner: HashMap<CoordinateLabel, usize> = HashMap::new();
    let mut blocks = Vec::with_capacity(components.len());
    for (k, (component, members)) in components.components().enumerate() {
        let mut family = VectorFamily::new(y.space().clone());
        for &id in members {
            family.push(id, y.get(id).expect("ids checked").clone())?;
        }
        let mut support: Vec<CoordinateLabel> =
            family.vectors().flat_map(|v| v.support()).collect();
        support.sort_unstable();
        support.dedup();
        for &label in &support {
            if let Some(first) = owner.insert(label, k) {
                return Err(Error::OverlappingBlocks {
                    first,
                    second: k,
                    label,
                });
            }
        }
        let echelon = family.echelon();
        let mut basis = VectorFamily::new(y.space().clone());
        for &i in echelon.independent() {
            let (id, v) = &family.members()[i];
            basis.push(*id, v.clone())?;
        }
        blocks.push(LpSumBlock {
            component,
            basis,
            support,
        });
    }
    Ok(LpSumDecomposition {
        space: y.space().clone(),
        blocks,
    })
}

impl<S: Scalar> LpSumDecomposition<S> {
    pub fn space(&self) -> &Arc<SpaceDescriptor> {
        &self.space
    }

    pub fn blocks(&self) -> &[LpSumBlock<S>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `Σ coefficients[i]·basis_i` inside block `block`; extra coefficients
    /// are ignored and missing ones count as zero.
    pub fn block_vector(&self, block: usize, coefficients: &[S]) -> SparseVector<S> {
        let mut z = SparseVector::zero(self.space.clone());
        for (v, c) in self.blocks[block].basis.vectors().zip(coefficients) {
            z = z.add_scaled(c, v).expect("same space");
        }
        z
    }

    /// Checks that `‖Σ z_ξ‖^p = Σ ‖z_ξ‖^p` for one vector `z_ξ` per block.
    pub fn check_isometry(&self, parts: &[SparseVector<S>]) -> Result<IsometryCheck> {
        if parts.len() != self.blocks.len() {
            return Err(Error::InvalidPartition(format!(
                "expected {} block vectors, got {}",
                self.blocks.len(),
                parts.len()
            )));
        }
        let mut z = SparseVector::zero(self.space.clone());
        let mut blockwise = S::zero();
        let mut exact = S::EXACT;
        for (k, part) in parts.iter().enumerate() {
            self.space.check_same(part.space())?;
            if let Some(label) = part
                .support()
                .find(|l| self.blocks[k].support.binary_search(l).is_err())
            {
                return Err(Error::OutsideBlock { block: k, label });
            }
            let norm = part.norm_pow();
            exact &= norm.exact;
            blockwise = match self.space.kind() {
                SpaceKind::Lp(_) => blockwise + norm.value,
                SpaceKind::C0 if norm.value > blockwise => norm.value,
                SpaceKind::C0 => blockwise,
            };
            z = z.add_scaled(&S::one(), part)?;
        }
        let combined = z.norm_pow();
        exact &= combined.exact;
        let holds = if exact {
            combined.value == blockwise
        } else {
            let (a, b) = (combined.value.to_f64(), blockwise.to_f64());
            (a - b).abs() <= NORM_REL_TOL * a.abs().max(b.abs())
        };
        Ok(IsometryCheck {
            combined: combined.value.to_string(),
            blockwise: blockwise.to_string(),
            exact,
            holds,
        })
    }
}
