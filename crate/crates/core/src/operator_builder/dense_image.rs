use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::injection::InjectionMap;
use crate::error::{Error, Result};
use crate::operator::LinearOperator;
use crate::scalar::{integer_exponent, Scalar};
use crate::space::{CoordinateLabel, SpaceKind, SparseVector, VectorFamily};
use crate::support_graph::{
    components_equivrel, disjoint_partition, verify_partition, ComponentDecomposition,
    DisjointPartition,
};

/// Relative slack for norm comparisons that cannot be done exactly.
pub const NORM_REL_TOL: f64 = 1e-12;

/// Where one grouped vector went: column `label` of the operator equals
/// `normalized / 2^group`.
#[derive(Clone, Debug, PartialEq)]
pub struct Placement<S> {
    pub vector_id: u64,
    pub group: usize,
    pub label: CoordinateLabel,
    /// `c·d` with `0 < c ≤ 1/‖d‖`.
    pub normalized: SparseVector<S>,
    /// Whether `c = 1/‖d‖` exactly.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseImage<S> {
    operator: LinearOperator<S>,
    placements: Vec<Placement<S>>,
    n_groups: usize,
}

impl<S: Scalar> DenseImage<S> {
    pub fn operator(&self) -> &LinearOperator<S> {
        &self.operator
    }

    pub fn into_operator(self) -> LinearOperator<S> {
        self.operator
    }

    /// In group order, ascending id within a group.
    pub fn placements(&self) -> &[Placement<S>] {
        &self.placements
    }

    pub fn n_groups(&self) -> usize {
        self.n_groups
    }

    pub fn all_exact(&self) -> bool {
        self.placements.iter().all(|p| p.exact)
    }
}

/// `2^-n`, exact in both fields.
pub fn group_weight<S: Scalar>(n: usize) -> S {
    let half = S::from_ratio(1, 2);
    (0..n).fold(S::one(), |w, _| w * half.clone())
}

/// The operator `x ↦ Σ_n U_n(x∘θ_n)/2ⁿ`, where `U_n` sends the unit vector at
/// `θ(d, n)` to the normalisation of `d`. Its column space is `span D`.
pub fn dense_image_operator<S: Scalar>(
    family: &VectorFamily<S>,
    partition: &DisjointPartition,
    theta: &InjectionMap,
) -> Result<DenseImage<S>> {
    verify_partition(family, partition).map_err(|v| Error::InvalidPartition(v.to_string()))?;
    let space = family.space().clone();
    let mut placements = Vec::with_capacity(partition.len());
    let mut columns = Vec::with_capacity(partition.len());
    let mut weight = S::one();
    let half = S::from_ratio(1, 2);
    for (k, group) in partition.groups().enumerate() {
        let n = k + 1;
        weight = weight * half.clone();
        for &id in group {
            let d = family.get(id).expect("verified partition members exist");
            let label = theta
                .get(id, n)
                .ok_or(Error::MissingPlacement { id, group: n })?;
            if !space.contains(label) {
                return Err(Error::LabelOutsideUniverse {
                    label,
                    universe_size: space.universe_size(),
                });
            }
            let c = d
                .reciprocal_norm()
                .expect("verified partition members are nonzero");
            let normalized = d.scaled(&c.value);
            columns.push((label, normalized.scaled(&weight)));
            placements.push(Placement {
                vector_id: id,
                group: n,
                label,
                normalized,
                exact: c.exact,
            });
        }
    }
    let operator = LinearOperator::from_columns(space.clone(), space, columns)?;
    Ok(DenseImage {
        operator,
        placements,
        n_groups: partition.n_groups(),
    })
}

/// Every intermediate of the support-partition route to a dense-image operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseImageBuild<S> {
    pub components: ComponentDecomposition,
    pub partition: DisjointPartition,
    pub theta: InjectionMap,
    pub image: DenseImage<S>,
}

/// Drops zero members, splits the rest into disjoint-support groups and
/// places them on the highest labels of the universe.
pub fn build_dense_image<S: Scalar>(family: &VectorFamily<S>) -> Result<DenseImageBuild<S>> {
    let nonzero = family.without_zeros();
    let components = components_equivrel(&nonzero)?;
    let partition = disjoint_partition(&nonzero, &components)?;
    let theta = InjectionMap::allocate_tail(&partition, family.space().universe_size())?;
    let image = dense_image_operator(&nonzero, &partition, &theta)?;
    Ok(DenseImageBuild {
        components,
        partition,
        theta,
        image,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormViolation {
    /// `contraction` or `block isometry`.
    pub check: String,
    pub group: Option<usize>,
    pub x: Vec<(u64, String)>,
    pub input_norm: f64,
    pub image_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormBoundReport {
    pub trials: usize,
    /// Whether every comparison was decided in exact arithmetic.
    pub exact: bool,
    pub violations: Vec<NormViolation>,
}

impl NormBoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples `trials` vectors for `‖Tx‖ ≤ ‖x‖` and `trials` vectors supported on
/// a single group's labels for `‖Tx‖ = 2⁻ⁿ‖x‖`. Comparisons use `‖·‖^p` in
/// exact arithmetic when `p` is an integer (or the model is `c₀`), and a
/// relative tolerance of [`NORM_REL_TOL`] otherwise.
pub fn operator_norm_bound_check<S: Scalar>(
    image: &DenseImage<S>,
    trials: usize,
    seed: u64,
) -> Result<NormBoundReport> {
    let t = &image.operator;
    let space = t.domain().clone();
    let power = match space.kind() {
        SpaceKind::Lp(p) => integer_exponent(p),
        SpaceKind::C0 => Some(1),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut exact = S::EXACT && power.is_some();
    let mut violations = Vec::new();
    let labels: Vec<CoordinateLabel> = image.placements.iter().map(|p| p.label).collect();
    let n = space.universe_size();

    for _ in 0..trials {
        let size = rng.random_range(1..=8usize);
        let mut entries = Vec::with_capacity(size);
        for _ in 0..size {
            let label = if !labels.is_empty() && rng.random_bool(0.75) {
                labels[rng.random_range(0..labels.len())]
            } else {
                CoordinateLabel(rng.random_range(0..n))
            };
            entries.push((label, random_value::<S>(&mut rng)));
        }
        entries.sort_by_key(|(l, _)| *l);
        entries.dedup_by_key(|(l, _)| *l);
        let x = SparseVector::new(space.clone(), entries)?;
        let tx = t.apply(&x)?;
        let (txp, xp) = (tx.norm_pow(), x.norm_pow());
        let holds = if exact && txp.exact && xp.exact {
            txp.value <= xp.value
        } else {
            exact = false;
            tx.norm() <= x.norm() * (1.0 + NORM_REL_TOL)
        };
        if !holds {
            violations.push(violation("contraction", None, &x, &tx));
        }
    }

    if image.n_groups > 0 {
        for _ in 0..trials {
            let group = rng.random_range(1..=image.n_groups);
            let members: Vec<&Placement<S>> = image
                .placements
                .iter()
                .filter(|p| p.group == group)
                .collect();
            let mut entries: Vec<(CoordinateLabel, S)> = Vec::new();
            for p in &members {
                if rng.random_bool(0.5) {
                    entries.push((p.label, random_value::<S>(&mut rng)));
                }
            }
            if entries.is_empty() {
                let p = members[rng.random_range(0..members.len())];
                entries.push((p.label, random_value::<S>(&mut rng)));
            }
            let x = SparseVector::new(space.clone(), entries)?;
            let tx = t.apply(&x)?;
            let weight: S = group_weight(group);
            let (txp, xp) = (tx.norm_pow(), x.norm_pow());
            let group_exact = members.iter().all(|p| p.exact);
            let holds = match power {
                Some(p) if exact && group_exact && txp.exact && xp.exact => {
                    let scale = (0..p).fold(S::one(), |acc, _| acc * weight.clone());
                    txp.value == xp.value * scale
                }
                _ => {
                    exact = false;
                    let expected = weight.to_f64() * x.norm();
                    (tx.norm() - expected).abs() <= NORM_REL_TOL * expected
                }
            };
            if !holds {
                violations.push(violation("block isometry", Some(group), &x, &tx));
            }
        }
    }

    Ok(NormBoundReport {
        trials,
        exact,
        violations,
    })
}

fn random_value<S: Scalar>(rng: &mut ChaCha8Rng) -> S {
    let mut num = rng.random_range(-8..=7i64);
    if num >= 0 {
        num += 1;
    }
    S::from_ratio(num, rng.random_range(1..=8))
}

fn violation<S: Scalar>(
    check: &str,
    group: Option<usize>,
    x: &SparseVector<S>,
    tx: &SparseVector<S>,
) -> NormViolation {
    NormViolation {
        check: check.to_string(),
        group,
        x: x.entries()
            .iter()
            .map(|(l, v)| (l.0, v.to_string()))
            .collect(),
        input_norm: x.norm(),
        image_norm: tx.norm(),
    }
}
