//! Seeded generators for families, subspaces and operators.

use std::sync::Arc;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::LinearOperator;
use crate::scalar::Scalar;
use crate::space::{CoordinateLabel, SpaceDescriptor, SparseVector, VectorFamily};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportDistribution {
    Fixed(u64),
    /// `1 + Geometric`, so the mean support size is `mean`.
    Geometric {
        mean: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub n_vectors: u64,
    pub universe_size: u64,
    pub support: SupportDistribution,
    /// Inclusive numerator bounds; zero is skipped.
    pub value_range: (i64, i64),
    /// Denominators are drawn from `1..=max_den`.
    pub max_den: i64,
    pub seed: u64,
    pub space: SpaceDescriptor,
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.space.universe_size() != self.universe_size {
            return fail(format!(
                "space has {} coordinates but universe_size is {}",
                self.space.universe_size(),
                self.universe_size
            ));
        }
        match self.support {
            SupportDistribution::Fixed(0) => return fail("support size 0".into()),
            SupportDistribution::Fixed(k) if k > self.universe_size => {
                return fail(format!(
                    "support size {k} exceeds universe size {}",
                    self.universe_size
                ))
            }
            SupportDistribution::Geometric { mean } if !(mean >= 1.0 && mean.is_finite()) => {
                return fail(format!("geometric mean {mean} must be at least 1"))
            }
            _ => {}
        }
        if self.n_vectors > 0 && self.universe_size == 0 {
            return fail("vectors need a nonempty universe".into());
        }
        let (lo, hi) = self.value_range;
        if lo > hi || (lo == 0 && hi == 0) {
            return fail(format!("value range [{lo}, {hi}] has no nonzero value"));
        }
        if self.max_den < 1 {
            return fail(format!("max_den {} must be positive", self.max_den));
        }
        Ok(())
    }
}

/// Deterministic per-instance seed for batch runs.
pub fn instance_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero `num/den` with `num ∈ [lo, hi] \ {0}` and `den ∈ 1..=max_den`.
pub fn random_scalar<S: Scalar, R: Rng>(rng: &mut R, (lo, hi): (i64, i64), max_den: i64) -> S {
    let num = loop {
        let v = rng.random_range(lo..=hi);
        if v != 0 {
            break v;
        }
    };
    S::from_ratio(num, rng.random_range(1..=max_den))
}

/// A vector with `size` distinct random coordinates and nonzero values.
pub fn random_vector<S: Scalar, R: Rng>(
    rng: &mut R,
    space: &Arc<SpaceDescriptor>,
    size: u64,
    value_range: (i64, i64),
    max_den: i64,
) -> SparseVector<S> {
    let n = space.universe_size();
    let size = size.min(n);
    let mut labels: Vec<u64> = index::sample(rng, n as usize, size as usize)
        .into_iter()
        .map(|l| l as u64)
        .collect();
    labels.sort_unstable();
    let row = labels
        .into_iter()
        .map(|l| (l, random_scalar(rng, value_range, max_den)))
        .collect();
    SparseVector::from_row(space.clone(), row)
}

pub fn generate_family<S: Scalar>(config: &GenConfig) -> Result<VectorFamily<S>> {
    config.validate()?;
    let space = Arc::new(config.space);
    let mut rng = rng(config.seed);
    let geometric = match config.support {
        SupportDistribution::Geometric { mean } => {
            Some(Geometric::new(1.0 / mean).map_err(|e| Error::Config(e.to_string()))?)
        }
        SupportDistribution::Fixed(_) => None,
    };
    let mut members = Vec::with_capacity(config.n_vectors as usize);
    for _ in 0..config.n_vectors {
        let size = match (config.support, &geometric) {
            (SupportDistribution::Fixed(k), _) => k,
            (_, Some(g)) => 1 + g.sample(&mut rng),
            _ => unreachable!(),
        };
        members.push(random_vector(
            &mut rng,
            &space,
            size,
            config.value_range,
            config.max_den,
        ));
    }
    VectorFamily::from_vectors(space, members)
}

/// `count` random vectors with support sizes in `1..=max_support`.
pub fn random_family<S: Scalar, R: Rng>(
    rng: &mut R,
    space: &Arc<SpaceDescriptor>,
    count: usize,
    max_support: u64,
) -> VectorFamily<S> {
    let vectors: Vec<_> = (0..count)
        .map(|_| {
            let size = rng.random_range(1..=max_support.max(1));
            random_vector(rng, space, size, (-8, 8), 8)
        })
        .collect();
    VectorFamily::from_vectors(space.clone(), vectors).expect("fresh ids ascend")
}

/// A spanning family of a random subspace of dimension at most `dim`: `dim`
/// vectors, a few of them combinations of earlier ones.
pub fn random_subspace<S: Scalar, R: Rng>(
    rng: &mut R,
    space: &Arc<SpaceDescriptor>,
    dim: usize,
) -> VectorFamily<S> {
    let n = space.universe_size();
    let mut vectors: Vec<SparseVector<S>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let v = if vectors.len() >= 2 && rng.random_bool(0.15) {
            let a = &vectors[rng.random_range(0..vectors.len())];
            let b = &vectors[rng.random_range(0..vectors.len())];
            let c: S = random_scalar(rng, (-3, 3), 2);
            a.add_scaled(&c, b).expect("same space")
        } else {
            let size = rng.random_range(1..=n.clamp(1, 4));
            random_vector(rng, space, size, (-5, 5), 3)
        };
        vectors.push(v);
    }
    VectorFamily::from_vectors(space.clone(), vectors).expect("fresh ids ascend")
}

/// A random operator with about `density·|domain|·|codomain|` entries.
pub fn random_operator<S: Scalar, R: Rng>(
    rng: &mut R,
    domain: &Arc<SpaceDescriptor>,
    codomain: &Arc<SpaceDescriptor>,
    density: f64,
) -> LinearOperator<S> {
    let mut triplets = Vec::new();
    for r in 0..codomain.universe_size() {
        for c in 0..domain.universe_size() {
            if rng.random_bool(density) {
                triplets.push((
                    CoordinateLabel(r),
                    CoordinateLabel(c),
                    random_scalar(rng, (-5, 5), 3),
                ));
            }
        }
    }
    LinearOperator::new(domain.clone(), codomain.clone(), triplets).expect("labels in range")
}
