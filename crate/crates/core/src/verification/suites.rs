//! Seeded batch runs of the property checks. Instance `i` of a run with base
//! seed `s` is generated from `instance_seed(s, i)` alone, so reports do not
//! depend on scheduling.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::brute::brute_force_components;
use super::chains::{certify_kernel, check_duality_chain, check_lemma25_roundtrip};
use super::subspace::{kernel_basis, subspace_equal};
use crate::biorthogonal::{coordinate_restriction_mismatch, markushevich};
use crate::error::Result;
use crate::operator_builder::{
    build_dense_image, kernel_operator_via_duality, kernel_operator_via_quotient,
    lp_sum_decomposition, operator_norm_bound_check,
};
use crate::random::{
    instance_seed, random_family, random_operator, random_scalar, random_subspace, rng,
};
use crate::scalar::{Exponent, Scalar};
use crate::space::SpaceDescriptor;
use crate::support_graph::{
    build_incidence, components_equivrel_with, components_graph_with, disjoint_partition,
    verify_partition,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub seed: u64,
    pub identity: String,
    pub witness: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub check: String,
    pub instances: u64,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    pub instances: u64,
    pub seed: u64,
    pub tol: f64,
}

fn failure(seed: u64, identity: &str, witness: Value) -> Failure {
    Failure {
        seed,
        identity: identity.to_string(),
        witness,
    }
}

fn run<F>(check: &str, config: SuiteConfig, instance: F) -> SuiteReport
where
    F: Fn(u64) -> Result<Vec<Failure>> + Sync,
{
    let per_instance: Vec<Vec<Failure>> = (0..config.instances)
        .into_par_iter()
        .map(|i| {
            let seed = instance_seed(config.seed, i);
            instance(seed).unwrap_or_else(|e| vec![failure(seed, "error", json!(e.to_string()))])
        })
        .collect();
    SuiteReport {
        check: check.to_string(),
        instances: config.instances,
        failures: per_instance.into_iter().flatten().collect(),
    }
}

fn lp(p: Exponent, n: u64) -> Arc<SpaceDescriptor> {
    Arc::new(SpaceDescriptor::lp(p, n).expect("p ≥ 1"))
}

fn pick<R: Rng, T: Copy>(rng: &mut R, options: &[T]) -> T {
    options[rng.random_range(0..options.len())]
}

/// Families of 1–500 vectors with supports of size 1–16: partition validity,
/// agreement of the two component algorithms and, up to `brute_force_limit`
/// vectors, agreement with the pairwise oracle.
pub fn partition_suite<S: Scalar>(config: SuiteConfig, brute_force_limit: usize) -> SuiteReport {
    run("partition", config, |seed| {
        let mut rng = rng(seed);
        let size = rng.random_range(1..=500usize);
        let max_support = rng.random_range(1..=16u64);
        let upper = (2 * size as u64 * max_support).max(max_support + 16);
        let universe = rng.random_range(max_support.max(16)..=upper);
        let space = Arc::new(SpaceDescriptor::c0(universe));
        let family = random_family::<S, _>(&mut rng, &space, size, max_support);
        let index = build_incidence(&family);
        let a = components_equivrel_with(&family, &index)?;
        let b = components_graph_with(&family, &index)?;
        let mut failures = Vec::new();
        if a != b {
            failures.push(failure(
                seed,
                "equivrel = graph",
                json!({
                    "equivrel": a.component_ids_by_member(),
                    "graph": b.component_ids_by_member(),
                }),
            ));
        }
        if size <= brute_force_limit {
            let oracle = brute_force_components(&family);
            if oracle != a.component_ids_by_member() {
                failures.push(failure(
                    seed,
                    "equivrel = brute force",
                    json!({
                        "equivrel": a.component_ids_by_member(),
                        "brute_force": oracle,
                    }),
                ));
            }
        }
        let partition = disjoint_partition(&family, &a)?;
        if let Err(v) = verify_partition(&family, &partition) {
            failures.push(failure(seed, "disjoint cover", json!(v.to_string())));
        }
        if partition.n_groups() != a.max_size() {
            failures.push(failure(
                seed,
                "groups = largest component",
                json!({
                    "groups": partition.n_groups(),
                    "largest": a.max_size(),
                }),
            ));
        }
        Ok(failures)
    })
}

/// Dense-image operators of random families in `ℓ₂`, `ℓ₁`, `ℓ₃`, `ℓ_{3/2}`
/// and `c₀`: unit recovery, rank, column space and `trials` norm samples.
pub fn dense_image_suite<S: Scalar>(config: SuiteConfig, trials: usize) -> SuiteReport {
    run("dense-image", config, |seed| {
        let mut rng = rng(seed);
        let universe = rng.random_range(64..=256u64);
        let space = match rng.random_range(0..6) {
            0 | 1 => lp(Exponent::from_integer(2), universe),
            2 => lp(Exponent::from_integer(1), universe),
            3 => lp(Exponent::from_integer(3), universe),
            4 => lp(Exponent::new(3, 2), universe),
            _ => Arc::new(SpaceDescriptor::c0(universe)),
        };
        let size = rng.random_range(1..=60usize);
        let max_support = rng.random_range(1..=6u64);
        let family = random_family::<S, _>(&mut rng, &space, size, max_support);
        let mut failures = Vec::new();
        let report = check_lemma25_roundtrip(&family, config.tol)?;
        if !report.passed() {
            failures.push(failure(seed, "dense image", json!(report)));
        }
        let image = build_dense_image(&family)?.image;
        let norms = operator_norm_bound_check(&image, trials, seed)?;
        if !norms.passed() {
            failures.push(failure(seed, "norm bounds", json!(norms)));
        }
        Ok(failures)
    })
}

/// Random subspaces of dimension up to 50 in `ℓ_p`, `p ∈ {3/2, 2, 3}`: both
/// kernel constructions on `ℓ_p`, the quotient construction on `ℓ₁` and
/// `c₀`, and agreement of the two kernels.
pub fn kernel_suite<S: Scalar>(config: SuiteConfig, max_dim: usize) -> SuiteReport {
    run("kernel", config, |seed| {
        let mut rng = rng(seed);
        let p = pick(
            &mut rng,
            &[
                Exponent::new(3, 2),
                Exponent::from_integer(2),
                Exponent::from_integer(3),
            ],
        );
        let dim = rng.random_range(1..=max_dim.max(1));
        let universe = rng.random_range(dim as u64..=dim as u64 + 10);
        let space = lp(p, universe);
        let y = random_subspace::<S, _>(&mut rng, &space, dim);
        let mut failures = Vec::new();
        let by_duality = kernel_operator_via_duality(&y)?.operator;
        let by_quotient = kernel_operator_via_quotient(&y, &space)?.operator;
        for (name, t) in [("duality", &by_duality), ("quotient", &by_quotient)] {
            let r = certify_kernel(t, &y, config.tol)?;
            if !r.holds {
                failures.push(failure(seed, &format!("{name}: {}", r.identity), json!(r)));
            }
        }
        if !subspace_equal(
            &kernel_basis(&by_duality),
            &kernel_basis(&by_quotient),
            config.tol,
        )? {
            failures.push(failure(
                seed,
                "ker duality = ker quotient",
                json!({ "p": p.to_string() }),
            ));
        }
        for x in [
            lp(Exponent::from_integer(1), universe),
            Arc::new(SpaceDescriptor::c0(universe)),
        ] {
            let t = kernel_operator_via_quotient(&y, &x)?.operator;
            let r = certify_kernel(&t, &y, config.tol)?;
            if !r.holds {
                failures.push(failure(
                    seed,
                    &format!("quotient on {x}: {}", r.identity),
                    json!(r),
                ));
            }
        }
        Ok(failures)
    })
}

/// Random square operators of dimension up to `max_dim` on reflexive models:
/// the three annihilator identities, rank-nullity and `ker T** = ker T`.
pub fn duality_suite<S: Scalar>(config: SuiteConfig, max_dim: u64) -> SuiteReport {
    run("duality", config, |seed| {
        let mut rng = rng(seed);
        let n = rng.random_range(1..=max_dim.max(1));
        let p = pick(
            &mut rng,
            &[
                Exponent::new(3, 2),
                Exponent::from_integer(2),
                Exponent::from_integer(3),
                Exponent::new(4, 3),
            ],
        );
        let density = rng.random_range(0.05..0.6);
        let space = lp(p, n);
        let t = random_operator::<S, _>(&mut rng, &space, &space, density);
        let mut failures = Vec::new();
        let report = check_duality_chain(&t, config.tol)?;
        for identity in report.identities.iter().filter(|i| !i.holds) {
            failures.push(failure(seed, &identity.identity, json!(identity)));
        }
        if report.rank + report.nullity != n as usize {
            failures.push(failure(
                seed,
                "rank + nullity = dim",
                json!({
                    "rank": report.rank, "nullity": report.nullity, "dim": n,
                }),
            ));
        }
        if kernel_basis(&t.adjoint().adjoint()) != kernel_basis(&t) {
            failures.push(failure(seed, "ker T** = ker T", json!(null)));
        }
        Ok(failures)
    })
}

/// Markushevich systems for random subspaces of dimension up to `max_dim`.
pub fn biorthogonal_suite<S: Scalar>(config: SuiteConfig, max_dim: usize) -> SuiteReport {
    run("biorthogonal", config, |seed| {
        let mut rng = rng(seed);
        let universe = rng.random_range(1..=max_dim as u64 + 10);
        let dim = rng.random_range(1..=(universe as usize).min(max_dim));
        let p = pick(
            &mut rng,
            &[
                Exponent::from_integer(2),
                Exponent::new(3, 2),
                Exponent::from_integer(1),
            ],
        );
        let y = random_subspace::<S, _>(&mut rng, &lp(p, universe), dim);
        let system = markushevich(&y)?;
        let cert = system.certify(&y, config.tol)?;
        let mut failures = Vec::new();
        if !cert.passed() {
            failures.push(failure(seed, "markushevich", json!(cert)));
        }
        if let Some(label) = coordinate_restriction_mismatch(&system)? {
            failures.push(failure(
                seed,
                "coordinate incidence = incidence index",
                json!(label),
            ));
        }
        Ok(failures)
    })
}

/// Disjoint-block assemblies for integer `p ∈ {1, 2, 3}`.
pub fn lp_sum_suite<S: Scalar>(config: SuiteConfig) -> SuiteReport {
    run("lp-sum", config, |seed| {
        let mut rng = rng(seed);
        let p = rng.random_range(1..=3u64);
        let universe = rng.random_range(20..=200u64);
        let size = rng.random_range(2..=40usize);
        let max_support = rng.random_range(1..=4u64);
        let y = random_family::<S, _>(
            &mut rng,
            &lp(Exponent::from_integer(p), universe),
            size,
            max_support,
        );
        let index = build_incidence(&y);
        let components = components_equivrel_with(&y, &index)?;
        let decomposition = lp_sum_decomposition(&y, &components)?;
        let parts: Vec<_> = (0..decomposition.len())
            .map(|k| {
                let coefficients: Vec<S> = (0..decomposition.blocks()[k].basis.len())
                    .map(|_| random_scalar(&mut rng, (-6, 6), 4))
                    .collect();
                decomposition.block_vector(k, &coefficients)
            })
            .collect();
        let check = decomposition.check_isometry(&parts)?;
        let mut failures = Vec::new();
        if !check.holds || (S::EXACT && !check.exact) {
            failures.push(failure(
                seed,
                "p-th power additivity",
                json!({ "p": p, "check": check }),
            ));
        }
        Ok(failures)
    })
}

/// Dense-image round trips on sparse families in a large universe.
pub fn lemma25_suite<S: Scalar>(config: SuiteConfig, universe: u64) -> SuiteReport {
    run("lemma25", config, |seed| {
        let mut rng = rng(seed);
        let size = rng.random_range(1..=100usize);
        let space = lp(Exponent::from_integer(2), universe);
        let family = random_family::<S, _>(&mut rng, &space, size, 4);
        let report = check_lemma25_roundtrip(&family, config.tol)?;
        Ok(if report.passed() {
            Vec::new()
        } else {
            vec![failure(seed, "lemma25 round trip", json!(report))]
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn config(instances: u64) -> SuiteConfig {
        SuiteConfig {
            instances,
            seed: 7,
            tol: 1e-9,
        }
    }

    #[test]
    fn small_exact_runs_pass() {
        for report in [
            partition_suite::<Rational>(config(20), 200),
            dense_image_suite::<Rational>(config(5), 20),
            kernel_suite::<Rational>(config(5), 12),
            duality_suite::<Rational>(config(10), 8),
            biorthogonal_suite::<Rational>(config(10), 10),
            lp_sum_suite::<Rational>(config(10)),
            lemma25_suite::<Rational>(config(5), 10_000),
        ] {
            assert!(
                report.passed(),
                "{}",
                serde_json::to_string(&report).unwrap()
            );
        }
    }

    #[test]
    fn empty_run_passes() {
        let report = lemma25_suite::<Rational>(config(0), 100);
        assert_eq!(report.instances, 0);
        assert!(report.passed());
    }

    #[test]
    fn reports_are_deterministic() {
        let a = serde_json::to_string(&duality_suite::<f64>(config(10), 6)).unwrap();
        let b = serde_json::to_string(&duality_suite::<f64>(config(10), 6)).unwrap();
        assert_eq!(a, b);
    }
}
