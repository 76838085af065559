use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kernelkit::error::Error;
use kernelkit::io::{
    operator_to_json, read_family_csv, read_family_jsonl, read_operator, write_family_csv,
    write_family_jsonl, write_operator, ParsedFamily,
};
use kernelkit::operator::LinearOperator;
use kernelkit::operator_builder::{
    build_dense_image, kernel_operator_via_duality, kernel_operator_via_quotient,
    operator_norm_bound_check,
};
use kernelkit::random::{generate_family, GenConfig, SupportDistribution};
use kernelkit::scalar::{Exponent, Rational, Scalar};
use kernelkit::space::{SpaceDescriptor, VectorFamily};
use kernelkit::support_graph::{
    build_incidence, components_equivrel_with, components_graph_with, disjoint_partition,
    ComponentDecomposition,
};
use kernelkit::verification::suites::{
    biorthogonal_suite, dense_image_suite, duality_suite, kernel_suite, lemma25_suite,
    lp_sum_suite, partition_suite, SuiteConfig, SuiteReport,
};
use kernelkit::verification::{
    certify_column_space, certify_kernel, check_lemma25_roundtrip, IdentityResult,
};

/// Sparse families, support partitions and operators with prescribed kernel
/// or dense image, over finite models of ℓ_p and c₀.
#[derive(Parser, Debug)]
#[command(name = "kernelkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(clap::Args, Debug)]
struct Global {
    /// Space model for generated families and CSV input.
    #[arg(long, global = true, value_enum)]
    space: Option<SpaceArg>,
    /// Exponent of the ℓ_p model, as NUM or NUM/DEN.
    #[arg(long, global = true, default_value = "2")]
    p: Exponent,
    /// Universe size for generated families and CSV input [gen: 1000, bench: 10⁷].
    #[arg(long, global = true)]
    universe: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Oracle)]
    mode: Mode,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Family file format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Jsonl)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SpaceArg {
    Lp,
    C0,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Exact rational arithmetic.
    Oracle,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a seeded random family.
    Gen {
        #[arg(long, default_value_t = 1000)]
        n: u64,
        /// `fixed:K` or `geometric:MEAN`.
        #[arg(long, default_value = "fixed:4", value_parser = parse_support)]
        support: SupportDistribution,
        #[arg(long, default_value_t = -9, allow_hyphen_values = true)]
        min_value: i64,
        #[arg(long, default_value_t = 9, allow_hyphen_values = true)]
        max_value: i64,
        #[arg(long, default_value_t = 1)]
        max_den: i64,
    },
    /// Split a family into groups of pairwise disjoint supports.
    Partition {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Equivrel)]
        algo: Algo,
    },
    /// Build an operator from a family and certify it.
    Build {
        #[arg(value_enum)]
        construction: Construction,
        file: PathBuf,
        /// Also write the bare operator JSON here.
        #[arg(long)]
        operator_out: Option<PathBuf>,
    },
    /// Run a verification suite, or check a claim about an operator file.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        instances: u64,
        /// Operator file for `verify operator`.
        #[arg(long)]
        operator: Option<PathBuf>,
        /// Family file for `verify operator`.
        #[arg(long)]
        family: Option<PathBuf>,
        /// What the family is claimed to be for the operator.
        #[arg(long, value_enum, default_value_t = Claim::Kernel)]
        claim: Claim,
    },
    /// Time incidence, components and partition on a generated family.
    Bench {
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        #[arg(long, default_value_t = 8.0)]
        mean_support: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    Equivrel,
    Graph,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Construction {
    DenseImage,
    KernelDuality,
    KernelQuotient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Partition,
    DenseImage,
    Kernel,
    Duality,
    Lemma25,
    Biorthogonal,
    Lpsum,
    All,
    Operator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Claim {
    /// The family spans the kernel.
    Kernel,
    /// The family spans the column space.
    Image,
}

fn parse_support(s: &str) -> Result<SupportDistribution, String> {
    let (kind, value) = s
        .split_once(':')
        .ok_or_else(|| format!("expected fixed:K or geometric:MEAN, got {s}"))?;
    match kind {
        "fixed" => value
            .parse()
            .map(SupportDistribution::Fixed)
            .map_err(|e| format!("{e}")),
        "geometric" => value
            .parse()
            .map(|mean| SupportDistribution::Geometric { mean })
            .map_err(|e| format!("{e}")),
        _ => Err(format!("unknown support distribution {kind}")),
    }
}

/// A failed command: configuration and input problems exit with 2.
struct Usage(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.into())
    }
}

type Outcome = Result<bool, Usage>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match cli.global.mode {
        Mode::Oracle => run::<Rational>(&cli),
        Mode::Float => run::<f64>(&cli),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run<S: Scalar>(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Gen {
            n,
            support,
            min_value,
            max_value,
            max_den,
        } => {
            let universe = g.universe.unwrap_or(1000);
            let config = GenConfig {
                n_vectors: *n,
                universe_size: universe,
                support: *support,
                value_range: (*min_value, *max_value),
                max_den: *max_den,
                seed: g.seed,
                space: space_from_flags(g, universe)?,
            };
            let family = generate_family::<S>(&config)?;
            let out = output(g)?;
            match g.format {
                Format::Jsonl => write_family_jsonl(out, &family)?,
                Format::Csv => write_family_csv(out, &family)?,
            }
            eprintln!("generated {} vectors in {}", family.len(), family.space());
            Ok(true)
        }
        Command::Partition { file, algo } => partition::<S>(g, file, *algo),
        Command::Build {
            construction,
            file,
            operator_out,
        } => build::<S>(g, *construction, file, operator_out.as_deref()),
        Command::Verify {
            suite: Suite::Operator,
            operator,
            family,
            claim,
            ..
        } => {
            let operator = operator
                .as_ref()
                .ok_or_else(|| anyhow!("verify operator needs --operator"))?;
            let family = family
                .as_ref()
                .ok_or_else(|| anyhow!("verify operator needs --family"))?;
            verify_operator::<S>(g, operator, family, *claim)
        }
        Command::Verify {
            suite, instances, ..
        } => verify::<S>(g, *suite, *instances),
        Command::Bench { n, mean_support } => {
            bench(g, *n, *mean_support, g.universe.unwrap_or(10_000_000))
        }
    }
}

fn space_from_flags(g: &Global, universe: u64) -> Result<SpaceDescriptor, Error> {
    match g.space.unwrap_or(SpaceArg::Lp) {
        SpaceArg::Lp => SpaceDescriptor::lp(g.p, universe),
        SpaceArg::C0 => Ok(SpaceDescriptor::c0(universe)),
    }
}

fn output(g: &Global) -> anyhow::Result<Box<dyn Write>> {
    Ok(match &g.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(g: &Global, report: &Value) -> anyhow::Result<()> {
    let mut out = output(g)?;
    serde_json::to_writer_pretty(&mut out, report)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

fn read_family<S: Scalar>(g: &Global, path: &Path) -> anyhow::Result<ParsedFamily<S>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let parsed = match g.format {
        Format::Jsonl => read_family_jsonl(BufReader::new(file)),
        Format::Csv => {
            let universe = g
                .universe
                .ok_or_else(|| anyhow!("CSV input needs --universe"))?;
            read_family_csv(file, space_from_flags(g, universe)?)
        }
    };
    parsed.with_context(|| format!("reading {}", path.display()))
}

/// Rewrites a zero-member error in terms of the source line.
fn locate<S: Scalar>(parsed: &ParsedFamily<S>, e: Error) -> anyhow::Error {
    match e {
        Error::ZeroMember { id } => match parsed.line_of(id) {
            Some(line) => anyhow!("line {line}: vector {id} is zero"),
            None => anyhow!(e),
        },
        e => anyhow!(e),
    }
}

fn partition<S: Scalar>(g: &Global, file: &Path, algo: Algo) -> Outcome {
    let parsed = read_family::<S>(g, file)?;
    let family = &parsed.family;
    let index = build_incidence(family);
    let by_forest = || components_equivrel_with(family, &index).map_err(|e| locate(&parsed, e));
    let by_search = || components_graph_with(family, &index).map_err(|e| locate(&parsed, e));
    let (components, agree): (ComponentDecomposition, Option<bool>) = match algo {
        Algo::Equivrel => (by_forest()?, None),
        Algo::Graph => (by_search()?, None),
        Algo::Both => {
            let a = by_forest()?;
            let b = by_search()?;
            let same = a == b;
            (a, Some(same))
        }
    };
    let partition = disjoint_partition(family, &components)?;
    let report = partition.report(&components);
    let mut out = json!({
        "groups": partition.to_vecs(),
        "digest": partition.digest(),
        "report": report,
    });
    if let Some(agree) = agree {
        out["algorithms_agree"] = json!(agree);
        eprintln!("algorithms agree: {agree}");
    }
    eprintln!(
        "{} vectors, {} components, {} groups",
        report.n_vectors, report.n_components, report.n_groups
    );
    emit(g, &out)?;
    Ok(agree.unwrap_or(true))
}

fn verdict<S: Scalar>(holds: bool) -> &'static str {
    match (holds, S::EXACT) {
        (true, true) => "exact",
        (true, false) => "within tolerance",
        (false, _) => "FAILED",
    }
}

fn identity_line<S: Scalar>(r: &IdentityResult) {
    eprintln!("{}: {}", r.identity, verdict::<S>(r.holds));
    if let Some(w) = &r.witness {
        eprintln!(
            "  witness: {}",
            serde_json::to_string(w).unwrap_or_default()
        );
    }
}

fn build<S: Scalar>(
    g: &Global,
    construction: Construction,
    file: &Path,
    operator_out: Option<&Path>,
) -> Outcome {
    let parsed = read_family::<S>(g, file)?;
    let family = &parsed.family;
    let (operator, certificate, passed): (LinearOperator<S>, Value, bool) = match construction {
        Construction::DenseImage => {
            let build = build_dense_image(family).map_err(|e| locate(&parsed, e))?;
            let roundtrip = check_lemma25_roundtrip(&family.without_zeros(), g.tol)?;
            let columns = certify_column_space(build.image.operator(), family, g.tol)?;
            let norms = operator_norm_bound_check(&build.image, 100, g.seed)?;
            let rank_ok = roundtrip.rank == roundtrip.dim_span;
            eprintln!(
                "rank = dim span D: {} ({} = {})",
                verdict::<S>(rank_ok),
                roundtrip.rank,
                roundtrip.dim_span
            );
            identity_line::<S>(&columns);
            eprintln!("norm bounds: {}", verdict::<S>(norms.passed()));
            let passed = roundtrip.passed() && columns.holds && norms.passed();
            let certificate = json!({
                "exact": S::EXACT,
                "rank": roundtrip.rank,
                "dim_span": roundtrip.dim_span,
                "n_groups": build.partition.n_groups(),
                "groups": build.partition.to_vecs(),
                "column_space": columns,
                "roundtrip": roundtrip,
                "norm_bounds": norms,
            });
            (build.image.into_operator(), certificate, passed)
        }
        Construction::KernelDuality => {
            let kernel = kernel_operator_via_duality(family)?;
            let identity = certify_kernel(&kernel.operator, family, g.tol)?;
            identity_line::<S>(&identity);
            let system = match &kernel.system {
                Some(system) => Some(system.certify(&kernel.annihilator, g.tol)?),
                None => None,
            };
            let system_ok = system.as_ref().is_none_or(|c| c.passed());
            let certificate = json!({
                "exact": S::EXACT,
                "kernel": identity,
                "annihilator_dim": kernel.annihilator.len(),
                "markushevich": system,
            });
            (kernel.operator, certificate, identity.holds && system_ok)
        }
        Construction::KernelQuotient => {
            let x = match g.space {
                Some(_) => Arc::new(space_from_flags(g, family.space().universe_size())?),
                None => family.space().clone(),
            };
            let kernel = kernel_operator_via_quotient(family, &x)?;
            let identity = certify_kernel(&kernel.operator, family, g.tol)?;
            identity_line::<S>(&identity);
            let certificate = json!({
                "exact": S::EXACT,
                "kernel": identity,
                "complement": kernel.complement.iter().map(|l| l.0).collect::<Vec<_>>(),
            });
            (kernel.operator, certificate, identity.holds)
        }
    };
    if let Some(path) = operator_out {
        let file =
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        write_operator(BufWriter::new(file), &operator)?;
    }
    emit(
        g,
        &json!({
            "construction": construction.to_possible_value().map(|v| v.get_name().to_string()),
            "operator": operator_to_json(&operator),
            "certificate": certificate,
            "passed": passed,
        }),
    )?;
    Ok(passed)
}

fn verify_operator<S: Scalar>(g: &Global, operator: &Path, family: &Path, claim: Claim) -> Outcome {
    let file =
        File::open(operator).with_context(|| format!("cannot open {}", operator.display()))?;
    let t = read_operator::<S, _>(BufReader::new(file))
        .with_context(|| format!("reading {}", operator.display()))?;
    let parsed = read_family::<S>(g, family)?;
    let result = match claim {
        Claim::Kernel => certify_kernel(&t, &parsed.family, g.tol)?,
        Claim::Image => certify_column_space(&t, &parsed.family, g.tol)?,
    };
    identity_line::<S>(&result);
    emit(g, &json!(result))?;
    Ok(result.holds)
}

fn suite_list(suite: Suite) -> Vec<Suite> {
    match suite {
        Suite::All => vec![
            Suite::Partition,
            Suite::DenseImage,
            Suite::Kernel,
            Suite::Duality,
            Suite::Lemma25,
            Suite::Biorthogonal,
            Suite::Lpsum,
        ],
        s => vec![s],
    }
}

fn run_suite<S: Scalar>(suite: Suite, config: SuiteConfig) -> SuiteReport {
    match suite {
        Suite::Partition => partition_suite::<S>(config, 200),
        Suite::DenseImage => dense_image_suite::<S>(config, 100),
        Suite::Kernel => kernel_suite::<S>(config, 50),
        Suite::Duality => duality_suite::<S>(config, 20),
        Suite::Lemma25 => lemma25_suite::<S>(config, 10_000),
        Suite::Biorthogonal => biorthogonal_suite::<S>(config, 30),
        Suite::Lpsum => lp_sum_suite::<S>(config),
        Suite::All | Suite::Operator => unreachable!("expanded by the caller"),
    }
}

fn verify<S: Scalar>(g: &Global, suite: Suite, instances: u64) -> Outcome {
    let config = SuiteConfig {
        instances,
        seed: g.seed,
        tol: g.tol,
    };
    let reports: Vec<SuiteReport> = suite_list(suite)
        .into_iter()
        .map(|s| {
            let report = run_suite::<S>(s, config);
            eprintln!(
                "{} {}: {} instances, {} failures",
                if report.passed() { "PASS" } else { "FAIL" },
                report.check,
                report.instances,
                report.failures.len()
            );
            report
        })
        .collect();
    let passed = reports.iter().all(SuiteReport::passed);
    emit(g, &json!({ "passed": passed, "suites": reports }))?;
    Ok(passed)
}

/// Partitions depend on supports only, so the family is generated in float
/// mode whatever `--mode` says.
fn bench(g: &Global, n: u64, mean_support: f64, universe: u64) -> Outcome {
    let config = GenConfig {
        n_vectors: n,
        universe_size: universe,
        support: SupportDistribution::Geometric { mean: mean_support },
        value_range: (-9, 9),
        max_den: 1,
        seed: g.seed,
        space: SpaceDescriptor::c0(universe),
    };
    let start = Instant::now();
    let family: VectorFamily<f64> = generate_family(&config)?;
    let generate = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let index = build_incidence(&family);
    let incidence = start.elapsed().as_secs_f64();
    let components = components_equivrel_with(&family, &index)?;
    let after_components = start.elapsed().as_secs_f64();
    let partition = disjoint_partition(&family, &components)?;
    let total = start.elapsed().as_secs_f64();

    let hash = partition.digest();
    let entries: usize = family.vectors().map(|v| v.len()).sum();
    let report = json!({
        "n_vectors": n,
        "universe_size": universe,
        "mean_support": entries as f64 / n.max(1) as f64,
        "threads": rayon::current_num_threads(),
        "seconds": {
            "generate": generate,
            "incidence": incidence,
            "components": after_components - incidence,
            "partition": total - after_components,
            "total": total,
        },
        "throughput_vectors_per_s": n as f64 / total.max(f64::MIN_POSITIVE),
        "n_components": components.len(),
        "max_component": components.max_size(),
        "n_groups": partition.n_groups(),
        "hash": hash,
    });
    eprintln!(
        "partitioned {n} vectors in {total:.3}s ({} groups, hash {})",
        partition.n_groups(),
        &hash[..16]
    );
    emit(g, &report)?;
    Ok(true)
}
