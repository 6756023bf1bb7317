//! `grouprand` — draw random elements from matrix groups, count them
//! exactly, reduce points to fundamental domains, and check uniformity of
//! recorded samples.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use grouprand_core as core;
use grouprand_core::RandomStream;

#[derive(Parser)]
#[command(name = "grouprand", version, about = "Random sampling from matrix groups")]
struct Cli {
    /// Seed for the deterministic generator; drawn from OS entropy and
    /// printed to stderr when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Number of samples to draw (sampling subcommands).
    #[arg(long, global = true, default_value_t = 1)]
    count: u64,

    /// Output record format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Jsonl)]
    format: Format,

    /// Write records to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Draw random group elements.
    Sample {
        #[command(subcommand)]
        target: SampleTarget,
    },
    /// Exact enumeration counts.
    Count {
        #[command(subcommand)]
        target: CountTarget,
    },
    /// Reduce points to fundamental domains.
    Reduce {
        #[command(subcommand)]
        target: ReduceTarget,
    },
    /// Statistics over recorded samples.
    Stats {
        #[command(subcommand)]
        target: StatsTarget,
    },
}

#[derive(Subcommand)]
enum SampleTarget {
    /// Uniform lattice points in the ball of the given radius.
    Lattice {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        radius: f64,
    },
    /// Near-uniform SL(2,Z) matrices of bounded Frobenius norm.
    Sl2z {
        #[arg(long, value_name = "X")]
        norm_bound: f64,
        /// Probability-ratio accuracy knob of the fancy sampler.
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        /// Use the exactly uniform (but slow) rejection sampler instead.
        #[arg(long)]
        naive: bool,
    },
    /// Exactly uniform SL(n,p).
    Slnp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
    },
    /// Exactly uniform Sp(2n,p); --n is the half-dimension n.
    Sp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
    },
    /// Uniform random permutations.
    Perm {
        #[arg(long)]
        n: usize,
    },
    /// Lazy transvection walk on SL(n,p); approximately uniform for long walks.
    Walk {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        length: u64,
    },
    /// Haar-uniform O(n).
    Orthogonal {
        #[arg(long)]
        n: usize,
    },
    /// Uniform rational rotations with denominator at most Q.
    So2Rational {
        #[arg(long, value_name = "Q")]
        max_denominator: u64,
    },
}

#[derive(Subcommand)]
enum CountTarget {
    /// Exact |{ A in SL(2,Z) : ||A|| <= X }| and its ratio to X^2.
    Sl2z {
        #[arg(long, value_name = "X")]
        norm_bound: f64,
    },
    /// Exact count of visible lattice points in the disk of radius Q.
    Visible {
        #[arg(long, value_name = "Q")]
        max_radius: u64,
    },
}

#[derive(Subcommand)]
enum ReduceTarget {
    /// Greedy reduction into the Dirichlet domain of a generator set.
    Fuchsian {
        /// JSON file: {"basepoint": [re, im], "generators": [[[a,b],[c,d]], ...]}.
        #[arg(long)]
        gens: PathBuf,
        /// Point to reduce, as "re,im".
        #[arg(long)]
        point: String,
    },
}

#[derive(Subcommand)]
enum StatsTarget {
    /// Chi-square and total-variation report over a JSONL sample file,
    /// with the observed distinct records as the support.
    Uniformity {
        #[arg(long)]
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(), // usage errors exit 2, --help/--version exit 0
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

type AnyError = Box<dyn std::error::Error>;

fn run(cli: Cli) -> Result<(), AnyError> {
    let mut sink: BufWriter<Box<dyn Write>> = BufWriter::new(match &cli.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(std::io::stdout()),
    });

    match &cli.command {
        Command::Sample { target } => {
            let seed = cli.seed.unwrap_or_else(|| {
                use std::hash::{BuildHasher, Hasher};
                let s = std::collections::hash_map::RandomState::new()
                    .build_hasher()
                    .finish();
                eprintln!("seed: {s}");
                s
            });
            let mut stream = RandomStream::new(seed);
            sample(target, cli.count, cli.format, &mut stream, &mut sink)?
        }
        Command::Count { target } => count(target, cli.format, &mut sink)?,
        Command::Reduce { target } => reduce(target, &mut sink)?,
        Command::Stats { target } => stats(target, &mut sink)?,
    }
    sink.flush()?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct LatticeRecord {
    group: &'static str,
    dim: usize,
    vector: Vec<i64>,
    norm_sq: u64,
}

#[derive(Serialize)]
struct Sl2zRecord {
    group: &'static str,
    matrix: [[i64; 2]; 2],
    norm_sq: u64,
}

#[derive(Serialize)]
struct FpRecord {
    group: String,
    matrix: Vec<Vec<u64>>,
    meta: FpMeta,
}

#[derive(Serialize)]
struct FpMeta {
    n: usize,
    p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    walk_length: Option<u64>,
}

#[derive(Serialize)]
struct PermRecord {
    group: String,
    /// Images of 0..n-1 under the permutation.
    perm: Vec<usize>,
}

#[derive(Serialize)]
struct OrthoRecord {
    group: String,
    matrix: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct RotationRecord {
    group: &'static str,
    a: i64,
    b: i64,
    q: i64,
}

#[derive(Serialize)]
struct Sl2zCountRecord {
    group: &'static str,
    norm_bound: f64,
    count: usize,
    ratio: f64,
}

#[derive(Serialize)]
struct VisibleCountRecord {
    max_radius: u64,
    count: u64,
    ratio_to_asymptotic: f64,
}

#[derive(Serialize)]
struct ReduceRecord {
    input: [f64; 2],
    final_point: [f64; 2],
    steps: u64,
    word: Vec<usize>,
    matrix: [[f64; 2]; 2],
}

#[derive(Serialize)]
struct ReportRecord {
    group_id: String,
    support_size: usize,
    draws: u64,
    chi_square: f64,
    dof: usize,
    p_value: f64,
    tv_estimate: f64,
}

fn emit<T: Serialize>(
    format: Format,
    record: &T,
    csv_row: impl FnOnce() -> (String, String),
    header_done: &mut bool,
    sink: &mut impl Write,
) -> Result<(), AnyError> {
    match format {
        Format::Jsonl => {
            serde_json::to_writer(&mut *sink, record)?;
            writeln!(sink)?;
        }
        Format::Csv => {
            let (header, row) = csv_row();
            if !*header_done {
                writeln!(sink, "{header}")?;
                *header_done = true;
            }
            writeln!(sink, "{row}")?;
        }
    }
    Ok(())
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

// ---------------------------------------------------------------------------
// Subcommand drivers
// ---------------------------------------------------------------------------

fn sample(
    target: &SampleTarget,
    count: u64,
    format: Format,
    stream: &mut RandomStream,
    sink: &mut impl Write,
) -> Result<(), AnyError> {
    let mut header_done = false;
    for _ in 0..count {
        match target {
            SampleTarget::Lattice { dim, radius } => {
                if *dim == 0 {
                    return Err("dimension must be positive".into());
                }
                if !(*radius >= 0.0) {
                    return Err("radius must be nonnegative".into());
                }
                let v = core::pick_lattice_vector(*dim, *radius, stream);
                let record = LatticeRecord {
                    group: "lattice",
                    dim: *dim,
                    vector: v.coords().to_vec(),
                    norm_sq: v.norm_sq() as u64,
                };
                emit(
                    format,
                    &record,
                    || {
                        (
                            format!("{},norm_sq", join((0..record.vector.len()).map(|i| format!("v{i}")))),
                            format!("{},{}", join(record.vector.iter()), record.norm_sq),
                        )
                    },
                    &mut header_done,
                    sink,
                )?;
            }
            SampleTarget::Sl2z {
                norm_bound,
                epsilon,
                naive,
            } => {
                let m = if *naive {
                    core::pick_sl_naive(*norm_bound, stream)?
                } else {
                    core::pick_fancy(*norm_bound, *epsilon, stream)?
                };
                let record = Sl2zRecord {
                    group: "SL2Z",
                    matrix: [[m.a, m.b], [m.c, m.d]],
                    norm_sq: m.frobenius_norm_sq() as u64,
                };
                emit(
                    format,
                    &record,
                    || {
                        (
                            "a,b,c,d,norm_sq".into(),
                            format!("{},{},{},{},{}", m.a, m.b, m.c, m.d, record.norm_sq),
                        )
                    },
                    &mut header_done,
                    sink,
                )?;
            }
            SampleTarget::Slnp { n, p } => {
                if *n == 0 {
                    return Err("n must be positive".into());
                }
                let field = core::PrimeField::new(*p)?;
                let m = core::gen_rand_sl(*n, field, stream);
                emit_fp(format, &m, format!("SL({n},{p})"), None, &mut header_done, sink)?;
            }
            SampleTarget::Sp { n, p } => {
                if *n == 0 {
                    return Err("n must be positive".into());
                }
                let field = core::PrimeField::new(*p)?;
                let m = core::gen_rand_sp(*n, field, stream);
                let label = format!("Sp({},{p})", 2 * n);
                emit_fp(format, &m, label, None, &mut header_done, sink)?;
            }
            SampleTarget::Perm { n } => {
                if *n == 0 {
                    return Err("n must be positive".into());
                }
                let perm = core::gen_perm(*n, stream);
                let record = PermRecord {
                    group: format!("S{n}"),
                    perm: perm.images().to_vec(),
                };
                emit(
                    format,
                    &record,
                    || {
                        (
                            join((0..*n).map(|i| format!("im{i}"))),
                            join(record.perm.iter()),
                        )
                    },
                    &mut header_done,
                    sink,
                )?;
            }
            SampleTarget::Walk { n, p, length } => {
                if *n < 2 {
                    return Err("walk needs n >= 2".into());
                }
                let field = core::PrimeField::new(*p)?;
                let m = core::expander_walk_sample(*n, field, *length, stream);
                emit_fp(format, &m, format!("SL({n},{p})"), Some(*length), &mut header_done, sink)?;
            }
            SampleTarget::Orthogonal { n } => {
                if *n == 0 {
                    return Err("n must be positive".into());
                }
                let q = core::random_orthogonal(*n, stream);
                let matrix: Vec<Vec<f64>> = (0..*n)
                    .map(|i| (0..*n).map(|j| q.at(i, j)).collect())
                    .collect();
                let record = OrthoRecord {
                    group: format!("O({n})"),
                    matrix,
                };
                emit(
                    format,
                    &record,
                    || {
                        (
                            join((0..n * n).map(|k| format!("m{k}"))),
                            join(record.matrix.iter().flatten()),
                        )
                    },
                    &mut header_done,
                    sink,
                )?;
            }
            SampleTarget::So2Rational { max_denominator } => {
                let r = core::sample_rational_rotation(*max_denominator, stream)?;
                let record = RotationRecord {
                    group: "SO2-rational",
                    a: r.a,
                    b: r.b,
                    q: r.q,
                };
                emit(
                    format,
                    &record,
                    || ("a,b,q".into(), format!("{},{},{}", r.a, r.b, r.q)),
                    &mut header_done,
                    sink,
                )?;
            }
        }
    }
    Ok(())
}

fn emit_fp(
    format: Format,
    m: &core::FpMatrix,
    group: String,
    walk_length: Option<u64>,
    header_done: &mut bool,
    sink: &mut impl Write,
) -> Result<(), AnyError> {
    let n = m.dim();
    let matrix: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| m.at(i, j)).collect()).collect();
    let record = FpRecord {
        group,
        matrix,
        meta: FpMeta {
            n,
            p: m.p(),
            walk_length,
        },
    };
    emit(
        format,
        &record,
        || {
            (
                join((0..n * n).map(|k| format!("m{k}"))),
                join(m.entries().iter()),
            )
        },
        header_done,
        sink,
    )
}

fn count(target: &CountTarget, format: Format, sink: &mut impl Write) -> Result<(), AnyError> {
    let mut header_done = false;
    match target {
        CountTarget::Sl2z { norm_bound } => {
            let elements = core::enumerate_sl2z(*norm_bound)?;
            let record = Sl2zCountRecord {
                group: "SL2Z",
                norm_bound: *norm_bound,
                count: elements.len(),
                ratio: elements.len() as f64 / (norm_bound * norm_bound),
            };
            emit(
                format,
                &record,
                || {
                    (
                        "norm_bound,count,ratio".into(),
                        format!("{},{},{}", record.norm_bound, record.count, record.ratio),
                    )
                },
                &mut header_done,
                sink,
            )?;
        }
        CountTarget::Visible { max_radius } => {
            let count = core::visible_point_count(*max_radius)?;
            let asymptotic = 6.0 / std::f64::consts::PI * (*max_radius as f64).powi(2);
            let record = VisibleCountRecord {
                max_radius: *max_radius,
                count,
                ratio_to_asymptotic: count as f64 / asymptotic,
            };
            emit(
                format,
                &record,
                || {
                    (
                        "max_radius,count,ratio_to_asymptotic".into(),
                        format!(
                            "{},{},{}",
                            record.max_radius, record.count, record.ratio_to_asymptotic
                        ),
                    )
                },
                &mut header_done,
                sink,
            )?;
        }
    }
    Ok(())
}

#[derive(Deserialize)]
struct GeneratorFile {
    basepoint: [f64; 2],
    generators: Vec<[[f64; 2]; 2]>,
}

fn reduce(target: &ReduceTarget, sink: &mut impl Write) -> Result<(), AnyError> {
    match target {
        ReduceTarget::Fuchsian { gens, point } => {
            let file: GeneratorFile = serde_json::from_reader(BufReader::new(File::open(gens)?))?;
            let basepoint = core::HPoint::new(file.basepoint[0], file.basepoint[1])?;
            let mobius: Result<Vec<_>, _> = file
                .generators
                .iter()
                .map(|g| core::Mobius::new(g[0][0], g[0][1], g[1][0], g[1][1]))
                .collect();
            let gset = core::GeneratorSet::new(mobius?, basepoint)?;

            let (re, im) = point
                .split_once(',')
                .ok_or("point must be given as re,im")?;
            let x = core::HPoint::new(re.trim().parse()?, im.trim().parse()?)?;

            let trace = core::greedy_reduce(&x, &gset)?;
            let record = ReduceRecord {
                input: [x.re(), x.im()],
                final_point: [trace.final_point.re(), trace.final_point.im()],
                steps: trace.steps,
                word: trace.word,
                matrix: [
                    [trace.matrix.a, trace.matrix.b],
                    [trace.matrix.c, trace.matrix.d],
                ],
            };
            serde_json::to_writer(&mut *sink, &record)?;
            writeln!(sink)?;
        }
    }
    Ok(())
}

fn stats(target: &StatsTarget, sink: &mut impl Write) -> Result<(), AnyError> {
    match target {
        StatsTarget::Uniformity { input } => {
            let reader = BufReader::new(File::open(input)?);
            let mut counts: std::collections::HashMap<String, u64> =
                std::collections::HashMap::new();
            for line in reader.lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                // Normalize through serde so formatting differences collapse.
                let value: serde_json::Value = serde_json::from_str(&line)?;
                *counts.entry(value.to_string()).or_default() += 1;
            }
            if counts.is_empty() {
                return Err("no records in input".into());
            }
            let observed: Vec<u64> = {
                let mut keys: Vec<&String> = counts.keys().collect();
                keys.sort();
                keys.iter().map(|k| counts[*k]).collect()
            };
            let report = core::chi_square_uniform(
                &input.file_name().unwrap_or_default().to_string_lossy(),
                &observed,
            )?;
            let record = ReportRecord {
                group_id: report.group_id,
                support_size: report.support_size,
                draws: report.draws,
                chi_square: report.chi_square,
                dof: report.dof,
                p_value: report.p_value,
                tv_estimate: report.tv_estimate,
            };
            serde_json::to_writer(&mut *sink, &record)?;
            writeln!(sink)?;
        }
    }
    Ok(())
}
