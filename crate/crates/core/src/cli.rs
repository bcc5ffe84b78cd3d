//! The `chebias` command line.
//!
//! Exit codes: 0 on success, 1 when a check or validation fails, 2 on usage
//! errors (bad flags, unreadable inputs). Logs go to stderr, data to stdout
//! or to the requested files.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use serde::Serialize;
use tracing::{info, warn};

use crate::classfn::{
    abelian_characters, induce, inner_product, mean_of_square_twist, power_root_count, power_twist,
    square_root_count, ClassFunction,
};
use crate::counter::{self, Checkpoints};
use crate::criteria::{build_standard_example, check_theorem, search_sn_instances_with, SearchConfig};
use crate::fieldarith::{cyclotomic_field_data_with, CyclotomicSpec, FrobeniusOracle, NumberFieldData};
use crate::permgroup::{Permutation, PermutationGroup};
use crate::transfer::{PatternTable, TransferChecker};
use crate::scalar::ClassValue;
use crate::GaussianRational;

/// Environment variable naming the directory searched for field files.
pub const FIXTURES_ENV: &str = "CHEBIAS_FIXTURES";

#[derive(Debug, Parser)]
#[command(name = "chebias", version, about = "Exact Chebyshev-bias laboratory for Chebotarev prime races")]
pub struct Cli {
    /// More log output (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    /// Only warnings and errors on stderr.
    #[arg(short, long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and inspect permutations and groups.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Search symmetric groups for bias instances of the commuting-subgroups kind.
    Search(SearchArgs),
    /// Check the bias criterion for the built-in example or a field file.
    Check(CheckArgs),
    /// Field-data files: validation and cyclotomic generation.
    #[command(subcommand)]
    Field(FieldCommand),
    /// Count prime ideals by Frobenius class and write the bias series.
    Count(CountArgs),
    /// Extract `(x, D(x))` pairs from a series file.
    EmitFigure(EmitFigureArgs),
    /// Run the exact identity suites.
    Selftest,
}

#[derive(Debug, Subcommand)]
pub enum GroupCommand {
    /// Print a permutation in canonical cycle notation with its cycle type and order.
    Parse {
        cycles: String,
        #[arg(long)]
        degree: usize,
    },
    /// Generate a group and list its conjugacy classes.
    Show {
        #[arg(long)]
        degree: usize,
        /// Generators in cycle notation.
        #[arg(required = true)]
        generators: Vec<String>,
    },
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub degree: usize,
    /// Skip cycle shapes whose order exceeds this.
    #[arg(long, default_value = "1000000", value_parser = parse_count)]
    pub max_order: u64,
    #[arg(long, default_value = "10000", value_parser = parse_count)]
    pub max_group_order: u64,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum, conflicts_with = "field", required_unless_present = "field")]
    pub example: Option<Example>,
    #[arg(long)]
    pub field: Option<PathBuf>,
    /// Also print how each class of G⁺ splits in K.
    #[arg(long)]
    pub patterns: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Example {
    Standard,
}

#[derive(Debug, Subcommand)]
pub enum FieldCommand {
    /// Check a field file at random primes in [10^6, 10^7].
    Validate {
        file: PathBuf,
        #[arg(long, default_value = "8", value_parser = parse_count)]
        samples: u64,
        #[arg(long, default_value = "1")]
        seed: u64,
    },
    /// Write field data for Q(ζ_m).
    Cyclotomic {
        #[arg(value_parser = parse_count)]
        m: u64,
        #[arg(long)]
        out: PathBuf,
        /// Residues generating the subgroup G (comma separated); all units by default.
        #[arg(long, value_delimiter = ',')]
        subgroup: Option<Vec<u64>>,
    },
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub field: PathBuf,
    #[arg(long, value_parser = parse_count)]
    pub limit: u64,
    #[arg(long, default_value = "1.05")]
    pub grid_ratio: f64,
    #[arg(long, value_enum, default_value = "bias")]
    pub t: TChoice,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "1", value_parser = parse_count)]
    pub threads: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TChoice {
    /// `(|G|/|C₁|)·1_{C₁} − (|G|/|C₂|)·1_{C₂}`.
    Bias,
    /// The constant function 1.
    One,
}

#[derive(Debug, Args)]
pub struct EmitFigureArgs {
    #[arg(long)]
    pub series: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

/// A non-negative integer, also accepted in scientific notation (`1e7`).
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if !v.is_finite() || v < 0.0 || v.fract() != 0.0 || v > u64::MAX as f64 {
        return Err(format!("{s:?} is not a non-negative integer"));
    }
    Ok(v as u64)
}

/// Failures mapped onto exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Check(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    init_logging(cli.verbose, cli.quiet);
    let result = match cli.command {
        Command::Group(g) => cmd_group(g),
        Command::Search(a) => cmd_search(a),
        Command::Check(a) => cmd_check(a),
        Command::Field(f) => cmd_field(f),
        Command::Count(a) => cmd_count(a),
        Command::EmitFigure(a) => cmd_emit_figure(a),
        Command::Selftest => cmd_selftest(),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn init_logging(verbose: u8, quiet: bool) {
    let level = match (quiet, verbose) {
        (true, _) => "warn",
        (false, 0) => "info",
        (false, 1) => "debug",
        _ => "trace",
    };
    let filter = tracing_subscriber::EnvFilter::try_from_default_env()
        .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new(level));
    let _ = tracing_subscriber::fmt()
        .with_env_filter(filter)
        .with_writer(std::io::stderr)
        .with_ansi(std::io::IsTerminal::is_terminal(&std::io::stderr()))
        .without_time()
        .try_init();
}

fn print_json<T: Serialize>(v: &T) -> CmdResult {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn default_fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Tries the path as given, with `.json` appended, then inside the fixture
/// directory (`$CHEBIAS_FIXTURES`, else the repository's `fixtures/`).
pub fn resolve_field_path(p: &Path) -> Option<PathBuf> {
    let with_ext = |q: &Path| {
        let mut s = q.as_os_str().to_owned();
        s.push(".json");
        PathBuf::from(s)
    };
    let mut candidates = vec![p.to_path_buf(), with_ext(p)];
    let dir = std::env::var_os(FIXTURES_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(default_fixture_dir);
    if let Some(name) = p.file_name() {
        let q = dir.join(name);
        candidates.push(with_ext(&q));
        candidates.push(q);
    }
    candidates.into_iter().find(|c| c.is_file())
}

fn load_field(p: &Path) -> Result<NumberFieldData, Failure> {
    let path = resolve_field_path(p).ok_or_else(|| Failure::Usage(format!("no field file at {}", p.display())))?;
    let fd = NumberFieldData::load(&path)?;
    info!(
        field = %fd.name,
        path = %path.display(),
        checksum = %fd.checksum,
        excluded = ?FrobeniusOracle::excluded_primes(&fd),
        "loaded field"
    );
    Ok(fd)
}

fn cmd_group(g: GroupCommand) -> CmdResult {
    match g {
        GroupCommand::Parse { cycles, degree } => {
            let p = Permutation::parse(&cycles, degree)?;
            println!("{p}");
            println!("cycle type {:?}", p.cycle_type());
            println!("order {}", p.order());
        }
        GroupCommand::Show { degree, generators } => {
            let gens = generators
                .iter()
                .map(|s| Permutation::parse(s, degree))
                .collect::<Result<Vec<_>, _>>()?;
            let g = PermutationGroup::generate(degree, &gens)?;
            println!("order {}", g.order());
            println!("abelian {}", g.is_abelian());
            println!("classes {}", g.num_classes());
            for c in g.classes() {
                let rep = g.element(c.representative);
                println!("  {rep}  size {}  cycle type {:?}", c.len(), rep.cycle_type());
            }
        }
    }
    Ok(())
}

fn cmd_search(a: SearchArgs) -> CmdResult {
    let config = SearchConfig {
        max_group_order: a.max_group_order as usize,
        ..SearchConfig::default()
    };
    let found = search_sn_instances_with(a.degree, a.max_order, config)?;
    info!(degree = a.degree, instances = found.len(), "search finished");
    let records: Vec<_> = found.iter().map(|i| i.record()).collect();
    print_json(&records)?;
    if found.iter().any(|i| !i.certificate.is_valid() || !i.lemma.holds()) {
        return Err(Failure::Check("a returned instance failed re-verification".into()));
    }
    Ok(())
}

fn print_patterns(emb: &crate::SubgroupEmbedding) {
    let amb = emb.ambient();
    let sub = emb.sub();
    let table = PatternTable::new(emb);
    println!("splitting in K by class of G⁺ (residue degree x multiplicity, class of G):");
    for (d, pattern) in table.patterns().iter().enumerate() {
        let parts: Vec<String> = pattern
            .entries
            .iter()
            .map(|e| format!("f={} x{} {}", e.residue_degree, e.multiplicity, sub.class_representative(e.class_id)))
            .collect();
        println!(
            "  {}  size {}: {}",
            amb.class_representative(d),
            amb.classes()[d].len(),
            parts.join(", ")
        );
    }
}

fn cmd_check(a: CheckArgs) -> CmdResult {
    let (emb, c1, c2) = match (&a.example, &a.field) {
        (Some(Example::Standard), _) => {
            let ex = build_standard_example();
            (ex.embedding, ex.c1, ex.c2)
        }
        (None, Some(path)) => {
            let fd = load_field(path)?;
            (fd.embedding.clone(), fd.class1, fd.class2)
        }
        (None, None) => return Err(Failure::Usage("need --example or --field".into())),
    };
    let cert = check_theorem(&emb, c1, c2)?;
    print_json(&cert.summary())?;
    if a.patterns {
        print_patterns(&emb);
    }
    if !cert.is_valid() {
        return Err(Failure::Check(format!(
            "fused = {}, r1 = {}, r2 = {}",
            cert.fused, cert.r1, cert.r2
        )));
    }
    Ok(())
}

fn cmd_field(f: FieldCommand) -> CmdResult {
    match f {
        FieldCommand::Validate { file, samples, seed } => {
            let fd = load_field(&file)?;
            let report = fd.validate(samples as usize, seed);
            print_json(&report)?;
            if let Some(msg) = report.failure {
                return Err(Failure::Check(msg));
            }
        }
        FieldCommand::Cyclotomic { m, out, subgroup } => {
            let fd = cyclotomic_field_data_with(&CyclotomicSpec { m, subgroup })?;
            let text = serde_json::to_string_pretty(&fd.to_file_struct())? + "\n";
            counter::output::write_atomically(&out, text.as_bytes())?;
            info!(m, path = %out.display(), checksum = %fd.checksum, "wrote cyclotomic field");
        }
    }
    Ok(())
}

fn cmd_count(a: CountArgs) -> CmdResult {
    if a.threads == 0 {
        return Err(Failure::Usage("--threads must be at least 1".into()));
    }
    let cps = Checkpoints::geometric(a.limit, a.grid_ratio)?;
    let fd = load_field(&a.field)?;
    let sub = fd.embedding.sub().clone();
    let t: ClassFunction<GaussianRational> = match a.t {
        TChoice::Bias => ClassFunction::bias_function(sub, fd.class1, fd.class2),
        TChoice::One => ClassFunction::constant(sub, GaussianRational::one()),
    };
    let started = Instant::now();
    info!(limit = a.limit, threads = a.threads, checkpoints = cps.len(), "counting");
    let series = counter::accumulate(&fd, &fd.embedding, &t, fd.class1, fd.class2, &cps, a.threads as usize)?;
    info!(
        excluded_seen = ?series.excluded,
        seconds = started.elapsed().as_secs_f64(),
        "counted"
    );
    counter::emit_series(&series, &a.out)?;
    if let Some(last) = series.rows.last() {
        info!(
            x = last.x,
            pi_c1 = series.pi_c1(last),
            pi_c2 = series.pi_c2(last),
            d = last.d,
            log_density = last.log_density,
            "final checkpoint"
        );
    }
    Ok(())
}

fn cmd_emit_figure(a: EmitFigureArgs) -> CmdResult {
    let n = counter::emit_figure(&a.series, &a.out)?;
    info!(points = n, path = %a.out.display(), "wrote figure data");
    Ok(())
}

fn cmd_selftest() -> CmdResult {
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool| {
        println!("{} {name}", if ok { "ok  " } else { "FAIL" });
        if !ok {
            failures.push(name.to_string());
        }
    };
    let ex = build_standard_example();
    let emb = &ex.embedding;
    let sub = emb.sub().clone();

    let cert = check_theorem(emb, ex.c1, ex.c2)?;
    check("certificate: orders 32/8, fused, r-gap 4", {
        emb.ambient().order() == 32 && sub.order() == 8 && cert.is_valid() && cert.r_gap() == 4
    });

    let t: ClassFunction<GaussianRational> = ClassFunction::bias_function(sub.clone(), ex.c1, ex.c2);
    check("induced bias function vanishes", induce(&t, emb)?.is_zero());
    let r: ClassFunction<GaussianRational> = square_root_count(&sub);
    check(
        "-<t, r_G> = 4",
        -inner_product(&t, &r)? == GaussianRational::from_i64(4),
    );
    check("mean of t(g^2) equals <t, r_G>", mean_of_square_twist(&t) == inner_product(&t, &r)?);

    let checker = TransferChecker::new(emb, &t)?;
    let all = (0..emb.ambient().order()).all(|s| (1..=32).all(|m| checker.check(s, m)));
    check("transfer identity for all sigma, m <= 32", all);

    let t1: ClassFunction<GaussianRational> = ClassFunction::indicator(sub.clone(), ex.c1)
        .try_sub(&ClassFunction::indicator(sub.clone(), ex.c2))?;
    let cube = power_twist(&t1, 3)?;
    let constant_one = ClassFunction::constant(sub.clone(), GaussianRational::one());
    check("<t(.^3), 1> = 0", inner_product(&cube, &constant_one)?.is_zero());
    let odd_ok = [1u64, 3, 5, 7].iter().all(|&m| {
        power_root_count::<GaussianRational>(&sub, m)
            .map(|rm| rm.values().iter().all(|v| *v == GaussianRational::one()))
            .unwrap_or(false)
    });
    check("r_m = 1 for m = 1, 3, 5, 7", odd_ok);

    let sq = power_twist(&t1, 2)?;
    let p = |s: &str| Permutation::parse(s, 8).expect("literal");
    let four = ["(5678)", "(5678)(12)(34)", "(5876)", "(5876)(12)(34)"];
    let chars = abelian_characters::<GaussianRational>(&sub)?;
    let char_ok = chars.iter().all(|chi| {
        let lhs = inner_product(chi, &sq).expect("same group") * GaussianRational::from_i64(-8);
        let rhs = four.iter().fold(GaussianRational::zero(), |acc, s| {
            acc + chi.eval(sub.index_of(&p(s)).expect("element of G")).clone()
        });
        lhs == rhs
    });
    check("-8<chi, t(.^2)> four-term identity for all characters", chars.len() == 8 && char_ok);

    if failures.is_empty() {
        Ok(())
    } else {
        warn!(?failures, "selftest failures");
        Err(Failure::Check(failures.join("; ")))
    }
}
