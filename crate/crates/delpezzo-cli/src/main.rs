//! Command-line front end: seed catalogue, mutation, verification suites,
//! Markov triples, and artifact export.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 computation error (failed Laurent property, overflow, exhausted
//! resampling).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use delpezzo::clusterkit::Quiver;
use delpezzo::comparison::{
    b_from_seed, check_b_compat, check_initial_identity, check_phi_compat, markov_bfs,
    verify_main, verify_main_exhaustive, VerificationReport,
};
use delpezzo::error::Error;
use delpezzo::exactalg::{text, EqMode, ModPParams, DEFAULT_PRIME};
use delpezzo::lgseed::{LGSeed, RepeatPolicy, SeedJson, SurfaceId, Vec2};
use delpezzo::Result;

/// Environment variable overriding the default prime; flags win over it.
const PRIME_ENV: &str = "DELPEZZO_PRIME";

#[derive(Parser)]
#[command(
    name = "delpezzo",
    version,
    about = "Exact seed mutation and cluster-character verification for the five toric del Pezzo surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Operations on the built-in seed catalogue.
    Seeds {
        #[command(subcommand)]
        action: SeedsAction,
    },
    /// Mutate a seed along a sequence and print the result.
    Mutate(MutateArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Enumerate Markov triples reachable by matrix mutation.
    Markov(MarkovArgs),
    /// Export seeds, matrices or quivers.
    Export(ExportArgs),
}

#[derive(Subcommand)]
enum SeedsAction {
    /// Print all five initial seeds.
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args)]
struct MutateArgs {
    /// Surface name (cp2, cp1xcp1, bl1cp2, bl2cp2, bl3cp2).
    #[arg(short, long)]
    surface: String,
    /// Comma-separated 1-based direction indices; empty for the initial seed.
    #[arg(short = 'q', long, default_value = "")]
    sequence: String,
    /// Allow repeated indices in the sequence.
    #[arg(long)]
    allow_repeats: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Directory for cached seed artifacts, keyed by surface and sequence.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WhichCheck {
    /// Initial character identity per surface.
    Initial,
    /// Map/mutation compatibility on random monomials.
    Compat,
    /// Matrix recomputation compatibility.
    Bmat,
    /// Identity transport along mutation sequences.
    Main,
    /// Everything above.
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Modp,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    which: WhichCheck,
    /// Surface name, or "all".
    #[arg(short, long, default_value = "all")]
    surface: String,
    /// Comma-separated 1-based sequence for `main`; exhaustive when absent.
    #[arg(short = 'q', long)]
    sequence: Option<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Number of random points per identity in modp mode.
    #[arg(long, default_value_t = 20)]
    trials: u32,
    /// Prime modulus for modp mode (also via DELPEZZO_PRIME).
    #[arg(long)]
    prime: Option<u64>,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Number of random monomials for the compat check.
    #[arg(long, default_value_t = 200)]
    vectors: usize,
    /// Mutation depth for the bmat walk.
    #[arg(long, default_value_t = 2)]
    depth: usize,
    #[arg(long)]
    allow_repeats: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct MarkovArgs {
    /// Mutation depth of the breadth-first search.
    #[arg(long, default_value_t = 6)]
    depth: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportWhat {
    Seed,
    Bmatrix,
    Quiver,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long, value_enum)]
    what: ExportWhat,
    #[arg(short, long)]
    surface: String,
    #[arg(short = 'q', long, default_value = "")]
    sequence: String,
    #[arg(long)]
    allow_repeats: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn main() -> ExitCode {
    // die quietly when the consumer closes the pipe
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Invalid(_)
        | Error::Parse(_)
        | Error::RepetitionRejected { .. }
        | Error::IndexOutOfRange { .. }
        | Error::NotPrime(_) => 2,
        _ => 3,
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Seeds { action: SeedsAction::List { format } } => seeds_list(format),
        Command::Mutate(args) => mutate(args),
        Command::Verify(args) => verify(args),
        Command::Markov(args) => markov(args),
        Command::Export(args) => export(args),
    }
}

fn parse_sequence(s: &str, rank: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let idx: usize =
            part.parse().map_err(|_| Error::Parse(format!("invalid index `{part}`")))?;
        if idx == 0 || idx > rank {
            return Err(Error::IndexOutOfRange { index: idx, rank });
        }
        out.push(idx - 1);
    }
    Ok(out)
}

fn parse_surfaces(s: &str) -> Result<Vec<SurfaceId>> {
    if s.eq_ignore_ascii_case("all") {
        Ok(SurfaceId::ALL.to_vec())
    } else {
        Ok(vec![SurfaceId::parse(s)?])
    }
}

fn policy(allow_repeats: bool) -> RepeatPolicy {
    if allow_repeats {
        RepeatPolicy::Allow
    } else {
        RepeatPolicy::Reject
    }
}

fn seed_text(seed: &LGSeed) -> Result<String> {
    let mut out = String::new();
    out.push_str(&format!("potential  {}\n", text::render(seed.potential(), 'z')));
    let dirs: Vec<String> = seed
        .directions()
        .iter()
        .map(|d| format!("({}, {})", d.vec()[0], d.vec()[1]))
        .collect();
    out.push_str(&format!("directions {}\n", dirs.join(", ")));
    let b = b_from_seed(seed)?;
    for row in b.rows() {
        out.push_str(&format!("b          {row:?}\n"));
    }
    Ok(out)
}

fn seed_json_string(seed: &LGSeed, surface: SurfaceId, seq: &[usize]) -> String {
    let one_based: Vec<usize> = seq.iter().map(|&i| i + 1).collect();
    let json = seed.to_json(surface, &one_based);
    let mut s = serde_json::to_string(&json).expect("seed serializes");
    s.push('\n');
    s
}

fn seeds_list(format: Format) -> Result<ExitCode> {
    match format {
        Format::Text => {
            for surface in SurfaceId::ALL {
                let seed = surface.initial_seed();
                println!("{surface}");
                print!("{}", seed_text(&seed)?);
            }
        }
        Format::Json => {
            let all: Vec<SeedJson> =
                SurfaceId::ALL.iter().map(|s| s.initial_seed().to_json(*s, &[])).collect();
            println!("{}", serde_json::to_string(&all).expect("seeds serialize"));
        }
        Format::Dot => {
            for surface in SurfaceId::ALL {
                let b = b_from_seed(&surface.initial_seed())?;
                print!("{}", Quiver::from_b(&b).to_dot(surface.json_name()));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn mutated_seed(surface: SurfaceId, seq: &[usize], pol: RepeatPolicy) -> Result<LGSeed> {
    surface.initial_seed().iterate(seq, pol)
}

fn mutate(args: MutateArgs) -> Result<ExitCode> {
    let surface = SurfaceId::parse(&args.surface)?;
    let seq = parse_sequence(&args.sequence, surface.rank())?;

    let cache_path = args.cache_dir.as_ref().map(|dir| {
        let key: Vec<String> = seq.iter().map(|i| (i + 1).to_string()).collect();
        let key = if key.is_empty() { "initial".to_string() } else { key.join("-") };
        dir.join(format!("{}_{key}.json", surface.json_name()))
    });

    let artifact = match cache_path.as_ref().filter(|p| p.exists()) {
        Some(path) => {
            let body = std::fs::read_to_string(path)
                .map_err(|e| Error::Invalid(format!("cache read failed: {e}")))?;
            // the cache is an optimization only: decode and revalidate
            let json: SeedJson = serde_json::from_str(&body)
                .map_err(|e| Error::Parse(format!("cache entry corrupt: {e}")))?;
            json.to_seed()?;
            body
        }
        None => {
            let seed = mutated_seed(surface, &seq, policy(args.allow_repeats))?;
            let body = seed_json_string(&seed, surface, &seq);
            if let Some(path) = &cache_path {
                if let Some(parent) = path.parent() {
                    std::fs::create_dir_all(parent)
                        .map_err(|e| Error::Invalid(format!("cache dir failed: {e}")))?;
                }
                std::fs::write(path, &body)
                    .map_err(|e| Error::Invalid(format!("cache write failed: {e}")))?;
            }
            body
        }
    };

    match args.format {
        Format::Json => print!("{artifact}"),
        Format::Text => {
            let json: SeedJson = serde_json::from_str(&artifact).expect("own artifact");
            let seed = json.to_seed()?;
            print!("{}", seed_text(&seed)?);
        }
        Format::Dot => {
            let json: SeedJson = serde_json::from_str(&artifact).expect("own artifact");
            let seed = json.to_seed()?;
            let b = b_from_seed(&seed)?;
            print!("{}", Quiver::from_b(&b).to_dot(surface.json_name()));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn eq_mode(args: &VerifyArgs) -> Result<EqMode> {
    match args.mode {
        ModeArg::Exact => Ok(EqMode::Exact),
        ModeArg::Modp => {
            let env_prime = std::env::var(PRIME_ENV)
                .ok()
                .map(|v| {
                    v.parse::<u64>()
                        .map_err(|_| Error::Parse(format!("{PRIME_ENV}={v} is not an integer")))
                })
                .transpose()?;
            let prime = args.prime.or(env_prime).unwrap_or(DEFAULT_PRIME);
            if args.trials == 0 {
                return Err(Error::Invalid("trials must be at least 1".into()));
            }
            Ok(EqMode::ModP(ModPParams { prime, trials: args.trials, rng_seed: args.rng_seed }))
        }
    }
}

fn random_vectors(count: usize, rng_seed: u64) -> Vec<Vec2> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(rng_seed);
    (0..count).map(|_| [rng.gen_range(-5..=5), rng.gen_range(-5..=5)]).collect()
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let surfaces = parse_surfaces(&args.surface)?;
    let mode = eq_mode(&args)?;
    let mut reports: Vec<VerificationReport> = Vec::new();

    for &surface in &surfaces {
        let run_initial = matches!(args.which, WhichCheck::Initial | WhichCheck::All);
        let run_compat = matches!(args.which, WhichCheck::Compat | WhichCheck::All);
        let run_bmat = matches!(args.which, WhichCheck::Bmat | WhichCheck::All);
        let run_main = matches!(args.which, WhichCheck::Main | WhichCheck::All);

        if run_initial {
            reports.push(check_initial_identity(surface)?);
        }
        if run_compat {
            let vectors = random_vectors(args.vectors, args.rng_seed);
            let seed = surface.initial_seed();
            for i in 0..surface.rank() {
                reports.push(check_phi_compat(surface, &seed, i, &vectors, mode)?);
            }
        }
        if run_bmat {
            bmat_walk(surface, args.depth, &mut reports)?;
        }
        if run_main {
            match &args.sequence {
                Some(seq) => {
                    let seq = parse_sequence(seq, surface.rank())?;
                    reports.push(verify_main(surface, &seq, mode, policy(args.allow_repeats))?);
                }
                None => reports.extend(verify_main_exhaustive(surface, mode)?),
            }
        }
    }

    reports.sort_by(|a, b| {
        (&a.surface, &a.check, &a.sequence).cmp(&(&b.surface, &b.check, &b.sequence))
    });
    let all_pass = reports.iter().all(|r| r.passed());
    match args.format {
        Format::Json => {
            println!("{}", serde_json::to_string(&reports).expect("reports serialize"))
        }
        _ => {
            for r in &reports {
                let seq: Vec<String> = r.sequence.iter().map(|i| i.to_string()).collect();
                println!(
                    "{:4} {:7} {:8} [{}] {}ms{}",
                    if r.passed() { "pass" } else { "FAIL" },
                    r.check,
                    r.surface,
                    seq.join(","),
                    r.millis,
                    r.witness.as_deref().map(|w| format!(" {w}")).unwrap_or_default()
                );
            }
            println!(
                "{} checks, {} failed",
                reports.len(),
                reports.iter().filter(|r| !r.passed()).count()
            );
        }
    }
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// Checks matrix/seed mutation compatibility at every node of the
/// repetition-free tree up to the given depth.
fn bmat_walk(
    surface: SurfaceId,
    depth: usize,
    reports: &mut Vec<VerificationReport>,
) -> Result<()> {
    fn recurse(
        surface: SurfaceId,
        seed: &LGSeed,
        used: &mut Vec<usize>,
        depth: usize,
        reports: &mut Vec<VerificationReport>,
    ) -> Result<()> {
        for i in 0..seed.rank() {
            reports.push(check_b_compat(surface, seed, i)?);
        }
        if depth == 0 {
            return Ok(());
        }
        for i in 0..seed.rank() {
            if used.contains(&i) {
                continue;
            }
            let next = seed.mutate(i)?;
            used.push(i);
            recurse(surface, &next, used, depth - 1, reports)?;
            used.pop();
        }
        Ok(())
    }
    recurse(surface, &surface.initial_seed(), &mut Vec::new(), depth, reports)
}

fn markov(args: MarkovArgs) -> Result<ExitCode> {
    let triples = markov_bfs(args.depth)?;
    match args.format {
        Format::Json => {
            let list: Vec<[u64; 3]> = triples.iter().map(|&(a, b, c)| [a, b, c]).collect();
            println!("{}", serde_json::to_string(&list).expect("triples serialize"));
        }
        _ => {
            for (a, b, c) in &triples {
                println!("({a}, {b}, {c})");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn export(args: ExportArgs) -> Result<ExitCode> {
    let surface = SurfaceId::parse(&args.surface)?;
    let seq = parse_sequence(&args.sequence, surface.rank())?;
    let seed = mutated_seed(surface, &seq, policy(args.allow_repeats))?;
    let b = b_from_seed(&seed)?;
    match (args.what, args.format) {
        (ExportWhat::Seed, Format::Json) => print!("{}", seed_json_string(&seed, surface, &seq)),
        (ExportWhat::Seed, Format::Text) => print!("{}", seed_text(&seed)?),
        (ExportWhat::Bmatrix, Format::Json) => {
            println!("{}", serde_json::to_string(&b.to_json()).expect("matrix serializes"))
        }
        (ExportWhat::Bmatrix, Format::Text) => {
            for row in b.rows() {
                println!("{row:?}");
            }
        }
        (ExportWhat::Quiver, Format::Dot) => {
            print!("{}", Quiver::from_b(&b).to_dot(surface.json_name()))
        }
        (ExportWhat::Quiver, Format::Json) => {
            let q = Quiver::from_b(&b);
            let rows: Vec<Vec<u64>> = (0..q.size())
                .map(|i| (0..q.size()).map(|j| q.arrows(i, j)).collect())
                .collect();
            println!("{}", serde_json::to_string(&rows).expect("quiver serializes"));
        }
        _ => {
            return Err(Error::Invalid("unsupported what/format combination".into()));
        }
    }
    Ok(ExitCode::SUCCESS)
}
