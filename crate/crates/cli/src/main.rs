//! Batch front end: generators, connectivity, linkage, Hamilton cycle
//! extraction and certificate verification over the tournament text format.
//!
//! Machine-readable JSON goes to the output target (stdout or `-o`), human
//! summaries to stderr. Exit codes: 0 success, 1 usage or input error,
//! 2 validated failure (a structured report was emitted).

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use tourney::engine::{
    k_hamilton_cycles, verify_certificate, EngineConfig, HamiltonCertificate, Mode,
};
use tourney::graph::Digraph;

#[derive(Parser)]
#[command(
    name = "tourney",
    about = "tournament Hamilton cycle toolkit",
    version,
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a tournament file
    Gen(GenArgs),
    /// Exact strong vertex connectivity with a witness cut
    Connectivity(ConnectivityArgs),
    /// Vertex-disjoint linking paths for endpoint pairs
    Link(LinkArgs),
    /// One Hamilton cycle of a strongly connected tournament
    Hamcycle(HamcycleArgs),
    /// k edge-disjoint Hamilton cycles with a certificate
    Hamcycles(HamcyclesArgs),
    /// Verify the layered family's connectivity floor and regularity ceiling
    Extremal(ExtremalArgs),
    /// Re-validate a certificate against the raw input
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    Transitive,
    Rotational,
    Random,
    Extremal,
}

#[derive(Args)]
struct GenArgs {
    /// family to generate
    #[arg(long = "type", value_enum)]
    kind: GenKind,
    /// order for transitive/random
    #[arg(long)]
    n: Option<usize>,
    /// rotation radius (rotational, extremal)
    #[arg(long)]
    ell: Option<usize>,
    /// middle block size (extremal)
    #[arg(long)]
    m: Option<usize>,
    /// generator seed (falls back to TOURNEY_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ConnectivityArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct LinkArgs {
    input: PathBuf,
    /// endpoint pairs as JSON, e.g. '[[0,5],[3,9]]'
    #[arg(long)]
    pairs: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct HamcycleArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct HamcyclesArgs {
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "best-effort")]
    mode: String,
    /// dominating rounds per cycle (mode default when omitted)
    #[arg(long)]
    t: Option<usize>,
    /// dominating-set size cap (mode default when omitted)
    #[arg(long)]
    c: Option<usize>,
    /// shortness divisor for the absorbed linkage
    #[arg(long, default_value_t = 30)]
    s: usize,
    /// worker threads for certificate re-validation
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExtremalArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    ell: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    certificate: PathBuf,
    input: PathBuf,
    /// worker threads for cycle re-validation
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // keep clap's rendering but pin the usage-error exit code
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(output: &Option<PathBuf>, value: &impl Serialize) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    text.push('\n');
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| e.to_string()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_tournament(path: &Path) -> Result<Digraph, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Digraph::from_text(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Gen(args) => run_gen(args),
        Command::Connectivity(args) => run_connectivity(args),
        Command::Link(args) => run_link(args),
        Command::Hamcycle(args) => run_hamcycle(args),
        Command::Hamcycles(args) => run_hamcycles(args),
        Command::Extremal(args) => run_extremal(args),
        Command::Verify(args) => run_verify(args),
    }
}

fn run_gen(args: GenArgs) -> Result<ExitCode, String> {
    let seed = args
        .seed
        .or_else(|| {
            std::env::var("TOURNEY_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(0);
    let g = match args.kind {
        GenKind::Transitive => {
            let n = args.n.ok_or("--n is required for --type transitive")?;
            Digraph::transitive(n)
        }
        GenKind::Rotational => {
            let l = args.ell.ok_or("--ell is required for --type rotational")?;
            if l == 0 {
                return Err("--ell must be at least 1".into());
            }
            Digraph::rotational(l)
        }
        GenKind::Random => {
            let n = args.n.ok_or("--n is required for --type random")?;
            Digraph::random_tournament(n, seed)
        }
        GenKind::Extremal => {
            let m = args.m.ok_or("--m is required for --type extremal")?;
            let l = args.ell.ok_or("--ell is required for --type extremal")?;
            if m == 0 || l == 0 {
                return Err("--m and --ell must be at least 1".into());
            }
            Digraph::extremal(m, l)
        }
    };
    let text = g.to_text();
    match &args.output {
        Some(path) => std::fs::write(path, text).map_err(|e| e.to_string())?,
        None => print!("{text}"),
    }
    eprintln!(
        "generated {:?} tournament: n={}, seed={}",
        args.kind,
        g.n(),
        seed
    );
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ConnectivityOutput<'a> {
    command: &'static str,
    input: &'a str,
    n: usize,
    kappa: usize,
    witness_cut: Option<Vec<usize>>,
}

fn run_connectivity(args: ConnectivityArgs) -> Result<ExitCode, String> {
    let g = load_tournament(&args.input)?;
    let report = tourney::connectivity::vertex_connectivity(&g);
    emit(
        &args.output,
        &ConnectivityOutput {
            command: "connectivity",
            input: &args.input.display().to_string(),
            n: g.n(),
            kappa: report.kappa,
            witness_cut: report.witness_cut.clone(),
        },
    )?;
    eprintln!("kappa = {}", report.kappa);
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct LinkOutput<'a> {
    command: &'static str,
    input: &'a str,
    pairs: Vec<(usize, usize)>,
    paths: Option<Vec<Vec<usize>>>,
    diagnostics: LinkDiagnostics,
    error: Option<String>,
}

#[derive(Serialize)]
struct LinkDiagnostics {
    network_comparators: usize,
    separating_cut: Option<Vec<usize>>,
}

fn run_link(args: LinkArgs) -> Result<ExitCode, String> {
    let g = load_tournament(&args.input)?;
    let pairs: Vec<(usize, usize)> =
        serde_json::from_str(&args.pairs).map_err(|e| format!("--pairs: {e}"))?;
    let comparators = if pairs.len() >= 2 {
        tourney::sortnet::batcher_comparator_count(pairs.len())
    } else {
        0
    };
    let input = args.input.display().to_string();
    match tourney::linkage::link(&g, &pairs) {
        Ok(sys) => {
            emit(
                &args.output,
                &LinkOutput {
                    command: "link",
                    input: &input,
                    pairs,
                    paths: Some(sys.paths().iter().map(|p| p.vertices().to_vec()).collect()),
                    diagnostics: LinkDiagnostics {
                        network_comparators: comparators,
                        separating_cut: None,
                    },
                    error: None,
                },
            )?;
            eprintln!("linked {} pairs", sys.len());
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            let cut = match &e {
                tourney::Error::SeparatedByCut { cut, .. } => Some(cut.clone()),
                _ => None,
            };
            emit(
                &args.output,
                &LinkOutput {
                    command: "link",
                    input: &input,
                    pairs,
                    paths: None,
                    diagnostics: LinkDiagnostics {
                        network_comparators: comparators,
                        separating_cut: cut,
                    },
                    error: Some(e.to_string()),
                },
            )?;
            eprintln!("link failed: {e}");
            Ok(ExitCode::from(2))
        }
    }
}

#[derive(Serialize)]
struct HamcycleOutput<'a> {
    command: &'static str,
    input: &'a str,
    n: usize,
    cycle: Option<Vec<usize>>,
    error: Option<String>,
}

fn run_hamcycle(args: HamcycleArgs) -> Result<ExitCode, String> {
    let g = load_tournament(&args.input)?;
    let input = args.input.display().to_string();
    match tourney::hamilton::hamilton_cycle_camion(&g) {
        Ok(cycle) => {
            emit(
                &args.output,
                &HamcycleOutput {
                    command: "hamcycle",
                    input: &input,
                    n: g.n(),
                    cycle: Some(cycle.vertices().to_vec()),
                    error: None,
                },
            )?;
            eprintln!("found a Hamilton cycle of length {}", g.n());
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            emit(
                &args.output,
                &HamcycleOutput {
                    command: "hamcycle",
                    input: &input,
                    n: g.n(),
                    cycle: None,
                    error: Some(e.to_string()),
                },
            )?;
            eprintln!("hamcycle failed: {e}");
            Ok(ExitCode::from(2))
        }
    }
}

fn parallel_cycle_check(t: &Digraph, cert: &HamiltonCertificate, jobs: usize) -> bool {
    if jobs <= 1 || cert.cycles.len() <= 1 {
        return cert
            .cycles
            .iter()
            .all(|c| tourney::hamilton::validate_hamilton_cycle(t, &tourney::Cycle(c.clone())));
    }
    let flags: Vec<std::sync::atomic::AtomicBool> = cert
        .cycles
        .iter()
        .map(|_| std::sync::atomic::AtomicBool::new(false))
        .collect();
    std::thread::scope(|scope| {
        for (i, cycle) in cert.cycles.iter().enumerate() {
            let flag = &flags[i];
            scope.spawn(move || {
                let ok =
                    tourney::hamilton::validate_hamilton_cycle(t, &tourney::Cycle(cycle.clone()));
                flag.store(ok, std::sync::atomic::Ordering::SeqCst);
            });
        }
    });
    flags
        .iter()
        .all(|f| f.load(std::sync::atomic::Ordering::SeqCst))
}

fn run_hamcycles(args: HamcyclesArgs) -> Result<ExitCode, String> {
    let g = load_tournament(&args.input)?;
    let mode: Mode = args.mode.parse()?;
    let mut cfg = match mode {
        Mode::Strict => EngineConfig::strict(),
        Mode::Operational => EngineConfig::operational(),
        Mode::BestEffort => EngineConfig::best_effort(),
    };
    cfg.rounds_per_cycle = args.t;
    cfg.set_size_cap = args.c;
    cfg.shortness = args.s;
    match k_hamilton_cycles(&g, args.k, &cfg) {
        Ok(cert) => {
            let revalidated = parallel_cycle_check(&g, &cert, args.jobs);
            emit(&args.output, &cert)?;
            eprintln!(
                "emitted {} of {} cycles (valid={}, revalidated={})",
                cert.cycles.len(),
                args.k,
                cert.valid,
                revalidated
            );
            if cert.valid && revalidated {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
        Err(e) => {
            #[derive(Serialize)]
            struct FailureReport {
                command: &'static str,
                k: usize,
                mode: String,
                error: String,
            }
            emit(
                &args.output,
                &FailureReport {
                    command: "hamcycles",
                    k: args.k,
                    mode: mode.to_string(),
                    error: e.to_string(),
                },
            )?;
            eprintln!("hamcycles failed: {e}");
            Ok(ExitCode::from(2))
        }
    }
}

fn run_extremal(args: ExtremalArgs) -> Result<ExitCode, String> {
    let report = tourney::extremal::verify_extremal_claims(args.m, args.ell)
        .map_err(|e| e.to_string())?;
    emit(&args.output, &report)?;
    let ok = report.kappa_lower_ok
        && report.regular_ceiling_ok.unwrap_or(true)
        && report.packing_within_ceiling.unwrap_or(true);
    eprintln!(
        "extremal m={} l={}: connectivity floor {}, regular ceiling {:?}",
        args.m, args.ell, report.kappa_lower_ok, report.regular_ceiling_ok
    );
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    command: &'static str,
    certificate: &'a str,
    input: &'a str,
    ok: bool,
    error: Option<String>,
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let g = load_tournament(&args.input)?;
    let cert_text = std::fs::read_to_string(&args.certificate)
        .map_err(|e| format!("{}: {e}", args.certificate.display()))?;
    let cert: HamiltonCertificate =
        serde_json::from_str(&cert_text).map_err(|e| format!("certificate: {e}"))?;
    let result = verify_certificate(&g, &cert)
        .and_then(|_| {
            if parallel_cycle_check(&g, &cert, args.jobs) {
                Ok(())
            } else {
                Err(tourney::Error::CertificateInvalid(
                    "cycle re-validation failed".into(),
                ))
            }
        });
    let cert_path = args.certificate.display().to_string();
    let input_path = args.input.display().to_string();
    match result {
        Ok(()) => {
            emit(
                &None,
                &VerifyOutput {
                    command: "verify",
                    certificate: &cert_path,
                    input: &input_path,
                    ok: true,
                    error: None,
                },
            )?;
            eprintln!("certificate verifies");
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            emit(
                &None,
                &VerifyOutput {
                    command: "verify",
                    certificate: &cert_path,
                    input: &input_path,
                    ok: false,
                    error: Some(e.to_string()),
                },
            )?;
            eprintln!("certificate rejected: {e}");
            Ok(ExitCode::from(2))
        }
    }
}
