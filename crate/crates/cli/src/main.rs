//! `virtri`: command-line front end.
//!
//! Exit status: 0 success, 1 verification failure, 2 search exhausted,
//! 3 input error (including unknown flags).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use virtri::covers::{
    build_cover, enumerate_reps, search_cover_killing_diagonals, Checkpoint, CoverError,
    SearchConfig, SearchMode, SearchOutcome,
};
use virtri::diagonals::{diagonals_after_cover, enumerate_diagonals};
use virtri::format::ComplexFile;
use virtri::pipeline::{
    input_summary, triangulation_stats, verify_file, virtualize, OutputPaths, PipelineConfig,
    PipelineError, RunStatus, VerifyError, REPORT_FORMAT,
};
use virtri::pulling::{order_vertices, subdivide_complex, OrderSpec, PullingError};
use virtri::{extract_presentation, load_complex, validate_complex, BoundaryMode, PolyhedralComplex};

/// Writes to stdout. A closed pipe (`virtri ... | head`) ends the process
/// quietly instead of panicking.
fn emit(args: std::fmt::Arguments<'_>) {
    use std::io::Write;
    if let Err(e) = std::io::stdout().write_fmt(args) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("failed writing to stdout: {e}");
    }
}

macro_rules! print {
    ($($t:tt)*) => { emit(format_args!($($t)*)) };
}

macro_rules! println {
    () => { emit(format_args!("\n")) };
    ($($t:tt)*) => { emit(format_args!("{}\n", format_args!($($t)*))) };
}

const OK: u8 = 0;
const VERIFY_FAILED: u8 = 1;
const EXHAUSTED: u8 = 2;
const INPUT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "virtri", version, about = "Finite covers and pulling triangulations of face-pairing complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Complex in vtc-1 format.
    file: PathBuf,
    /// Accept unpaired facets (for testing subdivisions of single cells).
    #[arg(long)]
    free_boundary: bool,
    /// Print the machine-readable form.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 24)]
    max_degree: usize,
    #[arg(long, default_value_t = 10_000)]
    cap: usize,
    /// Search one cover per returning diagonal and combine them.
    #[arg(long)]
    per_diagonal: bool,
    /// Checkpoint token from an earlier exhausted search.
    #[arg(long)]
    resume: Option<String>,
    /// Stop after testing this many reps.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a complex against the format and gluing invariants.
    Validate(Input),
    /// List diagonals, returning flags and witness words.
    Diagonals(Input),
    #[command(subcommand)]
    Covers(CoversCommand),
    /// Pull a complex without returning diagonals.
    Pull {
        #[command(flatten)]
        input: Input,
        /// default, random:SEED or file:PATH (whitespace-separated class ids).
        #[arg(long, default_value = "default")]
        order: String,
        /// Where to write the triangulation.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Cover, pull and verify.
    Virtualize {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value = "default")]
        order: String,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// Where to write the vtr-1 report.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Include wall-clock timings in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Re-verify a triangulation against the complex it came from.
    Verify {
        /// Triangulation in vtc-1 format.
        triangulation: PathBuf,
        #[arg(long)]
        against: PathBuf,
        #[arg(long)]
        free_boundary: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum CoversCommand {
    /// List canonical transitive reps of one degree.
    Enumerate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Search for a regular cover with no returning diagonals.
    Search {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        search: SearchArgs,
    },
}

/// An error message plus the exit status it maps to.
struct Failure(u8, String);

impl Failure {
    fn input(msg: impl ToString) -> Self {
        Failure(INPUT_ERROR, msg.to_string())
    }
}

impl From<CoverError> for Failure {
    fn from(e: CoverError) -> Self {
        let code = match e {
            CoverError::Verification(_) | CoverError::NotFactoring { .. } => VERIFY_FAILED,
            _ => INPUT_ERROR,
        };
        Failure(code, e.to_string())
    }
}

impl From<PullingError> for Failure {
    fn from(e: PullingError) -> Self {
        let code = match e {
            PullingError::Verification(_) => VERIFY_FAILED,
            _ => INPUT_ERROR,
        };
        Failure(code, e.to_string())
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Cover(e) => e.into(),
            PipelineError::Pulling(e) => e.into(),
            other => Failure::input(other),
        }
    }
}

fn mode(free_boundary: bool) -> BoundaryMode {
    if free_boundary {
        BoundaryMode::FreeBoundary
    } else {
        BoundaryMode::Closed
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load(input: &Input) -> Result<PolyhedralComplex, Failure> {
    load_complex(&read(&input.file)?, mode(input.free_boundary))
        .map_err(|e| Failure::input(format!("{}: {e}", input.file.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn parse_order(s: &str) -> Result<OrderSpec, Failure> {
    if let Some(path) = s.strip_prefix("file:") {
        return OrderSpec::parse_list(&read(Path::new(path))?).map_err(Failure::input);
    }
    s.parse().map_err(Failure::input)
}

fn search_config(args: &SearchArgs) -> Result<SearchConfig, Failure> {
    if args.max_degree == 0 || args.cap == 0 || args.budget == Some(0) {
        return Err(Failure::input("--max-degree, --cap and --budget must be positive"));
    }
    let resume = args
        .resume
        .as_deref()
        .map(Checkpoint::parse)
        .transpose()?;
    Ok(SearchConfig {
        max_degree: args.max_degree,
        cap: args.cap,
        mode: if args.per_diagonal {
            SearchMode::PerDiagonal
        } else {
            SearchMode::Direct
        },
        rep_budget: args.budget,
        resume,
    })
}

fn validate(input: &Input) -> Result<u8, Failure> {
    let text = read(&input.file)?;
    let file = ComplexFile::parse(&text).map_err(|e| Failure::input(format!("{}: {e}", input.file.display())))?;
    let spec = file.to_spec().map_err(Failure::input)?;
    let report = validate_complex(&spec, mode(input.free_boundary));
    let clean = report.is_clean();
    if input.json {
        let mut v = json!({
            "format": REPORT_FORMAT,
            "kind": "validation",
            "clean": clean,
            "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "unpaired_facets": report.unpaired_facets,
        });
        if clean {
            let c = load(input)?;
            v["summary"] = serde_json::to_value(input_summary(&c)).expect("serializable");
        }
        print_json(&v);
    } else {
        if clean {
            println!("{report}");
            let s = input_summary(&load(input)?);
            println!(
                "dim {}, {} polyhedra, {} pairings, {} vertex classes, chi {}",
                s.dim, s.polyhedra, s.pairings, s.vertex_classes, s.euler_characteristic
            );
        } else {
            print!("{report}");
        }
    }
    Ok(if clean { OK } else { INPUT_ERROR })
}

fn diagonals(input: &Input) -> Result<u8, Failure> {
    let c = load(input)?;
    let set = enumerate_diagonals(&c);
    if input.json {
        let list: Vec<Value> = set
            .diagonals
            .iter()
            .map(|d| {
                json!({
                    "polyhedron": d.polyhedron,
                    "v": d.v,
                    "w": d.w,
                    "returning": d.returning,
                    "witness": d.witness.as_ref().map(|w| w.to_string()),
                })
            })
            .collect();
        print_json(&json!({
            "format": REPORT_FORMAT,
            "kind": "diagonals",
            "fingerprint": set.complex_fingerprint,
            "total": set.len(),
            "returning": set.returning_count(),
            "diagonals": list,
        }));
    } else {
        print!("{set}");
    }
    Ok(OK)
}

fn rep_json(rep: &virtri::covers::PermutationRep) -> Value {
    json!({
        "degree": rep.degree(),
        "transitive": rep.is_transitive(),
        "regular": rep.is_regular(),
        "generators": rep.cycle_strings(),
    })
}

fn covers_enumerate(input: &Input, degree: usize, limit: Option<usize>) -> Result<u8, Failure> {
    if degree == 0 {
        return Err(Failure::input("--degree must be positive"));
    }
    let c = load(input)?;
    let pres = extract_presentation(&c).map_err(Failure::input)?;
    let reps = enumerate_reps(&pres, degree, limit);
    if input.json {
        print_json(&json!({
            "format": REPORT_FORMAT,
            "kind": "reps",
            "presentation": pres.to_string(),
            "degree": degree,
            "reps": reps.iter().map(rep_json).collect::<Vec<_>>(),
        }));
    } else {
        println!("{pres}");
        println!("{} reps of degree {degree}", reps.len());
        for r in &reps {
            println!("  {}", r.cycle_strings().join("  "));
        }
    }
    Ok(OK)
}

fn covers_search(input: &Input, args: &SearchArgs) -> Result<u8, Failure> {
    let c = load(input)?;
    let config = search_config(args)?;
    match search_cover_killing_diagonals(&c, &config)? {
        SearchOutcome::Found(f) => {
            // independent re-check on a freshly built cover
            let cover = build_cover(&c, &f.rep)?;
            let after = diagonals_after_cover(&enumerate_diagonals(&c), &cover)
                .map_err(|e| Failure(VERIFY_FAILED, e.to_string()))?;
            if after.returning_count() != 0 {
                return Err(Failure(VERIFY_FAILED, "found cover has returning diagonals".into()));
            }
            if input.json {
                print_json(&json!({
                    "format": REPORT_FORMAT,
                    "kind": "cover-search",
                    "status": "found",
                    "cover": rep_json(&f.rep),
                    "sources": f.sources.iter().map(rep_json).collect::<Vec<_>>(),
                    "stats": f.stats,
                    "returning_diagonals": after.returning_count(),
                }));
            } else {
                println!("found regular cover of degree {}", f.rep.degree());
                for (g, p) in f.rep.cycle_strings().iter().enumerate() {
                    println!("  g{g} -> {p}");
                }
                println!(
                    "degrees tried {:?}, {} reps tested, {} over cap",
                    f.stats.degrees_tried, f.stats.reps_tested, f.stats.reps_over_cap
                );
            }
            Ok(OK)
        }
        SearchOutcome::Exhausted(e) => {
            if input.json {
                print_json(&json!({
                    "format": REPORT_FORMAT,
                    "kind": "cover-search",
                    "status": "exhausted",
                    "reason": e.reason,
                    "stats": e.stats,
                    "checkpoint": e.checkpoint.token(),
                }));
            } else {
                println!(
                    "search exhausted ({:?}) after degrees {:?}, {} reps tested",
                    e.reason, e.stats.degrees_tried, e.stats.reps_tested
                );
                println!("resume with: --resume {}", e.checkpoint.token());
            }
            Ok(EXHAUSTED)
        }
    }
}

fn pull(input: &Input, order: &str, output: Option<&Path>) -> Result<u8, Failure> {
    let c = load(input)?;
    let spec = parse_order(order)?;
    let ordering = order_vertices(&c, &spec)?;
    let t = subdivide_complex(&c, &ordering)?;
    let max_ideal = c.polyhedra().iter().map(|p| p.ideal_count()).max().unwrap_or(0);
    let stats = triangulation_stats(&t, &c, &spec, max_ideal);
    let file = t.to_file(&c, None);
    if let Some(path) = output {
        write(path, &file.to_json())?;
    }
    if input.json {
        print_json(&json!({
            "format": REPORT_FORMAT,
            "kind": "pull",
            "triangulation": stats,
            "certificate": t.certificate,
        }));
    } else {
        println!(
            "{} simplices, ideal-vertex histogram {:?}, certificate {}",
            stats.simplices,
            stats.ideal_histogram,
            if t.certificate.passed { "passed" } else { "FAILED" }
        );
        if output.is_none() {
            print!("{}", file.to_json());
        }
    }
    Ok(if t.certificate.passed { OK } else { VERIFY_FAILED })
}

fn run_virtualize(
    input: &Input,
    args: &SearchArgs,
    order: &str,
    output: Option<PathBuf>,
    report: Option<PathBuf>,
    timings: bool,
) -> Result<u8, Failure> {
    if input.free_boundary {
        return Err(Failure::input("virtualize needs a closed complex"));
    }
    let c = load(input)?;
    let search = search_config(args)?;
    let config = PipelineConfig {
        max_degree: search.max_degree,
        cap: search.cap,
        mode: search.mode,
        order: parse_order(order)?,
        rep_budget: search.rep_budget,
        resume: search.resume,
        outputs: OutputPaths {
            report,
            triangulation: output,
        },
    };
    let run = virtualize(&c, &config)?;
    let mut r = run.report.clone();
    if !timings {
        r.timings = None;
    }
    if let Some(path) = &config.outputs.report {
        write(path, &r.to_json())?;
    }
    if let (Some(path), Some(v)) = (&config.outputs.triangulation, &run.result) {
        write(path, &v.to_file().to_json())?;
    }
    if input.json {
        print!("{}", r.to_json());
    } else {
        print!("{r}");
    }
    Ok(match r.status {
        RunStatus::Ok => OK,
        RunStatus::Exhausted => EXHAUSTED,
    })
}

fn verify(triangulation: &Path, against: &Path, free_boundary: bool, json: bool) -> Result<u8, Failure> {
    let base = load_complex(&read(against)?, mode(free_boundary))
        .map_err(|e| Failure::input(format!("{}: {e}", against.display())))?;
    let file = ComplexFile::parse(&read(triangulation)?)
        .map_err(|e| Failure::input(format!("{}: {e}", triangulation.display())))?;
    let cert = match verify_file(&file, &base) {
        Ok(cert) => cert,
        // a triangulation that cannot be matched to its source fails verification
        Err(VerifyError::Pulling(PullingError::Malformed(m))) => return Err(Failure(VERIFY_FAILED, m)),
        Err(VerifyError::Pulling(e)) => return Err(e.into()),
        Err(VerifyError::Cover(e)) => return Err(Failure(VERIFY_FAILED, e.to_string())),
    };
    if json {
        print_json(&json!({
            "format": REPORT_FORMAT,
            "kind": "verification",
            "certificate": cert,
        }));
    } else {
        println!("certificate {}", if cert.passed { "passed" } else { "FAILED" });
        for f in &cert.failures {
            println!("  {f}");
        }
    }
    Ok(if cert.passed { OK } else { VERIFY_FAILED })
}

fn dispatch(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Validate(input) => validate(&input),
        Command::Diagonals(input) => diagonals(&input),
        Command::Covers(CoversCommand::Enumerate { input, degree, limit }) => {
            covers_enumerate(&input, degree, limit)
        }
        Command::Covers(CoversCommand::Search { input, search }) => covers_search(&input, &search),
        Command::Pull { input, order, output } => pull(&input, &order, output.as_deref()),
        Command::Virtualize {
            input,
            search,
            order,
            output,
            report,
            timings,
        } => run_virtualize(&input, &search, &order, output, report, timings),
        Command::Verify {
            triangulation,
            against,
            free_boundary,
            json,
        } => verify(&triangulation, &against, free_boundary, json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT_ERROR } else { OK });
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
