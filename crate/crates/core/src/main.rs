use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use specbound::graph_bounds::{graph_bound_with_tol, GraphBoundError};
use specbound::report::{self, matrix_report, ReportError, Source};
use specbound::scan::{self, Family, ScanConfig, ScanError};
use specbound::{
    parse_edge_list, Direction, GraphMatrixKind, NonnegMatrix, SpectralError, DEFAULT_TOL,
};

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;
const EXIT_VIOLATION: u8 = 4;

/// Spectral radius bounds from average 2-row sums.
#[derive(Parser)]
#[command(name = "specbound", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound report for a matrix file.
    Matrix {
        file: PathBuf,
        #[command(flatten)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Closed-form bound for one of the five graph matrices.
    Graph {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = DirectionArg::Upper)]
        direction: DirectionArg,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Compare the worked 4x4 examples with their printed values.
    PaperExamples {
        #[arg(long)]
        json: bool,
    },
    /// Seeded random comparison of the bound families.
    Scan(ScanArgs),
}

#[derive(Args)]
#[group(multiple = false)]
struct Format {
    #[arg(long)]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    count: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
    #[arg(long)]
    density: f64,
    #[arg(long, value_enum, default_value_t = FamilyArg::Matrix)]
    family: FamilyArg,
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Write per-instance rows here instead of standard output.
    #[arg(long)]
    csv_out: Option<PathBuf>,
    /// Write the summary here instead of standard output.
    #[arg(long)]
    json_out: Option<PathBuf>,
    /// Directory for reproducer dumps.
    #[arg(long, default_value = ".")]
    dump_dir: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Adjacency,
    SignlessLaplacian,
    Distance,
    DistanceSignlessLaplacian,
    Reciprocal,
}

impl From<KindArg> for GraphMatrixKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Adjacency => GraphMatrixKind::Adjacency,
            KindArg::SignlessLaplacian => GraphMatrixKind::SignlessLaplacian,
            KindArg::Distance => GraphMatrixKind::Distance,
            KindArg::DistanceSignlessLaplacian => GraphMatrixKind::DistanceSignlessLaplacian,
            KindArg::Reciprocal => GraphMatrixKind::ReciprocalDistance,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Upper,
    Lower,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Matrix,
    Graph,
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("specbound: {msg}");
    ExitCode::from(code)
}

fn read(path: &Path) -> Result<String, ExitCode> {
    fs::read_to_string(path).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn spectral_code(e: &SpectralError) -> u8 {
    match e {
        SpectralError::NoConvergence { .. } => EXIT_NO_CONVERGENCE,
        SpectralError::BadTolerance(_) => EXIT_INPUT,
    }
}

fn cmd_matrix(file: &Path, format: &Format, tol: f64) -> ExitCode {
    let text = match read(file) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let a = match NonnegMatrix::parse(&text) {
        Ok(a) => a,
        Err(e) => return fail(EXIT_INPUT, format!("{}: {e}", file.display())),
    };
    let source = Source::Matrix {
        path: Some(file.display().to_string()),
    };
    match matrix_report(&a, source, tol) {
        Ok(r) if format.json => println!("{}", report::to_json(&r)),
        Ok(r) if format.csv => print!("{}", report::to_csv(&r)),
        Ok(r) => print!("{}", report::to_text(&r)),
        Err(ReportError::Spectral(e)) => return fail(spectral_code(&e), e),
        Err(e) => return fail(EXIT_INPUT, format!("{}: {e}", file.display())),
    }
    ExitCode::SUCCESS
}

fn cmd_graph(
    file: &Path,
    kind: GraphMatrixKind,
    direction: Direction,
    json: bool,
    tol: f64,
) -> ExitCode {
    let text = match read(file) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let g = match parse_edge_list(&text) {
        Ok(g) => g,
        Err(e) => return fail(EXIT_INPUT, format!("{}: {e}", file.display())),
    };
    match graph_bound_with_tol(&g, kind, direction, tol) {
        Ok(r) if json => println!("{}", report::to_json(&r)),
        Ok(r) => print!("{}", report::graph_report_text(&r)),
        Err(GraphBoundError::Spectral(e)) => return fail(spectral_code(&e), e),
        Err(e) => return fail(EXIT_INPUT, format!("{}: {e}", file.display())),
    }
    ExitCode::SUCCESS
}

fn cmd_paper_examples(json: bool) -> ExitCode {
    let rows = report::worked_examples();
    if json {
        println!("{}", report::to_json(&rows));
    } else {
        print!("{}", report::examples_text(&rows));
    }
    match rows.iter().find(|r| !r.pass) {
        Some(r) => fail(
            EXIT_MISMATCH,
            format!(
                "mismatch: {} printed {} computed {} (diff {:.3e} > {:e})",
                r.label, r.printed, r.computed, r.diff, r.tolerance
            ),
        ),
        None => ExitCode::SUCCESS,
    }
}

fn write_or_print(path: &Option<PathBuf>, text: &str) -> Result<(), ExitCode> {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_scan(args: &ScanArgs) -> ExitCode {
    let cfg = ScanConfig {
        count: args.count,
        seed: args.seed,
        n_min: args.n_min,
        n_max: args.n_max,
        density: args.density,
        family: match args.family {
            FamilyArg::Matrix => Family::Matrix,
            FamilyArg::Graph => Family::Graph,
        },
        kind: args.kind.map(Into::into),
        tol: args.tol,
    };
    let out = match scan::run_scan(&cfg) {
        Ok(out) => out,
        Err(ScanError::Violation(dump)) => {
            let name = format!("specbound-violation-seed{}-{}.txt", args.seed, dump.id);
            let path = args.dump_dir.join(name);
            let body = format!(
                "# instance {}\n# {}\n{}",
                dump.id, dump.message, dump.instance
            );
            if let Err(e) = fs::write(&path, body) {
                eprintln!("specbound: could not write dump {}: {e}", path.display());
            }
            return fail(
                EXIT_VIOLATION,
                format!(
                    "instance {}: {}; dump written to {}",
                    dump.id,
                    dump.message,
                    path.display()
                ),
            );
        }
        Err(ScanError::Evaluation { id, message }) if message.contains("power iteration") => {
            return fail(EXIT_NO_CONVERGENCE, format!("instance {id}: {message}"))
        }
        Err(e) => return fail(EXIT_INPUT, e),
    };
    let csv = scan::rows_to_csv(&out.rows);
    let json = report::to_json(&out.summary) + "\n";
    if let Err(code) = write_or_print(&args.csv_out, &csv) {
        return code;
    }
    if args.csv_out.is_none() && args.json_out.is_none() {
        println!();
    }
    if let Err(code) = write_or_print(&args.json_out, &json) {
        return code;
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Matrix { file, format, tol } => cmd_matrix(file, format, *tol),
        Command::Graph {
            file,
            kind,
            direction,
            json,
            tol,
        } => {
            let direction = match direction {
                DirectionArg::Upper => Direction::Upper,
                DirectionArg::Lower => Direction::Lower,
            };
            cmd_graph(file, (*kind).into(), direction, *json, *tol)
        }
        Command::PaperExamples { json } => cmd_paper_examples(*json),
        Command::Scan(args) => cmd_scan(args),
    }
}
