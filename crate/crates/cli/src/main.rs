//! `mskit`: command-line front end.
//!
//! Exit codes: 0 ok, 1 I/O or usage, 2 invalid input file, 3 missing colour
//! window, 4 unsupported surface, 5 operation precondition failed, 6 type A
//! algorithm error, 7 verification failed.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mskit_core::charts::ChartError;
use mskit_core::harness::{self, RunReport};
use mskit_core::io::{self, FormatError};
use mskit_core::qp::{self, QpError, QuiverWithPotential};
use mskit_core::quiver::{self, QuiverError};
use mskit_core::surface::{SurfaceComplex, SurfaceError};
use mskit_core::typea::{self, TypeAError};
use mskit_core::ColouredQuiver;
use serde_json::json;

#[derive(Parser)]
#[command(name = "mskit", version, about = "Arcs, coloured quivers and QPs on marked surfaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify a surface file.
    Validate { path: PathBuf },
    /// Coloured quiver of the partial triangulation.
    Quiver {
        path: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Option<(i64, i64)>,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    /// Replace an arc of the partial triangulation by its twist.
    Mutate {
        path: PathBuf,
        #[arg(long)]
        vertex: u32,
        #[command(flatten)]
        out: Out,
    },
    /// Cut along arcs of the partial triangulation.
    Cut {
        path: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        arcs: Vec<u32>,
        #[command(flatten)]
        out: Out,
    },
    /// Flip an interior edge.
    Flip {
        path: PathBuf,
        #[arg(long)]
        edge: u32,
        #[command(flatten)]
        out: Out,
    },
    #[command(subcommand)]
    Qp(QpCmd),
    #[command(subcommand)]
    Typea(TypeaCmd),
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Args)]
struct Out {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum QpCmd {
    /// QP of a full triangulation.
    Build {
        path: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[command(flatten)]
        out: Out,
    },
    FzMutate {
        path: PathBuf,
        #[arg(long)]
        vertex: u32,
        #[command(flatten)]
        out: Out,
    },
    Delete {
        path: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        vertex: Vec<u32>,
        #[command(flatten)]
        out: Out,
    },
    Gentle { path: PathBuf },
}

#[derive(Subcommand)]
enum TypeaCmd {
    Mutate {
        path: PathBuf,
        #[arg(long)]
        vertex: u32,
        #[command(flatten)]
        out: Out,
    },
    /// Periodicity of a vertex read off the quiver.
    D {
        path: PathBuf,
        #[arg(long)]
        vertex: u32,
    },
    /// Algorithm against geometry on every partial triangulation of the 4..=N-gons.
    CrossCheck { n: usize },
}

#[derive(Args)]
struct Batch {
    #[arg(long, env = "MSKIT_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    count: u64,
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Mutation rules on one surface (with --surface) or a random batch.
    Theorem71 {
        #[arg(long, requires = "vertex")]
        surface: Option<PathBuf>,
        #[arg(long)]
        vertex: Option<u32>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
        window: Option<(i64, i64)>,
        #[command(flatten)]
        batch: Batch,
    },
    CutSubquiver {
        #[command(flatten)]
        batch: Batch,
    },
    FlipFz {
        #[command(flatten)]
        batch: Batch,
    },
    Order {
        #[command(flatten)]
        batch: Batch,
    },
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
    if lo > hi {
        return Err(format!("empty window {lo}..{hi}"));
    }
    Ok((lo, hi))
}

#[derive(Debug)]
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl ToString) -> Self {
        Failure {
            code,
            msg: msg.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(1, e)
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::new(2, e)
    }
}

impl From<SurfaceError> for Failure {
    fn from(e: SurfaceError) -> Self {
        let code = match e {
            SurfaceError::UnknownEdge(_)
            | SurfaceError::MissingCopy { .. }
            | SurfaceError::NotFlippable(_) => 5,
            _ => 2,
        };
        Failure::new(code, e)
    }
}

impl From<ChartError> for Failure {
    fn from(e: ChartError) -> Self {
        match e {
            ChartError::Unsupported { .. } => Failure::new(4, e),
            e => Failure::new(5, e),
        }
    }
}

impl From<QuiverError> for Failure {
    fn from(e: QuiverError) -> Self {
        match e {
            QuiverError::Surface(e) => e.into(),
            QuiverError::Chart(e) => e.into(),
            QuiverError::MissingWindow { .. } => Failure::new(3, e),
            QuiverError::UnsupportedSurface { .. } => Failure::new(4, e),
            e => Failure::new(5, e),
        }
    }
}

impl From<QpError> for Failure {
    fn from(e: QpError) -> Self {
        match e {
            QpError::Malformed(_) => Failure::new(2, e),
            e => Failure::new(5, e),
        }
    }
}

impl From<TypeAError> for Failure {
    fn from(e: TypeAError) -> Self {
        Failure::new(6, e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))
}

fn load_surface(path: &Path) -> Result<SurfaceComplex, Failure> {
    let x = io::surface_from_json(&read(path)?)?;
    x.validate()?;
    Ok(x)
}

fn load_quiver(path: &Path) -> Result<ColouredQuiver, Failure> {
    Ok(io::quiver_from_json(&read(path)?)?)
}

fn load_qp(path: &Path) -> Result<QuiverWithPotential, Failure> {
    Ok(io::qp_from_json(&read(path)?)?)
}

fn emit(out: &Out, text: &str) -> Result<(), Failure> {
    match &out.out {
        Some(p) => fs::write(p, format!("{text}\n"))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn report(r: &RunReport) -> Result<(), Failure> {
    println!("{}", serde_json::to_string_pretty(r).expect("serializable"));
    if r.passed() {
        Ok(())
    } else {
        Err(Failure::new(7, format!("{}: {} failures", r.name, r.failures())))
    }
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Validate { path } => {
            println!("{}", load_surface(&path)?.validate()?);
        }
        Cmd::Quiver {
            path,
            window,
            dot,
            out,
        } => {
            let q = quiver::coloured_quiver(&load_surface(&path)?, window)?;
            if let Some(d) = dot {
                fs::write(d, io::quiver_to_dot(&q))?;
            }
            emit(&out, &io::quiver_to_json(&q))?;
        }
        Cmd::Mutate { path, vertex, out } => {
            let y = quiver::mutate(&load_surface(&path)?, vertex)?;
            emit(&out, &io::surface_to_json(&y))?;
        }
        Cmd::Cut { path, arcs, out } => {
            let arcs: BTreeSet<u32> = arcs.into_iter().collect();
            let y = load_surface(&path)?.cut(&arcs)?;
            emit(&out, &io::surface_to_json(&y))?;
        }
        Cmd::Flip { path, edge, out } => {
            let y = load_surface(&path)?.flip(edge)?;
            emit(&out, &io::surface_to_json(&y))?;
        }
        Cmd::Qp(c) => run_qp(c)?,
        Cmd::Typea(c) => run_typea(c)?,
        Cmd::Check(c) => run_check(c)?,
    }
    Ok(())
}

fn run_qp(cmd: QpCmd) -> Result<(), Failure> {
    match cmd {
        QpCmd::Build { path, dot, out } => {
            let qp = qp::qp_from_triangulation(&load_surface(&path)?)?;
            if let Some(d) = dot {
                fs::write(d, io::qp_to_dot(&qp))?;
            }
            emit(&out, &io::qp_to_json(&qp))?;
        }
        QpCmd::FzMutate { path, vertex, out } => {
            let q = qp::fz_mutate(&load_qp(&path)?.quiver, vertex)?;
            let qp = QuiverWithPotential::new(q, Default::default())?;
            emit(&out, &io::qp_to_json(&qp))?;
        }
        QpCmd::Delete { path, vertex, out } => {
            let qp = load_qp(&path)?;
            let removed: BTreeSet<u32> = vertex.into_iter().collect();
            if let Some(v) = removed.iter().find(|v| !qp.quiver.vertices().contains(v)) {
                return Err(QpError::UnknownVertex(*v).into());
            }
            emit(&out, &io::qp_to_json(&qp::qp_delete_vertex(&qp, &removed)))?;
        }
        QpCmd::Gentle { path } => {
            let qp = load_qp(&path)?;
            let v = qp::gentle_check(&qp.quiver, &qp.relations())?;
            println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
        }
    }
    Ok(())
}

fn run_typea(cmd: TypeaCmd) -> Result<(), Failure> {
    match cmd {
        TypeaCmd::Mutate { path, vertex, out } => {
            let q = typea::typea_mutate(&load_quiver(&path)?, vertex)?;
            emit(&out, &io::quiver_to_json(&q))?;
        }
        TypeaCmd::D { path, vertex } => {
            println!("{}", typea::d_from_quiver(&load_quiver(&path)?, vertex)?);
        }
        TypeaCmd::CrossCheck { n } => {
            if n < 4 {
                return Err(Failure::new(1, "cross-check needs N >= 4"));
            }
            report(&typea::cross_check(4..=n))?;
        }
    }
    Ok(())
}

fn run_check(cmd: CheckCmd) -> Result<(), Failure> {
    match cmd {
        CheckCmd::Theorem71 {
            surface: Some(path),
            vertex,
            window,
            ..
        } => {
            let x = load_surface(&path)?;
            let k = vertex.expect("required by clap");
            let q = quiver::coloured_quiver(&x, window)?;
            let qt = quiver::coloured_quiver(&quiver::mutate(&x, k)?, window)?;
            let rep = quiver::check_theorem71(&q, &qt, k)?;
            let out = json!({ "passed": rep.passed(), "report": rep });
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            if !rep.passed() {
                return Err(Failure::new(7, "mutation rules violated"));
            }
        }
        CheckCmd::Theorem71 { batch, .. } => {
            report(&harness::check_theorem71_batch(batch.seed, batch.count))?
        }
        CheckCmd::CutSubquiver { batch } => {
            report(&harness::check_cut_subquiver_batch(batch.seed, batch.count))?
        }
        CheckCmd::FlipFz { batch } => {
            report(&harness::check_flip_fz_batch(batch.seed, batch.count))?
        }
        CheckCmd::Order { batch } => report(&harness::check_order_batch(batch.seed, batch.count))?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("mskit: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
