//! Command-line front end.
//!
//! JSON results go to stdout; logs and errors go to stderr. Exit codes:
//! 0 = completed (including a certificate), 1 = a verified property failed
//! (which should never happen), 2 = usage or input format error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::chain::{
    boundary_gates, lemma_witness, trace_maximal_chain, witness_meets_arcs, ChainDoc, ChainError,
};
use crate::coloring::{sample_coloring, Coloring, ColoringDoc};
use crate::experiments::{
    builtin_candidate, certify_mean_candidate, certify_retraction_candidate, BuiltinCandidate,
};
use crate::grid::{CombinatorialSquare, Face, FaceKind, GridPoint, Rectangle};
use crate::limits::{upper_limit_approx, PointSet, PointSetDoc};
use crate::render::{render_svg, RenderOptions};
use crate::torus::{all_torus_cycles, TorusSurface};
use crate::util::sig12;

#[derive(Parser)]
#[command(
    name = "gatewalk",
    version,
    about = "Gate-to-gate chain tracing on colored triangulated grids, with falsification certificates for circle means and disk retractions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice facts for one resolution
    Grid {
        #[command(subcommand)]
        command: GridCommand,
    },
    /// Trace maximal chains through a coloring
    Chain {
        #[command(subcommand)]
        command: ChainCommand,
    },
    /// Two-arc witness chains, single or exhaustive
    Lemma {
        #[command(subcommand)]
        command: LemmaCommand,
    },
    /// Closed cycles on the torus identification
    Torus {
        #[command(subcommand)]
        command: TorusCommand,
    },
    /// Falsification certificates for circle mean candidates
    Mean {
        #[command(subcommand)]
        command: MeanCommand,
    },
    /// Falsification certificates for disk retraction candidates
    Borsuk {
        #[command(subcommand)]
        command: BorsukCommand,
    },
    /// Upper-limit approximation of point-set sequences
    Ls {
        #[command(subcommand)]
        command: LsCommand,
    },
    /// Render a coloring and/or chain to SVG
    Render(RenderArgs),
}

#[derive(Subcommand)]
enum GridCommand {
    /// Vertex, simplex, and face counts
    Info {
        #[arg(long)]
        k: u32,
    },
}

#[derive(Subcommand)]
enum ChainCommand {
    /// Trace the maximal chain from a boundary gate
    Trace {
        #[arg(long)]
        k: u32,
        /// Coloring JSON file
        #[arg(long)]
        coloring: PathBuf,
        /// Boundary gate address SIDE:INDEX, counterclockwise per side
        /// (sides: bottom, right, top, left)
        #[arg(long)]
        start: String,
    },
}

#[derive(Subcommand)]
enum LemmaCommand {
    /// Witness chain for two opposite corners of different colors
    Witness {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        coloring: PathBuf,
        /// Corner as I,J
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Verify the witness over every coloring with f(a) = -f(b)
    Exhaustive {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Worker threads; results are aggregated order-independently
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Subcommand)]
enum TorusCommand {
    /// Sample a named candidate and trace every torus cycle
    Cycles {
        #[arg(long)]
        k: u32,
        /// Candidate NAME[:P1,P2,...]
        #[arg(long)]
        map: String,
    },
}

#[derive(Subcommand)]
enum MeanCommand {
    Certify {
        #[arg(long)]
        map: String,
        /// Comma-separated resolutions, e.g. 16,64,256
        #[arg(long = "k-list")]
        k_list: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum BorsukCommand {
    Certify {
        #[arg(long)]
        map: String,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum LsCommand {
    Approx {
        /// Point-set JSON files, in sequence order
        #[arg(long, num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        epsilon: f64,
        #[arg(long = "k-ref", default_value_t = 64)]
        k_ref: u32,
        #[arg(long = "tail-fraction", default_value_t = 0.5)]
        tail_fraction: f64,
    },
}

#[derive(Args)]
struct RenderArgs {
    /// Coloring or chain JSON (detected by shape)
    #[arg(long)]
    input: PathBuf,
    /// Optional chain JSON overlaid on a coloring input
    #[arg(long)]
    chain: Option<PathBuf>,
    /// Output SVG path
    #[arg(long)]
    out: PathBuf,
    #[arg(long = "cell-px", default_value_t = 40)]
    cell_px: u32,
}

enum CliFailure {
    Usage(String),
    Verification(String),
}

fn usage(msg: impl std::fmt::Display) -> CliFailure {
    CliFailure::Usage(msg.to_string())
}

/// Run with explicit argv; returns the process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(CliFailure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliFailure::Verification(msg)) => {
            eprintln!("property verification failed: {msg}");
            1
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliFailure> {
    match cli.command {
        Command::Grid { command: GridCommand::Info { k } } => grid_info(k),
        Command::Chain { command: ChainCommand::Trace { k, coloring, start } } => {
            chain_trace(k, &coloring, &start)
        }
        Command::Lemma { command } => match command {
            LemmaCommand::Witness { k, coloring, a, b } => lemma_witness_cmd(k, &coloring, &a, &b),
            LemmaCommand::Exhaustive { k, a, b, jobs } => lemma_exhaustive(k, &a, &b, jobs),
        },
        Command::Torus { command: TorusCommand::Cycles { k, map } } => torus_cycles(k, &map),
        Command::Mean { command: MeanCommand::Certify { map, k_list, tol } } => {
            mean_certify(&map, &k_list, tol)
        }
        Command::Borsuk { command: BorsukCommand::Certify { map, k, tol } } => {
            borsuk_certify(&map, k, tol)
        }
        Command::Ls { command: LsCommand::Approx { inputs, epsilon, k_ref, tail_fraction } } => {
            ls_approx(&inputs, epsilon, k_ref, tail_fraction)
        }
        Command::Render(args) => render(&args),
    }
}

fn parse_point(text: &str) -> Result<GridPoint, CliFailure> {
    let parts: Vec<&str> = text.split(',').collect();
    let [i, j] = parts.as_slice() else {
        return Err(usage(format!("expected a point as I,J, got {text:?}")));
    };
    let parse = |s: &str| {
        s.trim()
            .parse::<i32>()
            .map_err(|_| usage(format!("bad coordinate {s:?} in point {text:?}")))
    };
    Ok(GridPoint::new(parse(i)?, parse(j)?))
}

fn parse_k_list(text: &str) -> Result<Vec<u32>, CliFailure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| usage(format!("bad resolution {s:?} in k-list {text:?}")))
        })
        .collect()
}

fn parse_map(text: &str) -> Result<BuiltinCandidate, CliFailure> {
    let (name, params) = match text.split_once(':') {
        Some((name, rest)) => {
            let params = rest
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| usage(format!("bad parameter {s:?} in map {text:?}")))
                })
                .collect::<Result<Vec<f64>, CliFailure>>()?;
            (name, params)
        }
        None => (text, Vec::new()),
    };
    builtin_candidate(name, &params).map_err(usage)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliFailure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("bad JSON in {}: {e}", path.display())))
}

fn read_coloring(path: &Path, k: u32) -> Result<Coloring, CliFailure> {
    let doc: ColoringDoc = read_json(path)?;
    if doc.k != k {
        return Err(usage(format!(
            "coloring file {} has k={}, expected k={k}",
            path.display(),
            doc.k
        )));
    }
    Coloring::try_from(doc).map_err(usage)
}

fn grid_info(k: u32) -> Result<(), CliFailure> {
    let sq = CombinatorialSquare::new(k).map_err(usage)?;
    let n = k as u64;
    let doc = json!({
        "k": k,
        "vertices": sq.vertex_count(),
        "simplexes": sq.simplex_count(),
        "faces": {
            "horizontal": n * (n + 1),
            "vertical": n * (n + 1),
            "diagonal": n * n,
        },
    });
    println!("{doc}");
    Ok(())
}

/// Gates of the full square grouped per side, each in counterclockwise
/// walk order (bottom, right, top, left).
fn gates_by_side(c: &Coloring) -> [Vec<Face>; 4] {
    let k = c.k() as i32;
    let sq = CombinatorialSquare::new(c.k()).expect("validated resolution");
    let mut sides: [Vec<Face>; 4] = Default::default();
    for g in boundary_gates(c, &sq.full_rectangle()) {
        let side = match g.kind() {
            FaceKind::Horizontal if g.a().j == 0 => 0,
            FaceKind::Vertical if g.a().i == k => 1,
            FaceKind::Horizontal => 2,
            FaceKind::Vertical => 3,
            FaceKind::Diagonal => unreachable!("boundary gates are never diagonal"),
        };
        sides[side].push(g);
    }
    sides
}

fn chain_trace(k: u32, coloring: &Path, start: &str) -> Result<(), CliFailure> {
    let c = read_coloring(coloring, k)?;
    let (side_name, index) = start
        .split_once(':')
        .ok_or_else(|| usage(format!("expected --start SIDE:INDEX, got {start:?}")))?;
    let side = match side_name {
        "bottom" => 0,
        "right" => 1,
        "top" => 2,
        "left" => 3,
        other => return Err(usage(format!("unknown side {other:?}"))),
    };
    let index: usize = index
        .parse()
        .map_err(|_| usage(format!("bad gate index {index:?}")))?;
    let sides = gates_by_side(&c);
    let gate = *sides[side].get(index).ok_or_else(|| {
        usage(format!(
            "no such gate {side_name}:{index}; side {side_name} has {} gate(s)",
            sides[side].len()
        ))
    })?;
    let sq = CombinatorialSquare::new(k).map_err(usage)?;
    let chain = trace_maximal_chain(&sq, gate, &c).map_err(|e| match e {
        ChainError::RevisitedSimplex(_) => CliFailure::Verification(e.to_string()),
        other => usage(other),
    })?;
    println!("{}", serde_json::to_string(&ChainDoc::from(&chain)).expect("chains serialize"));
    Ok(())
}

fn lemma_witness_cmd(k: u32, coloring: &Path, a: &str, b: &str) -> Result<(), CliFailure> {
    let c = read_coloring(coloring, k)?;
    let a = parse_point(a)?;
    let b = parse_point(b)?;
    let sq = CombinatorialSquare::new(k).map_err(usage)?;
    if !sq.contains_point(a) || !sq.contains_point(b) {
        return Err(usage(format!("corners must lie in [0, {k}]²")));
    }
    let r = Rectangle::from_corners(a, b).map_err(usage)?;
    let chain = lemma_witness(&c, &r, a, b).map_err(usage)?;
    if !witness_meets_arcs(&chain, &r, a, b).map_err(usage)? {
        return Err(CliFailure::Verification(format!(
            "witness chain does not meet both arcs for a={a:?}, b={b:?}"
        )));
    }
    println!("{}", serde_json::to_string(&ChainDoc::from(&chain)).expect("chains serialize"));
    Ok(())
}

fn lemma_exhaustive(k: u32, a: &str, b: &str, jobs: usize) -> Result<(), CliFailure> {
    let a = parse_point(a)?;
    let b = parse_point(b)?;
    let sq = CombinatorialSquare::new(k).map_err(usage)?;
    if !sq.contains_point(a) || !sq.contains_point(b) {
        return Err(usage(format!("corners must lie in [0, {k}]²")));
    }
    let r = Rectangle::from_corners(a, b).map_err(usage)?;
    let n = (k as u64 + 1) * (k as u64 + 1);
    if n > 62 {
        return Err(usage(format!(
            "exhaustive enumeration needs 2^{n} colorings; only k with (k+1)² <= 62 is supported"
        )));
    }
    let total = 1u64 << n;
    let bit_a = (a.j as u64) * (k as u64 + 1) + a.i as u64;
    let bit_b = (b.j as u64) * (k as u64 + 1) + b.i as u64;
    let jobs = jobs.clamp(1, 256) as u64;

    // Each worker owns a contiguous mask range; counts add up regardless of
    // finishing order.
    let chunk = total.div_ceil(jobs);
    let run_range = |lo: u64, hi: u64| -> (u64, u64, Option<u64>) {
        let mut attempted = 0;
        let mut succeeded = 0;
        let mut first_failure = None;
        for bits in lo..hi {
            if (bits >> bit_a) & 1 == (bits >> bit_b) & 1 {
                continue;
            }
            attempted += 1;
            let c = Coloring::from_bits(k, bits).expect("bit width checked");
            let ok = lemma_witness(&c, &r, a, b)
                .ok()
                .is_some_and(|chain| witness_meets_arcs(&chain, &r, a, b).unwrap_or(false));
            if ok {
                succeeded += 1;
            } else if first_failure.is_none() {
                first_failure = Some(bits);
            }
        }
        (attempted, succeeded, first_failure)
    };

    let (attempted, succeeded, failure) = if jobs == 1 {
        run_range(0, total)
    } else {
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for w in 0..jobs {
                let lo = w * chunk;
                let hi = ((w + 1) * chunk).min(total);
                if lo >= hi {
                    continue;
                }
                handles.push(scope.spawn(move || run_range(lo, hi)));
            }
            let mut agg: (u64, u64, Option<u64>) = (0, 0, None);
            for h in handles {
                let (a0, s0, f0) = h.join().expect("worker does not panic");
                agg.0 += a0;
                agg.1 += s0;
                agg.2 = match (agg.2, f0) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
            }
            agg
        })
    };

    println!("{succeeded}/{attempted} witnesses found");
    if succeeded != attempted {
        return Err(CliFailure::Verification(format!(
            "first failing coloring bitmask: {}",
            failure.expect("a failure exists when counts differ")
        )));
    }
    Ok(())
}

fn torus_cycles(k: u32, map: &str) -> Result<(), CliFailure> {
    let BuiltinCandidate::Circle(cand) = parse_map(map)? else {
        return Err(usage(format!("{map:?} is not a circle candidate")));
    };
    CombinatorialSquare::new(k).map_err(usage)?;
    let c = sample_coloring(k, |x, y| cand.eval(x, y)).map_err(usage)?;
    let t = TorusSurface::for_coloring(&c).map_err(usage)?;
    let cycles = all_torus_cycles(&t, &c).map_err(usage)?;
    let doc = json!({
        "k": k,
        "candidate": cand.name(),
        "cycles": cycles.iter().map(|cy| cy.to_doc()).collect::<Vec<_>>(),
    });
    println!("{doc}");
    Ok(())
}

fn mean_certify(map: &str, k_list: &str, tol: f64) -> Result<(), CliFailure> {
    let BuiltinCandidate::Circle(cand) = parse_map(map)? else {
        return Err(usage(format!("{map:?} is not a circle candidate")));
    };
    let k_list = parse_k_list(k_list)?;
    let report = certify_mean_candidate(&cand, &k_list, tol).map_err(usage)?;
    println!("{}", serde_json::to_string(&report.to_doc()).expect("reports serialize"));
    Ok(())
}

fn borsuk_certify(map: &str, k: u32, tol: f64) -> Result<(), CliFailure> {
    let BuiltinCandidate::Disk(cand) = parse_map(map)? else {
        return Err(usage(format!("{map:?} is not a disk candidate")));
    };
    let report = certify_retraction_candidate(&cand, k, tol).map_err(usage)?;
    println!("{}", serde_json::to_string(&report.to_doc()).expect("reports serialize"));
    Ok(())
}

fn ls_approx(
    inputs: &[PathBuf],
    epsilon: f64,
    k_ref: u32,
    tail_fraction: f64,
) -> Result<(), CliFailure> {
    let mut sets = Vec::new();
    for path in inputs {
        let doc: PointSetDoc = read_json(path)?;
        sets.push(
            PointSet::try_from(doc)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?,
        );
    }
    let ls = upper_limit_approx(&sets, epsilon, k_ref, tail_fraction).map_err(usage)?;
    let doc = json!({
        "epsilon": sig12(ls.epsilon),
        "k_ref": ls.k_ref,
        "tail_fraction": sig12(ls.tail_fraction),
        "points": ls
            .points
            .iter()
            .map(|&(x, y)| [sig12(x), sig12(y)])
            .collect::<Vec<_>>(),
    });
    println!("{doc}");
    Ok(())
}

fn render(args: &RenderArgs) -> Result<(), CliFailure> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| usage(format!("cannot read {}: {e}", args.input.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| usage(format!("bad JSON in {}: {e}", args.input.display())))?;

    let mut coloring: Option<Coloring> = None;
    let mut chain = None;
    if value.get("values").is_some() {
        let doc: ColoringDoc = serde_json::from_value(value)
            .map_err(|e| usage(format!("bad coloring in {}: {e}", args.input.display())))?;
        coloring = Some(Coloring::try_from(doc).map_err(usage)?);
    } else if value.get("simplexes").is_some() {
        let doc: ChainDoc = serde_json::from_value(value)
            .map_err(|e| usage(format!("bad chain in {}: {e}", args.input.display())))?;
        chain = Some(doc.to_chain().map_err(usage)?);
    } else {
        return Err(usage(format!(
            "{} is neither a coloring nor a chain document",
            args.input.display()
        )));
    }
    if let Some(path) = &args.chain {
        let doc: ChainDoc = read_json(path)?;
        chain = Some(doc.to_chain().map_err(usage)?);
    }

    let opts = RenderOptions { cell_px: args.cell_px, ..RenderOptions::default() };
    let svg = render_svg(coloring.as_ref(), chain.as_ref(), &opts).map_err(usage)?;
    std::fs::write(&args.out, svg)
        .map_err(|e| usage(format!("cannot write {}: {e}", args.out.display())))?;
    eprintln!("wrote {}", args.out.display());
    Ok(())
}
