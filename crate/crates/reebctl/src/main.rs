use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use reeb_core::complex::reeb_of_complex;
use reeb_core::cosheaf::{cosheaf_of, d_i_bounds, decide_interleaving, Decision, SearchBudget, DEFAULT_NODE_BUDGET};
use reeb_core::distortion::{fdd_upper_bound, lower_bound_from_parts};
use reeb_core::format::{parse_complex, parse_reeb, write_reeb};
use reeb_core::graph::{canonicalize, validate};
use reeb_core::harness::{generate_random_reeb, random_pairs, sandwich_report, write_csv, write_json, RowStatus, SandwichConfig};
use reeb_core::metric::{path_height, PathHeight};
use reeb_core::persistence::{bottleneck, extended_diagrams, DiagramClass, PersistenceDiagram};
use reeb_core::smoothing::smooth;
use reeb_core::{BoundInterval, GraphPoint, ReebGraph, Value};

#[derive(Parser)]
#[command(name = "reebctl", version, about = "Reeb graphs, smoothings and the distances between them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a .reeb or .plc file.
    Validate { file: PathBuf },
    /// Reeb graph of a PL complex.
    Reeb {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Add missing triangle edges instead of rejecting the file.
        #[arg(long)]
        lenient: bool,
    },
    /// ε-smoothing of a graph.
    Smooth {
        input: PathBuf,
        #[arg(long)]
        epsilon: Value,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Path-height distance between two points (`v<id>` or `e<id>:<s>`).
    Df {
        input: PathBuf,
        #[arg(long)]
        from: GraphPoint,
        #[arg(long)]
        to: GraphPoint,
    },
    /// Extended persistence diagrams as JSON.
    Diagram {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Bottleneck distance between two diagram files.
    Bottleneck {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = Class::Dim0)]
        class: Class,
    },
    /// Decide an ε-interleaving, or bracket the interleaving distance.
    Interleave(InterleaveArgs),
    /// Certified bounds on the functional distortion distance.
    Fdd {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        mesh: Value,
        #[arg(long, default_value_t = 200)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tolerance of the interleaving term of the lower bound.
        #[arg(long, default_value = "0.001")]
        tol: Value,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        search_budget: u64,
    },
    /// Random canonical graph.
    Gen {
        #[arg(long)]
        vertices: usize,
        #[arg(long, default_value_t = 0)]
        loops: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Distance sandwich report over random pairs.
    Sandwich(SandwichArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Class {
    Dim0,
    Ext1,
}

#[derive(Args)]
struct InterleaveArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long, conflicts_with = "tol", required_unless_present = "tol")]
    epsilon: Option<Value>,
    #[arg(long)]
    tol: Option<Value>,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Write the interleaving certificate here.
    #[arg(long)]
    certificate: Option<PathBuf>,
}

#[derive(Args)]
struct SandwichArgs {
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "0.001")]
    tol: Value,
    #[arg(long, default_value = "0.05")]
    mesh: Value,
    #[arg(long, default_value_t = 200)]
    budget: usize,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    search_budget: u64,
    #[arg(long, default_value_t = 8)]
    max_vertices: usize,
    #[arg(long, default_value_t = 2)]
    max_loops: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Certificate sidecar; defaults to the output path with a .json extension.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Leave out the timestamp comment line.
    #[arg(long)]
    no_timestamp: bool,
}

/// Exit statuses besides success and input errors.
enum Outcome {
    Done,
    Undecided,
    Falsified,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> Result<ReebGraph> {
    let g = parse_reeb(&read(path)?).with_context(|| format!("{}", path.display()))?;
    let report = validate(&g);
    if !report.is_ok() {
        let lines: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        bail!("{}: invalid graph\n{}", path.display(), lines.join("\n"));
    }
    Ok(canonicalize(&g))
}

fn load_diagram(path: &Path) -> Result<PersistenceDiagram> {
    serde_json::from_str(&read(path)?).with_context(|| format!("{}: not a diagram", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn pretty(value: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Validate { file } => {
            let text = read(&file)?;
            if file.extension().is_some_and(|e| e == "plc") {
                let k = parse_complex(&text, false).with_context(|| format!("{}", file.display()))?;
                println!(
                    "ok: {} vertices, {} edges, {} triangles",
                    k.vertex_count(),
                    k.edge_count(),
                    k.triangle_count()
                );
            } else {
                let g = parse_reeb(&text).with_context(|| format!("{}", file.display()))?;
                let report = validate(&g);
                if !report.is_ok() {
                    for v in &report.violations {
                        println!("{v}");
                    }
                    bail!("{}: {} violation(s)", file.display(), report.violations.len());
                }
                println!("ok: {} vertices, {} edges", g.vertex_count(), g.edge_count());
            }
        }
        Command::Reeb { input, output, lenient } => {
            let k = parse_complex(&read(&input)?, lenient).with_context(|| format!("{}", input.display()))?;
            emit(output.as_deref(), &write_reeb(&reeb_of_complex(&k)))?;
        }
        Command::Smooth { input, epsilon, output } => {
            let g = smooth(&load_graph(&input)?, epsilon)?;
            emit(output.as_deref(), &write_reeb(&g))?;
        }
        Command::Df { input, from, to } => {
            let g = parse_reeb(&read(&input)?).with_context(|| format!("{}", input.display()))?;
            match path_height(&g, &from, &to)? {
                PathHeight::Finite(h) => println!("{h}"),
                PathHeight::Disconnected => println!("disconnected"),
            }
        }
        Command::Diagram { input, output } => {
            let d = extended_diagrams(&load_graph(&input)?);
            emit(output.as_deref(), &pretty(&d.combined())?)?;
        }
        Command::Bottleneck { a, b, class } => {
            let class = match class {
                Class::Dim0 => DiagramClass::Dim0,
                Class::Ext1 => DiagramClass::Ext1,
            };
            let (da, db) = (load_diagram(&a)?.filter(class), load_diagram(&b)?.filter(class));
            println!("{}", bottleneck(&da, &db));
        }
        Command::Interleave(args) => return interleave(args),
        Command::Fdd {
            a,
            b,
            mesh,
            budget,
            seed,
            tol,
            search_budget,
        } => {
            let (x, y) = (load_graph(&a)?, load_graph(&b)?);
            let di = d_i_bounds(&cosheaf_of(&x), &cosheaf_of(&y), tol, SearchBudget { max_nodes: search_budget })?;
            let (px, py) = (extended_diagrams(&x), extended_diagrams(&y));
            let lower = lower_bound_from_parts(bottleneck(&px.dg0, &py.dg0), bottleneck(&px.exdg1, &py.exdg1), &di);
            let upper = fdd_upper_bound(&x, &y, mesh, budget, seed)?;
            let mut bounds = BoundInterval::new(lower.lo, upper.hi, &lower.provenance, &upper.provenance);
            bounds.undecided = di.undecided;
            print!(
                "{}",
                pretty(&json!({ "bounds": bounds, "lower": lower, "upper": upper }))?
            );
            if di.undecided {
                return Ok(Outcome::Undecided);
            }
        }
        Command::Gen {
            vertices,
            loops,
            seed,
            output,
        } => {
            let g = generate_random_reeb(vertices, loops, seed)?;
            emit(output.as_deref(), &write_reeb(&g))?;
        }
        Command::Sandwich(args) => return sandwich(args),
    }
    Ok(Outcome::Done)
}

fn interleave(args: InterleaveArgs) -> Result<Outcome> {
    let (f, g) = (cosheaf_of(&load_graph(&args.a)?), cosheaf_of(&load_graph(&args.b)?));
    let budget = SearchBudget { max_nodes: args.budget };
    if let Some(eps) = args.epsilon {
        return match decide_interleaving(&f, &g, eps, budget)? {
            Decision::Yes(cert) => {
                println!("yes");
                if let Some(path) = &args.certificate {
                    emit(Some(path), &pretty(&cert)?)?;
                }
                Ok(Outcome::Done)
            }
            Decision::No => {
                println!("no");
                Ok(Outcome::Done)
            }
            Decision::Undecided { nodes } => {
                println!("undecided: budget exceeded after {nodes} nodes");
                Ok(Outcome::Undecided)
            }
        };
    }
    let tol = args.tol.expect("clap requires --epsilon or --tol");
    let bounds = d_i_bounds(&f, &g, tol, budget)?;
    if let (Some(path), Some(cert)) = (&args.certificate, &bounds.certificate) {
        emit(Some(path), &pretty(cert)?)?;
    }
    print!("{}", pretty(&bounds.to_bound_interval())?);
    Ok(if bounds.undecided { Outcome::Undecided } else { Outcome::Done })
}

fn sandwich(args: SandwichArgs) -> Result<Outcome> {
    let pairs = random_pairs(args.trials, args.seed, args.max_vertices, args.max_loops);
    let config = SandwichConfig {
        tolerance: args.tol,
        mesh: args.mesh,
        budget: args.budget,
        search: SearchBudget {
            max_nodes: args.search_budget,
        },
        seed: args.seed,
    };
    let report = sandwich_report(&pairs, &config);
    let rows: Vec<_> = report.iter().map(|(r, _)| r.clone()).collect();
    let stamp = (!args.no_timestamp).then(|| {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        format!("generated at unix time {secs}")
    });
    let mut csv = Vec::new();
    write_csv(&mut csv, &rows, stamp.as_deref())?;
    emit(args.output.as_deref(), std::str::from_utf8(&csv)?)?;
    let sidecar = args
        .json
        .or_else(|| args.output.as_ref().map(|p| p.with_extension("json")));
    if let Some(path) = sidecar {
        let file = fs::File::create(&path).with_context(|| format!("writing {}", path.display()))?;
        write_json(std::io::BufWriter::new(file), &report)?;
    }
    let falsified = rows.iter().filter(|r| r.status == RowStatus::Falsified).count();
    let undecided = rows.iter().filter(|r| r.status == RowStatus::Undecided).count();
    eprintln!(
        "{} rows, {} falsified, {} undecided",
        rows.len(),
        falsified,
        undecided
    );
    Ok(if falsified > 0 {
        Outcome::Falsified
    } else if undecided > 0 {
        Outcome::Undecided
    } else {
        Outcome::Done
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Undecided) => ExitCode::from(2),
        Ok(Outcome::Falsified) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
