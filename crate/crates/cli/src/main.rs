use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use proofleg::codegen::{generate_script, generate_script_with_thesis, render_script, RenderStyle};
use proofleg::frontend::{emit_apg, emit_dg, parse_apg, parse_dg, parse_mizar_lite, parse_ug};
use proofleg::metrics::{analyze, LabelRule};
use proofleg::mil::{
    metric_distribution, solve_ahp, solve_exact, solve_lexicographic, Criterion, SolveMode,
};
use proofleg::order::{enumerate_topo_orders, TopoOrder, DEFAULT_CAP};
use proofleg::partition::{is_h_partition, PathPartition};
use proofleg::reductions::{fas_to_ahp, solve_fas_exact, solve_vc_exact, vc_to_fas, vc_to_mil5};
use proofleg::{ProofGraph, Vertex};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "proofleg",
    version,
    about = "Legibility of proof linearizations"
)]
struct Cli {
    /// Worker threads for exhaustive enumeration.
    #[arg(long, global = true, env = "PROOFLEG_THREADS", default_value_t = 1)]
    threads: usize,

    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measures of one linearization.
    Analyze {
        graph: PathBuf,
        /// Comma-separated order; defaults to the smallest topological order.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<Vertex>>,
    },
    /// Best linearization for a criterion.
    Optimize {
        graph: PathBuf,
        /// then, cross, max, sum, labels or labels-miz.
        #[arg(long, default_value = "then")]
        criterion: Criterion,
        /// Optimize several criteria in priority order; overrides --criterion.
        #[arg(long, value_delimiter = ',')]
        lex: Option<Vec<Criterion>>,
        /// Report how many orders attain the optimum.
        #[arg(long)]
        count_optima: bool,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Walk every linearization.
    Enumerate {
        graph: PathBuf,
        /// Print the distribution of each measure instead of the orders.
        #[arg(long)]
        stats: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Build a reduction instance.
    Reduce {
        #[arg(value_enum)]
        kind: Reduction,
        input: PathBuf,
        output: PathBuf,
        /// Also write the vertex roles as JSON.
        #[arg(long)]
        roles: Option<PathBuf>,
    },
    /// Solve an instance exactly.
    Solve {
        #[arg(value_enum)]
        problem: Problem,
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::BranchAndBound)]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Print a Mizar-style script with the structure of a proof graph.
    GenScript {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<Vertex>>,
        #[arg(long, value_enum, default_value_t = Style::Legible)]
        style: Style,
        #[arg(long, value_enum, default_value_t = Rule::Miz)]
        rule: Rule,
        /// Reject steps citing more than 25 premises.
        #[arg(long)]
        strict_cap: bool,
        /// Step carrying the thesis; defaults to the smallest eligible vertex.
        #[arg(long)]
        thesis: Option<Vertex>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Recover the proof graph of a Mizar-style script.
    Extract {
        script: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check that a JSON list of blocks is an acyclic Hamiltonian partition.
    VerifyPartition { graph: PathBuf, partition: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    #[value(name = "bnb")]
    BranchAndBound,
}

impl From<Mode> for SolveMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exhaustive => SolveMode::Exhaustive,
            Mode::BranchAndBound => SolveMode::BranchAndBound,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Reduction {
    VcToFas,
    FasToAhp,
    VcToMil5,
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Vc,
    Fas,
    Ahp,
}

#[derive(Clone, Copy, ValueEnum)]
enum Style {
    Legible,
    Verbose,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Plain,
    Miz,
}

/// Inconsistent flags detected after parsing; exits with status 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let text = e.render().to_string();
            let first: Vec<&str> = text
                .lines()
                .take_while(|l| !l.trim().is_empty())
                .map(str::trim)
                .collect();
            eprintln!("{}", first.join(" "));
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_graph(path: &Path) -> Result<ProofGraph> {
    parse_apg(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn order_for(g: &ProofGraph, order: Option<Vec<Vertex>>) -> Result<TopoOrder> {
    match order {
        Some(seq) => Ok(TopoOrder::new(g, seq)?),
        None => Ok(TopoOrder::smallest(g)),
    }
}

fn cap_hint(e: proofleg::Error) -> anyhow::Error {
    match e {
        proofleg::Error::EnumerationCapExceeded { cap } => {
            anyhow::anyhow!("more than {cap} linear extensions; raise --cap or use --mode bnb")
        }
        other => other.into(),
    }
}

fn print_json(value: &impl Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn join(seq: &[Vertex]) -> String {
    seq.iter()
        .map(Vertex::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn run(cli: Cli) -> Result<()> {
    configure_threads(cli.threads)?;
    let json = cli.json;
    match cli.command {
        Command::Analyze { graph, order } => {
            let g = load_graph(&graph)?;
            let t = order_for(&g, order)?;
            let m = analyze(&g, &t)?;
            if json {
                print_json(&m)?;
            } else {
                println!("order             {}", join(t.sequence()));
                println!("then_count        {}", m.then_count);
                println!("path_count        {}", m.path_count);
                println!("cross_ref_count   {}", m.cross_ref_count);
                println!("sum_distance      {}", m.sum_distance);
                println!("max_distance      {}", m.max_distance);
                println!("label_count_plain {}", m.label_count_plain);
                println!("label_count_miz   {}", m.label_count_miz);
            }
        }
        Command::Optimize {
            graph,
            criterion,
            lex,
            count_optima,
            mode,
            cap,
        } => {
            let g = load_graph(&graph)?;
            optimize(&g, criterion, lex, count_optima, mode, cap, json)?;
        }
        Command::Enumerate { graph, stats, cap } => {
            let g = load_graph(&graph)?;
            if stats {
                let d = metric_distribution(&g, Some(cap)).map_err(cap_hint)?;
                if json {
                    print_json(&d)?;
                } else {
                    println!("orders {}", d.orders);
                    for (name, hist) in [
                        ("then_count", &d.then_count),
                        ("path_count", &d.path_count),
                        ("cross_ref_count", &d.cross_ref_count),
                        ("sum_distance", &d.sum_distance),
                        ("max_distance", &d.max_distance),
                        ("label_count_plain", &d.label_count_plain),
                        ("label_count_miz", &d.label_count_miz),
                    ] {
                        let cells: Vec<String> =
                            hist.iter().map(|(v, n)| format!("{v}:{n}")).collect();
                        println!("{name} {}", cells.join(" "));
                    }
                }
            } else {
                use std::io::Write;
                let stdout = std::io::stdout();
                let mut out = std::io::BufWriter::new(stdout.lock());
                let mut failed = None;
                let n = enumerate_topo_orders(&g, Some(cap), |seq| {
                    if failed.is_none() {
                        if let Err(e) = writeln!(out, "{}", join(seq)) {
                            failed = Some(e);
                        }
                    }
                })
                .map_err(cap_hint)?;
                if let Some(e) = failed {
                    return Err(e.into());
                }
                out.flush()?;
                eprintln!("{n} orders");
            }
        }
        Command::Reduce {
            kind,
            input,
            output,
            roles,
        } => reduce(kind, &input, &output, roles.as_deref(), json)?,
        Command::Solve {
            problem,
            input,
            mode,
            cap,
        } => solve(problem, &input, mode, cap, json)?,
        Command::GenScript {
            graph,
            order,
            style,
            rule,
            strict_cap,
            thesis,
            output,
        } => {
            let g = load_graph(&graph)?;
            let t = order_for(&g, order)?;
            let s = match thesis {
                Some(v) => generate_script_with_thesis(&g, &t, v, strict_cap)?,
                None => generate_script(&g, &t, strict_cap)?,
            };
            let style = match style {
                Style::Legible => RenderStyle::Legible,
                Style::Verbose => RenderStyle::Verbose,
            };
            let rule = match rule {
                Rule::Plain => LabelRule::Plain,
                Rule::Miz => LabelRule::Miz,
            };
            let text = render_script(&s, style, rule);
            match output {
                Some(p) => write(&p, &text)?,
                None => print!("{text}"),
            }
        }
        Command::Extract { script, output } => {
            let p = parse_mizar_lite(&read(&script)?)
                .with_context(|| format!("in {}", script.display()))?;
            let text = emit_apg(&p.graph);
            match output {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
        }
        Command::VerifyPartition { graph, partition } => {
            let g = load_graph(&graph)?;
            let blocks: Vec<Vec<Vertex>> = serde_json::from_str(&read(&partition)?)
                .with_context(|| format!("{} is not a JSON list of blocks", partition.display()))?;
            let p = PathPartition::new(g.vertex_count(), blocks)?;
            let (valid, reason) = is_h_partition(&g, &p);
            if json {
                print_json(&json!({ "valid": valid, "blocks": p.len(), "reason": reason }))?;
            } else if valid {
                println!("valid: {} blocks", p.len());
            }
            if !valid {
                anyhow::bail!(reason.unwrap_or_else(|| "invalid partition".into()));
            }
        }
    }
    Ok(())
}

#[cfg(feature = "parallel")]
fn configure_threads(n: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n.max(1))
        .build_global()
        .context("cannot start the thread pool")
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(_: usize) -> Result<()> {
    Ok(())
}

fn optimize(
    g: &ProofGraph,
    criterion: Criterion,
    lex: Option<Vec<Criterion>>,
    count_optima: bool,
    mode: Mode,
    cap: u64,
    json: bool,
) -> Result<()> {
    let mode = SolveMode::from(mode);
    if let Some(cs) = lex {
        if mode != SolveMode::Exhaustive {
            return Err(UsageError("--lex needs --mode exhaustive".into()).into());
        }
        let r = solve_lexicographic(g, &cs, Some(cap)).map_err(cap_hint)?;
        let names: Vec<&str> = cs.iter().map(|c| c.name()).collect();
        if json {
            print_json(&json!({
                "criteria": names,
                "values": r.values,
                "optima": r.optima_count,
                "witness": r.witness,
                "explored": r.explored,
            }))?;
        } else {
            for (name, v) in names.iter().zip(&r.values) {
                println!("{name:<10} {v}");
            }
            println!("optima     {}", r.optima_count);
            println!("witness    {}", join(r.witness.sequence()));
        }
        return Ok(());
    }
    if count_optima && mode != SolveMode::Exhaustive {
        return Err(UsageError("--count-optima needs --mode exhaustive".into()).into());
    }
    let r = solve_exact(g, criterion, mode, Some(cap)).map_err(cap_hint)?;
    let optima = if count_optima { r.optima_count } else { None };
    if json {
        let mut out = json!({
            "criterion": criterion.name(),
            "best_value": r.best_value,
            "witness": r.witness,
            "explored": r.explored,
        });
        if criterion == Criterion::ThenPaths {
            out["best_paths"] = json!(r.best_value);
            out["best_then"] = json!(g.vertex_count() - r.best_value);
        }
        if let Some(n) = optima {
            out["optima"] = json!(n);
        }
        print_json(&out)?;
    } else {
        println!("{:<10} {}", criterion.name(), r.best_value);
        if criterion == Criterion::ThenPaths {
            println!("then-steps {}", g.vertex_count() - r.best_value);
        }
        if let Some(n) = optima {
            println!("optima     {n}");
        }
        println!("witness    {}", join(r.witness.sequence()));
    }
    Ok(())
}

fn reduce(
    kind: Reduction,
    input: &Path,
    output: &Path,
    roles: Option<&Path>,
    json: bool,
) -> Result<()> {
    let text = read(input)?;
    let ctx = || format!("in {}", input.display());
    let (emitted, roles_json, summary) = match kind {
        Reduction::VcToFas => {
            let ug = parse_ug(&text).with_context(ctx)?;
            let a = vc_to_fas(&ug);
            let d = &a.instance;
            let s = json!({ "vertices": d.vertex_count(), "arcs": d.arc_count() });
            (emit_dg(d), serde_json::to_value(a.roles)?, s)
        }
        Reduction::VcToMil5 => {
            let ug = parse_ug(&text).with_context(ctx)?;
            let a = vc_to_mil5(&ug);
            let g = &a.instance;
            let s = json!({
                "vertices": g.vertex_count(),
                "arcs": g.arc_count(),
                "reference_arcs": g.reference_arc_count(),
            });
            (emit_apg(g), serde_json::to_value(a.roles)?, s)
        }
        Reduction::FasToAhp => {
            let dg = parse_dg(&text).with_context(ctx)?;
            let a = fas_to_ahp(&dg, None)?;
            let g = &a.instance;
            let s = json!({
                "vertices": g.vertex_count(),
                "arcs": g.arc_count(),
                "offset": a.roles.offset(),
            });
            (emit_apg(g), serde_json::to_value(&a.roles)?, s)
        }
    };
    write(output, &emitted)?;
    if let Some(path) = roles {
        write(path, &(serde_json::to_string_pretty(&roles_json)? + "\n"))?;
    }
    if json {
        print_json(&summary)?;
    } else {
        let parts: Vec<String> = summary
            .as_object()
            .expect("summary is an object")
            .iter()
            .map(|(k, v)| format!("{k} {v}"))
            .collect();
        println!("{}", parts.join(", "));
    }
    Ok(())
}

fn solve(problem: Problem, input: &Path, mode: Mode, cap: u64, json: bool) -> Result<()> {
    let text = read(input)?;
    let ctx = || format!("in {}", input.display());
    match problem {
        Problem::Vc => {
            let cover = solve_vc_exact(&parse_ug(&text).with_context(ctx)?)?;
            if json {
                print_json(&json!({ "size": cover.len(), "cover": cover }))?;
            } else {
                println!("size  {}", cover.len());
                println!("cover {}", join(&cover.into_iter().collect::<Vec<_>>()));
            }
        }
        Problem::Fas => {
            let f: BTreeSet<(Vertex, Vertex)> =
                solve_fas_exact(&parse_dg(&text).with_context(ctx)?)?;
            if json {
                print_json(&json!({ "size": f.len(), "arcs": f }))?;
            } else {
                println!("size {}", f.len());
                for (a, b) in f {
                    println!("arc {a} {b}");
                }
            }
        }
        Problem::Ahp => {
            let g = parse_apg(&text).with_context(ctx)?;
            let r = solve_ahp(&g, mode.into(), Some(cap)).map_err(cap_hint)?;
            if json {
                print_json(&r)?;
            } else {
                println!("blocks {}", r.best_value);
                for b in r.witness_partition.blocks() {
                    println!("  {}", join(b));
                }
            }
        }
    }
    Ok(())
}
