//! Command-line driver. Exit status: 0 when something was found, 1 when
//! the answer is empty (or an audit failed), 2 on bad input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use cfpq_core::{Grammar, Graph, Lookahead, PathQueryLimits, Query, QueryResult, Vertex, WorklistOrder};
use clap::{Args, Parser, Subcommand};

use crate::bench;
use crate::export::{self, Format, Options};
use crate::grammars;
use crate::io::{read_graph, GraphFormat, DEFAULT_INVERSE_SUFFIX};

pub const EXIT_FOUND: i32 = 0;
pub const EXIT_EMPTY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "cfpq", version, about = "Context-free path queries over edge-labeled graphs")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a query and report the matching vertex pairs.
    Query(QueryArgs),
    /// List matching paths, shortest first.
    Paths(PathsArgs),
    /// Print forest and stack sizes and check them against their bounds.
    Stats(InputArgs),
    /// Time queries on complete graphs and fit the growth curves.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Edge list to query.
    #[arg(long)]
    graph: PathBuf,
    /// Grammar file, or one of the built-in names g0, g1, g2, q1, q2.
    #[arg(long)]
    grammar: String,
    #[arg(long, value_enum, default_value = "tsv")]
    format: GraphFormat,
    /// Label suffix for the reversed edge of every N-Triples statement.
    #[arg(long, default_value = DEFAULT_INVERSE_SUFFIX)]
    inverse_suffix: String,
    /// Comma-separated start vertices, or `all`.
    #[arg(long, default_value = "all")]
    starts: String,
    /// Comma-separated final vertices, or `all`.
    #[arg(long, default_value = "all")]
    finals: String,
    /// Process descriptors first-in first-out.
    #[arg(long)]
    fifo: bool,
    /// Try every alternative instead of consulting the prediction table.
    #[arg(long)]
    no_lookahead: bool,
}

#[derive(Args, Debug)]
struct QueryArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Write `nonterminal<TAB>source<TAB>target` rows here instead of stdout.
    #[arg(long)]
    triples: Option<PathBuf>,
    /// Write the forest as .dot or .json.
    #[arg(long)]
    sppf: Option<PathBuf>,
    /// Report pairs for this nonterminal instead of the start symbol.
    #[arg(long)]
    nonterminal: Option<String>,
    /// Label packed nodes in the forest output.
    #[arg(long)]
    verbose_packed: bool,
    /// Leave out packed nodes that are the only child of their parent.
    #[arg(long)]
    simplify: bool,
}

#[derive(Args, Debug)]
struct PathsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    from: String,
    /// Target vertex; any final vertex if omitted.
    #[arg(long)]
    to: Option<String>,
    #[arg(long, default_value_t = 10)]
    max_count: usize,
    #[arg(long, default_value_t = 16)]
    max_length: usize,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// g0, g2 or a grammar file.
    #[arg(long)]
    grammar: String,
    /// Inclusive range of graph sizes, `A..B`.
    #[arg(long)]
    sizes: String,
    /// Add a self-loop per label on every vertex.
    #[arg(long)]
    with_loops: bool,
    /// Runs per size; the median time is reported.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
struct InputError(String);

impl<E: std::error::Error> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn input_error(msg: impl Into<String>) -> InputError {
    InputError(msg.into())
}

pub fn load_grammar(spec: &str) -> Result<Grammar, String> {
    let path = Path::new(spec);
    let text = if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| format!("{spec}: {e}"))?
    } else if let Some(text) = grammars::builtin(spec) {
        text.to_string()
    } else {
        return Err(format!("{spec}: no such grammar file or built-in grammar"));
    };
    Grammar::parse(&text).map_err(|e| format!("{spec}: {e}"))
}

fn vertex_set(graph: &Graph, spec: &str, what: &str) -> Result<Option<Vec<Vertex>>, InputError> {
    if spec == "all" {
        return Ok(None);
    }
    let mut out = Vec::new();
    for name in spec.split(',').map(str::trim) {
        if name.is_empty() {
            return Err(input_error(format!("empty vertex in --{what}")));
        }
        out.push(resolve(graph, name, what)?);
    }
    Ok(Some(out))
}

fn resolve(graph: &Graph, name: &str, what: &str) -> Result<Vertex, InputError> {
    graph.vertex_by_name(name).ok_or_else(|| input_error(format!("--{what}: unknown vertex `{name}`")))
}

struct Loaded {
    graph: Graph,
    grammar: Grammar,
}

impl InputArgs {
    fn load(&self) -> Result<Loaded, InputError> {
        let graph = read_graph(&self.graph, self.format, &self.inverse_suffix)?;
        let grammar = load_grammar(&self.grammar).map_err(InputError)?;
        Ok(Loaded { graph, grammar })
    }

    fn run<'a>(&self, loaded: &'a Loaded) -> Result<QueryResult<'a>, InputError> {
        let mut q = Query::new(&loaded.graph, &loaded.grammar);
        if let Some(s) = vertex_set(&loaded.graph, &self.starts, "starts")? {
            q = q.starts(s);
        }
        if let Some(f) = vertex_set(&loaded.graph, &self.finals, "finals")? {
            q = q.finals(f);
        }
        if self.fifo {
            q = q.order(WorklistOrder::Fifo);
        }
        if self.no_lookahead {
            q = q.lookahead(Lookahead::Off);
        }
        Ok(q.run())
    }
}

fn write_output(path: &Path, text: &str) -> Result<(), InputError> {
    std::fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn query(args: &QueryArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, InputError> {
    let loaded = args.input.load()?;
    let sppf_format = args.sppf.as_deref().map(Format::from_path).transpose()?;
    let nt = match &args.nonterminal {
        Some(name) => loaded
            .grammar
            .nonterminal_id(name)
            .ok_or_else(|| input_error(format!("--nonterminal: unknown nonterminal `{name}`")))?,
        None => loaded.grammar.start(),
    };
    let r = args.input.run(&loaded)?;

    let name = loaded.grammar.nonterminal_name(nt);
    let pairs = r.answer_pairs(nt);
    let mut rows = String::new();
    for (u, v) in &pairs {
        writeln!(rows, "{name}\t{}\t{}", loaded.graph.vertex_name(*u), loaded.graph.vertex_name(*v)).unwrap();
    }
    match &args.triples {
        Some(path) => write_output(path, &rows)?,
        None => out.write_all(rows.as_bytes())?,
    }
    if let (Some(path), Some(format)) = (&args.sppf, sppf_format) {
        let options = Options { verbose: args.verbose_packed, simplify: args.simplify };
        write_output(path, &export::render(&r, format, options))?;
    }
    writeln!(err, "{} roots, {} {name} pairs, {} forest nodes", r.roots().len(), pairs.len(), r.sppf().len())?;
    Ok(if r.is_success() { EXIT_FOUND } else { EXIT_EMPTY })
}

fn paths(args: &PathsArgs, out: &mut dyn Write) -> Result<i32, InputError> {
    let loaded = args.input.load()?;
    let limits = PathQueryLimits::new(args.max_count, args.max_length)
        .map_err(|_| input_error("--max-count and --max-length must be at least 1"))?;
    let from = resolve(&loaded.graph, &args.from, "from")?;
    let to = args.to.as_deref().map(|t| resolve(&loaded.graph, t, "to")).transpose()?;
    let r = args.input.run(&loaded)?;
    let found: Vec<_> = match to {
        Some(to) => r.enumerate_paths(from, to, limits).collect(),
        None => r.enumerate_paths_from(from, limits).collect(),
    };
    for p in &found {
        writeln!(out, "{}", p.display(&loaded.graph))?;
    }
    Ok(if found.is_empty() { EXIT_EMPTY } else { EXIT_FOUND })
}

fn stats(args: &InputArgs, out: &mut dyn Write) -> Result<i32, InputError> {
    let loaded = args.load()?;
    let r = args.run(&loaded)?;
    let s = r.sppf().stats();
    let e = r.engine_stats();
    writeln!(
        out,
        "forest: {} nodes, {} edges (terminal {}, epsilon {}, nonterminal {}, intermediate {}, packed {})",
        s.nodes, s.edges, s.terminal, s.epsilon, s.nonterminal, s.intermediate, s.packed
    )?;
    writeln!(out, "stack: {} nodes, {} edges, {} pops", r.gss().len(), r.gss().edge_count(), r.gss().popped_count())?;
    writeln!(out, "descriptors: {} created, {} processed, {} offered", e.descriptors, e.dispatched, e.offers)?;
    writeln!(out, "roots: {}", r.roots().len())?;
    let report = r.audit();
    write!(out, "{report}")?;
    Ok(if report.passed() { EXIT_FOUND } else { EXIT_EMPTY })
}

fn bench_cmd(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, InputError> {
    let grammar = load_grammar(&args.grammar).map_err(InputError)?;
    let sizes = bench::parse_sizes(&args.sizes)?;
    let name = Path::new(&args.grammar).file_stem().and_then(|s| s.to_str()).unwrap_or(&args.grammar);
    let records = bench::sweep(name, &grammar, sizes, args.with_loops, args.repeats)?;
    let csv = bench::to_csv(&records);
    match &args.out {
        Some(path) => write_output(path, &csv)?,
        None => out.write_all(csv.as_bytes())?,
    }
    match bench::fit_nodes(&records) {
        Some(f) => writeln!(err, "nodes: {f}")?,
        None => writeln!(err, "nodes: not enough sizes to fit a cubic")?,
    }
    match bench::fit_time(&records) {
        Some(f) => writeln!(err, "time_ms: {f}")?,
        None => writeln!(err, "time_ms: not enough sizes to fit a quartic")?,
    }
    Ok(EXIT_FOUND)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(target, "{}", e.render());
            return if code == 0 { 0 } else { EXIT_INPUT };
        }
    };
    let result = match &cli.command {
        Command::Query(a) => query(a, out, err),
        Command::Paths(a) => paths(a, out),
        Command::Stats(a) => stats(a, out),
        Command::Bench(a) => bench_cmd(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(InputError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}
