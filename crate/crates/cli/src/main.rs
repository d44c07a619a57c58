mod output;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qextremal::containment::{self, Host};
use qextremal::search::{self, SearchMode, SearchReport, MAX_FAMILY_INNER_EDGES};
use qextremal::spectra::spectral_radius;
use qextremal::trees::{self, CanonicalTree};
use qextremal::{audit, graph, graph6, suites, Graph, DEFAULT_TOL};
use serde::Serialize;
use serde_json::json;

use output::{num, Format, Output};
use source::{Params, Source};

/// Signless Laplacian spectral extremal graphs for trees: constructions,
/// spectral radii, tree containment, lemma audits and extremal search.
#[derive(Parser, Debug)]
#[command(name = "qextremal", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Serialize)]
struct Global {
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Power-iteration tolerance on the max-norm residual.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Seed for every random choice; drawn and printed when omitted.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "QEXTREMAL_WORKERS")]
    workers: Option<usize>,
    /// Omit the timestamp from the header.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// Write to this file instead of stdout.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase", tag = "command")]
enum Command {
    /// Build a named graph and print it as graph6.
    Construct {
        /// S, S+, K, P, C, star, Kab, lemma24.
        family: String,
        #[command(flatten)]
        params: Params,
    },
    /// Spectral radius of Q = D + A, compared with closed forms when known.
    Spectra {
        #[command(flatten)]
        source: Source,
        /// Also print the Perron vector.
        #[arg(long)]
        vector: bool,
    },
    /// Enumerate unlabeled trees on t vertices.
    Trees {
        #[arg(long)]
        t: usize,
        /// Print only the number of trees.
        #[arg(long)]
        count: bool,
        /// Emit graph6 instead of level sequences.
        #[arg(long)]
        graph6: bool,
    },
    /// Tree containment in a host graph.
    Contains {
        #[command(flatten)]
        source: Source,
        /// Tree as a comma-separated level sequence.
        #[arg(long, conflicts_with = "all")]
        tree: Option<String>,
        /// Check every tree on this many vertices.
        #[arg(long)]
        all: Option<usize>,
    },
    /// Audit the spectral lemmas on one graph, or on the S / S+ grid.
    Audit {
        #[command(flatten)]
        source: Source,
        /// Forbidden trees have 2k+3 vertices instead of 2k+2.
        #[arg(long)]
        prime: bool,
        /// Run the grid n = 80k³ ..= 80k³+span for these k (comma-separated).
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<usize>>,
        /// Width of the grid in n.
        #[arg(long, default_value_t = 50)]
        span: usize,
    },
    /// Search for graphs of maximum q missing some tree on 2k+2 (2k+3) vertices.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        prime: bool,
        #[arg(long, value_enum, default_value_t = ModeArg::Hillclimb)]
        mode: ModeArg,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// Largest pattern size for the family scan.
        #[arg(long, default_value_t = MAX_FAMILY_INNER_EDGES)]
        max_inner_edges: usize,
        /// Write accepted hill-climbing moves to this CSV file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run a verification suite: lemma2, trees, spectra, audit or all.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Clone, Copy, Debug, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Exhaustive,
    Family,
    Hillclimb,
}

enum Failure {
    /// Bad input; exit 2.
    Usage(String),
    /// A check ran and failed; exit 1. The output is still written.
    Verification(String, String),
}

impl From<qextremal::Error> for Failure {
    fn from(e: qextremal::Error) -> Self {
        match e {
            qextremal::Error::NonConvergence { .. } | qextremal::Error::Unconverged { .. } => {
                Failure::Verification(e.to_string(), String::new())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Usage(s)
    }
}

type Run = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(w) = cli.global.workers {
        if w == 0 {
            eprintln!("qextremal: --workers must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("qextremal: cannot size worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    if cli.global.tol.is_nan() || cli.global.tol <= 0.0 {
        eprintln!("qextremal: --tol must be positive, got {}", cli.global.tol);
        return ExitCode::from(2);
    }
    let (text, code) = match run(&cli) {
        Ok(text) => (text, 0),
        Err(Failure::Usage(msg)) => {
            eprintln!("qextremal: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Verification(msg, text)) => {
            eprintln!("qextremal: {msg}");
            (text, 1)
        }
    };
    match &cli.global.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("qextremal: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}

fn default_format(cmd: &Command) -> Format {
    match cmd {
        Command::Construct { .. } | Command::Trees { .. } | Command::Verify { .. } => Format::Text,
        Command::Spectra { .. } => Format::Csv,
        Command::Audit { grid: Some(_), .. } => Format::Csv,
        Command::Contains { .. } | Command::Audit { .. } | Command::Search { .. } => Format::Json,
    }
}

fn uses_seed(cmd: &Command) -> bool {
    matches!(cmd, Command::Search { mode: ModeArg::Hillclimb, .. })
}

fn config(cli: &Cli, format: Format, seed: Option<u64>) -> serde_json::Value {
    let timestamp = (!cli.global.no_timestamp)
        .then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "args": cli.command,
        "format": format,
        "tol": cli.global.tol,
        "seed": seed,
        "workers": cli.global.workers.unwrap_or_else(rayon::current_num_threads),
        "timestamp": timestamp,
    })
}

fn run(cli: &Cli) -> Run {
    let format = cli.global.format.unwrap_or_else(|| default_format(&cli.command));
    let seed = uses_seed(&cli.command).then(|| cli.global.seed.unwrap_or_else(rand::random));
    let out = Output::new(format, config(cli, format, seed));
    let tol = cli.global.tol;
    match &cli.command {
        Command::Construct { family, params } => cmd_construct(out, family, params),
        Command::Spectra { source, vector } => cmd_spectra(out, source, *vector, tol),
        Command::Trees { t, count, graph6 } => cmd_trees(out, *t, *count, *graph6),
        Command::Contains { source, tree, all } => cmd_contains(out, source, tree.as_deref(), *all),
        Command::Audit { source, prime, grid, span } => match grid {
            Some(ks) => cmd_audit_grid(out, ks, *span, tol),
            None => cmd_audit(out, source, *prime, tol),
        },
        Command::Search {
            n,
            k,
            prime,
            mode,
            restarts,
            steps,
            max_inner_edges,
            trace,
        } => {
            let report = match mode {
                ModeArg::Exhaustive => search::exhaustive_search(*n, *k, *prime)?,
                ModeArg::Family => search::family_scan(*n, *k, *prime, *max_inner_edges)?,
                ModeArg::Hillclimb => {
                    search::hill_climb(*n, *k, *prime, seed.expect("seeded"), *restarts, *steps)?
                }
            };
            cmd_search(out, &report, trace.as_ref())
        }
        Command::Verify { suite } => cmd_verify(out, suite),
    }
}

fn cmd_construct(mut out: Output, family: &str, params: &Params) -> Run {
    let g = source::construct(family, params)?;
    write_graph(&mut out, &g);
    Ok(out.into_string())
}

fn write_graph(out: &mut Output, g: &Graph) {
    match out.format() {
        Format::Text => out.line(graph6::encode(g)),
        Format::Csv => {
            out.line("u,v");
            for (u, v) in g.edges() {
                out.line(format!("{u},{v}"));
            }
        }
        Format::Json => {
            let edges: Vec<[usize; 2]> = g.edges().map(|(u, v)| [u, v]).collect();
            out.json(&json!({
                "n": g.n(),
                "edges": g.edge_count(),
                "graph6": graph6::encode(g),
                "edge_list": edges,
            }));
        }
    }
}

fn cmd_spectra(mut out: Output, source: &Source, vector: bool, tol: f64) -> Run {
    let g = source.load()?;
    let r = spectral_radius(&g, tol)?;
    let closed = source.closed_form();
    let k = closed.map(|(k, _)| k.to_string()).unwrap_or_default();
    let q_closed = closed.map(|(_, q)| num(q)).unwrap_or_default();
    match out.format() {
        Format::Csv => {
            out.line("n,k,q_numeric,q_closed,residual,iterations");
            out.line(format!("{},{k},{},{q_closed},{},{}", g.n(), num(r.q), num(r.residual), r.iterations));
            if vector {
                out.line("vertex,x");
                for (v, x) in r.x.iter().enumerate() {
                    out.line(format!("{v},{}", num(*x)));
                }
            }
        }
        Format::Text => {
            out.line(format!("n           {}", g.n()));
            out.line(format!("q           {}", num(r.q)));
            if let Some((k, q)) = closed {
                out.line(format!("k           {k}"));
                out.line(format!("q_closed    {}", num(q)));
            }
            out.line(format!("residual    {}", num(r.residual)));
            out.line(format!("iterations  {}", r.iterations));
            if vector {
                let xs: Vec<String> = r.x.iter().map(|x| num(*x)).collect();
                out.line(format!("x           {}", xs.join(" ")));
            }
        }
        Format::Json => {
            let mut doc = json!({
                "n": g.n(),
                "q_numeric": r.q,
                "q_closed": closed.map(|(_, q)| q),
                "k": closed.map(|(k, _)| k),
                "residual": r.residual,
                "iterations": r.iterations,
            });
            if vector {
                doc["x"] = json!(r.x);
            }
            out.json(&doc);
        }
    }
    Ok(out.into_string())
}

fn cmd_trees(mut out: Output, t: usize, count: bool, as_graph6: bool) -> Run {
    let all = trees::all_trees(t)?;
    let render = |tree: &CanonicalTree| {
        if as_graph6 {
            graph6::encode(&trees::tree_to_graph(tree))
        } else {
            tree.to_string()
        }
    };
    match (out.format(), count) {
        (Format::Json, true) => out.json(&json!({ "t": t, "count": all.len() })),
        (Format::Json, false) => {
            let items: Vec<String> = all.iter().map(render).collect();
            out.json(&json!({ "t": t, "count": all.len(), "trees": items }));
        }
        (Format::Csv, true) => {
            out.line("t,count");
            out.line(format!("{t},{}", all.len()));
        }
        (Format::Csv, false) => {
            out.line(if as_graph6 { "index,graph6" } else { "index,level_sequence" });
            for (i, tree) in all.iter().enumerate() {
                out.line(format!("{i},\"{}\"", render(tree)));
            }
        }
        (Format::Text, true) => out.line(all.len().to_string()),
        (Format::Text, false) => {
            for tree in &all {
                out.line(render(tree));
            }
        }
    }
    Ok(out.into_string())
}

fn cmd_contains(mut out: Output, source: &Source, tree: Option<&str>, all: Option<usize>) -> Run {
    let g = source.load()?;
    match (tree, all) {
        (Some(seq), _) => {
            let tree = CanonicalTree::parse(seq).map_err(|e| format!("--tree '{seq}': {e}"))?;
            let embedding = Host::new(&g).embed(&tree);
            let contained = embedding.is_some();
            match out.format() {
                Format::Json => out.json(&json!({ "tree": tree, "contained": contained, "embedding": embedding })),
                Format::Csv => {
                    out.line("tree,contained,embedding");
                    let map = embedding.map(|e| e.map.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
                    out.line(format!("\"{tree}\",{contained},{}", map.unwrap_or_default()));
                }
                Format::Text => {
                    out.line(format!("tree       {tree}"));
                    out.line(format!("contained  {contained}"));
                    if let Some(e) = embedding {
                        let map: Vec<String> = e.map.iter().map(|v| v.to_string()).collect();
                        out.line(format!("embedding  {}", map.join(" ")));
                    }
                }
            }
        }
        (None, Some(t)) => {
            let rep = containment::contains_all_trees(&g, t)?;
            match out.format() {
                Format::Json => out.json(&rep),
                Format::Csv => {
                    out.line("t,all_present,first_missing,checked");
                    let fm = rep.first_missing.as_ref().map(|t| t.to_string()).unwrap_or_default();
                    out.line(format!("{},{},\"{fm}\",{}", rep.t, rep.all_present, rep.checked));
                }
                Format::Text => {
                    out.line(format!("t              {}", rep.t));
                    out.line(format!("all_present    {}", rep.all_present));
                    if let Some(fm) = &rep.first_missing {
                        out.line(format!("first_missing  {fm}"));
                    }
                    out.line(format!("checked        {}", rep.checked));
                }
            }
        }
        (None, None) => return Err(Failure::Usage("contains needs --tree or --all".into())),
    }
    Ok(out.into_string())
}

fn cmd_audit(mut out: Output, source: &Source, prime: bool, tol: f64) -> Run {
    if !source.is_given() {
        return Err(Failure::Usage("audit needs an input graph or --grid".into()));
    }
    let k = source.params.k.ok_or_else(|| "audit needs --k".to_string())?;
    let g = source.load()?;
    let r = spectral_radius(&g, tol)?;
    let rep = audit::audit_graph(&g, &r, k, prime)?;
    match out.format() {
        Format::Json => out.json(&rep),
        Format::Csv => {
            out.line("lemma,hypothesis_met,inequality_holds,slack");
            for e in &rep.entries {
                out.line(format!("{},{},{},{}", e.lemma, e.hypothesis_met, e.inequality_holds, num(e.slack)));
            }
        }
        Format::Text => {
            out.line(format!(
                "n={} k={} prime={} edges={} q={} |L|={} |L'|={}",
                rep.n,
                rep.k,
                rep.prime,
                rep.edges,
                num(rep.q),
                rep.size_large,
                rep.size_large_prime
            ));
            out.line(format!("{:<24}{:<12}{:<8}slack", "lemma", "hypothesis", "holds"));
            for e in &rep.entries {
                out.line(format!("{:<24}{:<12}{:<8}{}", e.lemma, e.hypothesis_met, e.inequality_holds, num(e.slack)));
            }
        }
    }
    let violations: Vec<&str> = rep.violations().map(|e| e.lemma.as_str()).collect();
    if violations.is_empty() {
        Ok(out.into_string())
    } else {
        Err(Failure::Verification(format!("audit violations: {}", violations.join(", ")), out.into_string()))
    }
}

#[derive(Serialize)]
struct GridRow {
    family: &'static str,
    n: usize,
    k: usize,
    prime: bool,
    q: f64,
    residual: f64,
    size_large: usize,
    size_large_prime: usize,
    boundary: usize,
    conclusions_hold: bool,
    violations: usize,
}

fn cmd_audit_grid(mut out: Output, ks: &[usize], span: usize, tol: f64) -> Run {
    let mut rows = Vec::new();
    for &k in ks {
        let lo = 80 * k.checked_pow(3).ok_or_else(|| "grid k too large".to_string())?;
        for n in lo..=lo + span {
            for prime in [false, true] {
                let g = if prime { graph::make_s_plus(n, k)? } else { graph::make_s(n, k)? };
                let r = spectral_radius(&g, tol)?;
                let rep = audit::audit_graph(&g, &r, k, prime)?;
                rows.push(GridRow {
                    family: if prime { "S+" } else { "S" },
                    n,
                    k,
                    prime,
                    q: rep.q,
                    residual: rep.residual,
                    size_large: rep.size_large,
                    size_large_prime: rep.size_large_prime,
                    boundary: rep.boundary.len(),
                    conclusions_hold: rep.entries.iter().all(|e| e.inequality_holds),
                    violations: rep.violations().count(),
                });
            }
        }
    }
    match out.format() {
        Format::Json => out.json(&rows),
        _ => {
            out.line("family,n,k,prime,q,residual,size_large,size_large_prime,boundary,conclusions_hold,violations");
            for r in &rows {
                out.line(format!(
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    r.family,
                    r.n,
                    r.k,
                    r.prime,
                    num(r.q),
                    num(r.residual),
                    r.size_large,
                    r.size_large_prime,
                    r.boundary,
                    r.conclusions_hold,
                    r.violations
                ));
            }
        }
    }
    let bad = rows.iter().filter(|r| r.violations > 0).count();
    if bad == 0 {
        Ok(out.into_string())
    } else {
        Err(Failure::Verification(format!("{bad} grid graphs with audit violations"), out.into_string()))
    }
}

fn cmd_search(mut out: Output, report: &SearchReport, trace: Option<&PathBuf>) -> Run {
    if let Some(path) = trace {
        let mut csv = String::from("restart,step,u,v,q\n");
        for s in &report.trace {
            csv.push_str(&format!("{},{},{},{},{}\n", s.restart, s.step, s.u, s.v, num(s.q)));
        }
        std::fs::write(path, csv).map_err(|e| format!("--trace {}: {e}", path.display()))?;
    }
    match out.format() {
        Format::Json => out.json(report),
        Format::Csv => {
            out.line("mode,n,k,prime,t,best_graph,best_q,q_of_s,q_of_s_plus,candidates,certified,isomorphic_to_reference,witness");
            let opt = |q: Option<f64>| q.map(num).unwrap_or_default();
            out.line(format!(
                "{},{},{},{},{},\"{}\",{},{},{},{},{},{},\"{}\"",
                mode_name(report.mode),
                report.n,
                report.k,
                report.prime,
                report.t,
                report.best_graph,
                num(report.best_q),
                opt(report.q_of_s),
                opt(report.q_of_s_plus),
                report.candidates_examined,
                report.certified,
                report.isomorphic_to_reference,
                report.missing_tree_witness
            ));
        }
        Format::Text => {
            out.line(format!("mode        {}", mode_name(report.mode)));
            out.line(format!("best_graph  {}", report.best_graph));
            out.line(format!("best_q      {}", num(report.best_q)));
            if let Some(q) = report.q_of_s {
                out.line(format!("q(S)        {}", num(q)));
            }
            if let Some(q) = report.q_of_s_plus {
                out.line(format!("q(S+)       {}", num(q)));
            }
            out.line(format!("witness     {}", report.missing_tree_witness));
            out.line(format!("certified   {}", report.certified));
            out.line(format!("reference   {}", report.isomorphic_to_reference));
            if let Some(f) = &report.finding {
                out.line(format!("finding     {f}"));
            }
            for note in &report.notes {
                out.line(format!("note        {note}"));
            }
        }
    }
    if report.certified {
        Ok(out.into_string())
    } else {
        Err(Failure::Verification("best graph failed re-certification".into(), out.into_string()))
    }
}

fn mode_name(m: SearchMode) -> &'static str {
    match m {
        SearchMode::Exhaustive => "exhaustive",
        SearchMode::Family => "family",
        SearchMode::Hillclimb => "hillclimb",
    }
}

fn cmd_verify(mut out: Output, suite: &str) -> Run {
    let checks = suites::run_suite(suite)?;
    match out.format() {
        Format::Json => out.json(&checks),
        Format::Csv => {
            out.line("name,pass,detail");
            for c in &checks {
                out.line(format!("\"{}\",{},\"{}\"", c.name, c.pass, c.detail.replace('"', "'")));
            }
        }
        Format::Text => {
            for c in &checks {
                let mark = if c.pass { "PASS" } else { "FAIL" };
                if c.detail.is_empty() {
                    out.line(format!("{mark}  {}", c.name));
                } else {
                    out.line(format!("{mark}  {}  {}", c.name, c.detail));
                }
            }
        }
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed == 0 {
        Ok(out.into_string())
    } else {
        Err(Failure::Verification(format!("{failed} of {} checks failed", checks.len()), out.into_string()))
    }
}
