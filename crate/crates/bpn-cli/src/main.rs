//! `bpn`: burnt pancake graph checks, tree construction, verification and sweeps.

mod format;
mod sweep;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bpn::builder::{build_idsts, build_idsts_3};
use bpn::checks;
use bpn::oracle::{max_idsts_bruteforce, upper_bound_kappa4};
use bpn::verifier::verify_family;
use bpn::{ClusterId, Error, Graph, SubgraphView, V};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::format::FamilyJson;
use crate::sweep::{Mode, SweepConfig};

#[derive(Debug)]
pub enum Fail {
    /// A check ran and said no.
    Check(String),
    Usage(String),
    Defect(String),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Check(_) => 1,
            Fail::Usage(_) => 2,
            Fail::Defect(_) => 3,
        }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        match e {
            Error::InvalidArgument(m) => Fail::Usage(m),
            other => Fail::Defect(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "bpn", version, about = "Burnt pancake graphs and internally disjoint Steiner trees")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Structural checks: counts, girth, cross edges, out-neighbours, connectivity.
    Props(PropsArgs),
    /// Build n - 1 trees for three or four terminals.
    Trees(TreesArgs),
    /// Re-check a family JSON file.
    Verify(VerifyArgs),
    /// Build and verify over many terminal sets.
    Sweep(SweepArgs),
    /// Brute-force maximum number of trees for one terminal set.
    Oracle(OracleArgs),
    /// Write the graph, or a union of clusters, as JSON or DOT.
    Export(ExportArgs),
}

#[derive(Args)]
struct Dim {
    /// Dimension n (also accepted as --n).
    #[arg(value_name = "N")]
    pos: Option<usize>,
    #[arg(long = "n", value_name = "N")]
    flag: Option<usize>,
}

impl Dim {
    fn graph(&self) -> Result<Graph, Fail> {
        let n = match (self.pos, self.flag) {
            (Some(a), Some(b)) if a != b => return Err(Fail::Usage(format!("n given twice: {a} and {b}"))),
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(Fail::Usage("missing dimension n".into())),
        };
        Ok(Graph::build(n)?)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Args)]
struct PropsArgs {
    #[command(flatten)]
    dim: Dim,
    /// Vertex pairs sampled for connectivity when n >= 4.
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit the report as JSON instead of text.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TreesArgs {
    #[command(flatten)]
    dim: Dim,
    /// Terminal vertices as comma-separated signed symbols.
    #[arg(long, num_args = 1.., required = true)]
    s: Vec<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    dim: Dim,
    /// Terminal set size, 3 or 4.
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, value_enum, default_value = "sample")]
    mode: Mode,
    /// Sample size in sample mode.
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    fail_fast: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    dim: Dim,
    #[arg(long, num_args = 1.., required = true)]
    s: Vec<String>,
    /// Stop once this many trees are found; defaults to n - 1.
    #[arg(long)]
    target: Option<usize>,
    /// Search-node budget; 0 reports the greedy seed only.
    #[arg(long, default_value_t = 5_000_000)]
    budget: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    dim: Dim,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Restrict to these clusters (repeatable).
    #[arg(long = "cluster", allow_negative_numbers = true)]
    clusters: Vec<ClusterId>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Fail> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Fail::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut o = std::io::stdout().lock();
            o.write_all(text.as_bytes()).and_then(|_| o.flush()).map_err(|e| Fail::Defect(e.to_string()))
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn terminals(g: &Graph, texts: &[String], allowed: &[usize]) -> Result<Vec<V>, Fail> {
    if !allowed.contains(&texts.len()) {
        return Err(Fail::Usage(format!("expected {allowed:?} terminals, got {}", texts.len())));
    }
    let s = texts.iter().map(|t| format::parse_vertex(g, t)).collect::<Result<Vec<V>, Fail>>()?;
    for (i, v) in s.iter().enumerate() {
        if s[..i].contains(v) {
            return Err(Fail::Usage(format!("duplicate terminal {}", texts[i])));
        }
    }
    Ok(s)
}

#[derive(Serialize)]
struct PropsReport {
    n: usize,
    vertices: usize,
    edges: usize,
    ok: bool,
    checks: Vec<CheckJson>,
}

#[derive(Serialize)]
struct CheckJson {
    name: String,
    ok: bool,
    detail: String,
}

fn cmd_props(a: &PropsArgs) -> Result<(), Fail> {
    let g = a.dim.graph()?;
    if a.format == Some(Format::Dot) {
        return Err(Fail::Usage("props has no DOT form".into()));
    }
    let n = g.n();
    let mut reports = vec![
        checks::check_counts(&g),
        checks::check_girth(&g, a.seed),
        checks::check_cross_edges(&g),
        checks::check_out_neighbour_facts(&g),
    ];
    if n >= 3 {
        let sample = (n > 3).then_some(a.count);
        reports.push(checks::check_out_neighbour_flip(&g));
        reports.push(checks::check_cluster_pair_removal(&g, sample, a.seed));
        reports.push(checks::check_cluster_isomorphism(&g));
    }
    reports.push(checks::check_connectivity(&g, (n > 3).then_some(a.count), a.seed));
    let ok = reports.iter().all(|r| r.ok);
    let report = PropsReport {
        n,
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        ok,
        checks: reports.into_iter().map(|r| CheckJson { name: r.name, ok: r.ok, detail: r.detail }).collect(),
    };
    let text = if a.format == Some(Format::Json) {
        json(&report)
    } else {
        let mut t = format!("BP({n}): {} vertices, {} edges\n", report.vertices, report.edges);
        for c in &report.checks {
            t += &format!("{} {}: {}\n", if c.ok { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        t
    };
    emit(&a.out, &text)?;
    if ok {
        Ok(())
    } else {
        Err(Fail::Check("some checks failed".into()))
    }
}

fn cmd_trees(a: &TreesArgs) -> Result<(), Fail> {
    let g = a.dim.graph()?;
    let s = terminals(&g, &a.s, &[3, 4])?;
    let fam = if s.len() == 3 { build_idsts_3(&g, &s)? } else { build_idsts(&g, &s)? };
    let report = verify_family(&g, &s, &fam, g.n() - 1);
    if !report.ok {
        let v: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(Fail::Defect(format!("built family failed verification: {}", v.join("; "))));
    }
    let text = match a.format {
        Format::Json => json(&format::family_to_json(&g, &fam)),
        Format::Dot => format::family_to_dot(&g, &fam),
    };
    emit(&a.out, &text)
}

fn cmd_verify(a: &VerifyArgs) -> Result<(), Fail> {
    let raw = std::fs::read_to_string(&a.file).map_err(|e| Fail::Usage(format!("{}: {e}", a.file.display())))?;
    let f: FamilyJson = serde_json::from_str(&raw).map_err(|e| Fail::Usage(format!("malformed family file: {e}")))?;
    let g = Graph::build(f.n)?;
    let fam = format::family_from_json(&g, &f)?;
    let want = g.n() - 1;
    let report = verify_family(&g, &fam.s, &fam, want);
    if report.ok {
        println!("ok: {} trees verified", fam.trees.len());
        return Ok(());
    }
    let mut lines = Vec::new();
    for v in &report.violations {
        let mut line = format!("{} trees={:?}", v.kind.label(), v.trees);
        if !v.vertices.is_empty() {
            let vs: Vec<String> = v.vertices.iter().map(|&x| format::label(&g, x)).collect();
            line += &format!(" vertices=[{}]", vs.join("; "));
        }
        if !v.edges.is_empty() {
            let es: Vec<String> =
                v.edges.iter().map(|&(x, y)| format!("({})-({})", format::label(&g, x), format::label(&g, y))).collect();
            line += &format!(" edges=[{}]", es.join("; "));
        }
        lines.push(line);
    }
    Err(Fail::Check(format!("verification failed:\n{}", lines.join("\n"))))
}

fn cmd_sweep(a: &SweepArgs) -> Result<(), Fail> {
    let g = a.dim.graph()?;
    let cfg = SweepConfig {
        n: g.n(),
        k: a.k,
        mode: a.mode,
        sample_size: a.count,
        seed: a.seed,
        jobs: a.jobs.unwrap_or_else(rayon::current_num_threads),
        fail_fast: a.fail_fast,
    };
    let start = Instant::now();
    let summary = sweep::run(&cfg, &g)?;
    // wall time stays off stdout so the JSON is reproducible
    eprintln!(
        "{} subsets, {} verified, {} failed, repair rate {:.4}, wall time {:.2}s",
        summary.subsets,
        summary.verified,
        summary.failed,
        summary.repair_rate,
        start.elapsed().as_secs_f64()
    );
    emit(&a.out, &json(&summary))?;
    if summary.failed == 0 {
        Ok(())
    } else {
        Err(Fail::Check(format!("failing sets: {:?}", summary.failures)))
    }
}

#[derive(Serialize)]
struct OracleJson {
    n: usize,
    s: Vec<Vec<i32>>,
    target: usize,
    budget: u64,
    upper_bound: usize,
    max_idsts_found: usize,
    exhausted: bool,
    certificate: FamilyJson,
}

fn cmd_oracle(a: &OracleArgs) -> Result<(), Fail> {
    let g = a.dim.graph()?;
    let s = terminals(&g, &a.s, &[2, 3, 4, 5, 6])?;
    let bound = upper_bound_kappa4(&g);
    let target = a.target.unwrap_or(bound);
    if target == 0 {
        return Err(Fail::Usage("--target must be positive".into()));
    }
    let r = max_idsts_bruteforce(&g, &s, target, a.budget);
    let out = OracleJson {
        n: g.n(),
        s: r.s.iter().map(|&v| g.perm(v).symbols().to_vec()).collect(),
        target,
        budget: a.budget,
        upper_bound: bound,
        max_idsts_found: r.max_idsts_found,
        exhausted: r.exhausted,
        certificate: format::family_to_json(&g, &r.certificate),
    };
    emit(&a.out, &json(&out))
}

fn cmd_export(a: &ExportArgs) -> Result<(), Fail> {
    let g = a.dim.graph()?;
    for &c in &a.clusters {
        if c == 0 || c.unsigned_abs() as usize > g.n() {
            return Err(Fail::Usage(format!("no cluster {c} in BP({})", g.n())));
        }
    }
    let restricted = !a.clusters.is_empty();
    let h = if restricted { SubgraphView::clusters(&g, &a.clusters) } else { SubgraphView::full(&g) };
    let text = match a.format {
        Format::Json => json(&format::view_to_json(&h, restricted)),
        Format::Dot => format::view_to_dot(&h),
    };
    emit(&a.out, &text)
}

fn looks_like_vertex(arg: &str) -> bool {
    let body = arg.strip_prefix('-').unwrap_or(arg);
    body.starts_with(|c: char| c.is_ascii_digit())
        && arg.split(',').all(|p| p.trim().trim_start_matches('-').chars().all(|c| c.is_ascii_digit()) && !p.is_empty())
}

/// `--s -1,-2,3` would read as a short flag; rewrite each value after `--s`
/// into `--s=value` form before clap sees it.
fn attach_vertex_values(args: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut out = Vec::new();
    // Some(count of values taken) while inside an --s run
    let mut run: Option<usize> = None;
    for a in args {
        if a == "--s" {
            if run == Some(0) {
                out.push("--s".into());
            }
            run = Some(0);
            continue;
        }
        if let Some(k) = run {
            if looks_like_vertex(&a) || !a.starts_with('-') {
                out.push(format!("--s={a}"));
                run = Some(k + 1);
                continue;
            }
            if k == 0 {
                out.push("--s".into());
            }
        }
        run = None;
        out.push(a);
    }
    if run == Some(0) {
        out.push("--s".into());
    }
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(attach_vertex_values(std::env::args())) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match &cli.cmd {
        Cmd::Props(a) => cmd_props(a),
        Cmd::Trees(a) => cmd_trees(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::Oracle(a) => cmd_oracle(a),
        Cmd::Export(a) => cmd_export(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Fail::Check(m) | Fail::Usage(m) | Fail::Defect(m)) = &f;
            eprintln!("bpn: {m}");
            ExitCode::from(f.code())
        }
    }
}
