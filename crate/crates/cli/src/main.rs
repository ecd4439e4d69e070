//! `syzlab`: Koszul cohomology experiments on the built-in plane curve fixtures.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use syzlab_core::arith::FieldCtx;
use syzlab_core::fixtures::{lookup, registry, FixtureRecord};
use syzlab_core::harness::{
    canonical_plus_collinear, case_table, certify_gonality, collinear_triples, gl_check, glue_inclusion_check, green_check, hrv_consistency,
    koszul_clifford, pluricanonical_check, points_in_pencil_fiber, stability_audit, Case, CurveProfile, SheafProfile, Status, Verdict,
};
use syzlab_core::koszul::{
    betti_table, duality_mismatches, koszul_dim, multi_prime, ConsensusReport, KoszulOptions, KoszulReport, KoszulSetup, DEFAULT_BUDGET,
};
use syzlab_core::plane::{canonical_bundle, find_rational_points, PlaneCurve};
use syzlab_core::{Error, Result};

const EXIT_COMPUTATION: u8 = 1;
const EXIT_VERDICT: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "syzlab", version, about = "Exact Koszul cohomology of nodal plane curves over prime fields")]
struct Cli {
    /// Working prime.
    #[arg(long, global = true, default_value_t = 10007)]
    prime: u32,
    /// Comma-separated primes for a consensus run.
    #[arg(long, global = true, value_delimiter = ',')]
    primes: Vec<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Size of the worker pool.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON report to PATH, or to stdout with `-`.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<String>,
    /// Write Betti cells as CSV (p,q,dim).
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Assemble matrices beyond the size budget.
    #[arg(long, global = true)]
    force: bool,
    /// Zero all timings, for byte-identical reports.
    #[arg(long, global = true)]
    no_timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the built-in fixtures, optionally writing them as fixture files.
    Fixtures {
        #[arg(long, value_name = "DIR")]
        save: Option<PathBuf>,
    },
    /// Canonical Koszul cells or the full canonical Betti table.
    Analyze(AnalyzeArgs),
    /// Green's conjecture against a Clifford index.
    Green {
        fixture: String,
        #[arg(long)]
        cliff: Option<usize>,
    },
    /// Green-Lazarsfeld on K + x + y + z for collinear triples.
    Gl {
        fixture: String,
        #[arg(long, default_value_t = 3)]
        triples: usize,
    },
    /// Certified gonality interval.
    Gonality {
        fixture: String,
        #[arg(long, default_value_t = 2000)]
        effort: usize,
    },
    /// Inclusion chain through the partial normalization keeping a node.
    Glue {
        fixture: String,
        #[arg(long, default_value_t = 0)]
        node: usize,
        #[arg(long)]
        p: Option<usize>,
    },
    /// Pluricanonical syzygies at genus 2k - 1.
    Pluri {
        fixture: String,
        #[arg(long, default_value_t = 2)]
        power: usize,
    },
    /// Slope audit of rank-one sheaves on X ∪ E.
    Audit {
        #[arg(long)]
        k: i64,
        #[arg(long)]
        case: Option<String>,
        #[arg(long = "deg-fe", allow_negative_numbers = true)]
        deg_fe: Option<i64>,
    },
    /// Timings of middle canonical cells.
    Bench {
        /// Include the genus 11 fixture.
        #[arg(long)]
        large: bool,
    },
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    fixture: String,
    /// Cells as p,q; repeatable. Defaults to the full table.
    #[arg(long, value_name = "P,Q")]
    pq: Vec<String>,
    /// Maximum sparse entries per differential.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = Policy::Refuse)]
    budget_exceeded_policy: Policy,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Policy {
    Refuse,
    Force,
}

#[derive(Serialize, Default)]
struct Cell {
    p: usize,
    q: u32,
    dim: u64,
    rank_in: u64,
    rank_out: u64,
    rows: u64,
    cols: u64,
    ms: u64,
}

impl From<&KoszulReport> for Cell {
    fn from(r: &KoszulReport) -> Self {
        Cell { p: r.p, q: r.q, dim: r.dim, rank_in: r.rank_in, rank_out: r.rank_out, rows: r.rows, cols: r.cols, ms: r.ms }
    }
}

#[derive(Serialize, Default)]
struct RunReport {
    command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fixture: Option<String>,
    prime: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    bundle: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    cells: Vec<Cell>,
    #[serde(skip_serializing_if = "Option::is_none")]
    consensus: Option<ConsensusReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    details: Option<Value>,
    ms: u64,
    exit_status: u8,
}

struct Ctx<'a> {
    cli: &'a Cli,
    opts: KoszulOptions,
    out: Vec<String>,
    report: RunReport,
}

impl Ctx<'_> {
    fn say(&mut self, line: String) {
        self.out.push(line);
    }
}

fn resolve(name: &str) -> Result<FixtureRecord> {
    let path = Path::new(name);
    if path.is_file() {
        return FixtureRecord::load(path);
    }
    lookup(name).cloned()
}

/// The fixture at the working prime. Marked points only survive at the
/// record's own prime; elsewhere fresh ones are scanned.
fn curve_of(record: &FixtureRecord, prime: u32, seed: u64) -> Result<PlaneCurve> {
    if prime == record.prime {
        return record.curve();
    }
    let base = record.curve_at(FieldCtx::new(prime as u64)?)?;
    let pts = find_rational_points(&base, record.marked.len(), seed).points;
    base.with_marked(&pts)
}

fn profile_of(record: &FixtureRecord, curve: &PlaneCurve, ctx: &Ctx) -> Result<CurveProfile> {
    let cert = certify_gonality(curve, 2000, &ctx.opts)?;
    Ok(CurveProfile::declared(&record.declared).with_certificate(cert))
}

fn parse_pq(s: &str) -> Result<(usize, u32)> {
    let bad = || Error::Precondition(format!("--pq expects p,q, got {s:?}"));
    let (p, q) = s.split_once(',').ok_or_else(bad)?;
    Ok((p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?))
}

fn show_verdict(ctx: &mut Ctx, v: &Verdict) {
    let cells: Vec<String> = v.computed.iter().map(|o| format!("{} = {}", o.cell, o.dim)).collect();
    ctx.say(format!("{} [{}] {}: {}", v.claim, v.fixture, status_word(v.status), cells.join(", ")));
    for c in &v.certificates {
        ctx.say(format!("  {c}"));
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Inconclusive => "inconclusive",
    }
}

fn analyze(ctx: &mut Ctx, a: &AnalyzeArgs) -> Result<()> {
    let record = resolve(&a.fixture)?;
    ctx.opts.budget = a.budget;
    ctx.opts.force |= a.budget_exceeded_policy == Policy::Force;
    let g = record.declared.genus;
    let cells: Vec<(usize, u32)> = if a.pq.is_empty() {
        (0..=3).flat_map(|q| (0..=g.saturating_sub(2)).map(move |p| (p, q))).collect()
    } else {
        a.pq.iter().map(|s| parse_pq(s)).collect::<Result<_>>()?
    };
    ctx.report.fixture = Some(record.name.clone());
    if !ctx.cli.primes.is_empty() {
        let rep = multi_prime(&record, |c| canonical_bundle(c, &[]), &cells, &ctx.cli.primes, &ctx.opts)?;
        for s in &rep.skipped {
            ctx.say(format!("skipped p = {}: {}", s.prime, s.reason));
        }
        for c in &rep.cells {
            let per: Vec<String> = c.dims.iter().map(|(p, d)| format!("{d} (p={p})")).collect();
            let flag = if c.stable {
                "stable"
            } else if c.agree {
                "agree"
            } else {
                "DISAGREE"
            };
            ctx.say(format!("K_{{{},{}}} = {}  [{}] {flag}", c.p, c.q, c.consensus, per.join(", ")));
        }
        ctx.report.bundle = Some(rep.bundle.clone());
        ctx.report.cells = rep.reports.iter().filter(|r| r.prime == rep.primes[0]).map(Cell::from).collect();
        ctx.report.consensus = Some(rep);
        return Ok(());
    }
    let curve = curve_of(&record, ctx.cli.prime, ctx.cli.seed)?;
    let k = canonical_bundle(&curve, &[])?;
    let max_q = cells.iter().map(|c| c.1).max().unwrap_or(0);
    let setup = KoszulSetup::new(&curve, &k, max_q, ctx.opts.target)?;
    ctx.report.bundle = Some(k.to_string());
    let reports: Vec<KoszulReport> = if a.pq.is_empty() {
        let ps: Vec<usize> = (0..=g.saturating_sub(2)).collect();
        let qs: Vec<u32> = (0..=max_q).collect();
        let table = betti_table(&setup, &ps, &qs, &ctx.opts)?;
        ctx.say(format!("canonical Betti table of {} (g = {g}, p = {})", record.name, ctx.cli.prime));
        ctx.say(format!("q\\p {}", ps.iter().map(|p| format!("{p:>5}")).collect::<String>()));
        for (q, row) in qs.iter().zip(&table.grid) {
            ctx.say(format!("{q:>3} {}", row.iter().map(|d| format!("{d:>5}")).collect::<String>()));
        }
        let mism = duality_mismatches(&table, g);
        ctx.say(if mism.is_empty() { "duality K_{p,1} = K_{g-2-p,2}: holds".into() } else { format!("duality mismatches: {mism:?}") });
        table.cells
    } else {
        cells.iter().map(|&(p, q)| koszul_dim(&setup, p, q, &ctx.opts)).collect::<Result<_>>()?
    };
    for r in &reports {
        if !a.pq.is_empty() {
            ctx.say(format!(
                "K_{{{},{}}}({}) = {}  (ranks in {} out {}, {}x{}, {} ms)",
                r.p, r.q, r.bundle, r.dim, r.rank_in, r.rank_out, r.rows, r.cols, r.ms
            ));
        }
    }
    if let Some(path) = &ctx.cli.csv {
        let mut s = String::from("p,q,dim\n");
        for r in &reports {
            s.push_str(&format!("{},{},{}\n", r.p, r.q, r.dim));
        }
        std::fs::write(path, s).map_err(|e| Error::Precondition(format!("cannot write {}: {e}", path.display())))?;
    }
    ctx.report.cells = reports.iter().map(Cell::from).collect();
    Ok(())
}

fn run(ctx: &mut Ctx) -> Result<()> {
    let cli = ctx.cli;
    match &cli.command {
        Command::Fixtures { save } => {
            let mut rows = Vec::new();
            for r in registry() {
                let d = &r.declared;
                ctx.say(format!(
                    "{:<3} degree {} nodes {} genus {:>2} gonality {} clifford {} seed {}  {}",
                    r.name,
                    r.degree,
                    r.nodes.len(),
                    d.genus,
                    d.gonality.map_or("-".into(), |x| x.to_string()),
                    d.clifford.map_or("-".into(), |x| x.to_string()),
                    r.seed,
                    r.provenance
                ));
                if let Some(dir) = save {
                    std::fs::create_dir_all(dir).map_err(|e| Error::Precondition(format!("cannot create {}: {e}", dir.display())))?;
                    r.save(&dir.join(format!("{}.fixture", r.name)))?;
                }
                rows.push(
                    json!({"name": r.name, "degree": r.degree, "nodes": r.nodes.len(), "declared": d, "seed": r.seed, "provenance": r.provenance}),
                );
            }
            ctx.report.details = Some(Value::Array(rows));
        }
        Command::Analyze(a) => analyze(ctx, a)?,
        Command::Green { fixture, cliff } => {
            let record = resolve(fixture)?;
            let curve = curve_of(&record, cli.prime, cli.seed)?;
            let mut profile = profile_of(&record, &curve, ctx)?;
            if cliff.is_some() {
                profile.clifford = *cliff;
            }
            profile.check()?;
            let v = green_check(&curve, &profile, &ctx.opts)?.with_fixture(&record.name);
            show_verdict(ctx, &v);
            if profile.clifford.is_some() {
                let scan = koszul_clifford(&curve, &ctx.opts)?;
                ctx.say(format!("  Koszul Clifford index {}", scan.clifford));
                ctx.report.details = Some(json!(scan));
            }
            ctx.report.fixture = Some(record.name.clone());
            ctx.report.bundle = Some(v.bundle.clone());
            ctx.report.verdicts.push(v);
        }
        Command::Gl { fixture, triples } => {
            let record = resolve(fixture)?;
            let curve = curve_of(&record, cli.prime, cli.seed)?;
            let profile = profile_of(&record, &curve, ctx)?;
            let (gon, _) = profile.gonality_basis().ok_or_else(|| Error::Precondition("no gonality available".into()))?;
            let pencils: Vec<_> = profile.certificate.iter().flat_map(|c| c.pencils.iter()).filter(|w| w.degree == gon).cloned().collect();
            let mut fiber_notes = Vec::new();
            for (line, xyz) in collinear_triples(&curve, *triples, cli.seed) {
                let m = canonical_plus_collinear(&curve, &line, xyz)?;
                let in_fiber = points_in_pencil_fiber(&m.curve, &pencils, &m.indices)?;
                let mut v = gl_check(&m.curve, &m.bundle, &profile, &ctx.opts)?.with_fixture(&record.name);
                v.certificates.push(format!(
                    "x + y + z = {:?}: {} of the {} known pencils of degree {gon} (partial check)",
                    m.indices,
                    if in_fiber { "in a fiber" } else { "in no fiber" },
                    pencils.len()
                ));
                fiber_notes.push(in_fiber);
                show_verdict(ctx, &v);
                ctx.report.verdicts.push(v);
            }
            if ctx.report.verdicts.is_empty() {
                return Err(Error::SearchExhausted("no rational line sections avoiding the nodes".into()));
            }
            ctx.report.fixture = Some(record.name.clone());
            ctx.report.details = Some(json!({"triples_in_pencil_fibers": fiber_notes}));
        }
        Command::Gonality { fixture, effort } => {
            let record = resolve(fixture)?;
            let curve = curve_of(&record, cli.prime, cli.seed)?;
            let cert = certify_gonality(&curve, *effort, &ctx.opts)?;
            ctx.say(format!("{}: {} ({:?} below, {})", record.name, cert.summary(), cert.lower, upper_word(&cert.upper)));
            ctx.say(format!(
                "  {} pencils among {} candidates{}",
                cert.pencils.len(),
                cert.searched,
                if cert.search_exhausted { "" } else { ", search truncated" }
            ));
            for n in &cert.notes {
                ctx.say(format!("  {n}"));
            }
            if curve.genus() % 2 == 1 && curve.genus() >= 3 && cert.lo >= 3 {
                let v = hrv_consistency(&curve, &cert, &ctx.opts)?.with_fixture(&record.name);
                show_verdict(ctx, &v);
                ctx.report.verdicts.push(v);
            }
            ctx.report.fixture = Some(record.name.clone());
            ctx.report.details = Some(json!(cert));
        }
        Command::Glue { fixture, node, p } => {
            let record = resolve(fixture)?;
            let curve = curve_of(&record, cli.prime, cli.seed)?;
            let chain = glue_inclusion_check(&curve, *node, *p, cli.seed, &ctx.opts)?;
            ctx.say(format!(
                "{}: K_{{{p},1}}: X {} <= X(x0+y0) {} <= Y {}  ({})",
                record.name,
                chain.a,
                chain.b,
                chain.c,
                if chain.monotone() { "monotone" } else { "NOT monotone" },
                p = chain.p
            ));
            let v = chain.verdict().with_fixture(&record.name);
            ctx.report.fixture = Some(record.name.clone());
            ctx.report.verdicts.push(v);
            ctx.report.details = Some(json!(chain));
        }
        Command::Pluri { fixture, power } => {
            let record = resolve(fixture)?;
            let curve = curve_of(&record, cli.prime, cli.seed)?;
            let cert = certify_gonality(&curve, 2000, &ctx.opts)?;
            let v = pluricanonical_check(&curve, *power, &cert, &ctx.opts)?.with_fixture(&record.name);
            show_verdict(ctx, &v);
            ctx.report.fixture = Some(record.name.clone());
            ctx.report.bundle = Some(v.bundle.clone());
            ctx.report.verdicts.push(v);
        }
        Command::Audit { k, case, deg_fe } => match case {
            Some(case) => {
                let case = Case::parse(case)?;
                let deg_fe = match (case, deg_fe) {
                    (_, Some(d)) => *d,
                    (Case::Iv, None) => 0,
                    (_, None) => return Err(Error::Precondition("--deg-fe is required for cases i to iii".into())),
                };
                let a = stability_audit(&SheafProfile { k: *k, case, deg_fe, deg_fx: None })?;
                ctx.say(format!(
                    "k = {} case {}: {}  (μ(F) = {}; {})",
                    a.k,
                    a.case,
                    if a.admissible { "admissible" } else { "inadmissible" },
                    a.mu_f,
                    a.reason
                ));
                if let Some(c) = a.conclusion {
                    ctx.say(format!("  forces {c:?}"));
                }
                ctx.report.details = Some(json!(a));
            }
            None => {
                let table = case_table(*k)?;
                for row in &table {
                    let adm: Vec<String> = row.admissible.iter().map(|(fe, fx, c)| format!("deg F_E = {fe}, deg F_X = {fx}: {c:?}")).collect();
                    ctx.say(format!(
                        "case {}: deg F_E ≤ {}, deg F_X ≤ {}; {}",
                        row.case,
                        row.fe_bound.map_or("-".into(), |b| b.to_string()),
                        row.fx_bound.map_or("-".into(), |b| b.to_string()),
                        if adm.is_empty() { "none admissible".into() } else { adm.join("; ") }
                    ));
                }
                ctx.report.details = Some(json!(table));
            }
        },
        Command::Bench { large } => {
            let mut names = vec!["F5", "F6"];
            if *large {
                names.push("F7");
            }
            let mut rows = Vec::new();
            for name in names {
                let record = lookup(name)?;
                let curve = curve_of(record, cli.prime, cli.seed)?;
                let k = canonical_bundle(&curve, &[])?;
                let start = Instant::now();
                let setup = KoszulSetup::new(&curve, &k, 2, ctx.opts.target)?;
                let setup_ms = start.elapsed().as_millis() as u64;
                let mid = (record.declared.genus - 1) / 2;
                for (p, q) in [(mid, 1), (mid - 1, 2)] {
                    let r = koszul_dim(&setup, p, q, &ctx.opts)?;
                    ctx.say(format!("{name} K_{{{p},{q}}} = {}  {}x{} and {}x{}  {} ms", r.dim, r.rows, r.cols, r.dims[1], r.dims[0], r.ms));
                    ctx.report.cells.push(Cell::from(&r));
                    rows.push(json!({"fixture": name, "p": p, "q": q, "dim": r.dim, "setup_ms": setup_ms, "ms": r.ms}));
                }
            }
            ctx.report.details = Some(Value::Array(rows));
        }
    }
    Ok(())
}

/// Argument values that clap cannot check on its own.
fn validate(cli: &Cli) -> Result<()> {
    let fixture = match &cli.command {
        Command::Analyze(a) => {
            for s in &a.pq {
                parse_pq(s)?;
            }
            Some(&a.fixture)
        }
        Command::Green { fixture, .. }
        | Command::Gl { fixture, .. }
        | Command::Gonality { fixture, .. }
        | Command::Glue { fixture, .. }
        | Command::Pluri { fixture, .. } => Some(fixture),
        Command::Audit { case: Some(c), .. } => {
            Case::parse(c)?;
            None
        }
        _ => None,
    };
    if let Some(f) = fixture {
        if !Path::new(f).is_file() {
            lookup(f)?;
        }
    }
    if !cli.primes.is_empty() && !matches!(cli.command, Command::Analyze(_)) {
        return Err(Error::Precondition("--primes applies to analyze only".into()));
    }
    Ok(())
}

fn upper_word(u: &syzlab_core::harness::UpperBound) -> String {
    use syzlab_core::harness::UpperBound::*;
    match u {
        BrillNoether => "Brill-Noether existence above".into(),
        Witness(w) => format!("pencil {} of degree {} above", w.bundle, w.degree),
        Hrv { k, dim } => format!("K_{{{k},1}} = {dim} forces a pencil above"),
    }
}

fn zero_timings(v: &mut Value) {
    match v {
        Value::Object(m) => {
            for (k, x) in m.iter_mut() {
                if k == "ms" || k.ends_with("_ms") {
                    *x = json!(0);
                } else {
                    zero_timings(x);
                }
            }
        }
        Value::Array(a) => a.iter_mut().for_each(zero_timings),
        _ => {}
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let opts = KoszulOptions { force: cli.force, seed: cli.seed, ..Default::default() };
    let mut ctx = Ctx { cli: &cli, opts, out: Vec::new(), report: RunReport { command: argv[1..].to_vec(), prime: cli.prime, ..Default::default() } };
    if let Err(e) = validate(&cli) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    let start = Instant::now();
    let outcome = run(&mut ctx);
    ctx.report.ms = start.elapsed().as_millis() as u64;
    let code = match &outcome {
        Err(_) => EXIT_COMPUTATION,
        Ok(()) if ctx.report.verdicts.iter().all(|v| v.status == Status::Pass) => 0,
        Ok(()) => EXIT_VERDICT,
    };
    ctx.report.exit_status = code;
    let to_stdout = cli.json.as_deref() == Some("-");
    if !to_stdout {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        for line in &ctx.out {
            let _ = writeln!(lock, "{line}");
        }
    }
    if let Err(e) = &outcome {
        eprintln!("error: {e}");
    }
    if let Some(target) = &cli.json {
        let mut value = serde_json::to_value(&ctx.report).expect("report serializes");
        if let Err(e) = &outcome {
            value["error"] = json!(e.to_string());
        }
        if cli.no_timings {
            zero_timings(&mut value);
        }
        let text = serde_json::to_string_pretty(&value).expect("report serializes");
        if to_stdout {
            println!("{text}");
        } else if let Err(e) = std::fs::write(target, text + "\n") {
            eprintln!("error: cannot write {target}: {e}");
            return ExitCode::from(EXIT_COMPUTATION);
        }
    }
    ExitCode::from(code)
}
