//! `tld` — resolve, validate, generate, reduce, and benchmark temporal
//! liquid-democracy elections.
//!
//! Exit codes: 0 when every delegating voter was routed, 2 when some stayed
//! unresolved (lost votes), 1 on any error. `check` exits 0 exactly when the
//! solution is structurally valid.

use std::fmt::Write as _;
use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tld_cli::docs::{parse_input, GraphDoc, ReduceMeta, SolutionDoc, SteinerDoc};
use tld_core::{
    check_solution, compile, from_restless_path, from_tmst, is_confluent, oracle_static_confluent,
    oracle_tc_confluent, oracle_tc_paths, random_election, snapshot, solve_confluent,
    solve_exact_tc_confluent_with_cap, solve_tc_retrospective, solve_tc_walks, to_steiner,
    DeltaMode, GenParams, RuleResult, TLDGraph, Violation, DEFAULT_DELEGATOR_CAP,
};

#[derive(Parser)]
#[command(name = "tld", version, about = "Delegation resolution for temporal liquid-democracy elections")]
struct RunConfig {
    #[command(subcommand)]
    command: Command,
    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Resolve delegations with a rule; writes a solution document.
    Solve(SolveArgs),
    /// Validate a solution document against its election.
    Check(CheckArgs),
    /// Run a brute-force reference solver.
    Oracle(OracleArgs),
    /// Draw a seeded random deliberation record.
    Gen(GenCliArgs),
    /// Translate a source instance into an election graph (or dump the
    /// connection instance behind the exact rule).
    Reduce(ReduceArgs),
    /// Run a rule over a generated family and report CSV timings.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleName {
    /// Optimal confluent tree, time ignored.
    Confluent,
    /// Greedy per-voter foremost routing; optimal under full-history trust.
    TcRetro,
    /// Event-unique walk routing under a common trust horizon.
    TcWalks,
    /// Exact optimal time-conscious confluent tree (exponential in |D|).
    Exact,
    /// Brute-force confluent tree search.
    OracleTree,
    /// Brute-force per-voter path search.
    OraclePaths,
}

impl RuleName {
    fn label(self) -> &'static str {
        match self {
            RuleName::Confluent => "confluent",
            RuleName::TcRetro => "tc-retro",
            RuleName::TcWalks => "tc-walks",
            RuleName::Exact => "exact",
            RuleName::OracleTree => "oracle-tree",
            RuleName::OraclePaths => "oracle-paths",
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Deliberation record or graph document; `-` reads standard input.
    input: PathBuf,
    #[arg(long, value_enum)]
    rule: RuleName,
    /// Common trust horizon; required by tc-walks, optional cross-check for
    /// oracle-paths.
    #[arg(long)]
    delta: Option<u32>,
    /// Most delegating voters the exact rule will accept.
    #[arg(long, default_value_t = DEFAULT_DELEGATOR_CAP)]
    cap: usize,
    /// Forget history: solve only the edges live at instant T.
    #[arg(long, value_name = "T")]
    snapshot_at: Option<u32>,
    /// Output path; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Deliberation record or graph document.
    input: PathBuf,
    /// Solution document to validate.
    solution: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleMode {
    /// Exhaustive confluent (one hop per voter) tree search.
    Tree,
    /// Per-voter best time-conscious path.
    Paths,
    /// Per-voter best event-unique walk; requires --delta.
    Walks,
    /// Exhaustive static spanning-tree search, time ignored.
    Static,
}

#[derive(Args)]
struct OracleArgs {
    input: PathBuf,
    #[arg(long, value_enum)]
    mode: OracleMode,
    /// Common trust horizon (required by walks mode).
    #[arg(long)]
    delta: Option<u32>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenKnobs {
    /// Number of voters.
    #[arg(short, default_value_t = 6)]
    n: usize,
    /// Number of deliberation rounds.
    #[arg(short = 'L', long, default_value_t = 5)]
    lifespan: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.3)]
    casting_prob: f64,
    #[arg(long, default_value_t = 0.15)]
    abstain_prob: f64,
    /// Chance each other voter appears in an approval.
    #[arg(long, default_value_t = 0.5)]
    approval_density: f64,
    #[arg(long, default_value_t = 2)]
    max_groups: usize,
    #[arg(long, default_value_t = 4)]
    score_max: u64,
    /// How trust horizons are drawn.
    #[arg(long, value_enum, default_value_t = DeltaModeName::Retrospective)]
    delta_mode: DeltaModeName,
    /// Horizon value for --delta-mode constant.
    #[arg(long, default_value_t = 1)]
    horizon: u32,
    /// Per-round chance a delegator re-rolls who they approve.
    #[arg(long, default_value_t = 0.25)]
    mind_change_rate: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DeltaModeName {
    /// Trust all the way back: δ = t − 1.
    Retrospective,
    /// min(--horizon, t − 1) everywhere.
    Constant,
    /// Uniform in [0, t − 1] per approval.
    Random,
}

impl GenKnobs {
    fn to_params(&self) -> GenParams {
        GenParams {
            n: self.n,
            lifespan: self.lifespan,
            casting_prob: self.casting_prob,
            abstain_prob: self.abstain_prob,
            approval_density: self.approval_density,
            max_groups: self.max_groups,
            score_max: self.score_max,
            delta_mode: match self.delta_mode {
                DeltaModeName::Retrospective => DeltaMode::Retrospective,
                DeltaModeName::Constant => DeltaMode::Constant(self.horizon),
                DeltaModeName::Random => DeltaMode::Random,
            },
            mind_change_rate: self.mind_change_rate,
            seed: self.seed,
        }
    }
}

#[derive(Args)]
struct GenCliArgs {
    #[command(flatten)]
    knobs: GenKnobs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReduceFrom {
    /// Dump the connection instance the exact rule solves internally.
    Steiner,
    /// Spanning-arborescence instance in paired-edge normal form.
    Tmst,
    /// Waiting-bounded path instance.
    Restless,
}

#[derive(Args)]
struct ReduceArgs {
    input: PathBuf,
    #[arg(long, value_enum)]
    from: ReduceFrom,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    knobs: GenKnobs,
    #[arg(long, value_enum)]
    rule: RuleName,
    /// Common trust horizon (tc-walks only).
    #[arg(long)]
    delta: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_DELEGATOR_CAP)]
    cap: usize,
    /// Instances to run; instance i uses seed --seed + i.
    #[arg(long, default_value_t = 20)]
    count: usize,
    /// CSV output path; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) => {
            // keep exit 2 reserved for partial resolutions: usage errors are
            // plain errors, --help and --version stay successes
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cfg) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cfg: &RunConfig) -> Result<u8> {
    match &cfg.command {
        Command::Solve(args) => cmd_solve(cfg, args),
        Command::Check(args) => cmd_check(args),
        Command::Oracle(args) => cmd_oracle(cfg, args),
        Command::Gen(args) => cmd_gen(cfg, args),
        Command::Reduce(args) => cmd_reduce(cfg, args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).context("reading standard input")?;
        return Ok(text);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> Result<TLDGraph> {
    parse_input(&read_input(path)?)
        .and_then(|doc| doc.into_graph())
        .with_context(|| format!("loading {}", path.display()))
}

fn emit_json<T: Serialize>(doc: &T, output: Option<&Path>, pretty: bool) -> Result<()> {
    let mut text = if pretty {
        serde_json::to_string_pretty(doc)?
    } else {
        serde_json::to_string(doc)?
    };
    text.push('\n');
    emit_text(&text, output)
}

fn emit_text(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_rule(rule: RuleName, g: &TLDGraph, delta: Option<u32>, cap: usize) -> Result<RuleResult> {
    let result = match rule {
        RuleName::Confluent => solve_confluent(g),
        RuleName::TcRetro => solve_tc_retrospective(g),
        RuleName::TcWalks => {
            let d = delta.context("--rule tc-walks needs --delta")?;
            solve_tc_walks(g, d)?
        }
        RuleName::Exact => solve_exact_tc_confluent_with_cap(g, cap)?,
        RuleName::OracleTree => oracle_tc_confluent(g)?,
        RuleName::OraclePaths => oracle_tc_paths(g, false, delta)?,
    };
    Ok(result)
}

fn resolution_exit(result: &RuleResult) -> u8 {
    if result.fully_resolved() {
        0
    } else {
        2
    }
}

fn cmd_solve(cfg: &RunConfig, args: &SolveArgs) -> Result<u8> {
    let mut g = load_graph(&args.input)?;
    if let Some(t) = args.snapshot_at {
        if t < 1 || t > g.lifespan() {
            bail!("--snapshot-at {t} outside the lifespan 1..={}", g.lifespan());
        }
        g = snapshot(&g, t);
    }
    let result = run_rule(args.rule, &g, args.delta, args.cap)?;
    let doc = SolutionDoc::from_result(&g, args.rule.label(), &result);
    emit_json(&doc, args.output.as_deref(), cfg.pretty)?;
    Ok(resolution_exit(&result))
}

fn cmd_check(args: &CheckArgs) -> Result<u8> {
    let g = load_graph(&args.input)?;
    let doc: SolutionDoc = serde_json::from_str(&read_input(&args.solution)?)
        .with_context(|| format!("loading {}", args.solution.display()))?;
    let (solution, unresolved) = doc.resolve(&g)?;

    let report = check_solution(&g, &solution, &unresolved);
    let verdicts = [
        if report.is_valid() { "valid" } else { "invalid" },
        if is_confluent(&g, &solution) { "confluent" } else { "not confluent" },
        if report.is_time_conscious() { "time-conscious" } else { "not time-conscious" },
    ];
    println!("{}", verdicts.join(", "));
    for violation in &report.violations {
        println!("violation: {}", describe(&g, violation));
    }
    Ok(u8::from(!report.is_valid()))
}

fn describe(g: &TLDGraph, violation: &Violation) -> String {
    let name = |v: usize| g.name(v).to_owned();
    match violation {
        Violation::MissingJourney { voter } => {
            format!("delegating voter `{}` has no journey and no unresolved mark", name(*voter))
        }
        Violation::ForeignStart { voter } => {
            format!("`{}` is not a delegating voter yet owns a journey", name(*voter))
        }
        Violation::DoesNotReachSink { voter } => {
            format!("journey of `{}` does not end in a cast ballot", name(*voter))
        }
        Violation::EndsAtAbstainer { voter } => {
            format!("journey of `{}` hands the ballot to an abstainer", name(*voter))
        }
        Violation::HorizonViolation { voter } => {
            format!("journey of `{}` steps further back than its trust horizon", name(*voter))
        }
        Violation::RepeatedVertex { voter } => {
            format!("journey of `{}` revisits a voter but claims to be a path", name(*voter))
        }
        Violation::Malformed { voter, reason } => {
            format!("journey of `{}` is malformed: {reason}", name(*voter))
        }
    }
}

fn cmd_oracle(cfg: &RunConfig, args: &OracleArgs) -> Result<u8> {
    let g = load_graph(&args.input)?;
    let (label, result) = match args.mode {
        OracleMode::Tree => ("oracle-tree", oracle_tc_confluent(&g)?),
        OracleMode::Paths => ("oracle-paths", oracle_tc_paths(&g, false, args.delta)?),
        OracleMode::Walks => {
            let d = args.delta.context("--mode walks needs --delta")?;
            ("oracle-walks", oracle_tc_paths(&g, true, Some(d))?)
        }
        OracleMode::Static => ("oracle-static", oracle_static_confluent(&g)?),
    };
    let doc = SolutionDoc::from_result(&g, label, &result);
    emit_json(&doc, args.output.as_deref(), cfg.pretty)?;
    Ok(resolution_exit(&result))
}

fn cmd_gen(cfg: &RunConfig, args: &GenCliArgs) -> Result<u8> {
    let profile = random_election(&args.knobs.to_params())?;
    let doc = tld_cli::docs::ElectionDoc::from_profile(&profile);
    emit_json(&doc, args.output.as_deref(), cfg.pretty)?;
    Ok(0)
}

fn cmd_reduce(cfg: &RunConfig, args: &ReduceArgs) -> Result<u8> {
    let text = read_input(&args.input)?;
    match args.from {
        ReduceFrom::Steiner => {
            let g = parse_input(&text)?.into_graph()?;
            let doc = SteinerDoc::from_instance(&to_steiner(&g), &g);
            emit_json(&doc, args.output.as_deref(), cfg.pretty)?;
        }
        ReduceFrom::Tmst => {
            let doc: tld_cli::docs::TmstDoc =
                serde_json::from_str(&text).context("malformed spanning-instance document")?;
            let (inst, budget) = doc.to_instance();
            let (g, k) = from_tmst(&inst, budget)?;
            let mut out = GraphDoc::from_graph(&g);
            out.meta = Some(ReduceMeta { k });
            emit_json(&out, args.output.as_deref(), cfg.pretty)?;
        }
        ReduceFrom::Restless => {
            let doc: tld_cli::docs::RestlessDoc =
                serde_json::from_str(&text).context("malformed path-instance document")?;
            let (g, k) = from_restless_path(&doc.to_instance());
            let mut out = GraphDoc::from_graph(&g);
            out.meta = Some(ReduceMeta { k: k as i64 });
            emit_json(&out, args.output.as_deref(), cfg.pretty)?;
        }
    }
    Ok(0)
}

fn cmd_bench(args: &BenchArgs) -> Result<u8> {
    let mut csv = String::from(
        "instance,n,L,delegators,rule,objective,wall_ms,resolved,snapshot_resolved\n",
    );
    for i in 0..args.count {
        let mut params = args.knobs.to_params();
        params.seed = args.knobs.seed.wrapping_add(i as u64);
        let g = compile(&random_election(&params)?)
            .with_context(|| format!("instance {i} does not compile"))?;
        let delegators = g.classify().delegating.len();

        let started = Instant::now();
        let result = run_rule(args.rule, &g, args.delta, args.cap)
            .with_context(|| format!("instance {i} (seed {})", params.seed))?;
        let wall_ms = started.elapsed().as_secs_f64() * 1e3;

        // On a single-instant graph every static route is trivially within
        // the horizons, so the static rule's reach equals the exact rule's
        // and stays polynomial.
        let snapshot_resolved = solve_confluent(&snapshot(&g, g.lifespan())).resolved_count();

        writeln!(
            csv,
            "{i},{n},{life},{delegators},{rule},{objective},{wall_ms:.3},{resolved},{snapshot_resolved}",
            n = params.n,
            life = params.lifespan,
            rule = args.rule.label(),
            objective = result.objective,
            resolved = result.resolved_count(),
        )?;
    }
    emit_text(&csv, args.output.as_deref())?;
    Ok(0)
}
