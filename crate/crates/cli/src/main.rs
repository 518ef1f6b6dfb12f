//! `robilevel`: compile QSAT formulas and robust single-level problems into
//! robust bilevel instances, solve them exactly, and run the oracle sweeps.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use robilevel::bilevel::{
    adversary, follower_response, load_instance, save_instance, solve_robust, BilevelError, Caps, Mode,
};
use robilevel::compiler::{
    box_to_simplex, compile_qsat_optimistic, compile_qsat_pessimistic, compile_single_level_robust,
    parse_formula, parse_formula_file, relax_leader, CompilationArtifacts, Formula,
};
use robilevel::numeric::{parse_vector, Rational, Vector};
use robilevel::verify::{self, FamilyConfig, Outcome};
use robilevel::RobustBilevelInstance;

const DEFAULT_SEED: u64 = 2024;

// stdout may be a closed pipe (`robilevel ... | head`); output errors are ignored
macro_rules! say {
    ($($t:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

macro_rules! emit {
    ($($t:tt)*) => {{
        let _ = write!(std::io::stdout().lock(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(name = "robilevel", version, about = "Exact solver and compiler for robust bilevel programs")]
struct Cli {
    /// Also print approximate decimal renderings of every value.
    #[arg(long, global = true)]
    decimal: bool,
    #[command(flatten)]
    caps: CapArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CapArgs {
    /// Largest leader dimension enumerated over {0,1}^p.
    #[arg(long, global = true, default_value_t = Caps::default().max_leader_bits)]
    max_leader_bits: u32,
    #[arg(long, global = true, default_value_t = Caps::default().vertex_cap)]
    vertex_cap: u64,
    #[arg(long, global = true, default_value_t = Caps::default().face_cap)]
    face_cap: u64,
    #[arg(long, global = true, default_value_t = Caps::default().grid_cap)]
    grid_cap: u128,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        Caps {
            max_leader_bits: self.max_leader_bits,
            vertex_cap: self.vertex_cap,
            face_cap: self.face_cap,
            grid_cap: self.grid_cap,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Optimistic,
    Pessimistic,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Optimistic => Mode::Optimistic,
            ModeArg::Pessimistic => Mode::Pessimistic,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    /// QSAT compilations in both modes, the adversary, the relaxation and the gadget.
    #[value(alias = "theorem1")]
    Qsat,
    /// Robust single-level compilation against brute force.
    #[value(alias = "lemma2")]
    SingleLevel,
    /// Box versus covering-simplex uncertainty.
    #[value(alias = "theorem5")]
    Simplex,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a formula file (`p= n=` header, then an s-expression) into an instance.
    CompileQsat {
        formula: PathBuf,
        #[arg(long, value_enum, default_value = "optimistic")]
        mode: ModeArg,
        /// Relax the leader set to [0,1]^p with penalty columns.
        #[arg(long)]
        relax_leader: bool,
        /// Replace the [-1,1]^n box by a covering simplex.
        #[arg(long)]
        simplex_uncertainty: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Compile a robust single-level problem given as `{"X": [...], "scenarios": [...]}`.
    CompileRs {
        problem: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Solve the robust bilevel program.
    Solve {
        instance: PathBuf,
        /// Defaults to the instance's mode.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Worst scenario against a fixed leader decision, e.g. `0,1`.
    Adversary {
        instance: PathBuf,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Follower's tie-broken response to `c` at `x`.
    Follower {
        instance: PathBuf,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Run the oracle-equivalence sweeps.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 2)]
        max_p: usize,
        #[arg(long, default_value_t = 2)]
        max_n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Random formulas added to the exhaustive family.
        #[arg(long, default_value_t = 20)]
        random: usize,
        /// Every formula with at most this many leaves is swept.
        #[arg(long, default_value_t = 2)]
        leaves: usize,
        /// Random problems for the single-level suite.
        #[arg(long, default_value_t = 50)]
        cases: usize,
        /// Fractional leader samples per formula.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Compile `(or x1 y1)` and walk through solve, adversary and follower.
    Demo,
}

enum Failure {
    Verification(String),
    Input(String),
    Cap(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Input(_) => 2,
            Failure::Cap(_) => 3,
        }
    }
}

impl From<BilevelError> for Failure {
    fn from(e: BilevelError) -> Self {
        if e.is_cap() {
            Failure::Cap(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type CliResult = Result<(), Failure>;

struct Printer {
    decimal: bool,
}

impl Printer {
    fn value(&self, v: &Rational) -> String {
        if self.decimal {
            format!("{v} (approx. {:.6})", v.to_f64())
        } else {
            v.to_string()
        }
    }

    fn vector(&self, v: &[Rational]) -> String {
        let exact: Vec<String> = v.iter().map(ToString::to_string).collect();
        let mut s = format!("({})", exact.join(", "));
        if self.decimal {
            let approx: Vec<String> = v.iter().map(|r| format!("{:.6}", r.to_f64())).collect();
            let _ = write!(s, " (approx. ({}))", approx.join(", "));
        }
        s
    }

    fn named(&self, inst: &RobustBilevelInstance, y: &[Rational]) -> String {
        let Some(names) = &inst.var_map else { return String::new() };
        let mut s = String::new();
        for (name, v) in names.iter().zip(y) {
            let _ = writeln!(s, "  {name} = {}", self.value(v));
        }
        s
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path, caps: &Caps) -> Result<RobustBilevelInstance, Failure> {
    let text = read(path)?;
    load_instance(&text, caps).map_err(|e| match Failure::from(e) {
        Failure::Input(msg) => Failure::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn parse_point(text: &str, what: &str, len: usize) -> Result<Vector, Failure> {
    let items: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let v = parse_vector(&items).map_err(|e| Failure::Input(format!("{what}: {e}")))?;
    if v.len() != len {
        return Err(Failure::Input(format!("{what} has {} entries, expected {len}", v.len())));
    }
    Ok(v)
}

fn leader_point(inst: &RobustBilevelInstance, text: &str) -> Result<Vector, Failure> {
    let x = parse_point(text, "x", inst.p)?;
    if !inst.admits(&x) {
        return Err(Failure::Input(format!("x = {text} is not a feasible leader decision")));
    }
    Ok(x)
}

fn compile_qsat(
    f: &Formula,
    mode: Mode,
    relax: bool,
    simplex: bool,
) -> Result<CompilationArtifacts, Failure> {
    let mut art = match mode {
        Mode::Optimistic => compile_qsat_optimistic(f),
        Mode::Pessimistic => compile_qsat_pessimistic(f),
    };
    if relax {
        art = relax_leader(&art);
    }
    if simplex {
        art = box_to_simplex(&art).map_err(|e| Failure::Input(e.to_string()))?;
    }
    Ok(art)
}

fn report_artifacts(art: &CompilationArtifacts, pr: &Printer) {
    let inst = &art.instance;
    say!("compiled instance: p = {}, n = {}, {} rows", inst.p, inst.n, inst.num_rows());
    say!("var_map:");
    for (j, name) in art.var_map.iter().enumerate() {
        say!("  column {}: {name}", j + 1);
    }
    match &art.big_m {
        Some(m) => say!("M = {}", pr.value(m)),
        None => say!("M = none"),
    }
}

fn cmd_compile_qsat(path: &Path, mode: Mode, relax: bool, simplex: bool, out: &Path, pr: &Printer) -> CliResult {
    let text = read(path)?;
    let f = parse_formula_file(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let art = compile_qsat(&f, mode, relax, simplex)?;
    write(out, &save_instance(&art.instance))?;
    report_artifacts(&art, pr);
    say!("wrote {}", out.display());
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SingleLevelDoc {
    #[serde(rename = "X")]
    x: Vec<Vector>,
    scenarios: Vec<Vector>,
}

fn cmd_compile_rs(path: &Path, out: &Path, pr: &Printer) -> CliResult {
    let text = read(path)?;
    let doc: SingleLevelDoc =
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let art = compile_single_level_robust(&doc.x, &doc.scenarios).map_err(|e| Failure::Input(e.to_string()))?;
    write(out, &save_instance(&art.instance))?;
    report_artifacts(&art, pr);
    say!("wrote {}", out.display());
    Ok(())
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Optimistic => "optimistic",
        Mode::Pessimistic => "pessimistic",
    }
}

fn cmd_solve(inst: &RobustBilevelInstance, mode: Mode, caps: &Caps, pr: &Printer) -> CliResult {
    let report = solve_robust(inst, mode, caps)?;
    say!("mode: {}", mode_name(mode));
    say!("value: {}", pr.value(&report.value));
    say!("leader x: {}", pr.vector(&report.leader_x));
    say!("worst scenario: {}", pr.vector(&report.worst_scenario));
    say!("follower y: {}", pr.vector(&report.follower_y));
    emit!("{}", pr.named(inst, &report.follower_y));
    Ok(())
}

fn cmd_adversary(inst: &RobustBilevelInstance, x: &[Rational], mode: Mode, caps: &Caps, pr: &Printer) -> CliResult {
    let out = adversary(inst, x, mode, caps)?;
    say!("mode: {}", mode_name(mode));
    say!("value: {}", pr.value(&out.value));
    say!("leader x: {}", pr.vector(x));
    say!("worst scenario: {}", pr.vector(&out.scenario));
    say!("follower y: {}", pr.vector(&out.follower_y));
    emit!("{}", pr.named(inst, &out.follower_y));
    Ok(())
}

fn cmd_follower(inst: &RobustBilevelInstance, x: &[Rational], c: &[Rational], mode: Mode, pr: &Printer) -> CliResult {
    if !inst.uncertainty.contains(c) {
        eprintln!("warning: c = {} is outside the uncertainty set", pr.vector(c));
    }
    let (y, value) = follower_response(inst, x, c, mode)?;
    say!("mode: {}", mode_name(mode));
    say!("value: {}", pr.value(&value));
    say!("leader x: {}", pr.vector(x));
    say!("scenario: {}", pr.vector(c));
    say!("follower y: {}", pr.vector(&y));
    emit!("{}", pr.named(inst, &y));
    Ok(())
}

#[derive(Default)]
struct Tally {
    passed: usize,
    failed: usize,
    skipped: usize,
}

impl Tally {
    fn record(&mut self, suite: &str, case: &str, outcome: Outcome) {
        match &outcome {
            Outcome::Pass => self.passed += 1,
            Outcome::Fail(_) => self.failed += 1,
            Outcome::Skip(_) => self.skipped += 1,
        }
        say!("[{suite}] {case}: {outcome}");
    }
}

struct VerifyArgs {
    suite: Suite,
    family: FamilyConfig,
    cases: usize,
    samples: usize,
}

fn cmd_verify(args: &VerifyArgs, caps: &Caps) -> CliResult {
    let mut tally = Tally::default();
    let runs = |s: Suite| args.suite == s || args.suite == Suite::All;
    let family = if runs(Suite::Qsat) || runs(Suite::Simplex) { verify::qsat_family(&args.family) } else { Vec::new() };
    if runs(Suite::Qsat) {
        let mut rng = ChaCha8Rng::seed_from_u64(args.family.seed);
        for (k, f) in family.iter().enumerate() {
            let name = format!("p={} n={} {f}", f.p, f.n);
            tally.record("qsat", &format!("optimistic {name}"), verify::check_optimistic(f, caps));
            tally.record("qsat", &format!("pessimistic {name}"), verify::check_pessimistic(f, caps));
            tally.record("qsat", &format!("co-sat {name}"), verify::check_cosat(f, caps));
            let seed = args.family.seed.wrapping_add(k as u64);
            tally.record("qsat", &format!("relaxed {name}"), verify::check_relaxation(f, caps, args.samples, seed));
            if f.n > 0 {
                tally.record("qsat", &format!("gadget {name}"), verify::check_gadget(f, &mut rng));
            }
        }
    }
    if runs(Suite::SingleLevel) {
        let mut rng = ChaCha8Rng::seed_from_u64(args.family.seed);
        for k in 0..args.cases {
            let (xs, cs) = verify::random_single_level(&mut rng);
            tally.record("single-level", &format!("case {k} ({} points, {} scenarios)", xs.len(), cs.len()), verify::check_single_level(&xs, &cs, caps));
        }
    }
    if runs(Suite::Simplex) {
        for f in &family {
            tally.record("simplex", &format!("p={} n={} {f}", f.p, f.n), verify::check_simplex(f, caps));
        }
    }
    say!("{} passed, {} failed, {} skipped", tally.passed, tally.failed, tally.skipped);
    if tally.failed > 0 {
        Err(Failure::Verification(format!("{} cases failed", tally.failed)))
    } else if tally.skipped > 0 {
        Err(Failure::Cap(format!("{} cases skipped on caps", tally.skipped)))
    } else {
        Ok(())
    }
}

fn cmd_demo(caps: &Caps, pr: &Printer) -> CliResult {
    let f = parse_formula("(or x1 y1)", 1, 1).map_err(|e| Failure::Input(e.to_string()))?;
    say!("formula: {f}  (exists x1 forall y1)");
    let art = compile_qsat_optimistic(&f);
    report_artifacts(&art, pr);
    say!("");
    say!("$ solve");
    cmd_solve(&art.instance, Mode::Optimistic, caps, pr)?;
    for x in ["0", "1"] {
        say!("");
        say!("$ adversary x = {x}");
        let x = parse_point(x, "x", 1)?;
        cmd_adversary(&art.instance, &x, Mode::Optimistic, caps, pr)?;
    }
    say!("");
    say!("$ follower x = 0, c = (0, 0) (pessimistic)");
    let x = parse_point("0", "x", 1)?;
    let c = parse_point("0,0", "c", art.instance.n)?;
    cmd_follower(&art.instance, &x, &c, Mode::Pessimistic, pr)
}

fn run(cli: Cli) -> CliResult {
    let caps = cli.caps.caps();
    let pr = Printer { decimal: cli.decimal };
    match cli.command {
        Command::CompileQsat { formula, mode, relax_leader, simplex_uncertainty, output } => {
            cmd_compile_qsat(&formula, mode.into(), relax_leader, simplex_uncertainty, &output, &pr)
        }
        Command::CompileRs { problem, output } => cmd_compile_rs(&problem, &output, &pr),
        Command::Solve { instance, mode } => {
            let inst = load(&instance, &caps)?;
            cmd_solve(&inst, mode.map_or(inst.mode_default, Mode::from), &caps, &pr)
        }
        Command::Adversary { instance, x, mode } => {
            let inst = load(&instance, &caps)?;
            let x = leader_point(&inst, &x)?;
            cmd_adversary(&inst, &x, mode.map_or(inst.mode_default, Mode::from), &caps, &pr)
        }
        Command::Follower { instance, x, c, mode } => {
            let inst = load(&instance, &caps)?;
            let x = leader_point(&inst, &x)?;
            let c = parse_point(&c, "c", inst.n)?;
            cmd_follower(&inst, &x, &c, mode.map_or(inst.mode_default, Mode::from), &pr)
        }
        Command::Verify { suite, max_p, max_n, seed, random, leaves, cases, samples } => {
            let family = FamilyConfig {
                max_p,
                max_n,
                exhaustive_leaves: leaves,
                random_count: random,
                random_max_leaves: FamilyConfig::default().random_max_leaves,
                seed,
            };
            cmd_verify(&VerifyArgs { suite, family, cases, samples }, &caps)
        }
        Command::Demo => cmd_demo(&caps, &pr),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Verification(msg) | Failure::Input(msg) | Failure::Cap(msg)) = &f;
            let label = match f {
                Failure::Verification(_) => "verification failed",
                Failure::Input(_) => "error",
                Failure::Cap(_) => "cap exceeded",
            };
            eprintln!("{label}: {msg}");
            ExitCode::from(f.code())
        }
    }
}
