//! Command-line front end for the constant-term engine.
//!
//! Input systems are JSON documents with a matrix `"A"` and either a
//! right-hand side `"b"` or per-coordinate `"b_ranges"`.  Subcommands
//! compute solution series, test the reciprocity and invariant
//! conditions, run the composite criterion, sweep grids of right-hand
//! sides, enumerate solutions by brute force, and replay the built-in
//! check batteries.
//!
//! Exit codes: 0 success (condition holds), 1 tested condition fails
//! under `--assert`, 2 invalid input, 3 resource exhaustion, 4 internal
//! or identity violation.

mod expr;

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use recip_core::algebra::{AlgebraError, OrderSpec, VariableSpace};
use recip_core::ctengine::{ct_all_traced, hadamard_product, CtError, CtOptions};
use recip_core::display::{format_function, format_series};
use recip_core::ldsystem::{LDSystem, MatrixForm, SystemError};
use recip_core::oracle::{enumerate_solutions, indicator_series, positive_kernel_witness, Strictness};
use recip_core::reciprocity::{
    composite_criterion, error_terms, i_property, r_property, IMode, ReciprocityError,
};
use recip_core::selfcheck::{reproduction_checks, run_all};
use recip_core::serialize::{SerializeError, SystemDoc};
use recip_core::sweep::{render_tsv, run_grid, SweepError};

#[derive(Parser)]
#[command(
    name = "recip",
    version,
    about = "Exact solution series and reciprocity tests for linear Diophantine systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrderChoice {
    /// Later auxiliary variables dominate earlier ones.
    Case1,
    /// Total-degree refinement of the same tower.
    Case2,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeChoice {
    /// Test the invariant condition on each stage's full sum.
    Sum,
    /// Test it term by term within each stage.
    PerTerm,
}

#[derive(Args)]
struct InputArg {
    /// JSON document with the matrix "A" and "b" (or "b_ranges").
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
}

#[derive(Args)]
struct CommonArgs {
    /// Expansion order for the auxiliary variables.
    #[arg(long, value_enum, default_value_t = OrderChoice::Case1)]
    order: OrderChoice,
    /// Reverse the chosen expansion order.
    #[arg(long)]
    reversed: bool,
    /// Truncation degree for series output and enumeration bounds.
    #[arg(long, default_value_t = 8)]
    degree: i64,
    /// How the invariant condition is applied at each stage.
    #[arg(long, value_enum, default_value_t = ModeChoice::Sum)]
    mode: ModeChoice,
    /// Exit with code 1 when the tested condition fails.
    #[arg(long)]
    assert: bool,
    /// Cross-check series output against brute-force enumeration.
    #[arg(long)]
    verify: bool,
    /// Seed for the randomized check batteries.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Maximum number of live terms during extraction.
    #[arg(long, default_value_t = 200_000)]
    budget: usize,
    /// Worker threads for grid sweeps (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the report to FILE instead of stdout.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Print per-round reduction traces to stderr.
    #[arg(long)]
    trace: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Solution series over nonnegative integers.
    Ct {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Companion series over strictly positive solutions.
    Ebar {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Reciprocity test between the two ordered constant terms.
    Recip {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Stagewise vanishing-invariant condition.
    Iprop {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Composite sufficient criterion with its harvested equations.
    Monster {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Correction terms linking the two ordered constant terms.
    ErrorTerms {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sweep a rectangle of right-hand sides and tabulate all conditions.
    Grid {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Brute-force enumeration of bounded solutions.
    Enumerate {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Search for a strictly positive kernel element.
    Feasible {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Coefficientwise product of two one-variable series.
    Hadamard {
        /// First series, e.g. "1/(1-x)^2".
        f: String,
        /// Second series.
        g: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Randomized identity batteries plus worked reproductions.
    Selfcheck {
        #[command(flatten)]
        common: CommonArgs,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

fn fail_algebra(e: AlgebraError) -> Failure {
    Failure::new(4, e.to_string())
}

fn fail_ct(e: CtError) -> Failure {
    let code = match &e {
        CtError::TermBudgetExceeded { .. } => 3,
        _ => 4,
    };
    Failure::new(code, e.to_string())
}

fn fail_system(e: SystemError) -> Failure {
    let code = match &e {
        SystemError::EmptySystem
        | SystemError::RaggedMatrix
        | SystemError::RhsLength { .. }
        | SystemError::UnknownColumn(_)
        | SystemError::UnsupportedOrder => 2,
        _ => 4,
    };
    Failure::new(code, e.to_string())
}

fn fail_recip(e: ReciprocityError) -> Failure {
    match e {
        ReciprocityError::Ct(inner) => fail_ct(inner),
        ReciprocityError::System(inner) => fail_system(inner),
        ReciprocityError::Algebra(inner) => fail_algebra(inner),
        ReciprocityError::RankDeficient { .. }
        | ReciprocityError::NotHomogeneous
        | ReciprocityError::NoPositiveSolution => Failure::new(2, e.to_string()),
        ReciprocityError::IdentityViolation(_) => Failure::new(4, e.to_string()),
    }
}

fn fail_serialize(e: SerializeError) -> Failure {
    Failure::new(2, e.to_string())
}

fn fail_sweep(e: SweepError) -> Failure {
    let code = match &e {
        SweepError::EmptyGrid => 2,
        SweepError::TooLarge(..) => 3,
    };
    Failure::new(code, e.to_string())
}

fn load_doc(input: &InputArg) -> Result<SystemDoc, Failure> {
    let raw = fs::read_to_string(&input.input)
        .map_err(|e| Failure::new(2, format!("cannot read {}: {e}", input.input.display())))?;
    SystemDoc::from_json(&raw).map_err(fail_serialize)
}

fn order_spec(common: &CommonArgs) -> OrderSpec {
    let base = match common.order {
        OrderChoice::Case1 => OrderSpec::case1(),
        OrderChoice::Case2 => OrderSpec::case2(),
    };
    if common.reversed {
        base.reversed()
    } else {
        base
    }
}

fn ct_options(common: &CommonArgs) -> CtOptions {
    CtOptions { term_budget: common.budget }
}

fn i_mode(common: &CommonArgs) -> IMode {
    match common.mode {
        ModeChoice::Sum => IMode::Sum,
        ModeChoice::PerTerm => IMode::PerTerm,
    }
}

fn worker_count(common: &CommonArgs) -> usize {
    common
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn emit(common: &CommonArgs, text: &str) -> Result<(), Failure> {
    match &common.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new(2, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

fn fmt_ints(v: &[i64]) -> String {
    let inner: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", inner.join(", "))
}

fn system_line(sys: &LDSystem) -> String {
    format!(
        "system: {}, {}, rhs {}\n",
        plural(sys.rows(), "equation"),
        plural(sys.cols(), "unknown"),
        fmt_ints(sys.rhs())
    )
}

fn order_line(common: &CommonArgs) -> String {
    let name = match common.order {
        OrderChoice::Case1 => "case1",
        OrderChoice::Case2 => "case2",
    };
    if common.reversed {
        format!("order: {name} (reversed)\n")
    } else {
        format!("order: {name}\n")
    }
}

/// Renders `coeffs . a = rhs` with 1-based unknown names, skipping zeros.
fn fmt_equation(coeffs: &[i64], rhs: i64) -> String {
    let mut s = String::new();
    for (j, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if s.is_empty() {
            if c < 0 {
                s.push('-');
            }
        } else {
            s.push_str(if c < 0 { " - " } else { " + " });
        }
        let mag = c.abs();
        if mag != 1 {
            let _ = write!(s, "{mag} ");
        }
        let _ = write!(s, "a{}", j + 1);
    }
    if s.is_empty() {
        s.push('0');
    }
    format!("{s} = {rhs}")
}

fn print_trace(common: &CommonArgs, trace: &[String]) {
    if common.trace {
        for line in trace {
            eprintln!("trace: {line}");
        }
    }
}

/// `ct` and `ebar`: full constant term of the crude generating function,
/// its truncated series, and an optional enumeration cross-check.
fn cmd_series(input: &InputArg, common: &CommonArgs, strict: bool) -> Result<ExitCode, Failure> {
    let sys = load_doc(input)?.to_system().map_err(fail_serialize)?;
    let ord = order_spec(common);
    let opts = ct_options(common);
    let f = if strict { sys.crude_ebar() } else { sys.crude_e() };

    let mut trace = Vec::new();
    let ct = ct_all_traced(&f, &ord, &opts, &mut trace).map_err(fail_ct)?;
    print_trace(common, &trace);
    let series = ct.series_truncate(common.degree).map_err(fail_algebra)?;

    let name = if strict { "Ebar" } else { "E" };
    let mut out = String::new();
    out.push_str(&system_line(&sys));
    out.push_str(&order_line(common));
    let _ = writeln!(out, "{name} = {}", format_function(&ct));
    let _ = writeln!(out, "series[{}] = {}", common.degree, format_series(sys.space(), &series));

    let mut code = ExitCode::SUCCESS;
    if common.verify {
        let (oracle_rhs, strictness): (Vec<i64>, Strictness) = if strict {
            (sys.rhs().iter().map(|&v| -v).collect(), Strictness::Strict)
        } else {
            (sys.rhs().to_vec(), Strictness::Nonnegative)
        };
        let expected = indicator_series(
            sys.space().lambdas,
            sys.matrix(),
            &oracle_rhs,
            strictness,
            common.degree,
        );
        if series == expected {
            let _ = writeln!(out, "verify: enumeration agrees up to total degree {}", common.degree);
        } else {
            let _ = writeln!(out, "verify: MISMATCH against enumeration");
            eprintln!("enumeration gives: {}", format_series(sys.space(), &expected));
            code = ExitCode::from(4);
        }
    }
    emit(common, &out)?;
    Ok(code)
}

fn cmd_recip(input: &InputArg, common: &CommonArgs) -> Result<ExitCode, Failure> {
    let sys = load_doc(input)?.to_system().map_err(fail_serialize)?;
    let ord = order_spec(common);
    let opts = ct_options(common);
    let report = r_property(&sys.crude_e(), &ord, None, &opts).map_err(fail_recip)?;

    let mut out = String::new();
    out.push_str(&system_line(&sys));
    out.push_str(&order_line(common));
    let _ = writeln!(out, "R: {}", if report.holds { "holds" } else { "fails" });
    let _ = writeln!(out, "sign: (-1)^{}", report.degree);
    let _ = writeln!(out, "ct = {}", format_function(&report.ct));
    let _ = writeln!(out, "ct_reversed = {}", format_function(&report.ct_reversed));
    emit(common, &out)?;
    if common.assert && !report.holds {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_iprop(input: &InputArg, common: &CommonArgs) -> Result<ExitCode, Failure> {
    let sys = load_doc(input)?.to_system().map_err(fail_serialize)?;
    let ord = order_spec(common);
    let opts = ct_options(common);
    let mode = i_mode(common);
    let report = i_property(&sys.crude_e(), &ord, mode, &opts).map_err(fail_recip)?;

    let mode_name = match mode {
        IMode::Sum => "sum",
        IMode::PerTerm => "per-term",
    };
    let mut out = String::new();
    out.push_str(&system_line(&sys));
    out.push_str(&order_line(common));
    if report.holds {
        let _ = writeln!(out, "I: holds (mode {mode_name})");
    } else {
        let stage = report.failed_stage.map_or(0, |s| s + 1);
        let term = report.failed_term.map_or(String::new(), |t| format!(", term {}", t + 1));
        let _ = writeln!(out, "I: fails at stage {stage}{term} (mode {mode_name})");
    }
    emit(common, &out)?;
    if common.assert && !report.holds {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_monster(input: &InputArg, common: &CommonArgs) -> Result<ExitCode, Failure> {
    let sys = load_doc(input)?.to_system().map_err(fail_serialize)?;
    let ord = order_spec(common);
    let form = MatrixForm::from_system(&sys);
    let report = composite_criterion(&form, &ord).map_err(fail_recip)?;
    print_trace(common, &report.trace);

    let mut out = String::new();
    out.push_str(&system_line(&sys));
    out.push_str(&order_line(common));
    let _ = writeln!(
        out,
        "criterion: {}",
        if report.established { "established" } else { "not established" }
    );
    for (k, row) in report.rows.iter().enumerate() {
        let cols: Vec<String> = row.sequence.iter().map(|j| (j + 1).to_string()).collect();
        let _ = writeln!(
            out,
            "[{}] columns <{}>: {} : R {}",
            k + 1,
            cols.join(","),
            fmt_equation(&row.coeffs, row.rhs),
            if row.r_holds { "holds" } else { "fails" }
        );
    }
    if let Some(k) = report.first_failure {
        let _ = writeln!(out, "first failure: [{}]", k + 1);
    }
    emit(common, &out)?;
    if common.assert && !report.established {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_error_terms(input: &InputArg, common: &CommonArgs) -> Result<ExitCode, Failure> {
    let sys = load_doc(input)?.to_system().map_err(fail_serialize)?;
    let ord = order_spec(common);
    let opts = ct_options(common);
    let report = error_terms(&sys.crude_e(), &ord, &opts).map_err(fail_recip)?;

    let mut out = String::new();
    out.push_str(&system_line(&sys));
    out.push_str(&order_line(common));
    let _ = writeln!(out, "ct = {}", format_function(&report.ct));
    let _ = writeln!(out, "ct_reversed = {}", format_function(&report.ct_reversed));
    for (i, term) in report.terms.iter().enumerate() {
        let _ = writeln!(out, "E{i} = {}", format_function(term));
    }
    out.push_str("identity: verified\n");
    emit(common, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_grid(input: &InputArg, common: &CommonArgs) -> Result<ExitCode, Failure> {
    let doc = load_doc(input)?;
    let ranges = doc.ranges().map_err(fail_serialize)?;
    // Validate the matrix shape once up front so a malformed document is
    // an input error rather than a column of per-point failures.
    let probe = vec![0; doc.a.len()];
    LDSystem::new(doc.a.clone(), probe).map_err(fail_system)?;
    if ranges.len() != doc.a.len() {
        return Err(Failure::new(
            2,
            format!("need one range per equation: got {}, expected {}", ranges.len(), doc.a.len()),
        ));
    }
    let ord = order_spec(common);
    let opts = ct_options(common);
    let report = run_grid(&doc.a, &ranges, &ord, i_mode(common), &opts, worker_count(common))
        .map_err(fail_sweep)?;
    emit(common, &render_tsv(&report))?;
    if !report.violations.is_empty() {
        for v in &report.violations {
            eprintln!("violation: {v}");
        }
        return Ok(ExitCode::from(4));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_enumerate(input: &InputArg, common: &CommonArgs) -> Result<ExitCode, Failure> {
    let sys = load_doc(input)?.to_system().map_err(fail_serialize)?;
    let nonneg =
        enumerate_solutions(sys.matrix(), sys.rhs(), Strictness::Nonnegative, common.degree);
    let strict = enumerate_solutions(sys.matrix(), sys.rhs(), Strictness::Strict, common.degree);
    let value = serde_json::json!({
        "nonnegative": nonneg,
        "strict": strict,
    });
    let text = format!("{}\n", serde_json::to_string(&value).expect("serializable"));
    emit(common, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_feasible(input: &InputArg, common: &CommonArgs) -> Result<ExitCode, Failure> {
    let doc = load_doc(input)?;
    // Shape validation only; the right-hand side is irrelevant here.
    let sys = LDSystem::new(doc.a.clone(), vec![0; doc.a.len()]).map_err(fail_system)?;
    let witness = positive_kernel_witness(sys.matrix());

    let mut out = String::new();
    let _ = writeln!(
        out,
        "system: {}, {}",
        plural(sys.rows(), "equation"),
        plural(sys.cols(), "unknown")
    );
    match &witness {
        Some(w) => {
            let inner: Vec<String> = w.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "feasible: yes");
            let _ = writeln!(out, "witness = ({})", inner.join(", "));
        }
        None => {
            let _ = writeln!(out, "feasible: no");
        }
    }
    emit(common, &out)?;
    if common.assert && witness.is_none() {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_hadamard(f_src: &str, g_src: &str, common: &CommonArgs) -> Result<ExitCode, Failure> {
    let space = VariableSpace::new(0, 1);
    let f = expr::parse_function(f_src, space).map_err(|e| Failure::new(2, e.to_string()))?;
    let g = expr::parse_function(g_src, space).map_err(|e| Failure::new(2, e.to_string()))?;
    let opts = ct_options(common);
    let h = hadamard_product(&f, &g, &opts).map_err(fail_ct)?;
    let series = h.series_truncate(common.degree).map_err(fail_algebra)?;

    let mut out = String::new();
    let _ = writeln!(out, "product = {}", format_function(&h));
    let _ = writeln!(out, "series[{}] = {}", common.degree, format_series(space, &series));

    let mut code = ExitCode::SUCCESS;
    if common.verify {
        let sf = f.series_truncate(common.degree).map_err(fail_algebra)?;
        let sg = g.series_truncate(common.degree).map_err(fail_algebra)?;
        let mut pointwise = recip_core::algebra::LaurentPoly::new();
        for (key, cf) in &sf {
            if let Some(cg) = sg.get(key) {
                pointwise.insert(key.clone(), cf * cg);
            }
        }
        if series == pointwise {
            let _ = writeln!(
                out,
                "verify: coefficientwise product agrees up to total degree {}",
                common.degree
            );
        } else {
            let _ = writeln!(out, "verify: MISMATCH against coefficientwise product");
            eprintln!("pointwise product gives: {}", format_series(space, &pointwise));
            code = ExitCode::from(4);
        }
    }
    emit(common, &out)?;
    Ok(code)
}

fn cmd_selfcheck(common: &CommonArgs) -> Result<ExitCode, Failure> {
    let opts = ct_options(common);
    let mut outcomes = run_all(common.seed, &opts).map_err(fail_ct)?;
    outcomes.extend(reproduction_checks(&opts).map_err(fail_recip)?);

    let mut out = String::new();
    let mut failed = false;
    for outcome in &outcomes {
        if outcome.passed + outcome.failed > 1 {
            let _ = writeln!(out, "{}: {} passed, {} failed", outcome.name, outcome.passed, outcome.failed);
        } else {
            let _ =
                writeln!(out, "{}: {}", outcome.name, if outcome.failed == 0 { "pass" } else { "FAIL" });
        }
        if outcome.failed > 0 {
            failed = true;
            for detail in &outcome.failures {
                eprintln!("{} failure:\n{detail}", outcome.name);
            }
        }
    }
    let _ = writeln!(out, "selfcheck: {}", if failed { "FAILED" } else { "ok" });
    emit(common, &out)?;
    if failed {
        return Ok(ExitCode::from(4));
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match &cli.command {
        Command::Ct { input, common } => cmd_series(input, common, false),
        Command::Ebar { input, common } => cmd_series(input, common, true),
        Command::Recip { input, common } => cmd_recip(input, common),
        Command::Iprop { input, common } => cmd_iprop(input, common),
        Command::Monster { input, common } => cmd_monster(input, common),
        Command::ErrorTerms { input, common } => cmd_error_terms(input, common),
        Command::Grid { input, common } => cmd_grid(input, common),
        Command::Enumerate { input, common } => cmd_enumerate(input, common),
        Command::Feasible { input, common } => cmd_feasible(input, common),
        Command::Hadamard { f, g, common } => cmd_hadamard(f, g, common),
        Command::Selfcheck { common } => cmd_selfcheck(common),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
