use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use dlhom::bounds::{bound_report, immersion_threshold, stable_range_check};
use dlhom::certify::{default_max_degree, run_suite, SuiteReport, SUITES};
use dlhom::{basis_enumerate, spherical_candidates, BaseSteenrodAction, Cell, CellComplex, Error, Space};
use serde::{Deserialize, Serialize};

const BUDGET_VAR: &str = "DLHOM_MAX_BASIS";
const DEFAULT_BUDGET: u64 = 250_000;

#[derive(Parser)]
#[command(name = "dlhom", version, about = "Mod-2 homology of infinite loop spaces: bases, screening, bounds, certification")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for degree-parallel work (default 1).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpaceArgs {
    /// qs0, qsn (with --n), qsN, or a path to a space description JSON file.
    #[arg(long)]
    space: String,
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Monomial basis of the reduced homology in one degree.
    Basis {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        degree: u32,
        /// Component (charge) for qs0.
        #[arg(long, allow_hyphen_values = true)]
        charge: Option<i64>,
    },
    /// Primitive, A-annihilated classes in the span of single operations.
    Screen {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        degree: u32,
        /// Loop filtration: lower indices below l.
        #[arg(long = "loop")]
        loop_filtration: Option<u32>,
    },
    /// Printed dimension bound against the exhaustive oracle; --k -1 selects S^-1.
    Bounds {
        #[arg(long)]
        l: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    ImmersionThreshold {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        k: u32,
    },
    /// Whether d + l < 2(n + l - 1).
    StableRange {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
    },
    /// Run certification suites.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        max_degree: Option<u32>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceDescFile {
    model: String,
    #[serde(default)]
    n: Option<u32>,
    #[serde(default)]
    cells: Vec<Cell>,
    #[serde(default)]
    sq_action: Vec<SqEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SqEntry {
    r: u32,
    from: String,
    to: Vec<String>,
}

enum Failure {
    Input(String),
    Counterexample(String),
    Budget(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CounterexampleFound(_) => Failure::Counterexample(e.to_string()),
            Error::InvalidInput(_)
            | Error::SpaceDesc(_)
            | Error::UnsupportedSpace(_)
            | Error::NoSuccessor(_)
            | Error::NegativeLowerIndex { .. }
            | Error::ChargeNonzero(_) => Failure::Input(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

type Outcome = Result<ExitCode, Failure>;

fn space_from_file(path: &Path) -> Result<Arc<Space>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let desc: SpaceDescFile = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    match desc.model.as_str() {
        "qs0" => Ok(Space::qs0()),
        "qsn" => {
            let n = desc.n.ok_or_else(|| Failure::Input("model qsn needs n".into()))?;
            Ok(Space::qsn(n)?)
        }
        "sigma2" => {
            let index = |name: &str| {
                desc.cells
                    .iter()
                    .position(|c| c.name == name)
                    .ok_or_else(|| Failure::Input(format!("unknown cell {name}")))
            };
            let mut action = BaseSteenrodAction::default();
            for e in &desc.sq_action {
                let to = e.to.iter().map(|t| index(t)).collect::<Result<Vec<_>, _>>()?;
                action.set(e.r, index(&e.from)?, to);
            }
            Ok(Space::sigma2(CellComplex::new(desc.cells.clone(), action)?))
        }
        other => Err(Failure::Input(format!("unknown model {other}"))),
    }
}

fn load_space(a: &SpaceArgs) -> Result<Arc<Space>, Failure> {
    match a.space.as_str() {
        "qs0" => Ok(Space::qs0()),
        "qsn" => {
            let n = a.n.ok_or_else(|| Failure::Input("--space qsn needs --n".into()))?;
            Ok(Space::qsn(n)?)
        }
        s => match s.strip_prefix("qs").and_then(|n| n.parse::<u32>().ok()) {
            Some(0) => Ok(Space::qs0()),
            Some(n) => Ok(Space::qsn(n)?),
            None => space_from_file(Path::new(s)),
        },
    }
}

fn budget() -> Result<u64, Failure> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v
            .parse()
            .map_err(|_| Failure::Input(format!("{BUDGET_VAR} must be a non-negative integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// Size of the monomial basis in `degree`, from generator counts.
fn basis_size(space: &Space, degree: u32) -> u64 {
    let mut counts = vec![0u64; degree as usize + 1];
    counts[0] = 1;
    for d in 1..=degree {
        for _ in 0..space.generators_of_degree(d).len() {
            for t in d..=degree {
                counts[t as usize] = counts[t as usize].saturating_add(counts[(t - d) as usize]);
            }
        }
    }
    counts[degree as usize]
}

fn check_budget(space: &Space, degree: u32) -> Result<(), Failure> {
    let limit = budget()?;
    let size = basis_size(space, degree);
    if size > limit {
        return Err(Failure::Budget(format!(
            "basis of {} in degree {degree} has {size} monomials, above the budget {limit} (set {BUDGET_VAR})",
            space.id()
        )));
    }
    Ok(())
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

#[derive(Serialize)]
struct BasisOut {
    space: String,
    degree: u32,
    charge: Option<i64>,
    basis: Vec<String>,
}

fn cmd_basis(json: bool, a: &SpaceArgs, degree: u32, charge: Option<i64>) -> Outcome {
    let space = load_space(a)?;
    if charge.is_some_and(|c| c != 0) && !space.has_charge() {
        return Err(Failure::Input(format!("{} has no charge grading", space.id())));
    }
    check_budget(&space, degree)?;
    let basis: Vec<String> = basis_enumerate(&space, degree, charge).iter().map(|m| m.render(&space)).collect();
    if json {
        print_json(&BasisOut {
            space: space.id(),
            degree,
            charge: space.has_charge().then(|| charge.unwrap_or(0)),
            basis,
        });
    } else {
        for b in basis {
            println!("{b}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_screen(json: bool, a: &SpaceArgs, degree: u32, l: Option<u32>) -> Outcome {
    let space = load_space(a)?;
    if degree == 0 {
        return Err(Failure::Input("degree must be positive".into()));
    }
    check_budget(&space, degree)?;
    let r = spherical_candidates(&space, degree, l)?;
    if json {
        print_json(&r);
        return Ok(ExitCode::SUCCESS);
    }
    match r.loop_filtration {
        Some(l) => println!("space {} degree {} loop {l}", r.space, r.degree),
        None => println!("space {} degree {}", r.space, r.degree),
    }
    println!("symbols {}", r.symbols);
    println!("candidates {}", r.candidates.len());
    for c in &r.candidates {
        println!("  {} = {}", c.element, c.symbols.join(" + "));
    }
    println!("squares {}", r.squares.len());
    for c in &r.squares {
        println!("  {} = {}", c.element, c.symbols.join(" + "));
    }
    let b = &r.bounds;
    if let (Some(p), Some(o), Some(d)) = (b.printed, b.oracle, b.discrepancy) {
        println!("bound printed {p} oracle {o} discrepancy {d}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds(json: bool, l: u32, k: i64) -> Outcome {
    let k = match k {
        -1 => None,
        k if k >= 0 => Some(u32::try_from(k).map_err(|_| Failure::Input(format!("k={k} out of range")))?),
        k => return Err(Failure::Input(format!("k must be -1 or non-negative (got {k})"))),
    };
    let r = bound_report(l, k)?;
    if json {
        print_json(&r);
    } else {
        println!("printed {}", r.printed);
        println!("oracle {}", r.oracle);
        println!("discrepancy {}", r.discrepancy);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_immersion(json: bool, d: u32, k: u32) -> Outcome {
    let r = immersion_threshold(d, k)?;
    if json {
        print_json(&r);
    } else {
        println!("{}", r.n_min);
        println!("printed bound {} oracle bound {} oracle threshold {}", r.bound, r.oracle_bound, r.oracle_n_min);
        println!("discrepancy {}", r.discrepancy);
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct StableOut {
    d: i64,
    n: i64,
    l: i64,
    stable: bool,
}

fn cmd_stable(json: bool, d: i64, n: i64, l: i64) -> Outcome {
    let stable = stable_range_check(d, n, l);
    if json {
        print_json(&StableOut { d, n, l, stable });
    } else {
        println!("{stable}");
    }
    Ok(ExitCode::SUCCESS)
}

/// Space and degree whose basis dominates a suite's cost.
fn suite_budget_space(suite: &str) -> Option<Arc<Space>> {
    match suite {
        "primitive-basis" | "suspension-kernel" | "hopf-consistency" => Some(Space::qs0()),
        "even-squares" | "wellington" => Space::qsn(1).ok(),
        _ => None,
    }
}

#[derive(Serialize)]
struct VerifyOut {
    passed: bool,
    suites: Vec<SuiteReport>,
}

fn cmd_verify(json: bool, suite: Option<&str>, max_degree: Option<u32>) -> Outcome {
    let names: Vec<&str> = match suite {
        Some(s) if SUITES.contains(&s) => vec![s],
        Some(s) => return Err(Failure::Input(format!("unknown suite {s}; known: {}", SUITES.join(", ")))),
        None => SUITES.to_vec(),
    };
    for name in &names {
        if let Some(space) = suite_budget_space(name) {
            let d = max_degree.or_else(|| default_max_degree(name)).unwrap_or(0);
            check_budget(&space, d)?;
        }
    }
    let mut reports = Vec::new();
    let mut counterexample = false;
    for name in names {
        let r = match run_suite(name, max_degree) {
            Ok(r) => r,
            Err(Error::CounterexampleFound(msg)) => SuiteReport {
                suite: name.to_string(),
                max_degree: max_degree.or_else(|| default_max_degree(name)).unwrap_or(0),
                passed: false,
                checks: 0,
                failures: vec![msg],
                notes: Vec::new(),
            },
            Err(e) => return Err(e.into()),
        };
        counterexample |= !r.passed;
        reports.push(r);
    }
    if json {
        print_json(&VerifyOut {
            passed: !counterexample,
            suites: reports,
        });
    } else {
        for r in &reports {
            println!(
                "{} {} (max degree {}, {} checks)",
                r.suite,
                if r.passed { "pass" } else { "FAIL" },
                r.max_degree,
                r.checks
            );
            for f in &r.failures {
                println!("  failure: {f}");
            }
            for n in &r.notes {
                println!("  note: {n}");
            }
        }
    }
    Ok(if counterexample { ExitCode::from(3) } else { ExitCode::SUCCESS })
}

fn run(cli: Cli) -> Outcome {
    let jobs = cli.jobs.unwrap_or(1);
    if jobs == 0 {
        return Err(Failure::Input("--jobs must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|e| Failure::Internal(e.to_string()))?;
    let json = cli.json;
    match &cli.command {
        Command::Basis { space, degree, charge } => cmd_basis(json, space, *degree, *charge),
        Command::Screen { space, degree, loop_filtration } => cmd_screen(json, space, *degree, *loop_filtration),
        Command::Bounds { l, k } => cmd_bounds(json, *l, *k),
        Command::ImmersionThreshold { d, k } => cmd_immersion(json, *d, *k),
        Command::StableRange { d, n, l } => cmd_stable(json, *d, *n, *l),
        Command::Verify { suite, max_degree } => cmd_verify(json, suite.as_deref(), *max_degree),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Input(m) => (2, m),
                Failure::Counterexample(m) => (3, m),
                Failure::Budget(m) => (4, m),
                Failure::Internal(m) => (1, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
