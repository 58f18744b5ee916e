//! The `gqsm` command-line front end.
//!
//! ```text
//! gqsm solve   [--semantics sm|flp|both] [--route reduct|operator|both|auto] [--format text|json] FILE
//! gqsm ground  [--model ATOMS] [--format text|json] FILE
//! gqsm reduct  --model ATOMS [--format text|json] FILE
//! gqsm compare [--format text|json] FILE
//! ```
//!
//! Exit status is 0 on success, 1 on a parse or usage error and 2 when the
//! Herbrand base is larger than the enumeration cap (`GQSM_ATOM_CAP`,
//! default 20).

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::ground::{ground, GroundFormula};
use crate::parser::{parse_atom_set, parse_program, Source};
use crate::quantifier::Registry;
use crate::reduct::reduct;
use crate::render::render_ground;
use crate::solver::{Comparison, Route, Semantics, SolveError, SolveResult, Solver, DEFAULT_ATOM_CAP};
use crate::syntax::{AtomSet, Program};

pub const ATOM_CAP_VAR: &str = "GQSM_ATOM_CAP";

#[derive(Parser, Debug)]
#[command(
    name = "gqsm",
    version,
    about = "Stable models of programs with generalized quantifiers"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
}

#[derive(Subcommand, Debug)]
enum CommandArgs {
    /// Enumerate stable models.
    Solve(Opts),
    /// Print the ground program, one rule per line.
    Ground(Opts),
    /// Print the reduct of the ground program w.r.t. --model.
    Reduct(Opts),
    /// Compare SM and FLP stable models and report the syntactic class.
    Compare(Opts),
}

#[derive(Args, Debug, Clone)]
struct Opts {
    #[arg(long, value_enum, default_value_t = SemanticsArg::Sm)]
    semantics: SemanticsArg,
    #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
    route: RouteArg,
    /// Comma-separated ground atoms, e.g. "p(-1),p(1)".
    #[arg(long)]
    model: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    input: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Solve,
    Ground,
    Reduct,
    Compare,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SemanticsArg {
    Sm,
    Flp,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Reduct,
    Operator,
    Both,
    /// Reduct for SM when every predicate is intensional, operator otherwise.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub struct CliConfig {
    pub command: Command,
    pub semantics: SemanticsArg,
    pub route: RouteArg,
    pub model: Option<String>,
    pub format: Format,
    pub input: PathBuf,
    pub atom_cap: usize,
}

impl CliConfig {
    pub fn new(command: Command, input: impl Into<PathBuf>) -> Self {
        CliConfig {
            command,
            semantics: SemanticsArg::Sm,
            route: RouteArg::Auto,
            model: None,
            format: Format::Text,
            input: input.into(),
            atom_cap: DEFAULT_ATOM_CAP,
        }
    }
}

/// Failure of a run, already formatted for the error stream.
struct Failure {
    status: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            status: 1,
            message: message.into(),
        }
    }
}

fn solve_failure(path: &str, e: SolveError) -> Failure {
    let status = match e {
        SolveError::CapExceeded { .. } => 2,
        _ => 1,
    };
    Failure {
        status,
        message: format!("{path}: error: {e}"),
    }
}

/// Parses arguments and the environment into a config. `Err` carries the
/// exit status and the text to print.
pub fn parse_args<I, T>(args: I, atom_cap_var: Option<String>) -> Result<CliConfig, (i32, String)>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| {
        let status = if e.use_stderr() { 1 } else { 0 };
        (status, e.render().to_string())
    })?;
    let (command, opts) = match cli.command {
        CommandArgs::Solve(o) => (Command::Solve, o),
        CommandArgs::Ground(o) => (Command::Ground, o),
        CommandArgs::Reduct(o) => (Command::Reduct, o),
        CommandArgs::Compare(o) => (Command::Compare, o),
    };
    let atom_cap = match atom_cap_var {
        None => DEFAULT_ATOM_CAP,
        Some(v) => v.trim().parse().map_err(|_| {
            (
                1,
                format!("error: {ATOM_CAP_VAR} must be a non-negative integer, got `{v}`\n"),
            )
        })?,
    };
    Ok(CliConfig {
        command,
        semantics: opts.semantics,
        route: opts.route,
        model: opts.model,
        format: opts.format,
        input: opts.input,
        atom_cap,
    })
}

/// Entry point for the binary.
pub fn main_with_env() -> i32 {
    let cap = std::env::var(ATOM_CAP_VAR).ok();
    let config = match parse_args(std::env::args_os(), cap) {
        Ok(c) => c,
        Err((status, text)) => {
            if status == 0 {
                print!("{text}");
            } else {
                eprint!("{text}");
            }
            return status;
        }
    };
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(&config, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs one command, writing results to `out` and diagnostics to `err`.
pub fn run(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = execute(config).and_then(|text| {
        out.write_all(text.as_bytes())
            .map_err(|e| Failure::usage(format!("error: cannot write output: {e}")))
    });
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "{}", f.message);
            f.status
        }
    }
}

fn execute(config: &CliConfig) -> Result<String, Failure> {
    let path = config.input.display().to_string();
    let text = std::fs::read_to_string(&config.input)
        .map_err(|e| Failure::usage(format!("{path}: error: cannot read file: {e}")))?;
    let registry = Registry::new();
    let prog = parse_program(&Source::new(path.clone(), text), &registry).map_err(|e| Failure::usage(e.to_string()))?;
    let model = match &config.model {
        Some(m) => Some(parse_atom_set(m, &prog).map_err(|e| Failure::usage(e.to_string()))?),
        None => None,
    };
    let solver = Solver::new(&registry).with_atom_cap(config.atom_cap);

    match config.command {
        Command::Solve => solve(config, &solver, &prog, &path),
        Command::Ground => {
            // grounding over a Herbrand universe does not depend on the
            // interpretation; --model is only validated
            let rules = ground_rules(&prog, &registry, &path)?;
            Ok(emit_ground(config.format, &rules))
        }
        Command::Reduct => {
            let Some(model) = model else {
                return Err(Failure::usage(format!(
                    "{path}: error: the reduct command requires --model"
                )));
            };
            let rules: Vec<GroundFormula> = ground_rules(&prog, &registry, &path)?
                .iter()
                .map(|g| reduct(g, &model, &prog.universe).formula)
                .collect();
            Ok(emit_ground(config.format, &rules))
        }
        Command::Compare => {
            let c = solver.compare(&prog).map_err(|e| solve_failure(&path, e))?;
            Ok(emit_comparison(config.format, &c))
        }
    }
}

fn ground_rules(prog: &Program, registry: &Registry, path: &str) -> Result<Vec<GroundFormula>, Failure> {
    prog.rules
        .iter()
        .map(|r| ground(&r.to_sentence(), &prog.universe, registry))
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::usage(format!("{path}: error: {e}")))
}

fn emit_ground(format: Format, rules: &[GroundFormula]) -> String {
    match format {
        Format::Text => rules.iter().map(|g| render_ground(g) + "\n").collect(),
        Format::Json => serde_json::to_string_pretty(rules).expect("ground formulas serialize") + "\n",
    }
}

fn label(r: &SolveResult) -> String {
    let s = match r.semantics {
        Semantics::Sm => "sm",
        Semantics::Flp => "flp",
    };
    let t = match r.route {
        Route::Reduct => "reduct",
        Route::Operator => "operator",
    };
    format!("{s}/{t}")
}

fn count(n: usize) -> String {
    if n == 1 {
        "1 model".into()
    } else {
        format!("{n} models")
    }
}

fn model_text(m: &AtomSet) -> String {
    m.iter().map(|a| format!(" {a}")).collect()
}

fn answers(models: &[AtomSet]) -> String {
    models
        .iter()
        .enumerate()
        .map(|(n, m)| format!("Answer {}:{}\n", n + 1, model_text(m)))
        .collect()
}

fn solve(config: &CliConfig, solver: &Solver, prog: &Program, path: &str) -> Result<String, Failure> {
    let semantics: &[Semantics] = match config.semantics {
        SemanticsArg::Sm => &[Semantics::Sm],
        SemanticsArg::Flp => &[Semantics::Flp],
        SemanticsArg::Both => &[Semantics::Sm, Semantics::Flp],
    };
    let grid = config.semantics == SemanticsArg::Both || config.route == RouteArg::Both;
    let mut runs = Vec::new();
    let mut skipped = Vec::new();
    for &s in semantics {
        let routes: Vec<Route> = match config.route {
            RouteArg::Reduct => vec![Route::Reduct],
            RouteArg::Operator => vec![Route::Operator],
            RouteArg::Both => vec![Route::Reduct, Route::Operator],
            RouteArg::Auto if s == Semantics::Sm && prog.all_intensional() => vec![Route::Reduct],
            RouteArg::Auto => vec![Route::Operator],
        };
        for r in routes {
            match solver.solve(prog, s, r) {
                // a partial intensional set rules out one cell of the grid only
                Err(SolveError::ReductRouteNeedsAllIntensional) if grid => skipped.push("sm/reduct"),
                res => runs.push(res.map_err(|e| solve_failure(path, e))?),
            }
        }
    }

    if !grid {
        let r = &runs[0];
        return Ok(match config.format {
            Format::Text => answers(&r.models),
            Format::Json => serde_json::to_string(r).expect("results serialize") + "\n",
        });
    }

    let mut agreement = Vec::new();
    for (i, a) in runs.iter().enumerate() {
        for b in &runs[i + 1..] {
            agreement.push((label(a), label(b), a.models == b.models));
        }
    }
    Ok(match config.format {
        Format::Json => {
            let table: Vec<_> = agreement
                .iter()
                .map(|(a, b, same)| json!({"left": a, "right": b, "agree": same}))
                .collect();
            let v = json!({"results": runs, "skipped": skipped, "agreement": table});
            serde_json::to_string(&v).expect("results serialize") + "\n"
        }
        Format::Text => {
            let mut s = String::new();
            for r in &runs {
                s += &format!("% {} ({})\n", label(r), count(r.models.len()));
                s += &answers(&r.models);
            }
            for k in &skipped {
                s += &format!("% {k} skipped: not every predicate is intensional\n");
            }
            s += "% agreement\n";
            for (a, b, same) in &agreement {
                s += &format!("% {a} vs {b}: {}\n", if *same { "same" } else { "differ" });
            }
            s
        }
    })
}

fn emit_comparison(format: Format, c: &Comparison) -> String {
    if format == Format::Json {
        return serde_json::to_string(c).expect("comparison serializes") + "\n";
    }
    let mut s = String::new();
    s += &format!("SM ({})\n", count(c.sm.models.len()));
    s += &answers(&c.sm.models);
    s += &format!("FLP ({})\n", count(c.flp.models.len()));
    s += &answers(&c.flp.models);
    s += &format!("Difference ({})\n", count(c.difference.len()));
    for m in &c.only_sm {
        s += &format!("SM only:{}\n", model_text(m));
    }
    for m in &c.only_flp {
        s += &format!("FLP only:{}\n", model_text(m));
    }
    if c.class.in_class {
        s += "Class: in class\n";
    } else {
        s += "Class: not in class\n";
        for v in &c.class.violations {
            s += &format!("rule {}: {}: {}\n", v.rule, v.literal, v.reason);
        }
    }
    if c.violates_prop4 {
        s += "WARNING: program is in class but the semantics differ\n";
    }
    s
}
