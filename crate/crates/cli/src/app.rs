//! Command-line surface of `dmc` and the commands behind it.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::builder::BoolishValueParser;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::json;

use dmc_core::diagram::{
    coherence_suite, eta_suite, min_square_suite, powers_suite, prop_dist_suite, verify_all,
    SuiteReport,
};
use dmc_core::model2i::render_table;
use dmc_core::value::point_from_naturals;
use dmc_core::{
    elaborate, parse_value, verify_model_equations, Config, EvalOptions, Outcome, Value,
};

use crate::{parse_program, Body, Definition, Directive, ProgramFile};

#[derive(Debug, Parser)]
#[command(
    name = "dmc",
    version,
    about = "Typecheck, run and classify tiered recursion programs"
)]
pub struct Cli {
    #[command(flatten)]
    pub opts: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Number of hierarchy levels i.
    #[arg(long, global = true, env = "DMC_LEVELS", default_value_t = 3,
          value_parser = clap::value_parser!(u8).range(1..))]
    pub levels: u8,
    /// Evaluation budget.
    #[arg(long, global = true, env = "DMC_FUEL", default_value_t = 1_000_000,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub fuel: u64,
    /// Allow two-branch recursion on notation.
    #[arg(long, global = true, env = "DMC_EXTENDED_PRN", value_parser = BoolishValueParser::new())]
    pub extended_prn: bool,
    /// Cut minimization off after B candidates, answering 0.
    #[arg(long = "bound", global = true, env = "DMC_BOUND")]
    pub search_bound: Option<u64>,
    /// Largest sample for diagram checks (default: the built-in ranges).
    #[arg(long = "samples", global = true, env = "DMC_SAMPLES")]
    pub samples_bound: Option<u64>,
    #[arg(long, global = true, env = "DMC_JSON", value_parser = BoolishValueParser::new())]
    pub json: bool,
    /// Print one line per evaluation step to stderr.
    #[arg(long, global = true, env = "DMC_TRACE", value_parser = BoolishValueParser::new())]
    pub trace: bool,
}

impl RunConfig {
    pub fn config(&self) -> Config {
        Config {
            levels: self.levels,
            extended_prn: self.extended_prn,
        }
    }

    pub fn eval_options(&self) -> EvalOptions {
        EvalOptions {
            fuel: self.fuel,
            search_bound: self.search_bound,
            trace: self.trace,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Typecheck every definition and run the file's directives.
    Check { file: PathBuf },
    /// Evaluate a definition on naturals (filling its N slots) or on one value.
    Run {
        file: PathBuf,
        name: String,
        args: Vec<String>,
    },
    /// Report the hierarchy level of a definition.
    Classify { file: PathBuf, name: String },
    /// Run the distributivity, coherence, naturality and minimization squares.
    VerifyDiagrams,
    /// Check the grid model against the generator rules.
    VerifyModel,
    /// Print the M_p action table on row objects.
    Table,
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_FUEL: u8 = 2;

/// What a command prints and how it exits.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Report {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Report {
    fn error(msg: impl std::fmt::Display) -> Report {
        Report {
            stderr: format!("error: {msg}\n"),
            code: EXIT_ERROR,
            ..Default::default()
        }
    }

    /// Errors take precedence over fuel exhaustion.
    fn raise(&mut self, code: u8) {
        self.code = match (self.code, code) {
            (EXIT_ERROR, _) | (_, EXIT_ERROR) => EXIT_ERROR,
            (a, b) => a.max(b),
        };
    }
}

fn load(file: &PathBuf) -> Result<ProgramFile, String> {
    let src = std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    parse_program(&src).map_err(|e| format!("{}:{e}", file.display()))
}

fn find<'a>(prog: &'a ProgramFile, name: &str) -> Result<&'a Definition, String> {
    prog.get(name)
        .ok_or_else(|| format!("no definition named '{name}'"))
}

fn elaborate_def(d: &Definition, cfg: &Config) -> Result<dmc_core::Program, String> {
    let p = elaborate(&d.term, cfg).map_err(|e| format!("{}: {e}", d.name))?;
    if let Body::Term { declared, .. } = &d.body {
        if !(p.judgment.dom.iso_eq(&declared.dom) && p.judgment.cod.iso_eq(&declared.cod)) {
            return Err(format!(
                "{}: Mismatch: declared {} -> {}, but the term has {} -> {}",
                d.name,
                declared.dom.normalize(),
                declared.cod.normalize(),
                p.judgment.dom,
                p.judgment.cod
            ));
        }
    }
    Ok(p)
}

/// Naturals fill the domain's `N` slots; a single non-numeric argument is
/// read as a value.
fn input_for(p: &dmc_core::Program, args: &[String]) -> Result<Value, String> {
    let nats: Option<Vec<BigUint>> = args.iter().map(|a| a.parse().ok()).collect();
    match nats {
        Some(nats) => point_from_naturals(&p.dom_shape, &nats).ok_or_else(|| {
            format!(
                "expected naturals for the domain {}, got {} argument(s)",
                p.judgment.dom,
                nats.len()
            )
        }),
        None if args.len() == 1 => parse_value(&args[0]).map_err(|e| e.to_string()),
        None => Err("arguments must be naturals or a single value".into()),
    }
}

fn evaluate(
    name: &str,
    p: &dmc_core::Program,
    input: &Value,
    opts: &RunConfig,
    report: &mut Report,
) -> Option<serde_json::Value> {
    match p.run(input, &opts.eval_options()) {
        Ok(e) => {
            for line in &e.trace {
                let _ = writeln!(report.stderr, "{line}");
            }
            if matches!(e.outcome, Outcome::FuelExhausted(_)) {
                report.raise(EXIT_FUEL);
            }
            Some(json!({
                "name": name,
                "input": input.to_json(),
                "outcome": e.outcome.to_json(),
                "fuel_used": e.fuel_used,
                "display": e.outcome.to_string(),
            }))
        }
        Err(err) => {
            let _ = writeln!(report.stderr, "error: {name}: {err}");
            report.raise(EXIT_ERROR);
            None
        }
    }
}

fn check(file: &PathBuf, opts: &RunConfig) -> Report {
    let prog = match load(file) {
        Ok(p) => p,
        Err(e) => return Report::error(e),
    };
    let cfg = opts.config();
    let mut report = Report::default();
    let mut judgments = Vec::new();
    let mut programs = std::collections::HashMap::new();
    for d in &prog.definitions {
        match elaborate_def(d, &cfg) {
            Ok(p) => {
                let j = &p.judgment;
                if !opts.json {
                    let _ = writeln!(
                        report.stdout,
                        "{} : {} -> {}  [depth {}]",
                        d.name, j.dom, j.cod, j.mindepth
                    );
                }
                judgments.push(json!({
                    "name": d.name,
                    "dom": j.dom.to_string(),
                    "cod": j.cod.to_string(),
                    "mindepth": j.mindepth,
                }));
                programs.insert(d.name.clone(), p);
            }
            Err(e) => {
                let _ = writeln!(report.stderr, "error: {e}");
                judgments.push(json!({ "name": d.name, "error": e }));
                report.raise(EXIT_ERROR);
            }
        }
    }
    let mut runs = Vec::new();
    for dir in &prog.directives {
        match dir {
            Directive::Check { name } => {
                if programs.contains_key(name) && !opts.json {
                    let _ = writeln!(report.stdout, "check {name}: ok");
                }
            }
            Directive::Run { name, args } => {
                let Some(p) = programs.get(name) else {
                    continue;
                };
                let input = match args.as_slice() {
                    [] => Value::Star,
                    [v] => v.clone(),
                    vs => match vs
                        .iter()
                        .map(|v| v.as_nat().cloned())
                        .collect::<Option<Vec<_>>>()
                        .and_then(|n| point_from_naturals(&p.dom_shape, &n))
                    {
                        Some(v) => v,
                        None => {
                            let _ = writeln!(
                                report.stderr,
                                "error: run {name}: arguments do not fit {}",
                                p.judgment.dom
                            );
                            report.raise(EXIT_ERROR);
                            continue;
                        }
                    },
                };
                if let Some(r) = evaluate(name, p, &input, opts, &mut report) {
                    if !opts.json {
                        let _ = writeln!(
                            report.stdout,
                            "{name} {input} = {}",
                            r["display"].as_str().unwrap_or("")
                        );
                    }
                    runs.push(r);
                }
            }
        }
    }
    if opts.json {
        report.stdout = json!({ "definitions": judgments, "runs": runs }).to_string() + "\n";
    }
    report
}

fn run(file: &PathBuf, name: &str, args: &[String], opts: &RunConfig) -> Report {
    let result = load(file).and_then(|prog| {
        let d = find(&prog, name)?;
        let p = elaborate_def(d, &opts.config())?;
        let input = input_for(&p, args)?;
        Ok((p, input))
    });
    let (p, input) = match result {
        Ok(x) => x,
        Err(e) => return Report::error(e),
    };
    let mut report = Report::default();
    if let Some(r) = evaluate(name, &p, &input, opts, &mut report) {
        report.stdout = if opts.json {
            r.to_string()
        } else {
            r["display"].as_str().unwrap_or("").to_string()
        } + "\n";
    }
    report
}

pub fn class_line(depth: u32) -> String {
    format!(
        "level {depth} → class P^Σ_{depth} membership bound: □ᴾ_{}",
        depth + 1
    )
}

fn classify(file: &PathBuf, name: &str, opts: &RunConfig) -> Report {
    let result = load(file).and_then(|prog| elaborate_def(find(&prog, name)?, &opts.config()));
    match result {
        Ok(p) => {
            let d = p.judgment.mindepth;
            let stdout = if opts.json {
                json!({ "name": name, "level": d, "line": class_line(d) }).to_string()
            } else {
                class_line(d)
            };
            Report {
                stdout: stdout + "\n",
                ..Default::default()
            }
        }
        Err(e) => Report::error(e),
    }
}

fn suites(opts: &RunConfig) -> Vec<SuiteReport> {
    let (cfg, eo) = (opts.config(), opts.eval_options());
    match opts.samples_bound {
        None => verify_all(&cfg, &eo),
        Some(b) => {
            let small = b.min(8);
            vec![
                prop_dist_suite(b, small, &cfg, &eo),
                powers_suite(small, small, &cfg, &eo),
                coherence_suite(b, small, &cfg, &eo),
                eta_suite(b, &cfg, &eo),
                min_square_suite(b, &cfg, &eo),
            ]
        }
    }
}

fn verify_diagrams(opts: &RunConfig) -> Report {
    let reports = suites(opts);
    let mut report = Report::default();
    for s in &reports {
        if !s.failures.is_empty() {
            report.raise(EXIT_ERROR);
        } else if !s.inconclusive.is_empty() {
            report.raise(EXIT_FUEL);
        }
    }
    report.stdout = if opts.json {
        serde_json::Value::Array(reports.iter().map(SuiteReport::to_json).collect()).to_string()
            + "\n"
    } else {
        let mut out = String::new();
        for s in &reports {
            let _ = writeln!(out, "{} {s}", if s.passed() { "ok  " } else { "FAIL" });
            for f in s.failures.iter().chain(&s.inconclusive) {
                let _ = writeln!(out, "    {f}");
            }
        }
        out
    };
    report
}

fn verify_model(opts: &RunConfig) -> Report {
    let r = verify_model_equations(opts.levels);
    Report {
        stdout: if opts.json {
            r.to_json().to_string() + "\n"
        } else {
            r.to_string()
        },
        stderr: String::new(),
        code: if r.passed() { EXIT_OK } else { EXIT_ERROR },
    }
}

pub fn execute(cli: &Cli) -> Report {
    let opts = &cli.opts;
    match &cli.command {
        Command::Check { file } => check(file, opts),
        Command::Run { file, name, args } => run(file, name, args, opts),
        Command::Classify { file, name } => classify(file, name, opts),
        Command::VerifyDiagrams => verify_diagrams(opts),
        Command::VerifyModel => verify_model(opts),
        Command::Table => Report {
            stdout: render_table(opts.levels),
            ..Default::default()
        },
    }
}
