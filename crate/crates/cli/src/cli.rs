//! Argument parsing and subcommand dispatch. JSON and CSV go to standard
//! output, or to `--out`; reports and diagnostics go to standard error.
//!
//! Exit codes: 0 feasible or passed, 1 infeasible or failed, 2 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use uniq_core::arith::Rational;
use uniq_core::regions::{scan, GridSpec, Target};
use uniq_core::scenarios::{default_s0_tol, s0, PredicateId, ProblemParams, ScenarioId};

use crate::doc::{check_auto, check_predicate, check_scenario, s0_document, sigma_document, to_json, VerdictDocument};
use crate::figure::{render_figure, standard_figure};
use crate::verify::{run as run_suites, SuiteSelection};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// What `check` decides: every applicable scenario, one scenario, or one
/// closed-form region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckTarget {
    Auto,
    Scenario(ScenarioId),
    Predicate(PredicateId),
}

impl FromStr for CheckTarget {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        if text == "auto" {
            return Ok(CheckTarget::Auto);
        }
        match Target::from_str(text).map_err(|e| e.to_string())? {
            Target::Scenario(id) => Ok(CheckTarget::Scenario(id)),
            Target::Predicate(id) => Ok(CheckTarget::Predicate(id)),
        }
    }
}

/// Comma-separated scenario and predicate ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetList(pub Vec<Target>);

impl FromStr for TargetList {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let ts = text.split(',').map(str::trim).filter(|t| !t.is_empty()).map(|t| Target::from_str(t).map_err(|e| e.to_string())).collect::<Result<Vec<_>, _>>()?;
        if ts.is_empty() {
            return Err("at least one target is required".into());
        }
        Ok(TargetList(ts))
    }
}

#[derive(Debug, Parser)]
#[command(name = "uniq-regions", version, about = "Exact exponent feasibility and uniqueness regions for power-type NLS")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide one scenario, one region predicate, or every applicable scenario.
    Check {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        s: Rational,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Rational,
        /// Scenario id, predicate id, or `auto`.
        #[arg(long, default_value = "auto")]
        scenario: CheckTarget,
        /// Enclosure width for comparisons against the critical threshold.
        #[arg(long, allow_hyphen_values = true)]
        tol: Option<Rational>,
    },
    /// Projected sigma set of a scenario next to its closed form.
    Sigma {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        s: Rational,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Rational,
        #[arg(long)]
        scenario: ScenarioId,
    },
    /// Scan targets over the standard grid and write CSV.
    Region {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        targets: TargetList,
        #[arg(long, allow_hyphen_values = true)]
        step: Rational,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the layered region figure as SVG.
    Figure {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "1/64", allow_hyphen_values = true)]
        step: Rational,
    },
    /// Run self-check suites.
    Verify {
        /// fm-oracle, witnesses, sigma-windows, coverage, chains, thresholds, or all.
        #[arg(long)]
        suite: SuiteSelection,
    },
    /// Enclose the critical regularity threshold for n >= 5.
    S0 {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        tol: Option<Rational>,
    },
}

/// A usage error tied to the flag that caused it.
#[derive(Debug)]
struct Usage {
    flag: &'static str,
    message: String,
}

fn usage(flag: &'static str, e: impl ToString) -> Usage {
    Usage { flag, message: e.to_string() }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn emit(&mut self, text: &str, file: Option<&PathBuf>, flag: &'static str) -> Result<(), Usage> {
        match file {
            Some(path) => {
                std::fs::write(path, text).map_err(|e| usage(flag, format!("cannot write {}: {e}", path.display())))?;
                let _ = writeln!(self.err, "wrote {}", path.display());
            }
            None => self.out.write_all(text.as_bytes()).map_err(|e| usage(flag, e))?,
        }
        Ok(())
    }
}

fn problem(n: u32, s: &Rational, alpha: &Rational) -> Result<ProblemParams, Usage> {
    ProblemParams::new(n, s.clone(), alpha.clone()).map_err(|e| usage("--n/--s/--alpha", e))
}

fn positive(flag: &'static str, x: Option<Rational>) -> Result<Rational, Usage> {
    let x = x.unwrap_or_else(default_s0_tol);
    if !x.is_positive() {
        return Err(usage(flag, format!("{x} must be positive")));
    }
    Ok(x)
}

fn verdict_exit(doc: &VerdictDocument) -> i32 {
    if doc.feasible {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn dispatch(command: Command, io: &mut Io<'_>) -> Result<i32, Usage> {
    match command {
        Command::Check { n, s, alpha, scenario, tol } => {
            let p = problem(n, &s, &alpha)?;
            let doc = match scenario {
                CheckTarget::Auto => check_auto(&p),
                CheckTarget::Scenario(id) => check_scenario(id, &p).map_err(|e| usage("--scenario", e))?,
                CheckTarget::Predicate(id) => check_predicate(id, &p, &positive("--tol", tol)?).map_err(|e| usage("--tol", e))?,
            };
            io.emit(&to_json(&doc), None, "--scenario")?;
            Ok(verdict_exit(&doc))
        }
        Command::Sigma { n, s, alpha, scenario } => {
            let p = problem(n, &s, &alpha)?;
            let doc = sigma_document(scenario, &p).map_err(|e| usage("--scenario", e))?;
            io.emit(&to_json(&doc), None, "--scenario")?;
            Ok(EXIT_OK)
        }
        Command::Region { n, targets, step, out } => {
            let spec = GridSpec::standard(n, step).map_err(|e| usage("--step", e))?;
            let grid = scan(&spec, &targets.0);
            io.emit(&grid.to_csv(), out.as_ref(), "--out")?;
            Ok(EXIT_OK)
        }
        Command::Figure { n, out, step } => {
            let f = standard_figure(n).map_err(|e| usage("--n", e))?;
            let spec = f.grid_spec(step).map_err(|e| usage("--step", e))?;
            let grid = scan(&spec, &f.grid_targets());
            let svg = render_figure(&f, &grid).map_err(|e| usage("--n", e))?;
            io.emit(&svg, out.as_ref(), "--out")?;
            Ok(EXIT_OK)
        }
        Command::Verify { suite } => {
            let doc = run_suites(&suite);
            for r in &doc.suites {
                let _ = writeln!(io.err, "{}", r.summary());
                for f in &r.failures {
                    let _ = writeln!(io.err, "  {f}");
                }
            }
            io.emit(&to_json(&doc), None, "--suite")?;
            Ok(if doc.passed { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::S0 { n, tol } => {
            let tol = positive("--tol", tol)?;
            let e = s0(n, &tol).map_err(|e| usage("--n", e))?;
            io.emit(&to_json(&s0_document(&e, &tol)), None, "--n")?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let mut io = Io { out, err };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(u) => {
            let _ = writeln!(io.err, "error: {}: {}", u.flag, u.message);
            EXIT_USAGE
        }
    }
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("uniq-regions").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn feasible_and_infeasible_checks() {
        let (code, out, _) = call(&["check", "--n", "3", "--s", "1/2", "--alpha", "3/2", "--scenario", "subcritical-usual"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"feasible\": true"));
        let (code, _, _) = call(&["check", "--n", "3", "--s", "1/2", "--alpha", "2", "--scenario", "subcritical-usual"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn usage_errors_name_the_flag() {
        let (code, _, err) = call(&["check", "--n", "3", "--s", "1/0", "--alpha", "1"]);
        assert_eq!(code, 2);
        assert!(err.contains("--s"), "{err}");
        let (code, _, err) = call(&["check", "--n", "3", "--s", "1/2", "--alpha", "1/2", "--scenario", "subcritical-usual"]);
        assert_eq!(code, 2);
        assert!(err.contains("--scenario"), "{err}");
        let (code, _, err) = call(&["check", "--n", "3", "--s", "1/2", "--alpha", "1", "--scenario", "bogus"]);
        assert_eq!(code, 2);
        assert!(err.contains("--scenario"), "{err}");
    }

    #[test]
    fn target_lists_parse() {
        let l: TargetList = "thm11, subcritical-usual".parse().unwrap();
        assert_eq!(l.0.len(), 2);
        assert!(",".parse::<TargetList>().is_err());
    }
}
