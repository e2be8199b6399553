//! `nullary`: solve Łukasiewicz unification problems, check and generalize
//! unifiers, and emit or re-verify ascending chains above `ι′`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use nullary_core::chain::{ascending_chain, boundary_problem, verify_chain};
use nullary_core::cover::{degree, generalize};
use nullary_core::error::Error;
use nullary_core::json;
use nullary_core::mv::{check_unifier, solution_polyhedron, UnificationProblem};

#[derive(Parser)]
#[command(name = "nullary", version, about = "Exact Z-map tooling for Lukasiewicz unification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the solution polyhedron of a problem.
    Solve {
        /// Problem text, or a file holding it.
        #[arg(long)]
        problem: String,
        /// Number of variables.
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exit 0 iff the Z-map is a unifier of the problem.
    Check {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        unifier: PathBuf,
    },
    /// One strict generalization step.
    Generalize {
        #[arg(long)]
        unifier: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build, verify and store an ascending chain above the inclusion.
    Chain {
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 2)]
        vars: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-derive every verdict of a stored chain.
    Verify {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        problem: Option<String>,
    },
}

enum Failure {
    /// Exit code 1: a check said no, or the computation itself failed.
    Rejected(String),
    /// Exit code 2: unreadable or malformed input.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Format(_)
            | Error::Io(_)
            | Error::Syntax { .. }
            | Error::Arity { .. }
            | Error::UnsupportedArity(_)
            | Error::DimensionTooLow(_) => {
                Failure::Usage(e.to_string())
            }
            e => Failure::Rejected(e.to_string()),
        }
    }
}

fn problem_text(arg: &str) -> Result<String, Failure> {
    let p = Path::new(arg);
    if p.is_file() {
        fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
    } else {
        Ok(arg.to_string())
    }
}

fn emit(out: Option<&Path>, v: &serde_json::Value) -> Result<(), Failure> {
    match out {
        Some(p) => json::write_value(p, v)?,
        None => println!("{}", json::to_string(v)),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { problem, vars, out } => {
            let p = UnificationProblem::parse(problem_text(&problem)?.trim(), vars)?;
            emit(out.as_deref(), &json::polyhedron_to_json(&solution_polyhedron(&p)?))
        }
        Command::Check { problem, unifier } => {
            let sigma = json::zmap_from_json(&json::read_value(&unifier)?)?;
            let p = UnificationProblem::parse(problem_text(&problem)?.trim(), sigma.codomain_dim())?;
            if check_unifier(&p, &sigma)? {
                println!("unifier");
                Ok(())
            } else {
                Err(Failure::Rejected("not a unifier".into()))
            }
        }
        Command::Generalize { unifier, out } => {
            let eta = json::zmap_from_json(&json::read_value(&unifier)?)?;
            let g = generalize(&eta)?;
            let v = json!({
                "alpha": json::zmap_to_json(&g.alpha),
                "degree_in": json::rational_to_json(&degree(&g.padded)?),
                "degree_out": json::rational_to_json(&degree(&g.theta)?),
                "theta": json::zmap_to_json(&g.theta),
            });
            emit(Some(&out), &v)
        }
        Command::Chain { steps, vars, out } => {
            let records = ascending_chain(steps, vars)?;
            let report = verify_chain(&records, &boundary_problem());
            json::write_chain(&out, &records, &report)?;
            println!("{}", json::to_string(&json::report_to_json(&report)));
            Ok(())
        }
        Command::Verify { chain, problem } => {
            let records = json::read_chain(&chain)?;
            let p = match problem {
                Some(text) => {
                    let arity = records.first().map_or(2, |r| r.sigma.codomain_dim());
                    UnificationProblem::parse(problem_text(&text)?.trim(), arity)?
                }
                None => boundary_problem(),
            };
            let report = verify_chain(&records, &p);
            println!("{}", json::to_string(&json::report_to_json(&report)));
            if report.all_pass() {
                Ok(())
            } else {
                let failed: Vec<&str> = report
                    .verdicts
                    .iter()
                    .filter(|(_, ok)| !**ok)
                    .map(|(k, _)| k.as_str())
                    .collect();
                Err(Failure::Rejected(format!("failed: {}", failed.join(", "))))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected(msg)) => {
            eprintln!("nullary: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("nullary: {msg}");
            ExitCode::from(2)
        }
    }
}
