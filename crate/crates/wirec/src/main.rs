use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use wirec::equivalence::{bisimilar, verdict_json, verdict_text};
use wirec::error::Error;
use wirec::exec::{default_mode, ExecMode};
use wirec::lts::{explore, export_dot, export_json, render_text};
use wirec::parse::{parse_program, Program};
use wirec::sorting::check_definitions;
use wirec::stdlib::{law_suite, laws_json, laws_text};
use wirec::syntax::{print_term, star, Alphabet, Term};

const DEFAULT_BUDGET: usize = 10_000;

#[derive(Parser)]
#[command(
    name = "wirec",
    version,
    about = "Interpreter, LTS explorer and bisimilarity checker for wire programs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a program and verify every definition against its declared sort
    Check { file: PathBuf },
    /// Explore the transition graph of a named definition
    Lts {
        file: PathBuf,
        name: String,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide bisimilarity of two named definitions
    Bisim {
        file: PathBuf,
        left: String,
        right: String,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the categorical law suite on seeded random instances
    Laws {
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Evaluate instances one at a time instead of in parallel
        #[arg(long)]
        sequential: bool,
    },
    /// Print the 180-degree rotation of a named definition and its sort
    Star { file: PathBuf, name: String },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Budget { .. } => 2,
        Error::IncompatibleSorts { .. } => 3,
        _ => 1,
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(&e))
}

fn resolve_budget(flag: Option<usize>) -> Result<usize, Error> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("WIREC_BUDGET") {
        Ok(text) => text
            .parse()
            .map_err(|_| Error::Schema(format!("invalid WIREC_BUDGET value `{text}`"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn load(file: &PathBuf) -> Result<Program, Error> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Error::Schema(format!("cannot read {}: {e}", file.display())))?;
    let program = parse_program(&text)?;
    check_definitions(&program)?;
    Ok(program)
}

fn named(program: &Program, name: &str) -> Result<Term, Error> {
    program
        .def(name)
        .map(|d| d.term.clone())
        .ok_or_else(|| Error::Schema(format!("no definition named `{name}`")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Check { file } => {
            let program = match load(&file) {
                Ok(p) => p,
                Err(e) => return fail(e),
            };
            for def in &program.defs {
                println!("{} : {}", def.name, def.sort.render_mode(program.mode));
            }
            ExitCode::SUCCESS
        }
        Cmd::Lts {
            file,
            name,
            budget,
            format,
        } => {
            let result = (|| {
                let program = load(&file)?;
                let term = named(&program, &name)?;
                let budget = resolve_budget(budget)?;
                explore(&term, &program.alphabet, program.mode, budget)
            })();
            let lts = match result {
                Ok(l) => l,
                Err(e) => return fail(e),
            };
            match format {
                Format::Text => print!("{}", render_text(&lts)),
                Format::Json => println!("{}", export_json(&lts)),
                Format::Dot => print!("{}", export_dot(&lts)),
            }
            if lts.complete {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: state budget exceeded; graph is partial");
                ExitCode::from(2)
            }
        }
        Cmd::Bisim {
            file,
            left,
            right,
            budget,
            format,
        } => {
            let result = (|| {
                let program = load(&file)?;
                let l = named(&program, &left)?;
                let r = named(&program, &right)?;
                let budget = resolve_budget(budget)?;
                let verdict = bisimilar(&l, &r, &program.alphabet, program.mode, budget)?;
                Ok((verdict, program))
            })();
            let (verdict, program) = match result {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            match format {
                Format::Json => println!("{}", verdict_json(&verdict, &program.alphabet)),
                _ => print!("{}", verdict_text(&verdict, &program.alphabet)),
            }
            if verdict.bisimilar {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(10)
            }
        }
        Cmd::Laws {
            n_max,
            seed,
            budget,
            format,
            sequential,
        } => {
            let result = (|| {
                let alphabet = Alphabet::new(vec!["0".to_string(), "1".to_string()])?;
                let budget = resolve_budget(budget)?;
                let exec = if sequential {
                    ExecMode::Sequential
                } else {
                    default_mode()
                };
                law_suite(&alphabet, n_max, seed, budget, exec)
            })();
            let outcomes = match result {
                Ok(o) => o,
                Err(e) => return fail(e),
            };
            match format {
                Format::Json => println!("{}", laws_json(&outcomes)),
                _ => print!("{}", laws_text(&outcomes)),
            }
            if outcomes.iter().all(|o| o.ok) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Cmd::Star { file, name } => {
            let result = (|| {
                let program = load(&file)?;
                let def = program
                    .def(&name)
                    .ok_or_else(|| Error::Schema(format!("no definition named `{name}`")))?;
                let rotated = star(&def.term);
                let sort = def.sort.star();
                Ok((print_term(&rotated, &program.alphabet), sort, program.mode))
            })();
            match result {
                Ok((text, sort, mode)) => {
                    println!("{text}");
                    println!("sort: {}", sort.render_mode(mode));
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
    }
}
