//! The `mslh` binary: satisfiability, model extraction, and ground
//! queries for monadic shallow linear Horn clause sets, plus a small
//! tree-automata toolbox.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mslh_cli::{
    clause_listing, model_json, parse_limits, parse_query, run_approx, run_member, run_model,
    run_rrs, run_sat, sat_report_json, ta_accepts, ta_clauses, ta_from_atom, CliError,
    PipelineOptions, ProblemFile,
};
use mslh_core::treeauto::TreeAutomaton;

#[derive(Parser)]
#[command(name = "mslh", version, about = "Saturation-based satisfiability for MSLH clause sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct PipelineArgs {
    /// Problem file
    file: String,
    /// Skip the #split directives
    #[arg(long)]
    no_split: bool,
    /// Skip the monadic/shallow/linear approximation
    #[arg(long)]
    no_approx: bool,
    /// Saturation limits as `<max_clauses>,<max_iterations>`
    #[arg(long)]
    limits: Option<String>,
    /// Structured JSON output
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability of the clause set
    Sat(PipelineArgs),
    /// Extract and print the finite model of a satisfiable set
    Model(PipelineArgs),
    /// Answer a ground-atom query over the original signature
    Member {
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Ground atom, e.g. `r(g(c),c)`
        query: String,
    },
    /// Apply reflexive relation splitting only
    Rrs {
        file: String,
        /// Also remove redundant clauses afterwards
        #[arg(long)]
        cleanup: bool,
    },
    /// Apply splitting and the MSLH approximation, print the result
    Approx(PipelineArgs),
    /// Tree-automata operations
    Ta {
        #[command(subcommand)]
        op: TaCommand,
    },
}

#[derive(Subcommand)]
enum TaCommand {
    /// Automaton of the ground instances of a linear atom
    FromAtom {
        /// Atom, e.g. `r(X,g(a,Y))`
        atom: String,
        /// Signature `f/2 a/0 ; r/2` (predicates after `;`)
        #[arg(long)]
        sig: String,
    },
    /// Test acceptance of a ground term (prints true/false)
    Accepts { file: String, term: String },
    /// Test language emptiness (prints true/false)
    Empty { file: String },
    /// Complement automaton
    Complement { file: String },
    /// Product intersection of two automata
    Intersect { left: String, right: String },
    /// Union of two automata
    Union { left: String, right: String },
    /// Emit the equivalent MSLH clause set
    ToClauses { file: String },
}

fn read(path: &str) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

fn pipeline_options(args: &PipelineArgs) -> Result<PipelineOptions, CliError> {
    Ok(PipelineOptions {
        no_split: args.no_split,
        no_approx: args.no_approx,
        limits: args.limits.as_deref().map(parse_limits).transpose()?,
    })
}

fn load(args: &PipelineArgs) -> Result<(ProblemFile, PipelineOptions), i32> {
    let src = read(&args.file).map_err(|e| {
        eprintln!("error: {e}");
        10
    })?;
    let file = ProblemFile::parse(&src).map_err(|e| report(e))?;
    let opts = pipeline_options(args).map_err(|e| report(e))?;
    Ok((file, opts))
}

fn report(e: CliError) -> i32 {
    eprintln!("error: {e}");
    e.exit_code()
}

fn run() -> Result<i32, i32> {
    match Cli::parse().command {
        Command::Sat(args) => {
            let (file, opts) = load(&args)?;
            let rep = run_sat(&file, &opts).map_err(report)?;
            if args.json {
                println!("{}", sat_report_json(&rep));
            } else {
                println!("{}", rep.verdict);
            }
            Ok(rep.verdict.exit_code())
        }
        Command::Model(args) => {
            let (file, opts) = load(&args)?;
            let (model, _, _) = run_model(&file, &opts).map_err(report)?;
            if args.json {
                println!("{}", model_json(&model));
            } else {
                print!("{model}");
            }
            Ok(0)
        }
        Command::Member { pipeline, query } => {
            let (file, opts) = load(&pipeline)?;
            let atom = parse_query(&query).map_err(report)?;
            let answer = run_member(&file, &opts, &atom).map_err(report)?;
            println!("{answer}");
            Ok(0)
        }
        Command::Rrs { file, cleanup } => {
            let src = read(&file).map_err(|e| {
                eprintln!("error: {e}");
                10
            })?;
            let problem = ProblemFile::parse(&src).map_err(report)?;
            let out = run_rrs(&problem, cleanup).map_err(report)?;
            print!("{}", clause_listing(&out));
            Ok(0)
        }
        Command::Approx(args) => {
            let (file, opts) = load(&args)?;
            let out = run_approx(&file, &opts).map_err(report)?;
            print!("{}", clause_listing(&out));
            Ok(0)
        }
        Command::Ta { op } => run_ta(op),
    }
}

fn load_ta(path: &str) -> Result<TreeAutomaton, i32> {
    let src = read(path).map_err(|e| {
        eprintln!("error: {e}");
        10
    })?;
    TreeAutomaton::from_text(&src).map_err(|e| report(CliError::Automaton(e)))
}

fn run_ta(op: TaCommand) -> Result<i32, i32> {
    match op {
        TaCommand::FromAtom { atom, sig } => {
            let ta = ta_from_atom(&atom, &sig).map_err(report)?;
            print!("{}", ta.to_text());
        }
        TaCommand::Accepts { file, term } => {
            let src = read(&file).map_err(|e| {
                eprintln!("error: {e}");
                10
            })?;
            println!("{}", ta_accepts(&src, &term).map_err(report)?);
        }
        TaCommand::Empty { file } => {
            println!("{}", load_ta(&file)?.is_empty());
        }
        TaCommand::Complement { file } => {
            print!("{}", load_ta(&file)?.complement().to_text());
        }
        TaCommand::Intersect { left, right } => {
            let a = load_ta(&left)?;
            let b = load_ta(&right)?;
            let out = a.intersect(&b).map_err(|e| report(CliError::Automaton(e)))?;
            print!("{}", out.to_text());
        }
        TaCommand::Union { left, right } => {
            let a = load_ta(&left)?;
            let b = load_ta(&right)?;
            let out = a.union(&b).map_err(|e| report(CliError::Automaton(e)))?;
            print!("{}", out.to_text());
        }
        TaCommand::ToClauses { file } => {
            let src = read(&file).map_err(|e| {
                eprintln!("error: {e}");
                10
            })?;
            print!("{}", clause_listing(&ta_clauses(&src).map_err(report)?));
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) | Err(code) => ExitCode::from(code.clamp(0, 255) as u8),
    }
}
