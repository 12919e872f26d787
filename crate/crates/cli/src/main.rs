//! `corfun`: command-line front end for corfun-core.
//!
//! Exit codes: 0 ok, 1 usage, 2 invalid input, 3 budget exceeded,
//! 4 invariant failure. Errors print one line `corfun: <kind>: <reason>`
//! on stderr.

mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use corfun_core::functor::{Budget, DEFAULT_BUDGET};
use corfun_core::Error;

use commands::{Format, Mode, SEED};
use input::{parse_range, Source};

#[derive(Parser, Debug)]
#[command(name = "corfun", version, about = "Correspondence functors over finite lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lower ideals, automorphisms and Möbius function of a poset
    #[command(subcommand)]
    Poset(PosetCmd),
    /// Lattice construction, invariants and quotients
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Join-endomorphisms of total orders
    #[command(subcommand)]
    Endo(EndoCmd),
    /// Forests of a lattice and their idempotents
    #[command(subcommand)]
    Forest(ForestCmd),
    /// Ranks, bases and actions of the functors F_T and S_{E,R}
    #[command(subcommand)]
    Functor(FunctorCmd),
    /// The fundamental module
    #[command(subcommand)]
    Module(ModuleCmd),
    /// Regression and property suites
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand, Debug)]
enum PosetCmd {
    Ideals(Source),
    Auts {
        #[command(flatten)]
        src: Source,
        /// Largest poset searched
        #[arg(long, default_value_t = 10)]
        bound: usize,
    },
    Mobius(Source),
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    /// Validate and print elements and covers
    Build(Source),
    /// Irreducibles, distributivity and the G/Γ partition
    Info(Source),
    /// Lattice of L- or K-closed ideals with the fibres of the projection
    Closure {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// The maps I↓ → T → L and T → K
    Quotients(Source),
    /// Hasse diagram in DOT
    Dot(Source),
}

#[derive(Subcommand, Debug)]
enum EndoCmd {
    /// Structure of End(n̄), n ≤ 4
    Total {
        #[arg(long)]
        n: usize,
    },
}

#[derive(clap::Args, Debug)]
struct ForestArgs {
    #[arg(long, conflicts_with_all = ["poset", "lattice", "random"])]
    name: Option<String>,
    #[arg(long, value_name = "FILE", conflicts_with_all = ["lattice", "random"])]
    poset: Option<PathBuf>,
    #[arg(long, value_name = "FILE", conflicts_with = "random")]
    lattice: Option<PathBuf>,
    /// Random forest on N vertices instead of a lattice
    #[arg(long, value_name = "N")]
    random: Option<usize>,
    #[arg(long, default_value_t = SEED)]
    seed: u64,
}

impl ForestArgs {
    fn source(&self) -> Option<Source> {
        (self.name.is_some() || self.poset.is_some() || self.lattice.is_some()).then(|| Source {
            name: self.name.clone(),
            poset: self.poset.clone(),
            lattice: self.lattice.clone(),
        })
    }
}

#[derive(Subcommand, Debug)]
enum ForestCmd {
    Build {
        #[command(flatten)]
        args: ForestArgs,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    Idempotents {
        #[command(flatten)]
        args: ForestArgs,
    },
}

#[derive(Subcommand, Debug)]
enum FunctorCmd {
    /// CSV x,formula,bruteforce,basis_count
    Rank {
        #[command(flatten)]
        src: Source,
        /// N or an inclusive range A..B
        #[arg(long, value_parser = parse_range)]
        x: (usize, usize),
        /// Skip the elimination column
        #[arg(long)]
        formula_only: bool,
    },
    /// Smith divisors of N
    Smith {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        x: usize,
    },
    /// The basis B_X
    Basis {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        x: usize,
    },
    /// Matrix of a correspondence on the fundamental functor
    Action {
        #[command(flatten)]
        src: Source,
        /// Relation JSON for U ⊆ Y × X
        #[arg(long, value_name = "FILE")]
        corr: PathBuf,
    },
    /// CSV x,span_rank,formula_op (distributive T only)
    GammaSpan {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_parser = parse_range)]
        x: (usize, usize),
    },
}

#[derive(Subcommand, Debug)]
enum ModuleCmd {
    /// Transport of the action across θ
    Check(Source),
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Dimension identities of the five worked examples
    Examples19 {
        #[arg(long, default_value_t = 5)]
        x_max: usize,
    },
    /// Seeded property sweep
    Invariants {
        #[arg(long, default_value_t = 2000)]
        cases: usize,
    },
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn budget() -> Result<Budget, Failure> {
    match std::env::var("CORFUN_BUDGET") {
        Err(_) => Ok(Budget::new(DEFAULT_BUDGET)),
        Ok(v) => v
            .trim()
            .parse::<u128>()
            .map(Budget::new)
            .map_err(|_| Failure::Usage(format!("CORFUN_BUDGET='{v}' is not a non-negative integer"))),
    }
}

/// Output and an optional deferred failure (printed output first).
type Outcome = (String, Option<Error>);

fn done(s: String) -> Outcome {
    (s, None)
}

fn run(cmd: Command) -> Result<Outcome, Failure> {
    let b = budget()?;
    Ok(match cmd {
        Command::Poset(PosetCmd::Ideals(s)) => done(commands::poset_ideals(&s)?),
        Command::Poset(PosetCmd::Auts { src, bound }) => done(commands::poset_auts(&src, bound)?),
        Command::Poset(PosetCmd::Mobius(s)) => done(commands::poset_mobius(&s)?),
        Command::Lattice(LatticeCmd::Build(s)) => done(commands::lattice_build(&s)?),
        Command::Lattice(LatticeCmd::Info(s)) => done(commands::lattice_info(&s)?),
        Command::Lattice(LatticeCmd::Closure { src, mode, format }) => {
            done(commands::lattice_closure(&src, mode, format)?)
        }
        Command::Lattice(LatticeCmd::Quotients(s)) => done(commands::lattice_quotients(&s)?),
        Command::Lattice(LatticeCmd::Dot(s)) => done(commands::lattice_dot(&s)?),
        Command::Endo(EndoCmd::Total { n }) => done(commands::endo_total(n)?),
        Command::Forest(ForestCmd::Build { args, format }) => {
            done(commands::forest_build(args.source().as_ref(), args.random, args.seed, format)?)
        }
        Command::Forest(ForestCmd::Idempotents { args }) => {
            done(commands::forest_idempotents(args.source().as_ref(), args.random, args.seed)?)
        }
        Command::Functor(FunctorCmd::Rank { src, x, formula_only }) => commands::functor_rank(&src, x, !formula_only, b)?,
        Command::Functor(FunctorCmd::Smith { src, x }) => done(commands::functor_smith(&src, x, b)?),
        Command::Functor(FunctorCmd::Basis { src, x }) => done(commands::functor_basis(&src, x, b)?),
        Command::Functor(FunctorCmd::Action { src, corr }) => done(commands::functor_action(&src, &corr, b)?),
        Command::Functor(FunctorCmd::GammaSpan { src, x }) => commands::functor_gamma_span(&src, x, b)?,
        Command::Module(ModuleCmd::Check(s)) => done(commands::module_check(&s)?),
        Command::Verify(VerifyCmd::Examples19 { x_max }) => commands::verify_examples(x_max)?,
        Command::Verify(VerifyCmd::Invariants { cases }) => commands::verify_invariants(cases, b)?,
    })
}

fn report(kind: &str, code: u8, reason: &str) -> ExitCode {
    eprintln!("corfun: {kind}: {}", reason.replace('\n', " "));
    ExitCode::from(code)
}

fn fail(e: &Error) -> ExitCode {
    match e {
        Error::Validation(_) | Error::NotALattice { .. } => report("validation", 2, &e.to_string()),
        Error::Budget { .. } => report("budget", 3, &e.to_string()),
        Error::Invariant(_) => report("invariant", 4, &e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let first = e.to_string();
            let line = first.lines().next().unwrap_or("usage error").trim_start_matches("error: ");
            return report("usage", 1, line);
        }
    };
    match run(cli.command) {
        Ok((out, deferred)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            let _ = stdout.flush();
            match deferred {
                None => ExitCode::SUCCESS,
                Some(e) => fail(&e),
            }
        }
        Err(Failure::Usage(msg)) => report("usage", 1, &msg),
        Err(Failure::Core(e)) => fail(&e),
    }
}
