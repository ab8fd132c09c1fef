//! The `ibc` command: batch belief change, postulate audits, verification
//! runs and an interactive session.
//!
//! Exit codes: 0 success (holds, accepted, all checks passed), 1 negative
//! outcome (counterexample, rejected, failed check), 2 usage or parse
//! error, 3 revision by an inconsistent formula.

mod repl;

use std::fs;
use std::io::{BufRead, Read, Write};
use std::path::Path;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use ibc_core::change::{
    accepts_conditional, accepts_contractional, ChangeError, ChangeKind, ChangeOperator, Conditional,
    Contractional, NaturalContraction, NaturalRevision,
};
use ibc_core::lab::{self, LabReport, Theorem1Budget};
use ibc_core::logic::{parse_formula, Formula, Signature};
use ibc_core::postulates::{sweep_with, PostulateId, Strategy};
use ibc_core::states::{parse_state, EpistemicState};
use ibc_core::DEFAULT_SEED;

pub use repl::{run_repl, Session};

#[derive(Parser, Debug)]
#[command(name = "ibc", version, about = "Iterated belief contraction and revision on ranked total preorders")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the models of a formula.
    Models {
        formula: String,
        /// Atoms of the signature, e.g. "a b".
        #[arg(long, default_value = "a b")]
        sig: String,
    },
    /// Contract a state file by a formula and print the posterior state.
    Contract {
        /// State file, or `-` for standard input.
        state: String,
        formula: String,
    },
    /// Revise a state file by a formula and print the posterior state.
    Revise {
        /// State file, or `-` for standard input.
        state: String,
        formula: String,
    },
    /// Ask whether a conditional (β | α) or contractional (β ⇐ α) is accepted.
    Ask {
        state: String,
        kind: AskKind,
        alpha: String,
        beta: String,
    },
    /// Sweep a postulate over all states and formula classes, or a sample.
    Check {
        postulate: PostulateId,
        /// Operator to audit; defaults to the postulate's own kind.
        #[arg(long, value_enum)]
        operator: Option<OperatorArg>,
        #[arg(long, default_value_t = 2)]
        atoms: usize,
        /// Sample this many instances instead of sweeping exhaustively.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run one of the verification suites.
    Verify {
        target: Target,
        /// Atom count; each target has its own default and limit.
        #[arg(long)]
        atoms: Option<usize>,
        /// Sample count for `cn` (default 1000) and the reverse direction of `theorem1` (default 10000).
        #[arg(long)]
        samples: Option<u64>,
        /// Operators assembled for the forward direction of `theorem1`.
        #[arg(long, default_value_t = 100)]
        operators: usize,
        /// World counts for `fubini`.
        #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
        worlds: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Interactive session starting from a state file or a uniform state.
    Repl {
        state: Option<String>,
        /// Signature of the uniform starting state when no file is given.
        #[arg(long, default_value = "a b")]
        sig: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AskKind {
    Conditional,
    Contractional,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OperatorArg {
    Contraction,
    Revision,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Table1,
    Base,
    Iteration,
    Theorem1,
    Fubini,
    Correspondence,
    Invariance,
    Cn,
    Alpha,
}

/// An error carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }
}

impl From<ChangeError> for Failure {
    fn from(e: ChangeError) -> Self {
        let code = if e == ChangeError::InconsistentInput { 3 } else { 2 };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e)
    }
}

/// Reads a state from `path`, or from `stdin` when `path` is `-`.
pub fn load_state(path: &str, stdin: &mut dyn Read) -> Result<EpistemicState, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(Path::new(path)).map_err(|e| Failure::usage(format!("{path}: {e}")))?
    };
    parse_state(&text).map_err(|e| Failure::usage(format!("{path}: {e}")))
}

fn formula(text: &str, sig: &Signature) -> Result<Formula, Failure> {
    parse_formula(text, sig).map_err(|e| Failure::usage(format!("`{text}`: {e}")))
}

fn operator(kind: ChangeKind) -> &'static dyn ChangeOperator {
    match kind {
        ChangeKind::Contraction => &NaturalContraction,
        ChangeKind::Revision => &NaturalRevision,
    }
}

fn standard_sig(atoms: usize) -> Result<Arc<Signature>, Failure> {
    Ok(Arc::new(Signature::standard(atoms).map_err(Failure::usage)?))
}

/// Runs a parsed command, writing results to `out`. Returns the exit code.
pub fn run(cli: Cli, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Models { formula: f, sig } => {
            let sig = Signature::parse(&sig).map_err(Failure::usage)?;
            let models = formula(&f, &sig)?.models(&sig).map_err(Failure::usage)?;
            if models.is_empty() {
                writeln!(out, "no models")?;
            }
            for w in models.display_order(sig.len()) {
                writeln!(out, "{}  {}", w.to_bitstring(sig.len()), sig.pretty_world(w))?;
            }
            Ok(0)
        }
        Command::Contract { state, formula: f } => change(ChangeKind::Contraction, &state, &f, stdin, out),
        Command::Revise { state, formula: f } => change(ChangeKind::Revision, &state, &f, stdin, out),
        Command::Ask { state, kind, alpha, beta } => {
            let s = load_state(&state, stdin)?;
            let (a, b) = (formula(&alpha, s.signature())?, formula(&beta, s.signature())?);
            let accepted = match kind {
                AskKind::Conditional => accepts_conditional(
                    &s,
                    &Conditional {
                        antecedent: a,
                        consequent: b,
                    },
                ),
                AskKind::Contractional => accepts_contractional(&s, &Contractional { removed: a, kept: b }),
            }
            .map_err(Failure::usage)?;
            writeln!(out, "{}", if accepted { "accepted" } else { "rejected" })?;
            Ok(if accepted { 0 } else { 1 })
        }
        Command::Check {
            postulate,
            operator: op,
            atoms,
            samples,
            seed,
            jobs,
            format,
        } => {
            let kind = match op {
                Some(OperatorArg::Contraction) => ChangeKind::Contraction,
                Some(OperatorArg::Revision) => ChangeKind::Revision,
                None => postulate.kind().unwrap_or(ChangeKind::Contraction),
            };
            let strategy = match samples {
                Some(samples) => Strategy::Random { samples, seed },
                None => Strategy::Exhaustive,
            };
            let report = sweep_with(postulate, operator(kind), standard_sig(atoms)?, strategy, jobs)
                .map_err(Failure::usage)?;
            match format {
                Format::Text => write!(out, "{}", report.to_text())?,
                Format::Json => writeln!(out, "{}", report.to_json())?,
            }
            Ok(if report.verdict.holds { 0 } else { 1 })
        }
        Command::Verify {
            target,
            atoms,
            samples,
            operators,
            worlds,
            seed,
            jobs,
            format,
        } => {
            let report = verify(target, atoms, samples, operators, &worlds, seed, jobs)?;
            match format {
                Format::Text => write!(out, "{}", report.to_text())?,
                Format::Json => writeln!(out, "{}", report.to_json())?,
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Repl { state, sig } => {
            let initial = match state {
                Some(path) => load_state(&path, stdin)?,
                None => EpistemicState::uniform(Arc::new(Signature::parse(&sig).map_err(Failure::usage)?)),
            };
            run_repl(Session::new(initial), stdin, out)?;
            Ok(0)
        }
    }
}

fn change(
    kind: ChangeKind,
    state: &str,
    f: &str,
    stdin: &mut dyn BufRead,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let s = load_state(state, stdin)?;
    let f = formula(f, s.signature())?;
    let post = operator(kind).apply_formula(&s, &f)?;
    write!(out, "{}", post.to_text())?;
    Ok(0)
}

fn verify(
    target: Target,
    atoms: Option<usize>,
    samples: Option<u64>,
    operators: usize,
    worlds: &[usize],
    seed: u64,
    jobs: usize,
) -> Result<LabReport, Failure> {
    let sig = |default: usize| standard_sig(atoms.unwrap_or(default));
    let report = match target {
        Target::Table1 => lab::reproduce_table1(),
        Target::Base => lab::verify_base(sig(2)?, jobs),
        Target::Iteration => lab::verify_iteration(sig(2)?, jobs),
        Target::Theorem1 => lab::verify_theorem1(
            sig(2)?,
            Theorem1Budget {
                operators,
                reverse_samples: samples.unwrap_or(10_000),
                seed,
                jobs,
            },
        ),
        Target::Fubini => lab::verify_enumeration(worlds),
        Target::Correspondence => {
            let s = sig(2)?;
            lab::verify_acceptance(s.clone()).and_then(|mut r| {
                r.absorb(lab::verify_contractional_correspondence(s)?);
                Ok(r)
            })
        }
        Target::Invariance => lab::verify_invariance(sig(2)?),
        Target::Cn => lab::verify_cn_formulation(sig(3)?, samples.unwrap_or(1000), seed),
        Target::Alpha => lab::verify_alpha_equivalence(sig(2)?),
    };
    report.map_err(Failure::usage)
}
