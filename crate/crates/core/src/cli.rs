//! Command-line front end. Every invocation prints one output document.
//!
//! Exit statuses: 0 success or verified, 1 verified-false (no paradox,
//! counterexample found), 2 input error, 3 capacity error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::compatibility::{self, classify_pair, Execution, SweepOutcome};
use crate::error::Error;
use crate::paradox::{self, verify_ks, Partition};
use crate::pauli::PauliIndex;
use crate::states::{self, StateName};
use crate::tensor::{BracketKind, DecompositionTerm, PauliString};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "paulicompat",
    version,
    about = "Local and global compatibility of multiqubit Pauli observables"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Write the document to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the compatibility of two Pauli strings.
    Classify { first: String, second: String },
    /// Expand the commutator and/or anticommutator into per-site brackets.
    Decompose {
        first: String,
        second: String,
        #[arg(long, value_enum, default_value_t = BracketChoice::All)]
        bracket: BracketChoice,
    },
    /// Build and certify a sign paradox.
    Paradox {
        #[command(subcommand)]
        family: FamilyArg,
    },
    /// Build a named state and check its eigenrelations and pairwise entanglement.
    State {
        name: String,
        n: Option<usize>,
        /// Observables to test instead of the state's own family.
        #[arg(long, num_args = 1..)]
        observables: Vec<String>,
    },
    /// Run an exhaustive verification sweep.
    Verify {
        #[arg(value_enum)]
        which: SweepKind,
        n: Option<usize>,
        /// Partition the sweep across threads; output is unchanged.
        #[arg(long)]
        parallel: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BracketChoice {
    Commutator,
    Anticommutator,
    All,
}

#[derive(Debug, Subcommand)]
pub enum FamilyArg {
    /// The two Mermin-square contexts sharing ZZ.
    Mermin,
    /// The five-observable three-qubit family for distinct j, k, l.
    Three { j: String, k: String, l: String },
    /// The (n+1)-observable family with all j and k indices equal.
    Ghz { n: usize, j: String, k: String },
    /// An explicit list, compared first-vs-rest unless groups are given.
    List {
        #[arg(required = true, num_args = 1..)]
        observables: Vec<String>,
        /// 1-based, comma-separated indices of the first product.
        #[arg(long, value_delimiter = ',', requires = "group_b")]
        group_a: Vec<usize>,
        /// 1-based, comma-separated indices of the second product.
        #[arg(long, value_delimiter = ',', requires = "group_a")]
        group_b: Vec<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    Theorem1,
    Corollary,
    Prop3,
    Prop4,
    ExactlyOne,
}

#[derive(Debug, Serialize)]
pub struct OutputDocument<I: Serialize, R: Serialize> {
    pub command: &'static str,
    pub version: &'static str,
    pub inputs: I,
    pub result: R,
}

/// A finished invocation: exit status and rendered document (or message).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    status: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if e.is_capacity() { EXIT_CAPACITY } else { EXIT_INPUT };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

fn parse_pauli(text: &str) -> Result<PauliString, Failure> {
    text.parse::<PauliString>().map_err(|e| {
        let mut message = e.to_string();
        if let Error::Parse { position, .. } = e {
            message.push_str(&format!("\n  {text}\n  {}^", " ".repeat(position.saturating_sub(1))));
        }
        Failure {
            status: EXIT_INPUT,
            message,
        }
    })
}

fn parse_index(text: &str) -> Result<PauliIndex, Failure> {
    let mut chars = text.chars();
    let idx = match (chars.next(), chars.next()) {
        (Some(c), None) => PauliIndex::from_digit(c).or_else(|| PauliIndex::from_letter(c)),
        _ => None,
    };
    idx.ok_or_else(|| Failure {
        status: EXIT_INPUT,
        message: format!("invalid Pauli index '{text}'"),
    })
}

fn document<I: Serialize, R: Serialize>(command: &'static str, inputs: I, result: R) -> Value {
    serde_json::to_value(OutputDocument {
        command,
        version: env!("CARGO_PKG_VERSION"),
        inputs,
        result,
    })
    .expect("output documents serialize")
}

#[derive(Serialize)]
struct PairInputs {
    first: PauliString,
    second: PauliString,
}

#[derive(Serialize)]
struct TermView<'a> {
    commutator_sites: &'a crate::tensor::SiteSet,
    is_zero: bool,
    value: Option<String>,
}

impl<'a> From<&'a DecompositionTerm> for TermView<'a> {
    fn from(t: &'a DecompositionTerm) -> Self {
        TermView {
            commutator_sites: &t.assignment.commutator_sites,
            is_zero: t.is_zero(),
            value: t.value.as_ref().map(|v| format!("2^{} * {}", v.log2_scale, v.pauli)),
        }
    }
}

fn run_classify(first: &str, second: &str) -> Result<(i32, Value), Failure> {
    let (p, q) = (parse_pauli(first)?, parse_pauli(second)?);
    let report = classify_pair(&p, &q)?;
    Ok((
        EXIT_OK,
        document("classify", PairInputs { first: p, second: q }, report),
    ))
}

fn run_decompose(first: &str, second: &str, bracket: BracketChoice) -> Result<(i32, Value), Failure> {
    let (p, q) = (parse_pauli(first)?, parse_pauli(second)?);
    let (kind, unique) = p.unique_nonzero_term(&q)?;

    #[derive(Serialize)]
    struct Expansion<'a> {
        bracket: BracketKind,
        terms: Vec<TermView<'a>>,
        /// 1-based position in `terms`.
        unique_nonzero_index: Option<usize>,
    }
    #[derive(Serialize)]
    struct Body<'a> {
        expansions: Vec<Expansion<'a>>,
        unique_nonzero_bracket: BracketKind,
        unique_nonzero_term: TermView<'a>,
    }

    let kinds: &[BracketKind] = match bracket {
        BracketChoice::Commutator => &[BracketKind::Commutator],
        BracketChoice::Anticommutator => &[BracketKind::Anticommutator],
        BracketChoice::All => &[BracketKind::Commutator, BracketKind::Anticommutator],
    };
    let term_lists = kinds
        .iter()
        .map(|&k| {
            let d = match k {
                BracketKind::Commutator => p.decompose_commutator(&q)?,
                BracketKind::Anticommutator => p.decompose_anticommutator(&q)?,
            };
            Ok((k, d.collect::<Vec<_>>()))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let expansions = term_lists
        .iter()
        .map(|(k, terms)| Expansion {
            bracket: *k,
            unique_nonzero_index: terms.iter().position(|t| !t.is_zero()).map(|i| i + 1),
            terms: terms.iter().map(TermView::from).collect(),
        })
        .collect();

    #[derive(Serialize)]
    struct Inputs {
        first: PauliString,
        second: PauliString,
        bracket: BracketChoice,
    }
    let body = Body {
        expansions,
        unique_nonzero_bracket: kind,
        unique_nonzero_term: TermView::from(&unique),
    };
    let doc = document(
        "decompose",
        Inputs {
            first: p.clone(),
            second: q.clone(),
            bracket,
        },
        body,
    );
    Ok((EXIT_OK, doc))
}

fn run_paradox(family: &FamilyArg) -> Result<(i32, Value), Failure> {
    #[derive(Serialize)]
    struct Inputs {
        family: String,
        parameters: Vec<String>,
    }
    let (inputs, observables, partition) = match family {
        FamilyArg::Mermin => {
            let (obs, part) = paradox::mermin_setup();
            (
                Inputs {
                    family: "mermin".into(),
                    parameters: vec![],
                },
                obs,
                part,
            )
        }
        FamilyArg::Three { j, k, l } => {
            let (j, k, l) = (parse_index(j)?, parse_index(k)?, parse_index(l)?);
            let obs = paradox::build_3qubit_family(j, k, l)?;
            let params = [j, k, l].iter().map(|i| i.value().to_string()).collect();
            (
                Inputs {
                    family: "three".into(),
                    parameters: params,
                },
                obs,
                paradox::three_qubit_partition(),
            )
        }
        FamilyArg::Ghz { n, j, k } => {
            let (j, k) = (parse_index(j)?, parse_index(k)?);
            if *n > crate::tensor::MAX_DECOMPOSITION_QUBITS * 4 {
                return Err(Error::SizeCap {
                    what: "paradox family",
                    n: *n,
                    max: 64,
                }
                .into());
            }
            let obs = paradox::build_nqubit_family(&vec![j; *n], &vec![k; *n])?;
            let params = vec![n.to_string(), j.value().to_string(), k.value().to_string()];
            let part = Partition::first_vs_rest(obs.len());
            (
                Inputs {
                    family: "ghz".into(),
                    parameters: params,
                },
                obs,
                part,
            )
        }
        FamilyArg::List {
            observables,
            group_a,
            group_b,
        } => {
            let obs = observables
                .iter()
                .map(|t| parse_pauli(t))
                .collect::<Result<Vec<_>, _>>()?;
            let part = if group_a.is_empty() {
                Partition::first_vs_rest(obs.len())
            } else {
                let zero_based = |g: &[usize]| -> Result<Vec<usize>, Failure> {
                    g.iter()
                        .map(|&i| {
                            i.checked_sub(1).ok_or_else(|| Failure {
                                status: EXIT_INPUT,
                                message: "group indices are 1-based".into(),
                            })
                        })
                        .collect()
                };
                Partition {
                    group_a: zero_based(group_a)?,
                    group_b: zero_based(group_b)?,
                }
            };
            let params = obs.iter().map(|o| o.to_string()).collect();
            (
                Inputs {
                    family: "list".into(),
                    parameters: params,
                },
                obs,
                part,
            )
        }
    };
    let cert = verify_ks(&observables, &partition)?;
    let status = if cert.paradox { EXIT_OK } else { EXIT_FALSE };

    #[derive(Serialize)]
    struct Body {
        #[serde(flatten)]
        certificate: paradox::ParadoxCertificate,
        sign_flip_sites: Vec<usize>,
    }
    let sign_flip_sites = cert.sign_flip_sites().iter().map(|s| s + 1).collect();
    Ok((
        status,
        document(
            "paradox",
            inputs,
            Body {
                certificate: cert,
                sign_flip_sites,
            },
        ),
    ))
}

fn run_state(name: &str, n: Option<usize>, observables: &[String]) -> Result<(i32, Value), Failure> {
    let state_name: StateName = name.parse()?;
    let n = match (n, state_name.is_three_qubit()) {
        (Some(n), _) => n,
        (None, true) => 3,
        (None, false) => {
            return Err(Failure {
                status: EXIT_INPUT,
                message: format!("{name} needs a qubit count"),
            });
        }
    };
    let state = states::build_named(state_name, n)?;
    let family = if observables.is_empty() {
        states::associated_family(&state)?
    } else {
        observables
            .iter()
            .map(|t| parse_pauli(t))
            .collect::<Result<Vec<_>, _>>()?
    };
    let relations = states::verify_eigen_relations(&state.vector, &family)?;
    let entanglement = states::pairwise_entanglement(&state.vector)?;
    let scan = if state_name.is_three_qubit() {
        None
    } else {
        Some(states::stabilizing_families(&state.vector)?)
    };

    #[derive(Serialize)]
    struct FamilyRow {
        j: PauliIndex,
        k: PauliIndex,
        eigenvalues: Vec<Option<String>>,
    }
    #[derive(Serialize)]
    struct Body {
        amplitudes: crate::dense::StateVector,
        eigen_relations: Vec<states::EigenRelation>,
        pairwise_entanglement: Vec<states::PairVerdict>,
        stabilizing_families: Option<Vec<FamilyRow>>,
    }
    #[derive(Serialize)]
    struct Inputs {
        name: StateName,
        n: usize,
        observables: Vec<PauliString>,
    }
    let stabilizing_families = scan.map(|fams| {
        fams.into_iter()
            .map(|f| FamilyRow {
                j: f.j,
                k: f.k,
                eigenvalues: f
                    .relations
                    .iter()
                    .map(|r| r.eigenvalue.map(states::format_eigenvalue))
                    .collect(),
            })
            .collect()
    });
    let body = Body {
        amplitudes: state.vector,
        eigen_relations: relations,
        pairwise_entanglement: entanglement,
        stabilizing_families,
    };
    Ok((
        EXIT_OK,
        document(
            "state",
            Inputs {
                name: state_name,
                n,
                observables: family,
            },
            body,
        ),
    ))
}

fn run_verify(which: SweepKind, n: Option<usize>, parallel: bool) -> Result<(i32, Value), Failure> {
    let execution = if parallel {
        Execution::Parallel
    } else {
        Execution::Sequential
    };
    let fixed = |required: usize| -> Result<usize, Failure> {
        match n {
            Some(m) if m != required => {
                Err(Error::OutOfRange(format!("{which:?} is defined for n = {required} only")).into())
            }
            _ => Ok(required),
        }
    };
    let needs_n = || {
        n.ok_or_else(|| Failure {
            status: EXIT_INPUT,
            message: "this sweep needs n".into(),
        })
    };
    let outcome: SweepOutcome = match which {
        SweepKind::Theorem1 => compatibility::verify_theorem1(needs_n()?, execution)?,
        SweepKind::Corollary => compatibility::verify_corollary_even(needs_n()?, execution)?,
        SweepKind::ExactlyOne => compatibility::verify_exactly_one(needs_n()?, execution)?,
        SweepKind::Prop3 => {
            fixed(2)?;
            compatibility::verify_prop3(execution)
        }
        SweepKind::Prop4 => {
            fixed(3)?;
            compatibility::verify_prop4(execution)
        }
    };
    #[derive(Serialize)]
    struct Inputs {
        which: SweepKind,
        n: usize,
    }
    #[derive(Serialize)]
    struct Body {
        verdict: &'static str,
        #[serde(flatten)]
        outcome: SweepOutcome,
    }
    let verified = outcome.verified();
    let body = Body {
        verdict: if verified { "verified" } else { "counterexample" },
        outcome,
    };
    let doc = document(
        "verify",
        Inputs {
            which,
            n: body.outcome.n,
        },
        body,
    );
    Ok((if verified { EXIT_OK } else { EXIT_FALSE }, doc))
}

fn render_table(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                if v.is_object() || (v.is_array() && v.as_array().is_some_and(|a| a.iter().any(|x| x.is_object()))) {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render_table(v, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar_text(v)));
                }
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                out.push_str(&format!("{pad}[{}]\n", i + 1));
                render_table(v, indent + 1, out);
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other))),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn execute(cli: &Cli) -> Result<(i32, Value), Failure> {
    match &cli.command {
        Command::Classify { first, second } => run_classify(first, second),
        Command::Decompose { first, second, bracket } => run_decompose(first, second, *bracket),
        Command::Paradox { family } => run_paradox(family),
        Command::State { name, n, observables } => run_state(name, *n, observables),
        Command::Verify { which, n, parallel } => run_verify(*which, *n, *parallel),
    }
}

/// Runs a parsed invocation and renders its document.
pub fn run(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok((status, doc)) => {
            let stdout = match cli.format {
                Format::Json => serde_json::to_string_pretty(&doc).expect("documents serialize") + "\n",
                Format::Table => {
                    let mut s = String::new();
                    render_table(&doc, 0, &mut s);
                    s
                }
            };
            Outcome {
                status,
                stdout,
                stderr: String::new(),
            }
        }
        Err(f) => Outcome {
            status: f.status,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

/// Entry point for the binary: parses `args`, runs, writes output.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let outcome = run(&cli);
    eprint!("{}", outcome.stderr);
    if !outcome.stdout.is_empty() {
        match &cli.output {
            Some(path) => {
                if let Err(e) = std::fs::write(path, &outcome.stdout) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return EXIT_INPUT;
                }
            }
            None => {
                let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
            }
        }
    }
    outcome.status
}
