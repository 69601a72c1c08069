//! Command-line surface for the pipeline: compute syntactic monoids,
//! decide topological and logical definability questions, and check
//! block representations against bounded lasso enumeration.

use std::env;
use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use omega_frag::algebra::{
    language_from_json, language_to_json, syntactic_quotient, RecognizedLanguage,
};
use omega_frag::buchi::{compile, Buchi};
use omega_frag::decide::{
    decide_alphabetic_boolean, decide_bsigma2, decide_cantor_boolean, verify_representation,
    Answer, AssumeYesOracle, DefinabilityOracle, EvidenceOracle, UnknownOracle, Verdict,
    VerdictBlock, VerdictWitness,
};
use omega_frag::Budget;

#[derive(Parser)]
#[command(
    name = "omega-frag",
    version,
    about = "Definability questions for omega-regular languages over finite and infinite words",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the syntactic monoid of the input language.
    Synt(InputArgs),
    /// Decide a question; the exit code encodes the verdict
    /// (0 yes, 1 no, 2 unknown).
    Decide {
        #[arg(value_enum)]
        question: Question,
        #[command(flatten)]
        input: InputArgs,
        /// Finite-word oracle for bsigma2: unknown, assume-yes, or
        /// evidence:K for a saturation scan at monomial degree K.
        #[arg(long, default_value = "unknown", value_parser = parse_oracle)]
        oracle: OracleChoice,
    },
    /// Build the block representation behind an alphabetic yes answer
    /// and compare it with the language on every lasso within bounds.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        /// Prefix and cycle length bounds, as U,V.
        #[arg(long, default_value = "6,6", value_parser = parse_bounds)]
        bounds: (usize, usize),
        /// Damage the representation before checking (test hook).
        #[arg(long, value_enum)]
        mutate: Option<Mutation>,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Omega-regular expression, or a path to a .aut.json automaton or
    /// .monoid.json recognizer file.
    input: String,
    /// Emit JSON instead of human-readable text.
    #[arg(long)]
    json: bool,
    /// Ignore the element budget.
    #[arg(long)]
    force: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Question {
    /// Boolean combination of open sets of the alphabetic topology.
    AlphBool,
    /// Boolean combination of open sets of the Cantor topology.
    CantorBool,
    /// Boolean combination of Sigma-2 sentences.
    Bsigma2,
}

#[derive(Clone, Copy)]
enum OracleChoice {
    Unknown,
    AssumeYes,
    Evidence(usize),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mutation {
    /// Drop the first representation block.
    DropBlock,
}

fn parse_oracle(s: &str) -> Result<OracleChoice, String> {
    match s {
        "unknown" => Ok(OracleChoice::Unknown),
        "assume-yes" => Ok(OracleChoice::AssumeYes),
        _ => match s.strip_prefix("evidence:") {
            Some(k) => k
                .parse()
                .map(OracleChoice::Evidence)
                .map_err(|_| format!("bad evidence degree {k:?}")),
            None => Err(format!(
                "expected unknown, assume-yes, or evidence:K, got {s:?}"
            )),
        },
    }
}

fn parse_bounds(s: &str) -> Result<(usize, usize), String> {
    let (u, v) = s.split_once(',').ok_or("expected two bounds as U,V")?;
    let parse = |part: &str| {
        part.trim()
            .parse()
            .map_err(|_| format!("bad bound {part:?}"))
    };
    Ok((parse(u)?, parse(v)?))
}

/// The element budget: the default, unless OMEGA_FRAG_BUDGET overrides
/// it with `ELEMENTS` or `K,ALPHABET,ELEMENTS`, unless --force lifts
/// every cap.
fn resolve_budget(force: bool) -> Result<Budget, String> {
    if force {
        return Ok(Budget::unlimited());
    }
    let mut budget = Budget::default();
    if let Ok(text) = env::var("OMEGA_FRAG_BUDGET") {
        let bad = || format!("bad OMEGA_FRAG_BUDGET {text:?}");
        let parts: Vec<usize> = text
            .split(',')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        match parts[..] {
            [elements] => budget.max_elements = elements,
            [k, alphabet, elements] => {
                budget.max_k = k;
                budget.max_alphabet = alphabet;
                budget.max_elements = elements;
            }
            _ => return Err(bad()),
        }
    }
    Ok(budget)
}

fn load_language(args: &InputArgs, budget: &Budget) -> Result<RecognizedLanguage, String> {
    let read = |path: &str| fs::read_to_string(path).map_err(|e| format!("{path}: {e}"));
    if args.input.ends_with(".monoid.json") {
        language_from_json(&read(&args.input)?).map_err(|e| e.to_string())
    } else if args.input.ends_with(".aut.json") {
        Buchi::from_json(&read(&args.input)?)
            .and_then(|aut| aut.recognize(budget.max_elements))
            .map_err(|e| e.to_string())
    } else {
        compile(&args.input)
            .and_then(|aut| aut.recognize(budget.max_elements))
            .map_err(|e| e.to_string())
    }
}

fn pair_list(l: &RecognizedLanguage, pairs: impl IntoIterator<Item = (usize, usize)>) -> String {
    let m = l.monoid();
    pairs
        .into_iter()
        .map(|(s, e)| format!("({}, {})", m.name(s), m.name(e)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn render_monoid(l: &RecognizedLanguage) -> String {
    let m = l.monoid();
    let mut out = String::new();
    out.push_str(&format!("alphabet: [{}]\n", l.hom().alphabet().letters()));
    out.push_str(&format!(
        "elements ({}): {}\n",
        m.size(),
        m.names().join(", ")
    ));
    out.push_str(&format!("{m}\n"));
    let idempotents = m
        .idempotents()
        .iter()
        .map(|&e| m.name(e).to_string())
        .collect::<Vec<_>>()
        .join(", ");
    out.push_str(&format!("idempotents: {idempotents}\n"));
    out.push_str(&format!(
        "linked pairs: {}\n",
        pair_list(l, m.linked_pairs())
    ));
    if let Some(order) = m.order() {
        let below = order
            .iter()
            .map(|&(s, t)| format!("{} <= {}", m.name(s), m.name(t)))
            .collect::<Vec<_>>()
            .join(", ");
        out.push_str(&format!("order: {below}\n"));
    }
    let accepted = l
        .accepted()
        .iter()
        .map(|&(s, e)| format!("[{}][{}]^w", m.name(s), m.name(e)))
        .collect::<Vec<_>>()
        .join(" + ");
    out.push_str(&format!(
        "accepted: {}\n",
        if accepted.is_empty() {
            "-"
        } else {
            accepted.as_str()
        }
    ));
    out
}

/// Write to stdout, tolerating a closed pipe so the exit code still
/// reports the verdict under `| head` and friends.
fn write_stdout(text: &str) {
    let _ = io::stdout().write_all(text.as_bytes());
}

fn cmd_synt(args: &InputArgs) -> Result<ExitCode, String> {
    let budget = resolve_budget(args.force)?;
    let l = load_language(args, &budget)?;
    let q = syntactic_quotient(&l).language;
    if args.json {
        write_stdout(&format!("{}\n", language_to_json(&q)));
    } else {
        write_stdout(&render_monoid(&q));
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_for(answer: Answer) -> ExitCode {
    ExitCode::from(match answer {
        Answer::Yes => 0,
        Answer::No => 1,
        Answer::Unknown => 2,
    })
}

fn emit(verdict: &Verdict, json: bool) {
    if json {
        write_stdout(&format!("{}\n", verdict.to_json()));
    } else {
        write_stdout(&format!("{verdict}\n"));
    }
}

fn cmd_decide(
    question: Question,
    args: &InputArgs,
    oracle: OracleChoice,
) -> Result<ExitCode, String> {
    let budget = resolve_budget(args.force)?;
    let l = load_language(args, &budget)?;
    let q = syntactic_quotient(&l).language;
    let verdict = match question {
        Question::AlphBool => Verdict::alphabetic(&q, &decide_alphabetic_boolean(&q)),
        Question::CantorBool => Verdict::cantor(&decide_cantor_boolean(&q)),
        Question::Bsigma2 => {
            let oracle: Box<dyn DefinabilityOracle> = match oracle {
                OracleChoice::Unknown => Box::new(UnknownOracle),
                OracleChoice::AssumeYes => Box::new(AssumeYesOracle),
                OracleChoice::Evidence(degree) => Box::new(EvidenceOracle {
                    degree,
                    length_bound: 8,
                }),
            };
            let result = decide_bsigma2(&q, oracle.as_ref(), &budget).map_err(|e| e.to_string())?;
            Verdict::bsigma2(&result)
        }
    };
    emit(&verdict, args.json);
    Ok(exit_for(verdict.answer()))
}

fn cmd_verify(
    args: &InputArgs,
    bounds: (usize, usize),
    mutate: Option<Mutation>,
) -> Result<ExitCode, String> {
    let budget = resolve_budget(args.force)?;
    let l = load_language(args, &budget)?;
    let q = syntactic_quotient(&l).language;
    let result = decide_alphabetic_boolean(&q);
    if !result.answer {
        return Err("nothing to verify: the alphabetic test answers no".to_string());
    }
    let mut blocks = result.blocks.clone();
    if let Some(Mutation::DropBlock) = mutate {
        if blocks.is_empty() {
            return Err("cannot drop a block from an empty representation".to_string());
        }
        blocks.remove(0);
    }
    let m = q.monoid();
    let shown: Vec<VerdictBlock> = blocks
        .iter()
        .map(|b| VerdictBlock {
            s: m.name(b.value).to_string(),
            alphabet: b.alphabet.letters(),
        })
        .collect();
    let verdict = match verify_representation(&q, &blocks, bounds).map_err(|e| e.to_string())? {
        None => Verdict {
            question: "verify".to_string(),
            answer: "yes".to_string(),
            witness: None,
            representation: Some(shown),
            checks: None,
        }
        .with_verified_bound(bounds),
        Some(alpha) => Verdict {
            question: "verify".to_string(),
            answer: "no".to_string(),
            witness: Some(VerdictWitness {
                alpha: Some(alpha.to_string()),
                note: Some(
                    "the representation and the language disagree on this lasso".to_string(),
                ),
                ..VerdictWitness::default()
            }),
            representation: Some(shown),
            checks: None,
        },
    };
    emit(&verdict, args.json);
    Ok(exit_for(verdict.answer()))
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Synt(input) => cmd_synt(&input),
        Command::Decide {
            question,
            input,
            oracle,
        } => cmd_decide(question, &input, oracle),
        Command::Verify {
            input,
            bounds,
            mutate,
        } => cmd_verify(&input, bounds, mutate),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}
