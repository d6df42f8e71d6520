//! `fa` — build, compose, compile and verify finite ℕ-weighted automata.
//!
//! Subcommands: `gen` (named automata), `eval` (run a word), `audit`
//! (evaluator cross-check over all short words), `apply` (closure
//! operations), `decide` (multivariate polynomial closure decision),
//! `classify` (matrix-power growth).
//!
//! File arguments accept "-" for stdin/stdout. Exit codes: 0 success,
//! 1 rejected/negative verdict, 2 input error, 3 resource limit.

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fa::automaton::WeightedAutomaton;
use fa::closures::{self, Cmp};
use fa::error::Error;
use fa::porc::{
    build_poly_closure, decide_closure_poly, parse_polynomial, ClosureDecision, PorcFunction,
};
use fa::{builders, growth, json, Limits};

#[derive(Parser)]
#[command(name = "fa", version, about = "Finite N-weighted automata toolkit")]
struct Cli {
    /// State budget for constructed automata.
    #[arg(long, global = true, default_value_t = 250_000)]
    max_states: usize,

    /// Computation budget for brute-force path enumeration.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    oracle_budget: u64,

    /// Constant range checked exhaustively by the closure decision.
    #[arg(long, global = true, default_value_t = 8)]
    const_bound: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a named automaton: counter | doubler | binary | letter:σ | const:c
    Gen {
        /// Which automaton to build.
        spec: String,
        /// Alphabet override (a string of symbols). Defaults: counter and
        /// doubler use "1", binary uses "01", letter and const use "ab".
        #[arg(long)]
        alphabet: Option<String>,
        /// Output file, "-" for stdout.
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Evaluate an automaton on a word and print the value.
    Eval {
        /// Automaton JSON file, "-" for stdin.
        file: String,
        /// The input word (may be empty).
        word: String,
    },
    /// Cross-check the matrix evaluator against brute-force path counting
    /// on every word up to a length. Prints PASS or FAIL.
    Audit {
        /// Automaton JSON file, "-" for stdin.
        file: String,
        /// Maximum word length to sweep.
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        /// Compare against a second automaton file instead of self-checking
        /// (exposes the mismatch reporting path).
        #[arg(long)]
        against: Option<String>,
    },
    /// Apply a closure operation:
    /// add | hadamard | sub | clamp | indicator | div | mod | binom | porc | poly
    Apply {
        /// The operation name.
        op: String,
        /// Input automaton files ("-" for stdin, at most once).
        #[arg(required = true)]
        inputs: Vec<String>,
        /// Constant for sub/clamp/indicator/div/mod/binom.
        #[arg(long)]
        c: Option<u64>,
        /// Residue for mod.
        #[arg(long)]
        d: Option<u64>,
        /// Relation for indicator: eq | le | ge.
        #[arg(long)]
        rel: Option<String>,
        /// Polynomial expression for poly, e.g. "x^2 - 3x + 1" or
        /// "2*B(x1,2)*B(x2,1)".
        #[arg(long)]
        poly: Option<String>,
        /// PORC description file (JSON) for porc.
        #[arg(long)]
        porc: Option<String>,
        /// Output file, "-" for stdout.
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Decide whether a polynomial is a pointwise closure property.
    /// Prints accepted / rejected / inconclusive.
    Decide {
        /// Polynomial expression, e.g. "(x1-x2)^2".
        poly: String,
    },
    /// Classify the growth of a matrix-power diagonal entry and verify the
    /// verdict empirically.
    Classify {
        /// Matrix JSON file ({"matrix": [[..]]}), "-" for stdin.
        file: String,
        /// The diagonal index to classify.
        #[arg(long)]
        vertex: usize,
        /// Verification horizon (must be at least twice the matrix size).
        #[arg(long, default_value_t = 20)]
        horizon: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = Limits {
        max_states: cli.max_states,
        oracle_budget: cli.oracle_budget,
        max_binom: Limits::default().max_binom,
    };
    match run(cli.command, cli.const_bound, &limits) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("fa: {e}");
            match e {
                Error::Resource(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn read_input(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Input(format!("reading stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Input(format!("reading {path}: {e}")))
    }
}

fn write_output(path: &str, content: &str) -> Result<(), Error> {
    if path == "-" {
        print!("{content}");
        Ok(())
    } else {
        std::fs::write(path, content).map_err(|e| Error::Input(format!("writing {path}: {e}")))
    }
}

fn load_automaton(path: &str) -> Result<WeightedAutomaton, Error> {
    json::automaton_from_json(&read_input(path)?)
}

fn parse_alphabet(s: &str) -> Result<Vec<char>, Error> {
    let chars: Vec<char> = s.chars().collect();
    if chars.is_empty() {
        return Err(Error::Input("alphabet override must not be empty".into()));
    }
    Ok(chars)
}

fn run(command: Command, const_bound: u64, limits: &Limits) -> Result<ExitCode, Error> {
    match command {
        Command::Gen {
            spec,
            alphabet,
            output,
        } => {
            let m = generate(&spec, alphabet.as_deref())?;
            write_output(&output, &json::automaton_to_json(&m))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { file, word } => {
            let m = load_automaton(&file)?;
            println!("{}", m.evaluate(&word)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Audit {
            file,
            max_len,
            against,
        } => {
            let m = load_automaton(&file)?;
            let report = match against {
                None => fa::audit::audit(&m, max_len, limits)?,
                Some(path) => {
                    let oracle = load_automaton(&path)?;
                    fa::audit::cross_check(&m, &oracle, max_len, limits)?
                }
            };
            match report.first_mismatch {
                None => {
                    println!("PASS");
                    println!("checked {} words", report.words_checked);
                    Ok(ExitCode::SUCCESS)
                }
                Some(mismatch) => {
                    println!("FAIL");
                    println!(
                        "first mismatch at word {:?}: evaluate = {}, brute force = {}",
                        mismatch.word, mismatch.evaluated, mismatch.counted
                    );
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Apply {
            op,
            inputs,
            c,
            d,
            rel,
            poly,
            porc,
            output,
        } => {
            let result = apply(&op, &inputs, c, d, rel, poly, porc, const_bound, limits)?;
            write_output(&output, &json::automaton_to_json(&result))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Decide { poly } => {
            let (parsed, _names) = parse_polynomial(&poly)?;
            let binomial = parsed.to_binomial()?;
            match decide_closure_poly(&binomial, const_bound) {
                ClosureDecision::Accepted => {
                    println!("accepted");
                    Ok(ExitCode::SUCCESS)
                }
                ClosureDecision::Rejected(witness) => {
                    println!("rejected");
                    println!("witness: {witness}");
                    Ok(ExitCode::from(1))
                }
                ClosureDecision::Inconclusive(reason) => {
                    println!("inconclusive");
                    println!("reason: {reason}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Classify {
            file,
            vertex,
            horizon,
        } => {
            let matrix = json::matrix_from_json(&read_input(&file)?)?;
            let report = growth::verify_classification(&matrix, vertex, horizon)?;
            println!("{}", report.class);
            if report.passed() {
                println!("verification: PASS at horizon {}", report.horizon);
                Ok(ExitCode::SUCCESS)
            } else {
                println!("verification: FAIL at horizon {}", report.horizon);
                for defect in &report.defects {
                    println!("defect: {defect}");
                }
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn generate(spec: &str, alphabet: Option<&str>) -> Result<WeightedAutomaton, Error> {
    match spec {
        "counter" | "doubler" => {
            if alphabet.is_some_and(|a| a != "1") {
                return Err(Error::Input(format!(
                    "{spec} is defined over the fixed alphabet \"1\""
                )));
            }
            Ok(if spec == "counter" {
                builders::unary_counter()
            } else {
                builders::unary_doubler()
            })
        }
        "binary" => {
            let alphabet = match alphabet {
                Some(a) => parse_alphabet(a)?,
                None => vec!['0', '1'],
            };
            builders::binary_value(&alphabet)
        }
        _ => {
            if let Some(symbol) = spec.strip_prefix("letter:") {
                let mut chars = symbol.chars();
                let (Some(symbol), None) = (chars.next(), chars.next()) else {
                    return Err(Error::Input(format!(
                        "letter spec needs a single symbol, got {symbol:?}"
                    )));
                };
                let alphabet = match alphabet {
                    Some(a) => parse_alphabet(a)?,
                    None => vec!['a', 'b'],
                };
                builders::letter_counter(&alphabet, symbol)
            } else if let Some(value) = spec.strip_prefix("const:") {
                let value: num_bigint::BigUint = value
                    .parse()
                    .map_err(|_| Error::Input(format!("bad constant {value:?}")))?;
                let alphabet = match alphabet {
                    Some(a) => parse_alphabet(a)?,
                    None => vec!['a', 'b'],
                };
                builders::constant(value, &alphabet)
            } else {
                Err(Error::Input(format!(
                    "unknown generator {spec:?}; expected counter, doubler, binary, letter:σ or const:c"
                )))
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn apply(
    op: &str,
    inputs: &[String],
    c: Option<u64>,
    d: Option<u64>,
    rel: Option<String>,
    poly: Option<String>,
    porc: Option<String>,
    const_bound: u64,
    limits: &Limits,
) -> Result<WeightedAutomaton, Error> {
    let need = |n: usize| -> Result<Vec<WeightedAutomaton>, Error> {
        if inputs.len() != n {
            return Err(Error::Input(format!(
                "operation {op} takes {n} input automata, got {}",
                inputs.len()
            )));
        }
        inputs.iter().map(|p| load_automaton(p)).collect()
    };
    let need_c = || c.ok_or_else(|| Error::Input(format!("operation {op} needs --c")));
    match op {
        "add" => {
            let ms = need(2)?;
            closures::add(&ms[0], &ms[1])
        }
        "hadamard" => {
            let ms = need(2)?;
            closures::hadamard(&ms[0], &ms[1], limits)
        }
        "sub" => {
            let ms = need(1)?;
            closures::sub_const(&ms[0], need_c()?, limits)
        }
        "clamp" => {
            let ms = need(1)?;
            closures::clamp(&ms[0], need_c()?, limits)
        }
        "indicator" => {
            let ms = need(1)?;
            let rel = match rel.as_deref() {
                Some("eq") | Some("=") => Cmp::Eq,
                Some("le") | Some("<=") => Cmp::Le,
                Some("ge") | Some(">=") => Cmp::Ge,
                Some(other) => {
                    return Err(Error::Input(format!(
                        "unknown relation {other:?}; expected eq, le or ge"
                    )))
                }
                None => return Err(Error::Input("indicator needs --rel".into())),
            };
            closures::indicator(&ms[0], rel, need_c()?, limits)
        }
        "div" => {
            let ms = need(1)?;
            closures::div_const(&ms[0], need_c()?, limits)
        }
        "mod" => {
            let ms = need(1)?;
            let modulus = need_c()?;
            let residue = d.ok_or_else(|| Error::Input("mod needs --d".into()))?;
            closures::mod_indicator(&ms[0], modulus, residue, limits)
        }
        "binom" => {
            let ms = need(1)?;
            closures::binom_const(&ms[0], need_c()?, limits)
        }
        "porc" => {
            let ms = need(1)?;
            let path = porc.ok_or_else(|| Error::Input("porc needs --porc FILE".into()))?;
            let phi = PorcFunction::from_json(&read_input(&path)?)?;
            closures::porc_compose(&ms[0], &phi, limits)
        }
        "poly" => {
            let expr = poly.ok_or_else(|| Error::Input("poly needs --poly EXPR".into()))?;
            let (parsed, names) = parse_polynomial(&expr)?;
            let binomial = parsed.to_binomial()?;
            let ms = need(names.len())?;
            let refs: Vec<&WeightedAutomaton> = ms.iter().collect();
            build_poly_closure(&binomial, &refs, const_bound, limits)
        }
        other => Err(Error::Input(format!(
            "unknown operation {other:?}; expected add, hadamard, sub, clamp, indicator, div, mod, binom, porc or poly"
        ))),
    }
}
