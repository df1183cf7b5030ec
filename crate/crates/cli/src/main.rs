//! Command-line interface: parse indices, compute in the Hopf superalgebras,
//! convert between bases, expand into truncated polynomial algebras, emit
//! poset diagrams, and run the named verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use superqsym::combinat::{
    DottedComposition, SetSupercomposition, SetSuperpartition, Superpermutation,
};
use superqsym::hopf::{
    self, AnyComb, BasisId, DcComb, LinComb, ScComb, TensorComb,
};
use superqsym::oracle::{self, Poly};
use superqsym::posets::{self, PosetInterval};
use superqsym::suites::run_suite;

#[derive(Parser)]
#[command(
    name = "superqsym",
    version,
    about = "Exact arithmetic in the Hopf superalgebras of dotted compositions and set supercompositions",
    after_help = "Index grammar: dotted compositions like (1,.0,2); set supercompositions like \
{0,2}|{1}|{0,3}; `e` is the empty index of either kind.  Bases Mnc, Q, m, MonF take set \
supercompositions (m requires a set superpartition, MonF a superpermutation); Mc and L take \
dotted compositions."
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// One term per line, sorted by index serialization.
    Text,
    /// JSON mirroring the text output one term per entry.
    Structured,
    /// Graphviz DOT (poset only).
    Dot,
}

fn basis_arg(s: &str) -> Result<BasisId, String> {
    BasisId::parse(s).ok_or_else(|| format!("unknown basis `{s}`; expected one of Mnc, Q, m, MonF, Mc, L"))
}

#[derive(Subcommand)]
enum Verb {
    /// Multiply two basis elements in the chosen basis.
    Product {
        #[arg(long, value_parser = basis_arg)]
        basis: BasisId,
        /// Left factor index.
        left: String,
        /// Right factor index.
        right: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Coproduct of a basis element (bases Mnc, Q, m, MonF).
    Coproduct {
        #[arg(long, value_parser = basis_arg)]
        basis: BasisId,
        index: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Antipode of a basis element (bases Mnc, Q).
    Antipode {
        #[arg(long, value_parser = basis_arg)]
        basis: BasisId,
        index: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Rewrite a basis element in another basis.
    Convert {
        /// Source basis.
        #[arg(long, value_parser = basis_arg)]
        basis: BasisId,
        /// Target basis.
        #[arg(long, value_parser = basis_arg)]
        to: BasisId,
        index: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Expand a basis element into the truncated (super)polynomial algebra.
    Expand {
        #[arg(long, value_parser = basis_arg)]
        basis: BasisId,
        /// Alphabet size N: bosonic variables x1..xN and fermionic t1..tN.
        #[arg(long)]
        vars: u32,
        index: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Emit a poset interval attached to an index.
    Poset {
        index: String,
        /// Refinements of a dotted composition (default for dotted indices).
        #[arg(long, group = "mode")]
        downset: bool,
        /// Coarsenings of a set supercomposition (default for set indices).
        #[arg(long, group = "mode")]
        upset: bool,
        /// Weak-order interval spanned by the fiber over a dotted composition.
        #[arg(long, group = "mode")]
        fiber: bool,
        /// Shorthand for `--format dot`.
        #[arg(long, conflicts_with = "format")]
        dot: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a named verification suite; exits 1 if any check fails.
    Verify {
        /// One of: paper-examples, hopf-axioms, oracle-products, actions, posets.
        #[arg(long)]
        suite: String,
        /// Total-size bound for the exhaustive sweeps.
        #[arg(long, default_value_t = 4)]
        max_size: u32,
        /// Seed for the random sweeps.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// A failure with the exit code it maps to (2 usage/parse, 1 verification).
struct Failure {
    message: String,
    code: u8,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        code: 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.verb) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

// ---------------------------------------------------------------------------
// Index parsing per basis
// ---------------------------------------------------------------------------

fn parse_set(text: &str) -> Result<SetSupercomposition, Failure> {
    text.parse().map_err(|e| usage(format!("{e}")))
}

fn parse_dotted(text: &str) -> Result<DottedComposition, Failure> {
    text.parse().map_err(|e| usage(format!("{e}")))
}

fn parse_superpartition(text: &str) -> Result<SetSuperpartition, Failure> {
    let sc = parse_set(text)?;
    SetSuperpartition::try_from(sc).map_err(|e| usage(format!("{e}")))
}

fn parse_superpermutation(text: &str) -> Result<Superpermutation, Failure> {
    let sc = parse_set(text)?;
    Superpermutation::try_from(sc).map_err(|e| usage(format!("{e}")))
}

// ---------------------------------------------------------------------------
// Structured (JSON) mirrors of the text renderers
// ---------------------------------------------------------------------------

/// Terms in the same order as `hopf::render_comb`: sorted by serialization.
fn comb_terms<K: Ord + Clone + std::fmt::Display>(x: &LinComb<K>) -> Vec<Value> {
    let mut lines: Vec<(String, String)> = x
        .iter()
        .map(|(k, c)| (k.to_string(), hopf::format_coeff(c)))
        .collect();
    lines.sort();
    lines
        .into_iter()
        .map(|(idx, c)| json!({ "coefficient": c, "index": idx }))
        .collect()
}

/// Terms in the same order as `hopf::render_tensor`.
fn tensor_terms<K: Ord + Clone + std::fmt::Display>(x: &TensorComb<K>) -> Vec<Value> {
    let mut lines: Vec<(String, String, String)> = x
        .iter()
        .map(|((l, r), c)| (l.to_string(), r.to_string(), hopf::format_coeff(c)))
        .collect();
    lines.sort();
    lines
        .into_iter()
        .map(|(l, r, c)| json!({ "coefficient": c, "left": l, "right": r }))
        .collect()
}

/// Terms in the same order as `oracle::render_poly`.
fn poly_terms<M: Ord + Clone + std::fmt::Display>(p: &Poly<M>) -> Vec<Value> {
    let mut lines: Vec<(String, i64)> = p.iter().map(|(m, &c)| (m.to_string(), c)).collect();
    lines.sort();
    lines
        .into_iter()
        .map(|(m, c)| {
            let sign = if c < 0 {
                c.to_string()
            } else {
                format!("+{c}")
            };
            json!({ "coefficient": sign, "monomial": m })
        })
        .collect()
}

/// Writes to stdout, exiting quietly when the consumer closed the pipe.
fn write_out(s: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(s.as_bytes()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: failed to write output: {e}");
        std::process::exit(1);
    }
}

fn emit(value: Value) {
    let rendered =
        serde_json::to_string_pretty(&value).expect("JSON serialization is infallible here");
    write_out(&format!("{rendered}\n"));
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

fn reject_dot(format: Format) -> Result<(), Failure> {
    if format == Format::Dot {
        Err(usage("dot output is only available for the poset verb"))
    } else {
        Ok(())
    }
}

/// Computed output of an algebraic verb, carrying enough to render either way.
enum Outcome {
    Set(BasisId, ScComb),
    Dotted(BasisId, DcComb),
    SetTensor(BasisId, TensorComb<SetSupercomposition>),
}

impl Outcome {
    fn text(&self) -> String {
        match self {
            Outcome::Set(b, x) => hopf::render_comb(*b, x),
            Outcome::Dotted(b, x) => hopf::render_comb(*b, x),
            Outcome::SetTensor(b, x) => hopf::render_tensor(*b, x),
        }
    }

    fn terms(&self) -> Vec<Value> {
        match self {
            Outcome::Set(_, x) => comb_terms(x),
            Outcome::Dotted(_, x) => comb_terms(x),
            Outcome::SetTensor(_, x) => tensor_terms(x),
        }
    }

    fn basis(&self) -> BasisId {
        match self {
            Outcome::Set(b, _) | Outcome::Dotted(b, _) | Outcome::SetTensor(b, _) => *b,
        }
    }
}

fn render_outcome(outcome: &Outcome, format: Format, header: Value) -> Result<ExitCode, Failure> {
    match format {
        Format::Text => write_out(&outcome.text()),
        Format::Structured => {
            let mut v = header;
            v["basis"] = json!(outcome.basis().token());
            v["terms"] = Value::Array(outcome.terms());
            emit(v);
        }
        Format::Dot => unreachable!("rejected earlier"),
    }
    Ok(ExitCode::SUCCESS)
}

fn product(basis: BasisId, left: &str, right: &str) -> Result<Outcome, Failure> {
    match basis {
        BasisId::MNc => {
            let (i, j) = (parse_set(left)?, parse_set(right)?);
            Ok(Outcome::Set(basis, hopf::product_mnc(&i, &j)))
        }
        BasisId::Q => {
            let (i, j) = (parse_set(left)?, parse_set(right)?);
            Ok(Outcome::Set(basis, hopf::product_q(&i, &j)))
        }
        BasisId::MSym => {
            let (i, j) = (parse_superpartition(left)?, parse_superpartition(right)?);
            Ok(Outcome::Set(basis, hopf::product_msym(&i, &j)))
        }
        BasisId::MonF => {
            let (i, j) = (parse_superpermutation(left)?, parse_superpermutation(right)?);
            let x = hopf::product_monf(&i, &j).map_err(|e| usage(format!("{e}")))?;
            Ok(Outcome::Set(basis, x))
        }
        BasisId::MC => {
            let (a, b) = (parse_dotted(left)?, parse_dotted(right)?);
            Ok(Outcome::Dotted(basis, hopf::product_mc(&a, &b)))
        }
        BasisId::L => {
            let (a, b) = (parse_dotted(left)?, parse_dotted(right)?);
            Ok(Outcome::Dotted(basis, hopf::product_fund(&a, &b)))
        }
    }
}

fn coproduct(basis: BasisId, index: &str) -> Result<Outcome, Failure> {
    match basis {
        BasisId::MNc => Ok(Outcome::SetTensor(
            basis,
            hopf::coproduct_mnc(&parse_set(index)?),
        )),
        BasisId::Q => Ok(Outcome::SetTensor(
            basis,
            hopf::coproduct_q(&parse_set(index)?),
        )),
        BasisId::MSym => Ok(Outcome::SetTensor(
            basis,
            hopf::coproduct_msym(&parse_superpartition(index)?),
        )),
        BasisId::MonF => Ok(Outcome::SetTensor(
            basis,
            hopf::coproduct_monf(&parse_superpermutation(index)?),
        )),
        BasisId::MC | BasisId::L => Err(usage(format!(
            "coproduct is not implemented in basis {}; it is available in Mnc, Q, m, and MonF",
            basis.token()
        ))),
    }
}

fn antipode(basis: BasisId, index: &str) -> Result<Outcome, Failure> {
    match basis {
        BasisId::MNc => {
            let x = ScComb::term(parse_set(index)?, 1);
            Ok(Outcome::Set(basis, hopf::antipode_mnc(&x)))
        }
        BasisId::Q => {
            let x = ScComb::term(parse_set(index)?, 1);
            Ok(Outcome::Set(basis, hopf::antipode_q(&x)))
        }
        _ => Err(usage(format!(
            "antipode is not implemented in basis {}; it is available in Mnc and Q",
            basis.token()
        ))),
    }
}

fn convert(from: BasisId, to: BasisId, index: &str) -> Result<Outcome, Failure> {
    let x = if from.set_indexed() {
        // Validate the index against the source basis before converting.
        let sc = parse_set(index)?;
        match from {
            BasisId::MSym => {
                parse_superpartition(index)?;
            }
            BasisId::MonF => {
                parse_superpermutation(index)?;
            }
            _ => {}
        }
        AnyComb::Set(ScComb::term(sc, 1))
    } else {
        AnyComb::Dotted(DcComb::term(parse_dotted(index)?, 1))
    };
    match hopf::change_basis(&x, from, to).map_err(|e| usage(format!("{e}")))? {
        AnyComb::Set(c) => Ok(Outcome::Set(to, c)),
        AnyComb::Dotted(c) => Ok(Outcome::Dotted(to, c)),
    }
}

fn expand(
    basis: BasisId,
    vars: u32,
    index: &str,
    format: Format,
) -> Result<ExitCode, Failure> {
    reject_dot(format)?;
    let (text, terms, canonical) = if basis.set_indexed() {
        let i = parse_set(index)?;
        let p = oracle::expand_set_index(basis, &i, vars).map_err(|e| usage(format!("{e}")))?;
        (oracle::render_poly(&p), poly_terms(&p), i.to_string())
    } else {
        let a = parse_dotted(index)?;
        let p = oracle::expand_dotted_index(basis, &a, vars).map_err(|e| usage(format!("{e}")))?;
        (oracle::render_poly(&p), poly_terms(&p), a.to_string())
    };
    match format {
        Format::Text => write_out(&text),
        Format::Structured => emit(json!({
            "verb": "expand",
            "basis": basis.token(),
            "vars": vars,
            "index": canonical,
            "terms": terms,
        })),
        Format::Dot => unreachable!("rejected earlier"),
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// Posets
// ---------------------------------------------------------------------------

fn poset_payload<T: std::fmt::Display>(
    interval: &PosetInterval<T>,
    kind: &str,
    index: String,
    format: Format,
) -> ExitCode {
    match format {
        Format::Dot => write_out(&interval.to_dot()),
        Format::Text => {
            let mut text = String::new();
            for e in interval.elements() {
                text.push_str(&format!("{e}\n"));
            }
            for &(lo, hi) in interval.covers() {
                text.push_str(&format!(
                    "{} -> {}\n",
                    interval.elements()[lo],
                    interval.elements()[hi]
                ));
            }
            write_out(&text);
        }
        Format::Structured => {
            let elements: Vec<String> =
                interval.elements().iter().map(|e| e.to_string()).collect();
            let covers: Vec<Value> = interval
                .covers()
                .iter()
                .map(|&(lo, hi)| json!({ "lower": elements[lo], "upper": elements[hi] }))
                .collect();
            emit(json!({
                "verb": "poset",
                "kind": kind,
                "index": index,
                "elements": elements,
                "covers": covers,
            }));
        }
    }
    ExitCode::SUCCESS
}

fn poset(
    index: &str,
    downset: bool,
    upset: bool,
    fiber: bool,
    format: Format,
) -> Result<ExitCode, Failure> {
    // Infer the interval kind from the index grammar when no flag is given:
    // dotted compositions refine downward, set supercompositions merge upward.
    let trimmed = index.trim_start();
    let (downset, upset) = if !downset && !upset && !fiber {
        if trimmed.starts_with('{') {
            (false, true)
        } else {
            (true, false)
        }
    } else {
        (downset, upset)
    };
    if downset {
        let alpha = parse_dotted(index)?;
        let interval = posets::dotted_downset(&alpha);
        Ok(poset_payload(&interval, "downset", alpha.to_string(), format))
    } else if upset {
        let i = parse_set(index)?;
        let interval = posets::sc_upset(&i);
        Ok(poset_payload(&interval, "upset", i.to_string(), format))
    } else {
        let sigma = parse_dotted(index)?;
        let interval = posets::fiber_interval(&sigma).map_err(|e| usage(format!("{e}")))?;
        Ok(poset_payload(&interval, "fiber", sigma.to_string(), format))
    }
}

// ---------------------------------------------------------------------------
// Verify
// ---------------------------------------------------------------------------

fn verify(suite: &str, max_size: u32, seed: u64, format: Format) -> Result<ExitCode, Failure> {
    reject_dot(format)?;
    let report = run_suite(suite, max_size, seed).map_err(|e| usage(format!("{e}")))?;
    match format {
        Format::Text => write_out(&report.render()),
        Format::Structured => {
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "passed": c.passed,
                        "detail": c.detail,
                    })
                })
                .collect();
            emit(json!({
                "verb": "verify",
                "suite": report.suite,
                "max_size": max_size,
                "seed": seed,
                "checks": checks,
                "passed": report.passed_count(),
                "failed": report.failed_count(),
            }));
        }
        Format::Dot => unreachable!("rejected earlier"),
    }
    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn run(verb: Verb) -> Result<ExitCode, Failure> {
    match verb {
        Verb::Product {
            basis,
            left,
            right,
            format,
        } => {
            reject_dot(format)?;
            let out = product(basis, &left, &right)?;
            render_outcome(&out, format, json!({ "verb": "product" }))
        }
        Verb::Coproduct {
            basis,
            index,
            format,
        } => {
            reject_dot(format)?;
            let out = coproduct(basis, &index)?;
            render_outcome(&out, format, json!({ "verb": "coproduct" }))
        }
        Verb::Antipode {
            basis,
            index,
            format,
        } => {
            reject_dot(format)?;
            let out = antipode(basis, &index)?;
            render_outcome(&out, format, json!({ "verb": "antipode" }))
        }
        Verb::Convert {
            basis,
            to,
            index,
            format,
        } => {
            reject_dot(format)?;
            let out = convert(basis, to, &index)?;
            let header = json!({ "verb": "convert", "from": basis.token() });
            render_outcome(&out, format, header)
        }
        Verb::Expand {
            basis,
            vars,
            index,
            format,
        } => expand(basis, vars, &index, format),
        Verb::Poset {
            index,
            downset,
            upset,
            fiber,
            dot,
            format,
        } => {
            let format = if dot { Format::Dot } else { format };
            poset(&index, downset, upset, fiber, format)
        }
        Verb::Verify {
            suite,
            max_size,
            seed,
            format,
        } => verify(&suite, max_size, seed, format),
    }
}
