//! Command-line front end.
//!
//! Exit codes: `0` success, `1` verification failure, `2` usage error.
//! Setting `QMARKOFF_THREADS` pins the size of the worker pool; output does not
//! depend on it.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde::Serialize;

use crate::counterexamples::CounterexampleReport;
use crate::error::Error;
use crate::language::{
    classify_change, curves_csv, curves_export, curves_strictly_increasing, enumerate_factors,
    flip_permutation, parse_rational, radix_chain_check, BalancedSpec, Change,
};
use crate::morphism::{mu, mu_q, q_markoff, tree_nodes};
use crate::pairs::{build_pair, exhaustive_report, indistinguishability_report};
use crate::spectrum::{supremum_check, DEFAULT_DEPTH};
use crate::words::{BinaryWord, Glyphs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Tolerance on the supremum residual beyond the certified error bound.
const RESIDUAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "qmarkoff",
    version,
    about = "q-deformed Markoff numbers over balanced languages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Christoffel, Markoff and q-Markoff trees
    Tree(TreeArgs),
    /// mu, mu_q and the q-Markoff polynomial of a word
    Qmarkoff { word: BinaryWord },
    /// Factors of length N with their local changes
    Language {
        #[arg(long)]
        spec: BalancedSpec,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long)]
        json: bool,
        /// Render words over {0, 1}
        #[arg(long)]
        digits: bool,
    },
    /// Check that q_markoff increases along the radix order of the language
    VerifyMonotone {
        #[arg(long)]
        spec: BalancedSpec,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_n: u32,
    },
    /// Markoff supremum of the periodic sequence sigma(w) against its closed form
    Spectrum {
        word: BinaryWord,
        #[arg(long, default_value_t = DEFAULT_DEPTH as u32, value_parser = clap::value_parser!(u32).range(2..))]
        depth: u32,
        #[arg(long)]
        csv: bool,
    },
    /// CSV of (word, gamma, q_markoff(word) at gamma)
    Curves {
        #[arg(long)]
        spec: BalancedSpec,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_len: u32,
        /// Comma-separated positive rationals, e.g. 0.01,1/2,3
        #[arg(long, value_delimiter = ',', value_parser = parse_gamma)]
        gammas: Vec<BigRational>,
    },
    /// Indistinguishability of the central asymptotic pair
    PairCheck {
        #[arg(long)]
        spec: BalancedSpec,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        radius: u32,
        /// Also enumerate non-contiguous supports
        #[arg(long)]
        exhaustive: bool,
    },
    /// Failures of monotonicity across languages and collisions
    Counterexamples {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
struct TreeArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=20))]
    depth: u32,
    #[arg(long, group = "view")]
    triples: bool,
    #[arg(long, group = "view")]
    qpoly: bool,
    #[arg(long, group = "view")]
    json: bool,
}

fn parse_gamma(s: &str) -> Result<BigRational, String> {
    let gamma = parse_rational(s).map_err(|e| e.to_string())?;
    if gamma <= BigRational::from_integer(0.into()) {
        return Err(format!("gamma must be positive, got {s}"));
    }
    Ok(gamma)
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NotIncreasing { .. }
        | Error::Complexity { .. }
        | Error::ChangeStructure { .. }
        | Error::ClassMismatch(_)
        | Error::FlipIdentity(_) => EXIT_FAILURE,
        _ => EXIT_USAGE,
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable output")
}

/// Output of a command, assembled before emission.
struct Outcome {
    stdout: String,
    stderr: String,
    code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }

    fn verdict(stdout: String, passed: bool) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: if passed { EXIT_OK } else { EXIT_FAILURE },
        }
    }

    fn error(err: Error) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
            code: exit_code(&err),
        }
    }
}

fn lines<I: IntoIterator<Item = String>>(items: I) -> String {
    items.into_iter().map(|l| l + "\n").collect()
}

fn run_tree(args: &TreeArgs) -> Outcome {
    let nodes = tree_nodes(args.depth as usize);
    if args.json {
        return Outcome::ok(to_json(&nodes) + "\n");
    }
    Outcome::ok(lines(nodes.iter().map(|n| {
        if args.triples {
            n.triple.to_string()
        } else if args.qpoly {
            n.q_markoff.to_string()
        } else {
            format!("{}\t{}\t{}", n.split, n.triple, n.q_markoff)
        }
    })))
}

fn run_qmarkoff(word: &BinaryWord) -> Outcome {
    let m = mu_q(word);
    Outcome::ok(lines([
        format!("word: {word}"),
        format!("mu: {}", mu(word)),
        format!("mu_q: [[{}, {}], [{}, {}]]", m.e11, m.e12, m.e21, m.e22),
        format!("q_markoff: {}", q_markoff(word)),
    ]))
}

#[derive(Serialize)]
struct LanguageJson<'a> {
    n: usize,
    factors: &'a [BinaryWord],
    changes: Vec<Change>,
}

fn run_language(spec: &BalancedSpec, n: usize, json: bool, digits: bool) -> Outcome {
    let language = match enumerate_factors(spec, n) {
        Ok(l) => l,
        Err(e) => return Outcome::error(e),
    };
    let structure = flip_permutation(spec, n);
    let changes: Vec<Change> = language
        .factors
        .windows(2)
        .filter_map(|p| {
            classify_change(&p[0], &p[1]).map(|kind| Change {
                from: p[0].clone(),
                to: p[1].clone(),
                kind,
            })
        })
        .collect();
    if json {
        let body = LanguageJson {
            n,
            factors: &language.factors,
            changes,
        };
        return Outcome::ok(to_json(&body) + "\n");
    }
    let glyphs = if digits {
        Glyphs::Digits
    } else {
        Glyphs::Letters
    };
    let mut out = vec![
        format!("spec: {spec}"),
        format!("n: {n}"),
        format!("factors: {}", language.factors.len()),
    ];
    for (i, factor) in language.factors.iter().enumerate() {
        let tag = language
            .factors
            .get(i + 1)
            .and_then(|next| classify_change(factor, next))
            .map(|kind| format!("  -> {kind}"))
            .unwrap_or_default();
        out.push(format!("{}{tag}", factor.render(glyphs)));
    }
    out.push(match &structure {
        Ok(_) => "structure: n+1 factors, one last-letter change, flips inside w".into(),
        Err(e) => format!("structure: {e}"),
    });
    Outcome::ok(lines(out))
}

fn run_verify_monotone(spec: &BalancedSpec, max_n: usize) -> Outcome {
    match radix_chain_check(spec, max_n) {
        Ok(report) => Outcome::ok(lines([
            format!("spec: {spec}"),
            format!("max_n: {max_n}"),
            format!("factors: {}", report.factors.len()),
            format!("links: {}", report.links.len()),
            "result: pass".into(),
        ])),
        Err(e @ Error::NotIncreasing { .. }) => Outcome {
            stdout: lines([
                format!("spec: {spec}"),
                format!("max_n: {max_n}"),
                format!("result: fail ({e})"),
            ]),
            stderr: String::new(),
            code: EXIT_FAILURE,
        },
        Err(e) => Outcome::error(e),
    }
}

fn run_spectrum(word: &BinaryWord, depth: usize, csv: bool) -> Outcome {
    let check = match supremum_check(word, depth) {
        Ok(c) => c,
        Err(e) => return Outcome::error(e),
    };
    let passed = check.residual <= check.error_bound + RESIDUAL_TOLERANCE
        && check.supremum <= 3.0 + check.error_bound;
    let stdout = if csv {
        format!(
            "word,m,supremum,closed_form,residual\n{},{},{:.17e},{:.17e},{:e}\n",
            check.word.render(Glyphs::Digits),
            check.m,
            check.supremum,
            check.closed_form,
            check.residual
        )
    } else {
        format!(
            "{check}\nresult: {}\n",
            if passed { "pass" } else { "fail" }
        )
    };
    Outcome::verdict(stdout, passed)
}

fn run_curves(spec: &BalancedSpec, max_len: usize, gammas: &[BigRational]) -> Outcome {
    if gammas.is_empty() {
        return Outcome::error(Error::InvalidArgument(
            "--gammas needs at least one value".into(),
        ));
    }
    match curves_export(spec, max_len, gammas) {
        Ok(rows) => {
            let increasing = curves_strictly_increasing(&rows);
            let mut outcome = Outcome::verdict(curves_csv(&rows), increasing);
            if !increasing {
                outcome.stderr = "values do not strictly increase in radix order\n".into();
            }
            outcome
        }
        Err(e) => Outcome::error(e),
    }
}

fn run_pair_check(spec: &BalancedSpec, radius: usize, exhaustive: bool) -> Outcome {
    let pair = match build_pair(spec, 0) {
        Ok(p) => p,
        Err(e) => return Outcome::error(e),
    };
    let report = match indistinguishability_report(&pair, radius) {
        Ok(r) => r,
        Err(e) => return Outcome::error(e),
    };
    let mut out = vec![
        format!("spec: {spec}"),
        "supports: contiguous".into(),
        report.to_string(),
    ];
    let mut passed = report.passed;
    if exhaustive {
        match exhaustive_report(&pair, radius) {
            Ok(full) => {
                passed &= full.passed;
                out.push("supports: all".into());
                out.push(full.to_string());
            }
            Err(e) => return Outcome::error(e),
        }
    }
    Outcome::verdict(lines(out), passed)
}

fn run_counterexamples(json: bool) -> Outcome {
    let report = CounterexampleReport::compute();
    let stdout = if json {
        to_json(&report) + "\n"
    } else {
        report.to_string() + "\n"
    };
    Outcome::verdict(stdout, report.all_verified())
}

fn dispatch(command: &Command) -> Outcome {
    match command {
        Command::Tree(args) => run_tree(args),
        Command::Qmarkoff { word } => run_qmarkoff(word),
        Command::Language {
            spec,
            n,
            json,
            digits,
        } => run_language(spec, *n as usize, *json, *digits),
        Command::VerifyMonotone { spec, max_n } => run_verify_monotone(spec, *max_n as usize),
        Command::Spectrum { word, depth, csv } => run_spectrum(word, *depth as usize, *csv),
        Command::Curves {
            spec,
            max_len,
            gammas,
        } => run_curves(spec, *max_len as usize, gammas),
        Command::PairCheck {
            spec,
            radius,
            exhaustive,
        } => run_pair_check(spec, *radius as usize, *exhaustive),
        Command::Counterexamples { json } => run_counterexamples(*json),
    }
}

fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var("QMARKOFF_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    match threads.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
                return EXIT_USAGE;
            }
            let _ = stdout.write_all(rendered.as_bytes());
            return EXIT_OK;
        }
    };
    let outcome = with_pool(|| dispatch(&cli.command));
    let _ = stdout.write_all(outcome.stdout.as_bytes());
    let _ = stderr.write_all(outcome.stderr.as_bytes());
    outcome.code
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run(args, &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("qmarkoff").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn tree_root_triple() {
        assert_eq!(
            run_args(&["tree", "--depth", "0", "--triples"]),
            (0, "(1,5,2)\n".into(), String::new())
        );
    }

    #[test]
    fn qmarkoff_word() {
        let (code, out, _) = run_args(&["qmarkoff", "aabab"]);
        assert_eq!(code, 0);
        assert!(out.contains(
            "q_markoff: 1 + 4*q + 10*q^2 + 18*q^3 + 27*q^4 + 33*q^5 + 33*q^6 + 29*q^7 + 21*q^8 + 12*q^9 + 5*q^10 + q^11\n"
        ));
        assert!(out.contains("mu: [[463, 194], [284, 119]]"), "{out}");
        assert_eq!(run_args(&["qmarkoff", "00101"]).1, out);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["qmarkoff", "abc"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["language", "--spec", "bogus", "--n", "3"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_args(&["language", "--spec", "fibonacci", "--n", "0"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_args(&[
                "curves",
                "--spec",
                "fibonacci",
                "--max-len",
                "3",
                "--gammas",
                "0"
            ])
            .0,
            EXIT_USAGE
        );
        assert_eq!(run_args(&["spectrum", "aabb"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["pair-check", "--spec", "periodic:ab", "--radius", "2"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn verification_commands_pass() {
        assert_eq!(
            run_args(&["verify-monotone", "--spec", "fibonacci", "--max-n", "9"]).0,
            0
        );
        assert_eq!(run_args(&["spectrum", "aabab"]).0, 0);
        assert_eq!(
            run_args(&[
                "pair-check",
                "--spec",
                "fibonacci",
                "--radius",
                "4",
                "--exhaustive"
            ])
            .0,
            0
        );
        assert_eq!(run_args(&["counterexamples"]).0, 0);
    }

    #[test]
    fn language_listing() {
        let (code, out, _) = run_args(&["language", "--spec", "fibonacci", "--n", "3"]);
        assert_eq!(code, 0);
        assert!(out.contains("aab  -> flip_ab_ba(u=a,v=ε)\n"), "{out}");
        assert!(out.contains("baa  -> last_letter\n"));
        let (_, json, _) = run_args(&["language", "--spec", "fibonacci", "--n", "1", "--json"]);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["factors"], serde_json::json!(["a", "b"]));
        assert_eq!(value["changes"][0]["kind"], "last_letter");
    }

    #[test]
    fn curves_csv_output() {
        let (code, out, _) = run_args(&[
            "curves",
            "--spec",
            "fibonacci",
            "--max-len",
            "1",
            "--gammas",
            "1,0.5",
        ]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "word,gamma,value\n,1,0\n0,1,1\n1,1,2\n,0.5,0\n0,0.5,1\n1,0.5,1.5\n"
        );
    }
}
