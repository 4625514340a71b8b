//! `leafatlas` command-line front end.
//!
//! Exit codes: 0 success, 1 negative `check` verdict or `selftest` mismatch,
//! 2 invalid input.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::atlas::{build_atlas, check_middle_term, validate_input, AtlasInput, LeafRecord};
use crate::bundles::{hn_decompose, BundleType};
use crate::error::Error;
use crate::oracle::{differential_check, DiffReport};
use crate::polygons::{hn_polygon, render_svg};

pub const MAX_N_VAR: &str = "LEAFATLAS_MAX_N";
pub const DEFAULT_MAX_N: i64 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "leafatlas",
    version,
    about = "Leaf types of extension spaces of stable bundles on an elliptic curve"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List admissible middle-term types with their dimensions.
    Enumerate(EnumerateArgs),
    /// Decide whether a bundle type is an admissible middle term.
    Check(CheckArgs),
    /// Write the Shatz order on HN types as a DOT digraph.
    Poset(PosetArgs),
    /// Write the SVG of a type's HN polygon over the admissibility triangle.
    Polygon(PolygonArgs),
    /// Compare optimized routines against brute force for all small (k, n).
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
struct Charge {
    /// Rank of F.
    #[arg(short = 'k', allow_negative_numbers = true)]
    k: i64,
    /// Degree of F.
    #[arg(short = 'n', allow_negative_numbers = true)]
    n: i64,
}

#[derive(Args, Debug)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[command(flatten)]
    charge: Charge,
    /// Split each HN type into all of its indecomposable refinements.
    #[arg(long)]
    refine: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    output: Output,
    #[arg(short = 'j', long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    charge: Charge,
    /// Bundle type, e.g. "1,2*2;1,1".
    #[arg(long = "type")]
    type_string: String,
}

#[derive(Args, Debug)]
struct PosetArgs {
    #[command(flatten)]
    charge: Charge,
    #[arg(long)]
    refine: bool,
    #[command(flatten)]
    output: Output,
    #[arg(short = 'j', long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
}

#[derive(Args, Debug)]
struct PolygonArgs {
    #[command(flatten)]
    charge: Charge,
    #[arg(long = "type")]
    type_string: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    /// Largest n to check.
    #[arg(long, default_value_t = 10)]
    max_n: i64,
    #[arg(short = 'j', long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Enumerate,
    Check,
    Poset,
    Polygon,
    Selftest,
}

/// Fully parsed invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliConfig {
    pub command: CommandKind,
    pub k: i64,
    pub n: i64,
    pub type_string: Option<String>,
    pub format: Format,
    pub output_path: Option<PathBuf>,
    pub refine: bool,
    pub jobs: usize,
}

impl From<Cli> for CliConfig {
    fn from(cli: Cli) -> Self {
        let base = |command, charge: &Charge| CliConfig {
            command,
            k: charge.k,
            n: charge.n,
            type_string: None,
            format: Format::Json,
            output_path: None,
            refine: false,
            jobs: 1,
        };
        match cli.command {
            Command::Enumerate(a) => CliConfig {
                refine: a.refine,
                format: a.format,
                output_path: a.output.output,
                jobs: a.jobs.into(),
                ..base(CommandKind::Enumerate, &a.charge)
            },
            Command::Check(a) => CliConfig {
                type_string: Some(a.type_string),
                ..base(CommandKind::Check, &a.charge)
            },
            Command::Poset(a) => CliConfig {
                refine: a.refine,
                output_path: a.output.output,
                jobs: a.jobs.into(),
                ..base(CommandKind::Poset, &a.charge)
            },
            Command::Polygon(a) => CliConfig {
                type_string: Some(a.type_string),
                output_path: a.output.output,
                ..base(CommandKind::Polygon, &a.charge)
            },
            Command::Selftest(a) => CliConfig {
                command: CommandKind::Selftest,
                k: 1,
                n: a.max_n,
                type_string: None,
                format: Format::Json,
                output_path: None,
                refine: false,
                jobs: a.jobs.into(),
            },
        }
    }
}

pub fn parse_args<I, T>(args: I) -> Result<CliConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(args).map(CliConfig::from)
}

/// Parses `args` (including the program name) and runs the command on the
/// process's stdout/stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match parse_args(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(&config, &mut stdout.lock(), &mut stderr.lock())
}

enum Failure {
    Invalid(String),
    Negative,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

pub fn run(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(config, out, err) {
        Ok(()) => 0,
        Err(Failure::Negative) => 1,
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn max_n() -> Result<i64, Failure> {
    match std::env::var(MAX_N_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Invalid(format!("{MAX_N_VAR} must be an integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn checked_input(config: &CliConfig, err: &mut dyn Write) -> Result<AtlasInput, Failure> {
    let cap = max_n()?;
    if config.n > cap {
        return Err(Failure::Invalid(format!(
            "n = {} exceeds {MAX_N_VAR} = {cap}",
            config.n
        )));
    }
    let input = validate_input(config.k, config.n)?;
    if let Some(w) = input.warning() {
        let _ = writeln!(err, "warning: {w}");
    }
    Ok(input)
}

fn parse_type(config: &CliConfig) -> Result<BundleType, Failure> {
    let s = config.type_string.as_deref().unwrap_or_default();
    Ok(s.parse::<BundleType>()?)
}

fn emit(config: &CliConfig, out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    match &config.output_path {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Invalid(format!("cannot write output: {e}"))),
    }
}

fn dispatch(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match config.command {
        CommandKind::Enumerate => {
            let input = checked_input(config, err)?;
            let atlas = build_atlas(&input, config.refine, config.jobs)?;
            let text = match config.format {
                Format::Json => atlas.to_json(),
                Format::Tsv => atlas.to_tsv(),
            };
            emit(config, out, &text)
        }
        CommandKind::Poset => {
            let input = checked_input(config, err)?;
            let atlas = build_atlas(&input, config.refine, config.jobs)?;
            emit(config, out, &atlas.to_dot())
        }
        CommandKind::Check => {
            let input = checked_input(config, err)?;
            let t = parse_type(config)?;
            check(&t, &input, out)
        }
        CommandKind::Polygon => {
            let input = checked_input(config, err)?;
            let t = parse_type(config)?;
            if t.is_empty() {
                return Err(Failure::Invalid("polygon needs a non-empty type".into()));
            }
            let svg = render_svg(&hn_polygon(&hn_decompose(&t)), input.triangle());
            emit(config, out, &svg)
        }
        CommandKind::Selftest => selftest(config, out),
    }
}

fn check(t: &BundleType, input: &AtlasInput, out: &mut dyn Write) -> Result<(), Failure> {
    let verdict = check_middle_term(t, input);
    let nu = hn_decompose(t);
    let vertices = hn_polygon(&nu)
        .vertices()
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    let mut text = format!("type: {t}\nhn_type: {nu}\nvertices: {vertices}\n");
    if verdict.admissible {
        let r = LeafRecord::new(t.clone(), input.n())?;
        text.push_str(&format!(
            "end_dim: {}\nleaf_dim: {}\nmoduli_dim: {}\nstratum_dim: {}\n",
            r.end_dim, r.leaf_dim, r.moduli_dim, r.stratum_dim
        ));
    }
    text.push_str(&format!("verdict: {verdict}\n"));
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Invalid(format!("cannot write output: {e}")))?;
    if verdict.admissible {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

fn selftest(config: &CliConfig, out: &mut dyn Write) -> Result<(), Failure> {
    let bound = config.n;
    let cap = max_n()?;
    if bound > cap {
        return Err(Failure::Invalid(format!(
            "--max-n {bound} exceeds {MAX_N_VAR} = {cap}"
        )));
    }
    let cases: Vec<(i64, i64)> = (2..=bound)
        .flat_map(|n| (1..n).map(move |k| (k, n)))
        .filter(|&(k, n)| validate_input(k, n).is_ok())
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Failure::Invalid(format!("cannot start workers: {e}")))?;
    let reports: Vec<Result<DiffReport, Error>> = pool.install(|| {
        cases
            .par_iter()
            .map(|&(k, n)| differential_check(k, n))
            .collect()
    });

    let mut text = String::new();
    let mut failed = 0;
    for report in reports {
        let report = report?;
        let status = if report.agrees() { "ok" } else { "MISMATCH" };
        text.push_str(&format!(
            "k={} n={}: {} types, {} polygon pairs, {status}\n",
            report.k, report.n, report.types_checked, report.pairs_checked
        ));
        for m in &report.mismatches {
            text.push_str(&format!("  {m}\n"));
        }
        if !report.agrees() {
            failed += 1;
        }
    }
    text.push_str(&format!(
        "selftest: {} cases with n <= {bound}, {failed} mismatched\n",
        cases.len()
    ));
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Invalid(format!("cannot write output: {e}")))?;
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Negative)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let config = parse_args(std::iter::once("leafatlas").chain(args.iter().copied())).unwrap();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(&config, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn parse_enumerate() {
        let c = parse_args([
            "leafatlas",
            "enumerate",
            "-k",
            "1",
            "-n",
            "3",
            "--refine",
            "--format",
            "tsv",
        ])
        .unwrap();
        assert_eq!(c.command, CommandKind::Enumerate);
        assert_eq!(
            (c.k, c.n, c.refine, c.format, c.jobs),
            (1, 3, true, Format::Tsv, 1)
        );
    }

    #[test]
    fn unknown_flags_are_errors() {
        let e =
            parse_args(["leafatlas", "enumerate", "-k", "1", "-n", "3", "--bogus"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = parse_args([
            "leafatlas",
            "enumerate",
            "-k",
            "1",
            "-n",
            "3",
            "--jobs",
            "0",
        ])
        .unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn check_exit_codes() {
        let (code, out, _) = run_args(&["check", "-k", "1", "-n", "3", "--type", "1,3;1,0"]);
        assert_eq!(code, 1);
        assert!(
            out.contains("vertex (1,3) on triangle boundary; summand degree 0 violates positivity")
        );

        let (code, out, _) = run_args(&["check", "-k", "1", "-n", "3", "--type", "1,1;1,2"]);
        assert_eq!(code, 0);
        assert!(out.contains("verdict: admissible"));
        assert!(out.contains("leaf_dim: 0"));

        let (code, _, err) = run_args(&["check", "-k", "1", "-n", "3", "--type", "1,x"]);
        assert_eq!(code, 2);
        assert!(err.contains("parse error"));

        let (code, _, err) = run_args(&["check", "-k", "2", "-n", "4", "--type", "3,4"]);
        assert_eq!(code, 2);
        assert!(err.contains("no stable F of charge (2,4)"));
    }

    #[test]
    fn small_n_warns() {
        let (code, _, err) = run_args(&["enumerate", "-k", "1", "-n", "2"]);
        assert_eq!(code, 0);
        assert!(err.contains("warning"));
    }
}
