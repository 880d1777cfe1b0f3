//! Command-line front end for `matpow-core`.
//!
//! Matrices travel as `{"rows": [["p/q", ...], ...]}` so entries like `1/3`
//! stay exact. Results go to stdout, diagnostics to stderr.

use std::fmt;
use std::io::{self, Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize};

use matpow_core::{
    bench_power_methods_with, bench_to_csv, charpoly, closed_form_with, eval_closed_form,
    markov_limit, matrix_power, minimal_polynomial, parse_rational, Error, Mat, Modulus,
    PowerMethod, Rational,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("dimension error: {0}")]
    Dim(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Compute(#[from] Error),
}

impl CliError {
    /// 2 for unusable input, 1 for failures inside the computation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Dim(_) | CliError::Io { .. } => 2,
            CliError::Compute(_) => 1,
        }
    }
}

struct Entry(Rational);

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_rational(&text)
            .map(Entry)
            .map_err(|_| de::Error::custom(format!("invalid rational {text:?}")))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixIn {
    rows: Vec<Vec<Entry>>,
}

/// Parses the JSON matrix format.
pub fn parse_matrix_str(text: &str) -> Result<Mat, CliError> {
    let parsed: MatrixIn = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;
    let dim = parsed.rows.len();
    if dim == 0 {
        return Err(CliError::Dim("matrix has no rows".into()));
    }
    if let Some((i, row)) = parsed.rows.iter().enumerate().find(|(_, r)| r.len() != dim) {
        return Err(CliError::Dim(format!(
            "row {i} has {} entries, expected {dim}",
            row.len()
        )));
    }
    let rows = parsed
        .rows
        .into_iter()
        .map(|r| r.into_iter().map(|e| e.0).collect())
        .collect();
    Ok(Mat::from_rows(rows)?)
}

// serde_json appends " at line L column C"; the position is reported separately.
fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(idx) => message[..idx].to_string(),
        None => message.to_string(),
    }
}

/// Reads a matrix from `path`, or from stdin when `path` is `-`.
pub fn parse_matrix(path: &str) -> Result<Mat, CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_string(),
        source,
    };
    let text = if path == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf).map_err(io_err)?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(io_err)?
    };
    parse_matrix_str(&text)
}

/// Exact matrix in the input format, one row per line.
pub fn render_matrix(m: &Mat) -> String {
    let rows: Vec<Vec<String>> = m
        .rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect();
    render_rows(&rows)
}

fn render_float_matrix(rows: &[Vec<f64>]) -> String {
    render_rows(rows)
}

fn render_rows<T: Serialize>(rows: &[T]) -> String {
    let lines: Vec<String> = rows
        .iter()
        .map(|r| format!("  {}", serde_json::to_string(r).expect("serializable row")))
        .collect();
    format!("{{\"rows\": [\n{}\n]}}\n", lines.join(",\n"))
}

#[derive(Debug, Parser)]
#[command(name = "matpow", version, about = "Exact matrix powers via the minimal polynomial")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// JSON matrix file, or `-` for stdin.
    #[arg(default_value = "-")]
    pub matrix: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModulusArg {
    Minpoly,
    Charpoly,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimal polynomial and the leading rows of the reduced power stack.
    Minpoly(Input),
    /// Characteristic polynomial det(kI - A).
    Charpoly(Input),
    /// Exact A^n.
    Pow {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value = "via_minpoly", value_parser = parse_method)]
        method: PowerMethod,
        #[command(flatten)]
        input: Input,
    },
    /// Closed form of every entry of A^n.
    ClosedForm {
        #[arg(long, value_enum, default_value_t = ModulusArg::Minpoly)]
        modulus: ModulusArg,
        #[command(flatten)]
        input: Input,
    },
    /// Closed form evaluated numerically at n.
    Eval {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        input: Input,
    },
    /// Check every power method and the closed form for n = 0..=n_max.
    Verify {
        #[arg(long)]
        n_max: u64,
        #[command(flatten)]
        input: Input,
    },
    /// Limiting distribution of a row-stochastic matrix.
    MarkovLimit(Input),
    /// Time the power methods; prints CSV.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<u64>,
        #[arg(long, value_delimiter = ',', value_parser = parse_method)]
        methods: Vec<PowerMethod>,
        #[command(flatten)]
        input: Input,
    },
}

fn parse_method(s: &str) -> Result<PowerMethod, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Relative tolerance for the numeric closed form against exact powers.
pub const VERIFY_TOLERANCE: f64 = 1e-9;

/// Runs one command. `Ok(false)` means the command ran but reported failures.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<bool, CliError> {
    let text = match &cli.command {
        Command::Minpoly(input) => {
            let report = minimal_polynomial(&parse_matrix(&input.matrix)?)?;
            let mut s = format!("q(k) = {}\nr = {}\n", report.q, report.r);
            for row in report.b_hat.rref.iter().take(report.r) {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                s.push_str(&format!("[{}]\n", cells.join(", ")));
            }
            s
        }
        Command::Charpoly(input) => {
            format!("delta(k) = {}\n", charpoly(&parse_matrix(&input.matrix)?))
        }
        Command::Pow { n, method, input } => {
            render_matrix(&matrix_power(&parse_matrix(&input.matrix)?, *n, *method)?)
        }
        Command::ClosedForm { modulus, input } => {
            let modulus = match modulus {
                ModulusArg::Minpoly => Modulus::Minpoly,
                ModulusArg::Charpoly => Modulus::Charpoly,
            };
            closed_form_with(&parse_matrix(&input.matrix)?, modulus)?.to_string()
        }
        Command::Eval { n, input } => {
            let cf = closed_form_with(&parse_matrix(&input.matrix)?, Modulus::Minpoly)?;
            render_float_matrix(&eval_closed_form(&cf, *n))
        }
        Command::Verify { n_max, input } => {
            return verify(&parse_matrix(&input.matrix)?, *n_max, out);
        }
        Command::MarkovLimit(input) => {
            render_float_matrix(&markov_limit(&parse_matrix(&input.matrix)?)?)
        }
        Command::Bench {
            n_list,
            methods,
            input,
        } => {
            let methods = if methods.is_empty() {
                PowerMethod::ALL.to_vec()
            } else {
                methods.clone()
            };
            let rows = bench_power_methods_with(&parse_matrix(&input.matrix)?, n_list, &methods)?;
            bench_to_csv(&rows)
        }
    };
    write_out(out, &text)?;
    Ok(true)
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: "stdout".into(),
        source,
    })
}

enum Verdict {
    Pass,
    Fail(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("PASS"),
            Verdict::Fail(why) => write!(f, "FAIL ({why})"),
        }
    }
}

fn verify(a: &Mat, n_max: u64, out: &mut dyn Write) -> Result<bool, CliError> {
    let cf = closed_form_with(a, Modulus::Minpoly).map_err(|e| e.to_string());
    let mut naive = Mat::identity(a.dim());
    let mut passed = 0u64;
    for n in 0..=n_max {
        let verdict = verify_one(a, n, &naive, &cf)?;
        if matches!(verdict, Verdict::Pass) {
            passed += 1;
        }
        write_out(out, &format!("{verdict} n={n}\n"))?;
        naive = &naive * a;
    }
    let total = n_max + 1;
    write_out(out, &format!("{passed} of {total} passed\n"))?;
    Ok(passed == total)
}

fn verify_one(
    a: &Mat,
    n: u64,
    naive: &Mat,
    cf: &Result<matpow_core::ClosedForm, String>,
) -> Result<Verdict, CliError> {
    for method in [
        PowerMethod::ViaMinpoly,
        PowerMethod::ViaCharpoly,
        PowerMethod::BinaryMatrix,
    ] {
        if matrix_power(a, n, method)? != *naive {
            return Ok(Verdict::Fail(format!("{method} differs from naive")));
        }
    }
    let cf = match cf {
        Ok(cf) => cf,
        Err(e) => return Ok(Verdict::Fail(format!("no closed form: {e}"))),
    };
    if let Some(exact) = cf.eval_exact(n) {
        return Ok(if exact == *naive {
            Verdict::Pass
        } else {
            Verdict::Fail("exact closed form differs".into())
        });
    }
    let expected = naive.to_f64();
    let scale = expected.iter().flatten().fold(1.0f64, |s, x| s.max(x.abs()));
    let got = eval_closed_form(cf, n);
    let worst = expected
        .iter()
        .flatten()
        .zip(got.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max);
    Ok(if worst <= VERIFY_TOLERANCE * scale {
        Verdict::Pass
    } else {
        Verdict::Fail(format!("closed form off by {worst:e}"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_serde_position() {
        assert_eq!(strip_position("EOF while parsing at line 1 column 3"), "EOF while parsing");
        assert_eq!(strip_position("plain"), "plain");
    }

    #[test]
    fn bad_entry_reports_its_line() {
        let err = parse_matrix_str("{\"rows\": [\n  [\"1\", \"2\"],\n  [\"3\", \"x\"]\n]}").unwrap_err();
        match err {
            CliError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(err_code("{\"rows\": []}"), 2);
    }

    fn err_code(text: &str) -> i32 {
        parse_matrix_str(text).unwrap_err().exit_code()
    }
}
