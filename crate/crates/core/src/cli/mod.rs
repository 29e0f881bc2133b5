//! Command-line front end.
//!
//! ```text
//! knot-surgery knots
//! knot-surgery show <knot|file>
//! knot-surgery hfk <knot|file>
//! knot-surgery surgery <knot|file> <p/q> [--json] [--spin <i|all>] [--depth N]
//! knot-surgery diagnose <knot|file> <p/q>
//! knot-surgery classify <knot|file> <p/q>
//! knot-surgery compare <knot|file> <knot|file> <p/q>
//! knot-surgery validate <file>
//! ```
//!
//! Exit status is 0 on success, 1 when a computation fails (or `validate`
//! finds violations) and 2 for usage and input errors. `KNOT_SURGERY_DEPTH`
//! sets the default `--depth`.

mod output;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

pub use output::{fraction, group_text, parse_fraction, OutputDocument};
use output::InputDoc;

use crate::acomplex::{alexander_polynomial, genus, hfk_hat};
use crate::cfk::{builtin, parse_text, serialize_text, validate, KnotComplex, BUILTIN_NAMES};
use crate::detect::{classify_surgery, compare, diagnostic_from, Comparison};
use crate::surgery::{hf_plus_with, HFResult, Orientation, Slope, SurgeryOptions};
use crate::{rat, Error};

pub const DEPTH_ENV: &str = "KNOT_SURGERY_DEPTH";

#[derive(Debug, Parser)]
#[command(name = "knot-surgery", version, about = "Heegaard Floer homology of rational surgeries on knots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the bundled knot complexes
    Knots,
    /// Print a complex in the text format
    Show { knot: String },
    /// Knot Floer homology, genus and Alexander polynomial
    Hfk { knot: String },
    /// HF⁺ of p/q surgery per Spin^c structure
    Surgery {
        knot: String,
        #[arg(allow_hyphen_values = true)]
        slope: String,
        #[arg(long)]
        json: bool,
        /// Spin^c index or `all`
        #[arg(long, default_value = "all")]
        spin: String,
        #[arg(long)]
        depth: Option<i64>,
    },
    /// Reduced rank against correction-term deficit
    Diagnose {
        knot: String,
        #[arg(allow_hyphen_values = true)]
        slope: String,
    },
    /// Identify the knot among the unknot, trefoils and figure eight
    Classify {
        knot: String,
        #[arg(allow_hyphen_values = true)]
        slope: String,
    },
    /// Graded comparison of two surgeries
    Compare {
        a: String,
        b: String,
        #[arg(allow_hyphen_values = true)]
        slope: String,
    },
    /// Check a complex file against every axiom
    Validate { file: String },
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. }
            | Error::UnknownKnot(_)
            | Error::InvalidSlope(_)
            | Error::InvalidComplex(_)
            | Error::AmbiguousGrading(_)
            | Error::InconsistentGrading(_)
            | Error::MissingGradings(_)
            | Error::SlopeMismatch(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Runs one invocation against the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs one invocation writing to the given streams; returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Compute(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

struct Loaded {
    complex: KnotComplex,
    input: InputDoc,
}

fn load(arg: &str) -> std::result::Result<Loaded, Failure> {
    if BUILTIN_NAMES.contains(&arg) {
        return Ok(Loaded {
            complex: builtin(arg)?,
            input: InputDoc {
                kind: "builtin".into(),
                name: arg.into(),
                sha256: None,
            },
        });
    }
    let bytes = std::fs::read(arg)
        .map_err(|e| Failure::Usage(format!("`{arg}` is neither a bundled knot nor a readable file: {e}")))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Failure::Usage(format!("{arg}: not UTF-8")))?;
    let complex = parse_text(&text)?;
    let digest: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
    Ok(Loaded {
        complex,
        input: InputDoc {
            kind: "file".into(),
            name: arg.into(),
            sha256: Some(digest),
        },
    })
}

fn default_depth() -> std::result::Result<Option<i64>, Failure> {
    match std::env::var(DEPTH_ENV) {
        Ok(v) => v
            .trim()
            .parse::<i64>()
            .ok()
            .filter(|n| *n > 0)
            .map(Some)
            .ok_or_else(|| Failure::Usage(format!("{DEPTH_ENV} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

fn parse_spin(spin: &str) -> std::result::Result<Option<i64>, Failure> {
    if spin == "all" {
        return Ok(None);
    }
    spin.parse::<i64>()
        .map(Some)
        .map_err(|_| Failure::Usage(format!("--spin expects an integer or `all`, got `{spin}`")))
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Knots => {
            writeln!(out, "{:<14} {:>10} {:>6}", "knot", "generators", "genus")?;
            for name in BUILTIN_NAMES {
                let k = builtin(name)?;
                writeln!(out, "{:<14} {:>10} {:>6}", name, k.len(), genus(&k))?;
            }
            Ok(0)
        }
        Command::Show { knot } => {
            write!(out, "{}", serialize_text(&load(&knot)?.complex))?;
            Ok(0)
        }
        Command::Hfk { knot } => {
            let k = load(&knot)?.complex;
            let (lo, hi) = k.alexander_range();
            let top = hi.max(-lo);
            writeln!(out, "{:>4}  HFK-hat", "s")?;
            for s in (-top..=top).rev() {
                writeln!(out, "{s:>4}  {}", group_text(&hfk_hat(&k, s)?))?;
            }
            writeln!(out, "genus {}", genus(&k))?;
            writeln!(out, "Alexander polynomial {}", alexander_polynomial(&k)?)?;
            Ok(0)
        }
        Command::Surgery {
            knot,
            slope,
            json,
            spin,
            depth,
        } => {
            let loaded = load(&knot)?;
            let slope: Slope = slope.parse()?;
            let depth = match depth {
                Some(n) if n < 1 => return Err(Failure::Usage("--depth must be positive".into())),
                Some(n) => Some(n),
                None => default_depth()?,
            };
            let opts = SurgeryOptions {
                depth,
                spin_c: parse_spin(&spin)?,
                ..SurgeryOptions::default()
            };
            let start = Instant::now();
            let result = hf_plus_with(&loaded.complex, slope, &opts)?;
            let diagnostic = if result.orientation == Orientation::Standard && opts.spin_c.is_none() {
                Some(diagnostic_from(&result)?)
            } else {
                None
            };
            let micros = start.elapsed().as_micros() as u64;
            if json {
                let doc = OutputDocument::new(loaded.input, &result, diagnostic.as_ref(), micros);
                writeln!(out, "{}", doc.to_json())?;
            } else {
                print_result(out, &loaded.input.name, &result)?;
            }
            Ok(0)
        }
        Command::Diagnose { knot, slope } => {
            let loaded = load(&knot)?;
            let slope: Slope = slope.parse()?;
            if !slope.is_positive() {
                return Err(Failure::Usage("diagnose needs a positive slope".into()));
            }
            let result = hf_plus_with(&loaded.complex, slope, &SurgeryOptions::default())?;
            let d = diagnostic_from(&result)?;
            writeln!(out, "{slope} surgery on {}", loaded.input.name)?;
            writeln!(out, "{:>4} {:>8} {:>12}", "i", "rank", "(d_K-d_O)/2")?;
            for (i, r, half) in &d.per_index {
                writeln!(out, "{i:>4} {r:>8} {:>12}", half.to_string())?;
            }
            writeln!(out, "total reduced rank = {}", d.total_reduced_rank)?;
            writeln!(out, "d deficit = {}", d.d_deficit)?;
            let q = rat(slope.q);
            let note = if d.score == q {
                " (= q)".to_string()
            } else if d.score >= q * rat(2) {
                " (>= 2q)".to_string()
            } else if !d.is_integral() {
                " (not an integer)".to_string()
            } else {
                String::new()
            };
            writeln!(out, "score = {}{note}", d.score)?;
            Ok(0)
        }
        Command::Classify { knot, slope } => {
            let loaded = load(&knot)?;
            let slope: Slope = slope.parse()?;
            if !slope.is_positive() {
                return Err(Failure::Usage("classify needs a positive slope".into()));
            }
            let verdict = classify_surgery(&loaded.complex, slope.p, slope.q)?;
            writeln!(out, "{verdict}")?;
            Ok(0)
        }
        Command::Compare { a, b, slope } => {
            let (ka, kb) = (load(&a)?, load(&b)?);
            let slope: Slope = slope.parse()?;
            let ra = hf_plus_with(&ka.complex, slope, &SurgeryOptions::default())?;
            let rb = hf_plus_with(&kb.complex, slope, &SurgeryOptions::default())?;
            match compare(&ra, &rb)? {
                Comparison::GradedIsomorphic => writeln!(out, "graded isomorphic")?,
                Comparison::Compatible => writeln!(out, "compatible (orientations differ; d and ranks agree)")?,
                Comparison::Distinct(w) => writeln!(out, "distinct: {} ({w})", w.name())?,
            }
            Ok(0)
        }
        Command::Validate { file } => {
            let text = std::fs::read_to_string(&file).map_err(|e| Failure::Usage(format!("{file}: {e}")))?;
            let k = match parse_text(&text) {
                Ok(k) => k,
                Err(Error::InvalidComplex(msgs)) => {
                    for m in msgs {
                        writeln!(out, "{m}")?;
                    }
                    return Ok(1);
                }
                Err(e) => return Err(e.into()),
            };
            let report = validate(&k);
            if report.is_empty() {
                writeln!(out, "valid: {} generators, genus {}", k.len(), genus(&k))?;
                Ok(0)
            } else {
                for m in report.messages() {
                    writeln!(out, "{m}")?;
                }
                Ok(1)
            }
        }
    }
}

fn print_result(out: &mut dyn Write, name: &str, r: &HFResult) -> std::io::Result<()> {
    writeln!(
        out,
        "HF+ of {} surgery on {name} (sigma = {}, depth = {}, orientation {})",
        r.slope,
        r.sigma,
        r.depth,
        r.orientation.label()
    )?;
    writeln!(out, "{:>4} {:>10} {:>6} {:>6}  HF_red", "i", "d", "even", "odd")?;
    for s in &r.spin_c {
        writeln!(
            out,
            "{:>4} {:>10} {:>6} {:>6}  {}",
            s.index,
            s.d.to_string(),
            s.parity.0,
            s.parity.1,
            group_text(&s.hf_red)
        )?;
    }
    writeln!(out, "total reduced rank {}", r.total_reduced_rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("knot-surgery").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn zero_slope_is_a_usage_error() {
        let (code, _, err) = call(&["surgery", "unknot", "0/1"]);
        assert_eq!(code, 2);
        assert!(err.contains("slope must be nonzero"), "{err}");
    }

    #[test]
    fn diagnose_ends_with_score() {
        let (code, out, _) = call(&["diagnose", "trefoil_left", "3/2"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().last().unwrap(), "score = 2 (= q)");
    }

    #[test]
    fn unknown_knot_and_bad_command() {
        assert_eq!(call(&["show", "/nonexistent/granny"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn negative_slope_is_labelled() {
        let (code, out, _) = call(&["surgery", "trefoil_right", "-1/1", "--json"]);
        assert_eq!(code, 0);
        let doc = OutputDocument::from_json(&out).unwrap();
        assert_eq!(doc.orientation, "reversed");
        assert!(doc.diagnostic.is_none());
    }
}
