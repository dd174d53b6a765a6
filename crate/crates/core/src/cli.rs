//! Command-line front end. Data goes to `out`, diagnostics to `err`.
//!
//! Exit codes: 0 pass, 1 property failure, 2 usage or invalid spec,
//! 3 domain error (for example a non-integral spec passed to `series`).

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::chern::{self, BuiltinThreefold, ChernNumbers, SurfaceChern, ThreefoldSpec};
use crate::cobordism;
use crate::dt_engine::{self, DtError};
use crate::exec::Execution;
use crate::suites::{self, Suite, SuiteOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

/// JSON form of a threefold spec. Externally tagged: exactly one key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ThreefoldSpecDocument {
    Builtin(BuiltinName),
    Chern(ChernDocument),
    Hypersurface(HypersurfaceDocument),
    DisjointUnion(Vec<ThreefoldSpecDocument>),
    Product(ProductDocument),
    Scaled(ScaledDocument),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BuiltinName {
    P3,
    P2xP1,
    P1xP1xP1,
    #[serde(rename = "quintic")]
    Quintic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChernDocument {
    pub c111: i64,
    pub c12: i64,
    pub c3: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypersurfaceDocument {
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDocument {
    pub c11: i64,
    pub c2: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDocument {
    pub surface: SurfaceDocument,
    pub curve_genus: u32,
}

/// `factor` is a rational written `"p/q"` or `"p"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaledDocument {
    pub factor: String,
    pub spec: Box<ThreefoldSpecDocument>,
}

impl From<BuiltinName> for BuiltinThreefold {
    fn from(b: BuiltinName) -> Self {
        match b {
            BuiltinName::P3 => Self::P3,
            BuiltinName::P2xP1 => Self::P2xP1,
            BuiltinName::P1xP1xP1 => Self::P1xP1xP1,
            BuiltinName::Quintic => Self::Quintic,
        }
    }
}

impl From<BuiltinThreefold> for BuiltinName {
    fn from(b: BuiltinThreefold) -> Self {
        match b {
            BuiltinThreefold::P3 => Self::P3,
            BuiltinThreefold::P2xP1 => Self::P2xP1,
            BuiltinThreefold::P1xP1xP1 => Self::P1xP1xP1,
            BuiltinThreefold::Quintic => Self::Quintic,
        }
    }
}

impl ThreefoldSpecDocument {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid threefold spec: {e}"))
    }

    pub fn to_spec(&self) -> Result<ThreefoldSpec, String> {
        Ok(match self {
            Self::Builtin(b) => ThreefoldSpec::Builtin((*b).into()),
            Self::Chern(c) => ThreefoldSpec::Explicit(ChernNumbers::new(c.c111, c.c12, c.c3)),
            Self::Hypersurface(h) => {
                if h.degree < 1 {
                    return Err(format!(
                        "invalid threefold spec: hypersurface degree {} < 1",
                        h.degree
                    ));
                }
                ThreefoldSpec::Hypersurface { degree: h.degree }
            }
            Self::DisjointUnion(parts) => ThreefoldSpec::DisjointUnion(
                parts.iter().map(Self::to_spec).collect::<Result<_, _>>()?,
            ),
            Self::Product(p) => ThreefoldSpec::Product {
                surface: SurfaceChern {
                    c11: p.surface.c11,
                    c2: p.surface.c2,
                },
                curve_genus: p.curve_genus,
            },
            Self::Scaled(s) => {
                let factor: BigRational = s.factor.trim().parse().map_err(|_| {
                    format!(
                        "invalid threefold spec: factor {:?} is not a rational",
                        s.factor
                    )
                })?;
                ThreefoldSpec::Scaled {
                    factor,
                    spec: Box::new(s.spec.to_spec()?),
                }
            }
        })
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "dtzero",
    version,
    about = "Degree-zero DT series of threefolds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exponent, cobordism decomposition and coefficients of DT_{X,0}(q).
    Series {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = dt_engine::DEFAULT_ORDER)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Run an invariant suite.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        max_n: Option<usize>,
        /// Run sweeps on one thread.
        #[arg(long)]
        sequential: bool,
        #[arg(long, default_value_t = SuiteOptions::default().seed)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Rational decomposition over P3, P2xP1, P1xP1xP1.
    Cobordism {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Discrepancy degrees t_k and universal constants lambda_k = t_k / K.
    Discrepancy {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = true)]
pub struct SpecArgs {
    /// JSON spec file (`-` reads stdin).
    #[arg(long, conflicts_with_all = ["spec_json", "builtin", "c111", "hypersurface_degree"])]
    pub spec: Option<PathBuf>,
    /// Inline JSON spec.
    #[arg(long, conflicts_with_all = ["builtin", "c111", "hypersurface_degree"])]
    pub spec_json: Option<String>,
    #[arg(long, value_parser = parse_builtin, conflicts_with_all = ["c111", "hypersurface_degree"])]
    pub builtin: Option<BuiltinName>,
    #[arg(long, requires_all = ["c12", "c3"], allow_negative_numbers = true, conflicts_with = "hypersurface_degree")]
    pub c111: Option<i64>,
    #[arg(long, requires_all = ["c111", "c3"], allow_negative_numbers = true)]
    pub c12: Option<i64>,
    #[arg(long, requires_all = ["c111", "c12"], allow_negative_numbers = true)]
    pub c3: Option<i64>,
    #[arg(long)]
    pub hypersurface_degree: Option<i64>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

fn parse_builtin(s: &str) -> Result<BuiltinName, String> {
    s.parse::<BuiltinThreefold>()
        .map(Into::into)
        .map_err(|e| e.to_string())
}

impl SpecArgs {
    pub fn document(&self) -> Result<ThreefoldSpecDocument, String> {
        if let Some(path) = &self.spec {
            let text = if path.as_os_str() == "-" {
                std::io::read_to_string(std::io::stdin())
                    .map_err(|e| format!("reading stdin: {e}"))?
            } else {
                std::fs::read_to_string(path)
                    .map_err(|e| format!("reading {}: {e}", path.display()))?
            };
            return ThreefoldSpecDocument::parse(&text);
        }
        if let Some(text) = &self.spec_json {
            return ThreefoldSpecDocument::parse(text);
        }
        if let Some(b) = self.builtin {
            return Ok(ThreefoldSpecDocument::Builtin(b));
        }
        if let (Some(c111), Some(c12), Some(c3)) = (self.c111, self.c12, self.c3) {
            return Ok(ThreefoldSpecDocument::Chern(ChernDocument {
                c111,
                c12,
                c3,
            }));
        }
        if let Some(degree) = self.hypersurface_degree {
            return Ok(ThreefoldSpecDocument::Hypersurface(HypersurfaceDocument {
                degree,
            }));
        }
        Err("no threefold given".into())
    }
}

/// A failure carrying its exit code and message.
struct Exit(i32, String);

fn usage(msg: impl Into<String>) -> Exit {
    Exit(EXIT_USAGE, msg.into())
}

fn domain(e: impl std::fmt::Display) -> Exit {
    Exit(EXIT_DOMAIN, e.to_string())
}

fn dt_exit(e: DtError) -> Exit {
    match e {
        DtError::Chern(chern::ChernError::InvalidDegree(_)) => usage(e.to_string()),
        other => domain(other),
    }
}

fn load(spec: &SpecArgs) -> Result<(ThreefoldSpecDocument, ThreefoldSpec, ChernNumbers), Exit> {
    let doc = spec.document().map_err(usage)?;
    let resolved = doc.to_spec().map_err(usage)?;
    let chern = resolved.resolve().map_err(|e| usage(e.to_string()))?;
    Ok((doc, resolved, chern))
}

fn chern_json(c: &ChernNumbers) -> serde_json::Value {
    let [a, b, d] = c.as_array();
    json!({ "c111": a.to_string(), "c12": b.to_string(), "c3": d.to_string() })
}

fn decomposition_json(d: &cobordism::CobordismDecomposition) -> serde_json::Value {
    json!({
        "coefficients": d.coefficients.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "m": d.denominator.to_string(),
        "multiples": d.integer_multiples().iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

fn write_json(out: &mut dyn Write, value: &serde_json::Value) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

fn cmd_series(
    spec: &SpecArgs,
    order: usize,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Exit> {
    let (doc, resolved, chern) = load(spec)?;
    if let Some(w) = chern.todd_warning() {
        let _ = writeln!(err, "warning: {w}");
    }
    let dt = dt_engine::dt_series(&resolved, order).map_err(dt_exit)?;
    let decomposition = cobordism::decompose(&chern);
    let coeffs = dt.integer_coeffs();
    let io = match format {
        Format::Tsv => (|| {
            let [a, b, c] = chern.as_array();
            writeln!(out, "# spec\t{resolved}")?;
            writeln!(out, "# chern\t{a}\t{b}\t{c}")?;
            writeln!(out, "# exponent\t{}", dt.exponent)?;
            let [r1, r2, r3] = &decomposition.coefficients;
            writeln!(
                out,
                "# cobordism\t{r1}\t{r2}\t{r3}\t{}",
                decomposition.denominator
            )?;
            for (k, v) in coeffs.iter().enumerate() {
                writeln!(out, "{k}\t{v}")?;
            }
            Ok(())
        })(),
        Format::Json => write_json(
            out,
            &json!({
                "spec": doc,
                "chern": chern_json(&chern),
                "exponent": dt.exponent.to_string(),
                "cobordism": decomposition_json(&decomposition),
                "order": order,
                "coefficients": coeffs.iter().map(ToString::to_string).collect::<Vec<_>>(),
            }),
        ),
    };
    io.map_err(|e| Exit(EXIT_FAILURE, e.to_string()))
}

fn cmd_cobordism(spec: &SpecArgs, format: Format, out: &mut dyn Write) -> Result<bool, Exit> {
    let (doc, _, chern) = load(spec)?;
    let id = cobordism::verify_exponent_identity(&chern);
    let d = &id.decomposition;
    let io = match format {
        Format::Tsv => (|| {
            let [r1, r2, r3] = &d.coefficients;
            writeln!(out, "r\t{r1}\t{r2}\t{r3}")?;
            writeln!(out, "m\t{}", d.denominator)?;
            writeln!(
                out,
                "identity\t{}\t{}\t{}",
                id.lhs,
                id.rhs,
                if id.holds() { "OK" } else { "FAIL" }
            )
        })(),
        Format::Json => write_json(
            out,
            &json!({
                "spec": doc,
                "chern": chern_json(&chern),
                "cobordism": decomposition_json(d),
                "identity": { "lhs": id.lhs.to_string(), "rhs": id.rhs.to_string(), "holds": id.holds() },
            }),
        ),
    };
    io.map_err(|e| Exit(EXIT_FAILURE, e.to_string()))?;
    Ok(id.holds())
}

fn cmd_discrepancy(
    spec: &SpecArgs,
    max_n: usize,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), Exit> {
    let (doc, resolved, chern) = load(spec)?;
    let t = dt_engine::discrepancy_degrees(&resolved, max_n).map_err(dt_exit)?;
    let exponent = chern::twist_exponent(&chern);
    let lambdas: Vec<Option<BigRational>> = t
        .iter()
        .map(|tk| {
            (exponent != BigRational::from_integer(BigInt::from(0)))
                .then(|| BigRational::from_integer(tk.clone()) / &exponent)
        })
        .collect();
    let show = |l: &Option<BigRational>| {
        l.as_ref()
            .map_or_else(|| "undefined".to_string(), ToString::to_string)
    };
    let io = match format {
        Format::Tsv => (|| {
            writeln!(out, "# spec\t{resolved}")?;
            writeln!(out, "# exponent\t{exponent}")?;
            writeln!(out, "# k\tt_k\tlambda_k")?;
            for (i, (tk, l)) in t.iter().zip(&lambdas).enumerate() {
                writeln!(out, "{}\t{tk}\t{}", i + 1, show(l))?;
            }
            Ok(())
        })(),
        Format::Json => write_json(
            out,
            &json!({
                "spec": doc,
                "exponent": exponent.to_string(),
                "t": t.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "lambda": lambdas.iter().map(show).collect::<Vec<_>>(),
            }),
        ),
    };
    io.map_err(|e| Exit(EXIT_FAILURE, e.to_string()))
}

fn cmd_verify(suite: Suite, opts: &SuiteOptions, out: &mut dyn Write) -> Result<bool, Exit> {
    let results = suites::run_suite(suite, opts);
    let mut ok = true;
    for r in &results {
        writeln!(out, "{r}").map_err(|e| Exit(EXIT_FAILURE, e.to_string()))?;
        ok &= r.passed();
    }
    let summary = if ok { "PASS" } else { "FAIL" };
    let passed = results.iter().filter(|r| r.passed()).count();
    writeln!(out, "{summary} ({passed}/{} checks)", results.len())
        .map_err(|e| Exit(EXIT_FAILURE, e.to_string()))?;
    Ok(ok)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let _ = writeln!(err, "dtzero {}", env!("CARGO_PKG_VERSION"));
    let outcome = match &cli.command {
        Command::Series {
            spec,
            order,
            format,
        } => cmd_series(spec, *order, *format, out, err).map(|()| true),
        Command::Cobordism { spec, format } => cmd_cobordism(spec, *format, out),
        Command::Discrepancy {
            spec,
            max_n,
            format,
        } => cmd_discrepancy(spec, *max_n, *format, out).map(|()| true),
        Command::Verify {
            suite,
            max_n,
            sequential,
            seed,
            inject_fault,
        } => {
            let exec = if *sequential {
                Execution::Sequential
            } else {
                Execution::default()
            };
            let opts = SuiteOptions {
                max_n: *max_n,
                exec,
                seed: *seed,
                inject_fault: *inject_fault,
            };
            cmd_verify(*suite, &opts, out)
        }
    };
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILURE,
        Err(Exit(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("dtzero").chain(args.iter().copied()),
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
    fn documents_parse() {
        let doc = ThreefoldSpecDocument::parse(r#"{"builtin": "quintic"}"#).unwrap();
        assert_eq!(doc, ThreefoldSpecDocument::Builtin(BuiltinName::Quintic));
        let doc = ThreefoldSpecDocument::parse(
            r#"{"disjoint_union": [{"builtin": "P3"}, {"chern": {"c111": 1, "c12": 2, "c3": 3}}]}"#,
        )
        .unwrap();
        assert!(matches!(doc, ThreefoldSpecDocument::DisjointUnion(ref v) if v.len() == 2));
        assert!(ThreefoldSpecDocument::parse(r#"{"builtin": "P4"}"#).is_err());
        assert!(ThreefoldSpecDocument::parse(r#"{"chern": {"c111": 1, "c12": 2}}"#).is_err());
        assert!(ThreefoldSpecDocument::parse(
            r#"{"chern": {"c111": 1, "c12": 2, "c3": 3, "x": 0}}"#
        )
        .is_err());
        assert!(ThreefoldSpecDocument::parse(
            r#"{"builtin": "P3", "hypersurface": {"degree": 5}}"#
        )
        .is_err());
    }

    #[test]
    fn series_tsv() {
        let (code, out, _) = run_capture(&["series", "--builtin", "P3", "--order", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("# exponent\t-20\n"));
        assert!(out.ends_with("0\t1\n1\t20\n2\t150\n"), "{out}");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["series", "--builtin", "P4"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["verify", "--suite", "nope"]).0, EXIT_USAGE);
        assert_eq!(
            run_capture(&[
                "series",
                "--spec-json",
                r#"{"scaled": {"factor": "1/3", "spec": {"builtin": "P3"}}}"#
            ])
            .0,
            EXIT_DOMAIN
        );
        assert_eq!(run_capture(&["series", "--spec-json", "{"]).0, EXIT_USAGE);
    }
}
