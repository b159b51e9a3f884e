//! `fglab`: build and verify formal group laws over local fields, compute
//! Koszul homology, enumerate truncated-law groupoids, and run the
//! self-test battery. JSON in, JSON out; every run is a function of its
//! inputs and the seed.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 mathematical
//! verification failure (axiom failure, obstruction, integrality
//! violation and friends).

pub mod battery;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use fglab_core::error::Error as CoreError;
use fglab_core::fgl::{
    araki_from_ptypical, build_law, classifying_value, endo, find_isomorphism, height_mod_pi,
    is_homomorphism, law_doc, law_from_log, log_from_law, lubin_tate_from_frobenius,
    lubin_tate_log, ptypical_from_araki, series_doc, IsoOutcome, LawDoc,
};
use fglab_core::koszul::{homology_all, homology_report, ComplexSpec};
use fglab_core::local::{FieldDesc, LocalField, LocalNum};
use fglab_core::moduli::{groupoid_report, FiniteRingSpec};

#[derive(Debug)]
pub enum CliError {
    /// Unusable input: bad flags, unreadable files, malformed JSON.
    Input(String),
    /// The kernels rejected the data; the variant decides the exit code.
    Core(CoreError),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

/// Maps a kernel error to the exit-code convention: mathematical
/// verification failures are 2, everything else is a usage/input error.
pub fn core_exit_code(e: &CoreError) -> i32 {
    use CoreError::*;
    match e {
        IntegralityViolation { .. }
        | NotIntegral(_)
        | Obstruction { .. }
        | NotPTypical(_)
        | HeightNotPPower(_)
        | NonUniqueSolution(_)
        | NotAssociative(..)
        | NotCommutative(..)
        | UnitMissing
        | DSquaredNonzero(_)
        | RegularityCriteriaDisagree { .. } => 2,
        _ => 1,
    }
}

fn exit_code(e: &CliError) -> i32 {
    match e {
        CliError::Input(_) => 1,
        CliError::Core(c) => core_exit_code(c),
    }
}

#[derive(Parser)]
#[command(name = "fglab", version, about = "formal group law laboratory")]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    /// Integrate the Lubin-Tate logarithm and exponentiate.
    Log,
    /// Solve the Frobenius-equivariance equations degree by degree.
    Frobenius,
    /// p-typical law from an Araki parameter list.
    Araki,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a field descriptor and report its derived structure.
    Field {
        /// Field descriptor: path to a JSON file, or inline JSON.
        #[arg(long)]
        field: String,
        /// Override the pi-adic precision of the descriptor.
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Construct a formal group law over a local field.
    FglBuild {
        /// Field descriptor: path or inline JSON.
        #[arg(long)]
        field: String,
        #[arg(long, value_enum)]
        method: Method,
        /// Truncation degree of the law.
        #[arg(long, default_value_t = 10)]
        deg: usize,
        /// Override the pi-adic precision of the descriptor.
        #[arg(long)]
        prec: Option<i64>,
        /// Araki parameters v_1,v_2,... as integers (method araki only).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        vlist: Vec<i64>,
    },
    /// Check the unit, commutativity and associativity axioms of a law.
    FglVerify {
        /// Law document: path or inline JSON.
        #[arg(long)]
        law: String,
    },
    /// Compute the endomorphism [a] of a law and confirm it is one.
    Endo {
        #[arg(long)]
        law: String,
        /// The scalar a, a decimal integer.
        #[arg(long, allow_hyphen_values = true)]
        scalar: String,
    },
    /// Reduce a law mod pi and report the height of its [p]-series.
    Height {
        #[arg(long)]
        law: String,
    },
    /// Recover the Araki parameter list of a p-typical law.
    Araki {
        #[arg(long)]
        law: String,
    },
    /// The classifying value (m+1) * (coefficient of T^{m+1} in the log).
    Classify {
        #[arg(long)]
        law: String,
        #[arg(long)]
        m: usize,
    },
    /// Search for a strict isomorphism between two laws.
    Iso {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Build a Koszul complex from a spec and report its homology.
    Koszul {
        /// Complex spec: path or inline JSON.
        #[arg(long)]
        complex: String,
    },
    /// Enumerate the degree-d law groupoid over a finite ring.
    Moduli {
        /// Finite ring spec: path or inline JSON.
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 2)]
        deg: usize,
    },
    /// Run the acceptance battery and emit a machine-readable report.
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Only run criteria whose id, name or tags match this string.
        #[arg(long)]
        filter: Option<String>,
    },
}

enum Outcome {
    Done(Value),
    /// A verification verdict: the report is emitted either way, the flag
    /// decides between exit 0 and exit 2.
    Verdict { doc: Value, pass: bool },
}

/// Loads a JSON argument: anything that starts with '{' or '[' is inline,
/// everything else is a path. Parse errors carry the position.
fn load_json<T: DeserializeOwned>(arg: &str) -> Result<T, CliError> {
    let (text, origin) = if arg.trim_start().starts_with(['{', '[']) {
        (arg.to_string(), "inline JSON".to_string())
    } else {
        let text = fs::read_to_string(arg)
            .map_err(|e| CliError::Input(format!("cannot read {arg}: {e}")))?;
        (text, arg.to_string())
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{origin}: {e}")))
}

fn to_doc<T: serde::Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Input(format!("serialization failed: {e}")))
}

fn load_field(arg: &str, prec: Option<i64>) -> Result<LocalField, CliError> {
    let mut desc: FieldDesc = load_json(arg)?;
    if let Some(p) = prec {
        desc.precision = p;
    }
    Ok(LocalField::from_descriptor(&desc)?)
}

fn parse_scalar(field: &LocalField, s: &str) -> Result<LocalNum, CliError> {
    let n: BigInt = s
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("bad integer literal {s:?}")))?;
    Ok(field.from_int(&n))
}

fn dispatch(cmd: Cmd) -> Result<Outcome, CliError> {
    match cmd {
        Cmd::Field { field, prec } => {
            let fld = load_field(&field, prec)?;
            let q = BigInt::from(fld.p()).pow(fld.f() as u32);
            Ok(Outcome::Done(json!({
                "name": fld.name(),
                "p": fld.p(),
                "f": fld.f(),
                "e": fld.e(),
                "degree": fld.e() * fld.f(),
                "residue-order": q.to_string(),
                "precision": fld.precision(),
                "descriptor": to_doc(&fld.descriptor())?,
            })))
        }
        Cmd::FglBuild {
            field,
            method,
            deg,
            prec,
            vlist,
        } => {
            let fld = load_field(&field, prec)?;
            if !matches!(method, Method::Araki) && !vlist.is_empty() {
                return Err(CliError::Input(
                    "--vlist only applies to --method araki".into(),
                ));
            }
            let law = match method {
                Method::Log => {
                    let lg = lubin_tate_log(&fld, deg)?;
                    let law = law_from_log(&lg, deg)?;
                    fglab_core::fgl::check_integral(law.series())?;
                    law
                }
                Method::Frobenius => lubin_tate_from_frobenius(&fld, deg)?.0,
                Method::Araki => {
                    if vlist.is_empty() {
                        return Err(CliError::Input(
                            "--method araki needs --vlist v1,v2,...".into(),
                        ));
                    }
                    let vs: Vec<LocalNum> = vlist
                        .iter()
                        .map(|&v| fld.from_int(&BigInt::from(v)))
                        .collect();
                    ptypical_from_araki(&fld, &vs, deg)?
                }
            };
            Ok(Outcome::Done(to_doc(&law_doc(&law))?))
        }
        Cmd::FglVerify { law } => {
            let law = build_law(&load_json::<LawDoc>(&law)?)?;
            let report = law.verify_axioms()?;
            let pass = report.all_pass();
            let doc = json!({
                "provenance": to_doc(&law.provenance())?,
                "cap": law.cap(),
                "report": to_doc(&report)?,
                "all-pass": pass,
            });
            Ok(Outcome::Verdict { doc, pass })
        }
        Cmd::Endo { law, scalar } => {
            let law = build_law(&load_json::<LawDoc>(&law)?)?;
            let lg = log_from_law(&law)?;
            let a = parse_scalar(law.ring(), &scalar)?;
            let e = endo(&lg, &a)?;
            let hom = is_homomorphism(&e, &law, &law)?;
            let doc = json!({
                "scalar": scalar.trim(),
                "endo": to_doc(&series_doc(&e))?,
                "is-homomorphism": hom,
            });
            Ok(Outcome::Verdict { doc, pass: hom })
        }
        Cmd::Height { law } => {
            let law = build_law(&load_json::<LawDoc>(&law)?)?;
            let verdict = height_mod_pi(&law)?;
            Ok(Outcome::Done(json!({
                "p": law.ring().p(),
                "verdict": to_doc(&verdict)?,
                "display": verdict.to_string(),
            })))
        }
        Cmd::Araki { law } => {
            let law = build_law(&load_json::<LawDoc>(&law)?)?;
            let lg = log_from_law(&law)?;
            let vs = araki_from_ptypical(&law, &lg)?;
            let field = law.ring();
            Ok(Outcome::Done(json!({
                "vlist": vs.iter().map(|v| to_doc(&field.to_repr(v))).collect::<Result<Vec<_>, _>>()?,
                "display": vs.iter().map(|v| field.fmt_num(v)).collect::<Vec<_>>(),
            })))
        }
        Cmd::Classify { law, m } => {
            let law = build_law(&load_json::<LawDoc>(&law)?)?;
            let lg = log_from_law(&law)?;
            let v = classifying_value(&lg, m)?;
            let field = law.ring();
            Ok(Outcome::Done(json!({
                "m": m,
                "value": to_doc(&field.to_repr(&v))?,
                "display": field.fmt_num(&v),
            })))
        }
        Cmd::Iso { from, to } => {
            let a = build_law(&load_json::<LawDoc>(&from)?)?;
            let b = build_law(&load_json::<LawDoc>(&to)?)?;
            match find_isomorphism(&a, &b)? {
                IsoOutcome::Found { t } => Ok(Outcome::Done(json!({
                    "found": true,
                    "t": to_doc(&series_doc(&t))?,
                }))),
                IsoOutcome::Obstructed { degree, residual } => Ok(Outcome::Verdict {
                    doc: json!({
                        "found": false,
                        "degree": degree,
                        "residual": residual,
                    }),
                    pass: false,
                }),
            }
        }
        Cmd::Koszul { complex } => {
            let spec: ComplexSpec = load_json(&complex)?;
            let ksz = spec.build()?;
            let groups = homology_all(&ksz)?;
            Ok(Outcome::Done(to_doc(&homology_report(&ksz, &groups))?))
        }
        Cmd::Moduli { ring, deg } => {
            let spec: FiniteRingSpec = load_json(&ring)?;
            let ring = spec.build()?;
            let report = groupoid_report(&ring, deg)?;
            let pass = report.all_passed;
            Ok(Outcome::Verdict {
                doc: to_doc(&report)?,
                pass,
            })
        }
        Cmd::Selftest { seed, filter } => {
            if let Some(f) = filter.as_deref() {
                if !battery::filter_matches_any(f) {
                    return Err(CliError::Input(format!(
                        "--filter {f:?} matches no criterion; known tags come from ids, names and tag lists"
                    )));
                }
            }
            let report = battery::run_battery(seed, filter.as_deref());
            let pass = report.all_passed;
            Ok(Outcome::Verdict {
                doc: to_doc(&report)?,
                pass,
            })
        }
    }
}

fn emit(doc: &Value, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(doc)
        .map_err(|e| CliError::Input(format!("serialization failed: {e}")))?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Full CLI entry point; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.cmd) {
        Ok(outcome) => {
            let (doc, code) = match outcome {
                Outcome::Done(doc) => (doc, 0),
                Outcome::Verdict { doc, pass } => (doc, if pass { 0 } else { 2 }),
            };
            match emit(&doc, cli.out.as_deref()) {
                Ok(()) => code,
                Err(e) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
