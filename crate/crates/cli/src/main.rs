//! Command-line front end: every pipeline stage behind a subcommand, with
//! file-based matrix I/O and machine-readable output.
//!
//! Outputs are JSON documents (TSV for the `pk` table on request) with the
//! tool version isolated in a header field; payload bytes are stable
//! across runs for fixed inputs. Exit codes: 0 for a positive result,
//! 1 for a witnessed negative result, 2 for parse or precondition
//! failures, 3 for resource-cap refusals.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use liekolchin::comb::{
    bidiagonal_factorization, is_totally_nonnegative, minor_positivity, pascal_l, pk_direct,
    pk_via_trace, ChainCertificate, PkInstance,
};
use liekolchin::exact::Rat;
use liekolchin::index::{index_of, IndexValue};
use liekolchin::matrix::{MatQ, MinorSpec};
use liekolchin::pipeline::{
    commutator_qu_check, counterexample_search, verify_main_theorem, CounterexampleWitness,
    Verdict,
};
use liekolchin::tracepoly::{expand_trace_poly, trace_poly_interpolated, TracePoly};
use liekolchin::unipotent::{is_quasi_unipotent, single_jordan_block_eigenvalue, QuReport};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "liekolchin",
    version,
    about = "Exact-arithmetic checks for quasi-unipotent matrix pairs: quasi-unipotence, \
             matrix index calculus, trace polynomials, Pascal-matrix total nonnegativity, \
             and certified simultaneous triangularization"
)]
struct Cli {
    /// Write the output document to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TraceMethod {
    Expand,
    Interpolate,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a matrix is quasi-unipotent
    CheckQu {
        /// Matrix JSON file: {"dim": d, "entries": [["1","-7/2",...],...]}
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Compute the index of a matrix ("bottom" for the zero matrix)
    Index {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Expand tr((A B^n)^k) as an exact polynomial in n
    TracePoly {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        /// Evaluation route; `both` cross-checks them
        #[arg(long, value_enum, default_value_t = TraceMethod::Both)]
        method: TraceMethod,
    },
    /// Decide the trace-constancy hypothesis and certify or witness
    Verify {
        #[arg(long, alias = "A")]
        a: PathBuf,
        #[arg(long, alias = "B")]
        b: PathBuf,
    },
    /// Like verify, but exits 1 unless a certificate is produced
    Triangularize {
        #[arg(long, alias = "A")]
        a: PathBuf,
        #[arg(long, alias = "B")]
        b: PathBuf,
    },
    /// Search for (k, n) with tr((A B^n)^k) != tr(A^k)
    Counterexample {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, env = "LIEKOLCHIN_KMAX", default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        kmax: u32,
        #[arg(long, env = "LIEKOLCHIN_NMAX", default_value_t = 8)]
        nmax: u64,
    },
    /// Tabulate the cyclic polynomials p_k for an (r, m, x) instance
    Pk {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        m: usize,
        /// Comma-separated rationals, e.g. 1,-1/2,3 (m+1 of them)
        #[arg(long, value_delimiter = ',')]
        x: Vec<String>,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
        kmax: u32,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Exhaustively scan all square minors for total nonnegativity
    Tnn {
        #[arg(long)]
        matrix: PathBuf,
        /// Dimension cap for the exponential scan
        #[arg(long, env = "LIEKOLCHIN_TNN_CAP")]
        cap: Option<usize>,
    },
    /// Emit the lower triangular Pascal matrix, optionally factored
    Pascal {
        #[arg(long)]
        n: usize,
        /// Also emit the elementary bidiagonal factors and verify their product
        #[arg(long)]
        factor: bool,
    },
    /// Positivity of a binomial minor of the Pascal matrix, with chain
    MinorPositivity {
        /// Comma-separated strictly increasing positive integers
        #[arg(long, value_delimiter = ',')]
        qs: Vec<usize>,
        #[arg(long)]
        r: usize,
    },
    /// Check the commutator criterion for quasi-unipotence
    CommutatorCheck {
        #[arg(long)]
        g: PathBuf,
        /// Comma-separated matrix files
        #[arg(long, value_delimiter = ',')]
        xs: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        ys: Vec<PathBuf>,
    },
    /// Re-validate a verify/triangularize output document from scratch
    CheckCert {
        #[arg(long)]
        cert: PathBuf,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error("cannot parse rational {input:?}")]
    BadRational { input: String },
    #[error(transparent)]
    Lib(#[from] liekolchin::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(liekolchin::Error::ResourceCap { .. }) => 3,
            _ => 2,
        }
    }
}

#[derive(Serialize)]
struct Document<T: Serialize> {
    version: &'static str,
    command: &'static str,
    #[serde(flatten)]
    payload: T,
}

#[derive(Serialize)]
struct QuPayload {
    report: QuReport,
}

#[derive(Serialize)]
struct IndexPayload {
    index: IndexValue,
}

#[derive(Serialize)]
struct TracePolyPayload {
    k: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    expanded: Option<TracePoly>,
    #[serde(skip_serializing_if = "Option::is_none")]
    interpolated: Option<TracePoly>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agree: Option<bool>,
}

#[derive(Serialize)]
struct PairPayload {
    a: MatQ,
    b: MatQ,
    verdict: Verdict,
}

/// Input shape of `check-cert`: the output of `verify`/`triangularize`.
#[derive(Deserialize)]
struct PairDocumentIn {
    a: MatQ,
    b: MatQ,
    verdict: Verdict,
}

#[derive(Serialize)]
struct CounterexamplePayload {
    kmax: u32,
    nmax: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<CounterexampleWitness>,
}

#[derive(Serialize)]
struct PkRow {
    k: u32,
    pk: Rat,
}

#[derive(Serialize)]
struct PkPayload {
    r: usize,
    m: usize,
    x: Vec<Rat>,
    rows: Vec<PkRow>,
}

#[derive(Serialize)]
struct TnnPayload {
    dim: usize,
    totally_nonnegative: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    offending: Option<MinorSpec>,
}

#[derive(Serialize)]
struct PascalPayload {
    n: usize,
    matrix: MatQ,
    #[serde(skip_serializing_if = "Option::is_none")]
    factors: Option<Vec<MatQ>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    product_matches: Option<bool>,
}

#[derive(Serialize)]
struct MinorPositivityPayload {
    qs: Vec<usize>,
    r: usize,
    det: Rat,
    cert: ChainCertificate,
}

#[derive(Serialize)]
struct CommutatorPayload {
    quasi_unipotent: bool,
}

#[derive(Serialize)]
struct CheckCertPayload {
    valid: bool,
    detail: String,
}

fn read_matrix(path: &Path) -> Result<MatQ, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

fn emit_text(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, text).map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        }),
    }
}

fn emit<T: Serialize>(
    out: &Option<PathBuf>,
    command: &'static str,
    payload: T,
) -> Result<(), CliError> {
    let doc = Document {
        version: VERSION,
        command,
        payload,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("document serialization");
    text.push('\n');
    emit_text(out, &text)
}

fn parse_rat(s: &str) -> Result<Rat, CliError> {
    Rat::from_str(s.trim()).map_err(|_| CliError::BadRational {
        input: s.to_owned(),
    })
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let out = &cli.out;
    match cli.command {
        Command::CheckQu { matrix } => {
            let m = read_matrix(&matrix)?;
            let report = is_quasi_unipotent(&m);
            let code = if report.is_quasi_unipotent { 0 } else { 1 };
            emit(out, "check-qu", QuPayload { report })?;
            Ok(code)
        }
        Command::Index { matrix } => {
            let m = read_matrix(&matrix)?;
            emit(
                out,
                "index",
                IndexPayload {
                    index: index_of(&m),
                },
            )?;
            Ok(0)
        }
        Command::TracePoly { a, b, k, method } => {
            let a = read_matrix(&a)?;
            let b = read_matrix(&b)?;
            let expanded = match method {
                TraceMethod::Interpolate => None,
                _ => Some(expand_trace_poly(&a, &b, k)?),
            };
            let interpolated = match method {
                TraceMethod::Expand => None,
                _ => Some(trace_poly_interpolated(&a, &b, k)?),
            };
            let agree = match (&expanded, &interpolated) {
                (Some(e), Some(i)) => Some(e == i),
                _ => None,
            };
            if agree == Some(false) {
                return Err(liekolchin::Error::TheoremFalsified {
                    context: "expansion and interpolation disagree".into(),
                }
                .into());
            }
            emit(
                out,
                "trace-poly",
                TracePolyPayload {
                    k,
                    expanded,
                    interpolated,
                    agree,
                },
            )?;
            Ok(0)
        }
        Command::Verify { a, b } => {
            let a = read_matrix(&a)?;
            let b = read_matrix(&b)?;
            let verdict = verify_main_theorem(&a, &b)?;
            let code = verdict.exit_code() as u8;
            emit(out, "verify", PairPayload { a, b, verdict })?;
            Ok(code)
        }
        Command::Triangularize { a, b } => {
            let a = read_matrix(&a)?;
            let b = read_matrix(&b)?;
            let verdict = verify_main_theorem(&a, &b)?;
            let code = verdict.exit_code() as u8;
            emit(out, "triangularize", PairPayload { a, b, verdict })?;
            Ok(code)
        }
        Command::Counterexample { a, b, kmax, nmax } => {
            let a = read_matrix(&a)?;
            let b = read_matrix(&b)?;
            let witness = counterexample_search(&a, &b, kmax, nmax)?;
            let code = u8::from(witness.is_some());
            emit(
                out,
                "counterexample",
                CounterexamplePayload { kmax, nmax, witness },
            )?;
            Ok(code)
        }
        Command::Pk {
            r,
            m,
            x,
            kmax,
            format,
        } => {
            let entries = x
                .iter()
                .map(|s| parse_rat(s))
                .collect::<Result<Vec<_>, _>>()?;
            let inst = PkInstance::new(r, m, entries)?;
            let mut rows = Vec::with_capacity(kmax as usize);
            for k in 1..=kmax {
                let direct = pk_direct(&inst, k)?;
                let via_trace = pk_via_trace(&inst, k)?;
                if direct != via_trace {
                    return Err(liekolchin::Error::TheoremFalsified {
                        context: format!("p_{k} direct and trace routes disagree"),
                    }
                    .into());
                }
                rows.push(PkRow { k, pk: direct });
            }
            match format {
                OutputFormat::Json => {
                    emit(
                        out,
                        "pk",
                        PkPayload {
                            r,
                            m,
                            x: inst.x.clone(),
                            rows,
                        },
                    )?;
                }
                OutputFormat::Tsv => {
                    let mut text = String::from("k\tp_k\n");
                    for row in &rows {
                        text.push_str(&format!("{}\t{}\n", row.k, row.pk));
                    }
                    emit_text(out, &text)?;
                }
            }
            Ok(0)
        }
        Command::Tnn { matrix, cap } => {
            let m = read_matrix(&matrix)?;
            let (ok, offending) = is_totally_nonnegative(&m, cap)?;
            let code = u8::from(!ok);
            emit(
                out,
                "tnn",
                TnnPayload {
                    dim: m.dim(),
                    totally_nonnegative: ok,
                    offending,
                },
            )?;
            Ok(code)
        }
        Command::Pascal { n, factor } => {
            let matrix = pascal_l(n);
            let (factors, product_matches) = if factor {
                let factors = bidiagonal_factorization(n);
                let product = factors
                    .iter()
                    .fold(MatQ::identity(n), |acc, f| acc.mat_mul(f).unwrap());
                (Some(factors), Some(product == matrix))
            } else {
                (None, None)
            };
            if product_matches == Some(false) {
                return Err(liekolchin::Error::TheoremFalsified {
                    context: "bidiagonal factor product does not equal the Pascal matrix".into(),
                }
                .into());
            }
            emit(
                out,
                "pascal",
                PascalPayload {
                    n,
                    matrix,
                    factors,
                    product_matches,
                },
            )?;
            Ok(0)
        }
        Command::MinorPositivity { qs, r } => {
            let (det, cert) = minor_positivity(&qs, r)?;
            emit(out, "minor-positivity", MinorPositivityPayload { qs, r, det, cert })?;
            Ok(0)
        }
        Command::CommutatorCheck { g, xs, ys } => {
            let g = read_matrix(&g)?;
            let xs = xs.iter().map(|p| read_matrix(p)).collect::<Result<Vec<_>, _>>()?;
            let ys = ys.iter().map(|p| read_matrix(p)).collect::<Result<Vec<_>, _>>()?;
            let quasi_unipotent = commutator_qu_check(&g, &xs, &ys)?;
            emit(out, "commutator-check", CommutatorPayload { quasi_unipotent })?;
            Ok(u8::from(!quasi_unipotent))
        }
        Command::CheckCert { cert } => {
            let text = fs::read_to_string(&cert).map_err(|source| CliError::Read {
                path: cert.display().to_string(),
                source,
            })?;
            let doc: PairDocumentIn =
                serde_json::from_str(&text).map_err(|source| CliError::Parse {
                    path: cert.display().to_string(),
                    source,
                })?;
            let (valid, detail, code) = match &doc.verdict {
                Verdict::HypothesesHoldCertified { cert, .. } => {
                    match cert.validate(&doc.a, &doc.b) {
                        Ok(()) => (true, "certificate re-validated".to_string(), 0),
                        Err(e) => (false, e.to_string(), 1),
                    }
                }
                Verdict::HypothesesFailWitnessed { report } => {
                    match revalidate_witness(&doc.a, &doc.b, report) {
                        Ok(()) => (true, "witness traces reproduce".to_string(), 0),
                        Err(e) => (false, e.to_string(), 1),
                    }
                }
                Verdict::PreconditionFailure { .. } => {
                    return Err(liekolchin::Error::CertificateInvalid {
                        detail: "document carries no certificate or witness".into(),
                    }
                    .into());
                }
            };
            emit(out, "check-cert", CheckCertPayload { valid, detail })?;
            Ok(code)
        }
    }
}

/// Recomputes both witness traces from the raw pair. The witness refers to
/// the unipotent power of `b`, as documented by the verifier.
fn revalidate_witness(
    a: &MatQ,
    b: &MatQ,
    report: &liekolchin::tracepoly::HypothesisReport,
) -> Result<(), liekolchin::Error> {
    let witness = report
        .witness
        .as_ref()
        .ok_or(liekolchin::Error::CertificateInvalid {
            detail: "witnessed verdict without witness".into(),
        })?;
    let eigenvalue = single_jordan_block_eigenvalue(b).ok_or(
        liekolchin::Error::NotSingleJordanBlock { role: "B" },
    )?;
    let b_unipotent = if eigenvalue == Rat::one() {
        b.clone()
    } else {
        b.mat_mul(b)?
    };
    let trace_at = |n: u64| -> Result<Rat, liekolchin::Error> {
        Ok(a
            .mat_mul(&b_unipotent.mat_pow(n))?
            .mat_pow(witness.k as u64)
            .trace())
    };
    if trace_at(witness.n1)? != witness.t1 || trace_at(witness.n2)? != witness.t2 {
        return Err(liekolchin::Error::CertificateInvalid {
            detail: "witness traces do not reproduce".into(),
        });
    }
    if witness.t1 == witness.t2 {
        return Err(liekolchin::Error::CertificateInvalid {
            detail: "witness traces are equal".into(),
        });
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
