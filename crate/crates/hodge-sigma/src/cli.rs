//! Command-line surface: JSON matrix files in, JSON reports and CSV out.
//!
//! File formats. A real matrix is `{"n": k, "entries": [[...], ...]}` with
//! `k` rows of `k` finite numbers each, row-major. An operator file holds any
//! subset of `{"E": matrix, "T": matrix, "S": matrix}`; commands derive what
//! is missing whenever the sum identity `S = E + T` determines it, and `S`
//! alone always suffices (the pair is recovered spectrally). A Hodge type is
//! an array `[{"p": int, "q": int, "mult": int}, ...]`. Unknown keys are
//! rejected everywhere.
//!
//! Output discipline. Every stdout payload is a single JSON line (CSV for
//! `sigma-scan`), with floating-point numbers printed as `{:.16e}` — 17
//! significant digits, enough for lossless double-precision round-trips.
//! Exit codes: 0 success (and a true verdict for `verify`), 1 a false
//! verdict or a domain failure (off-lattice spectrum, defective matrix,
//! evaluation out of budget), 2 malformed input or file trouble. Failures
//! print one machine-readable JSON line `{"kind": ..., "message": ...}` on
//! stderr; `kind` is `"parse"`, `"io"`, or `"domain"`.
//!
//! The default tolerance is `1e-8`, overridable per invocation with `--tol`
//! or globally with the `HODGE_SIGMA_TOL` environment variable (flag wins).

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::hodge_ops::{
    self, build_filtration, hodge_decomposition, rho_eval, verify_sigma, verify_triple, HodgeType,
    OperatorTriple, Summand, VerificationReport,
};
use crate::instance_gen::{random_hodge_type, random_unimodular, rng_for, GenConfig};
use crate::linalg::RealMatrix;
use crate::weierstrass;

/// Top-level argument parser.
#[derive(Debug, Parser)]
#[command(
    name = "hodge-sigma",
    version,
    about = "Realize Hodge-type data as linear operators and test matrices against the lattice sigma function"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the lattice sigma function at one complex point
    SigmaEval {
        /// Real part of the evaluation point
        #[arg(long)]
        re: f64,
        /// Imaginary part of the evaluation point
        #[arg(long)]
        im: f64,
        /// Relative truncation tolerance
        #[arg(long, env = "HODGE_SIGMA_TOL", default_value_t = crate::DEFAULT_TOL)]
        tol: f64,
    },
    /// Tabulate |sigma| over a square grid into a CSV file
    SigmaScan {
        /// Half-width of the square: the grid covers [-radius, radius]^2
        #[arg(long)]
        radius: f64,
        /// Number of points per axis (at least 2)
        #[arg(long)]
        grid: usize,
        /// Destination CSV file
        #[arg(long)]
        out: PathBuf,
        /// Relative truncation tolerance
        #[arg(long, env = "HODGE_SIGMA_TOL", default_value_t = crate::DEFAULT_TOL)]
        tol: f64,
    },
    /// Build an operator file from a Hodge type (random type if omitted)
    Gen {
        /// Type spec like "(1,0)x2+(1,1)x1"; drawn from the seed if absent
        #[arg(long = "type")]
        type_spec: Option<String>,
        /// Seed for every random draw
        #[arg(long)]
        seed: u64,
        /// Hide the block structure behind a random unimodular change of basis
        #[arg(long)]
        conjugate: bool,
        /// Destination operator file
        #[arg(long)]
        out: PathBuf,
    },
    /// Check operators in a file; prints a report, exits 0/1 with the verdict
    Verify {
        /// Operator file with E and T, S, or all three
        file: PathBuf,
        /// Acceptance tolerance
        #[arg(long, env = "HODGE_SIGMA_TOL", default_value_t = crate::DEFAULT_TOL)]
        tol: f64,
    },
    /// Recover the commuting pair (E, T) from S and write it out
    Split {
        /// Operator file providing S (directly or as E + T)
        file: PathBuf,
        /// Destination file for the recovered pair
        #[arg(long)]
        out: PathBuf,
        /// Spectral tolerance
        #[arg(long, env = "HODGE_SIGMA_TOL", default_value_t = crate::DEFAULT_TOL)]
        tol: f64,
    },
    /// Recover the Hodge type from S
    Classify {
        /// Operator file providing S (directly or as E + T)
        file: PathBuf,
        /// Spectral tolerance
        #[arg(long, env = "HODGE_SIGMA_TOL", default_value_t = crate::DEFAULT_TOL)]
        tol: f64,
    },
    /// Print the (p,q)-components and real weight spaces
    Decompose {
        /// Operator file; S alone suffices
        file: PathBuf,
        /// Spectral tolerance
        #[arg(long, env = "HODGE_SIGMA_TOL", default_value_t = crate::DEFAULT_TOL)]
        tol: f64,
    },
    /// Print one filtration step F^r
    Filtration {
        /// Operator file; S alone suffices
        file: PathBuf,
        /// Filtration index
        #[arg(long)]
        r: i64,
        /// Spectral tolerance
        #[arg(long, env = "HODGE_SIGMA_TOL", default_value_t = crate::DEFAULT_TOL)]
        tol: f64,
    },
    /// Evaluate the operator group exp(xE + yT)
    Rho {
        /// Operator file; S alone suffices
        file: PathBuf,
        /// Scaling parameter
        #[arg(long)]
        x: f64,
        /// Rotation parameter
        #[arg(long)]
        y: f64,
        /// Spectral tolerance (used when E, T must be recovered from S)
        #[arg(long, env = "HODGE_SIGMA_TOL", default_value_t = crate::DEFAULT_TOL)]
        tol: f64,
    },
}

/// A failure on its way to stderr: a machine-readable kind plus a message.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or unwritable files.
    Io(String),
    /// Structurally invalid input: JSON, shapes, type specs.
    Parse(String),
    /// Mathematically impossible request on well-formed input.
    Domain(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Parse(_) => "parse",
            CliError::Domain(_) => "domain",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Io(m) | CliError::Parse(m) | CliError::Domain(m) => m,
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Parse(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl From<hodge_ops::HodgeError> for CliError {
    fn from(err: hodge_ops::HodgeError) -> Self {
        CliError::Domain(err.to_string())
    }
}

impl From<weierstrass::WeierstrassError> for CliError {
    fn from(err: weierstrass::WeierstrassError) -> Self {
        CliError::Domain(err.to_string())
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'static str,
    message: &'a str,
}

/// Runs the CLI and returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                let _ = err.print();
                return 0;
            }
            let body = ErrorBody {
                kind: "parse",
                message: &err.to_string(),
            };
            eprintln!("{}", json_line(&body).trim_end());
            return 2;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            let body = ErrorBody {
                kind: err.kind(),
                message: err.message(),
            };
            eprintln!("{}", json_line(&body).trim_end());
            err.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::SigmaEval { re, im, tol } => sigma_eval_cmd(re, im, tol),
        Command::SigmaScan {
            radius,
            grid,
            out,
            tol,
        } => sigma_scan_cmd(radius, grid, &out, tol),
        Command::Gen {
            type_spec,
            seed,
            conjugate,
            out,
        } => gen_cmd(type_spec.as_deref(), seed, conjugate, &out),
        Command::Verify { file, tol } => verify_cmd(&file, tol),
        Command::Split { file, out, tol } => split_cmd(&file, &out, tol),
        Command::Classify { file, tol } => classify_cmd(&file, tol),
        Command::Decompose { file, tol } => decompose_cmd(&file, tol),
        Command::Filtration { file, r, tol } => filtration_cmd(&file, r, tol),
        Command::Rho { file, x, y, tol } => rho_cmd(&file, x, y, tol),
    }
}

// ---------------------------------------------------------------------------
// JSON plumbing
// ---------------------------------------------------------------------------

/// `serde_json` formatter printing every float as `{:.16e}`: 17 significant
/// digits, the minimum that makes double-precision round-trips lossless.
struct Sci17;

impl serde_json::ser::Formatter for Sci17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes to a single JSON line (trailing newline included).
fn json_line<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sci17);
    value
        .serialize(&mut ser)
        .expect("plain data structures always serialize");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// On-disk form of a real square matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    /// Side length.
    pub n: usize,
    /// Row-major entries; `n` rows of `n` finite numbers.
    pub entries: Vec<Vec<f64>>,
}

impl MatrixFile {
    /// Validates shape and finiteness and converts to a dense matrix.
    pub fn to_matrix(&self) -> Result<RealMatrix, CliError> {
        if self.entries.len() != self.n {
            return Err(CliError::Parse(format!(
                "matrix declares n={} but has {} rows",
                self.n,
                self.entries.len()
            )));
        }
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.n {
                return Err(CliError::Parse(format!(
                    "matrix row {i} has {} entries, expected {}",
                    row.len(),
                    self.n
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(CliError::Parse(format!(
                    "matrix entry ({i}, {j}) is not finite"
                )));
            }
        }
        Ok(RealMatrix::from_fn(self.n, self.n, |i, j| {
            self.entries[i][j]
        }))
    }

    /// Converts a dense matrix back to the on-disk form.
    pub fn from_matrix(m: &RealMatrix) -> Self {
        MatrixFile {
            n: m.nrows(),
            entries: (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
                .collect(),
        }
    }
}

/// On-disk form of an operator set; any subset of the three matrices.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    /// Weight operator.
    #[serde(rename = "E", skip_serializing_if = "Option::is_none")]
    pub e: Option<MatrixFile>,
    /// Rotation generator.
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub t: Option<MatrixFile>,
    /// The sum operator.
    #[serde(rename = "S", skip_serializing_if = "Option::is_none")]
    pub s: Option<MatrixFile>,
}

/// The matrices actually present in an operator file, validated.
struct Resolved {
    e: Option<RealMatrix>,
    t: Option<RealMatrix>,
    s: Option<RealMatrix>,
}

fn resolve(path: &Path) -> Result<Resolved, CliError> {
    let file: OperatorFile = read_json(path)?;
    let conv = |m: &Option<MatrixFile>| -> Result<Option<RealMatrix>, CliError> {
        m.as_ref().map(MatrixFile::to_matrix).transpose()
    };
    let resolved = Resolved {
        e: conv(&file.e)?,
        t: conv(&file.t)?,
        s: conv(&file.s)?,
    };
    if resolved.e.is_none() && resolved.t.is_none() && resolved.s.is_none() {
        return Err(CliError::Parse(
            "operator file must provide at least one of E, T, S".to_string(),
        ));
    }
    let shapes: Vec<usize> = [&resolved.e, &resolved.t, &resolved.s]
        .iter()
        .filter_map(|m| m.as_ref().map(RealMatrix::nrows))
        .collect();
    if shapes.windows(2).any(|w| w[0] != w[1]) {
        return Err(CliError::Parse(
            "E, T, S must all have the same dimension".to_string(),
        ));
    }
    Ok(resolved)
}

/// The sum operator: taken directly, or formed as `E + T`.
fn require_s(r: &Resolved) -> Result<RealMatrix, CliError> {
    if let Some(s) = &r.s {
        return Ok(s.clone());
    }
    match (&r.e, &r.t) {
        (Some(e), Some(t)) => Ok(e + t),
        _ => Err(CliError::Parse(
            "this command needs S, or both E and T to form it".to_string(),
        )),
    }
}

/// A full triple: missing members are derived from `S = E + T` when that
/// determines them, and from the spectral split when only `S` is present.
fn require_triple(r: &Resolved, tol: f64) -> Result<OperatorTriple, CliError> {
    let triple = match (&r.e, &r.t, &r.s) {
        (Some(e), Some(t), Some(s)) => OperatorTriple::from_parts(e.clone(), t.clone(), s.clone())?,
        (Some(e), Some(t), None) => OperatorTriple::new(e.clone(), t.clone())?,
        (Some(e), None, Some(s)) => OperatorTriple::from_parts(e.clone(), s - e, s.clone())?,
        (None, Some(t), Some(s)) => OperatorTriple::from_parts(s - t, t.clone(), s.clone())?,
        (None, None, Some(s)) => {
            let (e, t) = hodge_ops::split(s, tol)?;
            OperatorTriple::from_parts(e, t, s.clone())?
        }
        _ => {
            return Err(CliError::Parse(
                "cannot determine E and T: provide both, or S".to_string(),
            ))
        }
    };
    Ok(triple)
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

/// One complex value on stdout.
#[derive(Debug, Serialize, Deserialize)]
pub struct ComplexOut {
    /// Real part.
    pub re: f64,
    /// Imaginary part.
    pub im: f64,
}

fn sigma_eval_cmd(re: f64, im: f64, tol: f64) -> Result<i32, CliError> {
    if !(re.is_finite() && im.is_finite()) {
        return Err(CliError::Parse(
            "evaluation point must be finite".to_string(),
        ));
    }
    let value = weierstrass::sigma(Complex64::new(re, im), tol)?;
    print!(
        "{}",
        json_line(&ComplexOut {
            re: value.re,
            im: value.im
        })
    );
    Ok(0)
}

fn sigma_scan_cmd(radius: f64, grid: usize, out: &Path, tol: f64) -> Result<i32, CliError> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(CliError::Parse(
            "scan radius must be a positive finite number".to_string(),
        ));
    }
    if grid < 2 {
        return Err(CliError::Parse(
            "grid must have at least 2 points per axis".to_string(),
        ));
    }
    let mut csv = String::from("x,y,abs_sigma\n");
    let step = 2.0 * radius / (grid - 1) as f64;
    for i in 0..grid {
        let x = -radius + step * i as f64;
        for j in 0..grid {
            let y = -radius + step * j as f64;
            let value = weierstrass::sigma(Complex64::new(x, y), tol)?;
            let _ = writeln!(csv, "{x:.16e},{y:.16e},{:.16e}", value.norm());
        }
    }
    write_file(out, &csv)?;
    Ok(0)
}

fn gen_cmd(
    type_spec: Option<&str>,
    seed: u64,
    conjugate: bool,
    out: &Path,
) -> Result<i32, CliError> {
    let cfg = GenConfig::new(seed);
    let mut rng = rng_for(&cfg);
    let hodge_type = match type_spec {
        Some(spec) => parse_type_spec(spec)?,
        None => random_hodge_type(&mut rng, &cfg),
    };
    let conjugator = if conjugate {
        Some(random_unimodular(&mut rng, hodge_type.dimension(), &cfg))
    } else {
        None
    };
    let triple = hodge_ops::assemble(&hodge_type, conjugator.as_ref())?;
    let file = OperatorFile {
        e: Some(MatrixFile::from_matrix(&triple.e)),
        t: Some(MatrixFile::from_matrix(&triple.t)),
        s: Some(MatrixFile::from_matrix(&triple.s)),
    };
    write_file(out, &json_line(&file))?;
    println!("{hodge_type}");
    Ok(0)
}

fn verify_cmd(path: &Path, tol: f64) -> Result<i32, CliError> {
    let resolved = resolve(path)?;
    let report: VerificationReport = match (&resolved.e, &resolved.t, &resolved.s) {
        (Some(e), Some(t), maybe_s) => {
            let triple = match maybe_s {
                Some(s) => OperatorTriple::from_parts(e.clone(), t.clone(), s.clone())?,
                None => OperatorTriple::new(e.clone(), t.clone())?,
            };
            verify_triple(&triple, tol)
        }
        (None, None, Some(s)) => verify_sigma(s, tol),
        _ => {
            return Err(CliError::Parse(
                "verify needs E and T together, or S".to_string(),
            ))
        }
    };
    print!("{}", json_line(&report));
    Ok(if report.verdict { 0 } else { 1 })
}

/// On-disk form of a recovered pair.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairFile {
    /// Recovered weight operator.
    #[serde(rename = "E")]
    pub e: MatrixFile,
    /// Recovered rotation generator.
    #[serde(rename = "T")]
    pub t: MatrixFile,
}

fn split_cmd(path: &Path, out: &Path, tol: f64) -> Result<i32, CliError> {
    let s = require_s(&resolve(path)?)?;
    let (e, t) = hodge_ops::split(&s, tol)?;
    let pair = PairFile {
        e: MatrixFile::from_matrix(&e),
        t: MatrixFile::from_matrix(&t),
    };
    write_file(out, &json_line(&pair))?;
    Ok(0)
}

fn classify_cmd(path: &Path, tol: f64) -> Result<i32, CliError> {
    let s = require_s(&resolve(path)?)?;
    let hodge_type = hodge_ops::classify(&s, tol)?;
    print!("{}", json_line(&hodge_type));
    Ok(0)
}

/// One `(p, q)`-component in the decomposition output.
#[derive(Debug, Serialize, Deserialize)]
pub struct ComponentOut {
    /// First Hodge index.
    pub p: i64,
    /// Second Hodge index.
    pub q: i64,
    /// Complex dimension.
    pub dim: usize,
    /// Orthonormal basis vectors, entries as `{re, im}`.
    pub basis: Vec<Vec<ComplexOut>>,
}

/// One real weight space in the decomposition output.
#[derive(Debug, Serialize, Deserialize)]
pub struct WeightOut {
    /// The weight (eigenvalue of `E`).
    pub weight: i64,
    /// Real dimension.
    pub dim: usize,
    /// Orthonormal real basis vectors.
    pub basis: Vec<Vec<f64>>,
}

/// Full decomposition output.
#[derive(Debug, Serialize, Deserialize)]
pub struct DecompositionOut {
    /// Ambient dimension.
    pub n: usize,
    /// All `(p, q)`-components in ascending `(p, q)` order.
    pub components: Vec<ComponentOut>,
    /// All weight spaces in ascending weight order.
    pub weights: Vec<WeightOut>,
}

fn complex_vec(v: &nalgebra::DVector<Complex64>) -> Vec<ComplexOut> {
    v.iter()
        .map(|z| ComplexOut { re: z.re, im: z.im })
        .collect()
}

fn decompose_cmd(path: &Path, tol: f64) -> Result<i32, CliError> {
    let triple = require_triple(&resolve(path)?, tol)?;
    let dec = hodge_decomposition(&triple, tol)?;
    let out = DecompositionOut {
        n: triple.n(),
        components: dec
            .components
            .iter()
            .map(|(&(p, q), basis)| ComponentOut {
                p,
                q,
                dim: basis.len(),
                basis: basis.iter().map(complex_vec).collect(),
            })
            .collect(),
        weights: dec
            .weight_map
            .iter()
            .map(|(&weight, basis)| WeightOut {
                weight,
                dim: basis.len(),
                basis: basis.iter().map(|v| v.iter().copied().collect()).collect(),
            })
            .collect(),
    };
    print!("{}", json_line(&out));
    Ok(0)
}

/// One filtration step on stdout.
#[derive(Debug, Serialize, Deserialize)]
pub struct FiltrationOut {
    /// The step index.
    pub r: i64,
    /// Ambient dimension.
    pub n: usize,
    /// Complex dimension of `F^r`.
    pub dim: usize,
    /// Basis of `F^r`, concatenated component bases in ascending `(p, q)`.
    pub basis: Vec<Vec<ComplexOut>>,
}

fn filtration_cmd(path: &Path, r: i64, tol: f64) -> Result<i32, CliError> {
    let triple = require_triple(&resolve(path)?, tol)?;
    let dec = hodge_decomposition(&triple, tol)?;
    let basis = build_filtration(&dec, r);
    let out = FiltrationOut {
        r,
        n: triple.n(),
        dim: basis.len(),
        basis: basis.iter().map(complex_vec).collect(),
    };
    print!("{}", json_line(&out));
    Ok(0)
}

fn rho_cmd(path: &Path, x: f64, y: f64, tol: f64) -> Result<i32, CliError> {
    let triple = require_triple(&resolve(path)?, tol)?;
    let value = rho_eval(&triple, x, y)?;
    print!("{}", json_line(&MatrixFile::from_matrix(&value)));
    Ok(0)
}

// ---------------------------------------------------------------------------
// Type-spec grammar
// ---------------------------------------------------------------------------

/// Parses `"(p,q)xM+(p,q)xM+..."` with optional whitespace between tokens.
///
/// Errors cite the byte offset and the offending character; semantic
/// violations (`q > p`, zero multiplicity) surface the corresponding
/// construction error.
pub fn parse_type_spec(spec: &str) -> Result<HodgeType, CliError> {
    let bytes: Vec<char> = spec.chars().collect();
    let mut pos = 0usize;
    let mut summands: Vec<Summand> = Vec::new();

    fn skip_ws(bytes: &[char], pos: &mut usize) {
        while *pos < bytes.len() && bytes[*pos].is_whitespace() {
            *pos += 1;
        }
    }
    fn describe(bytes: &[char], pos: usize) -> String {
        bytes
            .get(pos)
            .map_or_else(|| "end of input".to_string(), |c| format!("'{c}'"))
    }
    fn expect(bytes: &[char], pos: &mut usize, want: char) -> Result<(), CliError> {
        skip_ws(bytes, pos);
        if bytes.get(*pos) == Some(&want) {
            *pos += 1;
            Ok(())
        } else {
            Err(CliError::Parse(format!(
                "type spec: expected '{want}' at position {}, found {}",
                *pos,
                describe(bytes, *pos)
            )))
        }
    }
    fn integer(bytes: &[char], pos: &mut usize, signed: bool) -> Result<i64, CliError> {
        skip_ws(bytes, pos);
        let start = *pos;
        if signed && bytes.get(*pos) == Some(&'-') {
            *pos += 1;
        }
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        let token: String = bytes[start..*pos].iter().collect();
        token.parse::<i64>().map_err(|_| {
            CliError::Parse(format!(
                "type spec: expected an integer at position {start}, found {}",
                describe(bytes, start)
            ))
        })
    }

    loop {
        expect(&bytes, &mut pos, '(')?;
        let p = integer(&bytes, &mut pos, true)?;
        expect(&bytes, &mut pos, ',')?;
        let q = integer(&bytes, &mut pos, true)?;
        expect(&bytes, &mut pos, ')')?;
        expect(&bytes, &mut pos, 'x')?;
        let mult = integer(&bytes, &mut pos, false)?;
        summands.push(Summand::new(p, q, mult as usize));
        skip_ws(&bytes, &mut pos);
        match bytes.get(pos) {
            None => break,
            Some('+') => pos += 1,
            Some(c) => {
                return Err(CliError::Parse(format!(
                    "type spec: expected '+' or end at position {pos}, found '{c}'"
                )))
            }
        }
    }
    HodgeType::new(summands).map_err(|e| CliError::Parse(format!("type spec: {e}")))
}
