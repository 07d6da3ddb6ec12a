//! The `reczeros` command line tool.
//!
//! Exit codes: 0 success, 1 a verification suite failed or was
//! inconclusive, 2 bad input or an unmet precondition, 3 the solver did not
//! converge or precision ran out.

pub mod json;
pub mod svg;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use reczeros::geometry::classify_with;
use reczeros::roots::default_tolerance;
use reczeros::verify::{self, GridSpec, SuiteConfig};
use reczeros::{
    find_roots_with, lollipop_junction, snap_real, Error, LimitKind, RecurrenceParams, RootSet,
    SolverConfig,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

const SUPPORTED_PRECISIONS: [u32; 4] = [53, 128, 256, 512];

#[derive(Parser, Debug)]
#[command(
    name = "reczeros",
    version,
    about = "Zeros of W_n = (az+b)W_{n-1} + (cz+d)W_{n-2}, W_0 = 1, W_1 = z"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify the limit set of zeros and print the critical scalars.
    Classify(Common),
    /// Zeros of W_n as CSV or JSON.
    Roots {
        #[command(flatten)]
        common: Common,
        #[arg(long = "n", visible_alias = "N")]
        n: usize,
    },
    /// Run a verification suite and print its report.
    Verify {
        suite: Suite,
        #[command(flatten)]
        common: Common,
        /// Horizon; each suite has its own default.
        #[arg(long = "N", visible_alias = "n")]
        n: Option<usize>,
    },
    /// SVG of the zeros of W_n over the limit set.
    Plot {
        #[command(flatten)]
        common: Common,
        #[arg(long = "n", visible_alias = "N")]
        n: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Coefficients a,b,c,d of A(z) = az + b and B(z) = cz + d.
    #[arg(long, value_parser = parse_params, allow_hyphen_values = true, default_value = "1,-1,2,-3")]
    pub params: RecurrenceParams,
    /// Working precision in bits.
    #[arg(long, default_value_t = 256, value_parser = parse_precision)]
    pub precision: u32,
    /// Tolerance override, NAME=VALUE with NAME one of snap, interlace, bound, limit.
    #[arg(long = "tol", value_parser = parse_tolerance)]
    pub tol: Vec<Tolerance>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to PATH instead of standard output.
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    RealRooted,
    Interlace,
    Signs,
    Sharpness,
    Limits,
    Lollipop,
    Normalized,
    Scan,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum TolName {
    Snap,
    Interlace,
    Bound,
    Limit,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Tolerance {
    pub name: TolName,
    pub value: f64,
}

pub fn parse_params(s: &str) -> Result<RecurrenceParams, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!(
            "expected four comma-separated numbers a,b,c,d, got {}",
            parts.len()
        ));
    }
    let mut v = [0.0; 4];
    for (slot, (name, text)) in v.iter_mut().zip(["a", "b", "c", "d"].iter().zip(&parts)) {
        *slot = text
            .parse::<f64>()
            .map_err(|e| format!("{name} = {text:?} is not a number: {e}"))?;
    }
    RecurrenceParams::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

fn parse_precision(s: &str) -> Result<u32, String> {
    let p: u32 = s.parse().map_err(|e| format!("{e}"))?;
    if SUPPORTED_PRECISIONS.contains(&p) {
        Ok(p)
    } else {
        Err(format!(
            "precision must be one of 53, 128, 256, 512 (got {p})"
        ))
    }
}

fn parse_tolerance(s: &str) -> Result<Tolerance, String> {
    let (name, value) = s.split_once('=').ok_or("expected NAME=VALUE")?;
    let name = match name.trim() {
        "snap" => TolName::Snap,
        "interlace" => TolName::Interlace,
        "bound" => TolName::Bound,
        "limit" => TolName::Limit,
        other => {
            return Err(format!(
                "unknown tolerance {other:?}; expected snap, interlace, bound or limit"
            ))
        }
    };
    let value: f64 = value.trim().parse().map_err(|e| format!("{e}"))?;
    if !(value.is_finite() && value > 0.0) {
        return Err("tolerance must be positive and finite".into());
    }
    Ok(Tolerance { name, value })
}

impl Common {
    fn tol(&self, name: TolName) -> Option<f64> {
        self.tol
            .iter()
            .rev()
            .find(|t| t.name == name)
            .map(|t| t.value)
    }

    fn suite(&self) -> SuiteConfig {
        SuiteConfig {
            precision: self.precision,
            solver: SolverConfig::default(),
            snap_tolerance: self.tol(TolName::Snap),
            interlace_tolerance: self.tol(TolName::Interlace),
        }
    }

    fn format_or(&self, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(Failure::usage(
                format!("this command cannot write {f:?} output").to_lowercase(),
            ))
        }
    }

    /// Warns when `x_A = x_B` is accepted only within tolerance.
    fn warnings(&self) -> Vec<String> {
        let p = &self.params;
        if p.xa_equals_xb() && p.compare_xa_xb() != std::cmp::Ordering::Equal {
            vec![format!(
                "x_A = {} and x_B = {} agree only to tolerance; the x_A = x_B results assume exact equality",
                p.x_a(),
                p.x_b()
            )]
        } else {
            Vec::new()
        }
    }
}

/// Why a command stopped, with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonConvergence { .. } | Error::PrecisionLoss(_) => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// What a command produced: the document to write and the exit code.
pub struct Output {
    pub body: String,
    pub code: u8,
}

pub fn run_command(cli: &Cli) -> Result<(Output, Option<PathBuf>), Failure> {
    let (common, out) = match &cli.command {
        Command::Classify(c) => (c, classify(c)?),
        Command::Roots { common, n } => (common, roots(common, *n)?),
        Command::Verify { suite, common, n } => (common, verify(common, *suite, *n)?),
        Command::Plot { common, n } => (common, plot(common, *n)?),
    };
    Ok((out, common.output.clone()))
}

/// Parses `args`, runs the command and writes its output.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let (out, path) = match run_command(&cli) {
        Ok(v) => v,
        Err(f) => {
            eprintln!("error: {f}");
            return ExitCode::from(f.code);
        }
    };
    let written = match path {
        Some(p) => {
            std::fs::write(&p, &out.body).map_err(|e| format!("cannot write {}: {e}", p.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(out.body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| format!("cannot write output: {e}"))
        }
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_USAGE);
    }
    ExitCode::from(out.code)
}

fn emit_warnings(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn classify(c: &Common) -> Result<Output, Failure> {
    c.format_or(Format::Json, &[Format::Json])?;
    let warnings = c.warnings();
    emit_warnings(&warnings);
    let cs = c.params.critical_scalars(c.precision)?;
    let ls = classify_with(&c.params, &cs);
    let junction = match ls.kind {
        LimitKind::Lollipop => Some(lollipop_junction(&c.params)?),
        _ => None,
    };
    let doc = json::classification(&c.params, &ls, junction.as_ref(), &cs, &warnings);
    Ok(Output {
        body: json::to_string(&doc),
        code: EXIT_OK,
    })
}

/// Zeros of `W_n`, snapped to the real axis. Non-convergence is reported
/// through `RootSet::converged`.
pub fn solve(
    params: &RecurrenceParams,
    n: usize,
    precision: u32,
    snap: Option<f64>,
) -> Result<RootSet, Failure> {
    if n == 0 {
        return Err(Error::DegreeTooLow(0).into());
    }
    let p = params.polynomial(n, precision);
    let rs = find_roots_with(&p, &SolverConfig::default(), |z| {
        params.eval_f64_with_derivative(n, z)
    })?;
    Ok(snap_real(
        &rs,
        snap.unwrap_or_else(|| default_tolerance(rs.precision)),
    ))
}

fn non_convergence(n: usize, rs: &RootSet) {
    eprintln!(
        "error: {}",
        Error::NonConvergence {
            n,
            iterations: rs.iterations,
            precision: rs.precision
        }
    );
}

pub fn csv_rows(n: usize, rs: &RootSet) -> String {
    let mut s = String::from("n,re,im,is_real,residual\n");
    for ((z, is_real), residual) in rs.to_c64().into_iter().zip(&rs.is_real).zip(&rs.residuals) {
        s.push_str(&format!(
            "{n},{},{},{is_real},{}\n",
            json::sci(z.re),
            json::sci(z.im),
            json::sci(*residual)
        ));
    }
    s
}

fn roots(c: &Common, n: usize) -> Result<Output, Failure> {
    let format = c.format_or(Format::Csv, &[Format::Csv, Format::Json])?;
    let rs = solve(&c.params, n, c.precision, c.tol(TolName::Snap))?;
    let body = match format {
        Format::Json => json::to_string(&json::roots(&c.params, n, c.precision, &rs)),
        _ => csv_rows(n, &rs),
    };
    let code = if rs.converged {
        EXIT_OK
    } else {
        non_convergence(n, &rs);
        EXIT_NUMERIC
    };
    Ok(Output { body, code })
}

fn verify(c: &Common, suite: Suite, n: Option<usize>) -> Result<Output, Failure> {
    c.format_or(Format::Json, &[Format::Json])?;
    let cfg = c.suite();
    let p = &c.params;
    let warnings = c.warnings();
    emit_warnings(&warnings);
    let report = match suite {
        Suite::RealRooted => {
            verify::verify_real_rooted(p, n.unwrap_or(verify::CONVERGENCE_HORIZON), &cfg)?
        }
        Suite::Interlace => verify::verify_interlacing_chain(
            p,
            n.unwrap_or(verify::INTERLACING_HORIZON),
            None,
            &cfg,
        )?,
        Suite::Signs => {
            verify::verify_sign_conditions(p, n.unwrap_or(verify::INTERLACING_HORIZON), &cfg)?
        }
        Suite::Sharpness => verify::verify_bound_sharpness(
            p,
            n.unwrap_or(verify::CONVERGENCE_HORIZON),
            c.tol(TolName::Bound).unwrap_or(0.05),
            &cfg,
        )?,
        Suite::Limits => verify::verify_limit_convergence(
            p,
            n.unwrap_or(verify::CONVERGENCE_HORIZON),
            c.tol(TolName::Limit).unwrap_or(0.1),
            &cfg,
        )?,
        Suite::Lollipop => verify::verify_lollipop(p, &cfg)?,
        Suite::Normalized => verify::verify_normalized_case(
            p,
            n.unwrap_or(80),
            c.tol(TolName::Bound).unwrap_or(0.1),
            &cfg,
        )?,
        Suite::Scan => {
            let grid = GridSpec {
                horizon: n.unwrap_or(verify::CONVERGENCE_HORIZON),
                ..GridSpec::default()
            };
            let summary = verify::scan_sign_region(&grid, &cfg)?;
            let code = if summary.passed() {
                EXIT_OK
            } else {
                EXIT_FAILED
            };
            return Ok(Output {
                body: json::to_string(&json::scan(&summary, c.precision)),
                code,
            });
        }
    };
    Ok(Output {
        body: json::to_string(&json::report(&report, c.precision, &warnings)),
        code: if report.passed { EXIT_OK } else { EXIT_FAILED },
    })
}

fn plot(c: &Common, n: usize) -> Result<Output, Failure> {
    c.format_or(Format::Svg, &[Format::Svg])?;
    let rs = solve(&c.params, n, c.precision, c.tol(TolName::Snap))?;
    let cs = c.params.critical_scalars(c.precision)?;
    let limit = classify_with(&c.params, &cs);
    let roots = rs.to_c64();
    let body = svg::render(&svg::Figure {
        params: &c.params,
        n,
        roots: &roots,
        limit: &limit,
    });
    let code = if rs.converged {
        EXIT_OK
    } else {
        non_convergence(n, &rs);
        EXIT_NUMERIC
    };
    Ok(Output { body, code })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_parse_exactly() {
        let p = parse_params("1,-1, 2,-3").unwrap();
        assert_eq!(p.as_array(), [1.0, -1.0, 2.0, -3.0]);
        let p = parse_params("0.1,1e-3,-2.5,0").unwrap();
        assert_eq!(p.as_array(), [0.1, 1e-3, -2.5, 0.0]);
    }

    #[test]
    fn params_reject_bad_input() {
        assert!(parse_params("1,2,3").is_err());
        assert!(parse_params("1,2,x,4").is_err());
        assert!(parse_params("0,1,1,1")
            .unwrap_err()
            .contains("a must be nonzero"));
        assert!(parse_params("1,1,0,1")
            .unwrap_err()
            .contains("c must be nonzero"));
        assert!(parse_params("1,inf,1,1").is_err());
    }

    #[test]
    fn tolerances_parse() {
        let t = parse_tolerance("snap=1e-20").unwrap();
        assert_eq!(
            t,
            Tolerance {
                name: TolName::Snap,
                value: 1e-20
            }
        );
        assert!(parse_tolerance("snap").is_err());
        assert!(parse_tolerance("other=1").is_err());
        assert!(parse_tolerance("limit=-1").is_err());
    }

    #[test]
    fn precision_is_restricted() {
        assert_eq!(parse_precision("128"), Ok(128));
        assert!(parse_precision("100").is_err());
    }

    #[test]
    fn last_tolerance_wins() {
        let cli = Cli::try_parse_from([
            "reczeros",
            "classify",
            "--tol",
            "bound=0.5",
            "--tol",
            "bound=0.25",
        ])
        .unwrap();
        let Command::Classify(c) = cli.command else {
            panic!()
        };
        assert_eq!(c.tol(TolName::Bound), Some(0.25));
    }

    #[test]
    fn errors_map_to_exit_codes() {
        assert_eq!(
            Failure::from(Error::Precondition("x".into())).code,
            EXIT_USAGE
        );
        assert_eq!(Failure::from(Error::DegreeTooLow(0)).code, EXIT_USAGE);
        assert_eq!(
            Failure::from(Error::PrecisionLoss("x".into())).code,
            EXIT_NUMERIC
        );
        let nc = Error::NonConvergence {
            n: 3,
            iterations: 9,
            precision: 53,
        };
        assert_eq!(Failure::from(nc).code, EXIT_NUMERIC);
    }

    #[test]
    fn csv_has_header_and_lf() {
        let p = parse_params("1,-1,2,-3").unwrap();
        let rs = solve(&p, 2, 128, None).unwrap();
        let csv = csv_rows(2, &rs);
        assert!(!csv.contains('\r'));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,re,im,is_real,residual");
        assert_eq!(lines.len(), 3);
        let fields: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(fields.len(), 5);
        assert!(fields[1].starts_with("-2.30277563773199"), "{}", fields[1]);
        assert_eq!(fields[3], "true");
    }
}
