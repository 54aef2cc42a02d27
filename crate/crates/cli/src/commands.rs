//! Subcommand implementations. Each returns the serialized report and
//! whether it counts as a success; `main` only handles I/O and exit codes.

use bvspaces::matclass::{class_test_from_domain, class_test_into_domain};
use bvspaces::rational::format_rational;
use bvspaces::spaces::{domain_membership, membership, policy, DualKind, SpaceId};
use bvspaces::duals::dual_test_domain;
use bvspaces::{DenseTrunc, Error, Rational};
use serde::Serialize;
use serde_json::json;

use crate::specs::{DomainSpec, MatrixSpec, SeqSpec};
use crate::verify::{self, Suite};

pub const TOOL: &str = "bvspaces";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const MAX_N: usize = 4096;
pub const MAX_VERIFY_N: usize = 256;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for usage and parse errors, 3 for mathematical ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(e) if e.is_mathematical() => 3,
            CliError::Io(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    From,
    Into,
}

/// Serialized output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub success: bool,
}

#[derive(Serialize)]
struct PolicyConstants {
    growth_tolerance: String,
    divergence_factor: String,
    column_tolerance: String,
    statement: &'static str,
}

#[derive(Serialize)]
struct Envelope<'a, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    spec: serde_json::Value,
    n: usize,
    policy: PolicyConstants,
    result: R,
}

fn envelope<R: Serialize>(command: &str, spec: serde_json::Value, n: usize, result: R) -> Output {
    let env = Envelope {
        tool: TOOL,
        version: VERSION,
        command,
        spec,
        n,
        policy: PolicyConstants {
            growth_tolerance: format_rational(&policy::growth_tolerance()),
            divergence_factor: format_rational(&policy::divergence_factor()),
            column_tolerance: format_rational(&policy::column_tolerance()),
            statement: policy::POLICY,
        },
        result,
    };
    let mut text = serde_json::to_string_pretty(&env).expect("reports serialize");
    text.push('\n');
    Output { text, success: true }
}

fn check_n(n: usize, max: usize) -> Result<(), CliError> {
    if n == 0 || n > max {
        return Err(CliError::Usage(format!("--n must lie in 1..={max}, got {n}")));
    }
    Ok(())
}

fn json_only(format: Format, command: &str) -> Result<(), CliError> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Usage(format!("`{command}` has no CSV form; CSV covers matrix and transform only"))),
    }
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

fn csv_line(values: &[Rational]) -> String {
    let mut line = strings(values).join(",");
    line.push('\n');
    line
}

fn to_value<T: Serialize>(spec: &T) -> serde_json::Value {
    serde_json::to_value(spec).expect("specs serialize")
}

pub fn matrix(spec: &str, n: usize, format: Format) -> Result<Output, CliError> {
    check_n(n, MAX_N)?;
    let spec = MatrixSpec::parse(spec)?;
    let dense: DenseTrunc = spec.build()?.into_banded().truncate(n)?;
    Ok(match format {
        Format::Csv => Output {
            text: dense.rows().iter().map(|r| csv_line(r)).collect(),
            success: true,
        },
        Format::Json => {
            let rows: Vec<Vec<String>> = dense.rows().iter().map(|r| strings(r)).collect();
            envelope("matrix", to_value(&spec), n, rows)
        }
    })
}

pub fn transform(spec: &str, x: &str, n: usize, format: Format) -> Result<Output, CliError> {
    check_n(n, MAX_N)?;
    let (mspec, xspec) = (MatrixSpec::parse(spec)?, SeqSpec::parse(x)?);
    let values = mspec.build()?.into_banded().apply(&xspec.build(), n)?;
    Ok(match format {
        Format::Csv => Output {
            text: csv_line(&values),
            success: true,
        },
        Format::Json => envelope(
            "transform",
            json!({ "matrix": to_value(&mspec), "x": to_value(&xspec) }),
            n,
            strings(&values),
        ),
    })
}

pub fn membership_cmd(x: &str, space: SpaceId, domain: Option<&str>, n: usize, format: Format) -> Result<Output, CliError> {
    json_only(format, "membership")?;
    check_n(n, MAX_N)?;
    let xspec = SeqSpec::parse(x)?;
    let dspec = domain.map(MatrixSpec::parse).transpose()?;
    let seq = xspec.build();
    let report = match &dspec {
        None => membership(&seq, space, n)?,
        Some(d) => domain_membership(&seq, &d.build()?.into_triangle("the membership domain")?, space, n)?,
    };
    let spec = json!({ "x": to_value(&xspec), "space": space, "domain": dspec.as_ref().map(to_value) });
    Ok(envelope("membership", spec, n, report))
}

pub fn dual(a: &str, domain: &str, kind: DualKind, n: usize, format: Format) -> Result<Output, CliError> {
    json_only(format, "dual")?;
    check_n(n, MAX_N)?;
    let (aspec, dspec) = (SeqSpec::parse(a)?, DomainSpec::parse(domain)?);
    let report = dual_test_domain(&dspec.build(), &aspec.build(), kind, n)?;
    let spec = json!({ "a": to_value(&aspec), "domain": to_value(&dspec), "kind": kind });
    Ok(envelope("dual", spec, n, report))
}

pub fn matclass(
    direction: Direction,
    spec: &str,
    domain: &str,
    space: SpaceId,
    n: usize,
    format: Format,
) -> Result<Output, CliError> {
    json_only(format, "matclass")?;
    check_n(n, MAX_N)?;
    let (mspec, dspec) = (MatrixSpec::parse(spec)?, DomainSpec::parse(domain)?);
    let (m, d) = (mspec.build()?.into_banded(), dspec.build());
    let report = match direction {
        Direction::From => class_test_from_domain(&m, &d, space, n)?,
        Direction::Into => class_test_into_domain(&m, &d, space, n)?,
    };
    let spec = json!({
        "direction": direction,
        "matrix": to_value(&mspec),
        "domain": to_value(&dspec),
        "space": space,
    });
    Ok(envelope("matclass", spec, n, report))
}

pub fn verify_cmd(suite: Suite, n: usize, seed: u64, format: Format) -> Result<Output, CliError> {
    json_only(format, "verify")?;
    check_n(n, MAX_VERIFY_N)?;
    if n < 8 || !n.is_multiple_of(4) {
        return Err(CliError::Usage(format!("verify needs --n a multiple of 4 and at least 8, got {n}")));
    }
    let report = verify::run(suite, n, seed);
    let success = report.all_passed();
    let spec = json!({ "suite": suite, "seed": seed });
    let mut out = envelope("verify", spec, n, report);
    out.success = success;
    Ok(out)
}
