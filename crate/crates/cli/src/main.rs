//! `newton-hyper`: construct, verify, classify and inspect instances from the
//! command line.
//!
//! Exit codes: 0 success, 1 a verification residual is nonzero, 2 the input
//! could not be parsed or validated, 3 the instance is unclassified.

mod commands;
mod error;
mod spec;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use commands::{Report, Status};
use error::CliError;
use spec::{Explicit, Instance, InstanceSpec};

#[derive(Parser)]
#[command(name = "newton-hyper", version, about = "Exact hypergeometric orthogonal polynomials on Newtonian bases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenpolynomials P_0..P_N, the expansion table W and b_n, u_n, h_n
    Construct(Opts),
    /// Moment conditions, Q-recurrences, Gram matrix, recurrence, duality
    Verify(Opts),
    /// Spectrum and grid type with the family label
    Classify(Opts),
    /// Generalized moments, reduced moments, monomial moments, H_n
    Moments(Opts),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Opts {
    /// Instance spec file (JSON)
    spec: Option<PathBuf>,

    /// Classical family: linear, quadratic, askey_wilson, bannai_ito
    #[arg(long)]
    family: Option<String>,

    /// Family parameters as a JSON object, rationals as strings
    #[arg(long, value_name = "JSON")]
    params: Option<String>,

    /// File with explicit {"lambda": [...], "tau": [...], "a": [...]}
    #[arg(long, value_name = "PATH")]
    explicit: Option<PathBuf>,

    /// JSON array of instance specs, evaluated in parallel
    #[arg(long, value_name = "PATH")]
    batch: Option<PathBuf>,

    /// Order N [default: 12, or the spec's "n"]
    #[arg(long)]
    n: Option<usize>,

    /// Override the cap on N (also NEWTON_HYPER_MAX_N)
    #[arg(long)]
    max_n: Option<usize>,

    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy)]
enum Kind {
    Construct,
    Verify,
    Classify,
    Moments,
}

fn run_one(kind: Kind, instance: &Instance) -> Result<Report, CliError> {
    let data = instance.data()?;
    let report = match kind {
        Kind::Construct => commands::construct(&data),
        Kind::Verify => commands::verify(&data),
        Kind::Classify => commands::classify_cmd(&data),
        Kind::Moments => commands::moments(&data),
    }?;
    Ok(Report {
        value: commands::select(report.value, instance.outputs.as_deref())?,
        status: report.status,
    })
}

fn single_instance(opts: &Opts, cap: usize) -> Result<Instance, CliError> {
    let flags = opts.family.is_some() || opts.params.is_some();
    let sources = [opts.spec.is_some(), flags, opts.explicit.is_some()];
    if sources.iter().filter(|&&s| s).count() != 1 {
        return Err(CliError::usage(
            "give exactly one of a spec file, --family/--params, --explicit or --batch",
        ));
    }
    let spec = if let Some(path) = &opts.spec {
        spec::parse::<InstanceSpec>(&spec::read(path)?)?
    } else if let Some(path) = &opts.explicit {
        InstanceSpec {
            params: None,
            explicit: Some(spec::parse::<Explicit>(&spec::read(path)?)?),
            n: None,
            outputs: None,
        }
    } else {
        InstanceSpec {
            params: Some(spec::params_from_flags(opts.family.as_deref(), opts.params.as_deref())?),
            explicit: None,
            n: None,
            outputs: None,
        }
    };
    spec.resolve(opts.n, cap)
}

fn emit(bytes: &[u8], out: Option<&PathBuf>) -> Result<(), CliError> {
    let failed = |e: std::io::Error| CliError::Output(e.to_string());
    match out {
        Some(path) => fs::write(path, bytes).map_err(failed),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).map_err(failed)?;
            stdout.flush().map_err(failed)
        }
    }
}

fn pretty(value: &Value) -> Vec<u8> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    text.into_bytes()
}

fn run_batch(kind: Kind, opts: &Opts, path: &PathBuf, cap: usize) -> Result<Status, CliError> {
    if opts.spec.is_some() || opts.explicit.is_some() || opts.family.is_some() || opts.params.is_some() {
        return Err(CliError::usage("--batch cannot be combined with another source"));
    }
    if opts.format == Format::Csv {
        return Err(CliError::usage("--batch output is JSON only"));
    }
    let specs: Vec<InstanceSpec> = spec::parse(&spec::read(path)?)?;
    let results: Vec<(Value, u8)> = specs
        .into_par_iter()
        .enumerate()
        .map(|(index, s)| {
            match s.resolve(opts.n, cap).and_then(|inst| run_one(kind, &inst)) {
                Ok(report) => {
                    let code = report.status as u8;
                    (json!({ "index": index, "exit_code": code, "report": report.value }), code)
                }
                Err(e) => {
                    let mut v = e.to_json();
                    v["index"] = json!(index);
                    v["exit_code"] = json!(2);
                    (v, 2)
                }
            }
        })
        .collect();
    let worst = results.iter().map(|(_, c)| *c).max().unwrap_or(0);
    let values: Vec<Value> = results.into_iter().map(|(v, _)| v).collect();
    emit(&pretty(&Value::Array(values)), opts.out.as_ref())?;
    Ok(match worst {
        0 => Status::Ok,
        1 => Status::Residual,
        3 => Status::Unclassified,
        // a mix of failures; the per-instance codes are in the report
        _ => return Err(CliError::usage("some batch entries were rejected (see exit_code per entry)")),
    })
}

fn run(kind: Kind, opts: &Opts) -> Result<Status, CliError> {
    let cap = spec::order_cap(opts.max_n)?;
    if let Some(path) = &opts.batch {
        return run_batch(kind, opts, path, cap);
    }
    let instance = single_instance(opts, cap)?;
    if opts.format == Format::Csv {
        if !matches!(kind, Kind::Construct) {
            return Err(CliError::usage("--format csv is available for construct only"));
        }
        let csv = commands::recurrence_csv(&instance.data()?)?;
        emit(&csv, opts.out.as_ref())?;
        return Ok(Status::Ok);
    }
    let report = run_one(kind, &instance)?;
    emit(&pretty(&report.value), opts.out.as_ref())?;
    Ok(report.status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, opts) = match &cli.command {
        Command::Construct(o) => (Kind::Construct, o),
        Command::Verify(o) => (Kind::Verify, o),
        Command::Classify(o) => (Kind::Classify, o),
        Command::Moments(o) => (Kind::Moments, o),
    };
    match run(kind, opts) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(2)
        }
    }
}
