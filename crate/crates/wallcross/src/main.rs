//! thin command-line front end over the report builders in the library.
//!
//! exit codes: 0 on success, 1 on a computation failure, 2 on a config
//! error. progress goes to stderr; the report goes to stdout or --out.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use wallcross::report::{
    assemble, parse_beta, parse_range, run_command, CliError, Config, Format, PairSpec,
    ScenarioSpec, Target,
};

#[derive(Parser)]
#[command(name = "wallcross", version, about = "exact wall-crossing computations near surface contractions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// wall equations, chamber structure, and moduli component reports
    Walls(CommonArgs),
    /// ext dimension tables for a pair of objects or a twist range
    Ext(CommonArgs),
    /// deformation-hull transcripts at wall, chamber, or triple points
    Hull(CommonArgs),
    /// invariant rings of the wall-point germs
    Invariants(CommonArgs),
    /// everything above in one report
    Report(CommonArgs),
    /// run the acceptance suite
    Selftest(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// curve configuration: single:3, disjoint:3,4 or chain:3,3
    #[arg(long)]
    scenario: Option<String>,
    /// hull target: wall_point, triple_point, chamber_point:generic,
    /// chamber_point:c1,c2,...
    #[arg(long)]
    target: Option<String>,
    /// object pair for ext, e.g. "E,E" or "OC,OC(-1)[1]"
    #[arg(long)]
    pair: Option<String>,
    /// override the pairings beta . C_i, comma-separated rationals
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// twist range for tables, e.g. -3..3
    #[arg(long, allow_hyphen_values = true)]
    range: Option<String>,
    /// truncation order for hull transcripts
    #[arg(long)]
    order: Option<u32>,
    /// weight-window margin override for the cohomology computations
    #[arg(long, allow_hyphen_values = true)]
    window_margin: Option<i64>,
    /// output format
    #[arg(long, value_parser = ["text", "json"])]
    format: Option<String>,
    /// write the report to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// optional key=value config file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
}

/// merge a key=value config file and the flags into one validated config.
fn build_config(args: &CommonArgs) -> Result<Config, CliError> {
    let mut cfg = Config::default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config file {}: {e}", path.display())))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "{}:{}: expected key=value, got '{line}'",
                    path.display(),
                    lineno + 1
                )));
            };
            apply_kv(&mut cfg, key.trim(), value.trim()).map_err(|e| match e {
                CliError::Config(m) => {
                    CliError::Config(format!("{}:{}: {m}", path.display(), lineno + 1))
                }
                other => other,
            })?;
        }
    }
    if let Some(s) = &args.scenario {
        cfg.scenario = ScenarioSpec::parse(s)?;
    }
    if let Some(s) = &args.target {
        cfg.target = Some(Target::parse(s)?);
    }
    if let Some(s) = &args.pair {
        cfg.pair = Some(PairSpec::parse(s)?);
    }
    if let Some(s) = &args.beta {
        cfg.beta = Some(parse_beta(s)?);
    }
    if let Some(s) = &args.range {
        cfg.range = parse_range(s)?;
    }
    if let Some(o) = args.order {
        cfg.order = o;
    }
    if let Some(m) = args.window_margin {
        if m < 0 {
            return Err(CliError::Config("window margin must be >= 0".into()));
        }
        cfg.window_margin = Some(m);
    }
    if let Some(f) = &args.format {
        cfg.format = Format::parse(f)?;
    }
    Ok(cfg)
}

fn apply_kv(cfg: &mut Config, key: &str, value: &str) -> Result<(), CliError> {
    match key {
        "scenario" => cfg.scenario = ScenarioSpec::parse(value)?,
        "target" => cfg.target = Some(Target::parse(value)?),
        "pair" => cfg.pair = Some(PairSpec::parse(value)?),
        "beta" => cfg.beta = Some(parse_beta(value)?),
        "range" => cfg.range = parse_range(value)?,
        "order" => {
            cfg.order = value
                .parse()
                .map_err(|_| CliError::Config(format!("order '{value}' is not a number")))?
        }
        "window_margin" => {
            cfg.window_margin = Some(
                value
                    .parse()
                    .map_err(|_| CliError::Config(format!("window_margin '{value}' is not a number")))?,
            )
        }
        "format" => cfg.format = Format::parse(value)?,
        other => return Err(CliError::Config(format!("unknown config key '{other}'"))),
    }
    Ok(())
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    let (name, args) = match &cli.cmd {
        Cmd::Walls(a) => ("walls", a),
        Cmd::Ext(a) => ("ext", a),
        Cmd::Hull(a) => ("hull", a),
        Cmd::Invariants(a) => ("invariants", a),
        Cmd::Report(a) => ("report", a),
        Cmd::Selftest(a) => ("selftest", a),
    };
    let cfg = build_config(args)?;
    let sections = run_command(&cfg, name)?;
    // a failed acceptance suite is a computation failure
    let selftest_failed = sections.iter().any(|s| {
        s.kind == "selftest" && s.body.get("overall").and_then(|v| v.as_str()) == Some("fail")
    });
    let report = assemble(&cfg, sections);
    let output = match cfg.format {
        Format::Text => report.text,
        Format::Json => report.json,
    };
    match &args.out {
        Some(path) => std::fs::write(path, &output)
            .map_err(|e| CliError::Computation(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{output}"),
    }
    if selftest_failed {
        return Err(CliError::Computation("acceptance suite failed".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
