use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use ssflab::cli::{run, Command, Config};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Sub {
    Verify,
    Estimate,
    Ssf,
    Report,
}

/// Operator derivative and spectral shift experiments.
///
/// Settings come from an optional key=value file, then `--set key=value`
/// pairs, then the named flags. With `--out DIR` the report and CSV files are
/// written there; otherwise the JSON report goes to stdout.
#[derive(Debug, Parser)]
#[command(name = "ssflab", version)]
struct Args {
    #[arg(value_enum)]
    command: Sub,
    /// key=value settings file; `#` starts a comment.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one setting; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Matrix dimension.
    #[arg(long)]
    dim: Option<String>,
    /// Comma-separated dimensions for `estimate`.
    #[arg(long)]
    dims: Option<String>,
    /// Derivative or remainder order.
    #[arg(long)]
    n: Option<String>,
    /// Schatten exponent.
    #[arg(long)]
    alpha: Option<String>,
    /// Series truncation; covers test polynomials of degree up to K + n.
    #[arg(long = "K")]
    truncation: Option<String>,
    /// Random instances per cell.
    #[arg(long)]
    trials: Option<String>,
    /// Master seed.
    #[arg(long)]
    seed: Option<String>,
    /// `verify` suite: identities, symbols or ssf.
    #[arg(long)]
    suite: Option<String>,
    /// `estimate` kind: main, trace, indbase, indstep or kpss.
    #[arg(long)]
    kind: Option<String>,
    /// Pair JSON for `ssf`, report JSON for `report`.
    #[arg(long)]
    input: Option<String>,
    /// Output directory for the report and CSV files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the residual tolerance.
    #[arg(long)]
    tolerance: Option<String>,
    /// Reject up front if the truncation cannot cover this degree.
    #[arg(long = "check-degree")]
    check_degree: Option<String>,
}

fn resolve(args: &Args) -> Result<Config, String> {
    let mut cfg = match &args.config {
        Some(p) => Config::from_file(p).map_err(|e| e.to_string())?,
        None => Config::default(),
    };
    for kv in &args.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| format!("--set expects KEY=VALUE, got '{kv}'"))?;
        cfg.set(k.trim(), v.trim());
    }
    let flags = [
        ("dim", &args.dim),
        ("dims", &args.dims),
        ("n", &args.n),
        ("alpha", &args.alpha),
        ("K", &args.truncation),
        ("trials", &args.trials),
        ("seed", &args.seed),
        ("suite", &args.suite),
        ("kind", &args.kind),
        ("input", &args.input),
        ("tolerance", &args.tolerance),
        ("check_degree", &args.check_degree),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, v);
        }
    }
    if let Some(out) = &args.out {
        cfg.set("out", &out.to_string_lossy());
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match resolve(&args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let command = match args.command {
        Sub::Verify => Command::Verify,
        Sub::Estimate => Command::Estimate,
        Sub::Ssf => Command::Ssf,
        Sub::Report => Command::Report,
    };
    let outcome = run(command, &cfg);
    if let Some(msg) = &outcome.message {
        eprintln!("{msg}");
    }
    match cfg.raw("out") {
        Some(dir) => match outcome.write(dir.as_ref()) {
            Ok(paths) => {
                for p in paths {
                    eprintln!("wrote {}", p.display());
                }
            }
            Err(e) => {
                eprintln!("error: cannot write to {dir}: {e}");
                return ExitCode::from(2);
            }
        },
        None => print!("{}", outcome.report),
    }
    ExitCode::from(outcome.status.code() as u8)
}
