mod args;
mod commands;
mod config;
mod error;
mod manifest;

use std::process::ExitCode;
use std::time::Instant;

use clap::{CommandFactory, Parser};

use args::{Cli, Command};
use error::{CliError, CliResult};
use manifest::{OutDir, RunManifest};

pub const WORKERS_ENV: &str = "SCARGRAPH_WORKERS";

fn workers() -> CliResult<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Workers(v)),
        },
        Err(_) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

fn command_names() -> Vec<String> {
    Cli::command().get_subcommands().map(|c| c.get_name().to_string()).collect()
}

fn report(err: &CliError, as_json: bool) {
    if as_json {
        let v = serde_json::json!({ "error": { "kind": err.kind(), "message": err.to_string(), "exit_code": 1 } });
        eprintln!("{v}");
    } else {
        eprintln!("error: {err}");
    }
}

fn run(cli: Cli, args: Vec<String>) -> CliResult<()> {
    let n_workers = workers()?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n_workers)
        .build_global()
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    let start = Instant::now();
    let common = &cli.common;
    let mut out = OutDir::create(&common.out)?;
    let summary = match &cli.command {
        Command::Pxp(a) => commands::pxp(common, a, &mut out)?,
        Command::Sample(a) => commands::sample(common, a, &mut out)?,
        Command::Spectrum(a) => commands::spectrum(common, a, &mut out)?,
        Command::EntScan(a) => commands::ent_scan(common, a, &mut out)?,
        Command::ScarScan(a) => commands::scar_scan(common, a, &mut out)?,
        Command::LevelStats(a) => commands::level_stats(common, a, &mut out)?,
        Command::OverlapScan(a) => commands::overlap_scan(common, a, &mut out)?,
        Command::SubgraphProb(a) => commands::subgraph_prob(common, a, &mut out)?,
        Command::RkCheck(a) => commands::rk_check(common, a, &mut out)?,
        Command::Sqrt2Check(a) => commands::sqrt2_check(common, a, &mut out)?,
    };
    let manifest = RunManifest {
        command: cli.command.name().to_string(),
        args,
        params: serde_json::json!({
            "command": cli.command.params(),
            "common": serde_json::to_value(common).expect("flags serialize"),
        }),
        seed: common.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        outputs: out.written().to_vec(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        workers: n_workers,
    };
    out.write_manifest(&manifest)?;
    println!("{summary}");
    Ok(())
}

fn main() -> ExitCode {
    let raw: Vec<String> = std::env::args().collect();
    let as_json = raw.iter().any(|a| a == "--error-json");
    let (config, argv) = config::take_config(&raw);
    let argv = match config {
        Some(path) => {
            let extra = std::fs::read_to_string(&path)
                .map_err(CliError::io(&path))
                .and_then(|text| config::parse_config(&path, &text));
            match extra {
                Ok(extra) => config::merge(&argv, extra, &command_names()),
                Err(e) => {
                    report(&e, as_json);
                    return ExitCode::from(2);
                }
            }
        }
        None => argv,
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            if as_json {
                let msg = e.render().to_string();
                let v = serde_json::json!({ "error": { "kind": "usage", "message": msg.trim(), "exit_code": 2 } });
                eprintln!("{v}");
            } else {
                let _ = e.print();
            }
            return ExitCode::from(2);
        }
    };
    let replay: Vec<String> = argv.iter().skip(1).filter(|a| *a != "--error-json").cloned().collect();
    match run(cli, replay) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report(&e, as_json);
            ExitCode::from(1)
        }
    }
}
