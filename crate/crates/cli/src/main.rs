//! `dse` command line: run sweeps, list benchmarks, describe devices, and
//! summarize result tables.
//!
//! Exit codes: 0 success, 1 configuration/usage error, 2 sweep completed
//! with partial failures (error records present).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use dse::config::load_config;
use dse::output::{emit_csv, emit_json, format_float, read_csv};
use dse::summarize::summarize_best_worst;
use dse::sweep::run_sweep;
use dse_core::bench;
use dse_core::topology::connectivity_density;

const USAGE: &str = "\
usage:
  dse run <config.toml> --out <results.csv> [--json <results.json>] [--workers N] [--seed S]
  dse list-benchmarks
  dse describe-device <config.toml>
  dse summarize <results.csv> --metric <name>
";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match args.first().map(String::as_str) {
        Some("run") => cmd_run(&args[1..]),
        Some("list-benchmarks") => cmd_list_benchmarks(),
        Some("describe-device") => cmd_describe_device(&args[1..]),
        Some("summarize") => cmd_summarize(&args[1..]),
        Some("--help") | Some("-h") | None => {
            print!("{USAGE}");
            ExitCode::SUCCESS
        }
        Some(other) => usage_error(&format!("unknown command '{other}'")),
    }
}

fn usage_error(message: &str) -> ExitCode {
    eprintln!("error: {message}");
    eprint!("{USAGE}");
    ExitCode::from(1)
}

fn fail(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(1)
}

struct Flags {
    positional: Vec<String>,
    out: Option<PathBuf>,
    json: Option<PathBuf>,
    workers: Option<usize>,
    seed: Option<u64>,
    metric: Option<String>,
}

fn parse_flags(args: &[String]) -> Result<Flags, String> {
    let mut flags =
        Flags { positional: Vec::new(), out: None, json: None, workers: None, seed: None, metric: None };
    let mut iter = args.iter();
    while let Some(arg) = iter.next() {
        let mut take = |name: &str| -> Result<String, String> {
            iter.next().cloned().ok_or_else(|| format!("{name} needs a value"))
        };
        match arg.as_str() {
            "--out" => flags.out = Some(PathBuf::from(take("--out")?)),
            "--json" => flags.json = Some(PathBuf::from(take("--json")?)),
            "--workers" => {
                flags.workers =
                    Some(take("--workers")?.parse().map_err(|_| "--workers needs a positive integer".to_string())?)
            }
            "--seed" => {
                flags.seed = Some(take("--seed")?.parse().map_err(|_| "--seed needs an integer".to_string())?)
            }
            "--metric" => flags.metric = Some(take("--metric")?),
            other if other.starts_with("--") => return Err(format!("unknown flag '{other}'")),
            other => flags.positional.push(other.to_string()),
        }
    }
    Ok(flags)
}

fn cmd_run(args: &[String]) -> ExitCode {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    let [config_path] = flags.positional.as_slice() else {
        return usage_error("run needs exactly one config path");
    };
    let Some(out_path) = flags.out else {
        return usage_error("run needs --out <results.csv>");
    };
    let mut cfg = match load_config(Path::new(config_path)) {
        Ok(cfg) => cfg,
        Err(e) => return fail(e),
    };
    if let Some(seed) = flags.seed {
        cfg.raw.sweep.seeds = vec![seed];
    }
    let workers = flags.workers.unwrap_or(cfg.raw.sweep.workers);
    if workers == 0 {
        return usage_error("--workers must be at least 1");
    }

    let started = Instant::now();
    let records = match run_sweep(&cfg, workers) {
        Ok(records) => records,
        Err(e) => return fail(e),
    };
    let failures = records.iter().filter(|r| !r.error.is_empty()).count();

    if let Err(e) = emit_csv(&records, &out_path) {
        return fail(e);
    }
    if let Some(json_path) = &flags.json {
        if let Err(e) = emit_json(&records, json_path) {
            return fail(e);
        }
    }
    eprintln!(
        "{} records in {:.1}s ({} failed) -> {}",
        records.len(),
        started.elapsed().as_secs_f64(),
        failures,
        out_path.display()
    );
    if failures > 0 {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_list_benchmarks() -> ExitCode {
    for id in bench::list_suite() {
        println!("{id}");
    }
    ExitCode::SUCCESS
}

fn cmd_describe_device(args: &[String]) -> ExitCode {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    let [config_path] = flags.positional.as_slice() else {
        return usage_error("describe-device needs exactly one config path");
    };
    let cfg = match load_config(Path::new(config_path)) {
        Ok(cfg) => cfg,
        Err(e) => return fail(e),
    };
    for topology in &cfg.raw.device.topologies {
        for density in &cfg.raw.device.densities {
            match cfg.build_device(topology, density) {
                Ok(dev) => {
                    let d = connectivity_density(&dev.graph).unwrap_or(0.0);
                    println!(
                        "{} density_target={} qubits={} edges={} density={}",
                        topology.label(),
                        density.label(),
                        dev.graph.num_qubits(),
                        dev.graph.num_edges(),
                        format_float(d)
                    );
                }
                Err(e) => {
                    eprintln!("error: {} density_target={}: {e}", topology.label(), density.label());
                    return ExitCode::from(1);
                }
            }
        }
    }
    ExitCode::SUCCESS
}

fn cmd_summarize(args: &[String]) -> ExitCode {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    let [csv_path] = flags.positional.as_slice() else {
        return usage_error("summarize needs exactly one results.csv path");
    };
    let metric = flags.metric.unwrap_or_else(|| "cost_improvement".to_string());
    let records = match read_csv(Path::new(csv_path)) {
        Ok(records) => records,
        Err(e) => return fail(e),
    };
    match summarize_best_worst(&records, &metric) {
        Ok(table) => {
            print!("{}", table.render());
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}
