//! `innerlab` command line.
//!
//! Exit codes: 0 success, 1 acceptance failure, 2 precondition error,
//! 3 resource, budget or IO error, 4 numerical error, 64 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Arg, ArgAction, ArgMatches, Command as ClapCommand};

use crate::acceptance;
use crate::config::ExperimentConfig;
use crate::experiments::{self, COMMANDS};
use crate::format::ModelSpec;
use crate::parallel::{build_pool, thread_count};
use crate::table::write_csv;
use crate::Error;

fn experiment_command(c: &experiments::Command) -> ClapCommand {
    let mut cmd = ClapCommand::new(c.name)
        .about(c.about)
        .after_help(experiments::help(c.name))
        .arg(
            Arg::new("model")
                .long("model")
                .value_name("FILE")
                .value_parser(clap::value_parser!(PathBuf))
                .help("Model file"),
        )
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .value_parser(clap::value_parser!(PathBuf))
                .help("Experiment config; flags override its values"),
        )
        .arg(
            Arg::new("out")
                .long("out")
                .value_name("FILE")
                .value_parser(clap::value_parser!(PathBuf))
                .help("CSV output (default stdout)"),
        )
        .arg(Arg::new("seed").long("seed").value_parser(clap::value_parser!(u64)).help("Random seed [default: 0]"));
    for (key, default) in c.defaults {
        cmd = cmd.arg(
            Arg::new(*key)
                .long(*key)
                .value_name("VALUE")
                .allow_hyphen_values(true)
                .help(format!("[default: {default}]")),
        );
    }
    cmd
}

pub fn command() -> ClapCommand {
    let mut cmd = ClapCommand::new("innerlab")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Orbit counting experiments for inner functions")
        .subcommand_required(true)
        .arg(
            Arg::new("threads")
                .long("threads")
                .global(true)
                .value_parser(clap::value_parser!(usize))
                .help("Worker threads (default INNERLAB_THREADS, else all cores)"),
        );
    for c in COMMANDS {
        cmd = cmd.subcommand(experiment_command(c));
    }
    cmd.subcommand(
        ClapCommand::new("accept")
            .about("Run the acceptance suite; exit 0 iff every criterion passes")
            .arg(Arg::new("quiet").long("quiet").action(ArgAction::SetTrue).help("Print only failing criteria")),
    )
}

fn config_from(name: &str, m: &ArgMatches) -> Result<ExperimentConfig, Error> {
    let mut cfg = match m.get_one::<PathBuf>("config") {
        Some(p) => {
            let cfg = ExperimentConfig::load(p)?;
            if cfg.command != name {
                return Err(Error::Usage(format!("config is for `{}`, not `{name}`", cfg.command)));
            }
            cfg
        }
        None => ExperimentConfig::new(name),
    };
    if let Some(p) = m.get_one::<PathBuf>("model") {
        cfg.model = Some(ModelSpec::load(p)?);
    }
    if let Some(&s) = m.get_one::<u64>("seed") {
        cfg.seed = s;
    }
    let c = experiments::command(name).expect("subcommands come from the table");
    for (key, _) in c.defaults {
        if let Some(v) = m.get_one::<String>(key) {
            cfg.set(key, v);
        }
    }
    experiments::complete(&mut cfg)?;
    Ok(cfg)
}

fn dispatch(name: &str, m: &ArgMatches, threads: usize) -> Result<i32, Error> {
    let pool = build_pool(threads)?;
    if name == "accept" {
        let quiet = m.get_flag("quiet");
        let outcomes = acceptance::run_all(&pool);
        let mut out = std::io::stdout().lock();
        for o in &outcomes {
            if !quiet || !o.passed() {
                writeln!(out, "{o}").map_err(|e| Error::Io("stdout".into(), e))?;
            }
        }
        let failed = outcomes.iter().filter(|o| !o.passed()).count();
        writeln!(out, "{} of {} criteria passed", outcomes.len() - failed, outcomes.len())
            .map_err(|e| Error::Io("stdout".into(), e))?;
        return Ok(if failed == 0 { 0 } else { 1 });
    }
    let cfg = config_from(name, m)?;
    let table = experiments::run(&cfg, &pool)?;
    match m.get_one::<PathBuf>("out") {
        Some(p) => {
            let mut file =
                std::io::BufWriter::new(std::fs::File::create(p).map_err(|e| Error::Io(p.display().to_string(), e))?);
            write_csv(&mut file, &cfg, &table)?;
            file.flush().map_err(|e| Error::Io(p.display().to_string(), e))?;
        }
        None => write_csv(&mut std::io::stdout().lock(), &cfg, &table)?,
    }
    Ok(0)
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let code = match e.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return code;
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let result = thread_count(sub.get_one::<usize>("threads").copied()).and_then(|t| dispatch(name, sub, t));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
