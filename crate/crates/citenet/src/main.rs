//! Command-line pipeline driver.
//!
//! Configuration is a flat key=value file (`--config`); every key is also
//! exposed as a same-named long flag that overrides the file value. Exit
//! codes: 0 success, 1 usage or configuration error, 2 data error.

use std::path::Path;
use std::process::ExitCode;

use clap::{Arg, ArgMatches, Command};

use citenet::config::RunConfig;
use citenet::pipeline::{run, Stage};
use citenet::Result;

const STAGES: [(&str, Stage, &str); 10] = [
    ("synth", Stage::Synth, "Generate a synthetic corpus at the configured corpus path"),
    ("ingest", Stage::Ingest, "Parse and filter the corpus into the output directory"),
    ("describe", Stage::Describe, "Write per-year and pooled descriptive statistics"),
    ("graphs", Stage::Graphs, "Write author and publication network edge lists"),
    ("metrics", Stage::Metrics, "Write centrality metrics and rotating-leadership counts"),
    ("features", Stage::Features, "Assemble the labeled per-publication feature table"),
    ("correlate", Stage::Correlate, "Write pairwise Spearman correlations of the features"),
    ("train", Stage::Train, "Run Monte-Carlo cross-validation and SHAP importances"),
    (
        "compare-groups",
        Stage::CompareGroups,
        "Compare highly cited publications from low- vs top-SJR journals",
    ),
    ("report", Stage::Report, "Bundle the analysis outputs into report.json"),
];

fn cli() -> Command {
    let mut cmd = Command::new("citenet")
        .about(
            "Bibliometric network and abstract-text analytics with \
             boosted-tree citation-impact prediction",
        )
        .subcommand_required(true)
        .arg_required_else_help(true)
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .global(true)
                .help("Flat key=value configuration file"),
        );
    let defaults: std::collections::HashMap<String, String> =
        RunConfig::default().echo_pairs().into_iter().collect();
    for key in RunConfig::keys() {
        let help = match defaults.get(&key).map(String::as_str) {
            None => format!("Override config key `{key}`"),
            Some("") => format!("Override config key `{key}` (default: built-in)"),
            Some(default) => format!("Override config key `{key}` (default: {default})"),
        };
        cmd = cmd.arg(
            Arg::new(key.clone())
                .long(key)
                .value_name("VALUE")
                .global(true)
                .help(help),
        );
    }
    for (name, _, about) in STAGES {
        cmd = cmd.subcommand(Command::new(name).about(about));
    }
    cmd
}

fn build_config(matches: &ArgMatches) -> Result<RunConfig> {
    let mut config = match matches.get_one::<String>("config") {
        Some(path) => RunConfig::from_file(Path::new(path))?,
        None => RunConfig::default(),
    };
    for key in RunConfig::keys() {
        if let Some(value) = matches.get_one::<String>(&key) {
            config.set(&key, value)?;
        }
    }
    config.validate()?;
    Ok(config)
}

fn main() -> ExitCode {
    let matches = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let config = match build_config(&matches) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let (name, _) = matches.subcommand().expect("subcommand required");
    let stage = STAGES
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, s, _)| *s)
        .expect("subcommands mirror the stage table");
    match run(stage, &config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
