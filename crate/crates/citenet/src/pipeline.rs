//! File-based pipeline stages.
//!
//! Each stage reads the documented plain-text artifacts of its upstream
//! stages from the output directory, computes one step, and writes its own
//! artifacts with the run configuration echoed at the top, so every output
//! is self-describing and runs are diffable. Stages run sequentially;
//! parallelism inside a stage never affects the bytes written.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::centrality::{metrics_all, rotating_counts, write_metrics, NodeMetrics};
use crate::config::RunConfig;
use crate::corpus::{describe, filter_complete, parse_corpus, Corpus, YearStats};
use crate::error::{Error, Result};
use crate::features::{assemble, label_top_quantile, read_csv, write_csv, FeatureTable};
use crate::features::FEATURE_NAMES;
use crate::gbt::cv::{monte_carlo_cv, EvaluationReport, Importance, SummaryStat};
use crate::gbt::fit;
use crate::graph::{build_author_network, build_publication_network, yearly_author_networks};
use crate::stats::{
    compare_groups, correlation_matrix, split_exception_groups, stars_correlation, stars_groups,
};
use crate::synth::generate;
use crate::text::{
    default_lexicon, default_stopwords, parse_lexicon, parse_stopwords, preprocess, text_metrics,
    CorpusTermTable, Lexicon, Stopwords, TextMetrics,
};
use crate::util::fmt_sig;

pub const FILE_CORPUS: &str = "corpus.jsonl";
pub const FILE_DROP_REPORT: &str = "drop_report.txt";
pub const FILE_DESCRIPTIVES: &str = "descriptives.txt";
pub const FILE_AUTHOR_NETWORK: &str = "author_network.txt";
pub const FILE_PUB_NETWORK: &str = "pub_network.txt";
pub const FILE_AUTHOR_METRICS: &str = "author_metrics.txt";
pub const FILE_PUB_METRICS: &str = "pub_metrics.txt";
pub const FILE_ROTATING: &str = "rotating.txt";
pub const FILE_FEATURES: &str = "features.csv";
pub const FILE_CORRELATIONS: &str = "correlations.csv";
pub const FILE_EVALUATION: &str = "evaluation.json";
pub const FILE_IMPORTANCES: &str = "importances.json";
pub const FILE_MODEL: &str = "model.json";
pub const FILE_GROUPS: &str = "groups.csv";
pub const FILE_REPORT: &str = "report.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Ingest,
    Describe,
    Graphs,
    Metrics,
    Features,
    Correlate,
    Train,
    CompareGroups,
    Synth,
    Report,
}

/// Run one stage under the configured thread count.
pub fn run(stage: Stage, config: &RunConfig) -> Result<()> {
    config.validate()?;
    if config.threads == 0 {
        execute(stage, config)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::BadConfig(format!("thread pool: {e}")))?;
        pool.install(|| execute(stage, config))
    }
}

fn execute(stage: Stage, config: &RunConfig) -> Result<()> {
    match stage {
        Stage::Ingest => ingest(config),
        Stage::Describe => describe_stage(config),
        Stage::Graphs => graphs(config),
        Stage::Metrics => metrics(config),
        Stage::Features => features(config),
        Stage::Correlate => correlate(config),
        Stage::Train => train(config),
        Stage::CompareGroups => compare_groups_stage(config),
        Stage::Synth => synth(config),
        Stage::Report => report(config),
    }
}

fn out_path(config: &RunConfig, name: &str) -> PathBuf {
    Path::new(&config.out_dir).join(name)
}

fn read_required(path: &Path) -> Result<String> {
    if !path.exists() {
        return Err(Error::MissingInput(path.display().to_string()));
    }
    fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))
}

fn write_output(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent.display().to_string(), e))?;
        }
    }
    fs::write(path, contents).map_err(|e| Error::io(path.display().to_string(), e))
}

fn load_ingested_corpus(config: &RunConfig) -> Result<Corpus> {
    let text = read_required(&out_path(config, FILE_CORPUS))?;
    let corpus = parse_corpus(text.as_bytes())?;
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(corpus)
}

fn load_stopwords(config: &RunConfig) -> Result<Stopwords> {
    if config.stopwords.is_empty() {
        return Ok(default_stopwords());
    }
    let text = read_required(Path::new(&config.stopwords))?;
    Ok(parse_stopwords(&text))
}

fn load_lexicon(config: &RunConfig) -> Result<Lexicon> {
    if config.lexicon.is_empty() {
        return Ok(default_lexicon());
    }
    let text = read_required(Path::new(&config.lexicon))?;
    parse_lexicon(text.as_bytes())
}

fn resolve_prediction_year(config: &RunConfig, corpus: &Corpus) -> i32 {
    if config.prediction_year == 0 {
        corpus.year_window.1
    } else {
        config.prediction_year
    }
}

fn all_years(corpus: &Corpus) -> std::collections::HashSet<i32> {
    corpus.years().into_iter().collect()
}

// ---------------------------------------------------------------- stages

fn ingest(config: &RunConfig) -> Result<()> {
    let input = Path::new(&config.corpus);
    let text = read_required(input)?;
    let raw = parse_corpus(text.as_bytes())?;
    let (kept, drop_report) = filter_complete(&raw);

    let mut corpus_out = config.echo_comment().into_bytes();
    kept.serialize_jsonl(&mut corpus_out)
        .map_err(|e| Error::io(FILE_CORPUS.to_string(), e))?;
    write_output(&out_path(config, FILE_CORPUS), &corpus_out)?;

    let mut report_out = config.echo_comment().into_bytes();
    drop_report
        .write_text(&mut report_out)
        .map_err(|e| Error::io(FILE_DROP_REPORT.to_string(), e))?;
    let tail = format!("kept: {}\n", kept.records.len());
    report_out.extend_from_slice(tail.as_bytes());
    write_output(&out_path(config, FILE_DROP_REPORT), &report_out)
}

fn format_year_stats(label: &str, s: &YearStats) -> String {
    format!(
        "{label} {} {} {} {} {} {} {} {} {}\n",
        s.publications,
        s.unique_authors,
        fmt_sig(s.solo_share),
        fmt_sig(s.authors_mean),
        s.authors_max,
        fmt_sig(s.authors_sd),
        fmt_sig(s.citations_mean),
        s.citations_max,
        fmt_sig(s.citations_sd),
    )
}

fn describe_stage(config: &RunConfig) -> Result<()> {
    let corpus = load_ingested_corpus(config)?;
    let stats = describe(&corpus)?;
    let mut out = config.echo_comment();
    out.push_str(
        "# columns: year publications unique_authors solo_share \
         authors_mean authors_max authors_sd citations_mean citations_max citations_sd\n",
    );
    for (year, s) in &stats.per_year {
        out.push_str(&format_year_stats(&year.to_string(), s));
    }
    out.push_str(&format_year_stats("total", &stats.total));
    write_output(&out_path(config, FILE_DESCRIPTIVES), out.as_bytes())
}

fn graphs(config: &RunConfig) -> Result<()> {
    let corpus = load_ingested_corpus(config)?;
    let years = all_years(&corpus);
    for (file, graph) in [
        (FILE_AUTHOR_NETWORK, build_author_network(&corpus, &years)?),
        (FILE_PUB_NETWORK, build_publication_network(&corpus, &years)?),
    ] {
        let mut out = config.echo_comment().into_bytes();
        graph
            .write_edge_list(&mut out)
            .map_err(|e| Error::io(file.to_string(), e))?;
        write_output(&out_path(config, file), &out)?;
    }
    Ok(())
}

fn metrics(config: &RunConfig) -> Result<()> {
    let corpus = load_ingested_corpus(config)?;
    let years = all_years(&corpus);
    for (file, graph) in [
        (FILE_AUTHOR_METRICS, build_author_network(&corpus, &years)?),
        (FILE_PUB_METRICS, build_publication_network(&corpus, &years)?),
    ] {
        let node_metrics = metrics_all(&graph);
        let mut out = config.echo_comment().into_bytes();
        write_metrics(&node_metrics, &mut out).map_err(|e| Error::io(file.to_string(), e))?;
        write_output(&out_path(config, file), &out)?;
    }

    let yearly = yearly_author_networks(&corpus)?;
    let rotating = rotating_counts(&yearly, config.epsilon)?;
    let mut authors: Vec<&String> = rotating.keys().collect();
    authors.sort();
    let mut out = config.echo_comment();
    for author in authors {
        writeln!(out, "{author} {}", rotating[author]).expect("string write");
    }
    write_output(&out_path(config, FILE_ROTATING), out.as_bytes())
}

/// Parse a metric dump written by the metrics stage back into a map.
fn read_metrics_file(path: &Path) -> Result<HashMap<String, NodeMetrics>> {
    let text = read_required(path)?;
    let mut out = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::Malformed {
                line: idx + 1,
                msg: format!("bad number `{s}` in {}", path.display()),
            })
        };
        if fields.len() != 5 {
            return Err(Error::Malformed {
                line: idx + 1,
                msg: format!("expected 5 fields in {}", path.display()),
            });
        }
        out.insert(
            fields[0].to_string(),
            NodeMetrics {
                node_id: fields[0].to_string(),
                degree_w: parse(fields[1])?,
                betweenness_norm: parse(fields[2])?,
                closeness_norm: parse(fields[3])?,
                constraint: parse(fields[4])?,
            },
        );
    }
    Ok(out)
}

fn read_rotating_file(path: &Path) -> Result<HashMap<String, u32>> {
    let text = read_required(path)?;
    let mut out = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (author, count) = line.split_once(' ').ok_or_else(|| Error::Malformed {
            line: idx + 1,
            msg: format!("expected `author count` in {}", path.display()),
        })?;
        let count: u32 = count.trim().parse().map_err(|_| Error::Malformed {
            line: idx + 1,
            msg: format!("bad count `{count}` in {}", path.display()),
        })?;
        out.insert(author.to_string(), count);
    }
    Ok(out)
}

fn compute_text_metrics(
    corpus: &Corpus,
    stopwords: &Stopwords,
    lexicon: &Lexicon,
) -> Result<HashMap<String, TextMetrics>> {
    let tokenized: Vec<_> = corpus
        .records
        .iter()
        .map(|r| preprocess(&r.abstract_text, stopwords))
        .collect();
    let table = CorpusTermTable::build(tokenized.iter().map(|t| t.tokens.as_slice()));
    let mut out = HashMap::new();
    for (rec, tok) in corpus.records.iter().zip(&tokenized) {
        if let Some(m) = text_metrics(&rec.abstract_text, tok, lexicon, &table)? {
            out.insert(rec.pub_id.clone(), m);
        }
    }
    Ok(out)
}

fn features(config: &RunConfig) -> Result<()> {
    let corpus = load_ingested_corpus(config)?;
    let author_metrics = read_metrics_file(&out_path(config, FILE_AUTHOR_METRICS))?;
    let pub_metrics = read_metrics_file(&out_path(config, FILE_PUB_METRICS))?;
    let rotating = read_rotating_file(&out_path(config, FILE_ROTATING))?;
    let stopwords = load_stopwords(config)?;
    let lexicon = load_lexicon(config)?;
    let text = compute_text_metrics(&corpus, &stopwords, &lexicon)?;

    let year = resolve_prediction_year(config, &corpus);
    let mut table = assemble(
        &corpus,
        &pub_metrics,
        &author_metrics,
        &rotating,
        &text,
        year,
        config.aggregation(),
    )?;
    let summary = label_top_quantile(&mut table, config.label_q)?;

    let mut echo = config.echo_lines();
    echo.push(format!("resolved_prediction_year={year}"));
    echo.push(format!("label_threshold={}", fmt_sig(summary.threshold)));
    echo.push(format!("label_positives={}", summary.positives));
    echo.push(format!("label_degenerate={}", summary.degenerate));
    let mut out = Vec::new();
    write_csv(&table, &echo, &mut out).map_err(|e| Error::io(FILE_FEATURES.to_string(), e))?;
    write_output(&out_path(config, FILE_FEATURES), &out)
}

fn load_features(config: &RunConfig) -> Result<FeatureTable> {
    let text = read_required(&out_path(config, FILE_FEATURES))?;
    let table = read_csv(text.as_bytes())?;
    if table.rows.is_empty() {
        return Err(Error::NoRows);
    }
    Ok(table)
}

fn correlate(config: &RunConfig) -> Result<()> {
    let table = load_features(config)?;
    let matrix = correlation_matrix(&table)?;
    let mut out = config.echo_comment();
    out.push_str("var_a,var_b,rho,p,stars\n");
    for i in 0..matrix.names.len() {
        for j in i + 1..matrix.names.len() {
            let (rho, p, stars) = match (matrix.rho[i][j], matrix.p[i][j]) {
                (Some(rho), Some(p)) => (fmt_sig(rho), fmt_sig(p), stars_correlation(p)),
                _ => ("NA".to_string(), "NA".to_string(), ""),
            };
            writeln!(out, "{},{},{rho},{p},{stars}", matrix.names[i], matrix.names[j])
                .expect("string write");
        }
    }
    write_output(&out_path(config, FILE_CORRELATIONS), out.as_bytes())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TrainOutput {
    pub config: RunConfig,
    pub evaluation: EvaluationReport,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ImportancesOutput {
    pub config: RunConfig,
    pub importances: Vec<Importance>,
}

fn to_pretty_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("output serializes");
    out.push(b'\n');
    out
}

fn train(config: &RunConfig) -> Result<()> {
    let table = load_features(config)?;
    let rows: Vec<Vec<f64>> = table.rows.iter().map(|r| r.x.to_vec()).collect();
    let labels: Vec<bool> = table.rows.iter().map(|r| r.label).collect();
    let names: Vec<String> = FEATURE_NAMES.iter().map(|s| s.to_string()).collect();

    let evaluation = monte_carlo_cv(&rows, &labels, &names, &config.cv_config())?;
    let importances = evaluation.importances.clone();
    let output = TrainOutput { config: config.clone(), evaluation };
    write_output(&out_path(config, FILE_EVALUATION), &to_pretty_json(&output))?;
    write_output(
        &out_path(config, FILE_IMPORTANCES),
        &to_pretty_json(&ImportancesOutput { config: config.clone(), importances }),
    )?;

    // final model on the full table, reloadable from its JSON dump
    let model = fit(&rows, &labels, &names, &config.hyperparameters())?;
    write_output(&out_path(config, FILE_MODEL), &to_pretty_json(&model))
}

fn compare_groups_stage(config: &RunConfig) -> Result<()> {
    let table = load_features(config)?;
    let (low, high) = split_exception_groups(&table, config.low_sjr_q)?;
    let comparisons = compare_groups(&table, &low, &high)?;
    let mut out = config.echo_comment();
    writeln!(out, "# group_low_n={}", low.len()).expect("string write");
    writeln!(out, "# group_high_n={}", high.len()).expect("string write");
    out.push_str("feature,mean_low_sjr,mean_high_sjr,t,p,stars\n");
    for c in comparisons {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            c.feature,
            fmt_sig(c.mean_a),
            fmt_sig(c.mean_b),
            fmt_sig(c.t),
            fmt_sig(c.p),
            stars_groups(c.p)
        )
        .expect("string write");
    }
    write_output(&out_path(config, FILE_GROUPS), out.as_bytes())
}

fn synth(config: &RunConfig) -> Result<()> {
    let corpus = generate(&config.synth_config())?;
    let mut out = config.echo_comment().into_bytes();
    corpus
        .serialize_jsonl(&mut out)
        .map_err(|e| Error::io(config.corpus.clone(), e))?;
    write_output(Path::new(&config.corpus), &out)
}

#[derive(Debug, Serialize, Deserialize)]
struct Headline {
    n_rows: usize,
    accuracy: SummaryStat,
    kappa: SummaryStat,
    auc: SummaryStat,
    top_features: Vec<Importance>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ReportOutput {
    config: RunConfig,
    files: Vec<String>,
    headline: Headline,
}

fn report(config: &RunConfig) -> Result<()> {
    // the bundle requires every table-shaped artifact to be present
    for file in [FILE_DESCRIPTIVES, FILE_CORRELATIONS, FILE_IMPORTANCES, FILE_GROUPS] {
        let path = out_path(config, file);
        if !path.exists() {
            return Err(Error::MissingInput(path.display().to_string()));
        }
    }
    let evaluation_text = read_required(&out_path(config, FILE_EVALUATION))?;
    let train_output: TrainOutput = serde_json::from_str(&evaluation_text)
        .map_err(|e| Error::Malformed { line: 0, msg: format!("{FILE_EVALUATION}: {e}") })?;
    let evaluation = train_output.evaluation;
    let output = ReportOutput {
        config: config.clone(),
        files: vec![
            FILE_DESCRIPTIVES.to_string(),
            FILE_CORRELATIONS.to_string(),
            FILE_EVALUATION.to_string(),
            FILE_IMPORTANCES.to_string(),
            FILE_GROUPS.to_string(),
        ],
        headline: Headline {
            n_rows: evaluation.n_rows,
            accuracy: evaluation.accuracy,
            kappa: evaluation.kappa,
            auc: evaluation.auc,
            top_features: evaluation.importances.into_iter().take(5).collect(),
        },
    };
    write_output(&out_path(config, FILE_REPORT), &to_pretty_json(&output))
}

/// All stages of the standard run, in execution order (synth excluded).
pub const STANDARD_STAGES: [Stage; 9] = [
    Stage::Ingest,
    Stage::Describe,
    Stage::Graphs,
    Stage::Metrics,
    Stage::Features,
    Stage::Correlate,
    Stage::Train,
    Stage::CompareGroups,
    Stage::Report,
];
