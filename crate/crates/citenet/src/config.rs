//! Flat key=value run configuration shared by every pipeline stage.
//!
//! A config file holds `key = value` lines (`#` comments allowed); every
//! key can also be set from the command line. The effective configuration
//! is echoed into each output file so results are self-describing.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{Aggregation, AggregationConfig};
use crate::gbt::cv::CvConfig;
use crate::gbt::Hyperparameters;
use crate::synth::SynthConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    // paths
    pub corpus: String,
    /// empty string selects the built-in lexicon
    pub lexicon: String,
    /// empty string selects the built-in stop-word list
    pub stopwords: String,
    pub out_dir: String,

    // feature assembly
    /// 0 selects the latest corpus year
    pub prediction_year: i32,
    pub label_q: f64,
    pub agg_centrality: Aggregation,
    pub agg_rotating: Aggregation,
    pub epsilon: f64,

    // evaluation
    pub cv_reps: usize,
    pub train_fraction: f64,
    pub rounds: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub shap_background: usize,
    pub shap_sample: usize,
    pub low_sjr_q: f64,
    pub seed: u64,
    /// Worker threads; 0 lets the thread pool pick its own size.
    /// Execution-only: results are independent of it, so it is excluded
    /// from the config echo and the serialized config.
    #[serde(skip)]
    pub threads: usize,

    // synthetic corpus generation
    pub synth_pubs: usize,
    pub synth_authors: usize,
    pub synth_journals: usize,
    pub synth_year_start: i32,
    pub synth_year_end: i32,
    pub synth_vocab: usize,
    pub synth_mean_byline: f64,
    pub synth_abstract_min: usize,
    pub synth_abstract_max: usize,
    pub synth_sjr_sigma: f64,
    pub synth_intercept: f64,
    pub synth_noise_sd: f64,
    pub synth_citation_cap: u64,
    pub synth_beta_sjr: f64,
    pub synth_beta_n_authors: f64,
    pub synth_beta_rotating: f64,
    pub synth_beta_abstract_length: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let synth = SynthConfig::default();
        RunConfig {
            corpus: "corpus.jsonl".into(),
            lexicon: String::new(),
            stopwords: String::new(),
            out_dir: "out".into(),
            prediction_year: 0,
            label_q: 0.25,
            agg_centrality: Aggregation::Mean,
            agg_rotating: Aggregation::Sum,
            epsilon: 0.1,
            cv_reps: 300,
            train_fraction: 0.75,
            rounds: 100,
            max_depth: 4,
            learning_rate: 0.1,
            lambda: 1.0,
            gamma: 0.0,
            shap_background: 100,
            shap_sample: 200,
            low_sjr_q: 0.25,
            seed: 1,
            threads: 0,
            synth_pubs: synth.n_pubs,
            synth_authors: synth.n_authors,
            synth_journals: synth.n_journals,
            synth_year_start: synth.year_start,
            synth_year_end: synth.year_end,
            synth_vocab: synth.vocab_size,
            synth_mean_byline: synth.mean_byline,
            synth_abstract_min: synth.abstract_min_words,
            synth_abstract_max: synth.abstract_max_words,
            synth_sjr_sigma: synth.sjr_sigma,
            synth_intercept: synth.intercept,
            synth_noise_sd: synth.noise_sd,
            synth_citation_cap: synth.citation_cap,
            synth_beta_sjr: 0.0,
            synth_beta_n_authors: 0.0,
            synth_beta_rotating: 0.0,
            synth_beta_abstract_length: 0.0,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::BadConfig(format!("key `{key}`: cannot parse `{value}`")))
}

impl RunConfig {
    /// Set one key from its textual value; used by both the config-file
    /// parser and command-line overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "corpus" => self.corpus = value.to_string(),
            "lexicon" => self.lexicon = value.to_string(),
            "stopwords" => self.stopwords = value.to_string(),
            "out_dir" => self.out_dir = value.to_string(),
            "prediction_year" => self.prediction_year = parse_value(key, value)?,
            "label_q" => self.label_q = parse_value(key, value)?,
            "agg_centrality" => self.agg_centrality = Aggregation::parse(value)?,
            "agg_rotating" => self.agg_rotating = Aggregation::parse(value)?,
            "epsilon" => self.epsilon = parse_value(key, value)?,
            "cv_reps" => self.cv_reps = parse_value(key, value)?,
            "train_fraction" => self.train_fraction = parse_value(key, value)?,
            "rounds" => self.rounds = parse_value(key, value)?,
            "max_depth" => self.max_depth = parse_value(key, value)?,
            "learning_rate" => self.learning_rate = parse_value(key, value)?,
            "lambda" => self.lambda = parse_value(key, value)?,
            "gamma" => self.gamma = parse_value(key, value)?,
            "shap_background" => self.shap_background = parse_value(key, value)?,
            "shap_sample" => self.shap_sample = parse_value(key, value)?,
            "low_sjr_q" => self.low_sjr_q = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "threads" => self.threads = parse_value(key, value)?,
            "synth_pubs" => self.synth_pubs = parse_value(key, value)?,
            "synth_authors" => self.synth_authors = parse_value(key, value)?,
            "synth_journals" => self.synth_journals = parse_value(key, value)?,
            "synth_year_start" => self.synth_year_start = parse_value(key, value)?,
            "synth_year_end" => self.synth_year_end = parse_value(key, value)?,
            "synth_vocab" => self.synth_vocab = parse_value(key, value)?,
            "synth_mean_byline" => self.synth_mean_byline = parse_value(key, value)?,
            "synth_abstract_min" => self.synth_abstract_min = parse_value(key, value)?,
            "synth_abstract_max" => self.synth_abstract_max = parse_value(key, value)?,
            "synth_sjr_sigma" => self.synth_sjr_sigma = parse_value(key, value)?,
            "synth_intercept" => self.synth_intercept = parse_value(key, value)?,
            "synth_noise_sd" => self.synth_noise_sd = parse_value(key, value)?,
            "synth_citation_cap" => self.synth_citation_cap = parse_value(key, value)?,
            "synth_beta_sjr" => self.synth_beta_sjr = parse_value(key, value)?,
            "synth_beta_n_authors" => self.synth_beta_n_authors = parse_value(key, value)?,
            "synth_beta_rotating" => self.synth_beta_rotating = parse_value(key, value)?,
            "synth_beta_abstract_length" => {
                self.synth_beta_abstract_length = parse_value(key, value)?
            }
            _ => return Err(Error::BadConfig(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Parse a flat key=value config text over the defaults.
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut config = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::BadConfig(format!("line {}: expected key=value, got `{line}`", i + 1))
            })?;
            config.set(key.trim(), value.trim())?;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text =
            fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        RunConfig::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::BadConfig(msg));
        if !(self.label_q > 0.0 && self.label_q < 1.0) {
            return bad(format!("label_q {} outside (0,1)", self.label_q));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return bad(format!("train_fraction {} outside (0,1)", self.train_fraction));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return bad(format!("epsilon {} must be positive", self.epsilon));
        }
        if !(self.low_sjr_q > 0.0 && self.low_sjr_q <= 0.75) {
            return bad(format!("low_sjr_q {} outside (0,0.75]", self.low_sjr_q));
        }
        if self.learning_rate.is_nan() || self.learning_rate <= 0.0 {
            return bad(format!("learning_rate {} must be positive", self.learning_rate));
        }
        if self.lambda < 0.0 || self.gamma < 0.0 {
            return bad("lambda and gamma must be non-negative".into());
        }
        Ok(())
    }

    /// Ordered (key, value) pairs for the config echo embedded in outputs.
    pub fn echo_pairs(&self) -> Vec<(String, String)> {
        let mut pairs: Vec<(String, String)> = Vec::new();
        let json = serde_json::to_value(self).expect("config serializes");
        let object: BTreeMap<String, serde_json::Value> =
            serde_json::from_value(json).expect("config is a flat object");
        for (key, value) in object {
            let rendered = match value {
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            };
            pairs.push((key, rendered));
        }
        pairs
    }

    /// Keys accepted by `set`, for generating the command-line flags.
    pub fn keys() -> Vec<String> {
        let mut keys: Vec<String> =
            RunConfig::default().echo_pairs().into_iter().map(|(k, _)| k).collect();
        keys.push("threads".to_string());
        keys
    }

    /// `key=value` lines for the config echo.
    pub fn echo_lines(&self) -> Vec<String> {
        self.echo_pairs().into_iter().map(|(k, v)| format!("{k}={v}")).collect()
    }

    /// `# key=value` comment block for text and CSV outputs.
    pub fn echo_comment(&self) -> String {
        let mut out = String::new();
        for line in self.echo_lines() {
            writeln!(out, "# {line}").expect("string write");
        }
        out
    }

    pub fn aggregation(&self) -> AggregationConfig {
        AggregationConfig { centrality: self.agg_centrality, rotating: self.agg_rotating }
    }

    pub fn hyperparameters(&self) -> Hyperparameters {
        Hyperparameters {
            rounds: self.rounds,
            max_depth: self.max_depth,
            learning_rate: self.learning_rate,
            lambda: self.lambda,
            gamma: self.gamma,
        }
    }

    pub fn cv_config(&self) -> CvConfig {
        CvConfig {
            reps: self.cv_reps,
            train_fraction: self.train_fraction,
            seed: self.seed,
            shap_background: self.shap_background,
            shap_sample: self.shap_sample,
            hyperparameters: self.hyperparameters(),
        }
    }

    pub fn synth_config(&self) -> SynthConfig {
        let mut betas = BTreeMap::new();
        for (key, beta) in [
            ("sjr", self.synth_beta_sjr),
            ("n_authors", self.synth_beta_n_authors),
            ("rotating", self.synth_beta_rotating),
            ("abstract_length", self.synth_beta_abstract_length),
        ] {
            if beta != 0.0 {
                betas.insert(key.to_string(), beta);
            }
        }
        SynthConfig {
            n_pubs: self.synth_pubs,
            n_authors: self.synth_authors,
            n_journals: self.synth_journals,
            year_start: self.synth_year_start,
            year_end: self.synth_year_end,
            vocab_size: self.synth_vocab,
            mean_byline: self.synth_mean_byline,
            abstract_min_words: self.synth_abstract_min,
            abstract_max_words: self.synth_abstract_max,
            sjr_sigma: self.synth_sjr_sigma,
            epsilon: self.epsilon,
            intercept: self.synth_intercept,
            noise_sd: self.synth_noise_sd,
            citation_cap: self.synth_citation_cap,
            betas,
            seed: self.seed,
        }
    }
}
