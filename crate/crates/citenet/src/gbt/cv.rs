//! Monte-Carlo cross-validation of the boosted-tree classifier.
//!
//! Each repetition draws an independent shuffled train/test split from its
//! own deterministic seed (`seed + rep`), fits an ensemble, and scores
//! accuracy, Cohen's kappa, and ROC AUC on the held-out rows. Feature
//! importances are mean absolute SHAP attributions over a capped sample of
//! test rows against a capped background of training rows; the caps keep
//! the exact attribution affordable and are echoed in the report.
//! Repetitions run in parallel but are collected in repetition order, so
//! the report is identical for any thread count.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gbt::{fit, Hyperparameters};
use crate::stats::{accuracy, cohen_kappa, roc_auc};
use crate::util::mean_sd;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvConfig {
    pub reps: usize,
    pub train_fraction: f64,
    pub seed: u64,
    /// cap on background rows used for SHAP attributions
    pub shap_background: usize,
    /// cap on test rows scored for SHAP attributions per repetition
    pub shap_sample: usize,
    pub hyperparameters: Hyperparameters,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            reps: 300,
            train_fraction: 0.75,
            seed: 1,
            shap_background: 100,
            shap_sample: 200,
            hyperparameters: Hyperparameters::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepScores {
    pub accuracy: f64,
    pub kappa: f64,
    pub auc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStat {
    pub mean: f64,
    pub sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Importance {
    pub feature: String,
    /// mean over repetitions of the per-rep mean absolute SHAP
    pub mean_abs_shap: f64,
    /// sd over repetitions of the per-rep mean absolute SHAP
    pub sd_abs_shap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub config: CvConfig,
    pub n_rows: usize,
    pub feature_names: Vec<String>,
    pub reps: Vec<RepScores>,
    pub accuracy: SummaryStat,
    pub kappa: SummaryStat,
    pub auc: SummaryStat,
    /// sorted by mean absolute SHAP, descending; ties by feature name
    pub importances: Vec<Importance>,
}

struct RepOutcome {
    scores: RepScores,
    /// mean absolute SHAP per feature over the sampled test rows
    importances: Vec<f64>,
}

fn run_rep(
    rows: &[Vec<f64>],
    labels: &[bool],
    names: &[String],
    config: &CvConfig,
    rep: usize,
) -> Result<RepOutcome> {
    let n = rows.len();
    let train_n = (n as f64 * config.train_fraction).floor() as usize;
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(rep as u64));
    order.shuffle(&mut rng);
    let (train_idx, test_idx) = order.split_at(train_n);

    let train_rows: Vec<Vec<f64>> = train_idx.iter().map(|&i| rows[i].clone()).collect();
    let train_labels: Vec<bool> = train_idx.iter().map(|&i| labels[i]).collect();
    let model = fit(&train_rows, &train_labels, names, &config.hyperparameters)?;

    let truth: Vec<bool> = test_idx.iter().map(|&i| labels[i]).collect();
    let mut predicted = Vec::with_capacity(test_idx.len());
    let mut scores = Vec::with_capacity(test_idx.len());
    for &i in test_idx {
        let p = model.predict(&rows[i])?;
        scores.push(p);
        predicted.push(p >= 0.5);
    }
    let rep_scores = RepScores {
        accuracy: accuracy(&predicted, &truth)?,
        kappa: cohen_kappa(&predicted, &truth)?,
        auc: roc_auc(&scores, &truth)?,
    };

    let background: Vec<Vec<f64>> = train_idx
        .iter()
        .take(config.shap_background.min(train_idx.len()))
        .map(|&i| rows[i].clone())
        .collect();
    let sample = &test_idx[..config.shap_sample.min(test_idx.len())];
    let mut importances = vec![0.0; names.len()];
    for &i in sample {
        let att = model.shap_values(&rows[i], &background)?;
        for (total, phi) in importances.iter_mut().zip(&att.contributions) {
            *total += phi.abs();
        }
    }
    if !sample.is_empty() {
        for total in importances.iter_mut() {
            *total /= sample.len() as f64;
        }
    }
    Ok(RepOutcome { scores: rep_scores, importances })
}

/// Run Monte-Carlo cross-validation over a labeled feature matrix.
pub fn monte_carlo_cv(
    rows: &[Vec<f64>],
    labels: &[bool],
    feature_names: &[String],
    config: &CvConfig,
) -> Result<EvaluationReport> {
    let n = rows.len();
    if n != labels.len() {
        return Err(Error::LengthMismatch(n, labels.len()));
    }
    let train_n = (n as f64 * config.train_fraction).floor() as usize;
    if train_n == 0 || train_n == n {
        return Err(Error::TableTooSmall { n, fraction: config.train_fraction });
    }
    if config.reps == 0 {
        return Err(Error::BadConfig("cv_reps must be positive".into()));
    }

    let outcomes: Vec<RepOutcome> = (0..config.reps)
        .into_par_iter()
        .map(|rep| run_rep(rows, labels, feature_names, config, rep))
        .collect::<Result<Vec<_>>>()?;

    let column = |f: fn(&RepScores) -> f64| -> Vec<f64> {
        outcomes.iter().map(|o| f(&o.scores)).collect()
    };
    let summarize = |values: &[f64]| {
        let (mean, sd) = mean_sd(values);
        SummaryStat { mean, sd }
    };
    let accuracies = column(|s| s.accuracy);
    let kappas = column(|s| s.kappa);
    let aucs = column(|s| s.auc);

    let mut importances: Vec<Importance> = feature_names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let per_rep: Vec<f64> = outcomes.iter().map(|o| o.importances[j]).collect();
            let (mean, sd) = mean_sd(&per_rep);
            Importance { feature: name.clone(), mean_abs_shap: mean, sd_abs_shap: sd }
        })
        .collect();
    importances.sort_by(|a, b| {
        b.mean_abs_shap
            .partial_cmp(&a.mean_abs_shap)
            .unwrap()
            .then_with(|| a.feature.cmp(&b.feature))
    });

    Ok(EvaluationReport {
        config: config.clone(),
        n_rows: n,
        feature_names: feature_names.to_vec(),
        reps: outcomes.iter().map(|o| o.scores.clone()).collect(),
        accuracy: summarize(&accuracies),
        kappa: summarize(&kappas),
        auc: summarize(&aucs),
        importances,
    })
}
