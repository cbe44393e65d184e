//! Spearman rank correlations, classification metrics (accuracy, Cohen's
//! kappa, ROC AUC), Welch t-tests, and the low-SJR/top-journal group split.
//!
//! p-values use t-approximations: Spearman's t = rho * sqrt((n-2)/(1-rho^2))
//! and Welch-Satterthwaite degrees of freedom, both evaluated through the
//! Student-t CDF.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::features::{FeatureTable, FEATURE_NAMES, N_PREDICTORS};
use crate::util::nearest_rank_quantile;

/// Two-sided p-value from a t statistic with the given degrees of freedom.
pub fn t_two_sided_p(t: f64, df: f64) -> f64 {
    if !t.is_finite() {
        return 0.0;
    }
    let dist = StudentsT::new(0.0, 1.0, df).expect("df > 0");
    2.0 * (1.0 - dist.cdf(t.abs()))
}

/// Fractional (average) ranks, 1-based, ties sharing the mean rank.
pub fn fractional_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance("constant series".to_string()));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Spearman's rank correlation with a t-approximation p-value.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 3 {
        return Err(Error::TooShort { need: 3, got: x.len() });
    }
    let rho = pearson(&fractional_ranks(x), &fractional_ranks(y))?;
    let n = x.len() as f64;
    let p = if (1.0 - rho * rho) < 1e-15 {
        0.0
    } else {
        let t = rho * ((n - 2.0) / (1.0 - rho * rho)).sqrt();
        t_two_sided_p(t, n - 2.0)
    };
    Ok((rho, p))
}

/// Pairwise Spearman matrix over Y (citations) plus the 16 predictors.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    /// rho[i][j]; None where a series has zero variance.
    pub rho: Vec<Vec<Option<f64>>>,
    pub p: Vec<Vec<Option<f64>>>,
}

/// Column names of the correlation matrix: Y then the predictors.
pub fn correlation_variables() -> Vec<String> {
    let mut names = vec!["citations".to_string()];
    names.extend(FEATURE_NAMES.iter().map(|s| s.to_string()));
    names
}

fn matrix_columns(table: &FeatureTable) -> Vec<Vec<f64>> {
    let mut cols: Vec<Vec<f64>> =
        (0..1 + N_PREDICTORS).map(|_| Vec::with_capacity(table.rows.len())).collect();
    for row in &table.rows {
        cols[0].push(row.citations as f64);
        for (i, &v) in row.x.iter().enumerate() {
            cols[i + 1].push(v);
        }
    }
    cols
}

pub fn correlation_matrix(table: &FeatureTable) -> Result<CorrelationMatrix> {
    if table.rows.len() < 3 {
        return Err(Error::TooShort { need: 3, got: table.rows.len() });
    }
    let cols = matrix_columns(table);
    let k = cols.len();
    let mut rho = vec![vec![None; k]; k];
    let mut p = vec![vec![None; k]; k];
    for i in 0..k {
        rho[i][i] = Some(1.0);
        p[i][i] = Some(0.0);
        for j in (i + 1)..k {
            match spearman(&cols[i], &cols[j]) {
                Ok((r, pv)) => {
                    rho[i][j] = Some(r);
                    rho[j][i] = Some(r);
                    p[i][j] = Some(pv);
                    p[j][i] = Some(pv);
                }
                Err(Error::ZeroVariance(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(CorrelationMatrix { names: correlation_variables(), rho, p })
}

/// Significance stars matching the correlation-table convention.
pub fn stars_correlation(p: f64) -> &'static str {
    if p < 0.001 {
        "***"
    } else if p < 0.05 {
        "**"
    } else if p < 0.1 {
        "*"
    } else {
        ""
    }
}

/// Significance stars matching the group-comparison convention.
pub fn stars_groups(p: f64) -> &'static str {
    if p < 0.001 {
        "***"
    } else if p < 0.05 {
        "*"
    } else {
        ""
    }
}

/// Fraction of predictions matching the truth.
pub fn accuracy(predictions: &[bool], truth: &[bool]) -> Result<f64> {
    if predictions.len() != truth.len() {
        return Err(Error::LengthMismatch(predictions.len(), truth.len()));
    }
    if predictions.is_empty() {
        return Err(Error::TooShort { need: 1, got: 0 });
    }
    let correct = predictions.iter().zip(truth).filter(|(a, b)| a == b).count();
    Ok(correct as f64 / predictions.len() as f64)
}

/// Cohen's kappa with marginal-product expected agreement.
pub fn cohen_kappa(predictions: &[bool], truth: &[bool]) -> Result<f64> {
    if predictions.len() != truth.len() {
        return Err(Error::LengthMismatch(predictions.len(), truth.len()));
    }
    let n = truth.len() as f64;
    let truth_pos = truth.iter().filter(|&&t| t).count() as f64;
    if truth_pos == 0.0 || truth_pos == n {
        return Err(Error::SingleClass);
    }
    let pred_pos = predictions.iter().filter(|&&p| p).count() as f64;
    let po = accuracy(predictions, truth)?;
    let pe = (truth_pos / n) * (pred_pos / n) + ((n - truth_pos) / n) * ((n - pred_pos) / n);
    Ok((po - pe) / (1.0 - pe))
}

/// Area under the ROC curve by the rank statistic, with half credit for
/// score ties.
pub fn roc_auc(scores: &[f64], truth: &[bool]) -> Result<f64> {
    if scores.len() != truth.len() {
        return Err(Error::LengthMismatch(scores.len(), truth.len()));
    }
    let n_pos = truth.iter().filter(|&&t| t).count();
    let n_neg = truth.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }
    let ranks = fractional_ranks(scores);
    let rank_sum: f64 = ranks.iter().zip(truth).filter(|(_, &t)| t).map(|(r, _)| r).sum();
    let np = n_pos as f64;
    Ok((rank_sum - np * (np + 1.0) / 2.0) / (np * n_neg as f64))
}

/// Welch's unequal-variance t-test, two-sided.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::TooShort { need: 2, got: a.len().min(b.len()) });
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let ma = a.iter().sum::<f64>() / na;
    let mb = b.iter().sum::<f64>() / nb;
    let va = a.iter().map(|v| (v - ma) * (v - ma)).sum::<f64>() / (na - 1.0);
    let vb = b.iter().map(|v| (v - mb) * (v - mb)).sum::<f64>() / (nb - 1.0);
    if va == 0.0 && vb == 0.0 {
        if ma == mb {
            return Ok((0.0, 1.0));
        }
        return Err(Error::ZeroVariance("both groups constant".to_string()));
    }
    let se2 = va / na + vb / nb;
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2
        / (va * va / (na * na * (na - 1.0)) + vb * vb / (nb * nb * (nb - 1.0)));
    Ok((t, t_two_sided_p(t, df)))
}

/// Indices of label-positive rows published in bottom-`low_q` SJR journals
/// (group A) and in top-quartile SJR journals (group B). Quantiles are taken
/// over the whole table's SJR distribution.
pub fn split_exception_groups(
    table: &FeatureTable,
    low_q: f64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(low_q > 0.0 && low_q <= 0.75) {
        return Err(Error::BadQuantile(low_q));
    }
    let sjr: Vec<f64> = table.rows.iter().map(|r| r.sjr()).collect();
    if sjr.is_empty() {
        return Err(Error::NoRows);
    }
    let low_cut = nearest_rank_quantile(&sjr, low_q);
    let high_cut = nearest_rank_quantile(&sjr, 0.75);
    let mut low = Vec::new();
    let mut high = Vec::new();
    for (i, row) in table.rows.iter().enumerate() {
        if !row.label {
            continue;
        }
        if row.sjr() < low_cut {
            low.push(i);
        } else if row.sjr() > high_cut {
            high.push(i);
        }
    }
    if low.is_empty() {
        return Err(Error::EmptyGroup("low-SJR highly cited".to_string()));
    }
    if high.is_empty() {
        return Err(Error::EmptyGroup("top-journal highly cited".to_string()));
    }
    Ok((low, high))
}

/// Per-feature Welch comparison between two row groups.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupComparison {
    pub feature: String,
    pub mean_a: f64,
    pub mean_b: f64,
    pub t: f64,
    pub p: f64,
}

pub fn compare_groups(
    table: &FeatureTable,
    group_a: &[usize],
    group_b: &[usize],
) -> Result<Vec<GroupComparison>> {
    let mut out = Vec::with_capacity(N_PREDICTORS);
    for (fi, name) in FEATURE_NAMES.iter().enumerate() {
        let a: Vec<f64> = group_a.iter().map(|&i| table.rows[i].x[fi]).collect();
        let b: Vec<f64> = group_b.iter().map(|&i| table.rows[i].x[fi]).collect();
        let (ma, _) = crate::util::mean_sd(&a);
        let (mb, _) = crate::util::mean_sd(&b);
        let (t, p) = match welch_t_test(&a, &b) {
            Ok(tp) => tp,
            Err(Error::ZeroVariance(_)) => (0.0, 1.0),
            Err(e) => return Err(e),
        };
        out.push(GroupComparison { feature: name.to_string(), mean_a: ma, mean_b: mb, t, p });
    }
    Ok(out)
}
