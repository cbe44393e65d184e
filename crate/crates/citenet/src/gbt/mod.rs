//! Gradient-boosted decision trees for the binary top-quantile task:
//! logistic loss, exact greedy split search with deterministic
//! tie-breaking, Monte-Carlo cross-validation, and exact interventional
//! SHAP attributions.

pub mod cv;
pub mod shap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TreeNode {
    Internal {
        feature: usize,
        threshold: f64,
        /// taken when feature value < threshold
        left: Box<TreeNode>,
        right: Box<TreeNode>,
        /// training hessian sum at this node
        cover: f64,
    },
    Leaf {
        weight: f64,
        cover: f64,
    },
}

impl TreeNode {
    /// Raw leaf weight for a row (before learning-rate scaling).
    pub fn evaluate(&self, row: &[f64]) -> f64 {
        match self {
            TreeNode::Leaf { weight, .. } => *weight,
            TreeNode::Internal { feature, threshold, left, right, .. } => {
                if row[*feature] < *threshold {
                    left.evaluate(row)
                } else {
                    right.evaluate(row)
                }
            }
        }
    }

    pub fn max_depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { left, right, .. } => 1 + left.max_depth().max(right.max_depth()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeEnsemble {
    /// format version of the serialized dump
    pub version: u32,
    pub trees: Vec<TreeNode>,
    pub learning_rate: f64,
    /// log-odds of the training positive rate
    pub base_score: f64,
    pub feature_names: Vec<String>,
}

impl TreeEnsemble {
    pub fn margin(&self, row: &[f64]) -> Result<f64> {
        if row.len() < self.feature_names.len() {
            return Err(Error::MissingFeature(row.len()));
        }
        let mut m = self.base_score;
        for tree in &self.trees {
            m += self.learning_rate * tree.evaluate(row);
        }
        Ok(m)
    }

    /// Probability of the positive class.
    pub fn predict(&self, row: &[f64]) -> Result<f64> {
        Ok(logistic(self.margin(row)?))
    }

    pub fn predict_label(&self, row: &[f64]) -> Result<bool> {
        Ok(self.predict(row)? >= 0.5)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ensemble serializes")
    }

    pub fn from_json(json: &str) -> Result<TreeEnsemble> {
        serde_json::from_str(json)
            .map_err(|e| Error::Malformed { line: 0, msg: format!("ensemble dump: {e}") })
    }
}

pub fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    pub rounds: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
    /// L2 regularization on leaf weights
    pub lambda: f64,
    /// minimum gain to split
    pub gamma: f64,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters { rounds: 100, max_depth: 4, learning_rate: 0.1, lambda: 1.0, gamma: 0.0 }
    }
}

struct SplitCandidate {
    feature: usize,
    threshold: f64,
    gain: f64,
}

/// Exact greedy split search over the rows at a node. Tie-breaking is
/// deterministic: lowest feature index, then lowest threshold (thresholds
/// are midpoints of consecutive distinct sorted values).
fn best_split(
    features: &[Vec<f64>],
    rows: &[usize],
    grad: &[f64],
    hess: &[f64],
    lambda: f64,
) -> Option<SplitCandidate> {
    let g_total: f64 = rows.iter().map(|&i| grad[i]).sum();
    let h_total: f64 = rows.iter().map(|&i| hess[i]).sum();
    let parent_score = g_total * g_total / (h_total + lambda);

    let mut best: Option<SplitCandidate> = None;
    for (fi, column) in features.iter().enumerate() {
        let mut sorted: Vec<usize> = rows.to_vec();
        sorted.sort_by(|&a, &b| column[a].partial_cmp(&column[b]).unwrap());
        let mut g_left = 0.0;
        let mut h_left = 0.0;
        for w in 0..sorted.len() - 1 {
            g_left += grad[sorted[w]];
            h_left += hess[sorted[w]];
            let v = column[sorted[w]];
            let v_next = column[sorted[w + 1]];
            if v == v_next {
                continue;
            }
            let threshold = v + (v_next - v) / 2.0;
            let g_right = g_total - g_left;
            let h_right = h_total - h_left;
            let gain = g_left * g_left / (h_left + lambda)
                + g_right * g_right / (h_right + lambda)
                - parent_score;
            let better = match &best {
                None => true,
                Some(b) => gain > b.gain,
            };
            if better {
                best = Some(SplitCandidate { feature: fi, threshold, gain });
            }
        }
    }
    best
}

fn grow_tree(
    features: &[Vec<f64>],
    rows: &[usize],
    grad: &[f64],
    hess: &[f64],
    hp: &Hyperparameters,
    depth: usize,
) -> TreeNode {
    let g: f64 = rows.iter().map(|&i| grad[i]).sum();
    let h: f64 = rows.iter().map(|&i| hess[i]).sum();
    let leaf = || TreeNode::Leaf { weight: -g / (h + hp.lambda), cover: h };

    if depth >= hp.max_depth || rows.len() < 2 {
        return leaf();
    }
    let split = match best_split(features, rows, grad, hess, hp.lambda) {
        Some(s) if s.gain > hp.gamma => s,
        _ => return leaf(),
    };
    let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
        .iter()
        .partition(|&&i| features[split.feature][i] < split.threshold);
    TreeNode::Internal {
        feature: split.feature,
        threshold: split.threshold,
        left: Box::new(grow_tree(features, &left_rows, grad, hess, hp, depth + 1)),
        right: Box::new(grow_tree(features, &right_rows, grad, hess, hp, depth + 1)),
        cover: h,
    }
}

/// Fit a logistic-loss boosted ensemble on a feature matrix given as
/// columns. Deterministic: no subsampling, exact splits, fixed tie rules.
pub fn fit_columns(
    features: &[Vec<f64>],
    labels: &[bool],
    feature_names: &[String],
    hp: &Hyperparameters,
) -> Result<TreeEnsemble> {
    let n = labels.len();
    let positives = labels.iter().filter(|&&y| y).count();
    if positives == 0 || positives == n {
        return Err(Error::SingleClassTraining);
    }
    let p0 = positives as f64 / n as f64;
    let base_score = (p0 / (1.0 - p0)).ln();

    let mut margins = vec![base_score; n];
    let mut trees = Vec::with_capacity(hp.rounds);
    let all_rows: Vec<usize> = (0..n).collect();
    let mut grad = vec![0.0; n];
    let mut hess = vec![0.0; n];
    for _ in 0..hp.rounds {
        for i in 0..n {
            let p = logistic(margins[i]);
            grad[i] = p - if labels[i] { 1.0 } else { 0.0 };
            hess[i] = p * (1.0 - p);
        }
        let tree = grow_tree(features, &all_rows, &grad, &hess, hp, 0);
        for i in 0..n {
            let row: Vec<f64> = features.iter().map(|col| col[i]).collect();
            margins[i] += hp.learning_rate * tree.evaluate(&row);
        }
        trees.push(tree);
    }
    Ok(TreeEnsemble {
        version: 1,
        trees,
        learning_rate: hp.learning_rate,
        base_score,
        feature_names: feature_names.to_vec(),
    })
}

/// Fit from row-major data. The result is invariant to the row order of
/// the input: rows are first brought into a canonical order (sorted by
/// feature vector, then label) so every floating-point accumulation runs
/// in the same sequence for any permutation of the same table.
pub fn fit(
    rows: &[Vec<f64>],
    labels: &[bool],
    feature_names: &[String],
    hp: &Hyperparameters,
) -> Result<TreeEnsemble> {
    let n_features = feature_names.len();
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| {
        rows[a]
            .partial_cmp(&rows[b])
            .unwrap()
            .then_with(|| labels[a].cmp(&labels[b]))
    });
    let mut columns = vec![Vec::with_capacity(rows.len()); n_features];
    let mut sorted_labels = Vec::with_capacity(rows.len());
    for &i in &order {
        for (fi, col) in columns.iter_mut().enumerate() {
            col.push(rows[i][fi]);
        }
        sorted_labels.push(labels[i]);
    }
    fit_columns(&columns, &sorted_labels, feature_names, hp)
}
