//! Exact interventional SHAP attributions for tree ensembles.
//!
//! For a single tree, explained row `x`, and background row `b`, a leaf is
//! reachable under a coalition `S` exactly when every feature on which the
//! path follows `x`'s side of a divergence is in `S` (set `A`) and every
//! feature on which it follows `b`'s side is outside `S` (set `B`).
//! Summing the Shapley kernel over all coalitions consistent with a leaf
//! collapses to closed-form factorial weights, so attributions are exact
//! in one root-to-leaf traversal per (tree, x, b) pair.

use crate::error::Result;
use crate::gbt::{TreeEnsemble, TreeNode};

/// SHAP attributions for one row: per-feature contributions plus the base
/// value (mean background margin). `base + sum(contributions)` equals the
/// ensemble margin of the row exactly.
#[derive(Debug, Clone)]
pub struct Attribution {
    pub contributions: Vec<f64>,
    pub base: f64,
}

fn factorials(n: usize) -> Vec<f64> {
    let mut f = vec![1.0; n + 1];
    for i in 1..=n {
        f[i] = f[i - 1] * i as f64;
    }
    f
}

/// Walk a tree accumulating leaf contributions into `phi`.
///
/// `in_s` marks features that must be inside the coalition (followed x's
/// side), `out_s` marks features that must be outside (followed b's side).
#[allow(clippy::too_many_arguments)]
fn walk(
    node: &TreeNode,
    x: &[f64],
    b: &[f64],
    in_s: &mut Vec<usize>,
    out_s: &mut Vec<usize>,
    phi: &mut [f64],
    fact: &[f64],
    scale: f64,
) {
    match node {
        TreeNode::Leaf { weight, .. } => {
            let a = in_s.len();
            let k = out_s.len();
            if a + k == 0 {
                // reached by both rows under every coalition: no effect
                return;
            }
            let v = scale * *weight;
            if a > 0 {
                let w = v * fact[a - 1] * fact[k] / fact[a + k];
                for &j in in_s.iter() {
                    phi[j] += w;
                }
            }
            if k > 0 {
                let w = v * fact[a] * fact[k - 1] / fact[a + k];
                for &j in out_s.iter() {
                    phi[j] -= w;
                }
            }
        }
        TreeNode::Internal { feature, threshold, left, right, .. } => {
            let f = *feature;
            let x_left = x[f] < *threshold;
            let b_left = b[f] < *threshold;
            if x_left == b_left {
                let child = if x_left { left } else { right };
                walk(child, x, b, in_s, out_s, phi, fact, scale);
                return;
            }
            // divergence: explore x's side requiring f in S,
            // b's side requiring f out of S
            let (x_child, b_child) = if x_left { (left, right) } else { (right, left) };
            if !out_s.contains(&f) {
                let fresh = !in_s.contains(&f);
                if fresh {
                    in_s.push(f);
                }
                walk(x_child, x, b, in_s, out_s, phi, fact, scale);
                if fresh {
                    in_s.pop();
                }
            }
            if !in_s.contains(&f) {
                let fresh = !out_s.contains(&f);
                if fresh {
                    out_s.push(f);
                }
                walk(b_child, x, b, in_s, out_s, phi, fact, scale);
                if fresh {
                    out_s.pop();
                }
            }
        }
    }
}

impl TreeEnsemble {
    /// Exact interventional SHAP attributions of the margin of `row`
    /// against a set of background rows. Contributions from each
    /// background row are averaged.
    pub fn shap_values(&self, row: &[f64], background: &[Vec<f64>]) -> Result<Attribution> {
        let m = self.feature_names.len();
        let mut phi = vec![0.0; m];
        let mut base = 0.0;
        let max_depth = self.trees.iter().map(|t| t.max_depth()).max().unwrap_or(0);
        let fact = factorials(max_depth.max(1));
        let scale = self.learning_rate / background.len().max(1) as f64;
        let mut in_s = Vec::with_capacity(max_depth);
        let mut out_s = Vec::with_capacity(max_depth);
        for b in background {
            base += self.margin(b)?;
            for tree in &self.trees {
                walk(tree, row, b, &mut in_s, &mut out_s, &mut phi, &fact, scale);
            }
        }
        base /= background.len().max(1) as f64;
        // validate the explained row dimension too
        self.margin(row)?;
        Ok(Attribution { contributions: phi, base })
    }
}
