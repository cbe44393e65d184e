//! Network metrics: weighted degree, normalized betweenness (Brandes),
//! normalized closeness with component correction, Burt's constraint, and
//! rotating leadership over yearly betweenness series.
//!
//! Shortest paths use hop count; edge weights are tie strengths, not
//! distances. All functions are pure over an immutable graph and give
//! results independent of the parallelism degree: per-source BFS passes run
//! in fixed-size source blocks whose partial sums are reduced in block
//! order.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::util::fmt_sig;

const SOURCE_BLOCK: usize = 64;
const EPS_ABS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct NodeMetrics {
    pub node_id: String,
    pub degree_w: f64,
    pub betweenness_norm: f64,
    pub closeness_norm: f64,
    pub constraint: f64,
}

/// Chronological betweenness values of one author, one entry per year of
/// the corpus window (0 where the author is absent that year).
#[derive(Debug, Clone, PartialEq)]
pub struct BetweennessSeries {
    pub author_id: String,
    pub values: Vec<(i32, f64)>,
}

/// Weighted degree of every node: sum of incident edge weights.
pub fn degree_all(g: &WeightedGraph) -> Vec<f64> {
    (0..g.node_count()).map(|i| g.degree_weight(i)).collect()
}

struct BfsPass {
    betweenness: Vec<f64>,
    dist_sum: Vec<f64>,
    component: Vec<usize>,
}

/// One Brandes accumulation pass over a block of sources, sequential within
/// the block. Also accumulates per-node shortest-path distance sums for
/// closeness.
fn brandes_block(g: &WeightedGraph, sources: &[usize]) -> BfsPass {
    let n = g.node_count();
    let mut betweenness = vec![0.0; n];
    let mut dist_sum = vec![0.0; n];
    let mut component = vec![0usize; n];

    let mut dist: Vec<i64> = vec![-1; n];
    let mut sigma: Vec<f64> = vec![0.0; n];
    let mut delta: Vec<f64> = vec![0.0; n];
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut stack: Vec<usize> = Vec::with_capacity(n);
    let mut queue: VecDeque<usize> = VecDeque::new();

    for &s in sources {
        dist.fill(-1);
        sigma.fill(0.0);
        delta.fill(0.0);
        for p in &mut pred {
            p.clear();
        }
        stack.clear();
        queue.clear();

        dist[s] = 0;
        sigma[s] = 1.0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &(w, _) in g.neighbors(v) {
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    pred[w].push(v);
                }
            }
        }
        for &v in &stack {
            dist_sum[v] += dist[v] as f64;
            component[v] += 1;
        }
        while let Some(w) = stack.pop() {
            for &v in &pred[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                betweenness[w] += delta[w];
            }
        }
    }
    BfsPass { betweenness, dist_sum, component }
}

fn run_passes(g: &WeightedGraph) -> BfsPass {
    let n = g.node_count();
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<BfsPass> = sources
        .par_chunks(SOURCE_BLOCK)
        .map(|block| brandes_block(g, block))
        .collect();
    let mut total = BfsPass {
        betweenness: vec![0.0; n],
        dist_sum: vec![0.0; n],
        component: vec![0usize; n],
    };
    for p in partials {
        for i in 0..n {
            total.betweenness[i] += p.betweenness[i];
            total.dist_sum[i] += p.dist_sum[i];
            total.component[i] += p.component[i];
        }
    }
    total
}

/// Normalized betweenness of every node: pair-dependency sums divided by
/// (n-1)(n-2)/2. Graphs with n < 3 give all zeros.
pub fn betweenness_all(g: &WeightedGraph) -> Vec<f64> {
    let n = g.node_count();
    if n < 3 {
        return vec![0.0; n];
    }
    let pass = run_passes(g);
    let max = (n - 1) as f64 * (n - 2) as f64 / 2.0;
    // each unordered pair is counted from both endpoints as sources
    pass.betweenness.iter().map(|b| b / 2.0 / max).collect()
}

/// Normalized closeness of every node. Within a component of size n_c the
/// normalized value (n_c-1)/sum(d) is scaled by (n_c-1)/(n-1) so that
/// scores stay comparable across components; isolated nodes score 0.
pub fn closeness_all(g: &WeightedGraph) -> Vec<f64> {
    let n = g.node_count();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![0.0];
    }
    let pass = run_passes(g);
    (0..n)
        .map(|i| {
            let n_c = pass.component[i];
            if n_c <= 1 || pass.dist_sum[i] == 0.0 {
                0.0
            } else {
                let nc1 = (n_c - 1) as f64;
                nc1 * nc1 / ((n - 1) as f64 * pass.dist_sum[i])
            }
        })
        .collect()
}

/// Betweenness and closeness from a single set of BFS passes.
pub fn betweenness_closeness_all(g: &WeightedGraph) -> (Vec<f64>, Vec<f64>) {
    let n = g.node_count();
    if n < 2 {
        return (vec![0.0; n], vec![0.0; n]);
    }
    let pass = run_passes(g);
    let betweenness = if n < 3 {
        vec![0.0; n]
    } else {
        let max = (n - 1) as f64 * (n - 2) as f64 / 2.0;
        pass.betweenness.iter().map(|b| b / 2.0 / max).collect()
    };
    let closeness = (0..n)
        .map(|i| {
            let n_c = pass.component[i];
            if n_c <= 1 || pass.dist_sum[i] == 0.0 {
                0.0
            } else {
                let nc1 = (n_c - 1) as f64;
                nc1 * nc1 / ((n - 1) as f64 * pass.dist_sum[i])
            }
        })
        .collect();
    (betweenness, closeness)
}

/// Burt's network constraint of every node, with weight-proportional
/// investments p_ij = w_ij / sum_k w_ik. Isolated nodes score 1.
pub fn constraint_all(g: &WeightedGraph) -> Vec<f64> {
    let n = g.node_count();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let neighbors = g.neighbors(i);
            if neighbors.is_empty() {
                return 1.0;
            }
            let total: f64 = neighbors.iter().map(|&(_, w)| w).sum();
            let p_i: HashMap<usize, f64> =
                neighbors.iter().map(|&(j, w)| (j, w / total)).collect();
            let mut c = 0.0;
            for &(j, _) in neighbors {
                // indirect investment p_iq * p_qj over mutual neighbors q
                let mut indirect = 0.0;
                for &(q, _) in neighbors {
                    if q == j {
                        continue;
                    }
                    if let Some(w_qj) = g.edge_weight(q, j) {
                        let total_q: f64 = g.neighbors(q).iter().map(|&(_, w)| w).sum();
                        indirect += p_i[&q] * (w_qj / total_q);
                    }
                }
                let term = p_i[&j] + indirect;
                c += term * term;
            }
            c
        })
        .collect()
}

/// All four structural metrics of a graph, ready for dumping or joining.
pub fn metrics_all(g: &WeightedGraph) -> Vec<NodeMetrics> {
    let degree = degree_all(g);
    let (betweenness, closeness) = betweenness_closeness_all(g);
    let constraint = constraint_all(g);
    (0..g.node_count())
        .map(|i| NodeMetrics {
            node_id: g.node_ids[i].clone(),
            degree_w: degree[i],
            betweenness_norm: betweenness[i],
            closeness_norm: closeness[i],
            constraint: constraint[i],
        })
        .collect()
}

/// Metric dump: one line per node "id degree betweenness closeness
/// constraint", 12 significant digits, nodes in lexicographic id order.
pub fn write_metrics(metrics: &[NodeMetrics], mut w: impl Write) -> std::io::Result<()> {
    let mut sorted: Vec<&NodeMetrics> = metrics.iter().collect();
    sorted.sort_by(|a, b| a.node_id.cmp(&b.node_id));
    for m in sorted {
        writeln!(
            w,
            "{} {} {} {} {}",
            m.node_id,
            fmt_sig(m.degree_w),
            fmt_sig(m.betweenness_norm),
            fmt_sig(m.closeness_norm),
            fmt_sig(m.constraint)
        )?;
    }
    Ok(())
}

/// Count significant oscillations in a chronological series: interior years
/// that are strict local maxima or minima with both adjacent changes larger
/// than `epsilon` relative to the bigger of the two values involved.
pub fn rotating_leadership(series: &BetweennessSeries, epsilon: f64) -> Result<u32> {
    if series.values.is_empty() {
        return Err(Error::EmptySeries);
    }
    let vals: Vec<f64> = {
        let mut v = series.values.clone();
        v.sort_by_key(|&(year, _)| year);
        v.into_iter().map(|(_, x)| x).collect()
    };
    let significant = |a: f64, b: f64| (a - b).abs() > epsilon * a.max(b).max(EPS_ABS);
    let mut count = 0;
    for t in 1..vals.len().saturating_sub(1) {
        let (prev, cur, next) = (vals[t - 1], vals[t], vals[t + 1]);
        let strict_max = cur > prev && cur > next;
        let strict_min = cur < prev && cur < next;
        if (strict_max || strict_min) && significant(cur, prev) && significant(cur, next) {
            count += 1;
        }
    }
    Ok(count)
}

/// Per-author rotating-leadership counts over yearly author networks.
///
/// An author's series covers every year in the map, with betweenness 0 in
/// years where the author is absent.
pub fn rotating_counts(
    yearly: &BTreeMap<i32, WeightedGraph>,
    epsilon: f64,
) -> Result<HashMap<String, u32>> {
    let mut per_year_betweenness: BTreeMap<i32, HashMap<&str, f64>> = BTreeMap::new();
    for (&year, g) in yearly {
        let b = betweenness_all(g);
        let map = g.node_ids.iter().enumerate().map(|(i, id)| (id.as_str(), b[i])).collect();
        per_year_betweenness.insert(year, map);
    }
    let mut authors: Vec<&str> = per_year_betweenness
        .values()
        .flat_map(|m| m.keys().copied())
        .collect::<std::collections::HashSet<_>>()
        .into_iter()
        .collect();
    authors.sort();

    let mut out = HashMap::with_capacity(authors.len());
    for author in authors {
        let values: Vec<(i32, f64)> = per_year_betweenness
            .iter()
            .map(|(&year, m)| (year, m.get(author).copied().unwrap_or(0.0)))
            .collect();
        let series = BetweennessSeries { author_id: author.to_string(), values };
        out.insert(author.to_string(), rotating_leadership(&series, epsilon)?);
    }
    Ok(out)
}
