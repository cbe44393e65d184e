//! Feature-table assembly: the label, the two controls, nine network
//! variables (x1-x9), and five text variables (x10-x14) per
//! prediction-year publication.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::centrality::NodeMetrics;
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::text::TextMetrics;
use crate::util::{fmt_sig, nearest_rank_quantile};

pub const N_PREDICTORS: usize = 16;

/// Canonical predictor names, in column order.
pub const FEATURE_NAMES: [&str; N_PREDICTORS] = [
    "sjr", "n_authors", "x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8", "x9", "x10", "x11",
    "x12", "x13", "x14",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregation {
    Mean,
    Max,
    Sum,
}

impl Aggregation {
    pub fn apply(&self, values: &[f64]) -> f64 {
        match self {
            Aggregation::Mean => values.iter().sum::<f64>() / values.len() as f64,
            Aggregation::Max => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            Aggregation::Sum => values.iter().sum(),
        }
    }

    pub fn parse(s: &str) -> Result<Aggregation> {
        match s {
            "mean" => Ok(Aggregation::Mean),
            "max" => Ok(Aggregation::Max),
            "sum" => Ok(Aggregation::Sum),
            other => Err(Error::BadConfig(format!("unknown aggregation `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Aggregation::Mean => "mean",
            Aggregation::Max => "max",
            Aggregation::Sum => "sum",
        }
    }
}

/// How per-author metrics become per-publication features.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AggregationConfig {
    /// x5-x8: author-network degree/constraint/closeness/betweenness
    pub centrality: Aggregation,
    /// x9: rotating leadership
    pub rotating: Aggregation,
}

impl Default for AggregationConfig {
    fn default() -> Self {
        AggregationConfig { centrality: Aggregation::Mean, rotating: Aggregation::Sum }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub pub_id: String,
    pub label: bool,
    pub citations: u64,
    /// Predictors in FEATURE_NAMES order: sjr, n_authors, x1..x14.
    pub x: [f64; N_PREDICTORS],
}

impl FeatureRow {
    pub fn sjr(&self) -> f64 {
        self.x[0]
    }
    pub fn n_authors(&self) -> f64 {
        self.x[1]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    /// Rows sorted by pub_id.
    pub rows: Vec<FeatureRow>,
    pub aggregation: AggregationConfig,
    /// Quantile threshold used for labeling, once labeled.
    pub label_threshold: Option<f64>,
    pub label_q: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelSummary {
    pub threshold: f64,
    pub positives: usize,
    /// True when every label came out identical.
    pub degenerate: bool,
}

/// Join per-publication and per-author metrics into the feature table for
/// the prediction-year publications. Rows are emitted only for publications
/// with complete data (text metrics defined). Labels are left unset.
#[allow(clippy::too_many_arguments)]
pub fn assemble(
    corpus: &Corpus,
    pub_net_metrics: &HashMap<String, NodeMetrics>,
    author_net_metrics: &HashMap<String, NodeMetrics>,
    rotating: &HashMap<String, u32>,
    text_metrics: &HashMap<String, TextMetrics>,
    prediction_year: i32,
    aggregation: AggregationConfig,
) -> Result<FeatureTable> {
    let mut rows = Vec::new();
    for rec in corpus.records.iter().filter(|r| r.year == prediction_year) {
        let text = match text_metrics.get(&rec.pub_id) {
            Some(t) => t,
            None => continue, // incomplete data: excluded
        };
        let pub_m = pub_net_metrics
            .get(&rec.pub_id)
            .ok_or_else(|| Error::PubNotInNetwork(rec.pub_id.clone()))?;

        let mut deg = Vec::with_capacity(rec.author_ids.len());
        let mut con = Vec::with_capacity(rec.author_ids.len());
        let mut clo = Vec::with_capacity(rec.author_ids.len());
        let mut bet = Vec::with_capacity(rec.author_ids.len());
        let mut rot = Vec::with_capacity(rec.author_ids.len());
        for author in &rec.author_ids {
            let m = author_net_metrics.get(author).ok_or_else(|| Error::AuthorNotInNetwork {
                pub_id: rec.pub_id.clone(),
                author_id: author.clone(),
            })?;
            deg.push(m.degree_w);
            con.push(m.constraint);
            clo.push(m.closeness_norm);
            bet.push(m.betweenness_norm);
            rot.push(*rotating.get(author).unwrap_or(&0) as f64);
        }
        let c = aggregation.centrality;
        rows.push(FeatureRow {
            pub_id: rec.pub_id.clone(),
            label: false,
            citations: rec.citations,
            x: [
                rec.sjr,
                rec.author_ids.len() as f64,
                pub_m.degree_w,
                pub_m.constraint,
                pub_m.closeness_norm,
                pub_m.betweenness_norm,
                c.apply(&deg),
                c.apply(&con),
                c.apply(&clo),
                c.apply(&bet),
                aggregation.rotating.apply(&rot),
                text.length_chars as f64,
                text.sentiment,
                text.complexity,
                text.diversity,
                text.commonness,
            ],
        });
    }
    rows.sort_by(|a, b| a.pub_id.cmp(&b.pub_id));
    Ok(FeatureTable { rows, aggregation, label_threshold: None, label_q: None })
}

/// Mark the top citation quantile: threshold is the nearest-rank (1-q)
/// quantile of citations, label is true iff citations exceed it strictly.
pub fn label_top_quantile(table: &mut FeatureTable, q: f64) -> Result<LabelSummary> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::BadQuantile(q));
    }
    if table.rows.is_empty() {
        return Err(Error::NoRows);
    }
    let citations: Vec<f64> = table.rows.iter().map(|r| r.citations as f64).collect();
    let threshold = nearest_rank_quantile(&citations, 1.0 - q);
    let mut positives = 0;
    for row in &mut table.rows {
        row.label = (row.citations as f64) > threshold;
        if row.label {
            positives += 1;
        }
    }
    table.label_threshold = Some(threshold);
    table.label_q = Some(q);
    Ok(LabelSummary {
        threshold,
        positives,
        degenerate: positives == 0 || positives == table.rows.len(),
    })
}

/// CSV dump: optional leading "# key=value" echo lines, header, then one
/// row per publication with 12-significant-digit decimals.
pub fn write_csv(table: &FeatureTable, echo: &[String], mut w: impl Write) -> std::io::Result<()> {
    for line in echo {
        writeln!(w, "# {line}")?;
    }
    writeln!(w, "pub_id,label,citations,{}", FEATURE_NAMES.join(","))?;
    for row in &table.rows {
        let xs: Vec<String> = row.x.iter().map(|&v| fmt_sig(v)).collect();
        writeln!(
            w,
            "{},{},{},{}",
            row.pub_id,
            u8::from(row.label),
            row.citations,
            xs.join(",")
        )?;
    }
    Ok(())
}

/// Read a table written by `write_csv`. Echo lines are skipped; the
/// aggregation config is not recoverable and is set to defaults.
pub fn read_csv(reader: impl BufRead) -> Result<FeatureTable> {
    let mut rows = Vec::new();
    let mut header_seen = false;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Malformed { line: line_no, msg: e.to_string() })?;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        if !header_seen {
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 + N_PREDICTORS {
            return Err(Error::Malformed {
                line: line_no,
                msg: format!("expected {} fields, got {}", 3 + N_PREDICTORS, fields.len()),
            });
        }
        let parse_f = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::Malformed {
                line: line_no,
                msg: format!("bad number `{s}`"),
            })
        };
        let mut x = [0.0; N_PREDICTORS];
        for (i, field) in fields[3..].iter().enumerate() {
            x[i] = parse_f(field)?;
        }
        rows.push(FeatureRow {
            pub_id: fields[0].to_string(),
            label: fields[1] == "1",
            citations: fields[2].parse().map_err(|_| Error::Malformed {
                line: line_no,
                msg: format!("bad citations `{}`", fields[2]),
            })?,
            x,
        });
    }
    Ok(FeatureTable {
        rows,
        aggregation: AggregationConfig::default(),
        label_threshold: None,
        label_q: None,
    })
}
