//! Bibliographic corpus: parsing, completeness filtering, indexing, and
//! descriptive statistics.
//!
//! Input format is one JSON object per line with keys `pub_id`, `year`,
//! `authors`, `abstract`, `sjr`, `citations`. Unknown keys are ignored.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::mean_sd;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub pub_id: String,
    pub year: i32,
    #[serde(rename = "authors")]
    pub author_ids: Vec<String>,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    pub sjr: f64,
    pub citations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub records: Vec<PublicationRecord>,
    pub author_index: HashMap<String, HashSet<String>>,
    pub year_window: (i32, i32),
}

/// Counts of records dropped by `filter_complete`, by reason.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DropReport {
    pub missing_abstract: usize,
    pub missing_sjr: usize,
    pub missing_byline: usize,
}

impl DropReport {
    pub fn total(&self) -> usize {
        self.missing_abstract + self.missing_sjr + self.missing_byline
    }

    pub fn write_text(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "missing abstract: {}", self.missing_abstract)?;
        writeln!(w, "missing sjr: {}", self.missing_sjr)?;
        writeln!(w, "missing byline: {}", self.missing_byline)?;
        writeln!(w, "total dropped: {}", self.total())
    }
}

/// Per-year (and pooled) descriptive statistics of the corpus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YearStats {
    pub publications: usize,
    pub unique_authors: usize,
    pub solo_share: f64,
    pub authors_mean: f64,
    pub authors_max: u64,
    pub authors_sd: f64,
    pub citations_mean: f64,
    pub citations_max: u64,
    pub citations_sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescriptiveStats {
    pub per_year: BTreeMap<i32, YearStats>,
    pub total: YearStats,
}

fn build_author_index(records: &[PublicationRecord]) -> HashMap<String, HashSet<String>> {
    let mut index: HashMap<String, HashSet<String>> = HashMap::new();
    for rec in records {
        for author in &rec.author_ids {
            index.entry(author.clone()).or_default().insert(rec.pub_id.clone());
        }
    }
    index
}

impl Corpus {
    pub fn from_records(records: Vec<PublicationRecord>) -> Corpus {
        let year_window = match (
            records.iter().map(|r| r.year).min(),
            records.iter().map(|r| r.year).max(),
        ) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => (0, 0),
        };
        let author_index = build_author_index(&records);
        Corpus { records, author_index, year_window }
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn years(&self) -> Vec<i32> {
        if self.records.is_empty() {
            return Vec::new();
        }
        (self.year_window.0..=self.year_window.1).collect()
    }

    pub fn serialize_jsonl(&self, mut w: impl Write) -> std::io::Result<()> {
        for rec in &self.records {
            serde_json::to_writer(&mut w, rec)?;
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Parse a line-delimited JSON record stream into a corpus. Blank lines
/// and `#` comment lines (the config echo) are skipped.
///
/// Input order is preserved. Fails on malformed lines (reporting the line
/// number), duplicate pub_ids, empty bylines, and within-record duplicate
/// author ids.
pub fn parse_corpus(reader: impl BufRead) -> Result<Corpus> {
    let mut records = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Malformed { line: line_no, msg: e.to_string() })?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let rec: PublicationRecord = serde_json::from_str(&line)
            .map_err(|e| Error::Malformed { line: line_no, msg: e.to_string() })?;
        if rec.sjr < 0.0 {
            return Err(Error::Malformed { line: line_no, msg: format!("negative sjr {}", rec.sjr) });
        }
        if seen.insert(rec.pub_id.clone(), line_no).is_some() {
            return Err(Error::DuplicatePubId { line: line_no, pub_id: rec.pub_id });
        }
        if rec.author_ids.is_empty() {
            return Err(Error::EmptyByline { line: line_no, pub_id: rec.pub_id });
        }
        let distinct: HashSet<&String> = rec.author_ids.iter().collect();
        if distinct.len() != rec.author_ids.len() {
            return Err(Error::Malformed {
                line: line_no,
                msg: format!("record `{}` lists a duplicate author", rec.pub_id),
            });
        }
        records.push(rec);
    }
    Ok(Corpus::from_records(records))
}

/// Drop records lacking an abstract, an impact metric (SJR missing or zero),
/// or a byline. Returns the filtered corpus and a drop report.
pub fn filter_complete(corpus: &Corpus) -> (Corpus, DropReport) {
    let mut report = DropReport::default();
    let mut kept = Vec::with_capacity(corpus.records.len());
    for rec in &corpus.records {
        if rec.abstract_text.is_empty() {
            report.missing_abstract += 1;
        } else if rec.sjr <= 0.0 {
            report.missing_sjr += 1;
        } else if rec.author_ids.is_empty() {
            report.missing_byline += 1;
        } else {
            kept.push(rec.clone());
        }
    }
    (Corpus::from_records(kept), report)
}

fn stats_for(records: &[&PublicationRecord]) -> YearStats {
    let authors: Vec<f64> = records.iter().map(|r| r.author_ids.len() as f64).collect();
    let cites: Vec<f64> = records.iter().map(|r| r.citations as f64).collect();
    let (a_mean, a_sd) = mean_sd(&authors);
    let (c_mean, c_sd) = mean_sd(&cites);
    let unique: HashSet<&String> = records.iter().flat_map(|r| r.author_ids.iter()).collect();
    let solo = records.iter().filter(|r| r.author_ids.len() == 1).count();
    YearStats {
        publications: records.len(),
        unique_authors: unique.len(),
        solo_share: solo as f64 / records.len() as f64,
        authors_mean: a_mean,
        authors_max: records.iter().map(|r| r.author_ids.len() as u64).max().unwrap_or(0),
        authors_sd: a_sd,
        citations_mean: c_mean,
        citations_max: records.iter().map(|r| r.citations).max().unwrap_or(0),
        citations_sd: c_sd,
    }
}

/// Per-year and pooled descriptive statistics.
pub fn describe(corpus: &Corpus) -> Result<DescriptiveStats> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut by_year: BTreeMap<i32, Vec<&PublicationRecord>> = BTreeMap::new();
    for rec in &corpus.records {
        by_year.entry(rec.year).or_default().push(rec);
    }
    let per_year = by_year.iter().map(|(&y, recs)| (y, stats_for(recs))).collect();
    let all: Vec<&PublicationRecord> = corpus.records.iter().collect();
    Ok(DescriptiveStats { per_year, total: stats_for(&all) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(id: &str, year: i32, authors: &[&str], abs: &str, sjr: f64, cites: u64) -> String {
        serde_json::json!({
            "pub_id": id, "year": year, "authors": authors,
            "abstract": abs, "sjr": sjr, "citations": cites,
        })
        .to_string()
    }

    #[test]
    fn shared_author_indexed_to_both() {
        let input = format!(
            "{}\n{}\n",
            rec("p1", 2010, &["a", "b"], "x", 1.0, 3),
            rec("p2", 2011, &["b", "c"], "y", 2.0, 0)
        );
        let corpus = parse_corpus(input.as_bytes()).unwrap();
        let pubs = &corpus.author_index["b"];
        assert!(pubs.contains("p1") && pubs.contains("p2"));
        assert_eq!(corpus.year_window, (2010, 2011));
    }

    #[test]
    fn duplicate_pub_id_names_line() {
        let mut lines = Vec::new();
        for i in 1..=6 {
            lines.push(rec(&format!("p{i}"), 2010, &["a"], "x", 1.0, 0));
        }
        lines.push(rec("p3", 2010, &["a"], "x", 1.0, 0));
        let input = lines.join("\n");
        let err = parse_corpus(input.as_bytes()).unwrap_err();
        match err {
            Error::DuplicatePubId { line, pub_id } => {
                assert_eq!(line, 7);
                assert_eq!(pub_id, "p3");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_input_gives_empty_corpus() {
        let corpus = parse_corpus("".as_bytes()).unwrap();
        assert!(corpus.is_empty());
    }

    #[test]
    fn empty_byline_rejected() {
        let input = rec("p1", 2010, &[], "x", 1.0, 0);
        assert!(matches!(parse_corpus(input.as_bytes()), Err(Error::EmptyByline { line: 1, .. })));
    }

    #[test]
    fn unknown_keys_ignored() {
        let input = r#"{"pub_id":"p1","year":2010,"authors":["a"],"abstract":"x","sjr":1.0,"citations":2,"extra":"ignored"}"#;
        let corpus = parse_corpus(input.as_bytes()).unwrap();
        assert_eq!(corpus.records.len(), 1);
    }

    #[test]
    fn filter_drops_and_reports() {
        let mut lines = Vec::new();
        lines.push(rec("ok1", 2010, &["a"], "text", 1.0, 0));
        lines.push(rec("no_abs", 2010, &["a"], "", 1.0, 0));
        lines.push(rec("no_sjr", 2010, &["a"], "text", 0.0, 0));
        for i in 0..7 {
            lines.push(rec(&format!("k{i}"), 2010, &["a"], "text", 1.0, 0));
        }
        let corpus = parse_corpus(lines.join("\n").as_bytes()).unwrap();
        let (filtered, report) = filter_complete(&corpus);
        assert_eq!(filtered.records.len(), 8);
        assert_eq!(report.missing_abstract, 1);
        assert_eq!(report.missing_sjr, 1);
        assert_eq!(report.total(), 2);
        // retained records are unchanged
        assert_eq!(filtered.records[0], corpus.records[0]);
    }

    #[test]
    fn filter_is_idempotent() {
        let input = format!(
            "{}\n{}\n{}",
            rec("p1", 2010, &["a"], "x", 1.0, 0),
            rec("p2", 2010, &["a"], "", 1.0, 0),
            rec("p3", 2010, &["a"], "y", 0.0, 0)
        );
        let corpus = parse_corpus(input.as_bytes()).unwrap();
        let (once, _) = filter_complete(&corpus);
        let (twice, report) = filter_complete(&once);
        assert_eq!(once, twice);
        assert_eq!(report.total(), 0);
    }

    #[test]
    fn describe_solo_share() {
        let input = format!(
            "{}\n{}\n{}\n{}",
            rec("p1", 2010, &["a"], "x", 1.0, 1),
            rec("p2", 2010, &["a", "b"], "x", 1.0, 2),
            rec("p3", 2011, &["a", "c"], "x", 1.0, 3),
            rec("p4", 2011, &["b", "c"], "x", 1.0, 4)
        );
        let corpus = parse_corpus(input.as_bytes()).unwrap();
        let stats = describe(&corpus).unwrap();
        assert_eq!(stats.total.solo_share, 0.25);
        assert_eq!(stats.per_year[&2010].publications, 2);
        assert_eq!(stats.per_year[&2011].unique_authors, 3);
    }

    #[test]
    fn describe_constant_byline() {
        let input = format!(
            "{}\n{}",
            rec("p1", 2010, &["a", "b", "c"], "x", 1.0, 1),
            rec("p2", 2010, &["d", "e", "f"], "x", 1.0, 1)
        );
        let corpus = parse_corpus(input.as_bytes()).unwrap();
        let stats = describe(&corpus).unwrap();
        assert_eq!(stats.total.authors_mean, 3.0);
        assert_eq!(stats.total.authors_sd, 0.0);
    }

    #[test]
    fn describe_empty_corpus_errors() {
        let corpus = Corpus::from_records(Vec::new());
        assert!(matches!(describe(&corpus), Err(Error::EmptyCorpus)));
    }

    #[test]
    fn describe_matches_independent_recomputation() {
        // 100-record synthetic corpus checked against a direct recount that
        // does not share code with describe().
        let mut lines = Vec::new();
        let mut state = 12345u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as u32
        };
        for i in 0..100 {
            let year = 2010 + (next() % 3) as i32;
            let n_auth = 1 + (next() % 5) as usize;
            let authors: Vec<String> = (0..n_auth).map(|j| format!("a{}", (i * 7 + j * 13) % 40)).collect();
            let refs: Vec<&str> = authors.iter().map(|s| s.as_str()).collect();
            lines.push(rec(&format!("p{i}"), year, &refs, "x", 1.0, (next() % 50) as u64));
        }
        let corpus = parse_corpus(lines.join("\n").as_bytes()).unwrap();
        let stats = describe(&corpus).unwrap();

        // independent recount
        let n = corpus.records.len() as f64;
        let solo = corpus.records.iter().filter(|r| r.author_ids.len() == 1).count() as f64;
        let auth_sum: f64 = corpus.records.iter().map(|r| r.author_ids.len() as f64).sum();
        let cite_sum: f64 = corpus.records.iter().map(|r| r.citations as f64).sum();
        assert!((stats.total.solo_share - solo / n).abs() < 1e-12);
        assert!((stats.total.authors_mean - auth_sum / n).abs() < 1e-12);
        assert!((stats.total.citations_mean - cite_sum / n).abs() < 1e-12);
        let pubs_per_year: usize = stats.per_year.values().map(|s| s.publications).sum();
        assert_eq!(pubs_per_year, 100);
    }

    proptest! {
        #[test]
        fn parse_serialize_roundtrip(n in 0usize..20, seed in 0u64..1000) {
            let mut lines = Vec::new();
            for i in 0..n {
                let year = 2010 + ((seed as usize + i) % 3) as i32;
                let authors: Vec<String> = (0..=(i % 3)).map(|j| format!("a{}", (i + j * 5) % 11)).collect();
                let refs: Vec<&str> = authors.iter().map(|s| s.as_str()).collect();
                lines.push(rec(&format!("p{i}"), year, &refs, "abstract text", 0.5, i as u64));
            }
            let corpus = parse_corpus(lines.join("\n").as_bytes()).unwrap();
            let mut buf = Vec::new();
            corpus.serialize_jsonl(&mut buf).unwrap();
            let reparsed = parse_corpus(buf.as_slice()).unwrap();
            prop_assert_eq!(corpus, reparsed);
        }
    }
}
