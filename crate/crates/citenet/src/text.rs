//! Abstract-level semantic variables: length, sentiment, complexity,
//! lexical diversity, and commonness.
//!
//! Tokenization lowercases, splits on any non-alphanumeric character, and
//! discards tokens shorter than two characters. Complexity, diversity, and
//! commonness operate on stemmed, stop-word-filtered tokens; sentiment on
//! the raw (pre-stemming, stop-words kept) token stream.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::stemmer;
use crate::util::mean_sd;

/// English stop-word list shipped with the artifact.
pub const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords.txt");

/// Built-in valence lexicon, used when no external lexicon is configured.
pub const DEFAULT_LEXICON: &str = include_str!("../data/lexicon.txt");

/// Negation tokens that flip the valence of a following lexicon hit.
const NEGATORS: &[&str] = &[
    "not", "no", "never", "neither", "nor", "cannot", "cant", "dont", "doesnt", "didnt",
    "isnt", "arent", "wasnt", "werent", "wont", "wouldnt", "couldnt", "shouldnt", "without",
    "hardly", "barely", "rarely", "lack", "lacking", "lacks",
];

/// How many preceding raw tokens are scanned for a negator.
const NEGATION_WINDOW: usize = 3;

pub type Stopwords = HashSet<String>;
pub type Lexicon = HashMap<String, f64>;

pub fn parse_stopwords(text: &str) -> Stopwords {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect()
}

pub fn default_stopwords() -> Stopwords {
    parse_stopwords(DEFAULT_STOPWORDS)
}

pub fn default_lexicon() -> Lexicon {
    parse_lexicon(DEFAULT_LEXICON.as_bytes()).expect("built-in lexicon is well formed")
}

/// Parse a lexicon: one "token<TAB>valence" per line, UTF-8.
pub fn parse_lexicon(reader: impl BufRead) -> Result<Lexicon> {
    let mut lexicon = Lexicon::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::MalformedLexicon { line: line_no, msg: e.to_string() })?;
        if line.trim().is_empty() {
            continue;
        }
        let (token, valence) = line.split_once('\t').ok_or(Error::MalformedLexicon {
            line: line_no,
            msg: "expected token<TAB>valence".to_string(),
        })?;
        let valence: f64 = valence.trim().parse().map_err(|_| Error::MalformedLexicon {
            line: line_no,
            msg: format!("bad valence `{}`", valence.trim()),
        })?;
        lexicon.insert(token.to_string(), valence);
    }
    Ok(lexicon)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TokenizedAbstract {
    pub raw_char_count: usize,
    /// Lowercase stemmed content-word stems, stop-words removed.
    pub tokens: Vec<String>,
    /// Lowercase words before stemming and stop-word removal.
    pub raw_tokens: Vec<String>,
}

/// Corpus-wide stem occurrence counts (post-preprocessing).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorpusTermTable {
    counts: HashMap<String, u64>,
}

impl CorpusTermTable {
    pub fn build<'a>(token_lists: impl Iterator<Item = &'a [String]>) -> CorpusTermTable {
        let mut counts: HashMap<String, u64> = HashMap::new();
        for tokens in token_lists {
            for token in tokens {
                *counts.entry(token.clone()).or_insert(0) += 1;
            }
        }
        CorpusTermTable { counts }
    }

    pub fn count(&self, stem: &str) -> Option<u64> {
        self.counts.get(stem).copied()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

pub fn preprocess(abstract_text: &str, stopwords: &Stopwords) -> TokenizedAbstract {
    let raw_char_count = abstract_text.chars().count();
    let lower = abstract_text.to_lowercase();
    let raw_tokens: Vec<String> = lower
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() >= 2)
        .map(str::to_string)
        .collect();
    let tokens = raw_tokens
        .iter()
        .filter(|t| !stopwords.contains(*t))
        .map(|t| stemmer::stem(t))
        .collect();
    TokenizedAbstract { raw_char_count, tokens, raw_tokens }
}

/// Number of Unicode scalar characters in the raw abstract.
pub fn abstract_length(abstract_text: &str) -> usize {
    abstract_text.chars().count()
}

/// Lexicon-based sentiment in [-1, 1]: sum hit valences (sign flipped when
/// one of the three preceding tokens is a negator), normalized by
/// s / sqrt(s^2 + 15).
pub fn sentiment(raw_tokens: &[String], lexicon: &Lexicon) -> f64 {
    let mut sum = 0.0;
    for (i, token) in raw_tokens.iter().enumerate() {
        if let Some(&valence) = lexicon.get(token) {
            let negated = raw_tokens[i.saturating_sub(NEGATION_WINDOW)..i]
                .iter()
                .any(|prev| NEGATORS.contains(&prev.as_str()));
            sum += if negated { -valence } else { valence };
        }
    }
    sum / (sum * sum + 15.0).sqrt()
}

/// Population standard deviation of within-abstract stem counts.
pub fn complexity(tokens: &[String]) -> f64 {
    if tokens.is_empty() {
        return 0.0;
    }
    let mut counts: HashMap<&str, f64> = HashMap::new();
    for token in tokens {
        *counts.entry(token.as_str()).or_insert(0.0) += 1.0;
    }
    let values: Vec<f64> = counts.values().copied().collect();
    mean_sd(&values).1
}

/// Unique stems over total tokens; undefined (None) for empty abstracts.
pub fn diversity(tokens: &[String]) -> Option<f64> {
    if tokens.is_empty() {
        return None;
    }
    let unique: HashSet<&str> = tokens.iter().map(String::as_str).collect();
    Some(unique.len() as f64 / tokens.len() as f64)
}

/// Mean corpus-wide count of the abstract's token occurrences.
pub fn commonness(tokens: &[String], table: &CorpusTermTable) -> Result<f64> {
    if tokens.is_empty() {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    for token in tokens {
        let count = table.count(token).ok_or_else(|| Error::TokenMissing(token.clone()))?;
        sum += count as f64;
    }
    Ok(sum / tokens.len() as f64)
}

/// The five abstract-level variables of one publication.
#[derive(Debug, Clone, PartialEq)]
pub struct TextMetrics {
    pub length_chars: usize,
    pub sentiment: f64,
    pub complexity: f64,
    pub diversity: f64,
    pub commonness: f64,
}

/// Compute all five metrics; None when the token list is empty (the record
/// is then excluded from the feature table).
pub fn text_metrics(
    abstract_text: &str,
    tokenized: &TokenizedAbstract,
    lexicon: &Lexicon,
    table: &CorpusTermTable,
) -> Result<Option<TextMetrics>> {
    let diversity = match diversity(&tokenized.tokens) {
        Some(d) => d,
        None => return Ok(None),
    };
    Ok(Some(TextMetrics {
        length_chars: abstract_length(abstract_text),
        sentiment: sentiment(&tokenized.raw_tokens, lexicon),
        complexity: complexity(&tokenized.tokens),
        diversity,
        commonness: commonness(&tokenized.tokens, table)?,
    }))
}
