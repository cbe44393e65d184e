use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },

    #[error("line {line}: duplicate pub_id `{pub_id}`")]
    DuplicatePubId { line: usize, pub_id: String },

    #[error("line {line}: record `{pub_id}` has an empty author list")]
    EmptyByline { line: usize, pub_id: String },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("empty year selection")]
    EmptyYearSelection,

    #[error("year selection {year} outside corpus window {min}..={max}")]
    YearOutOfWindow { year: i32, min: i32, max: i32 },

    #[error("empty betweenness series")]
    EmptySeries,

    #[error("malformed lexicon at line {line}: {msg}")]
    MalformedLexicon { line: usize, msg: String },

    #[error("token `{0}` missing from corpus term table")]
    TokenMissing(String),

    #[error("publication `{pub_id}` references author `{author_id}` absent from the author network")]
    AuthorNotInNetwork { pub_id: String, author_id: String },

    #[error("publication `{0}` absent from the publication network")]
    PubNotInNetwork(String),

    #[error("quantile fraction {0} outside (0,1)")]
    BadQuantile(f64),

    #[error("no rows to label")]
    NoRows,

    #[error("series too short: need at least {need}, got {got}")]
    TooShort { need: usize, got: usize },

    #[error("series length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("zero-variance input: {0}")]
    ZeroVariance(String),

    #[error("truth labels contain a single class")]
    SingleClass,

    #[error("empty group: {0}")]
    EmptyGroup(String),

    #[error("training set has a single class")]
    SingleClassTraining,

    #[error("row is missing feature index {0}")]
    MissingFeature(usize),

    #[error("table too small to split {n} rows at train fraction {fraction}")]
    TableTooSmall { n: usize, fraction: f64 },

    #[error("invalid synth config: {0}")]
    BadSynthConfig(String),

    #[error("invalid config: {0}")]
    BadConfig(String),

    #[error("missing input file: {0}")]
    MissingInput(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Process exit code: 1 for usage/config problems, 2 for data problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BadConfig(_)
            | Error::BadSynthConfig(_)
            | Error::BadQuantile(_)
            | Error::MissingInput(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
