use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet size must be at least 1")]
    EmptyAlphabet,

    #[error("letter {letter} is outside the alphabet 1..={alphabet_size}")]
    LetterOutOfRange { letter: usize, alphabet_size: usize },

    #[error("period must be at least 1")]
    ZeroPeriod,

    #[error("expected a word of length {expected}, got length {actual}")]
    WordLength { expected: usize, actual: usize },

    #[error("word length {length} is not a multiple of {block}")]
    LengthNotMultiple { length: usize, block: usize },

    #[error("words over alphabets {left} and {right} cannot be combined")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("cannot parse word {input:?}: {reason}")]
    WordSyntax { input: String, reason: String },

    #[error("cannot parse scalar {input:?}")]
    ScalarSyntax { input: String },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },

    #[error("weights are defined to depth {available}, but depth {required} is needed")]
    InsufficientDepth { required: usize, available: usize },

    #[error(
        "operator is not a shift for letter {letter}: unexpected entry at (row {row}, col {col})"
    )]
    NotShiftForm {
        letter: usize,
        row: usize,
        col: usize,
    },

    #[error(
        "weight for letter {letter} at word {word} is zero, so the shift is not bounded below"
    )]
    NotBoundedBelow { letter: usize, word: String },

    #[error("weight for letter {letter} at word {word} is negative")]
    NegativeWeight { letter: usize, word: String },

    #[error("max length {max_length} is not aligned with period {period}; valid values are k(m+1)-1: {valid}")]
    MisalignedTruncation {
        max_length: usize,
        period: usize,
        valid: String,
    },

    #[error("{word} does not label a grid position (labels are words shorter than {period})")]
    NotAGridLabel { word: String, period: usize },

    #[error("block level m must be at least {minimum}, got {actual}")]
    BlockLevel { minimum: usize, actual: usize },

    #[error("{divisor} does not divide {multiple}")]
    NotDivisible { divisor: usize, multiple: usize },

    #[error("weight table is missing the entry (i, u) = ({letter}, {word})")]
    MissingWeight { letter: usize, word: String },

    #[error("weight table has a duplicate entry for letter {letter} at word {word}")]
    DuplicateWeight { letter: usize, word: String },

    #[error("weight table entry for letter {letter} at word {word} is outside the tree top")]
    WeightOutsideTop { letter: usize, word: String },

    #[error("not a divisor sequence: term {position} ({prev}) and term {next_position} ({next}) {reason}")]
    NotDivisorSequence {
        position: usize,
        prev: u64,
        next_position: usize,
        next: u64,
        reason: &'static str,
    },

    #[error("divisor sequences must be non-empty with positive terms")]
    EmptySequence,

    #[error("this operation needs an alphabet of at least 2 letters, got {0}")]
    AlphabetTooSmall(usize),

    #[error("invalid supernatural number {input:?}: {reason}")]
    SupernaturalSyntax { input: String, reason: String },

    #[error("{0:?} is not a permutation of the letters 1..={1}")]
    InvalidPermutation(Vec<usize>, usize),

    #[error("configuration error: {0}")]
    Config(String),
}
