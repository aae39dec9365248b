use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("q out of range: {0} (must be in (0,1))")]
    QOutOfRange(f64),
    #[error("tau0 must be positive, got {0}")]
    NonPositiveTau0(f64),
    #[error("n0 must be at least 1, got {0}")]
    InvalidWindow(u32),
    #[error("orphan reward fraction out of range: {0} (must be in [0,1])")]
    OrphanRewardOutOfRange(f64),
    #[error("absolute hashrates must be positive, got h={0}, h'={1}")]
    NonPositiveHashrate(f64, f64),
    #[error("inconsistent absolute hashrates: q={q} but h'/(h+h') = {implied}")]
    InconsistentHashrates { q: f64, implied: f64 },
    #[error("empty cycle word")]
    EmptyWord,
    #[error("cycle word too long: {0} letters (max {max})", max = crate::cycle::CycleWord::MAX_LEN)]
    WordTooLong(usize),
    #[error("invalid letter {0:?} in cycle word (expected 'A' or 'B')")]
    InvalidLetter(char),
    #[error("terminal words do not form a complete prefix code: no terminal on path {0}")]
    IncompletePrefixCode(String),
    #[error("unreachable terminal {0}: another terminal is a strict prefix of it")]
    OverlappingTerminals(String),
    #[error("illegal resolution for word {0}: violates accounting or fork-choice")]
    IllegalResolution(String),
    #[error("strategy bound {0} exceeds the maximum cycle length {max}", max = crate::cycle::CycleWord::MAX_LEN)]
    BoundTooLarge(usize),
    #[error("strategy has no terminal words")]
    NoTerminals,
    #[error("retarget requested before epoch complete: {official} official blocks, window {n0}")]
    EpochIncomplete { official: u32, n0: u32 },
    #[error("nonpositive retarget input: progression {progress}, elapsed {elapsed} min")]
    InvalidRetarget { progress: f64, elapsed: f64 },
    #[error("malformed word-rule record at line {line}: {reason}")]
    MalformedRuleRecord { line: usize, reason: String },
    #[error("malformed cycle CSV row: {0}")]
    MalformedCsvRow(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
