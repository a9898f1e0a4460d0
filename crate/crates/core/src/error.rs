//! Error types shared across the crate.

use thiserror::Error;

/// Rejected configurations and structurally invalid inputs.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("search dimension must be positive")]
    ZeroDimension,

    #[error("noise vector entry {index} is not finite ({value})")]
    NonFiniteEntry { index: usize, value: f64 },

    #[error("noise vector has length {got}, expected dimension {want}")]
    DimensionMismatch { want: usize, got: usize },

    #[error("batch size {batch_size} exceeds total budget {n_total}")]
    BatchExceedsBudget { batch_size: usize, n_total: usize },

    #[error("batch size must be positive")]
    ZeroBatchSize,

    #[error("warm fraction {0} outside the open interval (0, 1)")]
    WarmFractionOutOfRange(f64),

    #[error(
        "budget {n_total} with batch size {batch_size} leaves no optimization \
         batches after {warm_batches} warm-up batches"
    )]
    BudgetTooSmall {
        n_total: usize,
        batch_size: usize,
        warm_batches: usize,
    },

    #[error("budget over-consumed: {consumed} of {n_total}")]
    BudgetExceeded { consumed: usize, n_total: usize },

    #[error("top-k selection requires k >= 1")]
    ZeroTopK,

    #[error("top-k selection over an empty record list")]
    EmptyRecords,

    #[error("mask probabilities must satisfy 0 <= p_min <= p_max <= 1, got [{p_min}, {p_max}]")]
    InvalidMaskRange { p_min: f64, p_max: f64 },

    #[error(
        "mask constraint unsatisfiable: side length {side_length} caps the \
         perturbation probability at {cap}, but p_min is {p_min}"
    )]
    MaskConstraintUnsatisfiable {
        side_length: f64,
        cap: f64,
        p_min: f64,
    },

    #[error("rejection sampling exceeded {attempts} attempts drawing a mask probability")]
    MaskRejectionCap { attempts: usize },

    #[error("failed to draw a nonzero mask in {attempts} attempts (p = {p})")]
    MaskAllZero { attempts: usize, p: f64 },

    #[error("trust-region side length must be positive and finite, got {0}")]
    InvalidSideLength(f64),

    #[error("Sobol dimension {dim} exceeds the loaded direction-number table ({max} dimensions)")]
    SobolDimension { dim: usize, max: usize },

    #[error("malformed direction-number table: {0}")]
    DirectionTable(String),

    #[error("failed to read direction-number file {path}: {source}")]
    DirectionTableIo {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("adaptation config invalid: {0}")]
    InvalidAdaptation(String),

    #[error("k_regions must satisfy 1 <= k <= batch size, got k={k}, batch={batch_size}")]
    InvalidRegionCount { k: usize, batch_size: usize },

    #[error("zero-order radius must be positive, got {0}")]
    InvalidZeroOrderRadius(f64),

    #[error("restart requires a nonempty evaluation history")]
    EmptyHistory,

    #[error("objective spec invalid: {0}")]
    InvalidObjective(String),

    #[error("exhaustive scan too large: {nodes} grid nodes (limit {limit})")]
    ScanTooLarge { nodes: u128, limit: u128 },
}

/// Failures while evaluating a batch of candidates.
#[derive(Debug, Error)]
pub enum EvalError {
    #[error("candidate has dimension {got}, objective expects {want}")]
    DimensionMismatch { want: usize, got: usize },

    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

/// Errors raised by an optimizer run.
#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(
        "objective returned a non-finite reward ({value}) for evaluation {index}; \
         run aborted after {completed} evaluations"
    )]
    NonFiniteReward {
        index: usize,
        value: f64,
        completed: usize,
    },

    #[error("objective returned {got} rewards for a batch of {expected}")]
    RewardCountMismatch { expected: usize, got: usize },

    #[error("objective failed after {completed} evaluations: {source}")]
    ObjectiveFailed {
        completed: usize,
        #[source]
        source: EvalError,
    },
}

/// External evaluator protocol failures. Each maps to a distinct diagnostic.
#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("failed to spawn evaluator `{command}`: {source}")]
    Spawn {
        command: String,
        #[source]
        source: std::io::Error,
    },

    #[error("evaluator i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("handshake timed out after {0:?}")]
    HandshakeTimeout(std::time::Duration),

    #[error("evaluator answered hello with version {got:?}, expected {expected:?}")]
    VersionMismatch { expected: String, got: String },

    #[error("batch evaluation timed out after {0:?}")]
    BatchTimeout(std::time::Duration),

    #[error("evaluator closed its output stream (child exited?)")]
    ChildExited,

    #[error("unparseable evaluator message: {0}")]
    Parse(String),

    #[error("unexpected evaluator message: expected {expected}, got {got}")]
    UnexpectedMessage {
        expected: &'static str,
        got: String,
    },

    #[error("response id {got} does not match request id {expected}")]
    IdMismatch { expected: u64, got: u64 },

    #[error("evaluator returned {got} rewards for {expected} candidates")]
    LengthMismatch { expected: usize, got: usize },

    #[error("evaluator returned a non-finite reward at batch position {position}")]
    NonFiniteReward { position: usize },

    #[error("cannot evaluate an empty batch")]
    EmptyBatch,
}
