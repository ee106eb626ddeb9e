//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised while constructing or mutating circuits.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("duplicate qubit operand in gate '{0}'")]
    DuplicateQubit(String),
    #[error("gate '{gate}' expects {expected} parameter(s), got {got}")]
    ParamCount { gate: String, expected: usize, got: usize },
    #[error("gate '{gate}' expects {expected} qubit operand(s), got {got}")]
    QubitCount { gate: String, expected: usize, got: usize },
    #[error("qubit index {index} out of range for {num_qubits}-qubit circuit")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("classical bit index {index} out of range for {num_clbits} bits")]
    ClbitOutOfRange { index: usize, num_clbits: usize },
    #[error("measure requires exactly one qubit and one classical bit")]
    MeasureShape,
}

/// QASM 2.0 parse errors with source position.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {col}: {message}")]
pub struct QasmError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl QasmError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        Self { line, col, message: message.into() }
    }
}

/// Errors from coupling-graph construction and queries.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum TopologyError {
    #[error("self-loop on qubit {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("edge endpoint {index} out of range for {num_qubits} qubits")]
    EdgeOutOfRange { index: usize, num_qubits: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("duplicate coordinates for qubits {0} and {1}")]
    DuplicateCoords(usize, usize),
    #[error("connectivity density needs at least 2 qubits")]
    TooSmallForDensity,
    #[error("density target {0} outside (0, 1]")]
    DensityOutOfRange(f64),
    #[error("density target {target} below current density {current}")]
    DensityBelowCurrent { target: f64, current: f64 },
    #[error("crop target {0} must be at least 1")]
    CropTooSmall(usize),
    #[error("crop target {target} exceeds generated qubit count {generated}")]
    CropTooLarge { target: usize, generated: usize },
    #[error("cannot crop to {0} qubits without disconnecting the graph")]
    CropUnreachable(usize),
    #[error("invalid edge list: {0}")]
    BadEdgeList(String),
}

/// Errors from layout, routing, decomposition, and the transpile pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MapError {
    #[error("circuit has {circuit} qubits but device only {device}")]
    CircuitTooLarge { circuit: usize, device: usize },
    #[error("layout does not cover logical qubit {0}")]
    IncompleteLayout(usize),
    #[error("layout maps to physical qubit {index} outside device of size {device}")]
    LayoutOutOfRange { index: usize, device: usize },
    #[error("layout is not injective: physical qubit {0} used twice")]
    LayoutNotInjective(usize),
    #[error("no rewrite path from gate '{0}' to the target basis")]
    NoRewritePath(String),
    #[error("unknown optimization level {0} (expected 0-3)")]
    BadOptLevel(u8),
    #[error("unknown pass setup {0} (expected 0-5)")]
    BadSetup(u8),
    #[error("unknown layout method '{0}'")]
    UnknownLayoutMethod(String),
    #[error("unknown routing method '{0}'")]
    UnknownRoutingMethod(String),
    #[error("routing stalled without progress")]
    RoutingStalled,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// Errors from the analytic noise estimators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoiseError {
    #[error("gate '{0}' is not in the device native set")]
    NonNativeGate(String),
    #[error("no duration defined for gate '{0}'")]
    MissingDuration(String),
    #[error("no depolarization probability defined for gate '{0}'")]
    MissingDepolarization(String),
    #[error("device T2 {t2} exceeds 2*T1 {t1} on qubit {qubit}")]
    BadRelaxationTimes { qubit: usize, t1: f64, t2: f64 },
    #[error("device has no coordinates for the proximity model")]
    MissingCoords,
    #[error("schedule does not match circuit")]
    ScheduleMismatch,
    #[error("unknown noise model '{0}'")]
    UnknownModel(String),
}

/// Errors from the compilation-quality metrics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("before-circuit has no gates")]
    EmptyBefore,
    #[error("before-circuit has zero depth")]
    ZeroDepthBefore,
    #[error("fidelity {0} outside (0, 1]")]
    BadFidelity(f64),
    #[error("ccx must be decomposed before metric evaluation")]
    CcxPresent,
    #[error("output cost is zero; cost improvement undefined")]
    ZeroOutputCost,
    #[error("relative depth undefined for zero baseline depth")]
    ZeroBaseline,
}

/// Errors from benchmark generation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BenchError {
    #[error("unsupported benchmark '{family}' size {size}")]
    UnsupportedSize { family: String, size: usize },
    #[error("benchmark family '{family}' requires a seed")]
    MissingSeed { family: String },
    #[error("unknown benchmark family '{0}'")]
    UnknownFamily(String),
    #[error("malformed benchmark id '{0}' (expected family:size[:seed[:layers]])")]
    BadId(String),
}
