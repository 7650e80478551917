use std::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A qubit index is outside the state's register layout.
    QubitOutOfRange { qubit: usize, total: usize },
    /// A gate names the same qubit more than once (target vs control,
    /// or overlapping pattern controls).
    DuplicateQubit { qubit: usize },
    /// The layout does not declare the requested register.
    MissingRegister { name: &'static str },
    /// Register widths would exceed the qubit capacity.
    CapacityExceeded { requested: usize, capacity: usize },
    /// A register width is zero or otherwise unusable.
    InvalidWidth { width: usize },
    /// The same register role was declared twice.
    DuplicateRegister { name: &'static str },
    /// The overflow qubit must sit immediately above the value register.
    OverflowNotAdjacent,
    /// An amplitude vector has the wrong length for its register count.
    LengthMismatch { expected: usize, actual: usize },
    /// An amplitude vector is not normalized.
    NotNormalized { norm: f64 },
    /// An amplitude vector has no nonzero entry.
    EmptySupport,
    /// An integer does not fit the signed range of the given width.
    ValueOutOfRange { value: i64, width: usize },
    /// A basis-state index does not fit the given width.
    IndexOutOfRange { index: u64, width: usize },
    /// Sign extension was asked to shrink a register.
    NarrowingExtension { from: usize, to: usize },
    /// A shift does not fit the signed range addressable by the block.
    ShiftOutOfRange { shift: i64, width: usize },
    /// An oracle table does not cover the full input domain.
    TableSizeMismatch { expected: usize, actual: usize },
    /// An oracle output does not fit the value register.
    TableValueOutOfRange { input: u64, value: i64, width: usize },
    /// A circuit touches qubits outside the register it may act on.
    ForbiddenQubit { qubit: usize },
    /// The parameter vector does not match the ansatz shape.
    ParamCountMismatch { expected: usize, actual: usize },
    /// An ansatz angle is NaN or infinite.
    NonFiniteParameter { index: usize },
    /// The ansatz style is restricted to small registers.
    BlockTooLarge { qubits: usize, limit: usize },
    /// A distinct-negative threshold below 1 can never classify a window.
    InvalidThreshold { threshold: usize },
    /// Zero shots or an otherwise empty measurement request.
    EmptyMeasurement,
    /// The outer search loop exceeded its iteration guard.
    IterationLimit { limit: usize },
    /// A graph edge references a vertex that does not exist.
    EdgeOutOfRange { edge: (usize, usize), vertices: usize },
    /// A graph edge connects a vertex to itself.
    SelfLoop { vertex: usize },
    /// The same edge appears twice.
    DuplicateEdge { edge: (usize, usize) },
    /// A graph has no vertices.
    EmptyGraph,
    /// A color count outside [1, vertices] or too large to encode.
    InvalidColorCount { colors: usize },
    /// Brute-force enumeration would be too large to run.
    EnumerationTooLarge { assignments: u64, limit: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::QubitOutOfRange { qubit, total } => {
                write!(f, "qubit {} out of range for {}-qubit state", qubit, total)
            }
            Error::DuplicateQubit { qubit } => {
                write!(f, "qubit {} used more than once in a single gate", qubit)
            }
            Error::MissingRegister { name } => {
                write!(f, "layout declares no {} register", name)
            }
            Error::CapacityExceeded { requested, capacity } => {
                write!(f, "{} qubits requested, capacity is {}", requested, capacity)
            }
            Error::InvalidWidth { width } => write!(f, "invalid register width {}", width),
            Error::DuplicateRegister { name } => {
                write!(f, "register {} declared more than once", name)
            }
            Error::OverflowNotAdjacent => {
                write!(f, "overflow qubit must sit immediately above the value register")
            }
            Error::LengthMismatch { expected, actual } => {
                write!(f, "expected {} amplitudes, got {}", expected, actual)
            }
            Error::NotNormalized { norm } => {
                write!(f, "state norm {} differs from 1", norm)
            }
            Error::EmptySupport => write!(f, "amplitude vector has no nonzero entry"),
            Error::ValueOutOfRange { value, width } => {
                write!(f, "value {} outside signed range of width {}", value, width)
            }
            Error::IndexOutOfRange { index, width } => {
                write!(f, "index {} outside basis range of width {}", index, width)
            }
            Error::NarrowingExtension { from, to } => {
                write!(f, "cannot sign-extend width {} down to {}", from, to)
            }
            Error::ShiftOutOfRange { shift, width } => {
                write!(f, "shift {} not addressable by a width-{} block", shift, width)
            }
            Error::TableSizeMismatch { expected, actual } => {
                write!(f, "oracle table has {} entries, input register needs {}", actual, expected)
            }
            Error::TableValueOutOfRange { input, value, width } => {
                write!(
                    f,
                    "oracle value {} at input {} outside signed range of width {}",
                    value, input, width
                )
            }
            Error::ForbiddenQubit { qubit } => {
                write!(f, "circuit touches qubit {} outside its permitted register", qubit)
            }
            Error::ParamCountMismatch { expected, actual } => {
                write!(f, "ansatz expects {} parameters, got {}", expected, actual)
            }
            Error::NonFiniteParameter { index } => {
                write!(f, "ansatz parameter {} is not finite", index)
            }
            Error::BlockTooLarge { qubits, limit } => {
                write!(f, "ansatz style limited to {} qubits, got {}", limit, qubits)
            }
            Error::InvalidThreshold { threshold } => {
                write!(f, "distinct-negative threshold {} must be at least 1", threshold)
            }
            Error::EmptyMeasurement => write!(f, "measurement requested with no shots or registers"),
            Error::IterationLimit { limit } => {
                write!(f, "search exceeded {} outer iterations", limit)
            }
            Error::EdgeOutOfRange { edge, vertices } => {
                write!(f, "edge ({}, {}) references a vertex >= {}", edge.0, edge.1, vertices)
            }
            Error::SelfLoop { vertex } => write!(f, "self-loop at vertex {}", vertex),
            Error::DuplicateEdge { edge } => {
                write!(f, "edge ({}, {}) appears more than once", edge.0, edge.1)
            }
            Error::EmptyGraph => write!(f, "graph has no vertices"),
            Error::InvalidColorCount { colors } => write!(f, "invalid color count {}", colors),
            Error::EnumerationTooLarge { assignments, limit } => {
                write!(f, "{} assignments exceed the enumeration limit {}", assignments, limit)
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
