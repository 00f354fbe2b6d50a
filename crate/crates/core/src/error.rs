use crate::circuit::WireRef;

/// Errors raised while building or evaluating a [`Circuit`](crate::Circuit).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CircuitError {
    /// An operand points at an input, or gate, that does not exist yet.
    #[error("operand {wire} is not defined at gate position {position}")]
    InvalidReference { wire: WireRef, position: usize },
    #[error("output significance {significance} must exceed the previous output's {previous}")]
    NonMonotoneSignificance { previous: u64, significance: u64 },
    #[error("assignment has {actual} bits but the circuit has {expected} inputs")]
    LengthMismatch { expected: usize, actual: usize },
}

/// Errors raised by the generators.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenerateError {
    #[error("significance {value} exceeds the configured limit {limit}")]
    SignificanceLimit { value: u64, limit: u64 },
    #[error("karatsuba threshold must be at least 2, got {0}")]
    InvalidThreshold(usize),
    #[error("operand width must be at least 1")]
    ZeroWidth,
    #[error("no significance layer left to reduce")]
    EmptyState,
}
