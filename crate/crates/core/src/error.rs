use alloc::string::String;

/// Errors raised by constructors and operations in this crate.
///
/// All domain checks are eager: invalid parameters are rejected when an
/// object is built, so downstream numerics can assume their invariants.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A scalar parameter is outside its admissible domain.
    #[error("invalid parameter {name}: {value} ({constraint})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// The circuit depth must be odd.
    #[error("depth L = {0} must be an odd positive integer")]
    EvenDepth(usize),

    /// Operands have incompatible dimensions.
    #[error("dimension mismatch: {left} vs {right} ({context})")]
    DimensionMismatch {
        left: usize,
        right: usize,
        context: &'static str,
    },

    /// A matrix expected to be unitary is not, within tolerance.
    #[error("matrix is not unitary: defect {defect:.3e} exceeds {tol:.3e}")]
    NotUnitary { defect: f64, tol: f64 },

    /// Graph construction rejected the edge list.
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// The graph is not connected.
    #[error("graph is disconnected")]
    Disconnected,

    /// A linear system was singular to working precision.
    #[error("singular linear system (pivot {pivot:.3e} at column {col})")]
    SingularSystem { col: usize, pivot: f64 },

    /// The recursion depth is outside the admissible amplification window.
    #[error("depth t = {t} gives 3^t arcsin(sqrt(p)) = {phase:.6} outside [pi/6, pi/2]")]
    WindowViolation { t: u32, phase: f64 },

    /// Random instance generation failed after the retry budget.
    #[error("degenerate draw persisted after {0} retries")]
    DegenerateDraw(u32),
}
