use thiserror::Error;

/// Errors raised by the geometric and numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A point does not lie on the upper sheet of the hyperboloid.
    #[error("point {0:?} is not on the hyperboloid (Minkowski norm off by {1:e})")]
    OffHyperboloid([f64; 3], f64),

    /// A matrix does not preserve the Minkowski form.
    #[error("matrix is not an orientation-preserving isometry (form defect {0:e})")]
    NotIsometry(f64),

    /// Side lengths that cannot bound the requested polygon.
    #[error("invalid side lengths: {0}")]
    InvalidSides(String),

    /// A tuple that is not the side-length tuple of any cyclic polygon.
    #[error("side lengths {0:?} do not bound a cyclic polygon")]
    NotCyclic(Vec<f64>),

    /// A disk radius outside the permitted range.
    #[error("disk radius {radius} out of range (must lie in [0, {max}])")]
    RadiusOutOfRange { radius: f64, max: f64 },

    /// Two segments that must have equal length do not.
    #[error("segment lengths differ: {0} vs {1}")]
    LengthMismatch(f64, f64),

    /// A root finder could not bracket a sign change.
    #[error("root bracketing failed: {0}")]
    Bracket(String),

    /// Degenerate or coincident input points.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A parameter outside its documented domain.
    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    /// A malformed combinatorial structure (tree, pairing, complex).
    #[error("malformed structure: {0}")]
    Malformed(String),

    /// The lifted region was too small to contain a needed structure.
    #[error("insufficient clip radius: {0}")]
    Peripheral(String),

    /// Sampling did not produce an admissible point.
    #[error("sampling failed: {0}")]
    Sampling(String),

    /// JSON input or output failure.
    #[error("json: {0}")]
    Json(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
