use core::fmt;

/// Errors reported by the kernels in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    InvalidArgument(&'static str),
    /// The input geometry has no valid triangulation (too few points or all
    /// collinear).
    DegenerateInput(&'static str),
    /// No complete triangle lies inside the search disk, even after the
    /// allowed number of radius doublings.
    NotFound { radius: f64 },
    /// A series or quadrature failed to reach its tolerance.
    NonConvergence {
        what: &'static str,
        value: f64,
        error: f64,
    },
    /// The Toeplitz dimension needed by the coverage bound exceeds the cap.
    DimensionCap { dim: usize, cap: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::DegenerateInput(msg) => write!(f, "degenerate input: {msg}"),
            Error::NotFound { radius } => {
                write!(f, "no complete triangle within search radius {radius} m")
            }
            Error::NonConvergence { what, value, error } => write!(
                f,
                "{what} did not converge (estimate {value:e}, error {error:e})"
            ),
            Error::DimensionCap { dim, cap } => {
                write!(f, "matrix dimension {dim} exceeds the cap {cap}")
            }
        }
    }
}

impl core::error::Error for Error {}
