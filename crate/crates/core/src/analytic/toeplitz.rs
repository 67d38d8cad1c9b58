//! Exponential of a lower-triangular Toeplitz matrix.

use alloc::vec::Vec;

use crate::math::{exp, ln};
use crate::{Error, Result};

/// Default cap on the Toeplitz dimension.
pub const DIM_CAP: usize = 64;

/// Lower-triangular Toeplitz matrix of size `dim` whose `k`-th subdiagonal
/// holds `entries[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzExpProblem {
    pub dim: usize,
    pub entries: Vec<f64>,
}

impl ToeplitzExpProblem {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        let dim = entries.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("Toeplitz dimension must be at least 1"));
        }
        if dim > DIM_CAP {
            return Err(Error::DimensionCap { dim, cap: DIM_CAP });
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidArgument("Toeplitz entries must be finite"));
        }
        Ok(ToeplitzExpProblem { dim, entries })
    }

    /// First column of `exp(N)` where `N` is the strictly lower part. The
    /// coefficients are those of `exp(e1 z + e2 z^2 + ...)` as a power
    /// series, truncated at degree `dim - 1`.
    pub fn nilpotent_exp_column(&self) -> Vec<f64> {
        let e = &self.entries;
        let mut y = alloc::vec![0.0; self.dim];
        y[0] = 1.0;
        for m in 1..self.dim {
            let mut s = 0.0;
            for k in 1..=m {
                s += k as f64 * e[k] * y[m - k];
            }
            y[m] = s / m as f64;
        }
        y
    }
}

/// Natural log of the induced 1-norm of `exp(E)`.
pub fn exp_toeplitz_log_norm1(p: &ToeplitzExpProblem) -> f64 {
    let col: f64 = p.nilpotent_exp_column().iter().map(|v| v.abs()).sum();
    p.entries[0] + ln(col)
}

/// Induced 1-norm (largest absolute column sum) of `exp(E)`. For a lower
/// triangular Toeplitz matrix the first column dominates.
pub fn exp_toeplitz_norm1(p: &ToeplitzExpProblem) -> f64 {
    exp(exp_toeplitz_log_norm1(p))
}
