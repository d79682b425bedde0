//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by the numerical kernels and the experiment harness.
#[derive(Error, Debug)]
pub enum Error {
    #[error("shape mismatch in {op}: left is {left_rows}x{left_cols}, right is {right_rows}x{right_cols}")]
    ShapeMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("{op}: length {len} does not match expected {expected}")]
    LengthMismatch {
        op: &'static str,
        len: usize,
        expected: usize,
    },

    #[error(
        "{op}: dimensions {rows}x{cols} are not divisible into {block_rows}x{block_cols} blocks"
    )]
    NonDivisibleBlocks {
        op: &'static str,
        rows: usize,
        cols: usize,
        block_rows: usize,
        block_cols: usize,
    },

    #[error("{op}: input is all-zero (degenerate)")]
    DegenerateInput { op: &'static str },

    #[error("hadamard_matrix: order {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error(
        "dft_codebook: need at least as many columns as rows, got {rows} rows and {cols} columns"
    )]
    CodebookTooSmall { rows: usize, cols: usize },

    #[error("Fisher information matrix is singular or ill-conditioned (condition estimate {condition:.3e})")]
    SingularFim { condition: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
