//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("io error: {0}")]
    Io(String),
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: u64, n: usize },
    #[error("bad generator parameters: {0}")]
    BadParams(String),
}

#[derive(Debug, Error)]
pub enum EnumError {
    #[error("hop constraint must be at least 2, got {0}")]
    HopTooSmall(u32),
    #[error("incompatible configuration: {0}")]
    Incompatible(String),
}
