use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular (determinant 0)")]
    SingularMatrix,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("generators do not generate the group: reached {reachable} of {order} elements")]
    NotGenerating { reachable: u64, order: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("instance too large: {size} exceeds cap {cap}")]
    InstanceTooLarge { size: String, cap: u64 },

    #[error("diameter {k} is not attained by the family for degree {d}")]
    UnattainableDiameter { d: u64, k: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn too_large(size: impl ToString, cap: u64) -> Self {
        Error::InstanceTooLarge {
            size: size.to_string(),
            cap,
        }
    }
}
