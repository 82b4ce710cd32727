use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("node {0} is not in the graph")]
    UnknownNode(u64),
    #[error("objective undefined: {0}")]
    UndefinedObjective(&'static str),
    #[error("seed node {0} has no incident edges")]
    DegenerateSeed(u64),
    #[error("community is disconnected: node {0} cannot be reached from the seeds")]
    DisconnectedCommunity(u64),
    #[error("enumeration scope has {free} free nodes, more than the limit of {limit}")]
    ScopeTooLarge { free: usize, limit: usize },
    #[error("cached {quantity} drifted: cached {cached}, recomputed {recomputed}")]
    CacheDrift {
        quantity: &'static str,
        cached: f64,
        recomputed: f64,
    },
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
