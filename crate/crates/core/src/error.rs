use thiserror::Error;

/// Errors raised by the modelling and solving pipeline.
#[derive(Debug, Error)]
pub enum FeederError {
    #[error("instance document is malformed: {0}")]
    Schema(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("invalid route: {0}")]
    InvalidRoute(String),

    #[error("node {node} is not served on leg {leg} of the route")]
    NodeNotOnLeg { leg: usize, node: usize },

    #[error("route enumeration exceeded the ceiling of {ceiling} routes")]
    RouteCeilingExceeded { ceiling: usize },

    #[error("missing alternate-transport entry for node `{0}`")]
    MissingAltTransport(String),

    #[error("LP error: {0}")]
    Lp(#[from] crate::lp::LpError),

    #[error("no certified optimum ({0})")]
    NotOptimal(String),

    #[error("instance generation failed: {0}")]
    Generation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = FeederError> = std::result::Result<T, E>;

impl From<serde_json::Error> for FeederError {
    fn from(err: serde_json::Error) -> Self {
        FeederError::Schema(err.to_string())
    }
}
