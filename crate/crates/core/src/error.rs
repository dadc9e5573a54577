use thiserror::Error;

/// Errors from the kinematic model.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("joint angle {joint} = {value} rad outside limits [{min}, {max}]")]
    JointLimit {
        joint: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("target unreachable: {distance_to_workspace:.6} m outside workspace")]
    Unreachable { distance_to_workspace: f64 },
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
}

/// Errors from file ingestion and task/grasp configuration.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{row}: column '{column}': {message}")]
    Parse {
        path: String,
        row: usize,
        column: String,
        message: String,
    },
    #[error("{path}: missing column '{column}'")]
    MissingColumn { path: String, column: String },
    #[error("config error: {0}")]
    Config(String),
    #[error("unknown grasp '{0}'")]
    UnknownGrasp(String),
    #[error("contacts overlap: pressure circles {a} and {b} intersect (separation {separation:.4} m < {required:.4} m)")]
    OverlappingContacts {
        a: usize,
        b: usize,
        separation: f64,
        required: f64,
    },
}

/// Errors from the grasp optimizer and downstream analyses.
#[derive(Debug, Error)]
pub enum SolveError {
    #[error("invalid grasp configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("sensitivity trial exceeded {0} resamples without a non-overlapping configuration")]
    ResampleCap(usize),
    #[error("{0}")]
    Domain(String),
}
