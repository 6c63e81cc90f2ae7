use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("singular section at {0:?}: inside the Dirac-string exclusion zone")]
    SingularSection([f64; 3]),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("exclusion zone: |x| = {r:e} < r_min = {r_min:e}")]
    ExclusionZone { r: f64, r_min: f64 },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    #[error("inconsistent system: {0}")]
    InconsistentSystem(String),
    #[error("chart boundary: {0}")]
    ChartBoundary(String),
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("grade error: {0}")]
    Grade(String),
    #[error("singular surface: {0}")]
    SingularSurface(String),
    /// `line` is 1-based; 0 when the problem is not tied to a line.
    #[error("{}{msg}", if *line > 0 { format!("line {line}: ") } else { String::new() })]
    Config { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
    #[error("at t = {t}: {source}")]
    Step { t: f64, source: Box<Error> },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Innermost error, with any step context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Step { source, .. } => source.root(),
            e => e,
        }
    }
}
