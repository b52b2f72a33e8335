use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("structural mismatch: {0}")]
    Structure(String),

    #[error("{func} is undefined at {value}")]
    Domain { func: String, value: f64 },

    #[error("order budget exhausted at stage `{stage}`")]
    Budget { stage: String },

    #[error("singular volume form ({context})")]
    SingularVolume { context: String },

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("{form} is not a contact form at {point:?}")]
    ContactFailure { form: String, point: Vec<f64> },

    #[error("the sign of (ω²∧dω²)/(ω¹∧dω¹) changes across the sample set")]
    MixedEpsilon,

    #[error("1 ± C changes sign inside the sample region")]
    Branch,

    #[error("critical point of C: {0}")]
    CriticalPoint(String),

    #[error("B₁² + B₂² vanishes ({0}); the structure is case 3")]
    DegenerateB(f64),

    #[error("case-1 translation is degenerate (determinant {0})")]
    DegenerateTranslation(f64),

    #[error("samples straddle a tolerance band at points {0:?}")]
    AmbiguousCase(Vec<usize>),

    #[error("ω³ is not integrable (defect {0})")]
    NotIntegrable(f64),

    #[error("ODE step size underflow at z = {0}")]
    OdeStepFailure(f64),

    #[error("det h vanishes at {0:?}")]
    DegenerateH(Vec<f64>),

    #[error("wrong number of entries: {0}")]
    Arity(String),

    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// Attach a pipeline stage name to a budget error.
    pub fn at_stage(self, stage: &str) -> Error {
        match self {
            Error::Budget { .. } => Error::Budget {
                stage: stage.to_string(),
            },
            e => e,
        }
    }
}
