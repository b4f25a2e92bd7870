use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("support mismatch: {left} vs {right}")]
    SupportMismatch { left: usize, right: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("unknown axis `{0}`")]
    UnknownAxis(String),

    #[error("axis `{0}` appears in more than one argument")]
    OverlappingAxes(String),

    #[error("{value} is outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("sequence length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("symbol {symbol} outside alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: usize, alphabet: usize },

    #[error("infeasible constraints: {0}")]
    Infeasible(String),

    #[error("unsupported problem: {0}")]
    Unsupported(String),

    #[error("codebook needs {requested:.3e} codewords, cap is {cap}")]
    CodebookTooLarge { requested: f64, cap: usize },

    #[error("every codeword has zero likelihood for the observed sequence")]
    EncoderDegenerate,

    #[error("enumeration needs {required:.3e} cells, budget is {budget:.3e}")]
    BudgetExceeded { required: f64, budget: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("assumption violated: {0}")]
    Assumption(String),
}

impl Error {
    /// Stable variant name for machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidDistribution(_) => "invalid_distribution",
            Error::SupportMismatch { .. } => "support_mismatch",
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::UnknownAxis(_) => "unknown_axis",
            Error::OverlappingAxes(_) => "overlapping_axes",
            Error::Domain { .. } => "domain",
            Error::LengthMismatch(..) => "length_mismatch",
            Error::SymbolOutOfRange { .. } => "symbol_out_of_range",
            Error::Infeasible(_) => "infeasible",
            Error::Unsupported(_) => "unsupported",
            Error::CodebookTooLarge { .. } => "codebook_too_large",
            Error::EncoderDegenerate => "encoder_degenerate",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::Config(_) => "config",
            Error::Assumption(_) => "assumption",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
