use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the numerical routines.
///
/// Variants split into two groups: input errors (bad arguments, violated
/// preconditions) and numerical errors (conditioning, certificates, internal
/// consistency). [`Error::is_input`] tells them apart.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid of {entries} entries exceeds the limit of {limit}")]
    SizeLimit { entries: usize, limit: usize },

    #[error("constant coefficient |a00| = {magnitude:e} does not exceed eps0 = {eps0:e}")]
    SingularReciprocal { eps0: f64, magnitude: f64 },

    #[error("evaluation point |w| = {modulus} lies outside the open unit disk")]
    Domain { modulus: f64 },

    #[error("reproducing kernel diverges at |w| = {modulus}")]
    DivergentKernel { modulus: f64 },

    #[error("coefficient at ({k}, {l}) is off the ({m}, {n}) diagonal")]
    PatternViolation { k: usize, l: usize, m: usize, n: usize },

    #[error("no rate function is defined for alpha = {alpha}")]
    UnsupportedRate { alpha: f64 },

    #[error("Gram factorization failed after regularization (condition estimate {cond_estimate:e})")]
    Conditioning { cond_estimate: f64 },

    #[error("orthogonality certificate {residual:e} exceeds tolerance {tol:e}")]
    Certificate { residual: f64, tol: f64 },

    #[error("requested range {requested} exceeds available {available}")]
    Range { requested: usize, available: usize },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("at n = {n}: {source}")]
    AtOrder {
        n: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Stable identifier printed by front-ends.
    pub fn name(&self) -> &'static str {
        match self {
            Error::SizeLimit { .. } => "SizeLimit",
            Error::SingularReciprocal { .. } => "SingularReciprocal",
            Error::Domain { .. } => "Domain",
            Error::DivergentKernel { .. } => "DivergentKernel",
            Error::PatternViolation { .. } => "PatternViolation",
            Error::UnsupportedRate { .. } => "UnsupportedRate",
            Error::Conditioning { .. } => "Conditioning",
            Error::Certificate { .. } => "Certificate",
            Error::Range { .. } => "Range",
            Error::DegenerateFit(_) => "DegenerateFit",
            Error::Input(_) => "Input",
            Error::NonFinite(_) => "NonFinite",
            Error::AtOrder { source, .. } => source.name(),
            Error::Internal(_) => "Internal",
        }
    }

    pub fn is_input(&self) -> bool {
        match self {
            Error::SizeLimit { .. }
            | Error::SingularReciprocal { .. }
            | Error::Domain { .. }
            | Error::DivergentKernel { .. }
            | Error::PatternViolation { .. }
            | Error::UnsupportedRate { .. }
            | Error::Range { .. }
            | Error::Input(_)
            | Error::NonFinite(_) => true,
            Error::AtOrder { source, .. } => source.is_input(),
            _ => false,
        }
    }

    pub(crate) fn at_order(self, n: usize) -> Self {
        Error::AtOrder {
            n,
            source: Box::new(self),
        }
    }
}
