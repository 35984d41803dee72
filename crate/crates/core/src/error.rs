use thiserror::Error;

/// Errors raised anywhere in the core library.
///
/// Every variant maps onto a stable short code (see [`Error::code`]) so front
/// ends can report failures without parsing messages.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside the domain")]
    Domain { what: &'static str, value: f64 },

    /// Density evaluated exactly at a pole (x = 0 with fewer than 2 numerator df).
    #[error("density has a pole at x = {x}")]
    Pole { x: f64 },

    #[error("{routine} did not converge after {iterations} iterations (bracket [{lo}, {hi}])")]
    Convergence {
        routine: &'static str,
        lo: f64,
        hi: f64,
        iterations: usize,
    },

    #[error("quadrature did not reach tolerance: estimate {estimate}, error bound {error}")]
    Quadrature { estimate: f64, error: f64 },

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("observation {index} is not finite")]
    NonFinite { index: usize },

    #[error("group {index} is empty")]
    EmptyGroup { index: usize },

    /// Residual sum of squares is zero; the semi-distance is undefined.
    #[error("residual sum of squares is zero: every group/cell is constant")]
    Degenerate,

    #[error("test {test} cannot be run on a {layout} layout")]
    LayoutMismatch { test: &'static str, layout: &'static str },

    #[error("significance level {0} is not in (0, 1)")]
    InvalidAlpha(f64),

    #[error("the mean test requires a finite mu0")]
    MissingMu0,

    #[error("state does not satisfy the null hypothesis: {0}")]
    NotUnderNull(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "E_DOMAIN",
            Error::Pole { .. } => "E_POLE",
            Error::Convergence { .. } => "E_CONVERGENCE",
            Error::Quadrature { .. } => "E_QUADRATURE",
            Error::InvalidLayout(_) => "E_LAYOUT",
            Error::NonFinite { .. } => "E_NONFINITE",
            Error::EmptyGroup { .. } => "E_EMPTY_GROUP",
            Error::Degenerate => "E_DEGENERATE",
            Error::LayoutMismatch { .. } => "E_LAYOUT_MISMATCH",
            Error::InvalidAlpha(_) => "E_ALPHA",
            Error::MissingMu0 => "E_MU0",
            Error::NotUnderNull(_) => "E_NOT_NULL",
            Error::Dimension { .. } => "E_DIMENSION",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}
