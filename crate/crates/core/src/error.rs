use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("non-integer exponent on sign-changing base at byte {offset}")]
    SignChangingBase { offset: usize },

    #[error("symbol is singular at k = {k}")]
    Singular { k: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("symbol is not Hermitian on the grid (imaginary residue {residue:e})")]
    NonHermitian { residue: f64 },

    #[error("operator `{0}` is not admissible")]
    NotAdmissible(String),

    #[error("unknown {kind} `{name}` (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error("no heteroclinic connection found: {0}")]
    NoConnection(String),

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    Divergence { iterations: usize, residual: f64 },

    #[error("singular linearization (smallest singular value estimate {estimate:e})")]
    SingularLinearization { estimate: f64 },

    #[error("inertia count breakdown: {0}")]
    InertiaBreakdown(String),

    #[error("unresolved eigenvalue counts: {0}")]
    UnresolvedCount(String),

    #[error("non-finite values in state at t = {t}")]
    NonFinite { t: f64 },

    #[error("time step violates the advective guard: {0}")]
    Cfl(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("series too short: {0}")]
    SeriesTooShort(String),

    #[error("invalid fitting window: {0}")]
    Window(String),

    #[error("missing data: {0}")]
    Missing(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
